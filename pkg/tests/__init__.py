"""Tests for rootlab package."""
