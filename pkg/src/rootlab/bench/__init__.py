"""Benchmark tables, the cell runner and report renderers."""
