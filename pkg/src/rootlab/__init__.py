"""rootlab - high-order multipoint root finders, benchmarks and order certification."""

__version__ = "0.1.0"
