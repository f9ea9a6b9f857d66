"""Grid-based spatial knowledge graphs of street networks."""

__version__ = "0.1.0"
