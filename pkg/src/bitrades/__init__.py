"""Latin bitrades: validation, tau representations, group constructions and autotopisms."""

__version__ = "0.1.0"
