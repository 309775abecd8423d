"""Motion planners and topological complexity bounds for real projective spaces."""

__version__ = "0.1.0"
