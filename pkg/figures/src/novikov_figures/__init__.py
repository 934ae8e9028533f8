"""Figure rendering for novikov2c experiment outputs."""

from .render import FigureSpec, read_table, render

__all__ = ["FigureSpec", "read_table", "render"]
__version__ = "0.1.0"
