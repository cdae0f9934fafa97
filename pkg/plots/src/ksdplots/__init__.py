"""Render level/power/runtime figures from ksdgof experiment CSVs.

This package only consumes the public CSV contract of the experiment
harness; it never imports the numerics package.
"""

from .render import EXPECTED_HEADER, FigureSpec, SchemaError, build_figure, render

__version__ = "0.1.0"

__all__ = ["EXPECTED_HEADER", "FigureSpec", "SchemaError", "build_figure", "render"]
