"""Figure rendering for the depref laboratory's CSV outputs."""
__version__ = "0.1.0"

from .data import SchemaError, load_csv
from .render import KINDS, PlotSpec, RenderResult, render
