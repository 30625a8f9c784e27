from .layout import Layout, force_layout
from .seriation import SERIATION_METHODS, Seriation, seriate
from .views import ENCODINGS, RenderDocument, level_color, render_view

__all__ = [
    "ENCODINGS",
    "SERIATION_METHODS",
    "Layout",
    "RenderDocument",
    "Seriation",
    "force_layout",
    "level_color",
    "render_view",
    "seriate",
]
