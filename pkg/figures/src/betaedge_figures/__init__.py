"""Read-only figure rendering for betaedge CSV artifacts."""

from .csvio import MetadataMismatch, MissingInput, read_artifact
from .figures import FIGURES, FigureSpec, render

__version__ = "0.1.0"
__all__ = ["FIGURES", "FigureSpec", "MetadataMismatch", "MissingInput",
           "read_artifact", "render"]
