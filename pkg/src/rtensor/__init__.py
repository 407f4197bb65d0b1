"""Colored-graph combinatorics and sampling for random tensor invariants."""

__version__ = "0.1.0"

from .graph_core import ColoredGraph, enumerate_invariants, iso_key, load_catalog  # noqa: E402
from .jackets import degree  # noqa: E402
from .gaussian import exact_moment, omega_r  # noqa: E402
from .melonic import is_melonic  # noqa: E402

__all__ = ["ColoredGraph", "enumerate_invariants", "iso_key", "load_catalog", "degree",
           "exact_moment", "omega_r", "is_melonic", "__version__"]
