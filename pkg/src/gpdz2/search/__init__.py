"""Functor-search kernel with a compiled backend and a pure-Python fallback.

The compiled extension is used when it imports; set ``GPDZ2_PURE_PYTHON=1``
to force the fallback.
"""
import os
import sys

from . import _search_py
from .problem import Problem, build_problem

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

_compiled = None
if os.environ.get("GPDZ2_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _search as _compiled
    except ImportError:  # extension not built
        _compiled = None

python_search = _search_py.search
compiled_search = _compiled.search if _compiled is not None else None

if _compiled is not None:
    search = _compiled.search
    BACKEND = _compiled.BACKEND
else:
    search = _search_py.search
    BACKEND = _search_py.BACKEND

__all__ = ["Problem", "build_problem", "search", "run", "BACKEND",
           "python_search", "compiled_search"]


def run(problem, limit=-1, budget=None, count_only=False):
    """Dispatch to the active backend (looked up at call time)."""
    from ..config import get_budget

    if budget is None:
        budget = get_budget().search_nodes
    return search(problem, limit, budget, count_only)
