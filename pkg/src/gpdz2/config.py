"""Search budgets. Defaults can be overridden through environment variables."""
import os
from dataclasses import dataclass, replace

from .errors import BudgetExceeded


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return int(float(raw))


@dataclass(frozen=True)
class Budget:
    # backtracking nodes per single search call
    search_nodes: int = 10**7
    # lifting squares examined per generator
    squares: int = 10**6
    # morphisms of any materialized groupoid (composition is a dense table)
    morphisms: int = 8000

    def with_(self, **kw):
        return replace(self, **kw)


def default_budget():
    return Budget(
        search_nodes=_env_int("GPDZ2_SEARCH_BUDGET", Budget.search_nodes),
        squares=_env_int("GPDZ2_SQUARE_BUDGET", Budget.squares),
        morphisms=_env_int("GPDZ2_MORPHISM_BUDGET", Budget.morphisms),
    )


_current = [None]


def get_budget():
    if _current[0] is None:
        _current[0] = default_budget()
    return _current[0]


def set_budget(budget):
    """Install ``budget`` process-wide; returns the previous one."""
    prev = get_budget()
    _current[0] = budget
    return prev


def check_morphisms(n, what="groupoid"):
    cap = get_budget().morphisms
    if n > cap:
        raise BudgetExceeded(f"{what} would have {n} morphisms (cap {cap})")
