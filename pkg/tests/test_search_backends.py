import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import connected, ztwo_groupoids
from gpdz2 import search
from gpdz2.equivariant import equivariant_problem, nabla
from gpdz2.errors import BudgetExceeded
from gpdz2.groupoid import coproduct
from gpdz2.universe import build_universe

BACKENDS = [search.python_search] + ([search.compiled_search] if search.compiled_search else [])

needs_compiled = pytest.mark.skipif(search.compiled_search is None, reason="extension not built")


def test_compiled_backend_is_active():
    # the extension is built by the editable install
    assert search.BACKEND == "compiled"


@needs_compiled
@given(ztwo_groupoids(max_morphisms=9), ztwo_groupoids(max_morphisms=9))
def test_equivariant_parity(X, A):
    p = equivariant_problem(X, A)
    assert search.python_search(p) == search.compiled_search(p)


small = st.lists(connected(2, 2), min_size=1, max_size=2).map(
    lambda cs: cs[0] if len(cs) == 1 else coproduct(*cs))


@needs_compiled
@given(small, small)
def test_plain_parity(G, H):
    p = search.build_problem(G, H)
    assert search.python_search(p) == search.compiled_search(p)


@given(small.filter(lambda G: G.n_mor <= 6), small.filter(lambda G: G.n_mor <= 8))
def test_count_matches_brute_force(G, H):
    count = search.run(search.build_problem(G, H), count_only=True)[1]
    assert count == len(oracles.functors(oracles.raw(G), oracles.raw(H)))


@pytest.mark.parametrize("fn", BACKENDS)
def test_solutions_are_sorted(fn):
    U = build_universe(2).U
    sols, count, _ = fn(equivariant_problem(nabla(), U))
    assert count == len(sols) > 1 and sols == sorted(sols)


@pytest.mark.parametrize("fn", BACKENDS)
def test_limit_and_count_only(fn):
    p = equivariant_problem(nabla(), build_universe(2).U)
    sols, count, _ = fn(p)
    first, n1, _ = fn(p, 1)
    assert first == sols[:1] and n1 == 1
    none, n, _ = fn(p, -1, 10**7, True)
    assert none == [] and n == count


@pytest.mark.parametrize("fn", BACKENDS)
def test_budget(fn):
    p = equivariant_problem(build_universe(2).U, build_universe(2).U)
    with pytest.raises(BudgetExceeded) as e:
        fn(p, -1, 5)
    assert e.value.code == "BUDGET_EXCEEDED"


def _backend_in_subprocess(env):
    out = subprocess.run([sys.executable, "-c", "from gpdz2 import search; print(search.BACKEND)"],
                         capture_output=True, text=True, env={**os.environ, **env})
    return out.stdout.strip()


def test_pure_python_switch():
    assert _backend_in_subprocess({"GPDZ2_PURE_PYTHON": "1"}) == "python"
    assert _backend_in_subprocess({"GPDZ2_PURE_PYTHON": "0"}) == search.BACKEND
