"""Hypothesis strategies for small groupoids and Z2-groupoids."""
from hypothesis import strategies as st

from gpdz2.equivariant import check_I, free_S, nabla, one, trivial_action, ztwo_coproduct, ztwo_product
from gpdz2.groupoid import coproduct, group_groupoid, indiscrete, product


@st.composite
def connected(draw, max_objects=3, max_order=3):
    k = draw(st.integers(1, max_objects))
    n = draw(st.integers(1, max_order))
    return product(indiscrete(list(range(k))), group_groupoid(n)).groupoid


@st.composite
def groupoids(draw, max_components=2):
    comps = draw(st.lists(connected(), min_size=1, max_size=max_components))
    g = comps[0]
    for c in comps[1:]:
        g = coproduct(g, c)
    return g


basic = st.sampled_from([one, check_I, nabla]).map(lambda f: f())


def _small(X, cap):
    return X.carrier.n_mor <= cap


@st.composite
def ztwo_groupoids(draw, max_morphisms=20):
    atom = st.one_of(
        basic,
        connected(2, 2).map(trivial_action),
        connected(2, 2).map(free_S),
    )
    X = draw(atom)
    how = draw(st.sampled_from(["atom", "sum", "product"]))
    if how == "sum":
        X = ztwo_coproduct(X, draw(atom))
    elif how == "product":
        Y = draw(basic)
        if X.carrier.n_mor * Y.carrier.n_mor <= max_morphisms:
            X = ztwo_product(X, Y).object
    if X.carrier.n_mor > max_morphisms:
        X = draw(basic)
    return X
