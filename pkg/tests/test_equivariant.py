import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

import corpus
import oracles
from strategies import groupoids, ztwo_groupoids
from gpdz2.equivariant import (
    EquivariantFunctor, check_I, count_equivariant_maps, enumerate_equivariant_maps,
    fixed_points, free_S, full_sub, i_prime, involution_as_map, make_ztwo, nabla, one, orbits, s_i,
    standard, STANDARD_NAMES, to_one, trivial_action, ztwo_coproduct, ztwo_product, ztwo_pullback,
)
from gpdz2.errors import UnknownName, ValidationError
from gpdz2.groupoid import Functor, interval, is_injective_on_objects, terminal


def raw_involution(X):
    return ({X.objects[i]: X.objects[j] for i, j in enumerate(X.aobj)},
            {X.morphisms[i]: X.morphisms[j] for i, j in enumerate(X.amor)})


def oracle_count(X, A):
    return len(oracles.functors(oracles.raw(X.carrier), oracles.raw(A.carrier),
                                raw_involution(X), raw_involution(A)))


class TestStandardObjects:
    def test_terminal(self):
        o = one()
        assert (o.carrier.n_obj, o.carrier.n_mor) == (1, 1)
        assert fixed_points(o) == [0]

    def test_check_I_swaps_and_inverts(self):
        X = check_I()
        assert X.act(0) == 1 and X.act_mor("phi") == "phi-"
        assert fixed_points(X) == []

    def test_constant_is_not_an_involution(self):
        I = interval()
        const = Functor(I, I, np.zeros(2), np.zeros(4))
        with pytest.raises(ValidationError) as e:
            make_ztwo(I, const)
        assert e.value.code == "NOT_INVOLUTIVE"

    def test_nabla(self):
        X = nabla()
        assert X.act_mor("psi") == "psiphi"
        assert fixed_points(X) == [2]

    def test_s_one(self):
        X = standard("s_one")
        assert X.carrier.n_obj == 2 and X.carrier.n_mor == 2
        assert fixed_points(X) == []
        assert X == free_S(terminal())

    def test_s_interval(self):
        X = free_S(interval())
        assert (X.carrier.n_obj, X.carrier.n_mor) == (4, 8)
        g = oracles.golden()
        assert (g["S(I) objects"], g["S(I) morphisms"]) == (4, 8)

    def test_s_i_injective_on_objects(self):
        assert is_injective_on_objects(s_i().functor)

    def test_i_prime(self):
        f = i_prime()
        assert f.source == check_I() and f.target == nabla()

    def test_unknown_name(self):
        with pytest.raises(UnknownName):
            standard("nope")

    @pytest.mark.parametrize("name", STANDARD_NAMES)
    def test_every_name_builds(self, name):
        assert standard(name) is not None


class TestOrbits:
    def test_nabla(self):
        os_ = orbits(nabla())
        assert [o.elements for o in os_] == [(0, 1), (2,)]
        assert [o.fixed for o in os_] == [False, True]

    def test_subset_must_be_closed(self):
        with pytest.raises(ValidationError):
            orbits(nabla(), {0})


class TestMaps:
    def test_no_maps_from_point_to_check_I(self):
        assert enumerate_equivariant_maps(one(), check_I()) == []
        assert oracles.golden()["maps 1->checkI"] == 0

    def test_endomaps_of_check_I(self):
        fs = enumerate_equivariant_maps(check_I(), check_I())
        assert len(fs) == 2 == oracles.golden()["maps checkI->checkI"]
        keys = {f.key() for f in fs}
        assert EquivariantFunctor.identity(check_I()).key() in keys
        assert involution_as_map(check_I()).key() in keys

    @pytest.mark.parametrize("name", ["one", "check_I", "nabla", "S_I", "BZ2"])
    def test_one_map_to_terminal(self, name):
        assert count_equivariant_maps(corpus.objects()[name], one()) == 1

    def test_non_equivariant_rejected(self):
        X = check_I()
        I = X.carrier
        with pytest.raises(ValidationError) as e:
            EquivariantFunctor(X, X, Functor(I, I, np.zeros(2), np.zeros(4)))
        assert e.value.code == "NOT_EQUIVARIANT"

    def test_full_sub_of_fixed_point(self):
        S, inc = full_sub(nabla(), [2])
        assert S.carrier.n_obj == 1 and fixed_points(S) == [2]

    def test_pullback_commutes(self):
        f = to_one(nabla())
        pb = ztwo_pullback(f, f)
        assert pb.first.then(f).key() == pb.second.then(f).key()
        assert pb.object.carrier.n_obj == 9


@given(ztwo_groupoids())
def test_involution_is_involutive(X):
    assert (X.aobj[X.aobj] == np.arange(X.carrier.n_obj)).all()
    assert (X.amor[X.amor] == np.arange(X.carrier.n_mor)).all()


@given(ztwo_groupoids())
def test_orbits_partition_objects(X):
    os_ = orbits(X)
    elems = [e for o in os_ for e in o.elements]
    assert sorted(map(repr, elems)) == sorted(map(repr, X.objects))
    for o in os_:
        assert o.fixed == (X.act(o.representative) == o.representative)


@given(ztwo_groupoids(max_morphisms=6), ztwo_groupoids(max_morphisms=9))
def test_map_count_matches_brute_force(X, A):
    assert count_equivariant_maps(X, A) == oracle_count(X, A)


@given(ztwo_groupoids(max_morphisms=9), ztwo_groupoids(max_morphisms=12))
def test_enumerated_maps_are_equivariant_functors(X, A):
    fs = enumerate_equivariant_maps(X, A, limit=20)
    for f in fs:
        EquivariantFunctor(X, A, Functor(X.carrier, A.carrier, f.obj_map, f.mor_map, check=True), check=True)
    keys = [f.key() for f in fs]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


@given(ztwo_groupoids(max_morphisms=9), ztwo_groupoids(max_morphisms=12), st.integers(0, 2**32 - 1))
def test_map_count_invariant_under_relabelling(X, A, seed):
    rng = random.Random(seed)
    X2 = corpus.relabel_source(to_one(X), rng).source
    A2 = corpus.relabel_source(to_one(A), rng).source
    assert count_equivariant_maps(X2, A2) == count_equivariant_maps(X, A)


@given(groupoids())
def test_trivial_action_fixes_everything(g):
    X = trivial_action(g)
    assert len(fixed_points(X)) == g.n_obj


@given(groupoids())
def test_free_object_has_no_fixed_points(g):
    X = free_S(g)
    assert fixed_points(X) == [] and X.carrier.n_obj == 2 * g.n_obj


@given(ztwo_groupoids(max_morphisms=9), ztwo_groupoids(max_morphisms=9))
def test_product_and_coproduct_sizes(X, Y):
    P = ztwo_product(X, Y).object
    C = ztwo_coproduct(X, Y)
    assert P.carrier.n_mor == X.carrier.n_mor * Y.carrier.n_mor
    assert C.carrier.n_obj == X.carrier.n_obj + Y.carrier.n_obj
    assert len(fixed_points(P)) == len(fixed_points(X)) * len(fixed_points(Y))
