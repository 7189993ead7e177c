import numpy as np
import pytest
from hypothesis import given, strategies as st

import corpus
from strategies import ztwo_groupoids
from gpdz2.equivariant import (
    EquivariantFunctor, check_I, enumerate_equivariant_maps, free_S, i_prime, nabla, one, s_i,
    to_one, ztwo_product,
)
from gpdz2.errors import DomainNotFibrant, NotAcyclicCofibration, ValidationError
from gpdz2.groupoid import is_equivalence, terminal
from gpdz2.model import (
    LiftingProblem, acyclic_cofibration_corpus, attach_i_cell, attach_s_cell, attachments,
    cell_decompose, factorize, fibrant_replacement, is_acyclic_cofibration, is_cofibration,
    is_fibrant, is_injective_fibration, is_projective_fibration, is_weak_equivalence,
    solve_lifting, verify_decomposition, verify_generator_characterization, verify_pushout,
)
from gpdz2.tt import path_object
from gpdz2.universe import build_universe


def identity(X):
    return EquivariantFunctor.identity(X)


class TestLifting:
    def test_i_prime_against_check_I_has_no_filler(self):
        j = i_prime()
        f = to_one(check_I())
        sq = LiftingProblem(j, f, identity(check_I()), to_one(nabla()))
        assert solve_lifting(sq) is None

    def test_identity_on_the_right_fills_with_bottom(self):
        j = s_i()
        B = j.target
        for bottom in enumerate_equivariant_maps(B, nabla()):
            top = j.then(bottom)
            fill = solve_lifting(LiftingProblem(j, identity(nabla()), top, bottom))
            assert fill.diagonal.key() == bottom.key()

    def test_square_must_commute(self):
        j = i_prime()
        f = identity(nabla())
        with pytest.raises(ValidationError) as e:
            LiftingProblem(j, f, j, identity(nabla()).then(EquivariantFunctor.identity(nabla())).then(
                EquivariantFunctor.from_arrays(nabla(), nabla(), [1, 0, 2], _swap_mor())))
        assert e.value.code == "NOT_COMMUTATIVE"


def _swap_mor():
    X = nabla()
    return X.amor


class TestPredicates:
    def test_check_I_not_fibrant_against_i_prime(self):
        r = is_injective_fibration(to_one(check_I()))
        assert not r and r.generator == "i_prime"

    def test_nabla_fibrant(self):
        assert is_fibrant(nabla())

    @pytest.mark.parametrize("name", ["one", "check_I", "nabla", "S1", "S_I", "BZ2"])
    def test_identities_are_fibrations(self, name):
        assert is_injective_fibration(identity(corpus.objects()[name]))

    def test_check_I_to_point_is_projective_fibration(self):
        assert is_projective_fibration(to_one(check_I()))

    def test_s_i_not_projective_fibration(self):
        f = s_i()
        assert not is_projective_fibration(f)
        r = is_injective_fibration(f)
        assert r.generator == "s_i"
        assert r.iso_witness == ((0, 0), (0, "phi"))
        assert solve_lifting(r.square) is None

    @pytest.mark.parametrize("name", ["one", "check_I", "nabla", "S1"])
    def test_maps_to_point_are_projective_fibrations(self, name):
        assert is_projective_fibration(to_one(corpus.objects()[name]))

    def test_generators_are_acyclic_cofibrations(self):
        assert is_acyclic_cofibration(i_prime())
        assert is_acyclic_cofibration(s_i())

    def test_fold_is_not_a_cofibration(self):
        f = to_one(free_S(terminal()))
        assert not is_cofibration(f)
        assert not is_weak_equivalence(f)


class TestCells:
    def test_s_cell_pushout(self):
        st_ = attach_s_cell(nabla(), 2)
        assert st_.after.carrier.n_obj == 5
        assert verify_pushout(st_, nabla()) > 0
        assert is_acyclic_cofibration(st_.inclusion)

    def test_i_cell_pushout(self):
        X = nabla()
        theta = X.carrier.mor_index["phi"]
        st_ = attach_i_cell(X, 0, theta)
        assert st_.after.carrier.n_obj == 4
        assert verify_pushout(st_, st_.after) > 0

    def test_i_cell_needs_equivariant_theta(self):
        X = nabla()
        with pytest.raises(ValidationError):
            attach_i_cell(X, 0, X.carrier.mor_index["psiphi"])

    def test_inclusion_is_a_prefix(self):
        st_ = attach_s_cell(check_I(), 0)
        n = check_I().carrier
        assert st_.after.carrier.objects[:n.n_obj] == n.objects
        assert st_.inclusion.key() == (tuple(range(n.n_obj)), tuple(range(n.n_mor)))


class TestDecomposition:
    def test_i_prime_is_one_cell(self):
        dec = cell_decompose(i_prime())
        assert dec.kinds() == ["i_prime"]
        m = dec.matching_iso
        assert [m.target.objects[i] for i in m.obj_map] == list(m.source.objects)
        assert [m.target.morphisms[i] for i in m.mor_map] == list(m.source.morphisms)
        verify_decomposition(dec)

    def test_s_i_is_one_cell(self):
        dec = cell_decompose(s_i())
        assert dec.kinds() == ["s_i"]
        verify_decomposition(dec)

    def test_path_object_diagonal(self):
        po = path_object(to_one(check_I()))
        dec = cell_decompose(po.delta1)
        verify_decomposition(dec)
        assert dec.composite.then(dec.matching_iso).key() == po.delta1.key()

    def test_rejects_non_acyclic(self):
        with pytest.raises(NotAcyclicCofibration):
            cell_decompose(to_one(check_I()))


class TestCharacterization:
    def test_universe_projection(self):
        r = verify_generator_characterization(build_universe(2).p)
        assert r.generator_verdict and r.direct_verdict and r.stagewise_verdict

    def test_check_I(self):
        r = verify_generator_characterization(to_one(check_I()))
        assert not r.generator_verdict and not r.direct_verdict and r.agree
        assert r.failing is not None

    def test_identity(self):
        r = verify_generator_characterization(identity(nabla()))
        assert r.generator_verdict and r.direct_verdict


class TestFactorize:
    def test_identity_on_point(self):
        fz = factorize(identity(one()))
        assert fz.middle.carrier.n_obj == 1 and fz.middle.carrier.n_mor == 1

    def test_non_fibrant_domain(self):
        with pytest.raises(DomainNotFibrant) as e:
            factorize(to_one(check_I()))
        assert e.value.code == "DOMAIN_NOT_FIBRANT"

    def test_universe_diagonal(self):
        U = build_universe(2).U
        fz = factorize(corpus.diagonal(U))
        assert is_injective_fibration(fz.q)
        assert is_acyclic_cofibration(fz.j)
        assert fz.j.then(fz.q).key() == corpus.diagonal(U).key()

    def test_projection(self):
        f = ztwo_product(nabla(), nabla()).first
        fz = factorize(f)
        assert is_fibrant(fz.middle)


def test_fibrant_replacement_of_check_I():
    Y, j = fibrant_replacement(check_I())
    assert is_fibrant(Y)
    assert is_acyclic_cofibration(j)
    assert (Y.carrier.n_obj, Y.carrier.n_mor) == (3, 9)


def test_corpus_shape():
    cc = acyclic_cofibration_corpus()
    assert len(cc) == 115
    assert all(c.target.carrier.n_obj <= 4 for c in cc)
    assert all(is_acyclic_cofibration(c.map) for c in cc)


@given(ztwo_groupoids(max_morphisms=9), st.data())
def test_random_cell_is_a_pushout_and_acyclic(X, data):
    opts = attachments(X)
    kind, args = data.draw(st.sampled_from(opts))
    stage = attach_s_cell(X, *args) if kind == "s_i" else attach_i_cell(X, *args)
    assert is_acyclic_cofibration(stage.inclusion)
    verify_pushout(stage, nabla())
    dec = cell_decompose(stage.inclusion)
    verify_decomposition(dec)


@given(ztwo_groupoids(max_morphisms=9))
def test_fibrancy_agrees_with_direct_lifting(X):
    small = [c for c in acyclic_cofibration_corpus(max_objects=3)]
    r = verify_generator_characterization(to_one(X), small)
    assert r.agree


@given(ztwo_groupoids(max_morphisms=9))
def test_fibrant_replacement_is_fibrant(X):
    Y, j = fibrant_replacement(X)
    assert is_fibrant(Y) and is_acyclic_cofibration(j)
    assert is_equivalence(j.functor)


def test_weak_equivalence_check_matches_certificate():
    f = to_one(nabla())
    assert is_weak_equivalence(f) == bool(is_equivalence(f.functor)) is True
    assert np.array_equal(f.obj_map, np.zeros(3))
