import math
from dataclasses import replace

import numpy as np
import pytest

from edgelimits.errors import PreconditionError
from edgelimits.hilbert import (CutProducts, FiniteSet, RankOneBall, SymTensor, hilbert_norm,
                                seminorm)
from edgelimits.regularity import (Decomposition, greedy_decompose, q_k_membership,
                                   verify_energy_identity)
from oracles import random_symmetric


def random_ball_vector(rng, n):
    v = rng.standard_normal(n)
    return SymTensor(v / np.linalg.norm(v) * rng.random() ** (1 / n))


def test_single_atom_target():
    r = SymTensor([0.6, 0.8])
    d = FiniteSet((r, SymTensor([1.0, 0.0])))
    dec = greedy_decompose(r, d, 3)
    assert dec.steps == 1
    assert dec.coeffs == pytest.approx((1.0,))
    assert hilbert_norm(dec.residual) <= 1e-12


def test_uniform_vector_on_basis_five_steps():
    # 1/sqrt(5) < 1/2, so all four coordinates get removed in order
    a = SymTensor([0.5] * 4)
    dec = greedy_decompose(a, FiniteSet.standard_basis(4), 5)
    assert dec.steps == 4
    assert dec.coeffs == (0.5, 0.5, 0.5, 0.5)
    assert dec.energy_log == pytest.approx((1.0, 0.75, 0.5, 0.25, 0.0), abs=1e-15)
    assert hilbert_norm(dec.residual) == 0.0


def test_uniform_vector_on_basis_k4_stops_at_threshold():
    # every correlation equals 1/sqrt(4) exactly; the strict test does not fire
    a = SymTensor([0.5] * 4)
    dec = greedy_decompose(a, FiniteSet.standard_basis(4), 4)
    assert dec.steps == 0
    assert dec.energy_log == (1.0,)


def test_random_vector_basis_k16(rng):
    for _ in range(20):
        a = random_ball_vector(rng, 8)
        dec = greedy_decompose(a, FiniteSet.standard_basis(8), 16)
        assert np.max(np.abs(dec.residual.values)) <= 0.25 + 1e-12
        assert dec.steps <= 16


def test_preconditions():
    with pytest.raises(PreconditionError):
        greedy_decompose(SymTensor([1.0, 1.0]), FiniteSet.standard_basis(2), 4)
    with pytest.raises(PreconditionError):
        greedy_decompose(SymTensor([0.1, 0.1]), FiniteSet.standard_basis(2), 0)


@pytest.mark.parametrize("k", [4, 16, 64])
def test_guarantee_exact_dictionaries(rng, k):
    n = 9
    dicts = [FiniteSet.standard_basis(n), RankOneBall(1, n)]
    for _ in range(100):
        a = random_ball_vector(rng, n)
        for d in dicts:
            dec = greedy_decompose(a, d, k)
            assert dec.steps <= k
            assert seminorm(dec.residual, d).value <= 1 / math.sqrt(k) + 1e-9
            assert dec.certified


@pytest.mark.parametrize("k", [4, 16, 64])
def test_guarantee_matrices(rng, k):
    q = 4
    mu = (0.1, 0.2, 0.3, 0.4)
    for d in (RankOneBall(2, q), CutProducts(mu)):
        for _ in range(30):
            x = random_symmetric(rng, 2, q)
            a = SymTensor(x / np.linalg.norm(x) * rng.random())
            dec = greedy_decompose(a, d, k)
            assert dec.steps <= k
            assert seminorm(dec.residual, d).value <= 1 / math.sqrt(k) + 1e-9
            assert q_k_membership(dec)


def test_energy_monotone_with_minimum_decrement(rng):
    k = 16
    for _ in range(50):
        a = random_ball_vector(rng, 6)
        dec = greedy_decompose(a, FiniteSet.standard_basis(6), k)
        drops = -np.diff(dec.energy_log)
        assert np.all(drops >= 1 / k - 1e-9)


def test_heuristic_dictionary_not_certified(rng):
    x = random_symmetric(rng, 3, 3)
    a = SymTensor(x / np.linalg.norm(x))
    dec = greedy_decompose(a, RankOneBall(3, 3, restarts=4), 4)
    assert not dec.certified
    assert q_k_membership(dec)


# -- energy identity -------------------------------------------------------

def test_energy_identity_unit_atoms(rng):
    for _ in range(20):
        a = random_ball_vector(rng, 5)
        dec = greedy_decompose(a, FiniteSet.standard_basis(5), 25)
        rep = verify_energy_identity(dec)
        assert rep.max_violation <= 1e-9
        assert rep.passed
        for e_prev, c, r2, e_next, _, _ in rep.rows:
            assert r2 == pytest.approx(1.0)
            assert e_next == pytest.approx(e_prev - c * c, abs=1e-12)


def test_energy_identity_zero_steps():
    dec = greedy_decompose(SymTensor([0.01, 0.0]), FiniteSet.standard_basis(2), 4)
    rep = verify_energy_identity(dec)
    assert rep.rows == [] and rep.passed


def test_energy_identity_half_norm_atoms():
    atoms = tuple(SymTensor(0.5 * row) for row in np.eye(3))
    a = SymTensor([0.9, 0.3, 0.1])
    dec = greedy_decompose(a, FiniteSet(atoms), 9)
    rep = verify_energy_identity(dec)
    assert dec.steps >= 1
    for e_prev, c, r2, e_next, _, _ in rep.rows:
        assert 2 - r2 == pytest.approx(1.75, abs=1e-15)
        # direct recomputation with the 1.75 factor
        assert e_next == pytest.approx(e_prev - c * c * 1.75, abs=1e-9)
    assert rep.max_violation <= 1e-9


def test_energy_identity_cut_atoms_nonunit(rng):
    x = random_symmetric(rng, 2, 3)
    a = SymTensor(x / np.linalg.norm(x))
    dec = greedy_decompose(a, CutProducts((0.5, 0.3, 0.2)), 400)
    rep = verify_energy_identity(dec)
    assert dec.steps > 0
    assert all(r2 < 1 for _, _, r2, _, _, _ in rep.rows)
    assert rep.passed


def test_energy_identity_rejects_inconsistent():
    dec = greedy_decompose(SymTensor([0.8, 0.1]), FiniteSet.standard_basis(2), 4)
    bad = replace(dec, residual=dec.residual + SymTensor([1e-3, 0.0]))
    with pytest.raises(PreconditionError):
        verify_energy_identity(bad)


# -- Q_k membership --------------------------------------------------------

def test_membership_of_greedy_output(rng):
    for _ in range(20):
        dec = greedy_decompose(random_ball_vector(rng, 4), FiniteSet.standard_basis(4), 16)
        assert q_k_membership(dec)


def test_membership_rejects_large_coefficient():
    r = SymTensor([1.0, 0.0])
    dec = Decomposition(SymTensor([1.5, 0.0]), (r,), (1.5,), SymTensor([0.0, 0.0]),
                        (2.25, 0.0), k=4)
    assert not q_k_membership(dec)


def test_membership_rejects_perturbed_residual():
    dec = greedy_decompose(SymTensor([0.8, 0.1]), FiniteSet.standard_basis(2), 4)
    assert q_k_membership(dec)
    bad = replace(dec, residual=dec.residual + SymTensor([1e-3, 0.0]))
    assert not q_k_membership(bad)


def test_decomposition_round_trip(rng):
    import json
    dec = greedy_decompose(random_ball_vector(rng, 4), FiniteSet.standard_basis(4), 16)
    back = Decomposition.from_dict(json.loads(json.dumps(dec.to_dict())))
    assert back.coeffs == dec.coeffs and back.residual == dec.residual
    assert back.energy_log == dec.energy_log
