from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import model_hamiltonian, spin_operator_hamiltonian, total_s2
from subjacent.lattice import (ChainModel, SectorHamiltonian, apply_hamiltonian,
                               apply_total_spin_squared, enumerate_sector, flip_vector,
                               spin_flip_map)


def sector_block(full, sector):
    idx = sector.basis
    return full[np.ix_(idx, idx)]


def test_enumerate_small_sector_in_ascending_order():
    sector = enumerate_sector(4, 2)
    assert [format(s, "04b") for s in sector.basis] == [
        "0011", "0101", "0110", "1001", "1010", "1100"]


def test_enumerate_edges_and_dimensions():
    assert enumerate_sector(6, 0).dimension == 1
    assert enumerate_sector(16, 8).dimension == comb(16, 8) == 12870
    assert sum(enumerate_sector(10, k).dimension for k in range(11)) == 2 ** 10
    with pytest.raises(ValueError):
        enumerate_sector(6, 7)


def test_sector_index_inverts_basis():
    sector = enumerate_sector(8, 3)
    assert np.array_equal(sector.index(sector.basis), np.arange(sector.dimension))
    with pytest.raises(KeyError):
        sector.index([0b1111])


@pytest.mark.parametrize("kwargs", [dict(n_sites=5), dict(n_sites=6, j1=-1.0),
                                    dict(n_sites=6, nn_delta=(1.0, 2.0))])
def test_invalid_models_rejected(kwargs):
    with pytest.raises(ValueError):
        ChainModel(**kwargs)


def test_alpha_needs_positive_j1():
    with pytest.raises(ValueError):
        ChainModel(6, j1=0.0, j2=1.0).alpha


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        apply_hamiltonian(ChainModel(6), enumerate_sector(6, 3), np.ones(5))


@pytest.mark.parametrize("model", [
    ChainModel.uniform(6, 0.0),
    ChainModel.uniform(6, 0.37, delta=0.4),
    ChainModel.uniform(8, 0.25, delta=3.0, j1=1.7),
    ChainModel.disordered(6, 0.3, [0.1, -0.2, 0.05, 0.3, -0.4, 0.0],
                          [-0.1, 0.2, 0.0, 0.15, -0.05, 0.25]),
])
def test_sector_blocks_match_kron_hamiltonian(model):
    full = model_hamiltonian(model)
    n = model.n_sites
    for n_up in range(n + 1):
        sector = enumerate_sector(n, n_up)
        dense = SectorHamiltonian(model, sector).to_dense()
        assert np.allclose(dense, sector_block(full, sector), atol=1e-12)


def test_hamiltonian_conserves_sz_exactly():
    model = ChainModel.uniform(6, 0.3, delta=0.7)
    full = model_hamiltonian(model)
    for n_up in range(7):
        idx = enumerate_sector(6, n_up).basis
        outside = np.setdiff1d(np.arange(64), idx)
        assert np.all(full[np.ix_(outside, idx)] == 0)


def test_zero_vector_maps_to_zero():
    sector = enumerate_sector(8, 4)
    out = apply_hamiltonian(ChainModel.uniform(8, 0.3), sector, np.zeros(sector.dimension))
    assert np.array_equal(out, np.zeros(sector.dimension))


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(0, 1), delta=st.floats(0, 5), seed=st.integers(0, 2**32 - 1))
def test_hamiltonian_is_symmetric(alpha, delta, seed):
    rng = np.random.default_rng(seed)
    model = ChainModel.uniform(8, alpha, delta)
    sector = enumerate_sector(8, 4)
    u, v = rng.standard_normal((2, sector.dimension))
    hu, hv = apply_hamiltonian(model, sector, u), apply_hamiltonian(model, sector, v)
    assert abs(u @ hv - hu @ v) <= 1e-12 * max(1.0, abs(u @ hv)) * 10


def test_pauli_convention_is_four_times_spin_convention():
    model = ChainModel.uniform(6, 0.0)
    sector = enumerate_sector(6, 3)
    e_pauli = np.linalg.eigvalsh(SectorHamiltonian(model, sector).to_dense())[0]
    e_spin = np.linalg.eigvalsh(spin_operator_hamiltonian(6, 1.0, 0.0))[0]
    assert e_pauli == pytest.approx(4 * e_spin, abs=1e-10)


def test_majumdar_ghosh_ground_state_is_doubly_degenerate():
    model = ChainModel.uniform(6, 0.5)
    w = np.linalg.eigvalsh(model_hamiltonian(model))
    assert w[1] - w[0] < 1e-10 and w[2] - w[1] > 1e-3
    # exact dimer energy, -3N/8 per site in spin units
    assert w[0] == pytest.approx(-1.5 * 6, abs=1e-10)


def test_total_spin_squared_matches_kron_operator():
    n = 6
    s2 = total_s2(n)
    for n_up in range(n + 1):
        sector = enumerate_sector(n, n_up)
        dense = np.column_stack([apply_total_spin_squared(n, sector, e)
                                 for e in np.eye(sector.dimension)])
        assert np.allclose(dense, sector_block(s2, sector), atol=1e-12)


def test_total_spin_squared_special_states():
    n = 6
    top = enumerate_sector(n, n)
    assert apply_total_spin_squared(n, top, np.ones(1))[0] == pytest.approx(3 * 4)
    # singlet on sites (0, 1) times a singlet on sites (2, 3)
    sector = enumerate_sector(4, 2)
    psi = np.zeros(sector.dimension)
    for state, sign in ((0b0101, 1), (0b0110, -1), (0b1001, -1), (0b1010, 1)):
        psi[sector.index([state])[0]] = sign
    psi /= np.linalg.norm(psi)
    assert np.allclose(apply_total_spin_squared(4, sector, psi), 0, atol=1e-12)


def test_ground_state_of_even_chain_is_singlet():
    model = ChainModel.uniform(6, 0.1)
    sector = enumerate_sector(6, 3)
    w, v = np.linalg.eigh(SectorHamiltonian(model, sector).to_dense())
    assert v[:, 0] @ apply_total_spin_squared(6, sector, v[:, 0]) == pytest.approx(0, abs=1e-10)


def test_h_commutes_with_s2_when_isotropic():
    rng = np.random.default_rng(3)
    sector = enumerate_sector(8, 4)
    v = rng.standard_normal(sector.dimension)
    model = ChainModel.uniform(8, 0.31)
    hs = apply_hamiltonian(model, sector, apply_total_spin_squared(8, sector, v))
    sh = apply_total_spin_squared(8, sector, apply_hamiltonian(model, sector, v))
    assert np.linalg.norm(hs - sh) <= 1e-10 * np.linalg.norm(v)


def test_reductions_are_bit_identical():
    rng = np.random.default_rng(0)
    sector = enumerate_sector(8, 4)
    v = rng.standard_normal(sector.dimension)
    iso = apply_hamiltonian(ChainModel.uniform(8, 0.3), sector, v)
    dis = apply_hamiltonian(ChainModel.disordered(8, 0.3, np.zeros(8), np.zeros(8)), sector, v)
    xxz = apply_hamiltonian(ChainModel.uniform(8, 0.3, delta=1.0), sector, v)
    assert np.array_equal(iso, dis) and np.array_equal(iso, xxz)


def test_flip_map_complements_bits_and_is_an_involution():
    sector = enumerate_sector(4, 2)
    perm = spin_flip_map(sector)
    assert sector.basis[perm[sector.index([0b0011])[0]]] == 0b1100
    assert np.array_equal(perm[perm], np.arange(sector.dimension))
    lo = enumerate_sector(6, 2)
    hi = enumerate_sector(6, 4)
    assert np.array_equal(spin_flip_map(hi)[spin_flip_map(lo)], np.arange(lo.dimension))


def test_flip_sectors_share_spectra():
    model = ChainModel.uniform(8, 0.4, delta=0.6)
    for n_up in range(5):
        a = np.linalg.eigvalsh(SectorHamiltonian(model, enumerate_sector(8, n_up)).to_dense())
        b = np.linalg.eigvalsh(SectorHamiltonian(model, enumerate_sector(8, 8 - n_up)).to_dense())
        assert np.allclose(a, b, atol=1e-12)


def test_flipped_eigenvector_stays_an_eigenvector():
    model = ChainModel.uniform(6, 0.2)
    sector = enumerate_sector(6, 4)
    w, v = np.linalg.eigh(SectorHamiltonian(model, sector).to_dense())
    target, u = flip_vector(sector, v[:, 0])
    assert target.n_up == 2
    assert np.allclose(apply_hamiltonian(model, target, u), w[0] * u, atol=1e-12)


def test_model_key_distinguishes_couplings():
    a = ChainModel.uniform(6, 0.3)
    assert a.key() == ChainModel.uniform(6, 0.3).key()
    assert a.key() != ChainModel.uniform(6, 0.3, delta=0.9).key()
