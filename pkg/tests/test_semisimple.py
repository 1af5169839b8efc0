"""Canonical coordinates, Psi frames, the isomonodromic flow and its
Hamiltonian structure."""

from fractions import Fraction as F

import numpy as np
import pytest

from frobenii.frobenius import catalog
from frobenii.gwcp2 import truncated_potential
from frobenii.semisimple import (
    CoalescingEigenvaluesError, IsoState, canonical_coordinates,
    euler_multiplication, hamiltonians, integrate_isomonodromic,
    poisson_commutation_check, state_from_dict, state_to_dict, tau_increment,
    v_components, v_matrices,
)


def _cp2_frame(t2=0.3):
    P = truncated_potential(4)
    return P, canonical_coordinates(P, [0.0, t2, 0.0])


# ---------------------------------------------------------------------------
# U and canonical coordinates
# ---------------------------------------------------------------------------

def test_euler_multiplication_cp2_at_axis():
    P = truncated_potential(4)
    t2 = 0.37
    U = euler_multiplication(P, [0.0, t2, 0.0])
    q = np.exp(t2)
    want = np.array([[0, 0, 3 * q], [3, 0, 0], [0, 3, 0]], dtype=complex)
    assert np.abs(U - want).max() < 1e-12


def test_euler_multiplication_zero_at_origin_without_shifts():
    P = catalog("A3")
    U = euler_multiplication(P, [0.0, 0.0, 0.0])
    assert np.abs(U).max() == 0.0


def test_trace_u_equals_sum_of_canonical_coordinates():
    P = catalog("A3")
    t = [0.21, 0.4, 0.9]
    U = euler_multiplication(P, t)
    fr = canonical_coordinates(P, t)
    assert abs(sum(fr.u) - np.trace(U)) < 1e-10


def test_cp2_canonical_coordinates_match_cube_roots():
    P, fr = _cp2_frame()
    q = np.exp(0.3)
    eps2 = np.exp(2j * np.pi / 3)
    want = sorted([3 * q ** (1 / 3), 3 * q ** (1 / 3) * eps2,
                   3 * q ** (1 / 3) * np.conj(eps2)],
                  key=lambda z: (z.real, z.imag))
    assert max(abs(a - b) for a, b in zip(fr.u, want)) < 1e-10


def test_cp2_psi_matches_printed_matrix():
    _, fr = _cp2_frame()
    q3 = np.exp(0.3) ** (1 / 3)
    eps = np.exp(1j * np.pi / 3)
    paper = (1 / np.sqrt(3)) * np.array([
        [1 / q3, 1, q3],
        [np.conj(eps) / q3, -1, eps * q3],
        [eps / q3, -1, np.conj(eps) * q3]])
    used = set()
    for row in paper:
        dists = [(min(np.abs(fr.Psi[i] - row).max(), np.abs(fr.Psi[i] + row).max()), i)
                 for i in range(3) if i not in used]
        d, i = min(dists)
        used.add(i)
        assert d < 1e-9


def test_psi_orthogonality_on_a3_samples():
    P = catalog("A3")
    for t in ([0.3, 0.7, 1.1], [1.0, -0.3, 0.8], [0.1, 0.45, -0.6]):
        fr = canonical_coordinates(P, t)
        assert np.abs(fr.Psi.T @ fr.Psi - fr.eta).max() < 1e-10
        assert fr.c_residual < 1e-9


def test_unity_field_in_psi_frame():
    # sum_i psi_{i1} psi_i^alpha = delta^alpha_1  (e = sum_i d/du_i)
    P = catalog("A3")
    fr = canonical_coordinates(P, [0.3, 0.7, 1.1])
    eta_inv = np.linalg.inv(fr.eta)
    e_flat = np.einsum("i,ia,ab->b", fr.Psi[:, 0], fr.Psi, eta_inv)
    want = np.zeros(3)
    want[0] = 1
    assert np.abs(e_flat - want).max() < 1e-9


def test_collision_margin_refusal():
    P = catalog("A3")
    # t2 = t3 = 0 puts all u at multiples of t1-shift: degenerate
    with pytest.raises((CoalescingEigenvaluesError, ArithmeticError)):
        canonical_coordinates(P, [0.5, 0.0, 0.0])


# ---------------------------------------------------------------------------
# V matrices
# ---------------------------------------------------------------------------

def test_v_skew_and_spectrum_cp2():
    _, fr = _cp2_frame()
    V, Vis = v_matrices(fr)
    assert np.abs(V + V.T).max() < 1e-10
    spec = sorted(np.linalg.eigvals(V), key=lambda z: z.real)
    assert np.abs(np.array(spec) - np.array([-1, 0, 1])).max() < 1e-8
    U = np.diag(fr.u)
    for i, Vi in enumerate(Vis):
        Ei = np.zeros((3, 3), dtype=complex)
        Ei[i, i] = 1
        assert np.abs((U @ Vi - Vi @ U) - (Ei @ V - V @ Ei)).max() < 1e-12
        assert np.abs(np.diag(Vi)).max() == 0


def test_v_components_n2_closed_form():
    u = [0.3 + 0j, 1.7 + 0j]
    v = 0.8 - 0.2j
    V = np.array([[0, v], [-v, 0]], dtype=complex)
    Vis = v_components(u, V)
    assert abs(Vis[0][0, 1] - v / (u[0] - u[1])) < 1e-15
    U = np.diag(u)
    E0 = np.diag([1.0, 0.0]).astype(complex)
    assert np.abs((U @ Vis[0] - Vis[0] @ U) - (E0 @ V - V @ E0)).max() < 1e-12


# ---------------------------------------------------------------------------
# Hamiltonians, tau, Poisson
# ---------------------------------------------------------------------------

def _random_state(n=3, seed=0):
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    V = W - W.T
    u = [0.0 + 0j, 1.0 + 0j, 2.3 + 0.7j][:n]
    if n == 2:
        u = [0.0 + 0j, 1.3 - 0.4j]
    return IsoState(u=u, V=V)


def test_hamiltonians_sum_to_zero():
    st = _random_state()
    assert abs(sum(hamiltonians(st))) < 1e-14


def test_hamiltonians_n2():
    st = _random_state(2, seed=3)
    H = hamiltonians(st)
    v = st.V[0, 1]
    assert abs(H[0] - v * v / (2 * (st.u[0] - st.u[1]))) < 1e-14
    assert abs(H[0] + H[1]) < 1e-14


def test_hamiltonians_zero_v():
    st = IsoState(u=[0, 1, 2], V=np.zeros((3, 3), dtype=complex))
    assert all(h == 0 for h in hamiltonians(st))


def test_poisson_commutation():
    for seed in (0, 1, 2):
        st = _random_state(seed=seed)
        assert poisson_commutation_check(st) < 1e-10
    st2 = _random_state(2, seed=5)
    assert poisson_commutation_check(st2) == 0.0


# ---------------------------------------------------------------------------
# isomonodromic integration
# ---------------------------------------------------------------------------

def test_constant_path_is_identity():
    st = _random_state()
    fin, diag = integrate_isomonodromic(st, [st.u], tol=1e-10)
    assert np.abs(fin.V - st.V).max() == 0.0
    assert diag.dlog_tau == 0


def test_n2_flow_is_constant():
    st = _random_state(2, seed=7)
    path = [[0.4 + 0.1j, 1.9 - 0.2j], [0.1 - 0.3j, 2.4 + 0.4j]]
    fin, diag = integrate_isomonodromic(st, path, tol=1e-11)
    assert np.abs(fin.V - st.V).max() < 1e-9


def test_n2_tau_closed_form():
    # dlog tau = (v^2/2) dlog(u1 - u2)
    st = _random_state(2, seed=9)
    v = st.V[0, 1]
    target = [0.5 + 0.2j, 1.8 - 0.5j]
    dtau = tau_increment(st, [target], tol=1e-12)
    want = (v * v / 2) * (np.log(target[0] - target[1])
                          - np.log(st.u[0] - st.u[1]))
    assert abs(dtau - want) < 1e-9


def test_isospectral_drift_small():
    st = _random_state(seed=11)
    path = [[0.2 + 0.4j, 1.1 + 0.2j, 2.0 + 0.5j]]
    fin, diag = integrate_isomonodromic(st, path, tol=1e-10)
    assert diag.spectral_drift < 1e-8
    assert diag.skewness_drift < 1e-8


def test_closed_loop_tau():
    st = _random_state(seed=13)
    loop = [[0.1 + 0.2j, 1.2 + 0.1j, 2.2 + 0.8j],
            [-0.1 + 0.1j, 1.4 - 0.2j, 2.5 + 0.6j],
            list(st.u)]
    fin, diag = integrate_isomonodromic(st, loop, tol=1e-10)
    assert abs(diag.dlog_tau) < 1e-8
    assert np.abs(fin.V - st.V).max() < 1e-7


def test_margin_refusal():
    st = _random_state()
    bad = [[0.0 + 0j, 1e-9 + 0j, 2.0 + 0j]]
    with pytest.raises(Exception):
        integrate_isomonodromic(st, bad, tol=1e-10)


def test_state_json_roundtrip():
    st = _random_state(seed=17)
    st2 = state_from_dict(state_to_dict(st))
    assert np.abs(st2.V - st.V).max() == 0
    assert st2.u == list(np.asarray(st.u, dtype=complex))


def test_psi_orthogonality_across_catalog():
    # Psi^T Psi = eta and the c-reconstruction at a semisimple sample point
    # of every catalog entry (generic complex points keep eigenvalues apart;
    # the truncated CP2 entry is sampled inside its convergence domain)
    from frobenii.frobenius import CATALOG_NAMES
    base = [0.31 + 0.11j, 0.77 - 0.23j, 1.13 + 0.41j, 0.53 + 0.29j]
    special = {
        "H4": [1.1 + 0.3j, 0.5 - 0.7j, 0.9 + 0.9j, 1.3 - 0.4j],
        "CP2": [0.1 + 0.05j, 0.3 - 0.2j, 0.2 + 0.1j],
    }
    for name in CATALOG_NAMES:
        P = catalog(name) if name != "CP2" else truncated_potential(5)
        t = special.get(name, base[:P.n])
        fr = canonical_coordinates(P, t, tol=1e-8)
        assert np.abs(fr.Psi.T @ fr.Psi - fr.eta).max() < 1e-9
        assert fr.c_residual < 1e-8
