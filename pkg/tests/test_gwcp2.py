"""Gromov-Witten numbers of the plane: recursions, elliptic series,
asymptotics, truncated potential."""

import math
from fractions import Fraction as F

import pytest

from frobenii.exact import QuadScalar
from frobenii.frobenius import check_wdvv1, origin_monodromy
from frobenii.gwcp2 import (
    convergence_bound_check, elliptic_invariants, elliptic_series,
    genus0_coefficients, genus0_coefficients_pde, genus0_invariants,
    phi_series, ratio_tail, asymptotic_fit, table_csv, truncated_potential,
)

KNOWN_N = {1: 1, 2: 1, 3: 12, 4: 620, 5: 87304, 6: 26312976}
KNOWN_N1 = {1: 0, 2: 0, 3: 1, 4: 225, 5: 87192}


def test_first_numbers():
    rows = genus0_invariants(6)
    assert {r.k: r.N for r in rows} == KNOWN_N


def test_ode_and_pde_routes_agree_to_20():
    assert genus0_coefficients(20) == genus0_coefficients_pde(20)


def test_integrality_to_40():
    for row in genus0_invariants(40):
        assert row.N > 0


def test_elliptic_constant_and_first_values():
    psi = elliptic_series(8)
    assert psi.c0 == F(-1, 8)
    rows = elliptic_invariants(5)
    assert {r.k: r.N1 for r in rows} == KNOWN_N1


def test_elliptic_definition_identity():
    # psi * 8 (27 + 2 phi' - 3 phi'') - (phi''' - 27) = 0 as a series
    K = 12
    phi = phi_series(K)
    d1 = phi.diff(); d2 = d1.diff(); d3 = d2.diff()
    den = (d1 * 2 - d2 * 3 + 27) * 8
    psi = elliptic_series(K)
    assert (psi * den - (d3 - 27)).is_zero()


def test_division_routes_cross_check():
    assert elliptic_series(15, "triangular") == elliptic_series(15, "neumann")


def test_asymptotic_fit_window():
    a_hat, b_hat, r_hat = asymptotic_fit(40)
    assert 0.124 <= a_hat <= 0.152          # a ~ 0.138 within 10%
    assert 4.9 <= b_hat <= 7.3              # b ~ 6.1 within 20%
    assert 1.8 <= r_hat <= 2.2              # R ~ 1.981 within 10%


def test_ratio_tail_near_di_constant():
    r = ratio_tail(40)
    assert abs(r - 0.138) < 0.0138


def test_convergence_bound():
    assert convergence_bound_check(30, x=0.0)
    assert convergence_bound_check(30)          # at log(6/5) - 0.01
    assert not convergence_bound_check(30, x=2.5)   # beyond the radius


def test_truncated_potential_k1_term():
    P = truncated_potential(1)
    # N_1/(3-1)! t3^2 e^{t2} = 1/2 t3^2 e^{t2}
    assert P.F.coefficient((0, 0, 2), (0, 1, 0)) == QuadScalar(F(1, 2))


def test_truncated_classical_limit():
    P = truncated_potential(3)
    F0 = P.F.polynomial_part()
    assert F0.coefficient((2, 0, 1)) == QuadScalar(F(1, 2))
    assert F0.coefficient((1, 2, 0)) == QuadScalar(F(1, 2))
    assert len(F0.terms) == 2


@pytest.mark.parametrize("K", [2, 4])
def test_truncated_wdvv_mod_truncation(K):
    assert check_wdvv1(truncated_potential(K)).passed


def test_truncated_wdvv_fails_without_truncation_window():
    # dropping the truncation marker exposes the genuine tail residuals
    P = truncated_potential(2)
    from frobenii.frobenius import FrobeniusPotential
    Q = FrobeniusPotential(P.n, P.F, P.d, P.q, P.r, name="raw")
    assert not check_wdvv1(Q).passed


def test_cp2_origin_monodromy_example():
    mono = origin_monodromy(truncated_potential(4))
    assert mono.mu == [F(-1), F(0), F(1)]
    from frobenii.exact import ExactMatrix
    assert mono.R1 == ExactMatrix([[0, 0, 0], [3, 0, 0], [0, 3, 0]])


def test_csv_table():
    text = table_csv(4)
    lines = text.strip().splitlines()
    assert lines[0].startswith("k,")
    assert len(lines) == 5
    assert lines[1].split(",")[1] == "1"
    assert lines[3].split(",")[1] == "12"


def test_cp2_truncated_grading_and_quasihomogeneity():
    from frobenii.frobenius import check_grading_eta, check_quasihomogeneity
    P = truncated_potential(3)
    assert check_grading_eta(P)
    qrep, A, B, C = check_quasihomogeneity(P)
    assert qrep.passed


def test_table_json_mirror():
    import json
    from frobenii.gwcp2 import table_json
    rows = json.loads(table_json(3))
    assert [r["N_k"] for r in rows] == [1, 1, 12]
    assert [r["N1_k"] for r in rows] == [0, 0, 1]
