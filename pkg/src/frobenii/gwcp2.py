"""Gromov-Witten numbers of the projective plane from the WDVV equations.

Genus zero: the coefficients A_k of phi = sum A_k e^{kx} solve the third
order ODE phi'''(27 + 2 phi' - 3 phi'') - (phi'')^2 - 54 phi'' + 33 phi'
- 6 phi = 0 (the r = 3 reduction of the n = 3 quasihomogeneous WDVV system);
N_k = (3k-1)! A_k counts rational curves of degree k through 3k-1 points.
An independent route expands the full PDE f_xxy^2 = f_yyy + f_xxx f_xyy and
must reproduce the same numbers.  Genus one comes from the series
psi = (phi''' - 27) / (8 (27 + 2 phi' - 3 phi'')).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .exact.exppoly import ExpPolynomial
from .exact.scalars import QuadScalar
from .exact.series import GWSeries
from .frobenius import FrobeniusPotential


class IntegralityError(ArithmeticError):
    pass


def _factorial(n: int) -> int:
    return math.factorial(n)


def genus0_coefficients(K: int) -> List[Fraction]:
    """A_1..A_K from the ODE route (A_1 = 1/2)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    A = [Fraction(0)] * (K + 1)
    A[1] = Fraction(1, 2)
    for k in range(2, K + 1):
        s = Fraction(0)
        for i in range(1, k):
            j = k - i
            s += Fraction(i * i * j * (2 * i - 3 * i * j - j)) * A[i] * A[j]
        A[k] = -s / (3 * (k - 1) * (3 * k - 1) * (3 * k - 2))
    return A[1:]


def genus0_coefficients_pde(K: int) -> List[Fraction]:
    """Independent oracle: match coefficients of the PDE
    f_xxy^2 = f_yyy + f_xxx f_xyy with f = sum c_k y^{3k-1} e^{kx}."""
    if K < 1:
        raise ValueError("K must be >= 1")
    c = [Fraction(0)] * (K + 1)
    c[1] = Fraction(1, 2)
    for k in range(2, K + 1):
        s = Fraction(0)
        for i in range(1, k):
            j = k - i
            lhs = i * i * j * j * (3 * i - 1) * (3 * j - 1)
            rhs = i ** 3 * j * (3 * j - 1) * (3 * j - 2)
            s += Fraction(lhs - rhs) * c[i] * c[j]
        c[k] = s / ((3 * k - 1) * (3 * k - 2) * (3 * k - 3))
    return c[1:]


@dataclass
class Genus0Row:
    k: int
    N: int
    A: Fraction


def genus0_invariants(K: int) -> List[Genus0Row]:
    """Table of (k, N_k, A_k); raises IntegralityError if some N_k is not a
    positive integer (which would signal an implementation bug)."""
    A = genus0_coefficients(K)
    rows = []
    for k, a in enumerate(A, start=1):
        N = a * _factorial(3 * k - 1)
        if N.denominator != 1 or N <= 0:
            raise IntegralityError(f"N_{k} = {N} is not a positive integer")
        rows.append(Genus0Row(k=k, N=int(N), A=a))
    return rows


def phi_series(K: int) -> GWSeries:
    return GWSeries(K, genus0_coefficients(K))


def elliptic_series(K: int, route: str = "triangular") -> GWSeries:
    """psi = (phi''' - 27) / (8 (27 + 2 phi' - 3 phi'')) truncated at K."""
    phi = phi_series(K)
    d1 = phi.diff()
    d2 = d1.diff()
    d3 = d2.diff()
    num = d3 - 27
    den = (GWSeries(K, [Fraction(0)] * K, 27) + 2 * d1 - 3 * d2) * 8
    if route == "triangular":
        return num.divide_triangular(den)
    if route == "neumann":
        return num.divide_neumann(den)
    raise ValueError("route must be 'triangular' or 'neumann'")


@dataclass
class EllipticRow:
    k: int
    N1: int


def elliptic_invariants(K: int) -> List[EllipticRow]:
    """Elliptic GW numbers N_k^{(1)} from
    psi = -1/8 + sum k N_k^{(1)} / (3k)! e^{kx}; integrality enforced and the
    two series-division routes cross-checked."""
    psi_a = elliptic_series(K, "triangular")
    psi_b = elliptic_series(K, "neumann")
    if psi_a != psi_b:
        raise ArithmeticError("the two series-division routes disagree")
    if psi_a.c0 != Fraction(-1, 8):
        raise ArithmeticError(f"constant term of psi is {psi_a.c0}, not -1/8")
    rows = []
    for k in range(1, K + 1):
        val = psi_a[k] * _factorial(3 * k) / k
        if val.denominator != 1:
            raise IntegralityError(f"N^(1)_{k} = {val} is not an integer")
        rows.append(EllipticRow(k=k, N1=int(val)))
    return rows


def asymptotic_fit(K: int) -> Tuple[float, float, float]:
    """Fit A_k ~ a^k b k^{-7/2} by least squares on log A_k over k in
    [K/2, K]; returns (a_hat, b_hat, R_hat) with R_hat = -log a_hat."""
    if K < 20:
        raise ValueError("asymptotic fit needs K >= 20")
    A = genus0_coefficients(K)
    ks = list(range(K // 2, K + 1))
    # log A_k + 3.5 log k = k log a + log b
    xs, ys = [], []
    for k in ks:
        a = A[k - 1]
        logA = math.log(a.numerator) - math.log(a.denominator)
        xs.append(float(k))
        ys.append(logA + 3.5 * math.log(k))
    n = len(xs)
    sx = sum(xs); sy = sum(ys)
    sxx = sum(x * x for x in xs); sxy = sum(x * y for x, y in zip(xs, ys))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    a_hat = math.exp(slope)
    b_hat = math.exp(intercept)
    return a_hat, b_hat, -slope


def ratio_tail(K: int) -> float:
    """A_K / A_{K-1} as a float (approaches the DI constant a ~ 0.138)."""
    A = genus0_coefficients(K)
    return float(A[-1] / A[-2])


def convergence_bound_check(K: int, x: float | None = None) -> bool:
    """Ratio test for sum A_k e^{kx}: every tail ratio A_{k+1}/A_k * e^x must
    stay below 1.  Default x is the lower bound log(6/5) - 0.01 coming from
    the recursion-based estimate of the convergence domain."""
    if K < 5:
        raise ValueError("K must be >= 5")
    if x is None:
        x = math.log(6 / 5) - 0.01
    A = genus0_coefficients(K)
    ex = math.exp(x)
    for k in range(K // 2, K):
        if float(A[k] / A[k - 1]) * ex >= 1.0:
            return False
    return True


def truncated_potential(K: int) -> FrobeniusPotential:
    """F = 1/2 t1^2 t3 + 1/2 t1 t2^2 + sum_{k<=K} N_k/(3k-1)! t3^{3k-1} e^{k t2},
    with q = (0,1,2), r = (0,3,0), d = 2; exact checks on it run modulo
    e^{(K+1) t2}."""
    A = genus0_coefficients(K)
    terms = {
        ((2, 0, 1), (0, 0, 0)): QuadScalar(Fraction(1, 2)),
        ((1, 2, 0), (0, 0, 0)): QuadScalar(Fraction(1, 2)),
    }
    for k, a in enumerate(A, start=1):
        terms[((0, 0, 3 * k - 1), (0, k, 0))] = QuadScalar(a)
    F = ExpPolynomial(3, terms)
    return FrobeniusPotential(
        n=3, F=F, d=Fraction(2),
        q=(Fraction(0), Fraction(1), Fraction(2)),
        r=(Fraction(0), Fraction(3), Fraction(0)),
        name=f"CP2({K})", exp_truncation=(1, K))


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def table_rows(K: int) -> List[dict]:
    g0 = genus0_invariants(K)
    g1 = {row.k: row.N1 for row in elliptic_invariants(K)}
    out = []
    prev = None
    for row in g0:
        ratio = "" if prev is None else f"{float(row.A / prev):.9f}"
        out.append({
            "k": row.k,
            "N_k": row.N,
            "N1_k": g1[row.k],
            "A_k": f"{float(row.A):.12e}",
            "ratio": ratio,
        })
        prev = row.A
    return out


def table_csv(K: int) -> str:
    rows = table_rows(K)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["k", "N_k", "N1_k", "A_k", "ratio"])
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def table_json(K: int) -> str:
    return json.dumps(table_rows(K), indent=2)
