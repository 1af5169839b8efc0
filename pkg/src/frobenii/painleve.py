"""The one-parameter Painleve VI family governing three-dimensional
semisimple WDVV solutions, its three algebraic solutions, and the
(q, p, k) <-> Psi reconstruction chain.

The equation PVI(mu):

    y'' = 1/2 (1/y + 1/(y-1) + 1/(y-x)) y'^2
        - (1/x + 1/(x-1) + 1/(y-x)) y'
        + 1/2 y(y-1)(y-x)/(x^2 (x-1)^2) [ (2 mu - 1)^2 + x(x-1)/(y-x)^2 ].

The algebraic solutions attached to the three polynomial three-dimensional
WDVV solutions have mu = -1/4, -1/3, -2/5.  Each is stored as an exact
rational parametrization (x(s), y(s)); the stored forms were re-derived from
the corresponding Frobenius manifolds and verified to make the PVI residual
vanish identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .ode import integrate

Poly = List[Fraction]


def _pmul(a: Sequence, b: Sequence) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += Fraction(x) * Fraction(y)
    return out


def _ppow(p: Sequence, k: int) -> Poly:
    out = [Fraction(1)]
    for _ in range(k):
        out = _pmul(out, p)
    return out


def _pval(c: Sequence[Fraction], s):
    r = 0 * s if not isinstance(s, Fraction) else Fraction(0)
    for a in reversed(c):
        r = r * s + (a if isinstance(s, Fraction) else complex(a))
    return r


def _pder(c: Sequence[Fraction]) -> Poly:
    return [i * a for i, a in enumerate(c)][1:]


@dataclass(frozen=True)
class RationalFunction:
    num: Tuple[Fraction, ...]
    den: Tuple[Fraction, ...]

    def __call__(self, s):
        return _pval(self.num, s) / _pval(self.den, s)

    def deriv_value(self, s):
        n, d = _pval(self.num, s), _pval(self.den, s)
        np_, dp = _pval(_pder(self.num), s), _pval(_pder(self.den), s)
        return (np_ * d - n * dp) / (d * d)

    def second_deriv_value(self, s):
        d = _pval(self.den, s)
        r = _pval(self.num, s) / d
        rp = self.deriv_value(s)
        npp = _pval(_pder(_pder(self.num)), s)
        dp = _pval(_pder(self.den), s)
        dpp = _pval(_pder(_pder(self.den)), s)
        return (npp - 2 * rp * dp - r * dpp) / d

    def den_nonzero(self, s: Fraction) -> bool:
        return _pval(self.den, s) != 0


def _rat(num: Sequence, den: Sequence) -> RationalFunction:
    return RationalFunction(tuple(Fraction(c) for c in num),
                            tuple(Fraction(c) for c in den))


@dataclass(frozen=True)
class AlgebraicFamily:
    name: str
    mu1: Fraction
    x: RationalFunction
    y: RationalFunction


def _families() -> Dict[str, AlgebraicFamily]:
    # tetrahedral family, mu = -1/4:
    # x = (s-1)^3 (3s+1) / ((s+1)^3 (3s-1))
    # y = (s-1)^2 (3s+1) (9s^2-5)^2 / ((1+s)(243 s^6 + 1539 s^4 - 207 s^2 + 25))
    a3 = AlgebraicFamily(
        "A3", Fraction(-1, 4),
        _rat(_pmul(_ppow([-1, 1], 3), [1, 3]),
             _pmul(_ppow([1, 1], 3), [-1, 3])),
        _rat(_pmul(_pmul(_ppow([-1, 1], 2), [1, 3]), _ppow([-5, 0, 9], 2)),
             _pmul([1, 1], [25, 0, -207, 0, 1539, 0, 243])))
    # octahedral family, mu = -1/3:
    # x = (2-s)^2 (1+s) / ((2+s)^2 (1-s))
    # y = (2-s)(1+s)(s^2-3)^2 / ((2+s)(5 s^4 - 10 s^2 + 9))
    b3 = AlgebraicFamily(
        "B3", Fraction(-1, 3),
        _rat(_pmul(_ppow([2, -1], 2), [1, 1]),
             _pmul(_ppow([2, 1], 2), [1, -1])),
        _rat(_pmul(_pmul([2, -1], [1, 1]), _ppow([-3, 0, 1], 2)),
             _pmul([2, 1], [9, 0, -10, 0, 5])))
    # icosahedral family, mu = -2/5, with the degree-9 polynomial P(z):
    P = [49, -2133, 34308, -259044, 1642878, -7616646,
         13758708, 5963724, -719271, 42483]
    Ps2 = [Fraction(0)] * 19
    for i, c in enumerate(P):
        Ps2[2 * i] = Fraction(c)
    Q = [7, 0, -108, 0, 314, 0, -588, 0, 119]
    h3 = AlgebraicFamily(
        "H3", Fraction(-2, 5),
        _rat(_pmul(_pmul(_ppow([-1, 1], 5), _ppow([1, 3], 3)), [-1, 4, 1]),
             _pmul(_pmul(_ppow([1, 1], 5), _ppow([-1, 3], 3)), [-1, -4, 1])),
        _rat(_pmul(_pmul(_pmul(_ppow([-1, 1], 2), _ppow([1, 3], 2)), [-1, 4, 1]),
                   _ppow(Q, 2)),
             _pmul(_pmul(_ppow([1, 1], 3), [-1, 3]), Ps2)))
    return {"A3": a3, "B3": b3, "H3": h3}


FAMILIES = _families()
H3_DEGREE9 = (49, -2133, 34308, -259044, 1642878, -7616646,
              13758708, 5963724, -719271, 42483)


class ParametrizationPoleError(ZeroDivisionError):
    pass


def algebraic_solution(family: str, s) -> Tuple:
    """(x, y) of the printed parametric solution at parameter s (exact for
    Fraction input, complex otherwise)."""
    fam = FAMILIES[family.upper()]
    if isinstance(s, Fraction):
        if not (fam.x.den_nonzero(s) and fam.y.den_nonzero(s)):
            raise ParametrizationPoleError(f"s = {s} is a pole of {family}")
    return fam.x(s), fam.y(s)


# ---------------------------------------------------------------------------
# the equation
# ---------------------------------------------------------------------------

def pvi_rhs(mu1, x, y, yp):
    """y'' from PVI(mu); raises ZeroDivisionError at singular configurations."""
    A = (1 / y + 1 / (y - 1) + 1 / (y - x)) * yp * yp / 2
    B = (1 / x + 1 / (x - 1) + 1 / (y - x)) * yp
    C = (y * (y - 1) * (y - x) / (x * x * (x - 1) ** 2)
         * ((2 * mu1 - 1) ** 2 + x * (x - 1) / (y - x) ** 2)) / 2
    return A - B + C


def pvi_residual_on_curve(fam: AlgebraicFamily, s, mu1=None) -> complex:
    """y''(x) - rhs along the parametrized curve; derivatives of the
    parametrization are exact, the residual is returned as a complex number."""
    mu1 = fam.mu1 if mu1 is None else mu1
    x = fam.x(s)
    y = fam.y(s)
    xs = fam.x.deriv_value(s)
    ys = fam.y.deriv_value(s)
    xss = fam.x.second_deriv_value(s)
    yss = fam.y.second_deriv_value(s)
    yp = ys / xs
    ypp = (yss * xs - ys * xss) / xs ** 3
    return complex(ypp - pvi_rhs(mu1, x, y, yp))


def sample_parameters(fam: AlgebraicFamily, count: int) -> List[Fraction]:
    """Rational s-grid avoiding parametrization poles and the PVI-singular
    values (x in {0, 1}, y in {0, 1, x}), checked exactly."""
    out: List[Fraction] = []
    k = 1
    while len(out) < count and k < 100 * count:
        s = Fraction(2 * k - 1, 4 * count)  # odd/4N grid in (0, 1/2)
        k += 1
        if not (fam.x.den_nonzero(s) and fam.y.den_nonzero(s)):
            continue
        x, y = fam.x(s), fam.y(s)
        if x in (0, 1) or y in (0, 1) or y == x:
            continue
        out.append(s)
    if len(out) < count:
        raise ParametrizationPoleError("could not build a pole-free grid")
    return out


def verify_algebraic(family: str, sample_count: int = 50, tol: float = 1e-8,
                     mu1=None) -> float:
    """Max |PVI residual| over a pole-free rational sample grid."""
    fam = FAMILIES[family.upper()]
    worst = 0.0
    for s in sample_parameters(fam, sample_count):
        worst = max(worst, abs(pvi_residual_on_curve(fam, s, mu1=mu1)))
    return worst


# ---------------------------------------------------------------------------
# numeric integration
# ---------------------------------------------------------------------------

@dataclass
class PviPoint:
    mu1: Fraction
    x: complex
    y: complex
    yprime: complex


def pvi_integrate(pt0: PviPoint, x1: complex, tol: float = 1e-10,
                  margin: float = 1e-4) -> PviPoint:
    """Integrate PVI along the straight segment from pt0.x to x1 with an
    embedded adaptive Runge-Kutta; refuses to approach y in {0, 1, x} or
    x in {0, 1} closer than `margin`."""
    x0 = complex(pt0.x)
    x1 = complex(x1)
    if x1 == x0:
        return PviPoint(pt0.mu1, pt0.x, pt0.y, pt0.yprime)
    dx = x1 - x0
    mu1 = float(pt0.mu1) if isinstance(pt0.mu1, Fraction) else pt0.mu1

    def guard(sig: float, state: np.ndarray) -> bool:
        x = x0 + sig * dx
        y = state[0]
        if abs(x) < margin or abs(x - 1) < margin:
            return False
        return (abs(y) > margin and abs(y - 1) > margin and abs(y - x) > margin)

    # the state carries (y, dy/dsigma) with sigma the segment parameter
    def f(sig: float, state: np.ndarray) -> np.ndarray:
        x = x0 + sig * dx
        y, dyds = state
        yp = dyds / dx
        ypp = pvi_rhs(mu1, x, y, yp)
        return np.array([dyds, ypp * dx * dx], dtype=complex)

    y0 = np.array([pt0.y, pt0.yprime * dx], dtype=complex)
    yend, _ = integrate(f, y0, 0.0, 1.0, tol=tol, guard=guard)
    return PviPoint(pt0.mu1, x1, yend[0], yend[1] / dx)


# ---------------------------------------------------------------------------
# the (q, p, k) chain
# ---------------------------------------------------------------------------

@dataclass
class QpkState:
    u: Tuple[complex, complex, complex]
    q: complex
    p: complex
    logk: complex = 0j


def _cubic(u: Sequence[complex]):
    def P(lam):
        return (lam - u[0]) * (lam - u[1]) * (lam - u[2])

    def Pprime(lam):
        return ((lam - u[1]) * (lam - u[2]) + (lam - u[0]) * (lam - u[2])
                + (lam - u[0]) * (lam - u[1]))

    return P, Pprime


def y_to_qp(y, yprime, x, u: Sequence[complex]) -> QpkState:
    """q = (u2 - u1) y + u1 and p = P'(u3)/(2 P(q)) y' - 1/(2 (q - u3)),
    P(lam) = (lam - u1)(lam - u2)(lam - u3); requires x = (u3-u1)/(u2-u1)."""
    u = tuple(complex(v) for v in u)
    if len({u[0], u[1], u[2]}) != 3:
        raise ValueError("u must be pairwise distinct")
    xref = (u[2] - u[0]) / (u[1] - u[0])
    if abs(complex(x) - xref) > 1e-9 * max(1.0, abs(xref)):
        raise ValueError("x does not match (u3 - u1)/(u2 - u1)")
    q = (u[1] - u[0]) * complex(y) + u[0]
    P, Pp = _cubic(u)
    if abs(P(q)) == 0:
        raise ZeroDivisionError("P(q) = 0")
    p = Pp(u[2]) / (2 * P(q)) * complex(yprime) - 1 / (2 * (q - u[2]))
    return QpkState(u=u, q=q, p=p)


def qp_from_family(family: str, s, u: Sequence[complex] | None = None) -> QpkState:
    """(q, p) along an algebraic family at parameter s, in the normalization
    u = (0, 1, x(s)) unless u is given (then x(s) must match)."""
    fam = FAMILIES[family.upper()]
    x = complex(fam.x(s))
    y = complex(fam.y(s))
    yp = complex(fam.y.deriv_value(s)) / complex(fam.x.deriv_value(s))
    if u is None:
        u = (0.0, 1.0, x)
    return y_to_qp(y, yp, x, u)


def _q_of_u(fam: AlgebraicFamily, u: Sequence[complex], seed_s: complex
            ) -> Tuple[complex, complex, complex]:
    """(q, p, s) at a general u-triple via affine covariance: solve
    x(s) = (u3-u1)/(u2-u1) by Newton from seed_s, then map q, p back."""
    target = (u[2] - u[0]) / (u[1] - u[0])
    s = complex(seed_s)
    for _ in range(80):
        val = fam.x(s) - target
        if abs(val) < 1e-14 * max(1.0, abs(target)):
            break
        der = fam.x.deriv_value(s)
        s = s - val / der
    else:
        raise ArithmeticError("Newton failed to match x(s) to the u-triple")
    y = fam.y(s)
    yp = fam.y.deriv_value(s) / fam.x.deriv_value(s)
    q = (u[1] - u[0]) * y + u[0]
    P, Pp = _cubic(u)
    p = Pp(u[2]) / (2 * P(q)) * yp - 1 / (2 * (q - u[2]))
    return q, p, s


def qp_flow_check(family: str, s0, du: float = 1e-5) -> Tuple[float, float]:
    """Central-difference check of the isomonodromic flow equations

        d_i q = P(q)/P'(u_i) (2p + 1/(q - u_i))
        d_i p = -(P'(q) p^2 + (2q + u_i - sum u_j) p + mu(1 - mu)) / P'(u_i)

    at the point u = (0, 1, x(s0)) of the named family.  Differences are
    Richardson-extrapolated (steps du and du/2); mismatches are measured
    relative to max(1, |rhs|).  Returns (max q-mismatch, max p-mismatch)."""
    fam = FAMILIES[family.upper()]
    mu1 = complex(Fraction(fam.mu1))
    x0 = complex(fam.x(s0))
    base = (0.0 + 0j, 1.0 + 0j, x0)
    q0, p0, s_at = _q_of_u(fam, base, complex(s0))
    P, Pp = _cubic(base)
    usum = sum(base)

    def fd(i: int, h: float) -> Tuple[complex, complex]:
        up = list(base)
        um = list(base)
        up[i] += h
        um[i] -= h
        qp_, pp_, _ = _q_of_u(fam, up, s_at)
        qm_, pm_, _ = _q_of_u(fam, um, s_at)
        return (qp_ - qm_) / (2 * h), (pp_ - pm_) / (2 * h)

    worst_q = worst_p = 0.0
    for i in range(3):
        dq1, dp1 = fd(i, du)
        dq2, dp2 = fd(i, du / 2)
        dq = (4 * dq2 - dq1) / 3
        dp = (4 * dp2 - dp1) / 3
        rhs_q = P(q0) / Pp(base[i]) * (2 * p0 + 1 / (q0 - base[i]))
        Pprime_q = ((q0 - base[1]) * (q0 - base[2]) + (q0 - base[0]) * (q0 - base[2])
                    + (q0 - base[0]) * (q0 - base[1]))
        rhs_p = -(Pprime_q * p0 ** 2 + (2 * q0 + base[i] - usum) * p0
                  + mu1 * (1 - mu1)) / Pp(base[i])
        worst_q = max(worst_q, abs(dq - rhs_q) / max(1.0, abs(rhs_q)))
        worst_p = max(worst_p, abs(dp - rhs_p) / max(1.0, abs(rhs_p)))
    return worst_q, worst_p


def log_k_increment(family: str, s_from, s_to, steps: int = 400) -> complex:
    """Quadrature of d_i log k = (2 mu - 1)(q - u_i)/P'(u_i) along the curve
    slice u = (0, 1, x(s)) from s_from to s_to (log k = 0 at the start)."""
    fam = FAMILIES[family.upper()]
    mu1 = complex(Fraction(fam.mu1))
    total = 0j
    h = (complex(s_to) - complex(s_from)) / steps

    def integrand(s):
        x = fam.x(s)
        y = fam.y(s)
        q = y  # u = (0, 1, x): q = y
        u = (0j, 1 + 0j, x)
        _, Pp = _cubic(u)
        return (2 * mu1 - 1) * (q - x) / Pp(x) * fam.x.deriv_value(s)

    s = complex(s_from)
    for _ in range(steps):
        total += (integrand(s) + 4 * integrand(s + h / 2) + integrand(s + h)) * h / 6
        s += h
    return total


def reconstruct_psi(state: QpkState, mu1) -> np.ndarray:
    """Psi columns from (q, p, k): with B_i = P(q) p^2 + 2 mu P(q)/(q-u_i) p
    + mu^2 (q + 2 u_i - sum u_j),

        psi_{i1} psi_{i3} = -(q - u_i) B_i / (2 mu^2 P'(u_i))
        psi_{i3}^2        = -k (q - u_i) / P'(u_i)
        psi_{i1}^2        = -(q - u_i) B_i^2 / (4 mu^4 k P'(u_i))

    and the middle column from the +i cross-product convention."""
    u = state.u
    mu1 = complex(Fraction(mu1)) if isinstance(mu1, Fraction) else complex(mu1)
    k = np.exp(state.logk)
    P, Pp = _cubic(u)
    q, p = state.q, state.p
    usum = sum(u)
    psi1 = np.zeros(3, dtype=complex)
    psi3 = np.zeros(3, dtype=complex)
    for i in range(3):
        B = P(q) * p * p + 2 * mu1 * P(q) / (q - u[i]) * p \
            + mu1 ** 2 * (q + 2 * u[i] - usum)
        pr13 = -(q - u[i]) / (2 * mu1 ** 2 * Pp(u[i])) * B
        sq3 = -k * (q - u[i]) / Pp(u[i])
        sq1 = -(q - u[i]) / (4 * mu1 ** 4 * k * Pp(u[i])) * B * B
        if abs(sq1 * sq3 - pr13 ** 2) > 1e-6 * max(1.0, abs(pr13) ** 2):
            raise ArithmeticError("inconsistent squares in the psi reconstruction")
        psi3[i] = np.sqrt(sq3)
        psi1[i] = pr13 / psi3[i] if psi3[i] != 0 else np.sqrt(sq1)
    psi2 = 1j * np.array([
        psi1[1] * psi3[2] - psi3[1] * psi1[2],
        psi3[0] * psi1[2] - psi1[0] * psi3[2],
        psi1[0] * psi3[1] - psi3[0] * psi1[1],
    ])
    return np.column_stack([psi1, psi2, psi3])
