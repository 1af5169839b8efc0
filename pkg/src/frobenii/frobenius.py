"""Frobenius potentials: WDVV solutions, their exact checks and invariants.

A :class:`FrobeniusPotential` bundles a free energy F (exp-polynomial in
t1..tn), the charge d, grading degrees q_alpha, shifts r_alpha and the unity
coordinate.  Everything downstream -- the constant metric eta, structure
constants, WDVV residuals, intersection form, monodromy data at the origin,
deformed flat coordinates, inversion symmetry, tensor locus -- is computed
exactly in the coefficient field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact.exppoly import ExpPolynomial, NotClosedFormError
from .exact.linalg import ExactMatrix, SingularMatrixError
from .exact.scalars import QuadScalar, parse_quad


class NonConstantMetricError(ValueError):
    pass


class DegenerateMetricError(ValueError):
    pass


@dataclass(frozen=True)
class FrobeniusPotential:
    n: int
    F: ExpPolynomial
    d: Fraction
    q: Tuple[Fraction, ...]
    r: Tuple[Fraction, ...]
    unity_index: int = 0
    name: str = ""
    # (variable index, max exp order) for series potentials truncated in one
    # exponential direction; exact checks then work modulo e^{(K+1) t_var}
    exp_truncation: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.F.nvars != self.n:
            raise ValueError("F arity does not match n")
        if len(self.q) != self.n or len(self.r) != self.n:
            raise ValueError("grading data arity mismatch")
        if self.q[self.unity_index] != 0:
            raise ValueError("q must vanish at the unity coordinate")
        for qa, ra in zip(self.q, self.r):
            if ra != 0 and qa != 1:
                raise ValueError("r_alpha may be nonzero only where q_alpha = 1")

    # Euler vector field E = sum [(1-q_a) t^a + r_a] d_a
    def euler_coefficients(self) -> List[Tuple[Fraction, Fraction]]:
        return [(1 - qa, ra) for qa, ra in zip(self.q, self.r)]

    def lie_euler(self, f: ExpPolynomial) -> ExpPolynomial:
        out = ExpPolynomial.zero(self.n)
        for a, (lin, shift) in enumerate(self.euler_coefficients()):
            df = f.diff(a)
            if lin:
                out = out + ExpPolynomial.variable(self.n, a) * df.scale(lin)
            if shift:
                out = out + df.scale(shift)
        return out

    def mu(self) -> List[Fraction]:
        return [qa - self.d / 2 for qa in self.q]

    def _truncate(self, p: ExpPolynomial) -> ExpPolynomial:
        if self.exp_truncation is None:
            return p
        var, order = self.exp_truncation
        return p.truncate_exp(var, order)


@dataclass
class ResidualReport:
    passed: bool
    label: str
    residuals: Dict[Tuple[int, ...], ExpPolynomial] = field(default_factory=dict)
    details: str = ""

    def max_nonzero(self) -> int:
        return sum(1 for r in self.residuals.values() if not r.is_zero())


# ---------------------------------------------------------------------------
# basic tensors
# ---------------------------------------------------------------------------

def metric_eta(P: FrobeniusPotential) -> ExactMatrix:
    """eta_ab = d_1 d_a d_b F; must be a constant nondegenerate matrix."""
    n = P.n
    Fu = P.F.diff(P.unity_index)
    rows = []
    for a in range(n):
        Fua = Fu.diff(a)
        row = []
        for b in range(n):
            e = Fua.diff(b)
            if not e.is_constant():
                raise NonConstantMetricError(
                    f"d1 d{a + 1} d{b + 1} F is not constant: {e}")
            row.append(e.constant_term())
        rows.append(row)
    eta = ExactMatrix(rows)
    if not eta.det():
        raise DegenerateMetricError("eta is degenerate")
    return eta


def structure_constants(P: FrobeniusPotential):
    """Returns (c_low, c_up, eta, eta_inv) with c_low[a][b][g] = d3 F and
    c_up[a][b][g] = c_{ab}^g = eta^{g e} c_{e a b}."""
    n = P.n
    eta = metric_eta(P)
    eta_inv = eta.inverse()
    first = [P.F.diff(a) for a in range(n)]
    c_low = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            dab = first[a].diff(b)
            for g in range(b, n):
                val = dab.diff(g)
                for i, j, k in {(a, b, g), (a, g, b), (b, a, g),
                                (b, g, a), (g, a, b), (g, b, a)}:
                    c_low[i][j][k] = val
    c_up = [[[None] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for g in range(n):
                acc = ExpPolynomial.zero(n)
                for e in range(n):
                    coef = eta_inv[g, e]
                    if coef:
                        acc = acc + c_low[e][a][b].scale(coef)
                c_up[a][b][g] = acc
    return c_low, c_up, eta, eta_inv


# ---------------------------------------------------------------------------
# the WDVV checks
# ---------------------------------------------------------------------------

def check_wdvv1(P: FrobeniusPotential) -> ResidualReport:
    """Exact associativity residuals
    c_{ab l} eta^{lm} c_{m g d} - (a <-> d), all index tuples."""
    n = P.n
    try:
        c_low, _, _, eta_inv = structure_constants(P)
    except (NonConstantMetricError, DegenerateMetricError) as exc:
        return ResidualReport(False, "wdvv1", details=str(exc))

    def pairing(a, b, g, dd):
        acc = ExpPolynomial.zero(n)
        for l in range(n):
            for m in range(n):
                coef = eta_inv[l, m]
                if coef:
                    acc = acc + (c_low[a][b][l] * c_low[m][g][dd]).scale(coef)
        return acc

    residuals: Dict[Tuple[int, ...], ExpPolynomial] = {}
    ok = True
    for a in range(n):
        for dd in range(a + 1, n):
            for b in range(n):
                for g in range(b, n):
                    res = P._truncate(pairing(a, b, g, dd) - pairing(dd, b, g, a))
                    residuals[(a, b, g, dd)] = res
                    if not res.is_zero():
                        ok = False
    return ResidualReport(ok, "wdvv1", residuals)


def check_quasihomogeneity(P: FrobeniusPotential):
    """L_E F - (3-d) F must be at most quadratic; extract and normalize the
    quadratic data (A, B, C) per the standard normalization: killable parts
    (non-resonant in the grading) are removed by adding a quadratic to F."""
    n = P.n
    rem = P.lie_euler(P.F) - P.F.scale(3 - P.d)
    rem = P._truncate(rem)
    ok = (not rem.has_exp()) and rem.total_degree() <= 2
    A = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    C = Fraction(0)
    extra = ExpPolynomial.zero(n)
    if ok:
        for (pows, exps), coeff in rem.terms.items():
            if any(exps) or sum(pows) > 2:
                continue
            if not coeff.is_rational():
                ok = False
                break
            val = coeff.a
            idx = [i for i, p in enumerate(pows) for _ in range(p)]
            if len(idx) == 0:
                C = val
            elif len(idx) == 1:
                B[idx[0]] = val
            else:
                i, j = idx
                if i == j:
                    A[i][i] = 2 * val
                else:
                    A[i][j] = A[j][i] = val
    if ok:
        # normalization: a quadratic g added to F shifts the remainder by
        # (L_E - (3-d)) g; kill every component whose grading eigenvalue
        # is nonzero
        for i in range(n):
            for j in range(i, n):
                lam = P.q[i] + P.q[j] - (P.d - 1)
                if A[i][j] and lam:
                    A[i][j] = A[j][i] = Fraction(0)
        for i in range(n):
            lam = P.q[i] - (P.d - 2)
            if B[i] and lam:
                B[i] = Fraction(0)
        if C and P.d != 3:
            C = Fraction(0)
    report = ResidualReport(ok, "quasihomogeneity",
                            {(0,): extra} if not ok else {},
                            details="" if ok else f"remainder {rem} is not quadratic")
    return report, A, B, C


def check_grading_eta(P: FrobeniusPotential) -> bool:
    """(q_a + q_b - d) eta_ab = 0 for all a, b."""
    eta = metric_eta(P)
    for a in range(P.n):
        for b in range(P.n):
            if eta[a, b] and P.q[a] + P.q[b] - P.d != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# intersection form and origin monodromy
# ---------------------------------------------------------------------------

def intersection_form(P: FrobeniusPotential):
    """g^{ab}(t) = E^e c_e^{ab}(t) and the contravariant Christoffels
    Gamma_g^{ab} = ((d+1)/2 - q_b) c^{ab}_g."""
    n = P.n
    c_low, c_up, eta, eta_inv = structure_constants(P)
    # c_e^{ab} = eta^{a l} eta^{b m} c_{l m e}
    g = [[ExpPolynomial.zero(n) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = ExpPolynomial.zero(n)
            for e in range(n):
                lin, shift = 1 - P.q[e], P.r[e]
                if lin == 0 and shift == 0:
                    continue
                # c_e^{ab}
                ce = ExpPolynomial.zero(n)
                for l in range(n):
                    for m in range(n):
                        coef = eta_inv[a, l] * eta_inv[b, m]
                        if coef:
                            ce = ce + c_low[l][m][e].scale(coef)
                if lin:
                    acc = acc + ExpPolynomial.variable(n, e) * ce.scale(lin)
                if shift:
                    acc = acc + ce.scale(shift)
            g[a][b] = P._truncate(acc)
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for gg in range(n):
        for a in range(n):
            for b in range(n):
                coef = Fraction(P.d + 1, 2) - P.q[b]
                # c^{ab}_g = eta^{a e} c_{e g}^{b}
                ce = ExpPolynomial.zero(n)
                for e in range(n):
                    if eta_inv[a, e]:
                        ce = ce + c_up[e][gg][b].scale(eta_inv[a, e])
                gamma[gg][a][b] = ce.scale(coef)
    return g, gamma


def euler_multiplication_symbolic(P: FrobeniusPotential) -> List[List[ExpPolynomial]]:
    """U^a_b(t) = E^e c_{e b}^a as exact exp-polynomials."""
    n = P.n
    _, c_up, _, _ = structure_constants(P)
    U = [[ExpPolynomial.zero(n) for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = ExpPolynomial.zero(n)
            for e in range(n):
                lin, shift = 1 - P.q[e], P.r[e]
                cc = c_up[e][b][a]
                if lin:
                    acc = acc + ExpPolynomial.variable(n, e) * cc.scale(lin)
                if shift:
                    acc = acc + cc.scale(shift)
            U[a][b] = P._truncate(acc)
    return U


@dataclass
class OriginMonodromy:
    mu: List[Fraction]
    R1: ExactMatrix


def origin_monodromy(P: FrobeniusPotential) -> OriginMonodromy:
    """mu_a = q_a - d/2 and (R1)^a_b = sum_e r_e c_{e b}^a computed with the
    structure constants of the cubic (classical-limit) part of F."""
    n = P.n
    cubic = FrobeniusPotential(
        n=n, F=P.F.polynomial_part(), d=P.d, q=P.q, r=P.r,
        unity_index=P.unity_index)
    _, c_up, _, _ = structure_constants(cubic)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = QuadScalar(0)
            for e in range(n):
                if P.r[e]:
                    val = c_up[e][b][a]
                    if not val.is_constant():
                        raise NotClosedFormError(
                            "cubic part has non-constant structure constants")
                    acc = acc + val.constant_term() * QuadScalar(P.r[e])
            row.append(acc)
        rows.append(row)
    R1 = ExactMatrix(rows)
    mu = P.mu()
    for a in range(n):
        for b in range(n):
            if R1[a, b] and mu[a] - mu[b] != 1:
                raise ValueError(f"(R1)^{a + 1}_{b + 1} nonzero but mu gap is not 1")
    return OriginMonodromy(mu=mu, R1=R1)


# ---------------------------------------------------------------------------
# deformed flat coordinates
# ---------------------------------------------------------------------------

def _potential_from_gradient(fields: Sequence[ExpPolynomial]) -> ExpPolynomial:
    """Scalar h with grad h = fields, h(0) = 0, by staircase integration
    along 0 -> (t1,0,..) -> (t1,t2,0,..) -> ... -> t.

    Verifies closedness afterwards; raises NotClosedFormError on failure."""
    n = fields[0].nvars
    h = ExpPolynomial.zero(n)
    for v in range(n):
        comp = fields[v]
        for w in range(v + 1, n):
            comp = _set_var_zero(comp, w)
        h = h + comp.integrate(v)
    for v in range(n):
        if not (h.diff(v) - fields[v]).is_zero():
            raise NotClosedFormError("gradient field is not closed")
    return h


def _set_var_zero(p: ExpPolynomial, var: int) -> ExpPolynomial:
    out: Dict = {}
    for (pows, exps), c in p.terms.items():
        if pows[var] > 0:
            continue
        if pows[var] < 0:
            raise NotClosedFormError("cannot restrict negative power to 0")
        key = (pows, tuple(0 if i == var else k for i, k in enumerate(exps)))
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    return ExpPolynomial(p.nvars, out)


def deformed_flat_coords(P: FrobeniusPotential, depth: int) -> List[List[ExpPolynomial]]:
    """h_{alpha,p} for p = 0..depth, normalized so the quasihomogeneity
    relation with R = R1 holds whenever the grading permits.

    h[p][alpha] are scalars; gradients are h[p][alpha].diff(beta).
    """
    n = P.n
    _, c_up, eta, _ = structure_constants(P)
    mono = origin_monodromy(P)
    mu = mono.mu
    levels: List[List[ExpPolynomial]] = []
    # h_{alpha,0} = t_alpha = eta_{alpha e} t^e
    lvl0 = []
    for a in range(n):
        acc = ExpPolynomial.zero(n)
        for e in range(n):
            if eta[a, e]:
                acc = acc + ExpPolynomial.variable(n, e).scale(eta[a, e])
        lvl0.append(acc)
    levels.append(lvl0)
    for p in range(depth):
        prev = levels[-1]
        grads = [[prev[a].diff(e) for e in range(n)] for a in range(n)]
        lvl = []
        for a in range(n):
            # gradient of h_{a,p+1}: integrate RHS_bg = c_{bg}^e d_e h_{a,p}
            xi = []
            for b in range(n):
                comps = []
                for g in range(n):
                    acc = ExpPolynomial.zero(n)
                    for e in range(n):
                        acc = acc + c_up[b][g][e] * grads[a][e]
                    comps.append(P._truncate(acc))
                xi.append(_potential_from_gradient(comps))
            h = _potential_from_gradient(xi)
            h = _normalize_level(P, h, a, p + 1, mu, mono.R1, levels)
            lvl.append(h)
        levels.append(lvl)
    return levels


def _normalize_level(P: FrobeniusPotential, h: ExpPolynomial, a: int, level: int,
                     mu: List[Fraction], R1: ExactMatrix,
                     levels: List[List[ExpPolynomial]]) -> ExpPolynomial:
    """Fix the affine integration constants of h_{a,level}.

    The scalar quasihomogeneity L_E h = (level + 1 - d/2 + mu_a) h
    + sum_e (R1)^e_a h_{e,level-1} + const pins the gradient constants in all
    non-resonant directions; resonant ones (mu-gap = level) stay zero."""
    n = P.n
    deg = Fraction(level + 1) - P.d / 2 + mu[a]
    rterm = ExpPolynomial.zero(n)
    for e in range(n):
        coef = R1[e, a]
        if coef:
            rterm = rterm + levels[level - 1][e].scale(coef)
    D = P._truncate(P.lie_euler(h) - h.scale(deg) - rterm)
    if D.has_exp() or D.total_degree() > 1:
        raise NotClosedFormError(
            f"quasihomogeneity defect of h_({a + 1},{level}) is not affine: {D}")
    shift = [QuadScalar(0)] * n
    for (pows, exps), c in D.terms.items():
        tot = sum(pows)
        if tot == 0:
            continue
        e = next(i for i, pw in enumerate(pows) if pw)
        denom = (1 - P.q[e]) - deg
        if denom != 0:
            shift[e] = -c / QuadScalar(denom)
        # resonant direction: leave the constant at zero
    for e in range(n):
        if shift[e]:
            h = h + ExpPolynomial.variable(n, e).scale(shift[e])
    # re-evaluate the constant part and absorb it when the degree allows
    D = P._truncate(P.lie_euler(h) - h.scale(deg) - rterm)
    c0 = D.constant_term()
    if c0 and deg != 0:
        h = h + ExpPolynomial.constant(n, c0 / QuadScalar(deg))
    return h


def gradient_pairing(P: FrobeniusPotential, f: ExpPolynomial, g: ExpPolynomial,
                     eta_inv: ExactMatrix | None = None) -> ExpPolynomial:
    """<grad f, grad g> = eta^{ab} d_a f d_b g."""
    n = P.n
    if eta_inv is None:
        eta_inv = metric_eta(P).inverse()
    acc = ExpPolynomial.zero(n)
    df = [f.diff(a) for a in range(n)]
    dg = [g.diff(b) for b in range(n)]
    for a in range(n):
        for b in range(n):
            coef = eta_inv[a, b]
            if coef:
                acc = acc + (df[a] * dg[b]).scale(coef)
    return P._truncate(acc)


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

def _check_antidiagonal(eta: ExactMatrix):
    n = eta.n
    for a in range(n):
        for b in range(n):
            want_one = (a + b == n - 1)
            if want_one and eta[a, b] != QuadScalar(1):
                raise NotClosedFormError("inversion requires eta = antidiag(1..1)")
            if not want_one and eta[a, b]:
                raise NotClosedFormError("inversion requires eta = antidiag(1..1)")


def apply_symmetry(P: FrobeniusPotential, kind: str, kappa: int | None = None
                   ) -> FrobeniusPotential:
    if kind == "inversion_type2":
        return _inversion(P)
    if kind == "permutation_type1":
        return _legendre(P, P.n - 1 if kappa is None else kappa)
    raise ValueError(f"unknown symmetry kind {kind!r}")


def _inversion(P: FrobeniusPotential) -> FrobeniusPotential:
    """The special-conformal symmetry: that^n = -1/t^n, that^mid = t^mid/t^n,
    that^1 = (1/2) t_s t^s / t^n, Fhat = (t^n)^{-2} [F - (1/2) t^1 t_s t^s].

    Requires the normalized form: eta antidiagonal, polynomial F.  The image
    is a Laurent-type potential (negative powers of the new t^n)."""
    n = P.n
    if P.F.has_exp():
        raise NotClosedFormError("inversion of exp-potentials is not closed-form")
    eta = metric_eta(P)
    _check_antidiagonal(eta)
    last = n - 1
    that_n_inv = ExpPolynomial.monomial(n, -1, [0] * (n - 1) + [-1])  # t^n = -1/that^n
    mapping = []
    mid_sum = ExpPolynomial.zero(n)  # sum over middle sigma of that^s that^(n+1-s)
    for s in range(1, n - 1):
        mid_sum = mid_sum + ExpPolynomial.variable(n, s) * ExpPolynomial.variable(n, n - 1 - s)
    inv_last = ExpPolynomial.monomial(n, 1, [0] * (n - 1) + [-1])    # 1/that^n
    t1 = ExpPolynomial.variable(n, 0) + (mid_sum * inv_last).scale(Fraction(1, 2))
    mapping.append(t1)
    for s in range(1, n - 1):
        mapping.append(ExpPolynomial.variable(n, s) * that_n_inv)
    mapping.append(that_n_inv)
    Fsub = P.F.substitute(mapping)
    # t_s t^s = 2 t^1 t^n + mid products, evaluated in old coordinates
    ts2 = ExpPolynomial.variable(n, 0) * ExpPolynomial.variable(n, last) * 2
    for s in range(1, n - 1):
        ts2 = ts2 + ExpPolynomial.variable(n, s) * ExpPolynomial.variable(n, n - 1 - s)
    corr = (ExpPolynomial.variable(n, 0) * ts2).scale(Fraction(1, 2)).substitute(mapping)
    that_n_sq = ExpPolynomial.monomial(n, 1, [0] * (n - 1) + [2])
    Fhat = that_n_sq * (Fsub - corr)
    dhat = 2 - P.d
    qhat = [Fraction(0)] + [1 - P.d + P.q[s] for s in range(1, n - 1)] + [Fraction(2) - P.d]
    if n == 2:
        qhat = [Fraction(0), Fraction(2) - P.d]
    if any(qa == 1 for qa in qhat[1:]):
        raise NotClosedFormError("inversion image has a marginal direction; "
                                 "r-shifts for it are not determined here")
    return FrobeniusPotential(n=n, F=Fhat, d=dhat, q=tuple(qhat),
                              r=tuple(Fraction(0) for _ in range(n)),
                              unity_index=0, name=(P.name + "^" if P.name else ""))


def _legendre(P: FrobeniusPotential, kappa: int) -> FrobeniusPotential:
    """Type-1 symmetry that_a = d_a d_kappa F, implemented for the affine case
    (all d_a d_b d_kappa F constant), which keeps the image in the ring.

    The image has charge d - 2 q_kappa, degrees q_a - q_kappa and unity
    coordinate kappa."""
    n = P.n
    if not 0 <= kappa < n:
        raise ValueError("kappa out of range")
    if kappa == P.unity_index:
        return P
    if any(P.r):
        raise NotClosedFormError("type-1 symmetry with r-shifts is not implemented")
    eta = metric_eta(P)
    Fk = P.F.diff(kappa)
    hess_k = [[Fk.diff(a).diff(b) for b in range(n)] for a in range(n)]
    if any(not hess_k[a][b].is_constant() for a in range(n) for b in range(n)):
        raise NotClosedFormError(
            "type-1 symmetry is closed-form only when d_a d_b d_kappa F is constant")
    M = ExactMatrix([[hess_k[a][b].constant_term() for b in range(n)] for a in range(n)])
    v = [Fk.diff(a).coefficient([0] * n) for a in range(n)]
    # that^a = eta^{ab} that_b: that = L t + shift_up
    eta_inv = eta.inverse()
    L = eta_inv @ M
    try:
        L_inv = L.inverse()
    except SingularMatrixError as exc:
        raise NotClosedFormError("type-1 transformation is not invertible") from exc
    # G(t) := Fhat(that(t)) so that Hess_t G = L^T (Hess_t F) L
    hess = [[P.F.diff(a).diff(b) for b in range(n)] for a in range(n)]
    H = [[ExpPolynomial.zero(n) for _ in range(n)] for _ in range(n)]
    for e in range(n):
        for g in range(n):
            acc = ExpPolynomial.zero(n)
            for a in range(n):
                for b in range(n):
                    coef = L[a, e] * L[b, g]
                    if coef:
                        acc = acc + hess[a][b].scale(coef)
            H[e][g] = acc
    xi = [_potential_from_gradient(H[e]) for e in range(n)]
    G = _potential_from_gradient(xi)
    shift_up = [sum((eta_inv[a, b] * v[b] for b in range(n)), QuadScalar(0))
                for a in range(n)]
    mapping = []
    for e in range(n):
        acc = ExpPolynomial.zero(n)
        for a in range(n):
            coef = L_inv[e, a]
            if coef:
                acc = acc + (ExpPolynomial.variable(n, a)
                             - ExpPolynomial.constant(n, shift_up[a])).scale(coef)
        mapping.append(acc)
    Fhat = G.substitute(mapping)
    qhat = tuple(qa - P.q[kappa] for qa in P.q)
    return FrobeniusPotential(n=n, F=Fhat, d=P.d - 2 * P.q[kappa], q=qhat,
                              r=tuple(Fraction(0) for _ in range(n)),
                              unity_index=kappa,
                              name=(P.name + f"~S{kappa + 1}" if P.name else ""))


# ---------------------------------------------------------------------------
# tensor locus
# ---------------------------------------------------------------------------

@dataclass
class TensorLocus:
    n1: int
    n2: int
    eta: ExactMatrix
    d: Fraction
    euler_linear: List[Fraction]   # (1 - q' - q'') per double index, row-major
    euler_shifts: List[Fraction]   # r-contributions per double index
    c_up: List[List[List[ExpPolynomial]]]  # in n1 + n2 variables


def tensor_locus(P1: FrobeniusPotential, P2: FrobeniusPotential) -> TensorLocus:
    """Tensor-product data on the locus where mixed coordinates vanish:
    eta = eta' (x) eta'', c = c'(t') c''(t''), d = d' + d'', Euler field with
    (1 - q'_a - q''_b) coefficients and r-shifts on the two axes."""
    n1, n2 = P1.n, P2.n
    N = n1 * n2
    _, c1up, eta1, _ = structure_constants(P1)
    _, c2up, eta2, _ = structure_constants(P2)
    eta = ExactMatrix([[eta1[a1, b1] * eta2[a2, b2]
                        for b1 in range(n1) for b2 in range(n2)]
                       for a1 in range(n1) for a2 in range(n2)])

    nv = n1 + n2  # the locus is parametrized by (t', t'')

    def embed1(p: ExpPolynomial) -> ExpPolynomial:
        out = {}
        for (pows, exps), c in p.terms.items():
            out[(tuple(pows) + (0,) * n2, tuple(exps) + (0,) * n2)] = c
        return ExpPolynomial(nv, out)

    def embed2(p: ExpPolynomial) -> ExpPolynomial:
        out = {}
        for (pows, exps), c in p.terms.items():
            out[((0,) * n1 + tuple(pows), (0,) * n1 + tuple(exps))] = c
        return ExpPolynomial(nv, out)

    c_up = [[[None] * N for _ in range(N)] for _ in range(N)]
    for a1 in range(n1):
        for a2 in range(n2):
            for b1 in range(n1):
                for b2 in range(n2):
                    for g1 in range(n1):
                        for g2 in range(n2):
                            val = embed1(c1up[a1][b1][g1]) * embed2(c2up[a2][b2][g2])
                            c_up[a1 * n2 + a2][b1 * n2 + b2][g1 * n2 + g2] = val
    lin = [1 - P1.q[a1] - P2.q[a2] for a1 in range(n1) for a2 in range(n2)]
    shifts = []
    for a1 in range(n1):
        for a2 in range(n2):
            s = Fraction(0)
            if a2 == P2.unity_index:
                s += P1.r[a1]
            if a1 == P1.unity_index:
                s += P2.r[a2]
            shifts.append(s)
    return TensorLocus(n1=n1, n2=n2, eta=eta, d=P1.d + P2.d,
                       euler_linear=lin, euler_shifts=shifts, c_up=c_up)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _poly(n: int, terms: Dict[Tuple[int, ...], Fraction]) -> ExpPolynomial:
    return ExpPolynomial(n, {(pows, (0,) * n): QuadScalar(c)
                             for pows, c in terms.items()})


def _coxeter_entry(name: str, n: int, h: int, degrees: Sequence[int],
                   terms: Dict[Tuple[int, ...], Fraction]) -> FrobeniusPotential:
    d = Fraction(h - 2, h)
    q = tuple(Fraction(h - dg, h) for dg in degrees)
    return FrobeniusPotential(n=n, F=_poly(n, terms), d=d, q=q,
                              r=tuple(Fraction(0) for _ in range(n)), name=name)


def catalog(name: str, order: int = 5) -> FrobeniusPotential:
    """Embedded catalog of WDVV solutions.

    Names: I2(k) for k >= 3, A3, B3, H3, A4, B4, D4, F4, H4, CP1, CP2
    (CP2 takes the truncation order argument)."""
    key = name.strip().upper().replace(" ", "")
    if key.startswith("I2(") and key.endswith(")"):
        k = int(key[3:-1])
        if k < 3:
            raise KeyError("I2(k) needs k >= 3")
        # F = 1/2 t1^2 t2 + t2^{k+1}; d = (k-2)/k
        F = _poly(2, {(2, 1): Fraction(1, 2), (0, k + 1): Fraction(1)})
        return FrobeniusPotential(n=2, F=F, d=Fraction(k - 2, k),
                                  q=(Fraction(0), Fraction(k - 2, k)),
                                  r=(Fraction(0), Fraction(0)), name=f"I2({k})")
    if key == "A2":
        return catalog("I2(3)")
    if key == "B2":
        return catalog("I2(4)")
    if key == "A3":
        return _coxeter_entry("A3", 3, 4, (4, 3, 2), {
            (2, 0, 1): Fraction(1, 2), (1, 2, 0): Fraction(1, 2),
            (0, 2, 2): Fraction(-1, 16), (0, 0, 5): Fraction(1, 960)})
    if key == "B3":
        return _coxeter_entry("B3", 3, 6, (6, 4, 2), {
            (2, 0, 1): Fraction(1, 2), (1, 2, 0): Fraction(1, 2),
            (0, 3, 1): Fraction(1, 6), (0, 2, 3): Fraction(1, 6),
            (0, 0, 7): Fraction(1, 210)})
    if key == "H3":
        return _coxeter_entry("H3", 3, 10, (10, 6, 2), {
            (2, 0, 1): Fraction(1, 2), (1, 2, 0): Fraction(1, 2),
            (0, 3, 2): Fraction(1, 6), (0, 2, 5): Fraction(1, 20),
            (0, 0, 11): Fraction(1, 3960)})
    if key == "A4":
        return _coxeter_entry("A4", 4, 5, (5, 4, 3, 2), {
            (2, 0, 0, 1): Fraction(1, 2), (1, 1, 1, 0): Fraction(1),
            (0, 3, 0, 0): Fraction(1, 2), (0, 0, 4, 0): Fraction(1, 3),
            (0, 1, 2, 1): Fraction(6), (0, 2, 0, 2): Fraction(9),
            (0, 0, 2, 3): Fraction(24), (0, 0, 0, 6): Fraction(216, 5)})
    if key == "B4":
        return _coxeter_entry("B4", 4, 8, (8, 6, 4, 2), {
            (2, 0, 0, 1): Fraction(1, 2), (1, 1, 1, 0): Fraction(1),
            (0, 3, 0, 0): Fraction(1), (0, 1, 3, 0): Fraction(1, 3),
            (0, 2, 1, 1): Fraction(3), (0, 0, 4, 1): Fraction(1, 4),
            (0, 1, 2, 2): Fraction(3), (0, 2, 0, 3): Fraction(6),
            (0, 0, 3, 3): Fraction(1), (0, 0, 2, 5): Fraction(18, 5),
            (0, 0, 0, 9): Fraction(18, 7)})
    if key == "D4":
        return _coxeter_entry("D4", 4, 6, (6, 4, 4, 2), {
            (2, 0, 0, 1): Fraction(1, 2), (1, 1, 1, 0): Fraction(1),
            (0, 3, 0, 1): Fraction(1), (0, 0, 3, 1): Fraction(1),
            (0, 1, 1, 3): Fraction(6), (0, 0, 0, 7): Fraction(54, 35)})
    if key == "F4":
        return _coxeter_entry("F4", 4, 12, (12, 8, 6, 2), {
            (2, 0, 0, 1): Fraction(1, 2), (1, 1, 1, 0): Fraction(1),
            (0, 3, 0, 1): Fraction(1, 18), (0, 0, 4, 1): Fraction(3, 4),
            (0, 1, 2, 3): Fraction(1, 2), (0, 2, 0, 5): Fraction(1, 60),
            (0, 0, 2, 7): Fraction(1, 28),
            (0, 0, 0, 13): Fraction(1, 2 ** 4 * 3 ** 2 * 11 * 13)})
    if key == "H4":
        return _coxeter_entry("H4", 4, 30, (30, 20, 12, 2), {
            (1, 1, 1, 0): Fraction(1), (2, 0, 0, 1): Fraction(1, 2),
            (0, 3, 0, 1): Fraction(2, 3), (0, 0, 5, 1): Fraction(1, 240),
            (0, 1, 3, 3): Fraction(1, 18), (0, 2, 1, 5): Fraction(1, 15),
            (0, 0, 4, 7): Fraction(1, 2 ** 3 * 3 ** 3 * 5),
            (0, 1, 2, 9): Fraction(1, 2 * 3 ** 4 * 5),
            (0, 2, 0, 11): Fraction(8, 3 ** 4 * 5 ** 2 * 11),
            (0, 0, 3, 13): Fraction(1, 2 ** 2 * 3 ** 6 * 5 ** 2),
            (0, 0, 2, 19): Fraction(2, 3 ** 8 * 5 ** 3 * 19),
            (0, 0, 0, 31): Fraction(32, 3 ** 13 * 5 ** 6 * 29 * 31)})
    if key == "CP1":
        F = ExpPolynomial(2, {
            ((2, 1), (0, 0)): QuadScalar(Fraction(1, 2)),
            ((0, 0), (0, 1)): QuadScalar(1)})
        return FrobeniusPotential(n=2, F=F, d=Fraction(1),
                                  q=(Fraction(0), Fraction(1)),
                                  r=(Fraction(0), Fraction(2)), name="CP1")
    if key == "CP2" or key.startswith("CP2("):
        if key.startswith("CP2("):
            order = int(key[4:-1])
        from .gwcp2 import truncated_potential
        return truncated_potential(order)
    raise KeyError(f"unknown catalog entry {name!r}")


CATALOG_NAMES = ["I2(3)", "I2(4)", "I2(5)", "A3", "B3", "H3",
                 "A4", "B4", "D4", "F4", "H4", "CP1", "CP2"]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def potential_to_dict(P: FrobeniusPotential) -> dict:
    ms = {c.m for c in P.F.terms.values() if not c.is_rational()}
    m = ms.pop() if ms else 1
    terms = []
    for (pows, exps), c in sorted(P.F.terms.items()):
        terms.append({"coeff": str(c), "powers": list(pows), "exps": list(exps)})
    out = {
        "n": P.n,
        "d": str(P.d),
        "q": [str(x) for x in P.q],
        "r": [str(x) for x in P.r],
        "discriminant": m,
        "terms": terms,
    }
    if P.name:
        out["name"] = P.name
    if P.exp_truncation is not None:
        out["exp_truncation"] = list(P.exp_truncation)
    return out


def potential_from_dict(data: dict) -> FrobeniusPotential:
    n = int(data["n"])
    terms = {}
    for t in data["terms"]:
        key = (tuple(int(x) for x in t["powers"]), tuple(int(x) for x in t["exps"]))
        terms[key] = parse_quad(str(t["coeff"]))
    F = ExpPolynomial(n, terms)
    trunc = data.get("exp_truncation")
    return FrobeniusPotential(
        n=n, F=F, d=Fraction(data["d"]),
        q=tuple(Fraction(x) for x in data["q"]),
        r=tuple(Fraction(x) for x in data["r"]),
        name=data.get("name", ""),
        exp_truncation=tuple(trunc) if trunc else None)


def potential_to_json(P: FrobeniusPotential) -> str:
    return json.dumps(potential_to_dict(P), indent=2)


def potential_from_json(text: str) -> FrobeniusPotential:
    return potential_from_dict(json.loads(text))
