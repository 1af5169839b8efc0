"""Landau-Ginzburg construction for the one-variable simple singularity
x^{n+1}: residue pairing on the versal deformation, flat coordinates and
reconstruction of the Frobenius potential.

The versal family is f_s(x) = x^{n+1} + s_1 + s_2 x + ... + s_n x^{n-1}.
The metric is eta_ij(s) = -(n+1) res_{x=inf} p_i p_j / f_s'(x) dx with
p_i = x^{i-1}, normalized so that eta_{1,n} = 1 (for n = 3 this is the
printed "-4 res" matrix [[0,0,1],[0,1,0],[1,0,-s3/2]]).  Flat coordinates
are found by a quasihomogeneous ansatz, and the potential from
c_abc = -(n+1) res_inf d_a P d_b P d_c P / d_x P.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from typing import Dict, List, Sequence, Tuple

from .exact.exppoly import ExpPolynomial, NotClosedFormError
from .exact.linalg import ExactMatrix
from .exact.scalars import QuadScalar
from .frobenius import FrobeniusPotential, _potential_from_gradient

# univariate polynomials over the multivariate coefficient ring: lists of
# ExpPolynomial coefficients, index = power of x


def _upoly_mul(a: List[ExpPolynomial], b: List[ExpPolynomial]) -> List[ExpPolynomial]:
    n = a[0].nvars if a else b[0].nvars
    out = [ExpPolynomial.zero(n) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            if bj.is_zero():
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def residue_at_infinity(p: Sequence, qd: Sequence) -> QuadScalar:
    """res_{x=inf} p(x)/qd(x) dx for scalar coefficient sequences
    (index = power).  Standard orientation: res_inf 1/x = -1.

    Computed by exact series division: with x = 1/z the form becomes
    -p(1/z)/qd(1/z) dz/z^2 and the residue is read off the z^{-1}
    coefficient, i.e. minus the coefficient of z in p(1/z)/qd(1/z)."""
    pc = [QuadScalar.coerce(c) for c in p]
    qc = [QuadScalar.coerce(c) for c in qd]
    while qc and not qc[-1]:
        qc.pop()
    while pc and not pc[-1]:
        pc.pop()
    if not qc:
        raise ZeroDivisionError("zero denominator")
    if not pc or len(qc) == 1:
        return QuadScalar(0)  # a polynomial has zero residue at infinity
    return _residue_series(pc, qc)


def _residue_series(pc, qc):
    """Shared exact expansion: works for QuadScalar or ExpPolynomial
    coefficients.  Returns -(coefficient of z in p(1/z)/qd(1/z))."""
    degp, degq = len(pc) - 1, len(qc) - 1
    # p(1/z)/q(1/z) = z^{degq-degp} * prev(z)/qrev(z) with reversed coeffs
    prev = list(reversed(pc))
    qrev = list(reversed(qc))
    shift = degq - degp
    # need coefficient of z^{1} overall => coefficient of z^{1-shift} in
    # prev/qrev as a power series (exists since qrev[0] = lead coeff != 0)
    want = 1 - shift
    if want < 0:
        zero = pc[0] * 0 if pc else qc[0] * 0
        return zero - zero  # exact zero of the right type
    lead_inv = _invert(qrev[0])
    series = []
    for k in range(want + 1):
        acc = prev[k] if k < len(prev) else prev[0] * 0
        for i in range(1, k + 1):
            if i < len(qrev):
                acc = acc - qrev[i] * series[k - i]
        series.append(acc * lead_inv)
    return -series[want]


def _invert(c):
    if isinstance(c, QuadScalar):
        return c.inverse()
    if isinstance(c, ExpPolynomial):
        if not c.is_constant():
            raise NotClosedFormError("leading coefficient must be constant")
        return ExpPolynomial.constant(c.nvars, c.constant_term().inverse())
    return 1 / c


def _residue_at_infinity_sym(p: List[ExpPolynomial], qd: List[ExpPolynomial]
                             ) -> ExpPolynomial:
    """res_inf for univariate polynomials whose coefficients are themselves
    polynomials in the deformation parameters."""
    qc = list(qd)
    while qc and qc[-1].is_zero():
        qc.pop()
    pc = list(p)
    while pc and pc[-1].is_zero():
        pc.pop()
    if not pc:
        return ExpPolynomial.zero(qd[0].nvars)
    return _residue_series(pc, qc)


def _versal(n: int) -> Tuple[List[ExpPolynomial], List[ExpPolynomial]]:
    """f_s = x^{n+1} + sum s_i x^{i-1} in variables s_1..s_n; returns
    (f as x-coefficient list, f' list)."""
    zero = ExpPolynomial.zero(n)
    f = [ExpPolynomial.variable(n, i) for i in range(n)]      # s_1..s_n
    f.append(zero)                                            # x^n
    f.append(ExpPolynomial.constant(n, 1))                    # x^{n+1}
    fp = [f[k].scale(k) for k in range(1, n + 2)]
    return f, fp


def a_n_metric(n: int) -> List[List[ExpPolynomial]]:
    """eta_ij(s) = -(n+1) res_inf [x^{i-1} x^{j-1} / f_s'] symbolically in
    s_1..s_n (desk scale n <= 6)."""
    if not 1 <= n <= 6:
        raise ValueError("a_n_metric is desk-scale: 1 <= n <= 6")
    _, fp = _versal(n)
    zero = ExpPolynomial.zero(n)
    eta = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            mono = [zero] * (i + j + 1)
            mono[i + j] = ExpPolynomial.constant(n, 1)
            val = _residue_at_infinity_sym(mono, fp).scale(-(n + 1))
            eta[i][j] = val
            eta[j][i] = val
    return eta


def flat_coordinates(n: int) -> List[ExpPolynomial]:
    """Substitution s_i(t) making the residue metric constant.

    Quasihomogeneous ansatz (deg x = 1, deg s_i = deg t_i = n + 2 - i):
    s_i = t_i + corrections with unknown rational coefficients, solved
    exactly; the solution with no t_i-linear corrections is returned."""
    if not 1 <= n <= 4:
        raise ValueError("flat_coordinates is desk-scale: 1 <= n <= 4")
    eta = a_n_metric(n)
    degrees = [n + 2 - (i + 1) for i in range(n)]  # of t_1..t_n

    # candidate correction monomials for each s_i: products of t_2..t_n with
    # matching weighted degree, at least quadratic
    def monomials(target: int) -> List[Tuple[int, ...]]:
        out = []

        def rec(var: int, left: int, stack: List[int]):
            if left == 0:
                if sum(stack) >= 2:
                    pows = [0] * n
                    for v in stack:
                        pows[v] += 1
                    out.append(tuple(pows))
                return
            if var >= n:
                return
            dmax = left // degrees[var]
            for cnt in range(dmax + 1):
                rec(var + 1, left - cnt * degrees[var], stack + [var] * cnt)

        rec(1, target, [])
        return sorted(set(out))

    candidates = [monomials(degrees[i]) for i in range(n)]
    unknown_count = sum(len(c) for c in candidates)
    if unknown_count == 0:
        return [ExpPolynomial.variable(n, i) for i in range(n)]

    # the defect eta(s(t)) - const is affine in the unknown correction
    # coefficients for this ansatz (the s-dependent metric entries pair only
    # with unit Jacobian blocks at the relevant weights), so probing each
    # unknown yields an exact linear system; solve it and verify
    from fractions import Fraction as Fr
    unknown_index = {}
    k = 0
    for i in range(n):
        for mono in candidates[i]:
            unknown_index[(i, mono)] = k
            k += 1

    def build_subs(vals: Sequence[Fr]) -> List[ExpPolynomial]:
        subs = []
        for i in range(n):
            s = ExpPolynomial.variable(n, i)
            for mono in candidates[i]:
                coeff = vals[unknown_index[(i, mono)]]
                if coeff:
                    s = s + ExpPolynomial.monomial(n, coeff, mono)
            subs.append(s)
        return subs

    def defect(vals: Sequence[Fr]) -> Dict[Tuple, Fr]:
        subs = build_subs(vals)
        jac = [[subs[i].diff(a) for a in range(n)] for i in range(n)]
        out: Dict[Tuple, Fr] = {}
        for a in range(n):
            for b in range(a, n):
                acc = ExpPolynomial.zero(n)
                for i in range(n):
                    for j in range(n):
                        term = jac[i][a] * jac[j][b]
                        if term.is_zero():
                            continue
                        acc = acc + eta[i][j].substitute(subs) * term
                for (pows, exps), coeff in acc.terms.items():
                    if sum(pows) == 0:
                        continue
                    if not coeff.is_rational():
                        raise NotClosedFormError("unexpected irrational entry")
                    out[(a, b, pows)] = out.get((a, b, pows), Fr(0)) + coeff.a
        return {key: v for key, v in out.items() if v}

    zero_vals = [Fr(0)] * unknown_count
    r0 = defect(zero_vals)
    columns = []
    keys = set(r0)
    for idx in range(unknown_count):
        probe = list(zero_vals)
        probe[idx] = Fr(1)
        ri = defect(probe)
        keys |= set(ri)
        columns.append(ri)
    keys = sorted(keys)
    # rows: sum_idx (ri - r0)[key] x_idx = -r0[key]
    rows = []
    rhs = []
    for key in keys:
        rows.append([columns[idx].get(key, Fr(0)) - r0.get(key, Fr(0))
                     for idx in range(unknown_count)])
        rhs.append(-r0.get(key, Fr(0)))
    solution = _solve_rectangular(rows, rhs)
    if solution is None:
        raise NotClosedFormError("flat-coordinate ansatz degree exhausted")
    if defect(solution):
        raise NotClosedFormError("flat-coordinate system is not affine; "
                                 "ansatz insufficient")
    return build_subs(solution)


def _solve_rectangular(rows: List[List[Fraction]], rhs: List[Fraction]
                       ) -> List[Fraction] | None:
    """Exact solve of an overdetermined consistent linear system; None if
    inconsistent.  Free variables are set to zero."""
    m = len(rows)
    if m == 0:
        return []
    k = len(rows[0])
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][k] != 0:
            return None
    out = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        out[c] = aug[i][k]
    return out


def a_n_structure(n: int) -> Tuple[List[List[List[ExpPolynomial]]], FrobeniusPotential]:
    """c_abc(t) = -(n+1) res_inf [d_a P d_b P d_c P / d_x P] with
    P_t(x) = f_{s(t)}(x), integrated exactly to the Frobenius potential
    (no quadratic part).  The charge is d = (n-1)/(n+1) with
    q_a = (a-1)/(n+1)."""
    subs = flat_coordinates(n)
    f, _ = _versal(n)
    P = [coef.substitute(subs) for coef in f]  # x-coefficients, in t now
    Pp = [P[k].scale(k) for k in range(1, len(P))]
    dP = []
    for a in range(n):
        dP.append([c.diff(a) for c in P])
    zero = ExpPolynomial.zero(n)
    c_low = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ab = _upoly_mul(dP[a], dP[b])
            for g in range(b, n):
                num = _upoly_mul(ab, dP[g])
                val = _residue_at_infinity_sym(num, Pp).scale(-(n + 1))
                for i, j, k in {(a, b, g), (a, g, b), (b, a, g),
                                (b, g, a), (g, a, b), (g, b, a)}:
                    c_low[i][j][k] = val
    # integrate c to F: first to the Hessian, then twice more
    xi = []
    for a in range(n):
        grads = [_potential_from_gradient(c_low[a][b]) for b in range(n)]
        xi.append(_potential_from_gradient(grads))
    F = _potential_from_gradient(xi)
    # strip any quadratic-or-lower part
    F = ExpPolynomial(n, {key: c for key, c in F.terms.items() if sum(key[0]) >= 3})
    d = Fraction(n - 1, n + 1)
    q = tuple(Fraction(a, n + 1) for a in range(n))
    pot = FrobeniusPotential(n=n, F=F, d=d, q=q,
                             r=tuple(Fraction(0) for _ in range(n)),
                             name=f"A{n}")
    return c_low, pot
