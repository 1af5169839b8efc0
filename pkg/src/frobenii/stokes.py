"""Stokes matrices: braid action, sign-quotient canonical forms, orbits,
Markoff classification, reducibility, tensor products, Coxeter data and the
projective-plane monodromy identities.

A Stokes matrix is upper triangular with unit diagonal over a quadratic
field.  The braid generator sigma_i acts by S -> K S K with K the
elementary matrix carrying [[0,1],[1,-s_{i,i+1}]] in the (i,i+1) block, and
matrices are identified modulo S ~ J S J, J = diag(+-1).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .exact.linalg import ExactMatrix, eigen_small, sort_spectrum
from .exact.scalars import QuadScalar, parse_quad

DEFAULT_ORBIT_CAP = 10 ** 6


class StokesMatrix:
    """Upper-triangular, unit-diagonal square matrix over Q(sqrt m)."""

    __slots__ = ("n", "mat")

    def __init__(self, entries: Sequence[Sequence] | ExactMatrix):
        if isinstance(entries, ExactMatrix):
            mat = entries
        else:
            mat = ExactMatrix(entries)
        self.n = mat.n
        for i in range(self.n):
            if mat[i, i] != QuadScalar(1):
                raise ValueError("diagonal entries must equal 1")
            for j in range(i):
                if mat[i, j]:
                    raise ValueError("matrix must be upper triangular")
        self.mat = mat

    @staticmethod
    def from_upper(n: int, upper: Dict[Tuple[int, int], QuadScalar | Fraction | int]
                   ) -> "StokesMatrix":
        rows = [[QuadScalar(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for (i, j), v in upper.items():
            if not i < j:
                raise ValueError("upper entries need i < j")
            rows[i][j] = QuadScalar.coerce(v)
        return StokesMatrix(rows)

    @staticmethod
    def from_triple(x, y, z) -> "StokesMatrix":
        """n = 3 shorthand: entries (s12, s13, s23) = (x, y, z)."""
        return StokesMatrix.from_upper(3, {(0, 1): x, (0, 2): y, (1, 2): z})

    def triple(self) -> Tuple[QuadScalar, QuadScalar, QuadScalar]:
        if self.n != 3:
            raise ValueError("triple() needs n = 3")
        return self.mat[0, 1], self.mat[0, 2], self.mat[1, 2]

    def __getitem__(self, ij):
        return self.mat[ij]

    def __eq__(self, other):
        return isinstance(other, StokesMatrix) and self.mat == other.mat

    def __hash__(self):
        return hash(self.key())

    def key(self) -> Tuple:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = self.mat[i, j]
                out.append((c.a, c.b, c.m))
        return tuple(out)

    def __repr__(self):
        return f"StokesMatrix({self.mat!r})"


# ---------------------------------------------------------------------------
# braid action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    """Sequence of signed generator indices: +i means sigma_i (1-based),
    -i its inverse."""
    letters: Tuple[int, ...]

    def __post_init__(self):
        if any(ell == 0 for ell in self.letters):
            raise ValueError("generator indices are nonzero signed integers")

    @staticmethod
    def parse(text: str) -> "BraidWord":
        text = text.strip()
        if not text:
            return BraidWord(())
        return BraidWord(tuple(int(tok) for tok in text.replace(",", " ").split()))


def _elementary(S: StokesMatrix, i: int) -> ExactMatrix:
    """K^{(i)}(S): identity outside the (i, i+1) block [[0, 1], [1, -s]]."""
    n = S.n
    K = ExactMatrix.identity(n)
    s = S.mat[i, i + 1]
    K[i, i] = 0
    K[i, i + 1] = 1
    K[i + 1, i] = 1
    K[i + 1, i + 1] = -s
    return K


def _elementary_inv(S: StokesMatrix, i: int) -> ExactMatrix:
    """Ktilde for the inverse generator: block [[-s, 1], [1, 0]]."""
    n = S.n
    K = ExactMatrix.identity(n)
    s = S.mat[i, i + 1]
    K[i, i] = -s
    K[i, i + 1] = 1
    K[i + 1, i] = 1
    K[i + 1, i + 1] = 0
    return K


def braid_generator(S: StokesMatrix, letter: int) -> StokesMatrix:
    i = abs(letter) - 1
    if not 0 <= i < S.n - 1:
        raise ValueError(f"generator {letter} out of range for n = {S.n}")
    K = _elementary(S, i) if letter > 0 else _elementary_inv(S, i)
    return StokesMatrix(K @ S.mat @ K)


def braid_apply(S: StokesMatrix, word: BraidWord | Sequence[int] | str) -> StokesMatrix:
    if isinstance(word, str):
        word = BraidWord.parse(word)
    letters = word.letters if isinstance(word, BraidWord) else tuple(word)
    out = S
    for letter in letters:
        out = braid_generator(out, letter)
    return out


def _greedy_signs(n: int, entries: Dict[Tuple[int, int], QuadScalar]) -> List[int]:
    """Sign vector of the row-major greedy normalization (eps of the first
    touched index of each component is +1; each first adjustable nonzero
    entry is made lex-nonnegative)."""
    eps: List[Optional[int]] = [None] * n
    for i in range(n):
        for j in range(i + 1, n):
            v = entries.get((i, j))
            if not v:
                continue
            if eps[i] is None and eps[j] is None:
                eps[i] = 1
                eps[j] = 1 if v.lex_nonneg() else -1
            elif eps[j] is None:
                w = v if eps[i] == 1 else -v
                eps[j] = 1 if w.lex_nonneg() else -1
            elif eps[i] is None:
                w = v if eps[j] == 1 else -v
                eps[i] = 1 if w.lex_nonneg() else -1
            # both fixed: the entry is no longer adjustable
    return [1 if e is None else e for e in eps]


def canonical_form(S: StokesMatrix) -> StokesMatrix:
    """Representative of {J S J : J = diag(+-1)}: scanning the upper entries
    row-major, greedily pick signs eps_j so each first sign-adjustable
    nonzero entry becomes lex-nonnegative."""
    n = S.n
    entries = {(i, j): S.mat[i, j] for i in range(n) for j in range(i + 1, n)}
    signs = _greedy_signs(n, entries)
    rows = [[S.mat[i, j] * (signs[i] * signs[j]) if j > i else S.mat[i, j]
             for j in range(n)] for i in range(n)]
    return StokesMatrix(rows)


@dataclass
class OrbitResult:
    finite: bool
    size: int
    representatives: List[StokesMatrix]
    frontier: int = 0


def _triple_step(x, y, z, letter: int):
    """Closed-form n = 3 braid action on (s12, s13, s23); agrees with the
    matrix route (tested against it)."""
    if letter == 1:
        return -x, z, y - x * z
    if letter == 2:
        return y, x - y * z, -z
    if letter == -1:
        return -x, z - x * y, y
    if letter == -2:
        return y - x * z, x, -z
    raise ValueError("n = 3 letters are +-1, +-2")


def _canonical_triple(x, y, z):
    signs = _greedy_signs(3, {(0, 1): x, (0, 2): y, (1, 2): z})
    return (x * (signs[0] * signs[1]), y * (signs[0] * signs[2]),
            z * (signs[1] * signs[2]))


def orbit(S: StokesMatrix, max_size: int | None = None,
          keep_representatives: int = 16) -> OrbitResult:
    """BFS over sigma_1..sigma_{n-1} and inverses on canonical forms.

    For n = 3 the closed-form triple action is used for speed; it is the
    same action as the elementary-matrix route."""
    if max_size is None:
        max_size = int(os.environ.get("FROBENII_MAX_ORBIT", DEFAULT_ORBIT_CAP))
    if S.n == 3:
        return _orbit_triples(S, max_size, keep_representatives)
    start = canonical_form(S)
    seen: Set[Tuple] = {start.key()}
    keep = [start]
    frontier = [start]
    gens = [i for i in range(1, S.n)]
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                for letter in (g, -g):
                    img = canonical_form(braid_generator(M, letter))
                    k = img.key()
                    if k not in seen:
                        seen.add(k)
                        if len(keep) < keep_representatives:
                            keep.append(img)
                        nxt.append(img)
                        if len(seen) > max_size:
                            return OrbitResult(finite=False, size=len(seen),
                                               representatives=keep,
                                               frontier=len(nxt))
        frontier = nxt
    return OrbitResult(finite=True, size=len(seen), representatives=keep)


def _orbit_triples(S: StokesMatrix, max_size: int, keep_representatives: int
                   ) -> OrbitResult:
    x0, y0, z0 = (canonical_form(S)).triple()
    start = (x0, y0, z0)
    seen = {start}
    keep = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for trip in frontier:
            for letter in (1, -1, 2, -2):
                img = _canonical_triple(*_triple_step(*trip, letter))
                if img not in seen:
                    seen.add(img)
                    if len(keep) < keep_representatives:
                        keep.append(img)
                    nxt.append(img)
                    if len(seen) > max_size:
                        reps = [StokesMatrix.from_triple(*t) for t in keep]
                        return OrbitResult(finite=False, size=len(seen),
                                           representatives=reps,
                                           frontier=len(nxt))
        frontier = nxt
    reps = [StokesMatrix.from_triple(*t) for t in keep]
    return OrbitResult(finite=True, size=len(seen), representatives=reps)


# ---------------------------------------------------------------------------
# Markoff form, reducibility, spectra
# ---------------------------------------------------------------------------

def markoff_form(x, y, z) -> QuadScalar:
    """x^2 + y^2 + z^2 - x y z (vanishes on 3x3 Stokes data of unipotent
    type; the quantum-cohomology triple of the plane is (3, 3, 3))."""
    x, y, z = (QuadScalar.coerce(v) for v in (x, y, z))
    return x * x + y * y + z * z - x * y * z


def is_markoff_times3(x, y, z) -> bool:
    """True iff (x, y, z) = 3 (x1, y1, z1) with integer x1, y1, z1 solving
    x1^2 + y1^2 + z1^2 = 3 x1 y1 z1."""
    vals = []
    for v in (x, y, z):
        v = QuadScalar.coerce(v)
        if not v.is_rational() or v.a.denominator != 1 or v.a % 3 != 0:
            return False
        vals.append(int(v.a) // 3)
    x1, y1, z1 = vals
    return x1 * x1 + y1 * y1 + z1 * z1 == 3 * x1 * y1 * z1


def is_reducible(S: StokesMatrix) -> Tuple[bool, Optional[Tuple[List[int], List[int]]]]:
    """S is reducible iff some bipartition I' | I'' has all cross entries
    zero; returns the certificate partition (1-based indices)."""
    n = S.n
    if n > 12:
        raise ValueError("reducibility scan is desk-scale: n <= 12")
    # index 0 always stays in the complement, halving the scan
    for mask in range(1, 2 ** (n - 1)):
        I1 = [i for i in range(1, n) if (mask >> (i - 1)) & 1]
        I2 = [i for i in range(n) if i not in I1]
        ok = True
        for i in I1:
            for j in I2:
                a, b = (i, j) if i < j else (j, i)
                if S.mat[a, b]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True, ([i + 1 for i in I2], [i + 1 for i in I1])
    return False, None


def unipotency_charpoly(S: StokesMatrix) -> List[QuadScalar]:
    """Exact characteristic polynomial of S^T S^{-1} (coefficients low to
    high, monic)."""
    M = S.mat.transpose() @ S.mat.inverse()
    return M.charpoly()


def unipotency_spectrum(S: StokesMatrix, tol: float = 1e-9) -> List[complex]:
    """Eigenvalues of S^T S^{-1}: exact characteristic polynomial, numeric
    roots."""
    M = S.mat.transpose() @ S.mat.inverse()
    num = np.array([[complex(M[i, j]) for j in range(S.n)] for i in range(S.n)])
    lam, _ = eigen_small(num, tol=tol)
    return sort_spectrum(lam)


def tensor(S1: StokesMatrix, S2: StokesMatrix) -> StokesMatrix:
    """Kronecker product with row-major double indices ((i', i'') before
    (j', j'') iff i' < j' or i' = j', i'' < j'')."""
    n1, n2 = S1.n, S2.n
    N = n1 * n2
    rows = [[QuadScalar(0)] * N for _ in range(N)]
    for i1 in range(n1):
        for i2 in range(n2):
            for j1 in range(n1):
                for j2 in range(n2):
                    rows[i1 * n2 + i2][j1 * n2 + j2] = S1.mat[i1, j1] * S2.mat[i2, j2]
    return StokesMatrix(rows)


# ---------------------------------------------------------------------------
# Coxeter graphs and reflection machinery
# ---------------------------------------------------------------------------

_COS_VALUES = {
    3: QuadScalar(Fraction(-1)),
    4: QuadScalar(0, -1, 2),
    5: QuadScalar(Fraction(-1, 2), Fraction(-1, 2), 5),
    6: QuadScalar(0, -1, 3),
}


def coxeter_stokes(graph: Iterable[Tuple[int, int, int]], n: int | None = None
                   ) -> StokesMatrix:
    """S_{ij} = -2 cos(pi/m_ij) on edges (1-based nodes), 0 otherwise; exact
    values exist for m in {3, 4, 5, 6}."""
    edges = list(graph)
    if n is None:
        n = max(max(i, j) for i, j, _ in edges)
    upper: Dict[Tuple[int, int], QuadScalar] = {}
    for i, j, m in edges:
        if i == j:
            raise ValueError("no loops in a Coxeter graph")
        if m < 3:
            raise ValueError("edge labels must be >= 3")
        if m not in _COS_VALUES:
            raise ValueError(f"-2 cos(pi/{m}) is not a quadratic irrationality")
        a, b = sorted((i - 1, j - 1))
        upper[(a, b)] = _COS_VALUES[m]
    return StokesMatrix.from_upper(n, upper)


def gram_and_reflections(S: StokesMatrix) -> Tuple[ExactMatrix, List[ExactMatrix]]:
    """G = (S + S^T)/2 and the reflections R_j: x_j -> x_j - sum_k
    (S + S^T)_{jk} x_k (identity on the other coordinates).  Each R_j is an
    involution preserving the quadratic form with Gram matrix S + S^T.
    Requires det(S + S^T) != 0."""
    A = S.mat + S.mat.transpose()
    if not A.det():
        raise ValueError("S + S^T is degenerate")
    G = A.scale(Fraction(1, 2))
    refs = []
    n = S.n
    for j in range(n):
        R = ExactMatrix.identity(n)
        for k in range(n):
            R[j, k] = (QuadScalar(1 if j == k else 0)) - A[j, k]
        refs.append(R)
    return G, refs


# ---------------------------------------------------------------------------
# CP2 modular identities
# ---------------------------------------------------------------------------

@dataclass
class Cp2ModularReport:
    t0_cubed_is_minus_one: bool
    conjugation_identities: bool
    form_preserved: bool
    b_cubed_is_one: bool

    @property
    def passed(self) -> bool:
        return (self.t0_cubed_is_minus_one and self.conjugation_identities
                and self.form_preserved and self.b_cubed_is_one)


def cp2_modular_check() -> Cp2ModularReport:
    """Exact identities of the quantum-cohomology monodromy group of the
    plane: with T the e^{2 pi i/3}-rotation matrix and T0 = T R1, one has
    T0^3 = -1, R2 = T0^{-1} R1 T0, R3 = T0^{-1} R2 T0, and all generators
    preserve q(x,y,z) = 2(x^2+y^2+z^2+3xy-3xz-3yz)."""
    S = stokes_catalog("CP2-monodromy")
    A = S.mat + S.mat.transpose()
    _, refs = gram_and_reflections(S)
    R1, R2, R3 = refs
    T = ExactMatrix([[0, -1, 0], [0, 0, 1], [-1, -3, 3]])
    T0 = T @ R1
    expect_T0 = ExactMatrix([[0, -1, 0], [0, 0, 1], [1, 0, 0]])
    minus_I = ExactMatrix.identity(3).scale(-1)
    ok_t0 = (T0 == expect_T0) and (T0 @ T0 @ T0 == minus_I)
    ok_conj = True
    T0_inv = (T0 @ T0).scale(-1)   # T0^{-1} = -T0^2 since T0^3 = -1
    ok_conj &= (T0_inv @ R1 @ T0 == R2)
    ok_conj &= (T0_inv @ R2 @ T0 == R3)
    ok_form = all(M.transpose() @ A @ M == A for M in (R1, R2, R3, T, T0))
    B = T0.scale(-1)
    ok_b = (B @ B @ B == ExactMatrix.identity(3))
    return Cp2ModularReport(bool(ok_t0), bool(ok_conj), bool(ok_form), bool(ok_b))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def stokes_catalog(name: str) -> StokesMatrix:
    key = name.strip().upper().replace(" ", "")
    phi_plus = QuadScalar(Fraction(1, 2), Fraction(1, 2), 5)     # (1+sqrt5)/2
    phi_minus = QuadScalar(Fraction(-1, 2), Fraction(1, 2), 5)   # (-1+sqrt5)/2
    phi_conj = QuadScalar(Fraction(1, 2), Fraction(-1, 2), 5)    # (1-sqrt5)/2
    if key == "CP1":
        return StokesMatrix.from_upper(2, {(0, 1): 2})
    if key == "CP2":
        return StokesMatrix.from_triple(3, 3, 3)
    if key == "CP2-MONODROMY":
        # the sign-equivalent representative whose Gram matrix carries the
        # printed reflection/rotation matrices: (x, y, z) = (3, -3, -3)
        return StokesMatrix.from_triple(3, -3, -3)
    if key == "D4-NONSTD":
        return StokesMatrix.from_upper(4, {
            (0, 1): -1, (0, 3): 1, (1, 2): -1, (1, 3): -1, (2, 3): 1})
    if key == "F4-NONSTD":
        rt2 = QuadScalar(0, 1, 2)
        return StokesMatrix.from_upper(4, {
            (0, 1): -1, (0, 3): rt2, (1, 2): -rt2, (1, 3): -rt2, (2, 3): 1})
    if key == "H4-NONSTD-1":
        return StokesMatrix.from_upper(4, {
            (0, 1): -1, (0, 3): phi_plus, (1, 2): -1, (1, 3): -phi_plus,
            (2, 3): phi_minus})
    if key == "H4-NONSTD-2":
        return StokesMatrix.from_upper(4, {
            (0, 1): -1, (0, 3): phi_plus, (1, 2): -phi_plus, (1, 3): -phi_plus,
            (2, 3): 1})
    if key == "H4-NONSTD-3":
        return StokesMatrix.from_upper(4, {
            (0, 1): -1, (0, 3): phi_conj, (1, 2): -phi_conj, (1, 3): -phi_conj,
            (2, 3): 1})
    if key in ("A3", "A3-GRAPH"):
        return coxeter_stokes([(1, 2, 3), (2, 3, 3)])
    if key in ("B3", "B3-GRAPH"):
        return coxeter_stokes([(1, 2, 4), (2, 3, 3)])
    if key in ("H3", "H3-GRAPH"):
        return coxeter_stokes([(1, 2, 5), (2, 3, 3)])
    if key == "B2":
        return coxeter_stokes([(1, 2, 4)])
    raise KeyError(f"unknown Stokes catalog entry {name!r}")


STOKES_CATALOG_NAMES = ["CP1", "CP2", "CP2-monodromy", "D4-nonstd", "F4-nonstd",
                        "H4-nonstd-1", "H4-nonstd-2", "H4-nonstd-3",
                        "A3-graph", "B3-graph", "H3-graph", "B2"]


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def stokes_to_dict(S: StokesMatrix) -> dict:
    ms = {S.mat[i, j].m for i in range(S.n) for j in range(S.n)
          if not S.mat[i, j].is_rational()}
    return {
        "n": S.n,
        "m": ms.pop() if ms else 1,
        "rows": [[str(S.mat[i, j]) for j in range(S.n)] for i in range(S.n)],
    }


def stokes_from_dict(data: dict) -> StokesMatrix:
    rows = [[parse_quad(str(x)) for x in row] for row in data["rows"]]
    return StokesMatrix(rows)


def stokes_to_json(S: StokesMatrix) -> str:
    return json.dumps(stokes_to_dict(S), indent=2)


def stokes_from_json(text: str) -> StokesMatrix:
    return stokes_from_dict(json.loads(text))


def orbit_report(result: OrbitResult, cap: int) -> dict:
    out: dict = {"cap": cap}
    if result.finite:
        out["size"] = result.size
    else:
        out["exceeded"] = True
        out["visited"] = result.size
        out["frontier"] = result.frontier
    out["representatives"] = [stokes_to_dict(S) for S in result.representatives[:8]]
    return out
