"""Small dense linear algebra: exact over Q(sqrt m), numeric over C.

Exact routines run plain Gaussian elimination with nonzero pivoting (every
QuadScalar is invertible, so no growth control is needed at desk scale) and
Faddeev-LeVerrier for characteristic polynomials.  The numeric eigensolver
follows the characteristic-polynomial route: closed-form roots up to quartic,
companion-matrix iteration beyond, eigenvectors from an SVD null space.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .scalars import QuadScalar, ScalarLike


class SingularMatrixError(ZeroDivisionError):
    pass


Row = List[QuadScalar]


class ExactMatrix:
    """Square matrix over one quadratic field."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[ScalarLike]]):
        self.n = len(rows)
        self.rows: List[Row] = [[QuadScalar.coerce(x) for x in r] for r in rows]
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")

    # -- constructors ----------------------------------------------------
    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(n: int) -> "ExactMatrix":
        return ExactMatrix([[0] * n for _ in range(n)])

    def copy(self) -> "ExactMatrix":
        return ExactMatrix([list(r) for r in self.rows])

    def __getitem__(self, ij: Tuple[int, int]) -> QuadScalar:
        return self.rows[ij[0]][ij[1]]

    def __setitem__(self, ij: Tuple[int, int], v: ScalarLike):
        self.rows[ij[0]][ij[1]] = QuadScalar.coerce(v)

    # -- algebra -----------------------------------------------------------
    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix([[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c: ScalarLike) -> "ExactMatrix":
        c = QuadScalar.coerce(c)
        return ExactMatrix([[a * c for a in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        n = self.n
        out = [[QuadScalar(0)] * n for _ in range(n)]
        for i in range(n):
            ri = self.rows[i]
            for k in range(n):
                a = ri[k]
                if not a:
                    continue
                rk = other.rows[k]
                oi = out[i]
                for j in range(n):
                    if rk[j]:
                        oi[j] = oi[j] + a * rk[j]
        return ExactMatrix(out)

    def matvec(self, v: Sequence[ScalarLike]) -> List[QuadScalar]:
        vv = [QuadScalar.coerce(x) for x in v]
        return [sum((a * x for a, x in zip(r, vv)), QuadScalar(0)) for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.rows[j][i] for j in range(self.n)] for i in range(self.n)])

    def trace(self) -> QuadScalar:
        return sum((self.rows[i][i] for i in range(self.n)), QuadScalar(0))

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"ExactMatrix({body})"

    # -- solving -------------------------------------------------------------
    def solve(self, rhs: Sequence[ScalarLike]) -> List[QuadScalar]:
        return exact_solve(self, rhs)

    def inverse(self) -> "ExactMatrix":
        n = self.n
        aug = [list(r) + [QuadScalar(1 if i == j else 0) for j in range(n)]
               for i, r in enumerate(self.rows)]
        _eliminate(aug, n)
        return ExactMatrix([row[n:] for row in aug])

    def det(self) -> QuadScalar:
        n = self.n
        a = [list(r) for r in self.rows]
        det = QuadScalar(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return QuadScalar(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det = det * a[col][col]
            inv = a[col][col].inverse()
            for r in range(col + 1, n):
                f = a[r][col] * inv
                if not f:
                    continue
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col][c]
        return det

    def charpoly(self) -> List[QuadScalar]:
        """Coefficients [c0..cn] of det(lambda*I - M) = sum c_k lambda^k (c_n = 1).

        Faddeev-LeVerrier; divisions are by integers only.
        """
        n = self.n
        M = ExactMatrix.zeros(n)
        coeffs = [QuadScalar(0)] * (n + 1)
        coeffs[n] = QuadScalar(1)
        I = ExactMatrix.identity(n)
        for k in range(1, n + 1):
            M = self @ (M + I.scale(coeffs[n - k + 1]))
            coeffs[n - k] = -(M.trace() / k)
        return coeffs


def _eliminate(aug: List[List[QuadScalar]], n: int):
    """In-place Gauss-Jordan on an n x m augmented system, m >= n."""
    m = len(aug[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrixError(f"singular at column {col}")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r == col or not aug[r][col]:
                continue
            f = aug[r][col]
            aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    _ = m


def exact_solve(A: ExactMatrix | Sequence[Sequence[ScalarLike]],
                rhs: Sequence[ScalarLike]) -> List[QuadScalar]:
    """Solve A x = rhs exactly; raises SingularMatrixError if A is singular."""
    if not isinstance(A, ExactMatrix):
        A = ExactMatrix(A)
    n = A.n
    if len(rhs) != n:
        raise ValueError("rhs length mismatch")
    aug = [list(r) + [QuadScalar.coerce(rhs[i])] for i, r in enumerate(A.rows)]
    _eliminate(aug, n)
    return [aug[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# numeric eigenproblem (characteristic-polynomial route)
# ---------------------------------------------------------------------------

def _charpoly_complex(M: np.ndarray) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest power first."""
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    Mk = np.zeros_like(M)
    I = np.eye(n, dtype=complex)
    c = 1.0 + 0j
    for k in range(1, n + 1):
        Mk = M @ (Mk + c * I)
        c = -np.trace(Mk) / k
        coeffs[k] = c
    return coeffs


def _roots_closed_form(coeffs: Sequence[complex]) -> List[complex]:
    """Roots of a monic polynomial of degree <= 4 by radicals."""
    deg = len(coeffs) - 1
    if deg == 1:
        return [-coeffs[1]]
    if deg == 2:
        _, b, c = coeffs
        disc = cmath.sqrt(b * b - 4 * c)
        return [(-b + disc) / 2, (-b - disc) / 2]
    if deg == 3:
        _, a, b, c = coeffs
        # depressed cubic y^3 + p y + q, x = y - a/3
        p = b - a * a / 3
        q = 2 * a ** 3 / 27 - a * b / 3 + c
        shift = -a / 3
        if abs(p) < 1e-300:
            r = (-q) ** (1 / 3) if q != 0 else 0j
            w = cmath.exp(2j * cmath.pi / 3)
            return [shift + r, shift + r * w, shift + r * w * w]
        disc = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
        u3 = -q / 2 + disc
        if abs(u3) < 1e-300:
            u3 = -q / 2 - disc
        u = u3 ** (1 / 3)
        w = cmath.exp(2j * cmath.pi / 3)
        roots = []
        for j in range(3):
            uj = u * w ** j
            roots.append(shift + uj - p / (3 * uj))
        return roots
    if deg == 4:
        _, a, b, c, d = coeffs
        # depressed quartic y^4 + p y^2 + q y + r, x = y - a/4
        p = b - 3 * a * a / 8
        q = c - a * b / 2 + a ** 3 / 8
        r = d - a * c / 4 + a * a * b / 16 - 3 * a ** 4 / 256
        shift = -a / 4
        if abs(q) < 1e-14 * (1 + abs(p) + abs(r)):
            # biquadratic
            z1, z2 = _roots_closed_form([1, p, r])
            out = []
            for z in (z1, z2):
                s = cmath.sqrt(z)
                out.extend([shift + s, shift - s])
            return out
        # resolvent cubic for Ferrari: z^3 - p z^2 - 4 r z + (4 p r - q^2) = 0
        res = _roots_closed_form([1, -p, -4 * r, 4 * p * r - q * q])
        z = max(res, key=lambda zz: abs(2 * zz - 2 * p))
        s = cmath.sqrt(z - p)
        if abs(s) < 1e-300:
            z = res[1]
            s = cmath.sqrt(z - p)
        out = []
        for sign in (1, -1):
            # factor y^2 + sign*s*y + (z/2 - sign*q/(2s))
            const = z / 2 - sign * q / (2 * s)
            disc = cmath.sqrt(s * s - 4 * const)
            out.append(shift + (-sign * s + disc) / 2)
            out.append(shift + (-sign * s - disc) / 2)
        return out
    raise ValueError("closed form only up to quartic")


def _polish_roots(coeffs: np.ndarray, roots: List[complex], rounds: int = 8) -> List[complex]:
    """Multiplicity-aware Newton polish: for a root of multiplicity m the
    corrected step m f/f' (with m estimated from f f''/f'^2) restores
    quadratic convergence, which plain Newton loses on repeated roots."""
    der = np.polyder(coeffs)
    der2 = np.polyder(der)
    out = []
    for r in roots:
        z = r
        for _ in range(rounds):
            f = np.polyval(coeffs, z)
            if f == 0:
                break
            fp = np.polyval(der, z)
            if fp == 0:
                break
            fpp = np.polyval(der2, z)
            denom = fp * fp - f * fpp
            if denom != 0:
                m = (fp * fp / denom).real
                m = min(float(len(coeffs) - 1), max(1.0, round(m)))
            else:
                m = 1.0
            step = m * f / fp
            if not np.isfinite(step):
                break
            z = z - step
        out.append(complex(z))
    return out


def sort_spectrum(values: Sequence[complex]) -> List[complex]:
    """Canonical eigenvalue order: lexicographic by (Re, Im)."""
    return sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))


def eigen_small(M: np.ndarray, tol: float = 1e-9, max_n: int = 16
                ) -> Tuple[List[complex], np.ndarray]:
    """Eigenvalues and eigenvectors of a small complex matrix.

    Roots of the characteristic polynomial (closed form for n <= 4,
    companion-matrix iteration above) followed by Newton polish; each
    eigenvector is the SVD null vector of M - lambda I.  Returns eigenvalues
    sorted by (Re, Im) and the matching eigenvectors as columns.  Raises if a
    residual ||Mv - lambda v|| exceeds tol * scale.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > max_n:
        raise ValueError(f"eigen_small is limited to n <= {max_n}")
    coeffs = _charpoly_complex(M)
    if n <= 4:
        roots = _roots_closed_form(list(coeffs))
    else:
        roots = list(np.roots(coeffs))
    roots = _polish_roots(coeffs, roots)
    lam = sort_spectrum(roots)
    scale = max(1.0, float(np.abs(M).max()))
    vecs = np.zeros((n, n), dtype=complex)
    for i, l in enumerate(lam):
        A = M - l * np.eye(n)
        _, _, vh = np.linalg.svd(A)
        v = vh[-1].conj()
        resid = np.linalg.norm(M @ v - l * v)
        if resid > tol * scale:
            raise ArithmeticError(
                f"eigenpair residual {resid:.3e} exceeds tolerance for lambda={l}")
        vecs[:, i] = v
    return lam, vecs
