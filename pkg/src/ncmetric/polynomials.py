"""Real polynomial arithmetic, Sylvester resultants, and real root isolation.

Conventions match the elimination pipeline that consumes this module:

* resultants are plain Sylvester determinants, Res(P, Q) = a_n^m b_m^n
  prod(p_i - q_j), with no extra normalization;
* the discriminant is Res(P, P'), again unnormalized, so Dis(x^2 - 1) = -4
  and Dis(a y^2 + b y + c) = a(4ac - b^2) taken in one variable of a
  bivariate polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TRIM_REL = 1e-12


class PolynomialError(ValueError):
    """Raised on degree/degeneracy violations."""


def _trim(coeffs: np.ndarray, rel: float = TRIM_REL) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise PolynomialError("coefficients must be a nonempty 1-D sequence")
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) > rel * scale)[0]
    if keep.size == 0:
        return np.zeros(1)
    return c[: keep[-1] + 1].copy()


@dataclass(frozen=True, eq=False)
class RealPolynomial:
    """Dense real polynomial, coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _trim(np.atleast_1d(np.asarray(coeffs, dtype=float))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    def __call__(self, x):
        return np.polyval(self.coeffs[::-1], x)

    def derivative(self) -> "RealPolynomial":
        if self.degree == 0:
            return RealPolynomial([0.0])
        return RealPolynomial(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def __add__(self, other: "RealPolynomial") -> "RealPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return RealPolynomial(out)

    def __neg__(self) -> "RealPolynomial":
        return RealPolynomial(-self.coeffs)

    def __sub__(self, other: "RealPolynomial") -> "RealPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "RealPolynomial":
        if isinstance(other, RealPolynomial):
            return RealPolynomial(np.convolve(self.coeffs, other.coeffs))
        return RealPolynomial(self.coeffs * float(other))

    __rmul__ = __mul__

    @staticmethod
    def from_roots(roots) -> "RealPolynomial":
        return RealPolynomial(np.polynomial.polynomial.polyfromroots(roots).real)


def sylvester_matrix(p: RealPolynomial, q: RealPolynomial) -> np.ndarray:
    n, m = p.degree, q.degree
    if n < 1 or m < 1:
        raise PolynomialError("resultant needs two polynomials of degree >= 1")
    size = n + m
    s = np.zeros((size, size))
    pc = p.coeffs[::-1]  # descending
    qc = q.coeffs[::-1]
    for r in range(m):
        s[r, r : r + n + 1] = pc
    for r in range(n):
        s[m + r, r : r + m + 1] = qc
    return s


def resultant(p: RealPolynomial, q: RealPolynomial) -> float:
    """Sylvester determinant of p and q; zero iff they share a root.

    Coefficients are rescaled to unit max-norm before the determinant and
    the exact scale factor is reapplied, which keeps the degree-12
    elimination pipeline well conditioned.
    """
    n, m = p.degree, q.degree
    sp = np.max(np.abs(p.coeffs))
    sq = np.max(np.abs(q.coeffs))
    if sp == 0.0 or sq == 0.0:
        return 0.0
    det = float(np.linalg.det(sylvester_matrix(RealPolynomial(p.coeffs / sp), RealPolynomial(q.coeffs / sq))))
    return det * sp**m * sq**n


def discriminant(p: RealPolynomial) -> float:
    """Res(P, P'), zero iff P has a multiple root."""
    if p.degree < 2:
        raise PolynomialError("discriminant needs degree >= 2")
    return resultant(p, p.derivative())


def real_roots(p: RealPolynomial, tol: float = 1e-8) -> list[tuple[float, int]]:
    """Real roots with multiplicities, ascending.

    Roots come from the companion matrix, are polished by Newton steps, and
    are accepted as real when the imaginary part is below 1e-8 of their
    magnitude.  A returned root r satisfies |p(r)| <= tol * sum|c_i||r|^i.
    """
    if p.degree < 1:
        raise PolynomialError("real_roots needs degree >= 1")
    c = p.coeffs / np.max(np.abs(p.coeffs))
    roots = np.polynomial.polynomial.polyroots(c)
    dp = p.derivative()
    out: list[float] = []
    for r in roots:
        if abs(r.imag) > 1e-8 * max(1.0, abs(r)):
            continue
        x = float(r.real)
        for _ in range(50):
            d = dp(x)
            if d == 0.0:
                break
            step = p(x) / d
            if not np.isfinite(step) or abs(step) > 1.0 + abs(x):
                break
            x -= step
            if abs(step) <= 1e-15 * max(1.0, abs(x)):
                break
        scale = float(np.polyval(np.abs(p.coeffs[::-1]), abs(x)))
        if abs(p(x)) <= tol * max(scale, 1e-300):
            out.append(x)
    out.sort()
    grouped: list[tuple[float, int]] = []
    for x in out:
        sep = 10.0 * tol * max(1.0, abs(x))
        if grouped and abs(x - grouped[-1][0]) <= sep:
            r0, m0 = grouped[-1]
            grouped[-1] = ((r0 * m0 + x) / (m0 + 1), m0 + 1)
        else:
            grouped.append((x, 1))
    return grouped


@dataclass(frozen=True, eq=False)
class BivariatePolynomial:
    """Real polynomial in (x, y); grid[i, j] multiplies x^i y^j."""

    grid: np.ndarray

    def __init__(self, grid):
        g = np.atleast_2d(np.asarray(grid, dtype=float))
        object.__setattr__(self, "grid", g.copy())

    def __call__(self, x: float, y: float) -> float:
        xv = x ** np.arange(self.grid.shape[0])
        yv = y ** np.arange(self.grid.shape[1])
        return float(xv @ self.grid @ yv)

    def degree_in(self, var: str) -> int:
        g = self.grid if var == "x" else self.grid.T
        scale = np.max(np.abs(g))
        if scale == 0.0:
            return 0
        rows = np.nonzero(np.max(np.abs(g), axis=1) > TRIM_REL * scale)[0]
        return int(rows[-1]) if rows.size else 0

    def coefficients_in(self, var: str) -> list[RealPolynomial]:
        """Coefficient polynomials of var^j, as polynomials in the other variable."""
        g = self.grid.T if var == "x" else self.grid
        deg = self.degree_in(var)
        return [RealPolynomial(g[:, j]) for j in range(deg + 1)]

    def derivative_in(self, var: str) -> "BivariatePolynomial":
        if var == "y":
            g = self.grid[:, 1:] * np.arange(1, self.grid.shape[1])
        else:
            g = (self.grid[1:, :].T * np.arange(1, self.grid.shape[0])).T
        if g.size == 0:
            g = np.zeros((1, 1))
        return BivariatePolynomial(g)

    def eval_in(self, var: str, value: float) -> RealPolynomial:
        """Partial evaluation; returns a polynomial in the remaining variable."""
        if var == "x":
            xv = value ** np.arange(self.grid.shape[0])
            return RealPolynomial(xv @ self.grid)
        yv = value ** np.arange(self.grid.shape[1])
        return RealPolynomial(self.grid @ yv)


def _poly_det(entries: list[list[np.ndarray]]) -> np.ndarray:
    """Determinant of a matrix of ascending-coefficient polynomials.

    Laplace expansion with a bitmask DP over column subsets; exact in the
    coefficient arithmetic, no evaluation/interpolation detour.
    """
    n = len(entries)
    dp: dict[int, np.ndarray] = {0: np.ones(1)}
    for row in range(n):
        ndp: dict[int, np.ndarray] = {}
        for mask, val in dp.items():
            for col in range(n):
                if mask & (1 << col):
                    continue
                e = entries[row][col]
                # permutation parity: columns already used above this one
                inversions = row - bin(mask & ((1 << col) - 1)).count("1")
                term = np.convolve(val, e)
                if inversions % 2:
                    term = -term
                key = mask | (1 << col)
                if key in ndp:
                    prev = ndp[key]
                    size = max(len(prev), len(term))
                    acc = np.zeros(size)
                    acc[: len(prev)] += prev
                    acc[: len(term)] += term
                    ndp[key] = acc
                else:
                    ndp[key] = term
        dp = ndp
    return dp[(1 << n) - 1]


def dis_in_variable(b: BivariatePolynomial, var: str) -> RealPolynomial:
    """Res(P, dP/dvar) in ``var``, returned as a polynomial in the other variable.

    For a quadratic a(x) y^2 + b(x) y + c(x) this is a(4ac - b^2); for the
    quartic effective potential of the four-point pipeline the result has
    degree <= 12 in x.
    """
    if var not in ("x", "y"):
        raise PolynomialError("var must be 'x' or 'y'")
    m = b.degree_in(var)
    if m < 2:
        raise PolynomialError(f"dis_in_variable needs degree >= 2 in {var}")
    cols = b.coefficients_in(var)
    if all(c.is_zero() for c in cols):
        raise PolynomialError("polynomial is identically zero")
    dcols = [cols[j] * float(j) for j in range(1, m + 1)]
    n = m - 1
    size = m + n
    zero = np.zeros(1)
    mat: list[list[np.ndarray]] = [[zero] * size for _ in range(size)]
    for r in range(n):
        for k in range(m + 1):
            mat[r][r + k] = cols[m - k].coeffs
    for r in range(m):
        for k in range(n + 1):
            mat[n + r][r + k] = dcols[n - k].coeffs
    return RealPolynomial(_poly_det(mat))
