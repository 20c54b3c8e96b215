"""Exact polynomial calculus for the differential-difference operators.

A :class:`MultiPoly` is a sparse exponent-to-coefficient map with complex
coefficients.  On top of it this module builds

* the first-order operators ``T_xi = d_xi + sum_a k(a) <a,xi> (p - p o sigma_a)/<a,x>``
  with the difference quotient carried out by exact synthetic division,
* the degree-n matrices of the intertwining isomorphism ``V`` fixed by
  ``T_i V = V d_i`` and ``V 1 = 1``, solved recursively as stacked linear
  systems over the graded-lexicographic monomial basis, and
* truncated-series evaluation of the kernel ``E(x, y)`` from
  ``sum_n V[<., y>^n / n!](x)`` with a rigorous factorial tail bound.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericError, SeriesRegimeError
from .groups import RootSystem

#: relative residual allowed in exact-division remainders and in the
#: intertwining linear systems
_RESIDUAL_RTOL = 1e-10


class MultiPoly:
    """Multivariate polynomial with complex coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable by convention; all operations return new objects.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict | None = None):
        self.dim = dim
        self.terms = {} if terms is None else {e: c for e, c in terms.items() if c != 0}

    @classmethod
    def constant(cls, dim: int, value) -> "MultiPoly":
        return cls(dim, {(0,) * dim: complex(value)}) if value != 0 else cls(dim)

    @classmethod
    def monomial(cls, exponents, coeff=1.0) -> "MultiPoly":
        e = tuple(int(v) for v in exponents)
        return cls(len(e), {e: complex(coeff)})

    @classmethod
    def linear_form(cls, vec) -> "MultiPoly":
        vec = np.asarray(vec)
        terms = {}
        for i, c in enumerate(vec):
            if c != 0:
                e = [0] * len(vec)
                e[i] = 1
                terms[tuple(e)] = complex(c)
        return cls(len(vec), terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MultiPoly(self.dim, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e, 0) + c1 * c2
                    if v == 0:
                        out.pop(e, None)
                    else:
                        out[e] = v
            return MultiPoly(self.dim, out)
        c = complex(other)
        return MultiPoly(self.dim, {e: c * v for e, v in self.terms.items()} if c != 0 else {})

    __rmul__ = __mul__

    def partial(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MultiPoly(self.dim, out)

    def directional(self, xi) -> "MultiPoly":
        """Directional derivative ``sum_i xi_i d_i``."""
        out = MultiPoly(self.dim)
        for i, c in enumerate(np.asarray(xi)):
            if c != 0:
                out = out + self.partial(i) * c
        return out

    def compose_linear(self, mat) -> "MultiPoly":
        """Substitution ``p(A x)`` for a square matrix ``A``."""
        mat = np.asarray(mat)
        rows = [MultiPoly.linear_form(mat[i]) for i in range(self.dim)]
        # cache powers of each substituted coordinate as they are needed
        powers: list[dict[int, MultiPoly]] = [
            {0: MultiPoly.constant(self.dim, 1.0)} for _ in range(self.dim)
        ]

        def row_power(i, n):
            cache = powers[i]
            if n not in cache:
                m = max(cache)
                acc = cache[m]
                for j in range(m + 1, n + 1):
                    acc = acc * rows[i]
                    cache[j] = acc
            return cache[n]

        out = MultiPoly(self.dim)
        for e, c in self.terms.items():
            piece = MultiPoly.constant(self.dim, c)
            for i, p in enumerate(e):
                if p:
                    piece = piece * row_power(i, p)
            out = out + piece
        return out

    def evaluate(self, point) -> complex:
        point = np.asarray(point, dtype=complex)
        total = 0j
        for e, c in self.terms.items():
            v = c
            for i, p in enumerate(e):
                if p:
                    v *= point[i] ** p
            total += v
        return total

    def divide_linear(self, alpha) -> "MultiPoly":
        """Exact division by the linear form ``<alpha, x>``.

        Synthetic division along a coordinate in which ``alpha`` has its
        largest component; the remainder must vanish (the numerators built
        by the difference part of the operators vanish on the hyperplane
        by construction), and a nonzero remainder raises.
        """
        alpha = np.asarray(alpha, dtype=float)
        j = int(np.argmax(np.abs(alpha)))
        aj = alpha[j]
        rest = alpha.copy()
        rest[j] = 0.0
        lin_rest = MultiPoly.linear_form(rest)

        # organize as a polynomial in x_j with MultiPoly coefficients
        slices: dict[int, dict] = {}
        for e, c in self.terms.items():
            m = e[j]
            e0 = list(e)
            e0[j] = 0
            slices.setdefault(m, {})[tuple(e0)] = c
        if not slices:
            return MultiPoly(self.dim)
        top = max(slices)
        q = {m: MultiPoly(self.dim, t) for m, t in slices.items()}
        zero = MultiPoly(self.dim)

        quotient: dict[int, MultiPoly] = {}
        carry = zero
        for m in range(top, 0, -1):
            h = (q.get(m, zero) + carry) * (1.0 / aj)
            quotient[m - 1] = h
            carry = zero - lin_rest * h if rest.any() else zero
        remainder = q.get(0, zero) + carry

        scale = max(self.max_coeff(), 1e-300)
        if remainder.max_coeff() > _RESIDUAL_RTOL * scale:
            raise NumericError(
                "nonzero remainder in linear-form division "
                f"(|r| = {remainder.max_coeff():.3e}, scale {scale:.3e})"
            )
        out = MultiPoly(self.dim)
        for m, h in quotient.items():
            shifted = {}
            for e, c in h.terms.items():
                e2 = list(e)
                e2[j] = m
                shifted[tuple(e2)] = c
            out = out + MultiPoly(self.dim, shifted)
        return out


def dunkl_apply(p: MultiPoly, xi, rs: RootSystem) -> MultiPoly:
    """Apply ``T_xi`` to a polynomial.

    The difference part is computed as an exact polynomial division of
    ``p - p o sigma_alpha`` by ``<alpha, x>``, which is well defined
    because the numerator vanishes on the reflecting hyperplane.
    """
    xi = np.asarray(xi, dtype=float)
    out = p.directional(xi)
    kvals = rs.root_multiplicities
    for r, alpha in enumerate(rs.positive_roots):
        k = kvals[r]
        pair = float(alpha @ xi)
        if k == 0 or pair == 0:
            continue
        diff = p - p.compose_linear(rs.reflection(r))
        out = out + diff.divide_linear(alpha) * (k * pair)
    return out


def commutativity_residual(rs: RootSystem, xi, eta, p: MultiPoly) -> float:
    """Max coefficient magnitude of ``T_xi T_eta p - T_eta T_xi p``."""
    a = dunkl_apply(dunkl_apply(p, eta, rs), xi, rs)
    b = dunkl_apply(dunkl_apply(p, xi, rs), eta, rs)
    return (a - b).max_coeff()


@lru_cache(maxsize=None)
def monomial_exponents(dim: int, degree: int) -> tuple:
    """Exponent tuples of total degree ``degree`` in graded-lex order."""
    if degree < 0:
        return ()
    if dim == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomial_exponents(dim - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _exponent_index(dim: int, degree: int) -> dict:
    return {e: i for i, e in enumerate(monomial_exponents(dim, degree))}


@lru_cache(maxsize=None)
def _exponent_array(dim: int, degree: int) -> np.ndarray:
    return np.array(monomial_exponents(dim, degree), dtype=np.int64)


@lru_cache(maxsize=None)
def _multinomial_weights(dim: int, degree: int) -> np.ndarray:
    """``degree! / prod(beta!)`` for each basis exponent, as floats."""
    exps = _exponent_array(dim, degree)
    fact = np.array([math.factorial(i) for i in range(degree + 1)], dtype=float)
    return math.factorial(degree) / np.prod(fact[exps], axis=1)


def _poly_to_vector(p: MultiPoly, degree: int) -> np.ndarray:
    idx = _exponent_index(p.dim, degree)
    v = np.zeros(len(idx), dtype=complex)
    for e, c in p.terms.items():
        v[idx[e]] = c
    return v


@dataclass(frozen=True)
class IntertwiningMatrix:
    """Matrix of the degree-preserving intertwiner on one homogeneous block."""

    degree: int
    matrix: np.ndarray


_V_CACHE: dict = {}
_V_LOCK = threading.Lock()


def _derivative_matrix(dim: int, degree: int, i: int) -> np.ndarray:
    """Matrix of ``d_i``: homogeneous degree ``degree`` -> ``degree - 1``."""
    src = monomial_exponents(dim, degree)
    dst_idx = _exponent_index(dim, degree - 1)
    mat = np.zeros((len(dst_idx), len(src)))
    for col, e in enumerate(src):
        if e[i] > 0:
            e2 = list(e)
            e2[i] -= 1
            mat[dst_idx[tuple(e2)], col] = e[i]
    return mat


def _dunkl_matrix(rs: RootSystem, degree: int, i: int) -> np.ndarray:
    """Matrix of ``T_{e_i}``: homogeneous degree ``degree`` -> ``degree - 1``."""
    dim = rs.dim
    src = monomial_exponents(dim, degree)
    dst_idx = _exponent_index(dim, degree - 1)
    xi = np.zeros(dim)
    xi[i] = 1.0
    mat = np.zeros((len(dst_idx), len(src)), dtype=complex)
    for col, e in enumerate(src):
        image = dunkl_apply(MultiPoly.monomial(e), xi, rs)
        for e2, c in image.terms.items():
            mat[dst_idx[e2], col] += c
    if np.max(np.abs(mat.imag)) > 1e-14 * max(1.0, np.max(np.abs(mat.real))):
        raise NumericError("operator matrix unexpectedly complex")
    return mat.real


def intertwining_matrix(rs: RootSystem, n: int) -> IntertwiningMatrix:
    """The unique degree-``n`` block of the intertwiner.

    Built recursively: the block solves ``T_i V_n = V_{n-1} D_i`` for all
    coordinates, stacked into one least-squares system per degree.
    Results are cached per (group, multiplicities, degree); the cache is
    read-mostly with single-writer initialization.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    key = rs.cache_key
    with _V_LOCK:
        have = _V_CACHE.get(key, {})
        top = max(have, default=-1)
        if n in have:
            return IntertwiningMatrix(n, have[n])
        mats = dict(have)
        if top < 0:
            mats[0] = np.eye(1)
            top = 0
        dim = rs.dim
        for d in range(top + 1, n + 1):
            t_stack = np.vstack([_dunkl_matrix(rs, d, i) for i in range(dim)])
            rhs = np.vstack([mats[d - 1] @ _derivative_matrix(dim, d, i) for i in range(dim)])
            sol, *_ = np.linalg.lstsq(t_stack, rhs, rcond=None)
            resid = np.max(np.abs(t_stack @ sol - rhs))
            if resid > _RESIDUAL_RTOL * max(1.0, np.max(np.abs(rhs))):
                raise NumericError(
                    f"intertwining system ill-conditioned at degree {d} (resid {resid:.2e})"
                )
            mats[d] = sol
        _V_CACHE[key] = mats
        return IntertwiningMatrix(n, mats[n])


def _pairing_power_vector(y, n: int, dim: int) -> np.ndarray:
    """Coefficients of ``<., y>^n`` over the degree-``n`` monomial basis."""
    y = np.asarray(y, dtype=complex)
    exps = _exponent_array(dim, n)
    # power with the 0**0 = 1 convention, vectorized over the basis
    powers = np.where(exps == 0, 1.0 + 0j, y[None, :] ** exps)
    return _multinomial_weights(dim, n) * np.prod(powers, axis=1)


def _monomial_values(x, degree: int) -> np.ndarray:
    """Values of the degree-``degree`` monomials at a complex point."""
    x = np.asarray(x, dtype=complex)
    exps = _exponent_array(len(x), degree)
    powers = np.where(exps == 0, 1.0 + 0j, x[None, :] ** exps)
    return np.prod(powers, axis=1)


@dataclass(frozen=True)
class KernelSeriesResult:
    value: complex
    tail_bound: float
    degree_used: int


def _tail_bound(s: float, m: int) -> float:
    """Upper bound for ``sum_{n > m} s^n / n!``."""
    if s == 0:
        return 0.0
    term = s ** (m + 1) / math.factorial(m + 1)
    if s < m + 2:
        return term / (1.0 - s / (m + 2))
    # fall back to brute summation plus a geometric tail
    total = 0.0
    n = m + 1
    while term > 1e-320 and n < m + 4000:
        total += term
        n += 1
        term *= s / n
        if s / n < 0.5 and n > s:
            total += term / (1.0 - s / (n + 1))
            break
    return total


def kernel_series_detail(rs: RootSystem, x, y, tol: float = 1e-12,
                         max_degree: int = 48) -> KernelSeriesResult:
    """Truncated series evaluation of the kernel with its tail estimate.

    The homogeneous term of degree ``n`` is ``V[<., y>^n](x) / n!``, whose
    modulus is at most ``(|x| |y|)^n / n!`` by the probability-measure
    representation of the intertwiner; the truncation degree is the first
    one whose factorial tail drops below ``tol``.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    s = float(np.linalg.norm(x) * np.linalg.norm(y))
    m = None
    for cand in range(max_degree + 1):
        if _tail_bound(s, cand) < tol:
            m = cand
            break
    if m is None:
        raise SeriesRegimeError(
            f"series tail bound not reached by degree {max_degree} at |x||y| = {s:.3g}; "
            "use the ODE path"
        )
    intertwining_matrix(rs, m)  # populate the cache in one locked pass
    total = 1.0 + 0j
    inv_fact = 1.0
    for n in range(1, m + 1):
        inv_fact /= n
        coeffs = _pairing_power_vector(y, n, rs.dim)
        vn = intertwining_matrix(rs, n).matrix
        total += (vn @ coeffs) @ _monomial_values(x, n) * inv_fact
    return KernelSeriesResult(total, _tail_bound(s, m), m)


def kernel_series(rs: RootSystem, x, y, tol: float = 1e-12,
                  max_degree: int = 48) -> complex:
    """Kernel value ``E(x, y)`` by the truncated intertwiner series."""
    return kernel_series_detail(rs, x, y, tol, max_degree).value


def kernel_series_poly(rs: RootSystem, y, tol: float, max_degree: int,
                       s_norm: float) -> MultiPoly:
    """The truncated series as a polynomial in the first argument.

    ``s_norm`` should be ``|x| |y|`` for the evaluation point the caller
    has in mind; it fixes the truncation degree exactly as in
    :func:`kernel_series_detail`.
    """
    y = np.asarray(y, dtype=complex)
    m = None
    for cand in range(max_degree + 1):
        if _tail_bound(s_norm, cand) < tol:
            m = cand
            break
    if m is None:
        raise SeriesRegimeError(f"series tail bound not reached by degree {max_degree}")
    # keep a few terms even for tiny arguments so derivative information
    # survives truncation (the defect of the eigen equation needs degree
    # m terms to cancel degree m-1 ones)
    m = max(m, min(4, max_degree))
    terms = {(0,) * rs.dim: 1.0 + 0j}
    inv_fact = 1.0
    for n in range(1, m + 1):
        inv_fact /= n
        exps = monomial_exponents(rs.dim, n)
        coeffs = intertwining_matrix(rs, n).matrix @ _pairing_power_vector(y, n, rs.dim)
        for e, c in zip(exps, coeffs):
            if c != 0:
                terms[e] = c * inv_fact
    return MultiPoly(rs.dim, terms)


def eigen_residual(rs: RootSystem, x, y, xi, tol: float = 1e-9,
                   max_degree: int = 48) -> float:
    """Defect of the joint eigenfunction equation on the truncated series.

    Returns ``|T_xi P(x) - <xi, y> P(x)|`` where ``P`` is the truncated
    kernel series in the first argument; the expected size is about
    ``10 * tol`` because truncation drops one homogeneous term.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=complex)
    xi = np.asarray(xi, dtype=float)
    s = float(np.linalg.norm(x) * np.linalg.norm(y))
    p = kernel_series_poly(rs, y, tol, max_degree, s)
    lhs = dunkl_apply(p, xi, rs).evaluate(x)
    rhs = complex(np.dot(xi, y)) * p.evaluate(x)
    return abs(lhs - rhs)
