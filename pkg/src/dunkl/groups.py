"""Root systems, reflection groups, chambers, and the weight function.

Two families are supported:

* ``Z2^N``: the sign-change group acting on ``R^N``; one root pair
  ``{+-sqrt(2) e_i}`` per coordinate, each its own orbit, so the
  multiplicity may differ per coordinate.
* ``I2(m)``: the dihedral group of order ``2m`` acting on ``R^2``
  (``m >= 3``); one root orbit for odd ``m``, two for even ``m``.

All roots are normalized to squared length 2.  The positive subsystem is
fixed deterministically by lexicographic positivity of the root
coordinates, and the (open) chamber ``C`` is the cone where every
positive root pairs strictly positively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import ConfigError, NumericError

_SQRT2 = math.sqrt(2.0)

#: tolerance used when matching group elements during closure
_ELEMENT_ATOL = 1e-9

#: hard cap on the closure size; exceeding it signals invalid roots
_CLOSURE_CAP = 4096


@dataclass(frozen=True)
class ChamberSpec:
    """Cone parameter for the truncated chamber ``C_delta``.

    ``C_delta = {x in C : <alpha, x> > delta |x| for all positive alpha}``.
    Values ``delta >= sqrt(2)`` make the cone empty because
    ``<alpha, x> <= sqrt(2) |x|`` for roots of squared length 2.
    """

    delta: float

    def __post_init__(self):
        if not (0.0 < self.delta < _SQRT2):
            raise ConfigError(f"delta must lie in (0, sqrt(2)); got {self.delta}")


@dataclass(frozen=True)
class RootSystem:
    """A reduced normalized root system with an orbit-wise multiplicity map.

    Attributes
    ----------
    dim : int
        Ambient dimension ``N``.
    positive_roots : ndarray, shape (R, N)
        The lexicographically positive roots, each of squared length 2.
    orbit_ids : tuple of int
        Orbit label of each positive root (labels are ``0..n_orbits-1``).
    multiplicities : tuple of float
        One non-negative value per orbit.
    family : str
        ``"Z2"`` or ``"I2"``.
    family_param : int
        ``N`` for ``Z2^N``, ``m`` for ``I2(m)``.
    """

    dim: int
    positive_roots: np.ndarray
    orbit_ids: tuple
    multiplicities: tuple
    family: str
    family_param: int

    @property
    def root_multiplicities(self) -> np.ndarray:
        """Multiplicity ``k(alpha)`` per positive root, as an array."""
        return np.array([self.multiplicities[i] for i in self.orbit_ids])

    @property
    def cache_key(self):
        return (self.family, self.family_param, self.multiplicities)

    def reflection(self, root_index: int) -> np.ndarray:
        """Orthogonal reflection matrix in the hyperplane of a positive root."""
        a = self.positive_roots[root_index]
        # |alpha|^2 = 2, so sigma_a x = x - <a,x> a
        return np.eye(self.dim) - np.outer(a, a)


@dataclass(frozen=True)
class ReflectionGroup:
    """The finite group generated by the root reflections.

    ``elements[0]`` is the identity.  ``reflection_perm[r, i]`` is the
    index of ``sigma_r . elements[i]``, which is the only structural data
    the differential system downstream needs.
    """

    elements: np.ndarray          # (|G|, N, N)
    inverse_index: np.ndarray     # (|G|,) permutation
    reflection_elt: np.ndarray    # (R,) element index of each sigma_alpha
    reflection_perm: np.ndarray   # (R, |G|)

    @property
    def order(self) -> int:
        return self.elements.shape[0]


def _coerce_multiplicities(values, n_orbits: int, what: str) -> tuple:
    vals = [float(v) for v in (values if np.iterable(values) else [values])]
    if len(vals) == 1 and n_orbits > 1:
        vals = vals * n_orbits
    if len(vals) != n_orbits:
        raise ConfigError(
            f"{what} has {n_orbits} root orbit(s); got {len(vals)} multiplicity value(s)"
        )
    for v in vals:
        if not math.isfinite(v) or v < 0:
            raise ConfigError(f"multiplicities must be finite and >= 0; got {v}")
    return tuple(vals)


def make_root_system(family: str, param: int, multiplicities) -> RootSystem:
    """Build a normalized root system for one of the supported families.

    Parameters
    ----------
    family : {"Z2", "I2"}
        ``"Z2"`` gives the sign-change group on ``R^param``; ``"I2"`` the
        dihedral group ``I2(param)`` on the plane.
    param : int
        ``N >= 1`` for ``Z2``, ``m >= 3`` for ``I2``.
    multiplicities : float or sequence of float
        One value per root orbit (a scalar is broadcast).

    Returns
    -------
    RootSystem
    """
    fam = str(family).replace("^N", "").replace("(m)", "").strip()
    if fam not in ("Z2", "I2"):
        raise ConfigError(f"unknown family {family!r}; expected 'Z2' or 'I2'")
    if param is None:
        raise ConfigError("family parameter is required (N for Z2, m for I2)")
    param = int(param)

    if fam == "Z2":
        if param < 1:
            raise ConfigError(f"Z2^N needs N >= 1; got N={param}")
        n = param
        mult = _coerce_multiplicities(multiplicities, n, f"Z2^{n}")
        roots = _SQRT2 * np.eye(n)
        orbit_ids = tuple(range(n))
        return RootSystem(n, roots, orbit_ids, mult, "Z2", n)

    if param < 3:
        raise ConfigError(f"I2(m) needs m >= 3; got m={param}")
    m = param
    n_orbits = 2 if m % 2 == 0 else 1
    mult = _coerce_multiplicities(multiplicities, n_orbits, f"I2({m})")
    # Mirror lines at angles j*pi/m.  The root normal to mirror j, made
    # lexicographically positive, is sqrt(2)*(sin, -cos)(j*pi/m) for j >= 1
    # and sqrt(2)*(0, 1) for j = 0.  The chamber is the sector (0, pi/m).
    rows = []
    orbit_ids = []
    for j in range(m):
        theta = j * math.pi / m
        if j == 0:
            root = np.array([0.0, 1.0])
        else:
            root = np.array([math.sin(theta), -math.cos(theta)])
        rows.append(_SQRT2 * root)
        orbit_ids.append(j % 2 if m % 2 == 0 else 0)
    return RootSystem(2, np.array(rows), tuple(orbit_ids), mult, "I2", m)


def validate_root_system(rs: RootSystem, tol: float = 1e-10) -> None:
    """Check normalization, reducedness, and closure under reflections."""
    roots = rs.positive_roots
    full = np.vstack([roots, -roots])
    for a in roots:
        if abs(a @ a - 2.0) > tol:
            raise ConfigError("roots must have squared length 2")
    for a in roots:
        sigma = np.eye(rs.dim) - np.outer(a, a)
        for b in full:
            image = sigma @ b
            if not np.any(np.all(np.abs(full - image) < 1e-8, axis=1)):
                raise ConfigError("root system is not closed under its reflections")
        # reducedness: only +-alpha on the line through alpha
        on_line = [b for b in full
                   if np.linalg.norm((b @ a) / 2 * a - b) < 1e-8]
        if len(on_line) != 2:
            raise ConfigError("root system is not reduced")


def generate_group(rs: RootSystem) -> ReflectionGroup:
    """Enumerate the reflection group by closing the generators.

    Elements are stored as dense orthogonal matrices; matching during
    closure uses an absolute tolerance of 1e-9 (dihedral angles are
    irrational, so exact representation is not attempted).
    """
    n = rs.dim
    gens = [rs.reflection(r) for r in range(len(rs.positive_roots))]
    elements = [np.eye(n)]

    def find(mat) -> int:
        for i, e in enumerate(elements):
            if np.max(np.abs(e - mat)) < _ELEMENT_ATOL:
                return i
        return -1

    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for g in gens:
                prod = g @ elements[i]
                if find(prod) < 0:
                    elements.append(prod)
                    nxt.append(len(elements) - 1)
                    if len(elements) > _CLOSURE_CAP:
                        raise ConfigError("group closure exceeded the hard cap; invalid roots")
        frontier = nxt

    elems = np.array(elements)
    order = len(elements)
    expected = 2 ** n if rs.family == "Z2" else 2 * rs.family_param
    if order != expected:
        raise ConfigError(f"closure produced {order} elements; expected {expected}")

    for e in elems:
        if np.max(np.abs(e.T @ e - np.eye(n))) > 1e-12:
            raise NumericError("group element drifted from orthogonality")

    inverse_index = np.empty(order, dtype=int)
    for i, e in enumerate(elems):
        j = find(e.T)  # inverse of an orthogonal matrix
        if j < 0:
            raise NumericError("inverse not found in closure")
        inverse_index[i] = j

    n_roots = len(rs.positive_roots)
    reflection_elt = np.empty(n_roots, dtype=int)
    reflection_perm = np.empty((n_roots, order), dtype=int)
    for r in range(n_roots):
        sigma = rs.reflection(r)
        reflection_elt[r] = find(sigma)
        for i in range(order):
            j = find(sigma @ elems[i])
            if j < 0:
                raise NumericError("closure is not closed under left reflection")
            reflection_perm[r, i] = j

    # every element must permute the full root set
    full = np.vstack([rs.positive_roots, -rs.positive_roots])
    for e in elems:
        images = full @ e.T
        for img in images:
            if not np.any(np.all(np.abs(full - img) < 1e-8, axis=1)):
                raise ConfigError("a group element does not map the root set onto itself")

    return ReflectionGroup(elems, inverse_index, reflection_elt, reflection_perm)


def weight(rs: RootSystem, x) -> float:
    """The weight ``prod_{alpha>0} |<alpha, x>|^(2 k(alpha))``.

    Homogeneous of degree ``2*gamma``; vanishes on walls whose
    multiplicity is positive (a valid value, not an error).
    """
    x = np.asarray(x, dtype=float)
    pairings = np.abs(rs.positive_roots @ x)
    return float(np.prod(pairings ** (2.0 * rs.root_multiplicities)))


def unit_weight(rs: RootSystem, x) -> float:
    """Weight built from unit root normals, ``prod |<a/|a|, x>|^(2 k(a))``.

    Equals ``weight(rs, x) / 2**gamma`` for the length-sqrt(2) roots used
    here.  This is the normalization under which the rank-one chamber
    limit reproduces the classical Kummer constant, so it is the one the
    oscillatory field machinery uses; :func:`weight` keeps the plain
    root-pairing convention.
    """
    x = np.asarray(x, dtype=float)
    pairings = np.abs(rs.positive_roots @ x) / _SQRT2
    return float(np.prod(pairings ** (2.0 * rs.root_multiplicities)))


def gamma_index(rs: RootSystem) -> float:
    """Sum of multiplicities over the positive roots."""
    return float(np.sum(rs.root_multiplicities))


def chamber_test(rs: RootSystem, x, delta: float | None = None) -> bool:
    """Membership in the open chamber ``C`` (or the cone ``C_delta``)."""
    x = np.asarray(x, dtype=float)
    pairings = rs.positive_roots @ x
    if delta is None:
        return bool(np.all(pairings > 0))
    return bool(np.all(pairings > delta * np.linalg.norm(x)))


def is_regular(rs: RootSystem, x, tol: float = 0.0) -> bool:
    """True when ``x`` avoids every root hyperplane."""
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(rs.positive_roots @ x) > tol))


def chamber_interior_point(rs: RootSystem) -> np.ndarray:
    """A unit vector comfortably inside the chamber (deterministic)."""
    if rs.family == "Z2":
        return np.ones(rs.dim) / math.sqrt(rs.dim)
    phi = math.pi / (2 * rs.family_param)  # bisector of the sector (0, pi/m)
    return np.array([math.cos(phi), math.sin(phi)])


def chamber_representative(rs: RootSystem, group: ReflectionGroup, x):
    """Map ``x`` to its orbit representative in the closed chamber.

    Returns ``(x', g_index)`` with ``x' = g x`` in the closure of ``C``.
    """
    x = np.asarray(x, dtype=float)
    for i, e in enumerate(group.elements):
        cand = e @ x
        if np.all(rs.positive_roots @ cand >= -1e-12):
            return cand, i
    raise NumericError("no chamber representative found")  # pragma: no cover


def dominant_pairing_check(group: ReflectionGroup, x, y, tol: float = 1e-12) -> bool:
    """Check ``<g x, y> <= <x, y>`` for every ``g`` (x, y in the chamber)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = float(x @ y)
    vals = (group.elements @ x) @ y
    return bool(np.all(vals <= base + tol))


def _quad(fn, a, b, **kw) -> float:
    val, err = integrate.quad(fn, a, b, epsabs=1e-13, epsrel=1e-12, limit=400, **kw)
    if not math.isfinite(val) or err > 1e-7 * max(1.0, abs(val)):
        raise NumericError(f"quadrature did not converge (estimate {val}, err {err})")
    return val


@lru_cache(maxsize=64)
def _mehta_cached(cache_key) -> float:
    family, param, multiplicities = cache_key
    rs = make_root_system(family, param, list(multiplicities))
    if rs.family == "Z2":
        # product of one-dimensional integrals, one per coordinate
        total = 1.0
        for k in rs.multiplicities:
            total *= 2.0 * _quad(lambda u, k=k: math.exp(-u * u / 2) * (_SQRT2 * u) ** (2 * k),
                                 0.0, np.inf)
        return total
    # I2(m): radial x angular tensor quadrature; the weight is invariant
    # under the 2m group elements, so one sector suffices.
    m = rs.family_param
    gamma = gamma_index(rs)
    radial = _quad(lambda r: math.exp(-r * r / 2) * r ** (2 * gamma + 1), 0.0, np.inf)
    kvals = rs.root_multiplicities
    thetas = np.arange(m) * math.pi / m

    def sector_weight(phi):
        s = np.abs(_SQRT2 * np.sin(phi - thetas))
        return float(np.prod(s ** (2 * kvals)))

    angular = 2 * m * _quad(sector_weight, 0.0, math.pi / m)
    return radial * angular


def mehta_constant(rs: RootSystem) -> float:
    """Gaussian integral of the weight over ``R^N`` by tensor quadrature.

    Relative accuracy is 1e-8 or better.  For ``Z2^N`` the integral
    factorizes into one-dimensional pieces; for ``I2(m)`` it splits into a
    radial and a one-sector angular factor.
    """
    return _mehta_cached(rs.cache_key)


def group_descriptor(rs: RootSystem) -> dict:
    """JSON-serializable description consumed by the CLI."""
    return {
        "schema": 1,
        "family": rs.family,
        "param": rs.family_param,
        "multiplicities": list(rs.multiplicities),
        "orbit_ids": list(rs.orbit_ids),
        "positive_roots": [list(map(float, row)) for row in rs.positive_roots],
    }


def root_system_from_descriptor(desc: dict) -> RootSystem:
    """Rebuild a root system from :func:`group_descriptor` output."""
    try:
        family = desc["family"]
        param = desc["param"]
        mult = desc["multiplicities"]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"invalid group descriptor: missing {exc}") from exc
    return make_root_system(family, param, mult)
