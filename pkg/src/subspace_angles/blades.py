"""Blades: construction, validation and orthogonal factorization.

A blade (simple k-vector) is the outer product of k independent vectors
and stands for the k-dimensional subspace of vectors whose wedge with it
vanishes. Factorization rewrites a blade as magnitude times a geometric
product of k orthonormal vectors; the factors are not unique, only the
reconstruction is contractual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpanError, NonEuclideanError, NotABladeError
from .ga import Multivector, Signature

# A spanning vector is dependent when its Gram-Schmidt residual drops
# below this fraction of its original norm.
DEPENDENCE_TOL = 1e-10

BLADE_TOL = 1e-9


@dataclass(frozen=True)
class OrthogonalFactorization:
    """magnitude * (product of orthonormal factors) reproduces the blade."""

    magnitude: float
    factors: tuple[Multivector, ...]

    def product(self) -> Multivector:
        sig = self.factors[0].sig
        out = Multivector.scalar(sig, self.magnitude)
        for f in self.factors:
            out = out * f
        return out


@dataclass(frozen=True)
class Blade:
    """A multivector checked to be a simple k-vector."""

    mv: Multivector
    grade: int
    magnitude: float

    @property
    def sig(self) -> Signature:
        return self.mv.sig

    def unit(self) -> Multivector:
        return self.mv / self.magnitude

    @classmethod
    def from_multivector(cls, mv: Multivector, tol: float = BLADE_TOL) -> "Blade":
        """Validate and wrap; strips off-grade numerical dust first."""
        scale = mv.coeff_norm()
        if scale == 0.0:
            raise NotABladeError("zero multivector")
        parts = {k: mv.grade(k) for k in mv.grades()}
        norms = {k: p.coeff_norm() for k, p in parts.items()}
        k_dom = max(norms, key=norms.get)
        off = np.sqrt(sum(v * v for g, v in norms.items() if g != k_dom))
        if off > tol * scale:
            raise NotABladeError(f"not of pure grade: grades {sorted(norms)}")
        clean = parts[k_dom]
        _check_simple(clean, tol)
        if k_dom > 0:
            orthogonal_factorization(cls(clean, k_dom, clean.norm()), tol=tol)
        return cls(clean, k_dom, clean.norm())


def _check_simple(mv: Multivector, tol: float):
    """mv * reverse(mv) must be scalar for a simple k-vector."""
    sq = mv * mv.reverse()
    scale = mv.coeff_norm() ** 2
    nonscalar = sq - Multivector.scalar(mv.sig, sq.scalar_part())
    if nonscalar.coeff_norm() > tol * max(scale, 1e-300):
        raise NotABladeError("x * reverse(x) has non-scalar part")


def blade_from_spanning_vectors(vectors, sig: Signature | None = None) -> Blade:
    """Outer product of spanning vectors; magnitude is the spanned volume.

    Parameters
    ----------
    vectors : sequence of length-n arrays
    sig : optional Signature, defaults to Euclidean Cl(n,0)

    Raises DegenerateSpanError when the vectors are linearly dependent.
    """
    rows = [np.asarray(v, dtype=float) for v in vectors]
    if not rows:
        raise DegenerateSpanError("empty spanning set")
    n = rows[0].shape[0]
    if sig is None:
        sig = Signature(n)
    if sig.n != n:
        raise ValueError(f"vectors of length {n} in Cl({sig.p},{sig.q})")
    if len(rows) > n:
        raise DegenerateSpanError(f"{len(rows)} vectors cannot be independent in R^{n}")

    _mgs(rows)  # raises on dependence

    out = Multivector.vector(sig, rows[0])
    for v in rows[1:]:
        out = out.outer(Multivector.vector(sig, v))
    return Blade(out, len(rows), out.norm())


def _mgs(rows: list[np.ndarray]) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns a (k, n) array of orthonormal rows; raises DegenerateSpanError
    when some vector's residual falls below DEPENDENCE_TOL relative to its
    original norm.
    """
    basis: list[np.ndarray] = []
    for v in rows:
        original = np.sqrt(v @ v)
        if original == 0.0:
            raise DegenerateSpanError("zero vector in spanning set")
        u = v.copy()
        for _ in range(2):
            for b in basis:
                u = u - (u @ b) * b
        res = np.sqrt(u @ u)
        if res < DEPENDENCE_TOL * original:
            raise DegenerateSpanError(
                f"vector {len(basis)} is dependent (residual {res:.3e})"
            )
        basis.append(u / res)
    return np.array(basis)


def orthogonal_factorization(b: Blade, tol: float = BLADE_TOL) -> OrthogonalFactorization:
    """Factor a blade into magnitude times orthonormal vectors.

    Works by projecting the basis vectors of R^n into the blade's
    subspace, orthonormalizing the images, and fixing the orientation of
    the last factor so the geometric product reproduces the blade.
    """
    if not b.sig.is_euclidean:
        raise NonEuclideanError("factorization implemented for Euclidean blades")
    if b.magnitude == 0.0:
        raise NotABladeError("cannot factor the zero blade")
    sig = b.sig
    if b.grade == 0:
        raise NotABladeError("grade-0 elements have no vector factorization")

    unit = b.unit()
    unit_rev = unit.reverse()
    candidates = []
    for i in range(sig.n):
        e = Multivector.basis_blade(sig, 1 << i)
        proj = (e.left_contraction(unit) * unit_rev).grade(1)
        w = proj.vector_coords()
        candidates.append((float(np.sqrt(w @ w)), w))
    candidates.sort(key=lambda t: -t[0])

    factors: list[np.ndarray] = []
    for norm, w in candidates:
        if len(factors) == b.grade:
            break
        u = w.copy()
        for _ in range(2):
            for f in factors:
                u = u - (u @ f) * f
        res = np.sqrt(u @ u)
        if res > 1e-6:
            factors.append(u / res)
    if len(factors) != b.grade:
        raise NotABladeError("projection rank below grade; not a blade")

    rebuilt = Multivector.scalar(sig, 1.0)
    fmvs = [Multivector.vector(sig, f) for f in factors]
    for f in fmvs:
        rebuilt = rebuilt * f
    orient = rebuilt.scalar_product(unit_rev)
    if orient < 0.0:
        factors[-1] = -factors[-1]
        fmvs[-1] = -fmvs[-1]
        rebuilt = -rebuilt

    if not rebuilt.approx_eq(unit, tol * max(1.0, b.magnitude)):
        raise NotABladeError("orthogonal factors do not reproduce the input")
    return OrthogonalFactorization(b.magnitude, tuple(fmvs))


def is_blade(mv: Multivector, tol: float = BLADE_TOL) -> bool:
    """True iff mv is pure-grade, squares to a scalar and factors cleanly."""
    try:
        Blade.from_multivector(mv, tol=tol)
    except NotABladeError:
        return False
    return True


def subspace_membership(x: Multivector, b: Blade, tol: float = BLADE_TOL) -> bool:
    """x lies in the blade's subspace iff |x ^ b| <= tol |x| |b|."""
    wedge = x.outer(b.mv)
    return wedge.coeff_norm() <= tol * x.coeff_norm() * b.mv.coeff_norm()
