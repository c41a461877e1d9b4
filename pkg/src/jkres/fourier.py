"""Integer/polynomial combinations of semi-open simplicial cones.

These realize everywhere-defined representatives of the piecewise data: the
semi-open cone attached to a chamber keeps exactly the facets visible from
that chamber, so evaluating the combination at a wall point returns the
one-sided limit from the chamber's direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .core import Arrangement, RationalElement, jk_residue_exp
from .geometry import Chamber, SimplicialCone, cone_contains, cprime, sigma_delta, volume
from .linalg import Q, QZERO, dot, qvec, vneg
from .oslomon import nbc_basis
from .poly import Polynomial


@dataclass(frozen=True)
class ConeFunction:
    """Finite sum of polynomial coefficients times semi-open cone indicators."""

    dim: int
    terms: tuple[tuple[Polynomial, SimplicialCone], ...]

    @classmethod
    def build(cls, dim: int, terms: Sequence[tuple[Union[Polynomial, int, Q], SimplicialCone]]):
        packed = []
        for coeff, cone in terms:
            if not isinstance(coeff, Polynomial):
                coeff = Polynomial.constant(dim, coeff)
            if not coeff.is_zero():
                packed.append((coeff, cone))
        return cls(dim, tuple(packed))

    def __add__(self, other: "ConeFunction") -> "ConeFunction":
        return ConeFunction(self.dim, self.terms + other.terms)

    def __neg__(self) -> "ConeFunction":
        return ConeFunction(self.dim, tuple((-c, cone) for c, cone in self.terms))

    def __sub__(self, other: "ConeFunction") -> "ConeFunction":
        return self + (-other)


def evaluate_total(f: ConeFunction, h: Sequence) -> Q:
    """Pointwise value: sum of coefficients over the cones containing h."""
    h = qvec(h)
    total = QZERO
    for coeff, cone in f.terms:
        if cone_contains(cone, h):
            total += coeff.evaluate(h)
    return total


def a_gamma(arr: Arrangement, sigma: Sequence[int], gamma: Chamber) -> ConeFunction:
    """Indicator of the semi-open basis cone visible from the chamber."""
    gens = [arr.forms[i] for i in sigma]
    return ConeFunction.build(arr.dim, [(1, cprime(arr, gens, gamma))])


def representative_in_dual_cone(f: ConeFunction, delta: Chamber) -> ConeFunction:
    """Flip every generator into the dual cone of delta.

    Each flip of a generator toggles its strictness and negates the
    coefficient; the result is supported in the dual cone and is the unique
    such representative of the class modulo line-containing cones.
    """
    out = []
    for coeff, cone in f.terms:
        gens = []
        strict = []
        for g, s in zip(cone.generators, cone.strict):
            side = dot(g, delta.witness)
            if side == 0:
                raise ValueError("generator lies on a wall of the dual chamber")
            if side < 0:
                gens.append(vneg(g))
                strict.append(not s)
                coeff = -coeff
            else:
                gens.append(tuple(g))
                strict.append(s)
        out.append((coeff, SimplicialCone(tuple(gens), tuple(strict))))
    return ConeFunction(f.dim, tuple(out))


def stratified_fourier(phi: RationalElement, gamma: Chamber, delta: Chamber) -> ConeFunction:
    """Everywhere-defined representative of the inverse transform.

    Sums ``eps * c_b(h) / vol`` over the semi-open flipped basis cones; on
    regular points it agrees with the chamber pieces, and at wall points it
    returns the limit approached from the gamma side.
    """
    arr = phi.arr
    coeffs = jk_residue_exp(phi, +1)
    terms = []
    for b, c in zip(nbc_basis(arr).bases, coeffs):
        if c.is_zero():
            continue
        gens, eps = sigma_delta(arr, b, delta)
        cone = cprime(arr, gens, gamma)
        terms.append((c.scale(Q(eps) / volume(gens)), cone))
    return ConeFunction.build(arr.dim, terms)
