"""Chamber-indexed piecewise polynomials and the exact transform pair.

The inverse transform assembles, per primal chamber, the twisted residue
coordinates of the input over the basis cones flipped into the dual cone of
the chosen dual chamber.  The forward transform is the independent oracle:
it triangulates each chamber by its extreme rays, maps each polynomial-on-a-
cone summand through the closed form (volume over the product of the
generator forms, with monomials acting as signed derivatives) and cancels
any auxiliary ray directions exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    Arrangement,
    FractionTerm,
    RationalElement,
    jk_residue_exp,
    split,
    vanish_order_at_infinity,
)
from .errors import ChamberMismatch, NotRepresentable, OnWall
from .geometry import (
    Chamber,
    SimplicialCone,
    chamber_cone_decomposition,
    chambers,
    cone_contains,
    cutting_forms,
    find_chamber,
    sigma_delta,
    volume,
)
from .linalg import (
    Q,
    QONE,
    QZERO,
    Vec,
    dot,
    fourier_motzkin_witness,
    is_independent,
    primitive,
    qvec,
    solve_combination,
    vscale,
)
from .oslomon import WallData, apply_differential_operator, nbc_basis, wall_residue
from .poly import Polynomial


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces per primal chamber, supported in the dual cone of delta."""

    arr: Arrangement
    delta: Chamber
    pieces: dict  # chamber sign vector -> Polynomial in the primal variables

    def piece_at(self, chamber: Chamber) -> Polynomial:
        return self.pieces[chamber.key]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces.values())


def _delta_cone_data(arr: Arrangement, delta: Chamber):
    """Per nbc basis: the flipped closed cone, the flip sign, and the volume."""
    cache = arr._cache.setdefault("delta_cones", {})
    if delta.key not in cache:
        data = []
        for b in nbc_basis(arr).bases:
            gens, eps = sigma_delta(arr, b, delta)
            data.append((SimplicialCone.closed(gens), Q(eps), volume(gens)))
        cache[delta.key] = tuple(data)
    return cache[delta.key]


def _membership_row(arr: Arrangement, delta: Chamber, gamma: Chamber):
    cache = arr._cache.setdefault("delta_membership", {})
    key = (delta.key, gamma.key)
    if key not in cache:
        data = _delta_cone_data(arr, delta)
        cache[key] = tuple(cone_contains(cone, gamma.witness) for cone, _, _ in data)
    return cache[key]


def inverse_laplace(phi: RationalElement, delta: Chamber) -> PiecewisePoly:
    """Piecewise polynomial whose transform recovers the generating part.

    On each chamber the piece sums ``eps * c_b(h) / vol(b)`` over the basis
    elements whose flipped cone contains the chamber; the coordinates c_b are
    the twisted residue coordinates of the input.
    """
    arr = phi.arr
    coeffs = jk_residue_exp(phi, +1)
    data = _delta_cone_data(arr, delta)
    pieces = {}
    for gamma in chambers(arr, "primal"):
        row = _membership_row(arr, delta, gamma)
        total = Polynomial.zero(arr.dim)
        for inside, (_, eps, vol), c in zip(row, data, coeffs):
            if inside and not c.is_zero():
                total = total + c.scale(eps / vol)
        pieces[gamma.key] = total
    return PiecewisePoly(arr, delta, pieces)


# ---------------------------------------------------------------------------
# forward transform (the round-trip oracle)
# ---------------------------------------------------------------------------


def _laplace_extension(arr: Arrangement):
    """Extended arrangement holding every chamber-triangulation ray direction.

    Original classes come first (indices agree with the base arrangement);
    auxiliary rays only appear inside the forward transform and are divided
    out of the final single fraction.
    """
    key = "laplace_ext"
    if key not in arr._cache:
        ray_index: dict[Vec, int] = {}
        vectors = [tuple(f) for f in arr.forms]
        for gamma in chambers(arr, "primal"):
            for cone in chamber_cone_decomposition(arr, gamma):
                for g in cone.generators:
                    if g not in ray_index:
                        ray_index[g] = len(vectors)
                        vectors.append(tuple(g))
        ext = Arrangement(vectors, dim=arr.dim)
        arr._cache[key] = (ext, ray_index)
    return arr._cache[key]


def _cone_transform_base(ext: Arrangement, ray_index: dict, cone: SimplicialCone):
    """The transform of the cone indicator: volume over the generator forms."""
    vol = volume(cone.generators)
    scale = QONE
    denom: dict[int, int] = {}
    for g in cone.generators:
        idx = ray_index.get(g)
        if idx is None:
            # a generator equal to an original form (or its negative)
            p, c = primitive(g)
            cls = next(i for i, f in enumerate(ext.forms) if f == p)
            scale /= c
            denom[cls] = denom.get(cls, 0) + 1
        else:
            cls, lam = ext.primitive_classes[idx]
            scale /= lam
            denom[cls] = denom.get(cls, 0) + 1
    num = Polynomial.constant(ext.dim, vol * scale)
    return RationalElement(ext, (FractionTerm(num, denom),))


def forward_laplace(pp: PiecewisePoly) -> RationalElement:
    """Exact transform of the piecewise data; the master round-trip oracle.

    ``P(h)`` on a closed simplicial cone maps to ``P(-d/dy)`` applied to the
    cone's volume-scaled product of reciprocal generator forms.  Chamber
    boundaries have measure zero, so triangulating each chamber closure and
    summing is exact.  Raises NotRepresentable when auxiliary ray directions
    fail to cancel, i.e. the pieces are not a transform over arrangement
    poles.
    """
    arr = pp.arr
    ext, ray_index = _laplace_extension(arr)
    total = ext.zero_element()
    base_cache = arr._cache.setdefault("cone_transforms", {})
    for gamma in chambers(arr, "primal"):
        piece = pp.pieces.get(gamma.key, Polynomial.zero(arr.dim))
        if piece.is_zero():
            continue
        signed = Polynomial(
            arr.dim,
            {e: c * Q((-1) ** sum(e)) for e, c in piece.terms.items()},
        )
        for cone in chamber_cone_decomposition(arr, gamma):
            if cone.generators not in base_cache:
                base_cache[cone.generators] = _cone_transform_base(ext, ray_index, cone)
            base = base_cache[cone.generators]
            total = total + apply_differential_operator(signed, base)
    num, maxexp = total.as_single_fraction()
    reduced: dict[int, int] = {}
    for cls in sorted(maxexp):
        e = maxexp[cls]
        if cls < arr.nforms:
            reduced[cls] = e
            continue
        form = ext.forms[cls]
        for _ in range(e):
            quotient = num.divide_by_linear(form)
            if quotient is None:
                raise NotRepresentable(
                    "pieces cannot be written over cones with arrangement axes"
                )
            num = quotient
    if num.is_zero():
        return arr.zero_element()
    return RationalElement(arr, (FractionTerm(num, reduced),)).normalize()


# ---------------------------------------------------------------------------
# jumps across walls
# ---------------------------------------------------------------------------


def jump(pp: PiecewisePoly, w: WallData) -> dict:
    """Difference of the two one-sided limits, per wall chamber, on the wall.

    The wall is subdivided by the traces of every other ambient wall before
    the two adjacent ambient chambers are read off; the theorem guarantees the
    per-trace differences agree within one wall chamber, which is asserted.
    Keys are the wall arrangement's primal sign vectors, values polynomials in
    the wall frame coordinates.
    """
    arr = pp.arr
    wall_arr = w.wall_arrangement
    base_forms = cutting_forms(wall_arr, "primal")
    ambient_forms = cutting_forms(arr, "primal")
    extra = []
    seen = set(base_forms)
    for n in ambient_forms:
        if n == w.z0:
            continue
        trace = tuple(dot(n, f) for f in w.frame)
        p, _ = primitive(trace)
        if p not in seen:
            seen.add(p)
            extra.append(p)
    all_forms = tuple(base_forms) + tuple(extra)
    substitution = [
        tuple(f[i] for f in w.frame) for i in range(arr.dim)
    ]  # h_i as a linear form in the frame coordinates u
    result: dict = {}
    for signs in itertools.product((1, -1), repeat=len(all_forms)):
        rows = [vscale(s, f) for s, f in zip(signs, all_forms)]
        witness = fourier_motzkin_witness(rows)
        if witness is None:
            continue
        x = w.ambient_point(witness)
        kplus, kminus = [], []
        for n in ambient_forms:
            v = dot(n, x)
            if v == 0:
                s = dot(n, w.transversal)
                sp = 1 if s > 0 else -1
                kplus.append(sp)
                kminus.append(-sp)
            else:
                sp = 1 if v > 0 else -1
                kplus.append(sp)
                kminus.append(sp)
        diff = pp.pieces[tuple(kplus)] - pp.pieces[tuple(kminus)]
        restricted = diff.compose_linear(substitution, arr.dim - 1)
        base_key = signs[: len(base_forms)]
        if base_key in result:
            if not result[base_key] == restricted:
                raise ValueError(
                    "jump is not constant across trace refinements of a wall chamber"
                )
        else:
            result[base_key] = restricted
    return result


def _dual_cone_generators(arrangement: Arrangement, chamber: Chamber):
    forms = cutting_forms(arrangement, "dual")
    return [vscale(Q(s), f) for s, f in zip(chamber.sign_vector, forms)]


def _in_cone_hull(generators: Sequence[Vec], target: Vec, dim: int) -> bool:
    """Membership of target in the conic hull (Caratheodory over subsets)."""
    if all(c == 0 for c in target):
        return True
    for k in range(1, dim + 1):
        for combo in itertools.combinations(range(len(generators)), k):
            gens = [generators[i] for i in combo]
            if not is_independent(gens):
                continue
            coords = solve_combination(gens, target)
            if coords is not None and all(c >= 0 for c in coords):
                return True
    return False


def _compatible(delta: Chamber, delta0: Chamber, w: WallData) -> bool:
    """Whether the dual cone of the wall chamber sits inside the ambient one."""
    ambient_gens = _dual_cone_generators(w.arr, delta)
    for g in _dual_cone_generators(w.wall_arrangement, delta0):
        g_ambient = w.ambient_point(g)
        if not _in_cone_hull(ambient_gens, g_ambient, w.arr.dim):
            return False
    return True


def default_wall_chamber(w: WallData, delta: Chamber) -> Chamber:
    """Wall dual chamber containing the restriction of delta's witness,
    falling back to the first compatible chamber when the projection is
    singular or incompatible."""
    proj = w.restrict_covector(delta.witness)
    try:
        candidate = find_chamber(w.wall_arrangement, proj, "dual")
        if _compatible(delta, candidate, w):
            return candidate
    except OnWall:
        pass
    for candidate in chambers(w.wall_arrangement, "dual"):
        if _compatible(delta, candidate, w):
            return candidate
    raise ChamberMismatch("no wall chamber is compatible with the ambient one")


def check_jump_formula(
    phi: RationalElement,
    w: WallData,
    delta: Chamber,
    delta0: Optional[Chamber] = None,
) -> bool:
    """Exact comparison of the wall jump with the wall residue's transform.

    Both sides are computed by independent code paths: the left side reads
    one-sided limits of the assembled piecewise polynomial, the right side
    pushes the residue along the wall through the wall's own inverse
    transform.
    """
    if delta0 is None:
        delta0 = default_wall_chamber(w, delta)
    elif not _compatible(delta, delta0, w):
        raise ChamberMismatch("wall chamber dual cone is not inside the ambient one")
    lhs = jump(inverse_laplace(phi, delta), w)
    rho = wall_residue(phi, w)
    rhs = inverse_laplace(rho, delta0)
    for key, poly in lhs.items():
        if not poly == rhs.pieces[key]:
            return False
    return True


def smoothness_class(phi: RationalElement):
    """Differentiability class of the transform: vanishing order minus two.

    ``-1`` means not even continuous; the zero element reports ``math.inf``.
    """
    g = split(phi).g_element()
    order = vanish_order_at_infinity(g)
    return order - 2
