"""Exact polyhedral layer: chambers, simplicial cones, memberships, volumes.

Chambers are connected components of the complement of a central hyperplane
family: in the dual space the hyperplanes are the arrangement forms, in the
primal space they are the walls (spans of r-1 arrangement vectors, one
primitive normal per wall).  Feasible sign vectors are enumerated with exact
Fourier-Motzkin elimination, which also produces interior witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import Arrangement
from .errors import Degenerate, OnWall, RankTooLarge
from .linalg import (
    Q,
    QONE,
    QZERO,
    Vec,
    dot,
    fourier_motzkin_witness,
    integerize,
    is_independent,
    kernel_covector,
    mat_det,
    primitive,
    qvec,
    rank,
    solve_combination,
    vneg,
    vscale,
)

ENUMERATION_RANK_LIMIT = 3


@dataclass(frozen=True)
class Chamber:
    """An open region cut out by strict sign conditions with a rational witness."""

    space: str  # "primal" or "dual"
    sign_vector: tuple[int, ...]
    witness: Vec

    @property
    def key(self) -> tuple[int, ...]:
        return self.sign_vector


@dataclass(frozen=True)
class SimplicialCone:
    """Cone on independent generators; strict flags mark relatively open factors."""

    generators: tuple[Vec, ...]
    strict: tuple[bool, ...]

    def __post_init__(self):
        if not is_independent(self.generators):
            raise Degenerate("cone generators are linearly dependent")

    @classmethod
    def closed(cls, generators: Sequence[Sequence]) -> "SimplicialCone":
        gens = tuple(qvec(g) for g in generators)
        return cls(gens, (False,) * len(gens))


def cutting_forms(arr: Arrangement, space: str) -> tuple[Vec, ...]:
    """The covectors whose zero sets cut the space into chambers."""
    key = ("cutting", space)
    if key not in arr._cache:
        if space == "dual":
            forms = arr.forms
        elif space == "primal":
            seen = []
            found = set()
            if arr.dim == 1:
                forms_list = [(QONE,)]
            else:
                for combo in itertools.combinations(range(arr.nforms), arr.dim - 1):
                    family = [arr.forms[i] for i in combo]
                    if rank(family) != arr.dim - 1:
                        continue
                    z0 = kernel_covector(family, arr.dim)
                    if z0 not in found:
                        found.add(z0)
                        seen.append(z0)
                forms_list = seen
            forms = tuple(forms_list)
        else:
            raise ValueError(f"unknown space {space!r}")
        arr._cache[key] = tuple(forms)
    return arr._cache[key]


def chambers(arr: Arrangement, space: str) -> tuple[Chamber, ...]:
    """All chambers, each with an exact interior witness.

    Exhaustive enumeration is limited to rank <= 3; use ``find_chamber`` for
    single points beyond that.
    """
    if arr.dim > ENUMERATION_RANK_LIMIT:
        raise RankTooLarge(f"chamber enumeration limited to rank {ENUMERATION_RANK_LIMIT}")
    key = ("chambers", space)
    if key not in arr._cache:
        forms = cutting_forms(arr, space)
        out = []
        for signs in itertools.product((1, -1), repeat=len(forms)):
            rows = [vscale(s, f) for s, f in zip(signs, forms)]
            witness = fourier_motzkin_witness(rows)
            if witness is not None:
                out.append(Chamber(space, signs, integerize(witness)))
        arr._cache[key] = tuple(out)
    return arr._cache[key]


def chamber_by_key(arr: Arrangement, space: str, key: tuple[int, ...]) -> Chamber:
    table = arr._cache.setdefault(("chamber_table", space), {})
    if not table:
        for ch in chambers(arr, space):
            table[ch.key] = ch
    return table[key]


def find_chamber(arr: Arrangement, x: Sequence, space: str) -> Chamber:
    """The chamber whose sign vector the point realizes."""
    x = qvec(x)
    forms = cutting_forms(arr, space)
    signs = []
    for f in forms:
        v = dot(f, x)
        if v == 0:
            raise OnWall(f"point {tuple(x)} lies on a cutting hyperplane")
        signs.append(1 if v > 0 else -1)
    signs = tuple(signs)
    if arr.dim <= ENUMERATION_RANK_LIMIT:
        return chamber_by_key(arr, space, signs)
    return Chamber(space, signs, x)


def perturbed_chamber_key(arr: Arrangement, h: Sequence, p: Sequence,
                          space: str = "primal") -> tuple[int, ...]:
    """Sign vector of ``h + eps*p`` for infinitesimal positive eps.

    Resolved symbolically: each cutting form uses its sign at h when nonzero,
    otherwise its sign at the regular direction p.
    """
    h = qvec(h)
    p = qvec(p)
    signs = []
    for f in cutting_forms(arr, space):
        v = dot(f, h)
        if v == 0:
            v = dot(f, p)
        if v == 0:
            raise OnWall("perturbation direction is not regular")
        signs.append(1 if v > 0 else -1)
    return tuple(signs)


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


def volume(generators: Sequence[Sequence]):
    """Absolute determinant of the tuple in the standard dual pair."""
    gens = [qvec(g) for g in generators]
    if len(gens) != len(gens[0]):
        raise Degenerate("volume needs a square tuple")
    d = mat_det(gens)
    if d == 0:
        raise Degenerate("generators are linearly dependent")
    return abs(d)


def sigma_delta(arr: Arrangement, sigma: Sequence[int], delta: Chamber):
    """Flip the basis forms into the dual cone of delta; the sign tracks flips."""
    eps = 1
    flipped = []
    for i in sigma:
        v = arr.forms[i]
        s = dot(v, delta.witness)
        if s < 0:
            flipped.append(vneg(v))
            eps = -eps
        else:
            flipped.append(tuple(v))
    return tuple(flipped), eps


def cone_contains(cone: SimplicialCone, h: Sequence) -> bool:
    """Exact membership: solve over the generators, check signs and strictness."""
    coords = solve_combination(cone.generators, qvec(h))
    if coords is None:
        return False
    for c, strict in zip(coords, cone.strict):
        if strict:
            if c <= 0:
                return False
        elif c < 0:
            return False
    return True


def cprime(arr: Arrangement, generators: Sequence[Sequence], gamma: Chamber) -> SimplicialCone:
    """Semi-open version of the cone: strict on the facets hidden from gamma.

    Writing the chamber witness as ``p = sum p_a * generator_a``, a generator
    gets a strict flag exactly when its coefficient is negative.
    """
    gens = tuple(qvec(g) for g in generators)
    coords = solve_combination(gens, gamma.witness)
    if coords is None or any(c == 0 for c in coords):
        raise OnWall("chamber witness is degenerate for this cone")
    strict = tuple(c < 0 for c in coords)
    return SimplicialCone(gens, strict)


# ---------------------------------------------------------------------------
# chamber triangulation (used by the forward transform)
# ---------------------------------------------------------------------------


def _cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def chamber_extreme_rays(arr: Arrangement, chamber: Chamber) -> tuple[Vec, ...]:
    """Primitive extreme rays of the chamber closure (rank <= 3)."""
    r = arr.dim
    forms = cutting_forms(arr, chamber.space)
    signs = chamber.sign_vector
    if r == 1:
        return (integerize(chamber.witness),)
    candidates = []
    seen = set()
    subsets = itertools.combinations(range(len(forms)), r - 1)
    for combo in subsets:
        family = [forms[i] for i in combo]
        if rank(family) != r - 1:
            continue
        d = kernel_covector(family, r)
        for ray in (d, vneg(d)):
            if ray in seen:
                continue
            seen.add(ray)
            if all(s * dot(f, ray) >= 0 for s, f in zip(signs, forms)):
                candidates.append(ray)
    return tuple(sorted(candidates))


def chamber_cone_decomposition(arr: Arrangement, chamber: Chamber) -> tuple[SimplicialCone, ...]:
    """Closed simplicial cones covering the chamber closure, overlapping only
    on boundaries (which is enough for integral transforms)."""
    cache = arr._cache.setdefault(("triangulation", chamber.space), {})
    if chamber.key in cache:
        return cache[chamber.key]
    r = arr.dim
    rays = chamber_extreme_rays(arr, chamber)
    if r == 1:
        cones = (SimplicialCone.closed([rays[0]]),)
    elif r == 2:
        if len(rays) != 2:
            raise Degenerate(f"rank-2 chamber with {len(rays)} extreme rays")
        cones = (SimplicialCone.closed(rays),)
    elif r == 3:
        cones = tuple(_fan_triangulation(rays))
    else:
        raise RankTooLarge("triangulation limited to rank 3")
    cache[chamber.key] = cones
    return cones


def _fan_triangulation(rays: Sequence[Vec]):
    """Triangulate a pointed 3-dimensional cone given its extreme rays."""
    n = len(rays)
    if n < 3:
        raise Degenerate("a full-dimensional cone needs at least 3 rays")
    if n == 3:
        return [SimplicialCone.closed(rays)]
    adjacency: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j in itertools.combinations(range(n), 2):
        normal = _cross(rays[i], rays[j])
        side = None
        flat = False
        for k in range(n):
            if k in (i, j):
                continue
            s = dot(normal, rays[k])
            if s == 0:
                flat = True
                break
            s = 1 if s > 0 else -1
            if side is None:
                side = s
            elif side != s:
                side = 0
                break
        if not flat and side is not None and side != 0:
            adjacency[i].append(j)
            adjacency[j].append(i)
    # walk the boundary cycle deterministically
    start = 0
    cycle = [start]
    prev = None
    current = start
    while True:
        nbrs = sorted(adjacency[current])
        nxt = next(k for k in nbrs if k != prev)
        if nxt == start:
            break
        cycle.append(nxt)
        prev, current = current, nxt
    cones = []
    anchor = cycle[0]
    for a, b in zip(cycle[1:], cycle[2:]):
        cones.append(SimplicialCone.closed([rays[anchor], rays[a], rays[b]]))
    return cones
