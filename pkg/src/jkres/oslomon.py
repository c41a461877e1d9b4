"""Combinatorics and duality of the top pole layer.

Covers the no-broken-circuit basis, the exchange relations between pure
fractions over bases, iterated one-variable residues (which realize the dual
basis), residues along a wall, and the resulting separation of variables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Arrangement, FractionTerm, RationalElement, s_part, split
from .errors import AlphaInSigma, NotABasis, NotSpanning, SingularPoint
from .linalg import (
    Q,
    QONE,
    QZERO,
    Vec,
    dot,
    is_independent,
    kernel_covector,
    mat_det,
    primitive,
    qvec,
    rank,
    solve_combination,
    vscale,
    vsub,
)
from .poly import Polynomial


@dataclass(frozen=True)
class NbcBasis:
    """Ordered bases with no broken circuit, for the arrangement's stored order."""

    arr: Arrangement
    bases: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def index(self, b: tuple[int, ...]) -> int:
        return self.bases.index(tuple(b))


def nbc_basis(arr: Arrangement) -> NbcBasis:
    """Bases (i_1 < ... < i_r) such that no j outside is dependent on the tail.

    A candidate is rejected when some index j not in it makes
    ``{form_j} + {form_i : i in basis, i > j}`` linearly dependent.
    """
    key = "nbc"
    if key not in arr._cache:
        if rank(arr.forms) != arr.dim:
            raise NotSpanning("arrangement does not span")
        out = []
        for combo in arr.basis_tuples():
            ok = True
            for j in range(arr.nforms):
                if j in combo:
                    continue
                family = [arr.forms[j]] + [arr.forms[i] for i in combo if i > j]
                if not is_independent(family):
                    ok = False
                    break
            if ok:
                out.append(combo)
        arr._cache[key] = NbcBasis(arr, tuple(out))
    return arr._cache[key]


def os_relation(arr: Arrangement, sigma: Sequence[int], alpha: int) -> RationalElement:
    """The exchange relation element; it is zero as a rational function."""
    sigma = tuple(sigma)
    if alpha in sigma:
        raise AlphaInSigma(f"index {alpha} already belongs to {sigma}")
    vectors = [arr.forms[i] for i in sigma]
    if len(sigma) != arr.dim or not is_independent(vectors):
        raise NotABasis(f"{sigma} is not a basis")
    coeffs = solve_combination(vectors, arr.forms[alpha])
    element = arr.phi(sigma)
    for i, c in zip(sigma, coeffs):
        if c != 0:
            swapped = tuple(sorted(set(sigma) - {i} | {alpha}))
            element = element - arr.phi(swapped, coeff=c)
    return element


# ---------------------------------------------------------------------------
# iterated residues and the dual basis
# ---------------------------------------------------------------------------


def _proportionality(w: Vec, beta: Vec) -> Optional[Q]:
    """The scalar lam with w = lam * beta, or None."""
    pivot = next(i for i, c in enumerate(beta) if c != 0)
    if w[pivot] == 0:
        return None
    lam = w[pivot] / beta[pivot]
    if all(a == lam * b for a, b in zip(w, beta)):
        return lam
    return None


def _quotient_projector(beta: Vec):
    """Project modulo the line through beta: drop its pivot coordinate.

    The pivot is the largest-index nonzero entry, scaled to 1; images of
    other vectors are computed by elimination.
    """
    pivot = max(i for i, c in enumerate(beta) if c != 0)
    scaled = vscale(QONE / beta[pivot], beta)

    def project(v: Vec) -> Vec:
        w = vsub(v, vscale(v[pivot], scaled))
        return w[:pivot] + w[pivot + 1:]

    return project


def _iterated_residue_terms(chain: list[Vec], terms: list[tuple[Q, list[Vec]]]) -> Q:
    """Apply one-variable residues along the chain, innermost last entry first."""
    while chain:
        beta = chain.pop()
        project = _quotient_projector(beta)
        new_terms = []
        for coeff, vecs in terms:
            lam = None
            where = None
            for k, w in enumerate(vecs):
                lam = _proportionality(w, beta)
                if lam is not None:
                    where = k
                    break
            if where is None:
                continue  # the factor beta in the numerator vanishes on beta = 0
            rest = [project(w) for j, w in enumerate(vecs) if j != where]
            new_terms.append((coeff / lam, rest))
        terms = new_terms
        chain = [project(v) for v in chain]
    return sum((c for c, _ in terms), QZERO)


def iterated_residue(b: Sequence[int], phi: RationalElement) -> Q:
    """Value of the iterated residue along the ordered basis on the top layer.

    The element is first projected to its degree ``-r`` basis-supported part;
    each step multiplies by the innermost basis form and restricts to its
    zero hyperplane in eliminated coordinates.
    """
    arr = phi.arr
    parts = s_part(phi)
    if not parts:
        return QZERO
    chain = [arr.forms[i] for i in b]
    terms = [(c, [arr.forms[i] for i in sigma]) for c, sigma in parts]
    return _iterated_residue_terms(chain, terms)


def _pairing(arr: Arrangement, b: tuple[int, ...], sigma: tuple[int, ...]) -> Q:
    cache = arr._cache.setdefault("pairing", {})
    key = (b, sigma)
    if key not in cache:
        chain = [arr.forms[i] for i in b]
        terms = [(QONE, [arr.forms[i] for i in sigma])]
        cache[key] = _iterated_residue_terms(chain, terms)
    return cache[key]


def express_in_B(phi: RationalElement) -> tuple[Q, ...]:
    """Coordinates of the top-layer part over the no-broken-circuit basis."""
    arr = phi.arr
    basis = nbc_basis(arr).bases
    parts = s_part(phi)
    out = []
    for b in basis:
        total = QZERO
        for c, sigma in parts:
            total += c * _pairing(arr, b, sigma)
        out.append(total)
    return tuple(out)


# ---------------------------------------------------------------------------
# walls and wall residues
# ---------------------------------------------------------------------------


class WallData:
    """A hyperplane spanned by arrangement vectors, with pinned conventions.

    ``z0`` is the primitive integer equation with positive first nonzero
    entry.  The frame is a basis of the wall whose wedge equals the
    contraction of the standard volume by ``z0``; expressing results in this
    frame keeps the wall orientation standard, so the induced inverse
    transform needs no extra sign.  ``transversal`` pairs to 1 with ``z0``.
    """

    __slots__ = (
        "arr",
        "span_indices",
        "z0",
        "on_wall",
        "off_wall",
        "frame",
        "transversal",
        "wall_arrangement",
        "_section_rows",
        "_frame_coords",
    )

    def __init__(self, arr: Arrangement, span_indices: Sequence[int]):
        r = arr.dim
        vectors = [arr.forms[i] for i in span_indices]
        if rank(vectors) != r - 1:
            raise NotABasis(f"indices {tuple(span_indices)} do not span a wall")
        self._section_rows = None
        self._frame_coords = {}
        self.arr = arr
        self.span_indices = tuple(span_indices)
        self.z0 = kernel_covector(vectors, r)
        self.on_wall = tuple(
            c for c in range(arr.nforms) if dot(arr.forms[c], self.z0) == 0
        )
        self.off_wall = tuple(
            c for c in range(arr.nforms) if c not in self.on_wall
        )
        pivot = max(i for i, c in enumerate(self.z0) if c != 0)
        self.transversal = tuple(
            QONE / self.z0[pivot] if i == pivot else QZERO for i in range(r)
        )
        frame = []
        for i in range(r):
            if i == pivot:
                continue
            f = [QZERO] * r
            f[i] = QONE
            f[pivot] = -self.z0[i] / self.z0[pivot]
            frame.append(tuple(f))
        if frame:
            # scale the first frame vector so the frame wedge equals the
            # contraction of e_1 ^ ... ^ e_r by z0
            det = mat_det([list(self.transversal)] + [list(f) for f in frame])
            # columns (v, f_1, ..., f_{r-1}) expressed via rows: determinant of
            # the transpose is the same
            frame[0] = vscale(QONE / det, frame[0])
        self.frame = tuple(frame)
        if r >= 2:
            self.wall_arrangement = Arrangement(
                [self.frame_coordinates(arr.forms[c]) for c in self.on_wall],
                dim=r - 1,
            )
        else:
            self.wall_arrangement = None

    def frame_coordinates(self, v: Vec) -> Vec:
        """Coordinates in the frame of the wall component of v (v minus its
        transversal part)."""
        key = tuple(v)
        if key not in self._frame_coords:
            lam = dot(v, self.z0)
            w = vsub(v, vscale(lam, self.transversal))
            coords = solve_combination(self.frame, w)
            if coords is None:
                raise ValueError("vector does not decompose along the wall frame")
            self._frame_coords[key] = coords
        return self._frame_coords[key]

    def ambient_point(self, u: Sequence) -> Vec:
        """The wall point with the given frame coordinates."""
        r = self.arr.dim
        out = [QZERO] * r
        for c, f in zip(u, self.frame):
            for i in range(r):
                out[i] += Q(c) * f[i]
        return tuple(out)

    def covector_section_rows(self) -> list[Vec]:
        """Rows expressing the section of the restriction map on covectors.

        Row i gives the ambient coordinate ``xi_i`` of the unique covector
        with ``<f_j, xi> = u_j`` and ``<transversal, xi> = 0`` as a linear
        form in u.
        """
        if self._section_rows is None:
            r = self.arr.dim
            mat = [list(f) for f in self.frame] + [list(self.transversal)]
            rows = []
            for i in range(r):
                # solve mat * xi = e_w for each frame slot; assemble columns
                rows.append([QZERO] * (r - 1))
            for j in range(r - 1):
                target = tuple(QONE if k == j else QZERO for k in range(r))
                xi = _solve_square(mat, target)
                for i in range(r):
                    rows[i][j] = xi[i]
            self._section_rows = [tuple(row) for row in rows]
        return self._section_rows

    def restrict_covector(self, y: Sequence) -> Vec:
        """Frame-dual coordinates of the restriction of an ambient covector."""
        return tuple(dot(f, y) for f in self.frame)

    def __repr__(self) -> str:
        return f"WallData(z0={tuple(self.z0)})"


def _solve_square(rows: list[list], target: Sequence) -> Vec:
    """Solve ``rows * x = target`` for a square invertible system."""
    n = len(rows)
    cols = [tuple(rows[i][j] for i in range(n)) for j in range(n)]
    x = solve_combination(cols, target)
    if x is None:
        raise ValueError("singular system")
    return x


def walls(arr: Arrangement) -> tuple[WallData, ...]:
    """All distinct walls, deduplicated by their primitive equations."""
    key = "walls"
    if key not in arr._cache:
        seen = {}
        for combo in itertools.combinations(range(arr.nforms), arr.dim - 1):
            family = [arr.forms[i] for i in combo]
            if rank(family) != arr.dim - 1:
                continue
            z0 = kernel_covector(family, arr.dim)
            if z0 not in seen:
                seen[z0] = WallData(arr, combo)
        arr._cache[key] = tuple(seen.values())
    return arr._cache[key]


def wall_residue(phi: RationalElement, w: WallData):
    """Residue at infinity along the fibers over the wall.

    Each term is restricted to the affine lines ``section(u) + t*z0`` and the
    coefficient of 1/t in the expansion at t = infinity is extracted by an
    exact truncated series; off-wall denominator factors contribute invertible
    constants, so no spurious poles ever appear.  For a rank-1 arrangement the
    result is a plain rational number.
    """
    arr = phi.arr
    r = arr.dim
    if r == 1:
        total = QZERO
        z0 = w.z0  # (1,), the coordinate covector
        for t in phi.terms:
            # numerator c * z^k over z^n: coefficient of t^{k-n} ... need k - n = -1
            for exp, c in t.numerator.terms.items():
                k = exp[0]
                n = t.denom.get(0, 0)
                scale = QONE
                if 0 in t.denom:
                    base = arr.forms[0][0]  # form = base * z
                    scale = QONE / base**n
                if k - n == -1:
                    total += c * scale
        return total

    rows = w.covector_section_rows()
    nvars = r - 1
    images = []
    for i in range(r):
        images.append(tuple(rows[i]) + (Q(w.z0[i]),))
    out_terms: list[tuple[Polynomial, dict[int, int]]] = []
    for term in phi.terms:
        num = term.numerator.compose_linear(images, nvars + 1)  # vars (u, t)
        on = {c: e for c, e in term.denom.items() if c in w.on_wall}
        off = {c: e for c, e in term.denom.items() if c in w.off_wall}
        n_total = sum(off.values())
        # split the numerator by t-degree
        by_t: dict[int, Polynomial] = {}
        for exp, c in num.terms.items():
            k = exp[nvars]
            by_t.setdefault(k, Polynomial.zero(nvars))
            by_t[k] = by_t[k] + Polynomial.monomial(exp[:nvars], c)
        if not by_t:
            continue
        max_k = max(by_t)
        order_needed = max_k - n_total + 1
        if order_needed < 0:
            continue  # decays faster than 1/t
        # product of (1 + ell_c(u) s / kappa_c)^(-n_c) truncated at order_needed
        series = [Polynomial.constant(nvars, 1)]
        for c, e in sorted(off.items()):
            kappa = dot(arr.forms[c], w.z0)
            ell = Polynomial.linear_form(w.frame_coordinates(arr.forms[c]))
            factor = []
            for m in range(order_needed + 1):
                coeff = Q((-1) ** m) * Q(math.comb(e + m - 1, m))
                factor.append((ell**m).scale(coeff / kappa**m))
            series = _truncated_product(series, factor, order_needed)
        kappa_scale = QONE
        for c, e in off.items():
            kappa_scale /= dot(arr.forms[c], w.z0) ** e
        total = Polynomial.zero(nvars)
        for k, num_k in by_t.items():
            m = 1 - n_total + k
            if 0 <= m < len(series):
                total = total + num_k * series[m]
        if total.is_zero():
            continue
        total = total.scale(kappa_scale)
        denom_inputs = {w.on_wall.index(c): e for c, e in on.items()}
        out_terms.append((total, denom_inputs))
    wall_arr = w.wall_arrangement
    element = wall_arr.zero_element()
    for num, denom_inputs in out_terms:
        element = element + _element_via_inputs(wall_arr, num, denom_inputs)
    return element.normalize()


def _truncated_product(a: list[Polynomial], b: list[Polynomial], order: int):
    out = [Polynomial.zero(a[0].nvars) for _ in range(order + 1)]
    for i, pa in enumerate(a):
        if i > order:
            break
        for j, pb in enumerate(b):
            if i + j > order:
                break
            out[i + j] = out[i + j] + pa * pb
    return out


def _element_via_inputs(arr: Arrangement, num: Polynomial, denom_inputs: dict[int, int]):
    """Build an element whose denominators reference input vector indices."""
    scale = QONE
    denom: dict[int, int] = {}
    for i, e in denom_inputs.items():
        cls, lam = arr.primitive_classes[i]
        scale /= lam**e
        denom[cls] = denom.get(cls, 0) + e
    return RationalElement(arr, (FractionTerm(num.scale(scale), denom),))


# ---------------------------------------------------------------------------
# separation of variables and the trace formula
# ---------------------------------------------------------------------------


def apply_differential_operator(op: Polynomial, phi: RationalElement) -> RationalElement:
    """Apply a constant-coefficient operator given as a polynomial in the
    primal variables (monomial h^m acts as the m-fold coordinate derivative)."""
    arr = phi.arr
    result = arr.zero_element()
    for exp, c in op.terms.items():
        piece = phi
        for i, e in enumerate(exp):
            unit = tuple(QONE if j == i else QZERO for j in range(arr.dim))
            for _ in range(e):
                piece = piece.derivative(unit)
        result = result + piece * c
    return result


def separate_variables(phi: RationalElement):
    """Write the generating part as operators applied to top-layer fractions.

    Returns ``(basis, operator)`` pairs; applying each operator to the pure
    fraction over its basis and summing reproduces the generating part.
    """
    from .core import jk_residue_exp

    coeffs = jk_residue_exp(phi, -1)
    basis = nbc_basis(phi.arr).bases
    return [(b, d) for b, d in zip(basis, coeffs) if not d.is_zero()]


def cauchy_trace(phi: RationalElement, y: Sequence) -> Q:
    """Trace realization of the generating-part evaluation at a regular point.

    The shift ``psi(y - z)`` is expanded through the exponential identity, so
    the diagonal matrix elements reduce to derivatives of the basis fractions
    evaluated at y, weighted by the twisted residue coordinates.
    """
    from .core import jk_residue_exp

    arr = phi.arr
    y = qvec(y)
    for f in arr.forms:
        if dot(f, y) == 0:
            raise SingularPoint(f"point {tuple(y)} lies on a pole hyperplane")
    coeffs = jk_residue_exp(phi, -1)
    basis = nbc_basis(arr).bases
    total = QZERO
    for b, op in zip(basis, coeffs):
        if op.is_zero():
            continue
        value = apply_differential_operator(op, arr.phi(b)).evaluate(y)
        total += value
    return total
