"""Rational functions with poles on a hyperplane arrangement.

The central objects are :class:`Arrangement` (an ordered family of nonzero
rational vectors spanning the space) and :class:`RationalElement` (a finite
sum of polynomial-over-product-of-linear-forms terms).  The module provides
the canonical rewriting into independent-support terms, the direct-sum split
into the part spanned by generating denominators and its complement, the
degree grading, and the residue projection onto the top pole layer together
with its exponential-twist version.

Everything is exact over the rationals and immutable after construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NotSpanning, SingularPoint
from .linalg import (
    Q,
    QONE,
    QZERO,
    Vec,
    dot,
    in_span,
    is_independent,
    kernel_covector,
    primitive,
    qvec,
    rank,
    solve_combination,
)
from .poly import NEG_INF, Polynomial

DenomKey = tuple  # sorted tuple of (class_index, exponent) pairs


class Arrangement:
    """Ordered family of nonzero rational vectors spanning Q^r.

    Proportional input vectors are merged into a primitive class whose
    representative has coprime integer entries and positive first nonzero
    entry; ``primitive_classes`` maps each input index to its class index
    and the exact scalar relating the input vector to the representative.
    All pole bookkeeping is done per class, in first-occurrence order (the
    order that the no-broken-circuit basis depends on).
    """

    def __init__(self, vectors: Iterable[Sequence], dim: Optional[int] = None):
        vecs = [qvec(v) for v in vectors]
        if not vecs:
            raise NotSpanning("empty arrangement")
        if dim is None:
            dim = len(vecs[0])
        self.dim = dim
        for i, v in enumerate(vecs):
            if len(v) != dim:
                raise ValueError(f"vector {i} has length {len(v)}, expected {dim}")
            if all(c == 0 for c in v):
                raise ValueError(f"vector {i} is zero")
        self.vectors = tuple(vecs)
        reps: list[Vec] = []
        index_of: dict[Vec, int] = {}
        classes: dict[int, tuple[int, Q]] = {}
        for i, v in enumerate(vecs):
            p, c = primitive(v)
            if p not in index_of:
                index_of[p] = len(reps)
                reps.append(p)
            classes[i] = (index_of[p], c)
        self.forms = tuple(reps)
        self.primitive_classes = classes
        if rank(self.forms) != dim:
            raise NotSpanning(f"vectors span a rank-{rank(self.forms)} subspace of Q^{dim}")
        self._cache: dict = {}

    @property
    def nforms(self) -> int:
        return len(self.forms)

    @property
    def symmetric_closure(self) -> tuple[Vec, ...]:
        out = []
        for f in self.forms:
            out.append(f)
            out.append(tuple(-c for c in f))
        return tuple(out)

    # -- element constructors ---------------------------------------------
    def zero_element(self) -> "RationalElement":
        return RationalElement(self, ())

    def poly_element(self, p) -> "RationalElement":
        if not isinstance(p, Polynomial):
            p = Polynomial.constant(self.dim, p)
        return RationalElement(self, (FractionTerm(p, {}),))

    def phi(self, indices: Sequence[int], exponents: Optional[Sequence[int]] = None,
            coeff=1) -> "RationalElement":
        """The element ``coeff / prod(forms[i]^e)`` over class indices."""
        exps = exponents if exponents is not None else [1] * len(indices)
        denom: dict[int, int] = {}
        for i, e in zip(indices, exps):
            denom[i] = denom.get(i, 0) + int(e)
        num = Polynomial.constant(self.dim, coeff)
        return RationalElement(self, (FractionTerm(num, denom),))

    def rational(self, terms: Iterable[tuple]) -> "RationalElement":
        """Build from ``(numerator, {class_index: exponent})`` pairs."""
        built = []
        for num, denom in terms:
            if not isinstance(num, Polynomial):
                num = Polynomial.constant(self.dim, num)
            built.append(FractionTerm(num, dict(denom)))
        return RationalElement(self, tuple(built))

    def form_poly(self, class_index: int) -> Polynomial:
        return Polynomial.linear_form(self.forms[class_index])

    def basis_tuples(self) -> tuple[tuple[int, ...], ...]:
        """All index tuples (ascending) whose forms are a basis of Q^r."""
        key = "basis_tuples"
        if key not in self._cache:
            out = []
            for combo in itertools.combinations(range(self.nforms), self.dim):
                if is_independent([self.forms[i] for i in combo]):
                    out.append(combo)
            self._cache[key] = tuple(out)
        return self._cache[key]

    def __repr__(self) -> str:
        vecs = ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in self.vectors)
        return f"Arrangement(dim={self.dim}, vectors=[{vecs}])"


class FractionTerm:
    """One summand ``numerator / prod(forms[c]^n_c)``."""

    __slots__ = ("numerator", "denom")

    def __init__(self, numerator: Polynomial, denom: dict[int, int]):
        self.numerator = numerator
        self.denom = {c: int(e) for c, e in denom.items() if e}
        if any(e < 0 for e in self.denom.values()):
            raise ValueError("denominator exponents must be positive")

    def denom_key(self) -> DenomKey:
        return tuple(sorted(self.denom.items()))

    def total_denom_degree(self) -> int:
        return sum(self.denom.values())

    def __repr__(self) -> str:
        return f"FractionTerm({self.numerator!r}, {self.denom})"


class RationalElement:
    """A finite sum of fraction terms over a fixed arrangement."""

    __slots__ = ("arr", "terms")

    def __init__(self, arr: Arrangement, terms: Iterable[FractionTerm] = ()):
        self.arr = arr
        self.terms = tuple(t for t in terms if not t.numerator.is_zero())

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "RationalElement") -> "RationalElement":
        assert self.arr is other.arr
        return RationalElement(self.arr, self.terms + other.terms)

    def __sub__(self, other: "RationalElement") -> "RationalElement":
        return self + (-other)

    def __neg__(self) -> "RationalElement":
        return RationalElement(
            self.arr, tuple(FractionTerm(-t.numerator, t.denom) for t in self.terms)
        )

    def __mul__(self, other) -> "RationalElement":
        if isinstance(other, RationalElement):
            assert self.arr is other.arr
            out = []
            for a in self.terms:
                for b in other.terms:
                    denom = dict(a.denom)
                    for c, e in b.denom.items():
                        denom[c] = denom.get(c, 0) + e
                    out.append(FractionTerm(a.numerator * b.numerator, denom))
            return RationalElement(self.arr, tuple(out))
        if isinstance(other, Polynomial):
            return RationalElement(
                self.arr,
                tuple(FractionTerm(t.numerator * other, t.denom) for t in self.terms),
            )
        return RationalElement(
            self.arr,
            tuple(FractionTerm(t.numerator.scale(other), t.denom) for t in self.terms),
        )

    __rmul__ = __mul__

    def is_trivially_zero(self) -> bool:
        return not self.terms

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, point: Sequence):
        point = qvec(point)
        form_vals: dict[int, Q] = {}

        def val(c: int):
            if c not in form_vals:
                form_vals[c] = dot(self.arr.forms[c], point)
            return form_vals[c]

        total = QZERO
        for t in self.terms:
            for c in t.denom:
                if val(c) == 0:
                    form = Polynomial.linear_form(self.arr.forms[c]).to_str()
                    raise SingularPoint(f"form {form} vanishes at {tuple(point)}")
            v = t.numerator.evaluate(point)
            for c, e in t.denom.items():
                v /= val(c) ** e
            total += v
        return total

    # -- single-fraction form and exact equality ------------------------------
    def merged(self) -> "RationalElement":
        """Combine terms sharing the same denominator."""
        grouped: dict[DenomKey, Polynomial] = {}
        for t in self.terms:
            key = t.denom_key()
            if key in grouped:
                grouped[key] = grouped[key] + t.numerator
            else:
                grouped[key] = t.numerator
        return RationalElement(
            self.arr,
            tuple(FractionTerm(num, dict(key)) for key, num in sorted(grouped.items())),
        )

    def _form_power(self, c: int, e: int) -> Polynomial:
        cache = self.arr._cache.setdefault("form_powers", {})
        key = (c, e)
        if key not in cache:
            cache[key] = self.arr.form_poly(c) ** e
        return cache[key]

    def as_single_fraction(self) -> tuple[Polynomial, dict[int, int]]:
        """Combine all terms over the least common product denominator."""
        if not self.terms:
            return Polynomial.zero(self.arr.dim), {}
        element = self.merged() if len(self.terms) > 1 else self
        maxexp: dict[int, int] = {}
        for t in element.terms:
            for c, e in t.denom.items():
                maxexp[c] = max(maxexp.get(c, 0), e)
        total = Polynomial.zero(self.arr.dim)
        for t in element.terms:
            piece = t.numerator
            factors = sorted(
                (self._form_power(c, e - t.denom.get(c, 0)) for c, e in maxexp.items()
                 if e - t.denom.get(c, 0) > 0),
                key=lambda p: len(p.terms),
            )
            for f in factors:
                piece = piece * f
            total = total + piece
        return total, maxexp

    def is_zero(self) -> bool:
        if not self.terms:
            return True
        num, _ = self.as_single_fraction()
        return num.is_zero()

    def equals(self, other: "RationalElement") -> bool:
        return (self - other).is_zero()

    # -- structure -----------------------------------------------------------
    def occurring_degrees(self) -> list[int]:
        degs = set()
        for t in self.terms:
            d0 = t.total_denom_degree()
            for d in t.numerator.homogeneous_parts():
                degs.add(d - d0)
        return sorted(degs)

    def graded_component(self, d: int) -> "RationalElement":
        out = []
        for t in self.terms:
            want = d + t.total_denom_degree()
            if want < 0:
                continue
            part = t.numerator.homogeneous_part(want)
            if not part.is_zero():
                out.append(FractionTerm(part, t.denom))
        return RationalElement(self.arr, tuple(out))

    def derivative(self, v: Sequence) -> "RationalElement":
        v = qvec(v)
        out = []
        for t in self.terms:
            dnum = t.numerator.directional_derivative(v)
            if not dnum.is_zero():
                out.append(FractionTerm(dnum, t.denom))
            for c, e in t.denom.items():
                slope = dot(self.arr.forms[c], v)
                if slope == 0:
                    continue
                denom = dict(t.denom)
                denom[c] = e + 1
                out.append(FractionTerm(t.numerator.scale(-e * slope), denom))
        return RationalElement(self.arr, tuple(out))

    def normalize(self) -> "RationalElement":
        return normalize(self)

    def split(self) -> "SplitForm":
        return split(self)

    def __repr__(self) -> str:
        return f"RationalElement({format_element(self)})"


@dataclass(frozen=True)
class SplitForm:
    """Outcome of the direct-sum decomposition.

    ``g_part`` lists ``(coefficient, basis_indices, exponents)`` triples, one
    per pure fraction whose denominator support is a basis; ``ng_part`` holds
    the remaining terms (non-generating support, polynomials included).
    """

    arr: Arrangement
    g_part: tuple[tuple[Q, tuple[int, ...], tuple[int, ...]], ...]
    ng_part: tuple[FractionTerm, ...]

    def g_element(self) -> RationalElement:
        terms = tuple(
            FractionTerm(Polynomial.constant(self.arr.dim, c), dict(zip(sigma, exps)))
            for c, sigma, exps in self.g_part
        )
        return RationalElement(self.arr, terms)

    def ng_element(self) -> RationalElement:
        return RationalElement(self.arr, self.ng_part)


# ---------------------------------------------------------------------------
# canonical rewriting
# ---------------------------------------------------------------------------


def _dependent_reduction(arr: Arrangement, support: tuple[int, ...]):
    """Reduction data for a dependent support, or None when independent.

    Picks the largest class index that lies in the span of the others, and
    the smallest circuit through it (by size, then lexicographic index
    order).  Returns ``(alpha, [(beta, c_beta), ...])`` realizing
    ``forms[alpha] = sum c_beta * forms[beta]``.
    """
    cache = arr._cache.setdefault("reduction", {})
    if support in cache:
        return cache[support]
    result = None
    vectors = {i: arr.forms[i] for i in support}
    if not is_independent(list(vectors.values())):
        alpha = None
        for j in sorted(support, reverse=True):
            others = [vectors[i] for i in support if i != j]
            if in_span(vectors[j], others):
                alpha = j
                break
        rest = [i for i in support if i != alpha]
        found = None
        for size in range(1, arr.dim + 1):
            for combo in itertools.combinations(rest, size):
                coeffs = solve_combination([vectors[i] for i in combo], vectors[alpha])
                if coeffs is not None:
                    found = (combo, coeffs)
                    break
            if found:
                break
        combo, coeffs = found
        result = (alpha, tuple((b, c) for b, c in zip(combo, coeffs) if c != 0))
    cache[support] = result
    return result


def _expand_spanning(arr: Arrangement, num: Polynomial, denom: dict[int, int]):
    """Rewrite ``num / prod`` with basis support into pure + lower-support terms.

    The numerator is re-expressed in the coordinates given by the support
    forms (index-sorted), then cancelled monomial by monomial against the
    denominator exponents.
    """
    sigma = sorted(denom)
    basis = [arr.forms[i] for i in sigma]
    # w_j = <basis_j, z>, so z_i = <row_i, w> where sum_j row_i[j]*basis_j = e_i
    r = arr.dim
    inv_rows = []
    for i in range(r):
        target = tuple(QONE if j == i else QZERO for j in range(r))
        inv_rows.append(solve_combination(basis, target))
    num_w = num.compose_linear(inv_rows, r)
    pure: dict[tuple, Q] = {}
    lower: list[tuple[Polynomial, dict[int, int]]] = []
    nvec = [denom[i] for i in sigma]
    for exp, coeff in num_w.terms.items():
        residual = [n - k for n, k in zip(nvec, exp)]
        if all(m >= 1 for m in residual):
            key = (tuple(sigma), tuple(residual))
            pure[key] = pure.get(key, QZERO) + coeff
        else:
            new_denom = {sigma[j]: m for j, m in enumerate(residual) if m >= 1}
            new_num = Polynomial.constant(r, coeff)
            for j, m in enumerate(residual):
                if m < 0:
                    new_num = new_num * (arr.form_poly(sigma[j]) ** (-m))
            lower.append((new_num, new_denom))
    return pure, lower


def _cancel_common_factors(arr: Arrangement, num: Polynomial, denom: dict[int, int]):
    """Divide out denominator forms that divide the numerator exactly."""
    denom = dict(denom)
    for c in sorted(denom):
        form = arr.forms[c]
        while denom.get(c, 0) > 0:
            quotient = num.divide_by_linear(form)
            if quotient is None:
                break
            num = quotient
            denom[c] -= 1
        if denom.get(c, 0) == 0:
            denom.pop(c, None)
    return num, denom


def normalize(phi: RationalElement) -> RationalElement:
    """Canonical rewriting with linearly independent denominator supports.

    The element is first combined over a single denominator (which decides
    exact zero), then dependent supports are reduced by circuit exchanges:
    the largest-index form of a circuit is traded for the others, which
    strictly pushes exponents toward lower indices and terminates.  Spanning
    supports get their numerators re-expanded in support coordinates so that
    every surviving basis-supported term is a pure fraction with a constant
    numerator; remaining supports only have exactly-divisible factors
    cancelled.
    """
    arr = phi.arr
    if not phi.terms:
        return arr.zero_element()
    num, maxexp = phi.as_single_fraction()
    if num.is_zero():
        return arr.zero_element()
    num, maxexp = _cancel_common_factors(arr, num, maxexp)

    pending: dict[DenomKey, Polynomial] = {tuple(sorted(maxexp.items())): num}
    pure: dict[tuple, Q] = {}
    done: dict[DenomKey, Polynomial] = {}
    while pending:
        key = min(pending)
        numerator = pending.pop(key)
        if numerator.is_zero():
            continue
        denom = dict(key)
        support = tuple(sorted(denom))
        reduction = _dependent_reduction(arr, support)
        if reduction is not None:
            alpha, betas = reduction
            for beta, c in betas:
                nd = dict(denom)
                nd[alpha] = nd[alpha] + 1
                nd[beta] -= 1
                if nd[beta] == 0:
                    del nd[beta]
                nkey = tuple(sorted(nd.items()))
                add = numerator.scale(c)
                if nkey in pending:
                    pending[nkey] = pending[nkey] + add
                else:
                    pending[nkey] = add
            continue
        if len(support) == arr.dim:
            new_pure, lower = _expand_spanning(arr, numerator, denom)
            for k, c in new_pure.items():
                pure[k] = pure.get(k, QZERO) + c
            for lnum, ldenom in lower:
                lnum, ldenom = _cancel_common_factors(arr, lnum, ldenom)
                lkey = tuple(sorted(ldenom.items()))
                if lkey in done:
                    done[lkey] = done[lkey] + lnum
                else:
                    done[lkey] = lnum
        else:
            numerator, denom = _cancel_common_factors(arr, numerator, denom)
            dkey = tuple(sorted(denom.items()))
            if dkey in done:
                done[dkey] = done[dkey] + numerator
            else:
                done[dkey] = numerator

    terms = []
    for (sigma, exps), coeff in sorted(pure.items()):
        if coeff != 0:
            terms.append(
                FractionTerm(Polynomial.constant(arr.dim, coeff), dict(zip(sigma, exps)))
            )
    for key in sorted(done):
        numerator = done[key]
        if not numerator.is_zero():
            terms.append(FractionTerm(numerator, dict(key)))
    return RationalElement(arr, tuple(terms))


def split(phi: RationalElement) -> SplitForm:
    """Decompose into basis-supported pure fractions plus the complement."""
    arr = phi.arr
    normal = normalize(phi)
    g = []
    ng = []
    for t in normal.terms:
        support = tuple(sorted(t.denom))
        if len(support) == arr.dim and t.numerator.degree() == 0:
            coeff = t.numerator.constant_value()
            exps = tuple(t.denom[i] for i in support)
            g.append((coeff, support, exps))
        else:
            ng.append(t)
    return SplitForm(arr, tuple(g), tuple(ng))


# ---------------------------------------------------------------------------
# residue projections
# ---------------------------------------------------------------------------


def s_part(phi: RationalElement) -> list[tuple[Q, tuple[int, ...]]]:
    """The top pole layer: ``(coeff, basis)`` pairs of the degree ``-r`` part."""
    arr = phi.arr
    comp = phi.graded_component(-arr.dim)
    if not comp.terms:
        return []
    return [(c, sigma) for c, sigma, _exps in split(comp).g_part]


def jk_residue(phi: RationalElement):
    """Coordinates over the no-broken-circuit basis of the residue projection."""
    from .oslomon import express_in_B  # deferred: oslomon builds on this module

    return express_in_B(phi)


def jk_residue_exp(phi: RationalElement, sign: int):
    """Residue of ``exp(sign*<h,z>) * phi`` as h-polynomial coordinates.

    Only graded pieces of degree ``-r - k`` contribute, each through the
    order-k term of the exponential; the result is exact because the series
    is truncated at exactly the orders that can reach degree ``-r``.
    """
    from .oslomon import nbc_basis

    arr = phi.arr
    basis = nbc_basis(arr).bases
    r = arr.dim
    coeffs = [Polynomial.zero(r) for _ in basis]
    for d in phi.occurring_degrees():
        k = -r - d
        if k < 0:
            continue
        component = phi.graded_component(d)
        if not component.terms:
            continue
        for combo in itertools.combinations_with_replacement(range(r), k):
            exp = [0] * r
            for i in combo:
                exp[i] += 1
            mono = Polynomial.monomial(exp)
            factorial = 1
            for e in exp:
                factorial *= math.factorial(e)
            scale = Q(sign**k, factorial)
            shifted = component * mono
            vec = jk_residue(shifted)
            for b, v in enumerate(vec):
                if v != 0:
                    coeffs[b] = coeffs[b] + mono.scale(scale * v)
    return tuple(coeffs)


def derivative(phi: RationalElement, v: Sequence) -> RationalElement:
    return phi.derivative(v)


def evaluate(phi: RationalElement, point: Sequence):
    return phi.evaluate(point)


def graded_component(phi: RationalElement, d: int) -> RationalElement:
    return phi.graded_component(d)


# ---------------------------------------------------------------------------
# behaviour at infinity
# ---------------------------------------------------------------------------


def _degree_along(phi: RationalElement, z: Vec):
    """Exact degree in t of ``phi(y + t z)`` with y symbolic.

    Works over polynomials in (y_1..y_r, t): the element is combined over the
    common denominator, whose t-degree is explicit, and the numerator's
    t-degree is read off.  Valid for every regular y since the t-leading
    denominator coefficient is a product of nonzero form values.
    """
    arr = phi.arr
    r = arr.dim
    if not phi.terms:
        return NEG_INF
    maxexp: dict[int, int] = {}
    for t in phi.terms:
        for c, e in t.denom.items():
            maxexp[c] = max(maxexp.get(c, 0), e)
    # images under z_i -> y_i + t * z_i  (t is the last of r+1 variables)
    images = []
    for i in range(r):
        row = [QZERO] * (r + 1)
        row[i] = QONE
        row[r] = Q(z[i])
        images.append(tuple(row))
    total = Polynomial.zero(r + 1)
    for t in phi.terms:
        piece = t.numerator.compose_linear(images, r + 1)
        for c, e in maxexp.items():
            missing = e - t.denom.get(c, 0)
            if missing:
                form = arr.forms[c]
                row = list(qvec(form)) + [dot(form, z)]
                piece = piece * (Polynomial.linear_form(row) ** missing)
        total = total + piece
    if total.is_zero():
        return NEG_INF
    denom_deg = sum(e for c, e in maxexp.items() if dot(arr.forms[c], z) != 0)
    return total.degree_in(r) - denom_deg


def _infinity_directions(arr: Arrangement) -> list[Vec]:
    r = arr.dim
    dirs: list[Vec] = []
    seen = set()

    def push(v: Vec):
        p, _ = primitive(v)
        if p not in seen:
            seen.add(p)
            dirs.append(p)

    for i in range(r):
        push(tuple(QONE if j == i else QZERO for j in range(r)))
    if r >= 2:
        for combo in itertools.combinations(range(arr.nforms), r - 1):
            family = [arr.forms[i] for i in combo]
            if rank(family) == r - 1:
                push(kernel_covector(family, r))
    k = 1
    while True:
        candidate = qvec([k**j for j in range(r)])
        if all(dot(f, candidate) != 0 for f in arr.forms):
            push(candidate)
            break
        k += 1
    return dirs


def vanish_order_at_infinity(phi: RationalElement):
    """Largest n with ``t^(n-1) * phi(y + t z)`` vanishing at infinity for all z.

    Returns 0 when the element does not vanish at infinity, and ``math.inf``
    for the zero element (every order works).
    """
    if phi.is_zero():
        return math.inf
    worst = None
    for z in _infinity_directions(phi.arr):
        deg = _degree_along(phi, z)
        if deg is NEG_INF:
            continue
        order = -int(deg)
        worst = order if worst is None else min(worst, order)
    if worst is None:
        return math.inf
    return max(0, worst)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def format_element(phi: RationalElement, var: str = "z") -> str:
    if not phi.terms:
        return "0"
    parts = []
    for t in phi.terms:
        num = t.numerator.to_str(var)
        if t.denom:
            factors = []
            for c in sorted(t.denom):
                base = Polynomial.linear_form(phi.arr.forms[c]).to_str(var)
                e = t.denom[c]
                factors.append(f"({base})" + (f"^{e}" if e > 1 else ""))
            parts.append(f"({num})/" + "".join(factors))
        else:
            parts.append(num)
    return " + ".join(parts)
