"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a mapping from exponent tuples to nonzero coefficients.
The same class serves polynomials in the ``z`` coordinates (functions on the
dual side) and in the ``h`` coordinates (functions on the primal side); only
the printing name differs.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .linalg import Q, QONE, QZERO, Vec

NEG_INF = float("-inf")  # degree of the zero polynomial


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[dict] = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = Q(c)
                if c != 0:
                    clean[tuple(exp)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Q(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): QONE})

    @classmethod
    def linear_form(cls, vector: Sequence) -> "Polynomial":
        """The linear function ``x -> <vector, x>``."""
        n = len(vector)
        terms = {}
        for i, c in enumerate(vector):
            if c != 0:
                exp = [0] * n
                exp[i] = 1
                terms[tuple(exp)] = Q(c)
        return cls(n, terms)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): Q(coeff)})

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, QZERO) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = s
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            prod: dict = {}
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    exp = tuple(x + y for x, y in zip(e1, e2))
                    s = prod.get(exp, QZERO) + c1 * c2
                    if s == 0:
                        prod.pop(exp, None)
                    else:
                        prod[exp] = s
            out = Polynomial.__new__(Polynomial)
            out.nvars = self.nvars
            out.terms = prod
            return out
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Q(c)
        out = Polynomial.__new__(Polynomial)
        out.nvars = self.nvars
        out.terms = {} if c == 0 else {e: c * v for e, v in self.terms.items()}
        return out

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    __hash__ = None  # mutable dict inside; identity hashing would be a trap

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure ---------------------------------------------------------
    def degree(self):
        """Total degree; the zero polynomial has degree -inf."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int):
        if not self.terms:
            return NEG_INF
        return max(e[var] for e in self.terms)

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for exp, c in self.terms.items():
            parts.setdefault(sum(exp), {})[exp] = c
        return {d: Polynomial(self.nvars, t) for d, t in sorted(parts.items())}

    def homogeneous_part(self, d: int) -> "Polynomial":
        terms = {e: c for e, c in self.terms.items() if sum(e) == d}
        return Polynomial(self.nvars, terms)

    def constant_value(self):
        """Coefficient of the constant monomial."""
        return self.terms.get((0,) * self.nvars, QZERO)

    def evaluate(self, point: Sequence):
        point = [Q(p) for p in point]
        total = QZERO
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(point, exp):
                if e:
                    v *= x**e
            total += v
        return total

    # -- calculus ----------------------------------------------------------
    def partial(self, var: int) -> "Polynomial":
        terms = {}
        for exp, c in self.terms.items():
            e = exp[var]
            if e:
                nexp = exp[:var] + (e - 1,) + exp[var + 1:]
                terms[nexp] = terms.get(nexp, QZERO) + c * e
        return Polynomial(self.nvars, terms)

    def directional_derivative(self, v: Sequence) -> "Polynomial":
        out = Polynomial.zero(self.nvars)
        for i, c in enumerate(v):
            if c != 0:
                out = out + self.partial(i).scale(c)
        return out

    # -- substitution ------------------------------------------------------
    def compose_linear(self, images: Sequence[Sequence], new_nvars: int) -> "Polynomial":
        """Substitute variable i by the linear form ``images[i]`` over new variables."""
        forms = [Polynomial.linear_form(img) for img in images]
        for f in forms:
            f.nvars = new_nvars
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in cache:
                cache[key] = forms[i] ** e
            return cache[key]

        out = Polynomial.zero(new_nvars)
        for exp, c in self.terms.items():
            piece = Polynomial.constant(new_nvars, c)
            for i, e in enumerate(exp):
                if e:
                    piece = piece * power(i, e)
            out = out + piece
        return out

    def divide_by_linear(self, form: Sequence) -> Optional["Polynomial"]:
        """Exact quotient by the linear form ``<form, x>``; None if not divisible."""
        pivot = max((i for i, c in enumerate(form) if c != 0), default=None)
        if pivot is None:
            raise ValueError("division by the zero form")
        cp = Q(form[pivot])
        quotient: dict = {}
        rest = dict(self.terms)
        while rest:
            d = max(e[pivot] for e in rest)
            if d == 0:
                return None if rest else Polynomial(self.nvars, quotient)
            lead = {e: c for e, c in rest.items() if e[pivot] == d}
            for exp, c in lead.items():
                qexp = exp[:pivot] + (d - 1,) + exp[pivot + 1:]
                qc = c / cp
                quotient[qexp] = quotient.get(qexp, QZERO) + qc
                # subtract qc * x^qexp * form
                for i, fc in enumerate(form):
                    if fc == 0:
                        continue
                    mexp = list(qexp)
                    mexp[i] += 1
                    mexp = tuple(mexp)
                    s = rest.get(mexp, QZERO) - qc * Q(fc)
                    if s == 0:
                        rest.pop(mexp, None)
                    else:
                        rest[mexp] = s
        return Polynomial(self.nvars, quotient)

    # -- printing ----------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def to_str(self, var: str = "z") -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                f"{var}{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()})"
