"""
Sparse multivariate polynomials with integer coefficients.

A `MultiPoly` maps exponent vectors over its (sorted) variable names to
nonzero integers. Only variables that actually occur are kept, so two equal
polynomials always have identical `variables` and `terms`.

Text form lists terms by total degree, and within a degree puts larger
powers of earlier variables first:

>>> x, y, z = MultiPoly.var("x"), MultiPoly.var("y"), MultiPoly.var("z")
>>> print((1 + x*z) * (1 + 3*x*z) - 3*x*x*z*z + 3*x*x*y + x**3*y*z - x*z)
1 + 3*x*z + 3*x^2*y + x^3*y*z
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from typing import Iterable, Union

__all__ = [
    "MultiPoly", "InexactDivision", "poly_div_exact",
    "q_int", "q_factorial", "q_binomial", "substitute", "geometric_series",
]

Exps = tuple[int, ...]


class InexactDivision(ArithmeticError):
    def __init__(self, quotient: "MultiPoly", remainder: "MultiPoly"):
        super().__init__(f"division leaves remainder {remainder}")
        self.quotient = quotient
        self.remainder = remainder


def _norm(variables: Iterable[str], terms: Mapping[Exps, int]):
    """Drop zero coefficients and unused variables; sort variables."""
    variables = tuple(variables)
    live = {e: c for e, c in terms.items() if c}
    used = [k for k in range(len(variables)) if any(e[k] for e in live)]
    order = sorted(used, key=lambda k: variables[k])
    new_vars = tuple(variables[k] for k in order)
    if len(set(new_vars)) != len(new_vars):
        raise ValueError(f"repeated variable names in {variables}")
    new_terms: dict[Exps, int] = {}
    for e, c in live.items():
        key = tuple(e[k] for k in order)
        new_terms[key] = new_terms.get(key, 0) + c
    return new_vars, {e: c for e, c in new_terms.items() if c}


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[Exps, int] | None = None):
        variables = tuple(variables)
        terms = dict(terms or {})
        for e in terms:
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} does not match variables {variables}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
        self.variables, self.terms = _norm(variables, terms)
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c: int) -> MultiPoly:
        return cls((), {(): int(c)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> MultiPoly:
        return cls((name,), {(power,): 1})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff: int = 1) -> MultiPoly:
        names = tuple(exponents)
        return cls(names, {tuple(exponents[v] for v in names): coeff})

    @classmethod
    def from_dicts(cls, items: Iterable[tuple[Mapping[str, int], int]]) -> MultiPoly:
        """Build from (exponent-dict, coefficient) pairs."""
        items = list(items)
        names = sorted({v for e, _ in items for v in e})
        terms: dict[Exps, int] = {}
        for e, c in items:
            key = tuple(e.get(v, 0) for v in names)
            terms[key] = terms.get(key, 0) + c
        return cls(names, terms)

    # views

    def is_zero(self) -> bool:
        return not self.terms

    def exponent_dicts(self) -> list[tuple[dict[str, int], int]]:
        return [({v: k for v, k in zip(self.variables, e) if k}, c)
                for e, c in self._sorted_terms()]

    def coeff(self, exponents: Mapping[str, int] | None = None, **kw) -> int:
        exponents = dict(exponents or {}, **kw)
        if any(v not in self.variables and k for v, k in exponents.items()):
            return 0
        key = tuple(exponents.get(v, 0) for v in self.variables)
        return self.terms.get(key, 0)

    def degree(self, variable: str | None = None) -> int:
        """Total degree, or the degree in one variable; -1 for zero."""
        if not self.terms:
            return -1
        if variable is None:
            return max(sum(e) for e in self.terms)
        if variable not in self.variables:
            return 0
        k = self.variables.index(variable)
        return max(e[k] for e in self.terms)

    def evaluate(self, values: Mapping[str, int]) -> int:
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.variables, e):
                t *= values[v] ** k
            total += t
        return total

    # arithmetic

    def _aligned(self, other: MultiPoly):
        names = sorted(set(self.variables) | set(other.variables))

        def lift(p):
            idx = [names.index(v) for v in p.variables]
            out = {}
            for e, c in p.terms.items():
                full = [0] * len(names)
                for k, pos in enumerate(idx):
                    full[pos] = e[k]
                out[tuple(full)] = c
            return out

        return names, lift(self), lift(other)

    @staticmethod
    def _coerce(other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        names, a, b = self._aligned(other)
        for e, c in b.items():
            a[e] = a.get(e, 0) + c
        return MultiPoly(names, a)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        names, a, b = self._aligned(other)
        out: dict[Exps, int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly(names, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"polynomial power needs a non-negative integer, got {k!r}")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def truncate(self, caps: Mapping[str, int]) -> MultiPoly:
        """Drop every term whose degree in some capped variable exceeds its cap."""
        idx = [(self.variables.index(v), cap) for v, cap in caps.items() if v in self.variables]
        return MultiPoly(self.variables, {
            e: c for e, c in self.terms.items() if all(e[k] <= cap for k, cap in idx)})

    def mul_truncated(self, other: MultiPoly, caps: Mapping[str, int]) -> MultiPoly:
        return (self.truncate(caps) * other.truncate(caps)).truncate(caps)

    # shape queries on univariate polynomials

    def coefficients(self) -> list[int]:
        """Dense coefficient list c_0..c_d of a univariate polynomial."""
        self._require_univariate()
        if not self.terms:
            return []
        out = [0] * (self.degree() + 1)
        for e, c in self.terms.items():
            out[e[0] if e else 0] = c
        return out

    def _require_univariate(self):
        if len(self.variables) > 1:
            raise ValueError(f"shape queries need a univariate polynomial, got {self.variables}")

    def _support(self) -> tuple[int, list[int]]:
        coeffs = self.coefficients()
        low = next((i for i, c in enumerate(coeffs) if c), 0)
        return low, coeffs[low:]

    def is_symmetric(self, center=None) -> bool:
        """c_k == c_{2*center - k} for all k; center defaults to the midpoint of the support."""
        if not self.terms:
            return True
        low, seq = self._support()
        mid2 = 2 * low + len(seq) - 1
        if center is not None and 2 * center != mid2:
            return False
        return seq == seq[::-1]

    def is_unimodal(self) -> bool:
        """Coefficients on the exponent range [min degree, degree] rise then fall."""
        if not self.terms:
            return True
        _, seq = self._support()
        k = 0
        while k + 1 < len(seq) and seq[k] <= seq[k + 1]:
            k += 1
        while k + 1 < len(seq) and seq[k] >= seq[k + 1]:
            k += 1
        return k == len(seq) - 1

    # text and JSON

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self._sorted_terms():
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"coeffs": c, "exponents": e} for e, c in self.exponent_dicts()]

    @classmethod
    def from_json(cls, data) -> MultiPoly:
        return cls.from_dicts((dict(t["exponents"]), int(t["coeffs"])) for t in data)

    @classmethod
    def parse(cls, text: str) -> MultiPoly:
        return _parse(text)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?|(\d+)")


def _parse(text: str) -> MultiPoly:
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pieces = _TERM_SPLIT.split(s)
    # split yields ['', sign, term, sign, term, ...]
    if pieces[0].strip():
        raise ValueError(f"cannot parse polynomial {text!r}")
    items = []
    for sign, term in zip(pieces[1::2], pieces[2::2]):
        if not term:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = -1 if sign == "-" else 1
        exps: dict[str, int] = {}
        for factor in term.replace(" ", "").split("*"):
            m = _FACTOR.fullmatch(factor)
            if m is None:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            if m.group(3) is not None:
                coeff *= int(m.group(3))
            else:
                exps[m.group(1)] = exps.get(m.group(1), 0) + int(m.group(2) or 1)
        items.append((exps, coeff))
    return MultiPoly.from_dicts(items)


def _leading(p: MultiPoly):
    return max(p.terms.items(), key=lambda t: (sum(t[0]), t[0]))


def poly_div_exact(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """num / den, raising InexactDivision unless the remainder is zero.

    Plain multivariate division by leading terms (graded lex); when den
    divides num the greedy quotient is the true one.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    names, r, d = num._aligned(den)
    lt_e, lt_c = max(d.items(), key=lambda t: (sum(t[0]), t[0]))
    quotient: dict[Exps, int] = {}
    remainder: dict[Exps, int] = {}
    while r:
        e, c = max(r.items(), key=lambda t: (sum(t[0]), t[0]))
        shift = tuple(a - b for a, b in zip(e, lt_e))
        if any(k < 0 for k in shift) or c % lt_c:
            remainder[e] = c
            del r[e]
            continue
        qc = c // lt_c
        quotient[shift] = quotient.get(shift, 0) + qc
        for de, dc in d.items():
            key = tuple(a + b for a, b in zip(de, shift))
            v = r.get(key, 0) - qc * dc
            if v:
                r[key] = v
            else:
                r.pop(key, None)
    q = MultiPoly(names, quotient)
    if remainder:
        raise InexactDivision(q, MultiPoly(names, remainder))
    return q


def q_int(n: int, variable: str = "q") -> MultiPoly:
    """[n]_q = 1 + q + ... + q^{n-1}."""
    if n < 0:
        raise ValueError(f"[n]_q needs n >= 0, got {n}")
    return MultiPoly((variable,), {(i,): 1 for i in range(n)})


def q_factorial(n: int, variable: str = "q") -> MultiPoly:
    if n < 0:
        raise ValueError(f"[n]_q! needs n >= 0, got {n}")
    out = MultiPoly.const(1)
    for i in range(1, n + 1):
        out = out * q_int(i, variable)
    return out


def q_binomial(a: int, b: int, variable: str = "q") -> MultiPoly:
    if not 0 <= b <= a:
        raise ValueError(f"q-binomial needs 0 <= b <= a, got ({a}, {b})")
    return poly_div_exact(q_factorial(a, variable),
                          q_factorial(b, variable) * q_factorial(a - b, variable))


Binding = Union[MultiPoly, Mapping[str, int]]


def substitute(p: MultiPoly, bindings: Mapping[str, Binding]) -> MultiPoly:
    """Replace variables by polynomials or by Laurent monomials.

    A mapping value such as {"x": 1, "q": -1} stands for the monomial x/q.
    Negative exponents may appear in intermediate terms but must cancel or
    clear in the result, otherwise ValueError is raised.
    """
    laurent: dict[tuple[tuple[str, int], ...], int] = {}
    for e, c in p.terms.items():
        acc: dict[tuple[tuple[str, int], ...], int] = {(): c}
        for v, k in zip(p.variables, e):
            if not k:
                continue
            image = bindings.get(v)
            if image is None:
                image = MultiPoly.var(v)
            if isinstance(image, MultiPoly):
                image_terms = [(tuple(sorted(d.items())), ic)
                               for d, ic in image.exponent_dicts()]
                powered = {(): 1}
                for _ in range(k):
                    powered = _laurent_mul(powered, dict(image_terms))
            else:
                mono = tuple(sorted((name, k * m) for name, m in image.items() if m))
                powered = {mono: 1}
            acc = _laurent_mul(acc, powered)
        for mono, ac in acc.items():
            laurent[mono] = laurent.get(mono, 0) + ac
    items = []
    for mono, c in laurent.items():
        if not c:
            continue
        if any(m < 0 for _, m in mono):
            raise ValueError(f"substitution leaves a negative exponent: {dict(mono)}")
        items.append((dict(mono), c))
    return MultiPoly.from_dicts(items)


def _laurent_mul(a, b):
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            d = dict(ma)
            for name, k in mb:
                d[name] = d.get(name, 0) + k
            key = tuple(sorted((n_, k) for n_, k in d.items() if k))
            out[key] = out.get(key, 0) + ca * cb
    return out


def geometric_series(mono: MultiPoly, caps: Mapping[str, int]) -> MultiPoly:
    """1/(1 - mono) as a power series truncated at `caps` (required, per variable).

    `mono` must be a single term with no constant part.
    """
    if len(mono.terms) != 1 or mono.degree() <= 0:
        raise ValueError(f"geometric_series needs a non-constant monomial, got {mono}")
    if not any(mono.degree(v) > 0 for v in caps):
        raise ValueError(f"caps {dict(caps)} do not bound the powers of {mono}")
    total = MultiPoly.const(1)
    power = MultiPoly.const(1)
    while True:
        power = power.mul_truncated(mono, caps)
        if power.is_zero():
            return total
        total = total + power
