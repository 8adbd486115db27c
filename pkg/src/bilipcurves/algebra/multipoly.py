"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import upoly


class MultiPoly:
    """Immutable sparse polynomial over Q in an ordered list of variables.

    Terms map exponent tuples to nonzero ``Fraction`` coefficients.  Iteration
    order is graded lexicographic (highest first), which makes ``str`` and
    serialisation canonical.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, variables: Sequence[str], c) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    @classmethod
    def from_upoly(cls, variables: Sequence[str], name: str, p: upoly.UPoly) -> "MultiPoly":
        k = list(variables).index(name)
        terms = {}
        for i, c in enumerate(p):
            exp = [0] * len(variables)
            exp[k] = i
            terms[tuple(exp)] = c
        return cls(variables, terms)

    # basic protocol ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({self.variables}, {self})"

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return MultiPoly.const(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        out = MultiPoly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # inspection -------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        if not self.terms:
            return -1
        k = self.variables.index(name)
        return max(e[k] for e in self.terms)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for k, v in enumerate(self.variables) if any(e[k] for e in self.terms))

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly(self.variables, {e: c for e, c in self.terms.items() if sum(e) == d})

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    # transformations --------------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into another variable list containing all used variables."""
        variables = tuple(variables)
        idx = []
        for k, v in enumerate(self.variables):
            if v in variables:
                idx.append(variables.index(v))
            elif any(e[k] for e in self.terms):
                raise ValueError(f"variable {v!r} is used and cannot be dropped")
            else:
                idx.append(None)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for k, j in enumerate(idx):
                if j is not None:
                    new[j] = e[k]
            terms[tuple(new)] = c
        return MultiPoly(variables, terms)

    def diff(self, name: str) -> "MultiPoly":
        k = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                terms[tuple(ne)] = c * e[k]
        return MultiPoly(self.variables, terms)

    def coefficients_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Coefficients as a polynomial in ``name``; keys are powers."""
        k = self.variables.index(name)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] = 0
            out.setdefault(e[k], {})[tuple(ne)] = c
        return {i: MultiPoly(self.variables, t) for i, t in out.items()}

    def subs(self, mapping: Mapping[str, object], variables: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute variables by MultiPolys (in ``variables``) or rationals."""
        variables = tuple(variables) if variables is not None else self.variables
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MultiPoly):
                    img = MultiPoly.const(variables, img)
                elif img.variables != variables:
                    img = img.with_variables(variables)
                images.append(img)
            else:
                images.append(MultiPoly.var(variables, v))
        cache: list[dict[int, MultiPoly]] = [{} for _ in images]

        def pw(k: int, n: int) -> MultiPoly:
            if n not in cache[k]:
                cache[k][n] = images[k] ** n
            return cache[k][n]

        out = MultiPoly(variables)
        for e, c in self.terms.items():
            term = MultiPoly.const(variables, c)
            for k, n in enumerate(e):
                if n:
                    term = term * pw(k, n)
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at numbers for every variable (works for floats/complex too)."""
        vals = [point[v] for v in self.variables]
        total = 0
        for e, c in self.terms.items():
            t = c if all(isinstance(v, (int, Fraction)) for v in vals) else complex(c)
            for v, n in zip(vals, e):
                if n:
                    t = t * v**n
            total = total + t
        return total

    def to_upoly(self, name: str | None = None) -> upoly.UPoly:
        used = self.used_variables()
        if name is None:
            if len(used) > 1:
                raise ValueError("polynomial is not univariate")
            name = used[0] if used else self.variables[0]
        elif any(v != name for v in used):
            raise ValueError(f"polynomial is not univariate in {name!r}")
        k = self.variables.index(name)
        coeffs: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            coeffs[e[k]] = c
        if not coeffs:
            return upoly.ZERO
        return upoly.make(coeffs.get(i, 0) for i in range(max(coeffs) + 1))

    def homogenize(self, name: str) -> "MultiPoly":
        """Homogenize to the total degree with a new last variable ``name``."""
        d = self.total_degree()
        variables = self.variables + (name,)
        return MultiPoly(variables, {e + (d - sum(e),): c for e, c in self.terms.items()})

    def content_normalized(self) -> "MultiPoly":
        """Scale so that the leading (grlex) coefficient is 1."""
        if not self.terms:
            return self
        c = self.sorted_terms()[0][1]
        return self * (1 / c)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if n == 1 else f"{v}^{n}" for v, n in zip(self.variables, e) if n
            )
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            pieces.append(("-" if c < 0 else "+", body))
        s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s


def product(polys: Iterable[MultiPoly], variables: Sequence[str]) -> MultiPoly:
    out = MultiPoly.const(variables, 1)
    for p in polys:
        out = out * p
    return out
