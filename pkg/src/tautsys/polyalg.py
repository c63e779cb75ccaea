"""Sparse multivariate Laurent polynomials over the rationals.

Terms live in a dict mapping dense exponent tuples (entries may be
negative) to nonzero ``Fraction`` coefficients; the zero polynomial is the
empty dict.  Arithmetic is exact and purely functional: no method mutates
its operands.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

ExpVec = tuple[int, ...]


class LaurentPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[ExpVec, Fraction] | None = None):
        self.nvars = nvars
        clean: dict[ExpVec, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent length != nvars")
                c = Fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], coeff=1) -> "LaurentPoly":
        return cls(nvars, {tuple(exp): Fraction(coeff)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(nvars, e)

    # -- ring operations ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.nvars, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def scale(self, c) -> "LaurentPoly":
        c = Fraction(c)
        if not c:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict[ExpVec, Fraction] = {}
        small, big = (self.terms, other.terms)
        if len(small) > len(big):
            small, big = big, small
        for e1, c1 in small.items():
            for e2, c2 in big.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(self.nvars, out)

    def power(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative power of a general Laurent polynomial")
        result = LaurentPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base2 = base * base if k > 1 else base
            base = base2
            k >>= 1
        return result

    def shift(self, exp: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial z^exp (exact, exponents may go negative)."""
        exp = tuple(exp)
        return LaurentPoly(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()},
        )

    # -- inspection --------------------------------------------------------
    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def derivative(self, var: int) -> "LaurentPoly":
        out: dict[ExpVec, Fraction] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            e2 = e[:var] + (k - 1,) + e[var + 1 :]
            s = out.get(e2, 0) + c * k
            if s:
                out[e2] = s
            else:
                out.pop(e2, None)
        return LaurentPoly(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact evaluation; requires nonzero coordinates under negative exponents."""
        vals = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(vals, e):
                if k == 0:
                    continue
                if x == 0 and k < 0:
                    raise ZeroDivisionError("negative exponent at a zero coordinate")
                v *= x ** k
            total += v
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(
                f"z{i}^{k}" if k != 1 else f"z{i}" for i, k in enumerate(e) if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [
                {
                    "exp": list(e),
                    "num": str(self.terms[e].numerator),
                    "den": str(self.terms[e].denominator),
                }
                for e in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        return cls(
            data["vars"],
            {
                tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"]))
                for t in data["terms"]
            },
        )


def product(polys: Iterable[LaurentPoly], nvars: int) -> LaurentPoly:
    out = LaurentPoly.const(nvars, 1)
    for p in polys:
        out = out * p
    return out
