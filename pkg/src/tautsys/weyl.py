"""Normal-ordered differential operators and truncated power series.

A DiffOp is a finite sum  sum_t  c_t * a^{alpha_t} * D^{delta_t}  with every
a-factor to the left of every D-factor (D_i = d/da_i).  Composition applies
the Weyl relation [D_i, a_j] = delta_ij exactly; acting on a SparseSeries
uses falling factorials, which handle the negative exponents carried by the
distinguished indices (D a_0^m = m a_0^{m-1} for any integer m).

A SparseSeries stores exact coefficients for every exponent vector whose
grading (the sum over non-distinguished indices) is at most the truncation
order; the distinguished indices fold in the global a_0^{-1} prefactor of
the period series, so the Euler eigenvalue check reads sum(exp) = -1.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .polyalg import LaurentPoly

ExpVec = tuple[int, ...]


def falling_factorial(m: int, k: int) -> int:
    """m (m-1) ... (m-k+1); zero when 0 <= m < k, never zero for m < 0."""
    out = 1
    for j in range(k):
        out *= m - j
        if out == 0:
            return 0
    return out


class DiffOp:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[ExpVec, ExpVec], Fraction] | None = None):
        self.nvars = nvars
        clean: dict[tuple[ExpVec, ExpVec], Fraction] = {}
        if terms:
            for (a, d), c in terms.items():
                if len(a) != nvars or len(d) != nvars:
                    raise ValueError("exponent length != nvars")
                if any(x < 0 for x in a) or any(x < 0 for x in d):
                    raise ValueError("operator exponents must be nonnegative")
                c = Fraction(c)
                if c:
                    clean[(tuple(a), tuple(d))] = c
        self.terms = clean

    @classmethod
    def from_terms(cls, nvars: int, triples: Iterable[tuple]) -> "DiffOp":
        acc: dict[tuple[ExpVec, ExpVec], Fraction] = {}
        for c, a, d in triples:
            key = (tuple(a), tuple(d))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        return cls(nvars, acc)

    @classmethod
    def constant(cls, nvars: int, c) -> "DiffOp":
        z = (0,) * nvars
        return cls(nvars, {(z, z): Fraction(c)})

    @classmethod
    def partial(cls, nvars: int, i: int, k: int = 1) -> "DiffOp":
        z = (0,) * nvars
        d = list(z)
        d[i] = k
        return cls(nvars, {(z, tuple(d)): Fraction(1)})

    @classmethod
    def coordinate(cls, nvars: int, i: int, k: int = 1) -> "DiffOp":
        z = (0,) * nvars
        a = list(z)
        a[i] = k
        return cls(nvars, {(tuple(a), z): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, DiffOp)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self):
        return DiffOp(self.nvars, {k: -c for k, c in self.terms.items()})

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return DiffOp(self.nvars, out)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        c = Fraction(c)
        if not c:
            return DiffOp(self.nvars)
        return DiffOp(self.nvars, {k: c * v for k, v in self.terms.items()})

    def order(self) -> int:
        """Total differential order (max over terms of sum of the D-exponent)."""
        return max((sum(d) for (_, d) in self.terms), default=0)

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered product self о other (self applied after other)."""
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        n = self.nvars
        acc: dict[tuple[ExpVec, ExpVec], Fraction] = {}
        for (a1, d1), c1 in self.terms.items():
            for (a2, d2), c2 in other.terms.items():
                overlap = [i for i in range(n) if d1[i] > 0 and a2[i] > 0]
                base = c1 * c2
                # multi-index k <= min(d1, a2) on the overlap positions
                ks = [0] * len(overlap)

                def emit(kvec):
                    coeff = base
                    for pos, i in enumerate(overlap):
                        k = kvec[pos]
                        if k:
                            coeff *= comb(d1[i], k) * falling_factorial(a2[i], k)
                    a = list(a1)
                    d = list(d2)
                    for i in range(n):
                        a[i] += a2[i]
                        d[i] += d1[i]
                    for pos, i in enumerate(overlap):
                        k = kvec[pos]
                        a[i] -= k
                        d[i] -= k
                    key = (tuple(a), tuple(d))
                    s = acc.get(key, Fraction(0)) + coeff
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)

                def rec(pos):
                    if pos == len(overlap):
                        emit(tuple(ks))
                        return
                    i = overlap[pos]
                    for k in range(min(d1[i], a2[i]) + 1):
                        ks[pos] = k
                        rec(pos + 1)

                rec(0)
        return DiffOp(n, acc)

    def principal_symbol(self) -> LaurentPoly:
        """Top-order part with D_i replaced by the commuting symbol zeta_i.

        Returns a polynomial in 2N variables: a_0..a_{N-1}, zeta_0..zeta_{N-1}.
        """
        n = self.nvars
        top = self.order()
        out: dict[tuple, Fraction] = {}
        for (a, d), c in self.terms.items():
            if sum(d) != top:
                continue
            out[a + d] = out.get(a + d, Fraction(0)) + c
        return LaurentPoly(2 * n, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, d) in sorted(self.terms):
            c = self.terms[(a, d)]
            mono = "".join(f"a{i}^{k}" if k != 1 else f"a{i}" for i, k in enumerate(a) if k)
            mono += "".join(f"D{i}^{k}" if k != 1 else f"D{i}" for i, k in enumerate(d) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def to_json(self) -> dict:
        def sparse(e):
            return [[i, k] for i, k in enumerate(e) if k]

        terms = []
        for (a, d) in sorted(self.terms):
            c = self.terms[(a, d)]
            terms.append({"c": f"{c.numerator}/{c.denominator}", "a": sparse(a), "d": sparse(d)})
        return {"N": self.nvars, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "DiffOp":
        n = data["N"]

        def dense(pairs):
            e = [0] * n
            for i, k in pairs:
                e[i] = k
            return tuple(e)

        terms = {}
        for t in data["terms"]:
            num, den = t["c"].split("/")
            terms[(dense(t["a"]), dense(t["d"]))] = Fraction(int(num), int(den))
        return cls(n, terms)


class SparseSeries:
    """Truncated multivariate series: exponent vector -> exact coefficient.

    blocks is a tuple of (start, stop, distinguished_index); hypersurface
    series use the single block (0, N, 0).  Exponents at distinguished
    indices are typically negative (they carry the folded a_0^{-1} factor);
    all other entries are nonnegative and their sum, the grading, is at most
    the truncation order for stored terms.
    """

    __slots__ = ("nvars", "order", "coeffs", "blocks")

    def __init__(
        self,
        nvars: int,
        order: int,
        coeffs: Mapping[ExpVec, Fraction] | None = None,
        blocks: Sequence[tuple[int, int, int]] | None = None,
    ):
        self.nvars = nvars
        self.order = order
        self.blocks = tuple(tuple(b) for b in blocks) if blocks else ((0, nvars, 0),)
        clean: dict[ExpVec, Fraction] = {}
        if coeffs:
            for e, c in coeffs.items():
                if len(e) != nvars:
                    raise ValueError("exponent length != nvars")
                c = Fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.coeffs = clean

    @property
    def distinguished(self) -> tuple[int, ...]:
        return tuple(b[2] for b in self.blocks)

    def grading(self, exp: Sequence[int]) -> int:
        d = set(self.distinguished)
        return sum(x for i, x in enumerate(exp) if i not in d)

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, SparseSeries)
            and self.nvars == other.nvars
            and self.order == other.order
            and self.blocks == other.blocks
            and self.coeffs == other.coeffs
        )

    def support_sorted(self) -> list[ExpVec]:
        d = set(self.distinguished)
        return sorted(
            self.coeffs, key=lambda e: (sum(x for i, x in enumerate(e) if i not in d), e)
        )

    def to_json(self) -> dict:
        dist = self.distinguished
        data = {
            "N": self.nvars,
            "v0": dist[0] if len(dist) == 1 else list(dist),
            "T": self.order,
            "coeffs": [
                {
                    "exp": [[i, k] for i, k in enumerate(e) if k],
                    "num": str(self.coeffs[e].numerator),
                    "den": str(self.coeffs[e].denominator),
                }
                for e in self.support_sorted()
            ],
        }
        if len(self.blocks) > 1:
            data["blocks"] = [list(b) for b in self.blocks]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SparseSeries":
        n = data["N"]
        if "blocks" in data:
            blocks = [tuple(b) for b in data["blocks"]]
        else:
            v0 = data["v0"]
            blocks = [(0, n, v0 if isinstance(v0, int) else v0[0])]
        coeffs = {}
        for t in data["coeffs"]:
            e = [0] * n
            for i, k in t["exp"]:
                e[i] = k
            coeffs[tuple(e)] = Fraction(int(t["num"]), int(t["den"]))
        return cls(n, data["T"], coeffs, blocks)


def safe_order(op: DiffOp, order: int, distinguished: Sequence[int] = (0,)) -> int:
    """Largest grading whose output coefficients are exact under `op`.

    Per-term shift analysis: a term a^alpha D^delta moves grading g input to
    g - |delta'| + |alpha'| (primes: sum off the distinguished indices), so
    exactness at output grading h needs h + |delta'| - |alpha'| <= order for
    every term.
    """
    if not op.terms:
        return order
    d = set(distinguished)
    worst = max(
        sum(x for i, x in enumerate(de) if i not in d)
        - sum(x for i, x in enumerate(a) if i not in d)
        for (a, de) in op.terms
    )
    return order - worst


def apply(op: DiffOp, series: SparseSeries) -> SparseSeries:
    """Exact term-by-term action of `op` on `series`, truncated to the safe order."""
    if op.nvars != series.nvars:
        raise ValueError("variable count mismatch")
    dist = set(series.distinguished)
    so = safe_order(op, series.order, series.distinguished)
    out: dict[ExpVec, Fraction] = {}
    if so < 0 or not op.terms:
        return SparseSeries(series.nvars, so, out, series.blocks)

    # per-variable support lists let first-order terms touch only the
    # exponents they can act on
    support: dict[int, list[ExpVec]] = {}

    def support_list(v: int) -> list[ExpVec]:
        lst = support.get(v)
        if lst is None:
            lst = [e for e in series.coeffs if e[v] != 0]
            support[v] = lst
        return lst

    all_exps = list(series.coeffs)
    for (aexp, dexp), c in op.terms.items():
        dpos = [i for i in range(op.nvars) if dexp[i] > 0]
        free_dpos = [i for i in dpos if i not in dist]
        if free_dpos:
            v = min(free_dpos, key=lambda i: len(support_list(i)))
            candidates = support_list(v)
        else:
            candidates = all_exps
        for e in candidates:
            f = 1
            for i in dpos:
                f *= falling_factorial(e[i], dexp[i])
                if f == 0:
                    break
            if f == 0:
                continue
            new = tuple(x - y + z for x, y, z in zip(e, dexp, aexp))
            g = sum(x for i, x in enumerate(new) if i not in dist)
            if g > so:
                continue
            val = out.get(new, Fraction(0)) + series.coeffs[e] * c * f
            if val:
                out[new] = val
            else:
                out.pop(new, None)
    return SparseSeries(series.nvars, so, out, series.blocks)
