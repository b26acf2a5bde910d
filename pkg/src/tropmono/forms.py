"""Bigraded forms on R^n with polynomial coefficients.

A form is a sum of monomials f(x) d'x_I ^ d''x_J with I, J strictly
increasing index tuples; the two blocks anticommute degree by degree, and
canonical order is the full d' block first, then the full d'' block, each
sorted.  Mixed bidegrees may coexist in one value; graded operators act
piecewise.

Indices are 0-based in memory.  Serialized structures and printed witnesses
use 1-based indices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .linalg import QMatrix, as_fraction, shuffle_sign
from .poly import Poly

Key = tuple[tuple[int, ...], tuple[int, ...]]


def _as_index_tuple(indices: Iterable[int], nvars: int) -> tuple[int, ...]:
    out = tuple(int(i) for i in indices)
    if any(not 0 <= i < nvars for i in out):
        raise ValueError("index out of range")
    if any(out[k] >= out[k + 1] for k in range(len(out) - 1)):
        raise ValueError("indices must be strictly increasing")
    return out


class Superform:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Key, Poly] = ()):
        cleaned: dict[Key, Poly] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (dpr, dsec), coeff in items:
            key = (_as_index_tuple(dpr, nvars), _as_index_tuple(dsec, nvars))
            if coeff.nvars != nvars:
                raise ValueError("coefficient lives in the wrong ring")
            if coeff.is_zero():
                continue
            prev = cleaned.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                cleaned.pop(key, None)
            else:
                cleaned[key] = total
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Superform is immutable")

    @classmethod
    def zero(cls, nvars: int) -> "Superform":
        return cls(nvars)

    @classmethod
    def monomial(cls, nvars: int, dprime: Sequence[int], dsecond: Sequence[int],
                 coeff) -> "Superform":
        if not isinstance(coeff, Poly):
            coeff = Poly.const(nvars, coeff)
        return cls(nvars, {(tuple(dprime), tuple(dsecond)): coeff})

    @classmethod
    def one_prime(cls, nvars: int, i: int) -> "Superform":
        return cls.monomial(nvars, (i,), (), 1)

    @classmethod
    def one_second(cls, nvars: int, i: int) -> "Superform":
        return cls.monomial(nvars, (), (i,), 1)

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(len(i), len(j)) for i, j in self.terms}

    def graded_piece(self, p: int, q: int) -> "Superform":
        return Superform(self.nvars, {k: v for k, v in self.terms.items()
                                      if (len(k[0]), len(k[1])) == (p, q)})

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def __add__(self, other: "Superform") -> "Superform":
        if other.nvars != self.nvars:
            raise ValueError("mixed ambient dimensions")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = terms.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = total
        out = Superform.__new__(Superform)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", terms)
        return out

    def __neg__(self) -> "Superform":
        out = Superform.__new__(Superform)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", {k: -v for k, v in self.terms.items()})
        return out

    def __sub__(self, other: "Superform") -> "Superform":
        return self + (-other)

    def __mul__(self, scalar) -> "Superform":
        c = as_fraction(scalar)
        if not c:
            return Superform.zero(self.nvars)
        out = Superform.__new__(Superform)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", {k: v * c for k, v in self.terms.items()})
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, Superform) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset((k, hash(v)) for k, v in self.terms.items())))

    def wedge(self, other: "Superform") -> "Superform":
        """Graded product.  The cross sign (-1)^(p' * q) moves the incoming d'
        block through the resident d'' block; block-internal sorting then
        contributes the usual shuffle signs."""
        if other.nvars != self.nvars:
            raise ValueError("mixed ambient dimensions")
        acc: dict[Key, Poly] = {}
        for (i1, j1), f in self.terms.items():
            for (i2, j2), g in other.terms.items():
                sh_i = shuffle_sign(i1, i2)
                if sh_i is None:
                    continue
                sh_j = shuffle_sign(j1, j2)
                if sh_j is None:
                    continue
                sign = sh_i[0] * sh_j[0]
                if (len(i2) * len(j1)) % 2:
                    sign = -sign
                key = (sh_i[1], sh_j[1])
                term = f * g
                if sign < 0:
                    term = -term
                prev = acc.get(key)
                total = term if prev is None else prev + term
                if total.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = total
        return Superform(self.nvars, acc)

    def d_prime(self) -> "Superform":
        acc: dict[Key, Poly] = {}
        for (dpr, dsec), f in self.terms.items():
            for i in range(self.nvars):
                g = f.derivative(i)
                if g.is_zero():
                    continue
                sh = shuffle_sign((i,), dpr)
                if sh is None:
                    continue
                sign, merged = sh
                _accumulate(acc, (merged, dsec), g if sign > 0 else -g)
        return Superform(self.nvars, acc)

    def d_second(self) -> "Superform":
        # the new d'' factor crosses the whole d' block, hence the (-1)^p
        acc: dict[Key, Poly] = {}
        for (dpr, dsec), f in self.terms.items():
            lead = -1 if len(dpr) % 2 else 1
            for i in range(self.nvars):
                g = f.derivative(i)
                if g.is_zero():
                    continue
                sh = shuffle_sign((i,), dsec)
                if sh is None:
                    continue
                sign, merged = sh
                _accumulate(acc, (dpr, merged), g if lead * sign > 0 else -g)
        return Superform(self.nvars, acc)

    def flip(self) -> "Superform":
        """Swap the two blocks wholesale; costs (-1)^(p*q) per monomial."""
        acc: dict[Key, Poly] = {}
        for (dpr, dsec), f in self.terms.items():
            sign = -1 if (len(dpr) * len(dsec)) % 2 else 1
            _accumulate(acc, (dsec, dpr), f if sign > 0 else -f)
        return Superform(self.nvars, acc)

    def monodromy(self) -> "Superform":
        """Trade one d' factor for the matching d'' factor, summed over the
        d' block.  Undefined when a (0,q) component is present."""
        acc: dict[Key, Poly] = {}
        for (dpr, dsec), f in self.terms.items():
            p = len(dpr)
            if p == 0:
                raise ValueError("monodromy is undefined on (0,q) components")
            for k in range(p):
                sh = shuffle_sign((dpr[k],), dsec)
                if sh is None:
                    continue
                sign, merged = sh
                if (p - 1 - k) % 2:
                    sign = -sign
                reduced = dpr[:k] + dpr[k + 1:]
                _accumulate(acc, (reduced, merged), f if sign > 0 else -f)
        return Superform(self.nvars, acc)

    def to_json_obj(self) -> list[dict]:
        out = []
        for dpr, dsec in sorted(self.terms):
            out.append({
                "dprime": [i + 1 for i in dpr],
                "dsecond": [i + 1 for i in dsec],
                "coeff": self.terms[(dpr, dsec)].to_json_obj(),
            })
        return out

    @classmethod
    def from_json_obj(cls, nvars: int, data: Sequence[Mapping]) -> "Superform":
        terms = []
        for entry in data:
            dpr = tuple(int(i) - 1 for i in entry["dprime"])
            dsec = tuple(int(i) - 1 for i in entry["dsecond"])
            terms.append(((dpr, dsec), Poly.from_json_obj(nvars, entry["coeff"])))
        return cls(nvars, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Superform(0)"
        bits = []
        for dpr, dsec in sorted(self.terms):
            factors = [f"d'x{i + 1}" for i in dpr] + [f"d''x{i + 1}" for i in dsec]
            label = "^".join(factors) if factors else "1"
            bits.append(f"({self.terms[(dpr, dsec)]!r}) {label}")
        return " + ".join(bits)


def _accumulate(acc: dict[Key, Poly], key: Key, value: Poly):
    prev = acc.get(key)
    total = value if prev is None else prev + value
    if total.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = total


class AffineMap:
    """x = A y + b from R^(source) to R^(target); A is target x source."""

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix: QMatrix, translation: Sequence = None):
        if translation is None:
            translation = [0] * matrix.nrows
        translation = tuple(as_fraction(x) for x in translation)
        if len(translation) != matrix.nrows:
            raise ValueError("translation length must match the target dimension")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMap is immutable")

    @property
    def source_dim(self) -> int:
        return self.matrix.ncols

    @property
    def target_dim(self) -> int:
        return self.matrix.nrows

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(QMatrix.identity(n))

    @classmethod
    def coordinate_inclusion(cls, source: int, target: int) -> "AffineMap":
        """y -> (y, 0, ..., 0)."""
        if source > target:
            raise ValueError("inclusion needs source <= target")
        rows = [[1 if j == i else 0 for j in range(source)] for i in range(target)]
        return cls(QMatrix(rows, ncols=source))

    def pullback(self, omega: Superform) -> "Superform":
        if omega.nvars != self.target_dim:
            raise ValueError("form does not live on the target space")
        n2 = self.source_dim
        subs = [Poly.affine(n2, self.matrix.row(i), self.translation[i])
                for i in range(self.target_dim)]
        pulled_prime: dict[int, Superform] = {}
        pulled_second: dict[int, Superform] = {}
        total = Superform.zero(n2)
        for (dpr, dsec), f in omega.terms.items():
            if n2 == 0:
                if dpr or dsec:
                    continue
                acc = Superform(0, {((), ()): Poly.const(0, f.eval_point(self.translation))})
                total = total + acc
                continue
            acc = Superform(n2, {((), ()): f.eval_poly(subs)})
            for i in dpr:
                if i not in pulled_prime:
                    row = self.matrix.row(i)
                    pulled_prime[i] = Superform(
                        n2, {((j,), ()): Poly.const(n2, row[j])
                             for j in range(n2) if row[j]})
                acc = acc.wedge(pulled_prime[i])
                if acc.is_zero():
                    break
            else:
                for j in dsec:
                    if j not in pulled_second:
                        row = self.matrix.row(j)
                        pulled_second[j] = Superform(
                            n2, {((), (k,)): Poly.const(n2, row[k])
                                 for k in range(n2) if row[k]})
                    acc = acc.wedge(pulled_second[j])
                    if acc.is_zero():
                        break
                total = total + acc
        return total


def vanishes_on_affine_span(omega: Superform, chart: AffineMap) -> bool:
    """Face membership test: does the form die on the affine span the chart
    parametrizes?"""
    return chart.pullback(omega).is_zero()
