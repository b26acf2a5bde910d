"""Sparse multivariate polynomials over the rationals.

A Poly is a map from exponent tuples (one slot per variable) to nonzero
Fraction coefficients.  The class is closed under the operations the rest of
the package needs: ring arithmetic, partial derivatives, substitution of
polynomials for variables, and exact integration of the last variable over
the unit interval.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import as_fraction, rat_str


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] = ()):
        cleaned: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple has wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = as_fraction(coeff)
            if c:
                prev = cleaned.get(exps)
                total = c if prev is None else prev + c
                if total:
                    cleaned[exps] = total
                elif prev is not None:
                    del cleaned[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {exps: 1})

    @classmethod
    def affine(cls, nvars: int, coeffs: Sequence, constant=0) -> "Poly":
        """constant + sum(coeffs[i] * x_i)."""
        if len(coeffs) != nvars:
            raise ValueError("coefficient list has wrong length")
        terms = {(0,) * nvars: as_fraction(constant)}
        for i, c in enumerate(coeffs):
            exps = tuple(1 if j == i else 0 for j in range(nvars))
            terms[exps] = as_fraction(c)
        return cls(nvars, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exps) for exps in self.terms)

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly) or other.nvars != self.nvars:
            raise ValueError("mixed variable counts")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            total = terms.get(exps, Fraction(0)) + c
            if total:
                terms[exps] = total
            elif exps in terms:
                del terms[exps]
        out = Poly.__new__(Poly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", terms)
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", {e: -c for e, c in self.terms.items()})
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            self._check(other)
            terms: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    total = terms.get(exps, Fraction(0)) + c1 * c2
                    if total:
                        terms[exps] = total
                    elif exps in terms:
                        del terms[exps]
            out = Poly.__new__(Poly)
            object.__setattr__(out, "nvars", self.nvars)
            object.__setattr__(out, "terms", terms)
            return out
        c = as_fraction(other)
        if not c:
            return Poly.zero(self.nvars)
        out = Poly.__new__(Poly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", {e: c * v for e, v in self.terms.items()})
        return out

    __rmul__ = __mul__

    def derivative(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise ValueError("variable index out of range")
        terms = {}
        for exps, c in self.terms.items():
            if exps[i]:
                lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                terms[lowered] = terms.get(lowered, Fraction(0)) + c * exps[i]
        return Poly(self.nvars, terms)

    def eval_poly(self, args: Sequence["Poly"]) -> "Poly":
        """Substitute args[i] for variable i; args live in a common ring."""
        if len(args) != self.nvars:
            raise ValueError("need one substitute per variable")
        if not args:
            raise ValueError("eval_poly needs a target ring; use constant_value")
        target = args[0].nvars
        if any(a.nvars != target for a in args):
            raise ValueError("substitutes live in different rings")
        powers: list[list[Poly]] = [[Poly.const(target, 1)] for _ in args]
        out = Poly.zero(target)
        for exps, c in self.terms.items():
            term = Poly.const(target, c)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * args[i])
                term = term * powers[i][e]
            out = out + term
        return out

    def eval_point(self, point: Sequence) -> Fraction:
        vals = [as_fraction(x) for x in point]
        if len(vals) != self.nvars:
            raise ValueError("point has wrong length")
        total = Fraction(0)
        for exps, c in self.terms.items():
            prod = c
            for x, e in zip(vals, exps):
                prod *= x ** e
            total += prod
        return total

    def lift(self, extra: int) -> "Poly":
        """Reinterpret in a ring with `extra` new trailing variables."""
        pad = (0,) * extra
        return Poly(self.nvars + extra, {e + pad: c for e, c in self.terms.items()})

    def integrate_last_unit(self) -> "Poly":
        """Integrate the last variable over [0, 1] and drop it."""
        if self.nvars == 0:
            raise ValueError("no variable to integrate")
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            head, k = exps[:-1], exps[-1]
            add = c / (k + 1)
            total = terms.get(head, Fraction(0)) + add
            if total:
                terms[head] = total
            elif head in terms:
                del terms[head]
        return Poly(self.nvars - 1, terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[exps]
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                            for i, e in enumerate(exps) if e)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def to_json_obj(self) -> dict[str, str]:
        out = {}
        for exps in sorted(self.terms):
            out[",".join(str(e) for e in exps)] = rat_str(self.terms[exps])
        return out

    @classmethod
    def from_json_obj(cls, nvars: int, obj: Mapping[str, str]) -> "Poly":
        terms = {}
        for key, val in obj.items():
            exps = tuple(int(p) for p in key.split(",")) if key else ()
            terms[exps] = as_fraction(val)
        return cls(nvars, terms)
