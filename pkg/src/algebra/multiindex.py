"""Multi-indices alpha in N_0^n with the partial order and binomial helpers."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb, factorial, prod
from typing import Iterable, Iterator, Sequence


class MultiIndex(tuple):
    """Exponent tuple (alpha_1, ..., alpha_n) of nonnegative integers.

    Arithmetic is exposed through named methods; `+` keeps tuple concatenation.
    """

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int]):
        values = tuple(int(a) for a in exponents)
        if any(a < 0 for a in values):
            raise ValueError(f"Multi-index exponents must be nonnegative: {values}")
        return super().__new__(cls, values)

    @classmethod
    def zero(cls, nvars: int) -> "MultiIndex":
        return cls((0,) * nvars)

    @classmethod
    def unit(cls, nvars: int, i: int) -> "MultiIndex":
        return cls(1 if j == i else 0 for j in range(nvars))

    @property
    def nvars(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def add(self, other: Sequence[int]) -> "MultiIndex":
        return MultiIndex(a + b for a, b in zip(self, other, strict=True))

    def sub(self, other: Sequence[int]) -> "MultiIndex":
        """self - other; requires other ⪯ self."""
        return MultiIndex(a - b for a, b in zip(self, other, strict=True))

    def precedes(self, other: Sequence[int]) -> bool:
        """self ⪯ other (componentwise)."""
        return all(a <= b for a, b in zip(self, other, strict=True))

    def factorial(self) -> int:
        return prod(factorial(a) for a in self)

    def binom(self, alpha: Sequence[int]) -> int:
        """binom(self, alpha) = prod_i C(self_i, alpha_i); defined for alpha ⪯ self."""
        if not MultiIndex(alpha).precedes(self):
            raise ValueError(f"binom{tuple(self)} over {tuple(alpha)} undefined: not alpha ⪯ beta")
        return prod(comb(b, a) for b, a in zip(self, alpha))

    def falling(self, alpha: Sequence[int]) -> int:
        """prod_i self_i! / (self_i - alpha_i)!, the factor of ∂^alpha x^self."""
        return prod(factorial(b) // factorial(b - a) for b, a in zip(self, alpha))

    def lower_set(self) -> list["MultiIndex"]:
        """All alpha ⪯ self, in graded-lex order."""
        return sorted(
            (MultiIndex(a) for a in product(*(range(b + 1) for b in self))),
            key=grlex_key,
        )

    def evaluate(self, x: Sequence):
        """x^alpha = prod_i x_i^alpha_i (exact for Fraction inputs)."""
        out = 1
        for xi, a in zip(x, self, strict=True):
            if a:
                out = out * xi ** a
        return out

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


def grlex_key(alpha: Sequence[int]) -> tuple:
    """Graded-lex sort key: degree first, then x_1 before x_2 (1, x1, x2, x1^2, x1x2, ...)."""
    return (sum(alpha), tuple(-a for a in alpha))


@lru_cache(maxsize=None)
def _monomials(nvars: int, max_deg: int) -> tuple[MultiIndex, ...]:
    out: list[MultiIndex] = []
    for deg in range(max_deg + 1):
        out.extend(_of_degree(nvars, deg))
    return tuple(out)


def _of_degree(nvars: int, deg: int) -> Iterator[MultiIndex]:
    if nvars == 1:
        yield MultiIndex((deg,))
        return
    for first in range(deg, -1, -1):
        for rest in _of_degree(nvars - 1, deg - first):
            yield MultiIndex((first, *rest))


def monomials(nvars: int, max_deg: int) -> list[MultiIndex]:
    """Every alpha in N_0^nvars with |alpha| <= max_deg, graded-lex ordered."""
    if nvars < 1:
        raise ValueError("nvars must be at least 1")
    if max_deg < 0:
        return []
    return list(_monomials(nvars, max_deg))


def monomial_count(nvars: int, max_deg: int) -> int:
    return comb(nvars + max_deg, nvars) if max_deg >= 0 else 0
