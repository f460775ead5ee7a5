"""Symbol strings and the cost of creating, displaying and maintaining them.

The cost of an expression X held for m time intervals is, per component i:

    cost_i = L(X)*delta_i  (instructions, bounded above by a copy of X)
           + overhead_i(L(X))  (carrying out the creation; affine in L(X))
           + L(X)*delta_i  (display)
           + m*L(X)*delta_e  (maintenance; energy component only)

The language bound N(r) answers: what is the longest expression whose
creation cost fits inside budget r when maintained for r's time component?
Its per-component form drops the display term, keeping a single length*delta
term next to the overhead (the creation-side bound).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .resources import RationalLike, ResourceVector, _as_fraction


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct single-character glyphs, size >= 2."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(self.symbols)
        if len(syms) < 2:
            raise ValueError("alphabet needs at least 2 symbols")
        if len(set(syms)) != len(syms):
            raise ValueError("duplicate symbols in alphabet")
        for s in syms:
            if not isinstance(s, str) or len(s) != 1:
                raise ValueError(f"symbols must be single characters, got {s!r}")
        object.__setattr__(self, "symbols", syms)

    @classmethod
    def from_string(cls, text: str) -> "Alphabet":
        return cls(tuple(text))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index_of(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in alphabet") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols


@dataclass(frozen=True)
class Expression:
    """A finite symbol string over an alphabet."""

    text: str
    alphabet: Alphabet

    def __post_init__(self):
        for ch in self.text:
            if ch not in self.alphabet:
                raise ValueError(f"character {ch!r} not in alphabet")

    @property
    def length(self) -> int:
        return len(self.text)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class CostParameters:
    """Per-symbol creation/display cost, per-interval maintenance energy, and
    the affine per-length overhead of carrying out a creation procedure."""

    delta: ResourceVector
    delta_e: Fraction
    overhead_base: ResourceVector
    overhead_slope: ResourceVector

    def __post_init__(self):
        object.__setattr__(self, "delta_e", _as_fraction(self.delta_e))
        if self.delta_e < 0:
            raise ValueError("delta_e must be nonnegative")
        n = len(self.delta.components)
        if len(self.overhead_base.components) != n or len(self.overhead_slope.components) != n:
            raise ValueError("cost parameter vectors must share one dimension")

    @classmethod
    def uniform(
        cls,
        n_components: int,
        delta: RationalLike = 1,
        delta_e: RationalLike = 0,
        base: RationalLike = 0,
        slope: RationalLike = 0,
    ) -> "CostParameters":
        mk = lambda v: ResourceVector((_as_fraction(v),) * n_components)
        return cls(mk(delta), _as_fraction(delta_e), mk(base), mk(slope))

    @property
    def n_components(self) -> int:
        return len(self.delta.components)

    def overhead_at(self, i: int, length: int) -> Fraction:
        return self.overhead_base.components[i] + self.overhead_slope.components[i] * length


def expression_cost(x: Expression, m: int, cp: CostParameters) -> ResourceVector:
    """Resources to create, display and maintain ``x`` for ``m`` intervals."""
    if m < 0:
        raise ValueError("maintenance interval count must be nonnegative")
    n = cp.n_components
    length = x.length
    comps = []
    for i in range(n):
        c = 2 * length * cp.delta.components[i] + cp.overhead_at(i, length)
        if i == n - 1:
            c += m * length * cp.delta_e
        comps.append(c)
    return ResourceVector(tuple(comps))


def max_length_component(
    i: int,
    r: ResourceVector,
    cp: CostParameters,
    duration: Optional[RationalLike] = None,
) -> Optional[int]:
    """Largest n with n*delta_i + overhead_i(n) + duration*n*delta_e (energy
    component only) <= r_i.  ``None`` means no finite bound.  Index is
    0-based; the last component is energy."""
    n_comp = cp.n_components
    if len(r.components) != n_comp:
        raise ValueError("budget and cost parameters disagree on dimension")
    dur = r.time if duration is None else _as_fraction(duration)
    per_symbol = cp.delta.components[i] + cp.overhead_slope.components[i]
    if i == n_comp - 1:
        per_symbol += dur * cp.delta_e
    slack = r.components[i] - cp.overhead_base.components[i]
    if per_symbol == 0:
        return None if slack >= 0 else 0
    if slack < 0:
        return 0
    return math.floor(slack / per_symbol)


def max_length(r: ResourceVector, cp: CostParameters) -> Optional[int]:
    """N(r): the most resource-intensive component sets the expression-length
    cap.  ``None`` only when every component is unbounded."""
    best: Optional[int] = None
    for i in range(cp.n_components):
        ni = max_length_component(i, r, cp)
        if ni is None:
            continue
        best = ni if best is None else min(best, ni)
    return best


def in_language(x: Expression, r: ResourceVector, cp: CostParameters) -> bool:
    cap = max_length(r, cp)
    return cap is None or x.length <= cap
