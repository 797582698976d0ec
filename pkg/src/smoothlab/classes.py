"""Evaluable, parameterized hypothesis families.

Every hypothesis is an immutable value callable on instances. The anchored
family reveals growing bit prefixes on its anchor points; the indicator family
with rational supports returns 0 on every dyadic instance by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .core import (
    AnchoredLabel,
    BitLabel,
    Dyadic,
    DomainMismatchError,
    GridPoint,
    Instance,
    InstanceSequence,
    NatLabel,
    UniformGrid,
    UniformUnit,
    instance_from_jsonable,
    instance_to_jsonable,
)


@dataclass(frozen=True)
class SeparationHypothesis:
    """On the t-th anchor point, outputs the anchor plus the first t code bits;
    everywhere else, outputs the anchor plus the off-anchor marker."""

    seq: InstanceSequence
    theta: tuple

    _position: dict = field(init=False, repr=False, compare=False)
    _labels: tuple = field(init=False, repr=False, compare=False)
    _star: AnchoredLabel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.theta) != len(self.seq):
            raise ValueError("code length must equal anchor length")
        if any(b not in (0, 1) for b in self.theta):
            raise ValueError("code bits must be 0/1")
        object.__setattr__(self, "_position", {x: t for t, x in enumerate(self.seq)})
        object.__setattr__(
            self,
            "_labels",
            tuple(AnchoredLabel(self.seq, self.theta[: t + 1]) for t in range(len(self.seq))),
        )
        object.__setattr__(self, "_star", AnchoredLabel(self.seq, None))

    def __call__(self, x: Instance) -> AnchoredLabel:
        t = self._position.get(x)
        return self._star if t is None else self._labels[t]


@dataclass(frozen=True)
class IndicatorHypothesis:
    """Membership indicator of a finite support.

    Support elements are either instances (matched exactly) or non-dyadic
    rationals with odd denominator > 1, which no dyadic instance ever equals.
    """

    support: frozenset

    def __post_init__(self):
        for s in self.support:
            if isinstance(s, (Dyadic, GridPoint)):
                continue
            if isinstance(s, Fraction):
                if s.denominator <= 1 or s.denominator % 2 == 0:
                    raise ValueError(f"rational support element {s} must have odd denominator > 1")
                continue
            raise TypeError(f"unsupported support element {s!r}")

    def __call__(self, x) -> BitLabel:
        return BitLabel(1 if x in self.support else 0)


@dataclass(frozen=True)
class ConstantHypothesis:
    """Outputs the same natural number everywhere."""

    value: int

    _label: NatLabel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_label", NatLabel(self.value))

    def __call__(self, x) -> NatLabel:
        return self._label


@dataclass(frozen=True)
class ThresholdHypothesis:
    """Outputs 1 at or above the cutoff on a totally ordered domain."""

    cutoff: Instance

    def __call__(self, x) -> BitLabel:
        return BitLabel(1 if x >= self.cutoff else 0)


@dataclass(frozen=True)
class TableHypothesis:
    """Explicit lookup table over the m^2-cell grid, used for finite-class experiments."""

    m: int
    table: tuple

    _labels: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.table) != self.m * self.m:
            raise ValueError(f"table must have {self.m * self.m} entries")
        object.__setattr__(self, "_labels", tuple(NatLabel(int(v)) for v in self.table))

    def __call__(self, x: GridPoint) -> NatLabel:
        if not isinstance(x, GridPoint) or x.m != self.m:
            raise DomainMismatchError(f"expected a grid point with m={self.m}, got {x!r}")
        return self._labels[x.index - 1]


AnyHypothesis = Union[
    SeparationHypothesis,
    IndicatorHypothesis,
    ConstantHypothesis,
    ThresholdHypothesis,
    TableHypothesis,
]


# ---------------------------------------------------------------------------
# random constructors


def random_distinct_instances(mu, n: int, rng: np.random.Generator) -> list:
    """n pairwise-distinct draws from the base measure (resamples on collision)."""
    while True:
        draws = [mu.sample(rng) for _ in range(n)]
        if len(set(draws)) == n:
            return draws


def random_separation_hypothesis(mu, n: int, rng: np.random.Generator) -> SeparationHypothesis:
    seq = InstanceSequence(random_distinct_instances(mu, n, rng))
    theta = tuple(int(b) for b in rng.integers(0, 2, size=n))
    return SeparationHypothesis(seq, theta)


def random_table_class(m: int, size: int, num_labels: int, rng: np.random.Generator) -> list:
    """A finite class of random grid lookup tables (distinct as functions)."""
    seen = set()
    out = []
    while len(out) < size:
        table = tuple(int(v) for v in rng.integers(0, num_labels, size=m * m))
        if table in seen:
            continue
        seen.add(table)
        out.append(TableHypothesis(m, table))
    return out


# ---------------------------------------------------------------------------
# serialization


def hypothesis_to_jsonable(h: AnyHypothesis) -> dict:
    if isinstance(h, SeparationHypothesis):
        return {
            "kind": "separation",
            "seq": [instance_to_jsonable(x) for x in h.seq],
            "theta": list(h.theta),
        }
    if isinstance(h, IndicatorHypothesis):
        elems = []
        for s in sorted(h.support, key=repr):
            if isinstance(s, Fraction):
                elems.append({"kind": "rational", "num": s.numerator, "den": s.denominator})
            else:
                elems.append(instance_to_jsonable(s))
        return {"kind": "indicator", "support": elems}
    if isinstance(h, ConstantHypothesis):
        return {"kind": "constant", "value": h.value}
    if isinstance(h, ThresholdHypothesis):
        return {"kind": "threshold", "cutoff": instance_to_jsonable(h.cutoff)}
    if isinstance(h, TableHypothesis):
        return {"kind": "table", "m": h.m, "table": list(h.table)}
    raise TypeError(f"not a hypothesis: {h!r}")


def hypothesis_from_jsonable(obj: dict) -> AnyHypothesis:
    kind = obj["kind"]
    if kind == "separation":
        seq = InstanceSequence(instance_from_jsonable(o) for o in obj["seq"])
        return SeparationHypothesis(seq, tuple(int(b) for b in obj["theta"]))
    if kind == "indicator":
        support = set()
        for o in obj["support"]:
            if o["kind"] == "rational":
                support.add(Fraction(o["num"], o["den"]))
            else:
                support.add(instance_from_jsonable(o))
        return IndicatorHypothesis(frozenset(support))
    if kind == "constant":
        return ConstantHypothesis(int(obj["value"]))
    if kind == "threshold":
        return ThresholdHypothesis(instance_from_jsonable(obj["cutoff"]))
    if kind == "table":
        return TableHypothesis(int(obj["m"]), tuple(obj["table"]))
    raise ValueError(f"unknown hypothesis kind: {kind!r}")
