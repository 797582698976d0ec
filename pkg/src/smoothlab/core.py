"""Domain types, base measures, smooth distributions, and the sequential game engine.

The unit interval is modeled as the dyadic grid k/2^64, so instance equality,
distinctness, and density certificates are exact integer/rational statements
rather than floating-point approximations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Sequence, Union

import numpy as np

RESOLUTION = 1 << 64  # number of dyadic points representing [0, 1)


class ConfigurationError(ValueError):
    """An experiment or distribution setup is invalid (unnormalized, uncertified, ...)."""


class DomainMismatchError(ValueError):
    """Two objects live on different instance domains."""


class ProtocolError(RuntimeError):
    """The prediction game's reveal ordering or label contract was violated."""


class WitnessError(ValueError):
    """A claimed zero-loss witness mislabels a stream point."""


class RealizabilityError(ValueError):
    """A sample cannot have been produced by a single anchored hypothesis."""


# ---------------------------------------------------------------------------
# instances


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """The point numerator / 2^64 of the unit interval."""

    numerator: int

    def __post_init__(self):
        if not 0 <= self.numerator < RESOLUTION:
            raise ValueError(f"dyadic numerator out of range: {self.numerator}")

    @property
    def value(self) -> float:
        return self.numerator / RESOLUTION

    @classmethod
    def from_float(cls, x) -> "Dyadic":
        num = Fraction(x) * RESOLUTION
        if num.denominator != 1 or not 0 <= num < RESOLUTION:
            raise ValueError(f"{x!r} is not a point of the dyadic grid")
        return cls(int(num))

    def __lt__(self, other):
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.numerator < other.numerator

    def __repr__(self):
        return f"Dyadic({self.numerator})"


@total_ordering
@dataclass(frozen=True)
class GridPoint:
    """A cell index in {1, ..., m^2} of the finite grid domain."""

    index: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"grid parameter must be positive, got {self.m}")
        if not 1 <= self.index <= self.m * self.m:
            raise ValueError(f"grid index {self.index} outside [1, {self.m * self.m}]")

    def __lt__(self, other):
        if not isinstance(other, GridPoint):
            return NotImplemented
        if other.m != self.m:
            raise DomainMismatchError(f"cannot order grid points with m={self.m} and m={other.m}")
        return self.index < other.index


Instance = Union[Dyadic, GridPoint]


class InstanceSequence:
    """An ordered tuple of pairwise-distinct instances (the anchor of anchored labels)."""

    __slots__ = ("items", "_hash")

    def __init__(self, items: Iterable[Instance]):
        items = tuple(items)
        if len(set(items)) != len(items):
            raise ValueError("anchor instances must be pairwise distinct")
        self.items = items
        self._hash = hash(items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, InstanceSequence):
            return NotImplemented
        return self._hash == other._hash and self.items == other.items

    def __repr__(self):
        return f"InstanceSequence(len={len(self.items)})"


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class AnchoredLabel:
    """Label carrying an anchor sequence plus either a bit prefix or the off-anchor marker.

    ``prefix is None`` encodes the off-anchor marker; otherwise it is a tuple of
    bits of length at most ``len(seq)``.
    """

    seq: InstanceSequence
    prefix: Optional[tuple] = None

    def __post_init__(self):
        if self.prefix is not None:
            if len(self.prefix) > len(self.seq):
                raise ValueError("prefix longer than anchor sequence")
            if any(b not in (0, 1) for b in self.prefix):
                raise ValueError("prefix bits must be 0/1")

    @property
    def is_star(self) -> bool:
        return self.prefix is None


@dataclass(frozen=True)
class BitLabel:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"bit label must be 0 or 1, got {self.value}")


@dataclass(frozen=True)
class NatLabel:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"natural label must be nonnegative, got {self.value}")


Label = Union[AnchoredLabel, BitLabel, NatLabel]
LABEL_TYPES = (AnchoredLabel, BitLabel, NatLabel)


# ---------------------------------------------------------------------------
# serialization (canonical: equal values serialize identically)


def instance_to_jsonable(x: Instance) -> dict:
    if isinstance(x, Dyadic):
        return {"kind": "dyadic", "num": x.numerator}
    if isinstance(x, GridPoint):
        return {"kind": "grid", "index": x.index, "m": x.m}
    raise TypeError(f"not an instance: {x!r}")


def instance_from_jsonable(obj: dict) -> Instance:
    if obj["kind"] == "dyadic":
        return Dyadic(int(obj["num"]))
    if obj["kind"] == "grid":
        return GridPoint(int(obj["index"]), int(obj["m"]))
    raise ValueError(f"unknown instance kind: {obj['kind']!r}")


def label_to_jsonable(y: Label) -> dict:
    if isinstance(y, AnchoredLabel):
        return {
            "kind": "anchored",
            "seq": [instance_to_jsonable(x) for x in y.seq],
            "prefix": None if y.prefix is None else list(y.prefix),
        }
    if isinstance(y, BitLabel):
        return {"kind": "bit", "value": y.value}
    if isinstance(y, NatLabel):
        return {"kind": "nat", "value": y.value}
    raise TypeError(f"not a label: {y!r}")


def label_from_jsonable(obj: dict) -> Label:
    kind = obj["kind"]
    if kind == "anchored":
        seq = InstanceSequence(instance_from_jsonable(o) for o in obj["seq"])
        prefix = None if obj["prefix"] is None else tuple(int(b) for b in obj["prefix"])
        return AnchoredLabel(seq, prefix)
    if kind == "bit":
        return BitLabel(int(obj["value"]))
    if kind == "nat":
        return NatLabel(int(obj["value"]))
    raise ValueError(f"unknown label kind: {kind!r}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def label_canonical(y: Label) -> str:
    return canonical_json(label_to_jsonable(y))


# ---------------------------------------------------------------------------
# base measures and smooth distributions


@dataclass(frozen=True)
class UniformUnit:
    """Uniform base measure on the dyadic unit interval."""

    def sample(self, rng: np.random.Generator) -> Dyadic:
        return Dyadic(int(rng.integers(0, RESOLUTION, dtype=np.uint64)))


@dataclass(frozen=True)
class UniformGrid:
    """Uniform base measure on the m^2-cell grid."""

    m: int

    def sample(self, rng: np.random.Generator) -> GridPoint:
        return GridPoint(int(rng.integers(self.m * self.m)) + 1, self.m)


BaseMeasure = Union[UniformUnit, UniformGrid]


class SmoothDistribution:
    """A piecewise-constant-density distribution over one of the two domains.

    Unit variant: disjoint dyadic intervals [start, end) given by numerators,
    each carrying an exact rational mass. Grid variant: per-cell rational
    masses. Exact masses make the density-bound certificate a rational
    comparison rather than a floating-point one.
    """

    __slots__ = ("domain", "pieces", "m", "weights", "density_bound", "_cum", "_spans")

    def __init__(self, domain, pieces=None, m=None, weights=None):
        self.domain = domain
        if domain == "unit":
            pieces = tuple((int(s), int(e), Fraction(w)) for s, e, w in pieces)
            pieces = tuple(sorted(pieces))
            last = 0
            for s, e, w in pieces:
                if not 0 <= s < e <= RESOLUTION:
                    raise ConfigurationError(f"bad interval [{s}, {e})")
                if s < last:
                    raise ConfigurationError("support intervals overlap")
                if w < 0:
                    raise ConfigurationError("negative interval mass")
                last = e
            total = sum(w for _, _, w in pieces)
            if total != 1:
                raise ConfigurationError(f"interval masses sum to {total}, not 1")
            self.pieces = pieces
            self.m = None
            self.weights = None
            self.density_bound = max(w * RESOLUTION / (e - s) for s, e, w in pieces)
            self._cum = np.cumsum([float(w) for _, _, w in pieces])
            self._spans = [(s, e - s) for s, e, _ in pieces]
        elif domain == "grid":
            self.m = int(m)
            weights = {int(i): Fraction(w) for i, w in dict(weights).items() if Fraction(w) != 0}
            cells = self.m * self.m
            for i, w in weights.items():
                if not 1 <= i <= cells:
                    raise ConfigurationError(f"grid index {i} outside [1, {cells}]")
                if w < 0:
                    raise ConfigurationError("negative cell mass")
            total = sum(weights.values())
            if total != 1:
                raise ConfigurationError(f"cell masses sum to {total}, not 1")
            self.pieces = None
            self.weights = weights
            self.density_bound = max(w * cells for w in weights.values())
            idx = sorted(weights)
            self._spans = idx
            self._cum = np.cumsum([float(weights[i]) for i in idx])
        else:
            raise ConfigurationError(f"unknown domain {domain!r}")

    @classmethod
    def unit_pieces(cls, pieces) -> "SmoothDistribution":
        return cls("unit", pieces=pieces)

    @classmethod
    def grid_weights(cls, m, weights) -> "SmoothDistribution":
        return cls("grid", m=m, weights=weights)

    @classmethod
    def from_base(cls, mu: BaseMeasure) -> "SmoothDistribution":
        if isinstance(mu, UniformUnit):
            return cls.unit_pieces([(0, RESOLUTION, Fraction(1))])
        if isinstance(mu, UniformGrid):
            cells = mu.m * mu.m
            return cls.grid_weights(mu.m, {i: Fraction(1, cells) for i in range(1, cells + 1)})
        raise TypeError(f"not a base measure: {mu!r}")

    def matches(self, mu: BaseMeasure) -> bool:
        if self.domain == "unit":
            return isinstance(mu, UniformUnit)
        return isinstance(mu, UniformGrid) and mu.m == self.m

    def sample(self, rng: np.random.Generator) -> Instance:
        j = min(int(np.searchsorted(self._cum, rng.random(), side="right")), len(self._cum) - 1)
        if self.domain == "unit":
            start, span = self._spans[j]
            return Dyadic(start + int(rng.integers(0, span, dtype=np.uint64)))
        return GridPoint(self._spans[j], self.m)

    def support_contains(self, x: Instance) -> bool:
        if self.domain == "unit":
            if not isinstance(x, Dyadic):
                return False
            return any(s <= x.numerator < e for s, e, _ in self.pieces)
        return isinstance(x, GridPoint) and x.m == self.m and x.index in self.weights

    def to_jsonable(self) -> dict:
        if self.domain == "unit":
            return {
                "domain": "unit",
                "pieces": [[s, e, [w.numerator, w.denominator]] for s, e, w in self.pieces],
            }
        return {
            "domain": "grid",
            "m": self.m,
            "weights": {str(i): [w.numerator, w.denominator] for i, w in self.weights.items()},
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "SmoothDistribution":
        if obj["domain"] == "unit":
            pieces = [(s, e, Fraction(n, d)) for s, e, (n, d) in obj["pieces"]]
            return cls.unit_pieces(pieces)
        weights = {int(i): Fraction(n, d) for i, (n, d) in obj["weights"].items()}
        return cls.grid_weights(obj["m"], weights)


def smoothness_certificate(dist: SmoothDistribution, mu: BaseMeasure, sigma) -> bool:
    """Exact check that the density of ``dist`` against ``mu`` never exceeds 1/sigma."""
    if not dist.matches(mu):
        raise DomainMismatchError("distribution and base measure live on different domains")
    sigma = Fraction(sigma)
    if sigma <= 0:
        raise ConfigurationError(f"sigma must be positive, got {sigma}")
    return dist.density_bound * sigma <= 1


class SmoothProcess:
    """A horizon-length tuple of certified sigma-smooth distributions, fixed before play."""

    __slots__ = ("sigma", "mu", "distributions")

    def __init__(self, sigma, mu: BaseMeasure, distributions: Sequence[SmoothDistribution]):
        sigma_f = Fraction(sigma)
        if not 0 < sigma_f <= 1:
            raise ConfigurationError(f"sigma must lie in (0, 1], got {sigma}")
        distributions = tuple(distributions)
        for t, d in enumerate(distributions):
            if not smoothness_certificate(d, mu, sigma_f):
                raise ConfigurationError(
                    f"distribution {t} has density bound {float(d.density_bound):.6g} "
                    f"> 1/sigma = {float(1 / sigma_f):.6g}"
                )
        self.sigma = sigma_f
        self.mu = mu
        self.distributions = distributions

    def __len__(self):
        return len(self.distributions)

    @classmethod
    def iid_base(cls, mu: BaseMeasure, sigma, horizon: int) -> "SmoothProcess":
        base = SmoothDistribution.from_base(mu)
        return cls(sigma, mu, [base] * horizon)

    def to_jsonable(self) -> dict:
        mu = {"kind": "unit"} if isinstance(self.mu, UniformUnit) else {"kind": "grid", "m": self.mu.m}
        return {
            "sigma": [self.sigma.numerator, self.sigma.denominator],
            "mu": mu,
            "distributions": [d.to_jsonable() for d in self.distributions],
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "SmoothProcess":
        mu = UniformUnit() if obj["mu"]["kind"] == "unit" else UniformGrid(obj["mu"]["m"])
        sigma = Fraction(*obj["sigma"])
        dists = [SmoothDistribution.from_jsonable(d) for d in obj["distributions"]]
        return cls(sigma, mu, dists)


# ---------------------------------------------------------------------------
# streams and reports


class LabeledStream:
    """The adversary's ordered list of labeled instances for one game."""

    __slots__ = ("pairs",)

    def __init__(self, pairs):
        self.pairs = tuple((x, y) for x, y in pairs)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, t):
        return self.pairs[t]

    def __iter__(self):
        return iter(self.pairs)

    def instances(self):
        return [x for x, _ in self.pairs]

    def labels(self):
        return [y for _, y in self.pairs]

    def to_jsonable(self) -> list:
        return [[instance_to_jsonable(x), label_to_jsonable(y)] for x, y in self.pairs]

    @classmethod
    def from_jsonable(cls, obj) -> "LabeledStream":
        return cls((instance_from_jsonable(x), label_from_jsonable(y)) for x, y in obj)


@dataclass(frozen=True)
class RegretReport:
    """Per-round 0/1 losses of one game plus the hindsight comparator loss."""

    seed: int
    per_round_losses: tuple
    comparator_loss: Optional[int] = None

    @property
    def horizon(self) -> int:
        return len(self.per_round_losses)

    @property
    def learner_loss(self) -> int:
        return sum(self.per_round_losses)

    @property
    def regret(self) -> Optional[int]:
        if self.comparator_loss is None:
            return None
        return self.learner_loss - self.comparator_loss

    def with_comparator(self, loss: int) -> "RegretReport":
        return replace(self, comparator_loss=int(loss))

    def to_record(self) -> dict:
        return {
            "seed": self.seed,
            "T": self.horizon,
            "learner_loss": self.learner_loss,
            "comparator_loss": self.comparator_loss,
            "regret": self.regret,
        }


RECORD_FIELDS = ("seed", "T", "learner_loss", "comparator_loss", "regret")


# ---------------------------------------------------------------------------
# game engine


class _RevealGuard:
    """Tracks per-round prediction state; refuses label access before the prediction."""

    def __init__(self, horizon: int):
        self.horizon = horizon
        self.current = -1
        self.predicted = [False] * horizon

    def begin_round(self, t: int):
        self.current = t

    def mark_predicted(self, t: int):
        self.predicted[t] = True

    def check_reveal(self, t: int):
        if not 0 <= t < self.horizon:
            raise IndexError(f"round {t} outside horizon {self.horizon}")
        if t > self.current:
            raise ProtocolError(f"label of future round {t} requested during round {self.current}")
        if t == self.current and not self.predicted[t]:
            raise ProtocolError(f"label of round {t} requested before the round's prediction")


class GuardedStreamView:
    """Stream access handed to learners; labels open only after the round's prediction."""

    def __init__(self, stream: LabeledStream, guard: _RevealGuard):
        self._stream = stream
        self._guard = guard

    def __len__(self):
        return len(self._stream)

    def instance(self, t: int) -> Instance:
        if t > self._guard.current:
            raise ProtocolError(f"instance of future round {t} requested")
        return self._stream[t][0]

    def label(self, t: int) -> Label:
        self._guard.check_reveal(t)
        return self._stream[t][1]


def run_game(stream: LabeledStream, learner, rng: np.random.Generator, seed: int = 0) -> RegretReport:
    """Play the full prediction game and return the learner's loss sequence.

    Per round: the instance is revealed, the learner predicts (drawing any
    randomness from ``rng``), and only then is the true label revealed. The
    comparator slot of the returned report is left unset.
    """
    horizon = len(stream)
    declared = getattr(learner, "horizon", None)
    if declared is not None and declared != horizon:
        raise ProtocolError(f"learner initialized for horizon {declared}, stream has {horizon}")
    guard = _RevealGuard(horizon)
    if hasattr(learner, "attach_view"):
        learner.attach_view(GuardedStreamView(stream, guard))
    domain = getattr(learner, "label_domain", None)
    losses = []
    for t in range(horizon):
        x, y = stream[t]
        guard.begin_round(t)
        prediction = learner.predict(x, rng)
        if not isinstance(prediction, LABEL_TYPES):
            raise ProtocolError(f"round {t}: prediction {prediction!r} is not a label")
        if domain is not None and not isinstance(prediction, domain):
            raise ProtocolError(
                f"round {t}: prediction of type {type(prediction).__name__} "
                f"outside the learner's declared label domain"
            )
        guard.mark_predicted(t)
        losses.append(0 if prediction == y else 1)
        learner.observe(x, y)
    return RegretReport(seed=seed, per_round_losses=tuple(losses))


def comparator_loss(stream: LabeledStream, *, witness=None, candidates=None) -> int:
    """Cumulative loss of the hindsight comparator.

    Exactly one of ``witness`` (a hypothesis that must achieve loss zero,
    verified pointwise) or ``candidates`` (a finite hypothesis set minimized
    exactly) must be given.
    """
    if (witness is None) == (candidates is None):
        raise ValueError("pass exactly one of witness= or candidates=")
    if witness is not None:
        for t, (x, y) in enumerate(stream):
            got = witness(x)
            if got != y:
                raise WitnessError(f"witness mislabels round {t}: {got!r} != {y!r}")
        return 0
    candidates = list(candidates)
    if not candidates:
        raise ValueError("comparator over an empty hypothesis set is undefined")
    return min(sum(1 for x, y in stream if h(x) != y) for h in candidates)
