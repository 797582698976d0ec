"""Oblivious stream generators.

Every generator materializes the full labeled stream, its smooth process, and
(when available) a zero-loss witness before the game starts, and takes no
learner input. Streams serialize to JSON so any game can be replayed bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .classes import (
    AnyHypothesis,
    IndicatorHypothesis,
    SeparationHypothesis,
    hypothesis_from_jsonable,
    hypothesis_to_jsonable,
)
from .core import (
    RESOLUTION,
    AnchoredLabel,
    BitLabel,
    ConfigurationError,
    InstanceSequence,
    LabeledStream,
    SmoothDistribution,
    SmoothProcess,
    UniformGrid,
    UniformUnit,
    comparator_loss,
)


@dataclass(frozen=True)
class StreamBundle:
    """A fully materialized game: stream, certified process, and hindsight comparator."""

    stream: LabeledStream
    process: SmoothProcess
    witness: Optional[AnyHypothesis] = None
    comparator_pool: tuple = ()
    distinct: bool = True

    def exact_comparator_loss(self) -> int:
        if self.witness is not None:
            return comparator_loss(self.stream, witness=self.witness)
        return comparator_loss(self.stream, candidates=self.comparator_pool)

    def to_jsonable(self) -> dict:
        return {
            "stream": self.stream.to_jsonable(),
            "process": self.process.to_jsonable(),
            "witness": None if self.witness is None else hypothesis_to_jsonable(self.witness),
            "comparator_pool": [hypothesis_to_jsonable(h) for h in self.comparator_pool],
            "distinct": self.distinct,
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "StreamBundle":
        return cls(
            stream=LabeledStream.from_jsonable(obj["stream"]),
            process=SmoothProcess.from_jsonable(obj["process"]),
            witness=None if obj["witness"] is None else hypothesis_from_jsonable(obj["witness"]),
            comparator_pool=tuple(hypothesis_from_jsonable(h) for h in obj["comparator_pool"]),
            distinct=obj["distinct"],
        )


def _cumulative_prefixes(theta):
    return [theta[: t + 1] for t in range(len(theta))]


def separation_stream(horizon: int, domain, rng: np.random.Generator) -> StreamBundle:
    """The anchored lower-bound stream: iid uniform instances, labels revealing a
    fresh uniform code bit per anchored round.

    Unit domain: the anchor is the whole (almost surely distinct) draw and the
    witness fits every round. Grid domain: only the first m rounds are anchored;
    when the first m draws collide, the bundle is marked non-distinct, the anchor
    is completed with unused cells, and the intended hypothesis is kept as an
    exhaustive comparator instead of a verified witness.
    """
    if isinstance(domain, UniformUnit):
        while True:
            draws = [domain.sample(rng) for _ in range(horizon)]
            if len(set(draws)) == horizon:
                break
        theta = tuple(int(b) for b in rng.integers(0, 2, size=horizon))
        seq = InstanceSequence(draws)
        prefixes = _cumulative_prefixes(theta)
        labels = [AnchoredLabel(seq, p) for p in prefixes]
        stream = LabeledStream(zip(draws, labels))
        witness = SeparationHypothesis(seq, theta)
        process = SmoothProcess.iid_base(domain, 1, horizon)
        return StreamBundle(stream=stream, process=process, witness=witness)

    if isinstance(domain, UniformGrid):
        m = domain.m
        if horizon < m:
            raise ConfigurationError(f"grid stream needs horizon >= m, got T={horizon}, m={m}")
        draws = [domain.sample(rng) for _ in range(horizon)]
        head = draws[:m]
        distinct = len(set(head)) == m
        if distinct:
            anchor_items = head
        else:
            # complete the anchor: keep first occurrences, swap repeats for the
            # smallest unused cells so the anchor stays pairwise distinct
            unused = iter(i for i in range(1, m * m + 1)
                          if all(p.index != i for p in head))
            seen = set()
            anchor_items = []
            for x in head:
                if x in seen:
                    anchor_items.append(type(x)(next(unused), m))
                else:
                    anchor_items.append(x)
                    seen.add(x)
        theta = tuple(int(b) for b in rng.integers(0, 2, size=m))
        seq = InstanceSequence(anchor_items)
        intended = SeparationHypothesis(seq, theta)
        prefixes = _cumulative_prefixes(theta)
        labels = [AnchoredLabel(seq, prefixes[t]) for t in range(m)]
        labels += [intended(x) for x in draws[m:]]
        stream = LabeledStream(zip(draws, labels))
        process = SmoothProcess.iid_base(domain, 1, horizon)
        if distinct:
            return StreamBundle(stream=stream, process=process, witness=intended)
        return StreamBundle(
            stream=stream,
            process=process,
            witness=None,
            comparator_pool=(intended,),
            distinct=False,
        )

    raise TypeError(f"not a base measure: {domain!r}")


def coinflip_stream(horizon: int, rng: np.random.Generator) -> StreamBundle:
    """Uniform unit instances with fair-coin labels; the finite-support indicator
    of the 1-labeled points witnesses realizability."""
    domain = UniformUnit()
    while True:
        draws = [domain.sample(rng) for _ in range(horizon)]
        if len(set(draws)) == horizon:
            break
    bits = [int(b) for b in rng.integers(0, 2, size=horizon)]
    stream = LabeledStream((x, BitLabel(b)) for x, b in zip(draws, bits))
    witness = IndicatorHypothesis(frozenset(x for x, b in zip(draws, bits) if b == 1))
    process = SmoothProcess.iid_base(domain, 1, horizon)
    return StreamBundle(stream=stream, process=process, witness=witness)


def realizable_smooth_stream(h: AnyHypothesis, process: SmoothProcess,
                             rng: np.random.Generator) -> StreamBundle:
    """Instances drawn from the certified process, labeled by ``h`` (the witness)."""
    draws = [d.sample(rng) for d in process.distributions]
    stream = LabeledStream((x, h(x)) for x in draws)
    return StreamBundle(stream=stream, process=process, witness=h)


def make_smooth_process(kind: str, mu, sigma, horizon: int, width=None) -> SmoothProcess:
    """Build a certified process from a named family.

    ``base``: every round uses the base measure itself (valid for any sigma <= 1).
    ``sliding_window``: round t is uniform on a window of the given width
    (default sigma) tiling the domain cyclically; the certificate rejects
    windows narrower than sigma.
    """
    if kind == "base":
        return SmoothProcess.iid_base(mu, sigma, horizon)
    if kind == "sliding_window":
        w = Fraction(sigma if width is None else width)
        if not 0 < w <= 1:
            raise ConfigurationError(f"window width must lie in (0, 1], got {w}")
        if isinstance(mu, UniformUnit):
            span = math.ceil(w * RESOLUTION)
            dists = []
            for t in range(horizon):
                start = (t * span) % RESOLUTION
                end = start + span
                if end <= RESOLUTION:
                    pieces = [(start, end, Fraction(1))]
                else:
                    first = RESOLUTION - start
                    pieces = [
                        (start, RESOLUTION, Fraction(first, span)),
                        (0, end - RESOLUTION, Fraction(span - first, span)),
                    ]
                dists.append(SmoothDistribution.unit_pieces(pieces))
            return SmoothProcess(sigma, mu, dists)
        if isinstance(mu, UniformGrid):
            cells = mu.m * mu.m
            block = math.ceil(w * cells)
            dists = []
            for t in range(horizon):
                start = (t * block) % cells
                idx = [(start + j) % cells + 1 for j in range(block)]
                dists.append(
                    SmoothDistribution.grid_weights(mu.m, {i: Fraction(1, block) for i in idx})
                )
            return SmoothProcess(sigma, mu, dists)
        raise TypeError(f"not a base measure: {mu!r}")
    raise ConfigurationError(f"unknown process family {kind!r}")


def grid_distinct_probability(m: int) -> float:
    """Exact probability that m iid uniform draws from m^2 cells are pairwise distinct."""
    p = Fraction(1)
    for i in range(m):
        p *= Fraction(m * m - i, m * m)
    return float(p)
