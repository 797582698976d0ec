"""Online learners: randomized exponential weights over finite expert sets, plus
the protocol baselines used by the lower-bound experiments.

Weights live in the log domain. The default learning rate sqrt(8 ln N / T)
gives sampled exponential weights an expected regret of at most
sqrt(T ln N / 2) against the best expert, comfortably inside the
sqrt(2 T ln N) contract the cover-based analysis relies on.
"""

from __future__ import annotations

import math

import numpy as np

from .core import AnchoredLabel, BitLabel, NatLabel, ProtocolError


def hedge_learning_rate(n_experts: int, horizon: int) -> float:
    if n_experts < 1 or horizon < 1:
        raise ValueError("need at least one expert and one round")
    return math.sqrt(8.0 * math.log(n_experts) / horizon)


def hedge_regret_bound(n_experts: int, horizon: int) -> float:
    """The expected-regret contract sqrt(2 T ln N) for N experts over T rounds."""
    return math.sqrt(2.0 * horizon * math.log(n_experts))


class HedgeCore:
    """Log-domain exponential weights over N experts with 0/1 losses."""

    def __init__(self, n_experts: int, eta: float):
        if n_experts < 1:
            raise ValueError("need at least one expert")
        if eta < 0:
            raise ValueError("learning rate must be nonnegative")
        self.eta = float(eta)
        self.log_weights = np.zeros(n_experts)

    @property
    def n_experts(self) -> int:
        return len(self.log_weights)

    def probabilities(self) -> np.ndarray:
        shifted = self.log_weights - self.log_weights.max()
        w = np.exp(shifted)
        return w / w.sum()

    def sample_index(self, rng: np.random.Generator) -> int:
        cum = np.cumsum(self.probabilities())
        return min(int(np.searchsorted(cum, rng.random(), side="right")), self.n_experts - 1)

    def update(self, losses) -> None:
        losses = np.asarray(losses, dtype=float)
        if losses.shape != self.log_weights.shape:
            raise ValueError("loss vector length must match the expert count")
        self.log_weights -= self.eta * losses


def expected_hedge_regret(loss_matrix: np.ndarray, eta: float) -> float:
    """Exact expected regret of sampled exponential weights on a fixed 0/1 loss matrix.

    The sampled expert is independent of the round's losses, so the expected
    per-round loss is the probability-weighted loss; weight trajectories are
    deterministic given the matrix.
    """
    loss_matrix = np.asarray(loss_matrix, dtype=float)
    core = HedgeCore(loss_matrix.shape[1], eta)
    total = 0.0
    for row in loss_matrix:
        total += float(core.probabilities() @ row)
        core.update(row)
    return total - float(loss_matrix.sum(axis=0).min())


def sampled_hedge_regret(loss_matrix: np.ndarray, eta: float, runs: int,
                         rng: np.random.Generator):
    """Seed-averaged regret of sampled exponential weights: (mean, standard error)."""
    loss_matrix = np.asarray(loss_matrix, dtype=float)
    horizon, n = loss_matrix.shape
    core = HedgeCore(n, eta)
    losses = np.zeros(runs)
    for row in loss_matrix:
        cum = np.cumsum(core.probabilities())
        picks = np.searchsorted(cum, rng.random(runs), side="right").clip(max=n - 1)
        losses += row[picks]
        core.update(row)
    regrets = losses - float(loss_matrix.sum(axis=0).min())
    se = regrets.std(ddof=1) / math.sqrt(runs) if runs > 1 else 0.0
    return float(regrets.mean()), float(se)


class ExponentialWeightsLearner:
    """Engine adapter: samples an expert per round, reweights on the revealed label."""

    def __init__(self, experts, horizon: int, eta: float | None = None):
        self.experts = list(experts)
        if not self.experts:
            raise ValueError("expert set must be nonempty")
        self.horizon = horizon
        if eta is None:
            eta = hedge_learning_rate(len(self.experts), horizon)
        self.core = HedgeCore(len(self.experts), eta)
        self._awaiting_update = False

    def predict(self, x, rng):
        if self._awaiting_update:
            raise ProtocolError("second prediction requested before the round's update")
        self._awaiting_update = True
        return self.experts[self.core.sample_index(rng)](x)

    def observe(self, x, y):
        if not self._awaiting_update:
            raise ProtocolError("update without a pending prediction")
        self._awaiting_update = False
        losses = np.fromiter(
            (0.0 if e(x) == y else 1.0 for e in self.experts), float, len(self.experts)
        )
        self.core.update(losses)

    def selection_probabilities(self) -> np.ndarray:
        return self.core.probabilities()


def cover_learner(cover, horizon: int) -> ExponentialWeightsLearner:
    """Exponential weights over a covering set of hypotheses."""
    return ExponentialWeightsLearner(cover, horizon)


class RandomGuessLearner:
    """Predicts uniformly from a fixed finite label pool, ignoring history."""

    def __init__(self, pool):
        self.pool = tuple(pool)
        if not self.pool:
            raise ValueError("label pool must be nonempty")
        kinds = {type(y) for y in self.pool}
        self.label_domain = kinds.pop() if len(kinds) == 1 else None

    def predict(self, x, rng):
        return self.pool[int(rng.integers(len(self.pool)))]

    def observe(self, x, y):
        pass


class AnchoredPrefixGuesser:
    """Learns the anchor from the first reveal, then guesses the round's whole
    prefix uniformly (the 2^t-label pool at anchored round t)."""

    def __init__(self):
        self.anchor = None
        self.known = ()
        self.round = 0

    def _guess_bits(self, length, rng):
        return tuple(int(b) for b in rng.integers(0, 2, size=length))

    def predict(self, x, rng):
        if self.anchor is None:
            return NatLabel(0)
        t = self.round
        if t < len(self.anchor):
            return AnchoredLabel(self.anchor, self._guess_bits(t + 1, rng))
        return self._post_anchor_prediction(x, rng)

    def _post_anchor_prediction(self, x, rng):
        try:
            pos = self.anchor.items.index(x)
        except ValueError:
            return AnchoredLabel(self.anchor, None)
        return AnchoredLabel(self.anchor, self._guess_bits(pos + 1, rng))

    def observe(self, x, y):
        if isinstance(y, AnchoredLabel):
            if self.anchor is None:
                self.anchor = y.seq
            if y.prefix is not None and len(y.prefix) > len(self.known):
                self.known = y.prefix
        self.round += 1


class PrefixCoinGuesser(AnchoredPrefixGuesser):
    """Strongest anchored baseline: reuses every revealed code bit and flips a
    coin only for the round's fresh bit."""

    def _guess_bits(self, length, rng):
        known = self.known[: length]
        fresh = tuple(int(b) for b in rng.integers(0, 2, size=length - len(known)))
        return known + fresh

    def _post_anchor_prediction(self, x, rng):
        try:
            pos = self.anchor.items.index(x)
        except ValueError:
            return AnchoredLabel(self.anchor, None)
        return AnchoredLabel(self.anchor, self._guess_bits(pos + 1, rng))


class MemorizeLearner:
    """Predicts 0 until the first label is revealed, then that label forever."""

    label_domain = NatLabel

    def __init__(self):
        self.seen = None

    def predict(self, x, rng):
        return self.seen if self.seen is not None else NatLabel(0)

    def observe(self, x, y):
        if self.seen is None:
            self.seen = y
