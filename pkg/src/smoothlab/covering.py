"""Metric-entropy toolkit: exact empirical distances, cover/packing numbers with
brute-force oracles, the truncated empirical-complexity estimator, combinatorial
dimensions, exact Rademacher averages, and the regret-bound evaluators.

All finite metric views store distances as integer disagreement counts over a
common denominator, so every cover/packing comparison is exact integer
arithmetic. Brute-force oracles are gated: subset-search covers and packings at
20 items, dimension domains at 24 points, Rademacher samples at 12 points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .core import BitLabel, GridPoint, UniformGrid, UniformUnit

EXACT_COVER_LIMIT = 20
DIMENSION_DOMAIN_LIMIT = 24
RADEMACHER_LIMIT = 12


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# finite metric views


class FiniteMetricView:
    """Finite item set with exact pairwise distances counts[i, j] / denominator."""

    __slots__ = ("items", "counts", "denominator")

    def __init__(self, items, counts, denominator: int, validate: bool = True):
        self.items = list(items)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.denominator = int(denominator)
        if validate:
            self._validate()

    def _validate(self):
        n = len(self.items)
        c = self.counts
        if c.shape != (n, n):
            raise ValueError("distance matrix shape must match the item count")
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        if np.any(np.diag(c) != 0):
            raise ValueError("self-distances must be zero")
        if np.any(c != c.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(c < 0) or np.any(c > self.denominator):
            raise ValueError("distances must lie in [0, 1]")
        for k in range(n):
            if np.any(c > c[:, [k]] + c[[k], :]):
                raise ValueError("triangle inequality violated")

    def __len__(self):
        return len(self.items)

    def distance(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.counts[i, j]), self.denominator)

    def le(self, i: int, j: int, eps: Fraction) -> bool:
        return int(self.counts[i, j]) * eps.denominator <= eps.numerator * self.denominator

    def gt(self, i: int, j: int, eps: Fraction) -> bool:
        return not self.le(i, j, eps)

    def max_distance(self) -> Fraction:
        return Fraction(int(self.counts.max(initial=0)), self.denominator)

    def float_matrix(self) -> np.ndarray:
        return self.counts / self.denominator

    @classmethod
    def from_evaluations(cls, hypotheses, sample) -> "FiniteMetricView":
        """Empirical Hamming-fraction view of hypotheses on a sample (with multiplicity)."""
        hypotheses = list(hypotheses)
        sample = list(sample)
        if not sample:
            raise ValueError("sample must be nonempty")
        codes = _label_codes(hypotheses, sample)
        counts = (codes[:, None, :] != codes[None, :, :]).sum(axis=2)
        return cls(hypotheses, counts, len(sample), validate=False)

    @classmethod
    def from_vectors(cls, vectors) -> "FiniteMetricView":
        """Hamming-fraction view of explicit value vectors (rows)."""
        arr = np.asarray(list(vectors))
        counts = (arr[:, None, :] != arr[None, :, :]).sum(axis=2)
        return cls([tuple(r) for r in arr], counts, arr.shape[1], validate=False)


def _label_codes(hypotheses, sample) -> np.ndarray:
    codebook = {}
    codes = np.empty((len(hypotheses), len(sample)), dtype=np.int64)
    for i, h in enumerate(hypotheses):
        for j, x in enumerate(sample):
            y = h(x)
            codes[i, j] = codebook.setdefault(y, len(codebook))
    return codes


# ---------------------------------------------------------------------------
# distances


def empirical_distance(h1, h2, sample) -> Fraction:
    """Exact Hamming fraction of disagreement on a nonempty sample."""
    sample = list(sample)
    if not sample:
        raise ValueError("empirical distance needs a nonempty sample")
    disagreements = sum(1 for x in sample if h1(x) != h2(x))
    return Fraction(disagreements, len(sample))


class DistanceEstimate(NamedTuple):
    value: float
    stderr: float
    exact: bool


def d_mu_estimate(h1, h2, mu, n_samples: int = 100_000,
                  rng: Optional[np.random.Generator] = None) -> DistanceEstimate:
    """Disagreement probability under the base measure.

    Exact summation over all cells on the grid domain; Monte Carlo with a
    reported standard error on the unit domain.
    """
    if isinstance(mu, UniformGrid):
        cells = mu.m * mu.m
        cnt = sum(
            1 for i in range(1, cells + 1) if h1(GridPoint(i, mu.m)) != h2(GridPoint(i, mu.m))
        )
        return DistanceEstimate(cnt / cells, 0.0, True)
    if isinstance(mu, UniformUnit):
        if rng is None:
            raise ValueError("Monte-Carlo estimation on the unit domain needs an rng")
        cnt = 0
        for _ in range(n_samples):
            x = mu.sample(rng)
            if h1(x) != h2(x):
                cnt += 1
        p = cnt / n_samples
        return DistanceEstimate(p, math.sqrt(max(p * (1 - p), 0.0) / n_samples), False)
    raise TypeError(f"not a base measure: {mu!r}")


# ---------------------------------------------------------------------------
# covers and packings


def greedy_cover(view: FiniteMetricView, eps) -> list:
    """Greedy cover indices: valid by construction, at least the optimal size.

    Ties in the most-newly-covered rule break toward the lowest index.
    """
    eps = _frac(eps)
    n = len(view)
    masks = _ball_masks(view, eps)
    uncovered = (1 << n) - 1
    chosen = []
    while uncovered:
        best = max(range(n), key=lambda i: (masks[i] & uncovered).bit_count())
        if not masks[best] & uncovered:
            raise AssertionError("greedy cover stalled")
        chosen.append(best)
        uncovered &= ~masks[best]
    return chosen


def maximal_packing(view: FiniteMetricView, eps) -> list:
    """Greedy maximal packing indices: pairwise distances > eps, nothing addable."""
    eps = _frac(eps)
    chosen = []
    for i in range(len(view)):
        if all(view.gt(i, j, eps) for j in chosen):
            chosen.append(i)
    return chosen


def _ball_masks(view: FiniteMetricView, eps: Fraction) -> list:
    n = len(view)
    return [sum(1 << j for j in range(n) if view.le(i, j, eps)) for i in range(n)]


def exact_cover_number(view: FiniteMetricView, eps) -> int:
    """Smallest eps-cover size by exhaustive subset search (at most 20 items)."""
    n = len(view)
    if n > EXACT_COVER_LIMIT:
        raise ValueError(f"exact cover search is gated at {EXACT_COVER_LIMIT} items, got {n}")
    if n == 0:
        return 0
    eps = _frac(eps)
    masks = _ball_masks(view, eps)
    full = (1 << n) - 1
    upper = len(greedy_cover(view, eps))
    for k in range(1, upper):
        for combo in itertools.combinations(range(n), k):
            covered = 0
            for i in combo:
                covered |= masks[i]
            if covered == full:
                return k
    return upper


def exact_packing_number(view: FiniteMetricView, eps) -> int:
    """Largest eps-packing size by branch-and-bound subset search (at most 20 items)."""
    n = len(view)
    if n > EXACT_COVER_LIMIT:
        raise ValueError(f"exact packing search is gated at {EXACT_COVER_LIMIT} items, got {n}")
    eps = _frac(eps)
    far = [[view.gt(i, j, eps) for j in range(n)] for i in range(n)]
    best = 0

    def extend(candidates, size):
        nonlocal best
        if size > best:
            best = size
        if size + len(candidates) <= best:
            return
        for idx, c in enumerate(candidates):
            rest = [j for j in candidates[idx + 1:] if far[c][j]]
            extend(rest, size + 1)
            if size + len(candidates) - idx - 1 <= best:
                return

    extend(list(range(n)), 0)
    return best


def line_metric_cover_number(values: Sequence, eps) -> int:
    """Exact cover number for points on a line (d(a, b) = |a - b|), by optimal sweep."""
    vals = sorted(_frac(v) for v in values)
    eps = _frac(eps)
    count = 0
    i = 0
    n = len(vals)
    while i < n:
        limit = vals[i] + eps
        j = i
        while j + 1 < n and vals[j + 1] <= limit:
            j += 1
        reach = vals[j] + eps
        count += 1
        i = j + 1
        while i < n and vals[i] <= reach:
            i += 1
    return count


# ---------------------------------------------------------------------------
# empirical complexity (truncated double supremum)


@dataclass(frozen=True)
class ComplexityEstimate:
    """Truncated estimate of the expected-empirical-cover complexity.

    ``value`` is the max over the configured (sample size, process) grid of the
    Monte-Carlo mean empirical cover number; the true quantity takes a supremum
    over all sample sizes and all smooth processes, so this is a lower estimate
    except that greedy covers (used above the exact gate) overestimate sizes.
    """

    value: float
    eps: Fraction
    sigma: Fraction
    rows: tuple
    note: str = "truncated to the configured sample-size grid and named process family"


def estimate_complexity_C(view_builder: Callable, processes: dict, eps, sigma,
                          n_grid: Sequence[int], trials: int,
                          rng: np.random.Generator,
                          exact_limit: int = EXACT_COVER_LIMIT) -> ComplexityEstimate:
    """Monte-Carlo mean empirical eps-cover numbers over a grid of sample sizes
    and a named family of certified processes; returns the max over the grid.

    ``view_builder(sample) -> FiniteMetricView`` must present the class as a
    finite view on each sample. ``processes`` maps names to factories taking a
    sample size and returning a SmoothProcess of that length.
    """
    eps = _frac(eps)
    rows = []
    for n in n_grid:
        for name, factory in processes.items():
            process = factory(int(n))
            if len(process) != n:
                raise ValueError(f"process family {name!r} returned length {len(process)}, not {n}")
            sizes = []
            method = "exact"
            for _ in range(trials):
                sample = [d.sample(rng) for d in process.distributions]
                view = view_builder(sample)
                if len(view) <= exact_limit:
                    sizes.append(exact_cover_number(view, eps))
                else:
                    sizes.append(len(greedy_cover(view, eps)))
                    method = "greedy"
            mean = float(np.mean(sizes))
            se = float(np.std(sizes, ddof=1) / math.sqrt(len(sizes))) if len(sizes) > 1 else 0.0
            rows.append({"n": int(n), "process": name, "mean": mean, "se": se, "method": method})
    value = max(r["mean"] for r in rows)
    return ComplexityEstimate(value=value, eps=eps, sigma=_frac(sigma), rows=tuple(rows))


# ---------------------------------------------------------------------------
# combinatorial dimensions and Rademacher averages


def _as_bit(value) -> int:
    if isinstance(value, BitLabel):
        return value.value
    if value in (0, 1):
        return int(value)
    raise TypeError(f"expected a binary value, got {value!r}")


def _largest_shattered(rows, num_cols: int) -> int:
    rows = list(rows)
    if not rows:
        return 0
    arr = np.asarray(sorted(rows), dtype=np.int64)
    cap = min(num_cols, int(math.log2(len(rows))))
    best = 0
    for d in range(1, cap + 1):
        found = False
        for combo in itertools.combinations(range(num_cols), d):
            if len(np.unique(arr[:, combo], axis=0)) == 1 << d:
                found = True
                break
        if not found:
            break
        best = d
    return best


def vc_dimension(hypotheses, points, max_points: int = DIMENSION_DOMAIN_LIMIT) -> int:
    """Exact largest shattered subset size of a binary class on a small domain."""
    points = list(points)
    if len(points) > max_points:
        raise ValueError(f"dimension search is gated at {max_points} domain points")
    rows = {tuple(_as_bit(h(x)) for x in points) for h in hypotheses}
    return _largest_shattered(rows, len(points))


def graph_dimension(hypotheses, points, labels,
                    max_points: int = DIMENSION_DOMAIN_LIMIT) -> int:
    """Exact binary dimension of the 0/1 loss class over (point, label) pairs."""
    pairs = [(x, y) for x in points for y in labels]
    if len(pairs) > max_points:
        raise ValueError(f"loss-class dimension search is gated at {max_points} pairs")
    rows = {tuple(int(h(x) != y) for x, y in pairs) for h in hypotheses}
    return _largest_shattered(rows, len(pairs))


def rademacher_exact(vectors) -> Fraction:
    """Exact empirical Rademacher average of 0/1 value vectors on n <= 12 points:
    the mean over all sign assignments of the best signed sum, divided by n."""
    arr = np.asarray(list(vectors), dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("need a nonempty list of equal-length vectors")
    k, n = arr.shape
    if n > RADEMACHER_LIMIT:
        raise ValueError(f"exact Rademacher average is gated at {RADEMACHER_LIMIT} points, got {n}")
    if np.any((arr != 0) & (arr != 1)):
        raise ValueError("vectors must be 0/1-valued")
    signs = ((np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1) * 2 - 1
    totals = signs @ arr.T
    return Fraction(int(totals.max(axis=1).sum()), n * (1 << n))


def rademacher_of_class(hypotheses, sample) -> Fraction:
    vectors = [[_as_bit(h(x)) for x in sample] for h in hypotheses]
    return rademacher_exact(vectors)


# ---------------------------------------------------------------------------
# bound evaluators


@dataclass(frozen=True)
class BoundEvaluation:
    value: float
    best_eps: Fraction
    rows: tuple


def eval_regret_bound(horizon: int, sigma, eps_grid, c_values) -> BoundEvaluation:
    """Minimum over the eps grid of 6 (eps T / sigma + sqrt(T ln C(eps^2))).

    ``c_values[i]`` must be the complexity estimate at scale ``eps_grid[i]**2``.
    """
    eps_grid = [_frac(e) for e in eps_grid]
    c_values = list(c_values)
    if len(eps_grid) != len(c_values):
        raise ValueError("eps grid and complexity values must align")
    if not eps_grid:
        raise ValueError("eps grid must be nonempty")
    sigma_f = float(_frac(sigma))
    rows = []
    for eps, c in zip(eps_grid, c_values):
        if c < 1:
            raise ValueError(f"complexity values must be >= 1, got {c}")
        val = 6.0 * (float(eps) * horizon / sigma_f + math.sqrt(horizon * math.log(c)))
        rows.append({"eps": float(eps), "C": float(c), "bound": val})
    best = min(range(len(rows)), key=lambda i: rows[i]["bound"])
    return BoundEvaluation(value=rows[best]["bound"], best_eps=eps_grid[best], rows=tuple(rows))


def graph_dim_regret_bound(horizon: int, sigma, graph_dim: int, num_labels: int) -> float:
    """Closed-form regret bound 12 sqrt(T G ln(41 T |Y| / sigma^2))."""
    sigma_f = float(_frac(sigma))
    return 12.0 * math.sqrt(
        horizon * graph_dim * math.log(41.0 * horizon * num_labels / sigma_f**2)
    )


def haussler_cover_bound(eps, vc_dim: int) -> float:
    """The packing-based cover bound (41 / eps)^VC for binary classes."""
    return (41.0 / float(_frac(eps))) ** vc_dim


# ---------------------------------------------------------------------------
# lemma checkers (exact small-instance verifications used by the entropy suite)


def check_duality(view: FiniteMetricView, eps) -> list:
    """Violations of the sandwich M(2 eps) <= N(eps) <= M(eps) on one view."""
    eps = _frac(eps)
    m_wide = exact_packing_number(view, 2 * eps)
    n_cov = exact_cover_number(view, eps)
    m_tight = exact_packing_number(view, eps)
    out = []
    if not m_wide <= n_cov:
        out.append(f"M(2e)={m_wide} > N(e)={n_cov} at eps={eps}")
    if not n_cov <= m_tight:
        out.append(f"N(e)={n_cov} > M(e)={m_tight} at eps={eps}")
    return out


def check_symmetric_difference(values, eps) -> list:
    """Violations of N(eps, disagreement class) <= N(eps/2, class)^2 on one sample.

    ``values`` is the class's value matrix on the sample (one row per function).
    """
    eps = _frac(eps)
    arr = np.asarray(values)
    base = FiniteMetricView.from_vectors(arr)
    n_half = exact_cover_number(base, eps / 2)
    rows = sorted({
        tuple(int(v) for v in (arr[i] != arr[j]).astype(int))
        for i in range(len(arr))
        for j in range(len(arr))
    })
    delta_view = FiniteMetricView.from_vectors(rows)
    n_delta = exact_cover_number(delta_view, eps)
    if n_delta > n_half**2:
        return [f"N(e, delta)={n_delta} > N(e/2)^2={n_half**2} at eps={eps}"]
    return []


def check_discretization(vectors, eps_grid, tol: float = 1e-9) -> list:
    """Violations of the cover-based bound on the exact Rademacher average.

    The root-mean-square disagreement metric on 0/1 vectors is the square root
    of the Hamming fraction, so covers at RMS scale eps are covers at Hamming
    scale eps^2.
    """
    vectors = [tuple(v) for v in vectors]
    n = len(vectors[0])
    lhs = float(rademacher_exact(vectors))
    view = FiniteMetricView.from_vectors(sorted(set(vectors)))
    sup_rms = max(math.sqrt(sum(v) / n) for v in vectors)
    best = math.inf
    for eps in eps_grid:
        eps = _frac(eps)
        cover = exact_cover_number(view, eps * eps)
        rhs = float(eps) + sup_rms * math.sqrt(2.0 * math.log(cover) / n)
        best = min(best, rhs)
    if lhs > best + tol:
        return [f"Rademacher {lhs} exceeds discretization bound {best}"]
    return []


def check_haussler_thresholds(cutoff_positions, num_cells: int, eps_values) -> list:
    """Violations of exact N(eps, d_mu) <= (41/eps)^VC for a threshold subclass
    on a uniform grid of ``num_cells`` cells; positions index the cutoffs.

    Threshold classes have line-metric population distances |a - b| / cells, so
    the exact cover number comes from the optimal sweep; small instances are
    cross-checked against the subset brute force.
    """
    from .classes import ThresholdHypothesis  # local import to avoid a cycle

    positions = sorted(set(int(p) for p in cutoff_positions))
    if len(positions) > DIMENSION_DOMAIN_LIMIT:
        raise ValueError(f"threshold check is gated at {DIMENSION_DOMAIN_LIMIT} cutoffs")
    m = math.isqrt(num_cells)
    if m * m != num_cells:
        raise ValueError("num_cells must be a perfect square")
    hyps = [ThresholdHypothesis(GridPoint(p, m)) for p in positions]
    vc_domain = [GridPoint(p, m) for p in positions]
    vc = vc_dimension(hyps, vc_domain)
    values = [Fraction(p, num_cells) for p in positions]
    out = []
    for eps in eps_values:
        eps = _frac(eps)
        n_cov = line_metric_cover_number(values, eps)
        if len(hyps) <= 10:
            domain = [GridPoint(i, m) for i in range(1, num_cells + 1)]
            view = FiniteMetricView.from_evaluations(hyps, domain)
            brute = exact_cover_number(view, eps)
            if brute != n_cov:
                out.append(f"line oracle {n_cov} != brute force {brute} at eps={eps}")
        bound = haussler_cover_bound(eps, vc)
        if n_cov > bound:
            out.append(f"N({eps})={n_cov} > (41/eps)^{vc}={bound:.3f}")
    return out


def check_loss_class_domination(values, num_labels: int, eps) -> list:
    """Violations of N(eps, class, empirical) <= N(2 eps/|Y|, loss class, paired
    empirical x uniform-label measure) on one sample (the per-sample form).

    ``values`` is the class's value matrix on the sample, entries in
    range(num_labels).
    """
    eps = _frac(eps)
    arr = np.asarray(values)
    lhs_view = FiniteMetricView.from_vectors(arr)
    lhs = exact_cover_number(lhs_view, eps)
    rows = [
        tuple(int(arr[i, j] != y) for j in range(arr.shape[1]) for y in range(num_labels))
        for i in range(len(arr))
    ]
    rhs_view = FiniteMetricView.from_vectors(rows)
    rhs = exact_cover_number(rhs_view, Fraction(2, num_labels) * eps)
    if lhs > rhs:
        return [f"N(e)={lhs} > N(2e/K, loss)={rhs} at eps={eps}, K={num_labels}"]
    return []


def check_empirical_dominates_population(hypotheses, mu: UniformGrid, eps, m_large: int,
                                         trials: int, rng: np.random.Generator,
                                         slack_se: float = 3.0) -> list:
    """Checks exact N(eps, d_mu) <= mean N(eps/2, empirical at m_large) + slack.

    Monte-Carlo realization of the bounded-metric-entropy consequence of
    uniformly bounded expected empirical covers.
    """
    eps = _frac(eps)
    cells = mu.m * mu.m
    domain = [GridPoint(i, mu.m) for i in range(1, cells + 1)]
    pop_view = FiniteMetricView.from_evaluations(hypotheses, domain)
    lhs = exact_cover_number(pop_view, eps)
    sizes = []
    for _ in range(trials):
        sample = [mu.sample(rng) for _ in range(m_large)]
        view = FiniteMetricView.from_evaluations(hypotheses, sample)
        sizes.append(exact_cover_number(view, eps / 2))
    mean = float(np.mean(sizes))
    se = float(np.std(sizes, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    if lhs > mean + slack_se * se + 1e-12:
        return [f"N({eps}, d_mu)={lhs} > empirical mean {mean:.3f} + {slack_se} se"]
    return []
