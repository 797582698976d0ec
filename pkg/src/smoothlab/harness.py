"""Seeded Monte-Carlo experiment runner.

Every experiment is described by one JSON document. Trial t of an experiment
with base seed s derives its generators from (s + t), so re-running a config
reproduces every per-trial record bit-exactly and any single trial can be
replayed from its serialized bundle.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import adversaries, compression, covering, learners
from .classes import (
    ConstantHypothesis,
    IndicatorHypothesis,
    random_separation_hypothesis,
    random_table_class,
)
from .core import (
    BitLabel,
    ConfigurationError,
    GridPoint,
    LabeledStream,
    NatLabel,
    UniformGrid,
    UniformUnit,
    run_game,
)

DEFAULTS = {
    "trials": 200,
    "delta": 0.05,
    "eps_grid": [2.0**-k for k in range(1, 9)],
    "sigma": 1.0,
    "holdout": 100_000,
    "instances_per_lemma": 100,
    "complexity_trials": 10,
    "complexity_n_grid": [64, 256],
}

EXPERIMENT_KINDS = ("regret", "pac_curve", "sufficiency", "entropy_suite")


@dataclass
class ExperimentConfig:
    """Validated experiment description (one JSON document)."""

    kind: str
    seed: int = 0
    trials: int = DEFAULTS["trials"]
    T: Optional[int] = None
    sigma: float = DEFAULTS["sigma"]
    delta: float = DEFAULTS["delta"]
    eps_grid: list = field(default_factory=lambda: list(DEFAULTS["eps_grid"]))
    n_grid: list = field(default_factory=list)
    adversary: dict = field(default_factory=dict)
    learner: dict = field(default_factory=dict)
    klass: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)
    complexity: dict = field(default_factory=dict)
    stream_process: str = "sliding_window"
    holdout: int = DEFAULTS["holdout"]
    instances_per_lemma: int = DEFAULTS["instances_per_lemma"]
    thresholds: list = field(default_factory=list)
    save_bundles: bool = False
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigurationError("config: expected a JSON object")
        kind = obj.get("kind")
        if kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"config field 'kind': expected one of {EXPERIMENT_KINDS}, got {kind!r}")
        cfg = cls(kind=kind, raw=dict(obj))
        for key, attr, typ in (
            ("seed", "seed", int),
            ("trials", "trials", int),
            ("T", "T", int),
            ("sigma", "sigma", float),
            ("delta", "delta", float),
            ("holdout", "holdout", int),
            ("instances_per_lemma", "instances_per_lemma", int),
            ("stream_process", "stream_process", str),
            ("save_bundles", "save_bundles", bool),
        ):
            if key in obj:
                try:
                    setattr(cfg, attr, typ(obj[key]))
                except (TypeError, ValueError):
                    raise ConfigurationError(f"config field {key!r}: cannot read {obj[key]!r}")
        for key, attr in (
            ("eps_grid", "eps_grid"),
            ("n_grid", "n_grid"),
            ("thresholds", "thresholds"),
        ):
            if key in obj:
                if not isinstance(obj[key], list):
                    raise ConfigurationError(f"config field {key!r}: expected a list")
                setattr(cfg, attr, list(obj[key]))
        for key, attr in (
            ("adversary", "adversary"),
            ("learner", "learner"),
            ("class", "klass"),
            ("source", "source"),
            ("complexity", "complexity"),
        ):
            if key in obj:
                if not isinstance(obj[key], dict):
                    raise ConfigurationError(f"config field {key!r}: expected an object")
                setattr(cfg, attr, dict(obj[key]))
        cfg.validate()
        return cfg

    def validate(self):
        if self.trials < 1:
            raise ConfigurationError("config field 'trials': must be >= 1")
        if self.kind == "regret":
            if not self.T:
                raise ConfigurationError("config field 'T': required for regret experiments")
            if not self.adversary.get("name"):
                raise ConfigurationError("config field 'adversary.name': required")
            if not self.learner.get("name"):
                raise ConfigurationError("config field 'learner.name': required")
        elif self.kind == "pac_curve":
            if not self.n_grid:
                raise ConfigurationError("config field 'n_grid': required for pac_curve")
            if not 0 < self.delta < 1:
                raise ConfigurationError("config field 'delta': must lie in (0, 1)")
        elif self.kind == "sufficiency":
            if not self.T:
                raise ConfigurationError("config field 'T': required for sufficiency")
            if not self.klass:
                raise ConfigurationError("config field 'class': required for sufficiency")

    def to_jsonable(self) -> dict:
        out = dict(self.raw)
        out.setdefault("kind", self.kind)
        out.setdefault("seed", self.seed)
        out.setdefault("trials", self.trials)
        return out


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"config file {path}: invalid JSON ({err})")
    return ExperimentConfig.from_dict(obj)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Flag:
    tag: str
    passed: bool
    observed: float
    threshold: float
    detail: str = ""

    def to_jsonable(self) -> dict:
        return {
            "tag": self.tag,
            "passed": bool(self.passed),
            "observed": self.observed,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class ExperimentReport:
    config: dict
    records: list
    summary: dict
    flags: list
    plot_series: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.flags)

    def to_jsonable(self) -> dict:
        return {
            "config": self.config,
            "summary": self.summary,
            "flags": [f.to_jsonable() for f in self.flags],
            "records": self.records,
        }

    def write(self, outdir: str) -> None:
        os.makedirs(outdir, exist_ok=True)
        with open(os.path.join(outdir, "report.json"), "w") as fh:
            json.dump(self.to_jsonable(), fh, indent=1, sort_keys=True)
        if self.records:
            cols = sorted({k for r in self.records for k in r})
            with open(os.path.join(outdir, "summary.csv"), "w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=cols)
                writer.writeheader()
                writer.writerows(self.records)
        if self.plot_series:
            plotdir = os.path.join(outdir, "plotdata")
            os.makedirs(plotdir, exist_ok=True)
            for name, rows in self.plot_series.items():
                with open(os.path.join(plotdir, f"{name}.csv"), "w", newline="") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["x", "y", "band"])
                    writer.writerows(rows)


def _mean_se(values) -> tuple:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return mean, se


# ---------------------------------------------------------------------------
# builders


def _trial_rngs(base_seed: int, trial: int) -> tuple:
    seed = base_seed + trial
    return (
        seed,
        np.random.default_rng([seed, 0]),  # adversary
        np.random.default_rng([seed, 1]),  # learner construction
        np.random.default_rng([seed, 2]),  # game / learner randomness
    )


def build_shared_class(cfg: ExperimentConfig):
    """The finite hypothesis class shared by all trials, derived from the base seed."""
    spec = cfg.klass or cfg.adversary.get("class", {})
    if not spec:
        return None
    rng = np.random.default_rng([cfg.seed, 777])
    m = int(spec.get("m", 4))
    size = int(spec.get("class_size", 64))
    num_labels = int(spec.get("num_labels", 4))
    return random_table_class(m, size, num_labels, rng)


def make_adversary(cfg: ExperimentConfig, shared_class) -> Callable:
    name = cfg.adversary.get("name")
    T = cfg.T
    sigma = cfg.sigma
    if name == "separation_unit":
        return lambda rng: adversaries.separation_stream(T, UniformUnit(), rng)
    if name == "separation_grid":
        m = int(cfg.adversary.get("m", 8))
        return lambda rng: adversaries.separation_stream(T, UniformGrid(m), rng)
    if name == "coinflip":
        return lambda rng: adversaries.coinflip_stream(T, rng)
    if name == "realizable_constant":
        k = int(cfg.adversary.get("num_values", 32))
        mu = UniformUnit()

        def gen(rng):
            h = ConstantHypothesis(int(rng.integers(k)))
            process = adversaries.make_smooth_process("base", mu, sigma, T)
            return adversaries.realizable_smooth_stream(h, process, rng)

        return gen
    if name == "realizable_table":
        if shared_class is None:
            raise ConfigurationError("config field 'class': required by realizable_table")
        m = shared_class[0].m
        mu = UniformGrid(m)
        process_kind = cfg.adversary.get("process", cfg.stream_process)

        def gen(rng):
            h = shared_class[int(rng.integers(len(shared_class)))]
            process = adversaries.make_smooth_process(process_kind, mu, sigma, T)
            return adversaries.realizable_smooth_stream(h, process, rng)

        return gen
    if name == "realizable_rational_indicator":
        size = int(cfg.adversary.get("support_size", 3))
        mu = UniformUnit()

        def gen(rng):
            h = _random_rational_indicator(size, rng)
            process = adversaries.make_smooth_process("base", mu, sigma, T)
            return adversaries.realizable_smooth_stream(h, process, rng)

        return gen
    raise ConfigurationError(f"config field 'adversary.name': unknown adversary {name!r}")


def _random_rational_indicator(size: int, rng) -> IndicatorHypothesis:
    support = set()
    while len(support) < size:
        den = 2 * int(rng.integers(1, 50)) + 1
        num = int(rng.integers(1, den))
        frac = Fraction(num, den)
        if frac.denominator > 1:
            support.add(frac)
    return IndicatorHypothesis(frozenset(support))


def make_learner_factory(cfg: ExperimentConfig, shared_class) -> Callable:
    name = cfg.learner.get("name")
    T = cfg.T
    if name == "random_guess":
        pool_kind = cfg.learner.get("pool", "bits")
        if pool_kind == "bits":
            pool = (BitLabel(0), BitLabel(1))
        elif pool_kind == "nats":
            pool = tuple(NatLabel(v) for v in range(int(cfg.learner.get("size", 4))))
        else:
            raise ConfigurationError(f"config field 'learner.pool': unknown pool {pool_kind!r}")
        return lambda rng: learners.RandomGuessLearner(pool)
    if name == "prefix_guess":
        return lambda rng: learners.AnchoredPrefixGuesser()
    if name == "prefix_coin":
        return lambda rng: learners.PrefixCoinGuesser()
    if name == "memorize":
        return lambda rng: learners.MemorizeLearner()
    if name == "rewa_constants":
        k = int(cfg.learner.get("num_values", 32))
        experts = [ConstantHypothesis(v) for v in range(k)]
        return lambda rng: learners.ExponentialWeightsLearner(experts, T)
    if name == "rewa_class":
        if shared_class is None:
            raise ConfigurationError("config field 'class': required by rewa_class")
        return lambda rng: learners.ExponentialWeightsLearner(shared_class, T)
    if name == "rewa_random_separation":
        count = int(cfg.learner.get("count", 16))
        anchor_len = int(cfg.learner.get("anchor_len", T))
        domain = cfg.learner.get("domain", "unit")
        mu = UniformUnit() if domain == "unit" else UniformGrid(int(cfg.learner.get("m", 8)))

        def build(rng):
            experts = [random_separation_hypothesis(mu, anchor_len, rng) for _ in range(count)]
            return learners.ExponentialWeightsLearner(experts, T)

        return build
    raise ConfigurationError(f"config field 'learner.name': unknown learner {name!r}")


# ---------------------------------------------------------------------------
# regret experiments


def run_regret_experiment(cfg: ExperimentConfig, outdir: Optional[str] = None) -> ExperimentReport:
    shared_class = build_shared_class(cfg)
    gen = make_adversary(cfg, shared_class)
    factory = make_learner_factory(cfg, shared_class)
    records = []
    bundle_dir = None
    if cfg.save_bundles and outdir:
        bundle_dir = os.path.join(outdir, "bundles")
        os.makedirs(bundle_dir, exist_ok=True)
    n_experts = None
    for trial in range(cfg.trials):
        seed, adv_rng, learner_rng, game_rng = _trial_rngs(cfg.seed, trial)
        bundle = gen(adv_rng)
        learner = factory(learner_rng)
        if hasattr(learner, "experts"):
            n_experts = len(learner.experts)
        report = run_game(bundle.stream, learner, game_rng, seed=seed)
        report = report.with_comparator(bundle.exact_comparator_loss())
        record = dict(report.to_record())
        record["trial"] = trial
        record["distinct"] = bundle.distinct
        if bundle_dir is not None:
            rel = os.path.join("bundles", f"trial_{trial:05d}.json")
            with open(os.path.join(outdir, rel), "w") as fh:
                json.dump(bundle.to_jsonable(), fh)
            record["bundle_file"] = rel
        records.append(record)
    regrets = [r["regret"] for r in records]
    mean, se = _mean_se(regrets)
    summary = {
        "mean_regret": mean,
        "se_regret": se,
        "mean_regret_fraction": mean / cfg.T,
        "trials": cfg.trials,
        "T": cfg.T,
        "n_experts": n_experts,
        "distinct_frequency": float(np.mean([r["distinct"] for r in records])),
    }
    flags = _regret_flags(cfg, records, summary)
    series = {"regret_vs_T": [(cfg.T, mean, 3 * se)]}
    report = ExperimentReport(cfg.to_jsonable(), records, summary, flags, series)
    if outdir:
        report.write(outdir)
    return report


def _regret_flags(cfg: ExperimentConfig, records, summary) -> list:
    flags = []
    mean = summary["mean_regret"]
    se = summary["se_regret"]
    for spec in cfg.thresholds:
        kind = spec.get("kind")
        tag = spec.get("tag", kind)
        if kind == "mean_regret_at_least":
            value = float(spec["value"])
            flags.append(Flag(tag, mean >= value, mean, value))
        elif kind == "mean_regret_at_least_fraction":
            value = float(spec["fraction"]) * cfg.T
            flags.append(Flag(tag, mean >= value, mean, value))
        elif kind == "mean_regret_at_most":
            value = float(spec["value"]) + float(spec.get("slack_se", 0)) * se
            flags.append(Flag(tag, mean <= value, mean, value))
        elif kind == "mean_regret_at_most_rewa_bound":
            n = summary.get("n_experts")
            if not n:
                raise ConfigurationError(f"threshold {tag!r} needs an expert-based learner")
            value = learners.hedge_regret_bound(n, cfg.T) + float(spec.get("slack_se", 3)) * se
            flags.append(Flag(tag, mean <= value, mean, value))
        elif kind == "regret_fraction_range":
            lo, hi = float(spec["lo"]), float(spec["hi"])
            frac = summary["mean_regret_fraction"]
            flags.append(Flag(tag, lo <= frac <= hi, frac, hi, detail=f"range [{lo}, {hi}]"))
        elif kind == "comparator_zero_every_trial":
            worst = max(r["comparator_loss"] for r in records)
            flags.append(Flag(tag, worst == 0, worst, 0))
        elif kind == "learner_loss_at_most_every_trial":
            value = float(spec["value"])
            worst = max(r["learner_loss"] for r in records)
            flags.append(Flag(tag, worst <= value, worst, value))
        elif kind == "distinct_freq_matches":
            m = int(cfg.adversary.get("m"))
            expected = adversaries.grid_distinct_probability(m)
            observed = summary["distinct_frequency"]
            width = float(spec.get("slack_se", 3)) * math.sqrt(
                expected * (1 - expected) / len(records)
            )
            flags.append(
                Flag(tag, abs(observed - expected) <= width, observed, expected,
                     detail=f"tolerance {width:.4f}")
            )
        else:
            raise ConfigurationError(f"config field 'thresholds': unknown kind {kind!r}")
    return flags


# ---------------------------------------------------------------------------
# compression learning curve


def run_pac_curve(cfg: ExperimentConfig, outdir: Optional[str] = None) -> ExperimentReport:
    anchor_len = int(cfg.source.get("anchor_len", 64))
    on_mass = float(cfg.source.get("on_mass", 0.25))
    mu = UniformUnit()
    records = []
    for n in cfg.n_grid:
        n = int(n)
        bound = compression.pac_error_bound(n, 1, cfg.delta)
        for trial in range(cfg.trials):
            rng = np.random.default_rng([cfg.seed, n, trial])
            h = random_separation_hypothesis(mu, anchor_len, rng)
            points = []
            for _ in range(n):
                if rng.random() < on_mass:
                    points.append(h.seq[int(rng.integers(anchor_len))])
                else:
                    points.append(mu.sample(rng))
            sample = compression.RealizableSample((x, h(x)) for x in points)
            predictor = compression.compression_learner(sample)
            bad = np.array([predictor(z) != h(z) for z in h.seq])
            hits = rng.random(cfg.holdout) < on_mass
            idx = rng.integers(0, anchor_len, size=cfg.holdout)
            error = float((hits & bad[idx]).mean())
            records.append(
                {
                    "n": n,
                    "trial": trial,
                    "holdout_error": error,
                    "bound": bound,
                    "violation": int(error > bound),
                }
            )
    flags = []
    series_rows = []
    by_n = {}
    for r in records:
        by_n.setdefault(r["n"], []).append(r)
    for n in sorted(by_n):
        rows = by_n[n]
        freq = float(np.mean([r["violation"] for r in rows]))
        se = math.sqrt(max(freq * (1 - freq), 0.0) / len(rows))
        limit = cfg.delta + 3 * se
        flags.append(Flag(f"pac-confidence-n{n}", freq <= limit, freq, limit))
        errs = [r["holdout_error"] for r in rows]
        mean_err, se_err = _mean_se(errs)
        series_rows.append((n, float(np.median(errs)), 3 * se_err))
    n_lo, n_hi = min(by_n), max(by_n)
    med_lo = float(np.median([r["holdout_error"] for r in by_n[n_lo]]))
    med_hi = float(np.median([r["holdout_error"] for r in by_n[n_hi]]))
    flags.append(
        Flag("pac-consistency", med_hi < med_lo, med_hi, med_lo,
             detail=f"median error at n={n_hi} vs n={n_lo}")
    )
    summary = {
        "n_grid": sorted(by_n),
        "delta": cfg.delta,
        "median_error_first": med_lo,
        "median_error_last": med_hi,
    }
    report = ExperimentReport(
        cfg.to_jsonable(), records, summary, flags, {"error_vs_n": series_rows}
    )
    if outdir:
        report.write(outdir)
    return report


# ---------------------------------------------------------------------------
# sufficiency experiments


def run_sufficiency_experiment(cfg: ExperimentConfig,
                               outdir: Optional[str] = None) -> ExperimentReport:
    shared_class = build_shared_class(cfg)
    if shared_class is None:
        raise ConfigurationError("config field 'class': required for sufficiency")
    m = shared_class[0].m
    mu = UniformGrid(m)
    comp_cfg = cfg.complexity
    n_grid = [int(v) for v in comp_cfg.get("n_grid", DEFAULTS["complexity_n_grid"])]
    comp_trials = int(comp_cfg.get("trials", DEFAULTS["complexity_trials"]))
    processes = {
        "base": lambda n: adversaries.make_smooth_process("base", mu, cfg.sigma, n),
        "sliding_window": lambda n: adversaries.make_smooth_process(
            "sliding_window", mu, cfg.sigma, n
        ),
    }
    comp_rng = np.random.default_rng([cfg.seed, 555])
    builder = lambda sample: covering.FiniteMetricView.from_evaluations(shared_class, sample)
    c_values = []
    comp_rows = []
    for eps in cfg.eps_grid:
        scale = Fraction(eps) ** 2
        est = covering.estimate_complexity_C(
            builder, processes, scale, cfg.sigma, n_grid, comp_trials, comp_rng
        )
        c_values.append(max(est.value, 1.0))
        comp_rows.append({"eps": float(eps), "scale": float(scale), "C": est.value})
    bound = covering.eval_regret_bound(cfg.T, cfg.sigma, cfg.eps_grid, c_values)

    # the learner's expert set: a greedy cover of the class at the bound's best scale
    domain = [GridPoint(i, m) for i in range(1, m * m + 1)]
    population_view = covering.FiniteMetricView.from_evaluations(shared_class, domain)
    cover_idx = covering.greedy_cover(population_view, bound.best_eps)
    cover = [shared_class[i] for i in cover_idx]

    records = []
    for trial in range(cfg.trials):
        seed, adv_rng, _, game_rng = _trial_rngs(cfg.seed, trial)
        h = shared_class[int(adv_rng.integers(len(shared_class)))]
        process = adversaries.make_smooth_process(cfg.stream_process, mu, cfg.sigma, cfg.T)
        bundle = adversaries.realizable_smooth_stream(h, process, adv_rng)
        learner = learners.ExponentialWeightsLearner(cover, cfg.T)
        report = run_game(bundle.stream, learner, game_rng, seed=seed)
        report = report.with_comparator(bundle.exact_comparator_loss())
        record = dict(report.to_record())
        record["trial"] = trial
        records.append(record)
    mean, se = _mean_se([r["regret"] for r in records])
    summary = {
        "mean_regret": mean,
        "se_regret": se,
        "bound": bound.value,
        "best_eps": float(bound.best_eps),
        "cover_size": len(cover),
        "complexity": comp_rows,
        "sigma": cfg.sigma,
        "T": cfg.T,
        "truncation_note": "complexity estimated on the configured n-grid and process family",
    }
    flags = [Flag("sufficiency-bound", mean <= bound.value, mean, bound.value)]
    for spec in cfg.thresholds:
        if spec.get("kind") == "mean_regret_at_most":
            value = float(spec["value"])
            flags.append(Flag(spec.get("tag", "regret-cap"), mean <= value, mean, value))
    report = ExperimentReport(cfg.to_jsonable(), records, summary, flags,
                              {"regret_vs_T": [(cfg.T, mean, 3 * se)]})
    if outdir:
        report.write(outdir)
    return report


# ---------------------------------------------------------------------------
# entropy suite


def run_entropy_suite(cfg: ExperimentConfig, outdir: Optional[str] = None) -> ExperimentReport:
    rng = np.random.default_rng([cfg.seed, 99])
    per = cfg.instances_per_lemma
    eps_grid = [Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)]
    records = []
    flags = []

    def tally(tag, violations_by_instance):
        total = sum(len(v) for v in violations_by_instance)
        records.append({"lemma": tag, "instances": len(violations_by_instance),
                        "violations": total})
        flags.append(Flag(tag, total == 0, total, 0,
                          detail=f"{len(violations_by_instance)} instances"))

    # covering-packing sandwich on random binary-vector views
    out = []
    for _ in range(per):
        k = int(rng.integers(2, 13))
        n = int(rng.integers(3, 11))
        view = covering.FiniteMetricView.from_vectors(rng.integers(0, 2, size=(k, n)))
        errs = []
        for eps in eps_grid:
            errs += covering.check_duality(view, eps)
        out.append(errs)
    tally("cover-packing-duality", out)

    # disagreement-class covers on random multiclass value matrices
    out = []
    for _ in range(per):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(3, 9))
        values = rng.integers(0, 3, size=(k, n))
        errs = []
        for eps in eps_grid:
            errs += covering.check_symmetric_difference(values, eps)
        out.append(errs)
    tally("symmetric-difference-cover", out)

    # cover-based Rademacher bound on random 0/1 classes
    out = []
    for _ in range(per):
        k = int(rng.integers(1, 13))
        n = int(rng.integers(2, 11))
        vectors = rng.integers(0, 2, size=(k, n))
        out.append(covering.check_discretization(vectors, eps_grid))
    tally("discretization-bound", out)

    # threshold covers against the packing-based bound
    out = []
    for _ in range(per):
        size = int(rng.integers(2, 19))
        positions = rng.choice(np.arange(1, 65), size=size, replace=False)
        out.append(
            covering.check_haussler_thresholds(positions, 64, [0.05, 0.1, 0.2, 0.3, 0.4])
        )
    tally("threshold-cover-haussler", out)

    # loss-class cover domination on random multiclass matrices
    out = []
    for _ in range(per):
        num_labels = int(rng.integers(2, 4))
        k = int(rng.integers(2, 13))
        n = int(rng.integers(1, 11))
        values = rng.integers(0, num_labels, size=(k, n))
        errs = []
        for eps in eps_grid:
            errs += covering.check_loss_class_domination(values, num_labels, eps)
        out.append(errs)
    tally("loss-class-cover-domination", out)

    summary = {"instances_per_lemma": per,
               "total_violations": sum(r["violations"] for r in records)}
    report = ExperimentReport(cfg.to_jsonable(), records, summary, flags)
    if outdir:
        report.write(outdir)
    return report


# ---------------------------------------------------------------------------
# dispatch and replay


def run_experiment(cfg: ExperimentConfig, outdir: Optional[str] = None) -> ExperimentReport:
    if cfg.kind == "regret":
        return run_regret_experiment(cfg, outdir)
    if cfg.kind == "pac_curve":
        return run_pac_curve(cfg, outdir)
    if cfg.kind == "sufficiency":
        return run_sufficiency_experiment(cfg, outdir)
    if cfg.kind == "entropy_suite":
        return run_entropy_suite(cfg, outdir)
    raise ConfigurationError(f"config field 'kind': unknown experiment {cfg.kind!r}")


def replay_trial(report_path: str, trial: int) -> tuple:
    """Re-run one serialized trial; returns (matches, stored_record, new_record)."""
    with open(report_path) as fh:
        stored = json.load(fh)
    cfg = ExperimentConfig.from_dict(stored["config"])
    record = next((r for r in stored["records"] if r.get("trial") == trial), None)
    if record is None:
        raise ConfigurationError(f"trial {trial} not present in {report_path}")
    if "bundle_file" not in record:
        raise ConfigurationError("report was written without save_bundles; nothing to replay")
    bundle_path = os.path.join(os.path.dirname(report_path), record["bundle_file"])
    with open(bundle_path) as fh:
        bundle = adversaries.StreamBundle.from_jsonable(json.load(fh))
    shared_class = build_shared_class(cfg)
    factory = make_learner_factory(cfg, shared_class)
    seed, _, learner_rng, game_rng = _trial_rngs(cfg.seed, trial)
    learner = factory(learner_rng)
    report = run_game(bundle.stream, learner, game_rng, seed=seed)
    report = report.with_comparator(bundle.exact_comparator_loss())
    new_record = dict(report.to_record())
    new_record["trial"] = trial
    new_record["distinct"] = bundle.distinct
    new_record["bundle_file"] = record["bundle_file"]
    matches = new_record == record
    return matches, record, new_record
