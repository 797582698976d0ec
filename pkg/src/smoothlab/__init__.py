"""smoothlab: a simulation laboratory for smoothed online classification."""

from .adversaries import (
    StreamBundle,
    coinflip_stream,
    grid_distinct_probability,
    make_smooth_process,
    realizable_smooth_stream,
    separation_stream,
)
from .classes import (
    ConstantHypothesis,
    IndicatorHypothesis,
    SeparationHypothesis,
    TableHypothesis,
    ThresholdHypothesis,
    random_separation_hypothesis,
    random_table_class,
)
from .compression import (
    RealizableSample,
    compress,
    compression_learner,
    pac_error_bound,
    reconstruct,
    verify_roundtrips,
)
from .core import (
    AnchoredLabel,
    BitLabel,
    ConfigurationError,
    Dyadic,
    DomainMismatchError,
    GridPoint,
    InstanceSequence,
    LabeledStream,
    NatLabel,
    ProtocolError,
    RealizabilityError,
    RegretReport,
    RESOLUTION,
    SmoothDistribution,
    SmoothProcess,
    UniformGrid,
    UniformUnit,
    WitnessError,
    comparator_loss,
    run_game,
    smoothness_certificate,
)
from .covering import (
    ComplexityEstimate,
    FiniteMetricView,
    d_mu_estimate,
    empirical_distance,
    estimate_complexity_C,
    eval_regret_bound,
    exact_cover_number,
    exact_packing_number,
    graph_dim_regret_bound,
    graph_dimension,
    greedy_cover,
    haussler_cover_bound,
    line_metric_cover_number,
    maximal_packing,
    rademacher_exact,
    vc_dimension,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    load_config,
    replay_trial,
    run_experiment,
)
from .learners import (
    AnchoredPrefixGuesser,
    ExponentialWeightsLearner,
    HedgeCore,
    MemorizeLearner,
    PrefixCoinGuesser,
    RandomGuessLearner,
    cover_learner,
    expected_hedge_regret,
    hedge_learning_rate,
    hedge_regret_bound,
    sampled_hedge_regret,
)

__version__ = "0.1.0"
