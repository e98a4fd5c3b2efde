"""Real-time artificial trust estimation for teleoperated robots.

The pipeline: telemetry records feed two signal estimators (navigational
intent and goal-directed motion error), which together with the operator's
head yaw are mapped through logistic confidence functions, fused by a
conditional weighted average, and adjusted by incident-driven trust
coefficients.
"""

from .confidence import (
    ATTENTION,
    INTENT,
    PERFORMANCE,
    ConfidenceVector,
    SigmoidParams,
    confidences,
    logistic,
)
from .engine import TrustEngine, TrustSample, estimate_trial
from .evaluation import (
    CapabilityRecord,
    RankingReport,
    build_report,
    capability_rank,
    evaluate_trial,
    rank_agreement,
    report,
    trust_rank,
)
from .events import Collision, GoalInspected
from .fusion import FusionConfig, FusionWeights, fuse
from .memory import (
    IncidentPolicy,
    OperatorProfile,
    ProfileStore,
    TrustState,
    apply_incident,
    finalize_run,
    short_term_trust,
)
from .params import ModelParams
from .signals import IntentEstimator, MotionErrorEstimator
from .simulator import ARCHETYPES, Archetype, default_task, generate_cohort, generate_trial
from .telemetry import (
    Paced,
    TaskConfig,
    TelemetryRecord,
    TrialMeta,
    Unpaced,
    load_task,
    load_trial,
    read_trial,
    replay,
    write_trial,
)

__version__ = "0.1.0"

__all__ = [
    "ARCHETYPES",
    "ATTENTION",
    "INTENT",
    "PERFORMANCE",
    "Archetype",
    "CapabilityRecord",
    "Collision",
    "ConfidenceVector",
    "FusionConfig",
    "FusionWeights",
    "GoalInspected",
    "IncidentPolicy",
    "IntentEstimator",
    "ModelParams",
    "MotionErrorEstimator",
    "OperatorProfile",
    "Paced",
    "ProfileStore",
    "RankingReport",
    "SigmoidParams",
    "TaskConfig",
    "TelemetryRecord",
    "TrialMeta",
    "TrustEngine",
    "TrustSample",
    "TrustState",
    "Unpaced",
    "apply_incident",
    "build_report",
    "capability_rank",
    "confidences",
    "default_task",
    "estimate_trial",
    "evaluate_trial",
    "finalize_run",
    "fuse",
    "generate_cohort",
    "generate_trial",
    "load_task",
    "load_trial",
    "logistic",
    "rank_agreement",
    "read_trial",
    "replay",
    "report",
    "short_term_trust",
    "trust_rank",
    "write_trial",
]
