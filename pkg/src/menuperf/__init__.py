"""menuperf: performance prediction for hierarchical menu selection in mid-air AR.

The package covers the full loop: sampling selection tasks from a taxonomy,
measuring consumed endurance from arm-tracking frames, encoding tasks into
523-dimensional feature vectors, training a small windowed LSTM regressor on
(CE, PT) targets, and evaluating or serving the trained model.
"""

from .endurance import (
    ArmFrame,
    ArmParams,
    CeResult,
    arm_center_of_mass,
    consumed_endurance,
    endurance_seconds,
    shoulder_torque,
)
from .evaluation import (
    ABLATION_GROUPS,
    UserReport,
    ablate_config,
    apply_ablation,
    build_training_set,
    encode_session,
    evaluate_per_user,
    render_ablation_table,
    render_correlation_table,
    render_user_table,
    report_rows,
    run_ablation,
    wais_performance_correlations,
    write_report_tsv,
)
from .features import (
    EMBEDDING_DIM,
    FEATURE_DIM,
    ORG_SLICE,
    SEMANTIC_SLICE,
    WAIS_SLICE,
    EmbeddingProvider,
    HashEmbedding,
    OrganizationNormalizers,
    TableEmbedding,
    WaisScore,
    assemble_features,
    load_embedding_table,
    semantic_vector,
    write_embedding_table,
)
from .metrics import MetricError, mse, pearson, r_squared
from .recurrent import (
    ModelWeights,
    Prediction,
    TrainConfig,
    TrainingDiverged,
    forward,
    gradient_check,
    init_weights,
    load_weights,
    predict_session,
    save_weights,
    train,
)
from .sessions import (
    Session,
    SessionFormatError,
    TaskRecord,
    read_corpus,
    read_session,
    read_sessions_dir,
    write_corpus,
    write_session,
)
from .synthetic import (
    PlantedLaw,
    SyntheticUser,
    generate_corpus,
    hold_pose_frames,
    simulate_session,
)
from .taxonomy import (
    MenuLevel,
    SelectionTask,
    Taxonomy,
    TaxonomyError,
    TaxonomyNode,
    bundled_taxonomy,
    generate_session_plan,
    load_taxonomy,
    parse_taxonomy,
    sample_task,
    serialize_taxonomy,
)

__version__ = "0.1.0"

__all__ = [
    "ArmFrame",
    "ArmParams",
    "CeResult",
    "arm_center_of_mass",
    "consumed_endurance",
    "endurance_seconds",
    "shoulder_torque",
    "ABLATION_GROUPS",
    "UserReport",
    "ablate_config",
    "apply_ablation",
    "build_training_set",
    "encode_session",
    "evaluate_per_user",
    "render_ablation_table",
    "render_correlation_table",
    "render_user_table",
    "report_rows",
    "run_ablation",
    "wais_performance_correlations",
    "write_report_tsv",
    "EMBEDDING_DIM",
    "FEATURE_DIM",
    "ORG_SLICE",
    "SEMANTIC_SLICE",
    "WAIS_SLICE",
    "EmbeddingProvider",
    "HashEmbedding",
    "OrganizationNormalizers",
    "TableEmbedding",
    "WaisScore",
    "assemble_features",
    "load_embedding_table",
    "semantic_vector",
    "write_embedding_table",
    "MetricError",
    "mse",
    "pearson",
    "r_squared",
    "ModelWeights",
    "Prediction",
    "TrainConfig",
    "TrainingDiverged",
    "forward",
    "gradient_check",
    "init_weights",
    "load_weights",
    "predict_session",
    "save_weights",
    "train",
    "Session",
    "SessionFormatError",
    "TaskRecord",
    "read_corpus",
    "read_session",
    "read_sessions_dir",
    "write_corpus",
    "write_session",
    "PlantedLaw",
    "SyntheticUser",
    "generate_corpus",
    "hold_pose_frames",
    "simulate_session",
    "MenuLevel",
    "SelectionTask",
    "Taxonomy",
    "TaxonomyError",
    "TaxonomyNode",
    "bundled_taxonomy",
    "generate_session_plan",
    "load_taxonomy",
    "parse_taxonomy",
    "sample_task",
    "serialize_taxonomy",
    "__version__",
]
