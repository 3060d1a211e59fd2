"""Experiment harness: per-user reports, feature-group ablations, correlations.

Reports mirror the familiar result-table layout (user rows, R2/MSE columns
for CE and PT, an unweighted Average row). Ablations zero the chosen feature
slots in every vector and retrain from scratch with the same seed, keeping
weight shapes fixed; a slot-removal variant that shrinks the input layer is
available behind the `drop_slots` flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import metrics
from .features import (
    FEATURE_DIM,
    ORG_SLICE,
    SEMANTIC_SLICE,
    WAIS_SLICE,
    DEFAULT_NORMALIZERS,
    EmbeddingProvider,
    OrganizationNormalizers,
    assemble_features,
)
from .recurrent import ModelWeights, TrainConfig, predict_session, train
from .sessions import Session

__all__ = [
    "UserReport",
    "ABLATION_GROUPS",
    "encode_session",
    "build_training_set",
    "evaluate_per_user",
    "apply_ablation",
    "ablate_config",
    "run_ablation",
    "wais_performance_correlations",
    "render_user_table",
    "render_ablation_table",
    "render_correlation_table",
    "report_rows",
    "write_report_tsv",
]

ABLATION_GROUPS: dict[str, slice | None] = {
    "none": None,
    "wais": WAIS_SLICE,
    "semantics": SEMANTIC_SLICE,
    "organization": ORG_SLICE,
}


@dataclass
class UserReport:
    user_id: str
    r2_ce: float
    mse_ce: float
    r2_pt: float
    mse_pt: float


def encode_session(
    session: Session,
    provider: EmbeddingProvider,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
) -> np.ndarray:
    """Feature matrix (n_tasks, 523) for one session, in task order."""
    return np.stack(
        [assemble_features(rec.task, session.wais, provider, normalizers) for rec in session.records]
    )


def build_training_set(
    sessions: list[Session],
    provider: EmbeddingProvider,
    window: int = 15,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
    ablation: str = "none",
    drop_slots: bool = False,
):
    """(window, ce, pt) samples across sessions; window i covers tasks max(0, i-w+1)..i."""
    dataset = []
    for session in sessions:
        feats = apply_ablation(encode_session(session, provider, normalizers), ablation, drop_slots)
        ces, pts = session.measured_arrays()
        for i in range(len(feats)):
            lo = max(0, i - window + 1)
            dataset.append((feats[lo : i + 1], float(ces[i]), float(pts[i])))
    return dataset


def evaluate_per_user(
    sessions: list[Session],
    weights: ModelWeights,
    provider: EmbeddingProvider,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
    ablation: str = "none",
    drop_slots: bool = False,
) -> tuple[list[UserReport], UserReport]:
    """Per-user metrics over each user's full task sequence, plus unweighted averages."""
    reports = []
    for session in sessions:
        feats = apply_ablation(encode_session(session, provider, normalizers), ablation, drop_slots)
        preds = predict_session(feats, weights)
        pred_ce = np.array([p.ce for p in preds])
        pred_pt = np.array([p.pt for p in preds])
        ces, pts = session.measured_arrays()
        reports.append(
            UserReport(
                user_id=session.user_id,
                r2_ce=metrics.r_squared(ces, pred_ce),
                mse_ce=metrics.mse(ces, pred_ce),
                r2_pt=metrics.r_squared(pts, pred_pt),
                mse_pt=metrics.mse(pts, pred_pt),
            )
        )
    avg = UserReport(
        user_id="Average",
        r2_ce=float(np.mean([r.r2_ce for r in reports])),
        mse_ce=float(np.mean([r.mse_ce for r in reports])),
        r2_pt=float(np.mean([r.r2_pt for r in reports])),
        mse_pt=float(np.mean([r.mse_pt for r in reports])),
    )
    return reports, avg


def apply_ablation(features: np.ndarray, group: str, drop_slots: bool = False) -> np.ndarray:
    """Zero (or cut out, with drop_slots) one feature group in a (n, 523) matrix."""
    if group not in ABLATION_GROUPS:
        raise ValueError(f"unknown ablation group {group!r}; use one of {sorted(ABLATION_GROUPS)}")
    sl = ABLATION_GROUPS[group]
    if sl is None:
        return features
    if drop_slots:
        keep = np.ones(features.shape[1], dtype=bool)
        keep[sl] = False
        return features[:, keep]
    out = features.copy()
    out[:, sl] = 0.0
    return out


def ablate_config(config: TrainConfig, group: str, drop_slots: bool) -> TrainConfig:
    """Training config for an ablation condition (input shrinks when dropping slots)."""
    if not drop_slots or ABLATION_GROUPS.get(group) is None:
        return config
    sl = ABLATION_GROUPS[group]
    removed = sl.stop - sl.start
    cfg = TrainConfig(**{**config.__dict__, "input_dim": config.input_dim - removed})
    return cfg


def run_ablation(
    train_sessions: list[Session],
    test_sessions: list[Session],
    config: TrainConfig,
    group: str,
    provider: EmbeddingProvider,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
    drop_slots: bool = False,
) -> tuple[list[UserReport], UserReport, ModelWeights]:
    """Retrain from scratch with one feature group removed and evaluate held-out users.

    `group="none"` runs the untouched baseline path, so with identical seeds it
    reproduces baseline metrics exactly.
    """
    cfg = ablate_config(config, group, drop_slots)
    dataset = build_training_set(
        train_sessions, provider, cfg.window, normalizers, ablation=group, drop_slots=drop_slots
    )
    weights, _ = train(dataset, cfg)
    reports, avg = evaluate_per_user(
        test_sessions, weights, provider, normalizers, ablation=group, drop_slots=drop_slots
    )
    return reports, avg, weights


def wais_performance_correlations(sessions: list[Session]) -> dict[str, dict[str, float]]:
    """Pearson correlations of per-user mean CE/PT against WAIS subscores."""
    total = np.array([s.wais.symbol_search + s.wais.symbol_coding for s in sessions], dtype=float)
    search = np.array([s.wais.symbol_search for s in sessions], dtype=float)
    coding = np.array([s.wais.symbol_coding for s in sessions], dtype=float)
    mean_ce = np.array([s.measured_arrays()[0].mean() for s in sessions])
    mean_pt = np.array([s.measured_arrays()[1].mean() for s in sessions])
    out: dict[str, dict[str, float]] = {}
    for perf_name, perf in (("CE", mean_ce), ("PT", mean_pt)):
        out[perf_name] = {
            "Total WAIS": metrics.pearson(perf, total),
            "Symbol Search": metrics.pearson(perf, search),
            "Symbol Coding": metrics.pearson(perf, coding),
        }
    return out


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[k]) for r in rows)) for k, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    sep = "-" * len(line)
    body = "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows)
    return f"{line}\n{sep}\n{body}"


def render_user_table(reports: list[UserReport], avg: UserReport) -> str:
    headers = ["User", "R2 CE", "MSE CE", "R2 PT", "MSE PT"]
    rows = [
        [r.user_id, f"{r.r2_ce:.2f}", f"{r.mse_ce:.2f}", f"{r.r2_pt:.2f}", f"{r.mse_pt:.2f}"]
        for r in reports + [avg]
    ]
    return _table(headers, rows)


def render_ablation_table(results: dict[str, UserReport]) -> str:
    labels = {
        "none": "No Remove",
        "wais": "Without WAIS",
        "semantics": "Without Semantics",
        "organization": "Without Organization",
    }
    headers = ["Feature to Remove", "R2 CE", "MSE CE", "R2 PT", "MSE PT"]
    rows = [
        [labels[g], f"{r.r2_ce:.2f}", f"{r.mse_ce:.2f}", f"{r.r2_pt:.2f}", f"{r.mse_pt:.2f}"]
        for g, r in results.items()
    ]
    return _table(headers, rows)


def render_correlation_table(corr: dict[str, dict[str, float]]) -> str:
    headers = ["Performance Factor", "Total WAIS", "Symbol Search", "Symbol Coding"]
    rows = [
        [name, *(f"{corr[name][h]:.3f}" for h in headers[1:])]
        for name in corr
    ]
    return _table(headers, rows)


def report_rows(reports: list[UserReport], avg: UserReport) -> list[dict]:
    return [
        {
            "user": r.user_id,
            "r2_ce": r.r2_ce,
            "mse_ce": r.mse_ce,
            "r2_pt": r.r2_pt,
            "mse_pt": r.mse_pt,
        }
        for r in reports + [avg]
    ]


def write_report_tsv(path, rows: list[dict]) -> None:
    """Machine-readable companion to the aligned tables: TSV with a header row."""
    if not rows:
        raise ValueError("no rows to write")
    cols = list(rows[0].keys())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(cols) + "\n")
        for row in rows:
            fh.write("\t".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols) + "\n")
