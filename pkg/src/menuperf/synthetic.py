"""Synthetic user sessions with planted, documented performance laws.

Pointing time for task i of a session follows

    PT_i = (sum over levels [pt_base + pt_per_bit * log2(len + 1)
                             + pt_per_char * chars(target)]
            + pt_per_semantic * probe(task))
           * (1 - wais_coefficient * wais_norm)
           * (1 + pt_skill_gain * (1 - skill))
           * decay^i
           + N(0, noise_sd_pt),    floored at min_pt

where wais_norm is the mean of the two normalized WAIS subscores and
probe(task) projects the task's semantic vector onto a fixed pseudo-random
unit direction (scaled by sqrt(512) to give it unit-ish spread). Setting
pt_per_semantic to 0 disables the semantic channel.

Consumed endurance is NOT produced by a closed-form law. Each task synthesizes
a static mid-air hold of the arm for PT seconds at an elevation that grows
with the target positions (plus a fatigue ramp and optional pose jitter), and
the endurance module measures CE from those frames. Endurance-module bugs
therefore surface in end-to-end tests.

All constants live on PlantedLaw; nothing is hidden in code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .endurance import ArmFrame, ArmParams, consumed_endurance
from .features import EmbeddingProvider, HashEmbedding, WaisScore, semantic_vector
from .sessions import Session, TaskRecord
from .taxonomy import SelectionTask, Taxonomy, generate_session_plan

__all__ = [
    "PlantedLaw",
    "SyntheticUser",
    "hold_pose_frames",
    "simulate_session",
    "generate_corpus",
]


@dataclass
class PlantedLaw:
    # pointing-time channel
    pt_base: float = 0.8  # seconds per level
    pt_per_bit: float = 0.25  # seconds per log2(list_length + 1), Hick-style
    pt_per_char: float = 0.02  # seconds per character of the target label
    pt_per_semantic: float = 0.5  # seconds per unit of the semantic probe; 0 disables
    semantic_probe_seed: int = 2718
    wais_coefficient: float = 0.3  # fraction of PT removed at maximal WAIS
    pt_skill_gain: float = 0.1  # slowdown fraction at skill 0
    min_pt: float = 0.2  # floor, seconds
    # per-user defaults stamped onto generated users
    learning_decay: float = 0.997  # per-task PT reduction factor
    fatigue_rate: float = 0.001  # per-task pose-elevation inflation
    noise_sd_pt: float = 0.2  # seconds
    noise_sd_ce: float = 0.75  # scales pose jitter, see ce_noise_deg
    # arm geometry for the synthesized hold
    shoulder_height: float = 1.4  # meters
    arm_length: float = 0.9  # shoulder-to-hand, meters
    elbow_bend: float = 0.05  # elbow offset off the straight segment, meters
    angle_min_deg: float = 35.0  # elevation from vertical at target_position ratio 0
    angle_max_deg: float = 80.0  # ... at ratio 1
    angle_clamp_deg: float = 88.0  # hard ceiling after fatigue/jitter
    ce_noise_deg: float = 2.0  # degrees of pose jitter per unit of noise_sd_ce
    frame_rate: float = 30.0


@dataclass
class SyntheticUser:
    user_id: str
    wais: WaisScore
    skill: float = 0.5  # in [0, 1]; higher is faster
    fatigue_rate: float = 0.001
    learning_rate_decay: float = 0.997
    noise_sd_pt: float = 0.2
    noise_sd_ce: float = 0.75
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.skill <= 1.0:
            raise ValueError("skill must lie in [0, 1]")
        if self.noise_sd_pt < 0 or self.noise_sd_ce < 0:
            raise ValueError("noise standard deviations must be >= 0")
        if not 0.0 < self.learning_rate_decay <= 1.0:
            raise ValueError("learning_rate_decay must lie in (0, 1]")


def _probe_direction(law: PlantedLaw, dim: int) -> np.ndarray:
    g = np.random.Generator(np.random.PCG64(law.semantic_probe_seed))
    w = g.standard_normal(dim)
    return w / np.linalg.norm(w)


def semantic_probe(task: SelectionTask, provider: EmbeddingProvider, law: PlantedLaw) -> float:
    """sqrt(dim)-scaled projection of the task's semantic vector on a fixed direction."""
    vec = semantic_vector(task, provider)
    w = _probe_direction(law, vec.shape[0])
    return float(math.sqrt(vec.shape[0]) * np.dot(w, vec))


def hold_pose_frames(duration: float, angle_deg: float, law: PlantedLaw) -> list[ArmFrame]:
    """Static mid-air hold: arm raised `angle_deg` from vertical for `duration` s."""
    theta = math.radians(angle_deg)
    d = np.array([math.sin(theta), 0.0, -math.cos(theta)])
    perp = np.array([math.cos(theta), 0.0, math.sin(theta)])
    shoulder = np.array([0.0, 0.0, law.shoulder_height])
    hand = shoulder + law.arm_length * d
    elbow = shoulder + 0.5 * law.arm_length * d + law.elbow_bend * perp
    n = max(3, int(round(duration * law.frame_rate)) + 1)
    times = np.linspace(0.0, duration, n)
    return [ArmFrame(t=float(t), shoulder=shoulder, elbow=elbow, hand=hand) for t in times]


def _task_pt(
    task: SelectionTask,
    index: int,
    user: SyntheticUser,
    law: PlantedLaw,
    probe: float,
) -> float:
    base = 0.0
    for level in task.levels:
        base += (
            law.pt_base
            + law.pt_per_bit * math.log2(len(level.items) + 1)
            + law.pt_per_char * len(level.target)
        )
    base += law.pt_per_semantic * probe
    wais_norm = float(user.wais.normalized().mean())
    return (
        base
        * (1.0 - law.wais_coefficient * wais_norm)
        * (1.0 + law.pt_skill_gain * (1.0 - user.skill))
        * user.learning_rate_decay**index
    )


def _task_angle(task: SelectionTask, index: int, user: SyntheticUser, law: PlantedLaw) -> float:
    # deeper/lower targets force a higher reach
    ratio = float(np.mean([(lv.target_index + 1) / len(lv.items) for lv in task.levels]))
    angle = law.angle_min_deg + (law.angle_max_deg - law.angle_min_deg) * ratio
    angle *= 1.0 + user.fatigue_rate * index
    return angle


def simulate_session(
    user: SyntheticUser,
    plan: list[SelectionTask],
    law: PlantedLaw | None = None,
    provider: EmbeddingProvider | None = None,
    arm: ArmParams | None = None,
) -> Session:
    """Run one synthetic user through a task plan, measuring CE from emitted frames."""
    law = law or PlantedLaw()
    provider = provider or HashEmbedding()
    arm = arm or ArmParams()
    rng = np.random.Generator(np.random.PCG64(user.seed))
    records = []
    for i, task in enumerate(plan):
        probe = semantic_probe(task, provider, law) if law.pt_per_semantic != 0.0 else 0.0
        pt = _task_pt(task, i, user, law, probe)
        pt += float(rng.normal(0.0, user.noise_sd_pt)) if user.noise_sd_pt > 0 else 0.0
        pt = max(law.min_pt, pt)
        angle = _task_angle(task, i, user, law)
        if user.noise_sd_ce > 0:
            angle += float(rng.normal(0.0, law.ce_noise_deg * user.noise_sd_ce))
        angle = float(np.clip(angle, 5.0, law.angle_clamp_deg))
        frames = hold_pose_frames(pt, angle, law)
        ce = consumed_endurance(frames, arm).ce
        records.append(
            TaskRecord(index=i, task=task, frames=frames, measured_ce=ce, measured_pt=pt)
        )
    return Session(user_id=user.user_id, wais=user.wais, arm=arm, records=records)


def generate_corpus(
    taxonomy: Taxonomy,
    n_train_users: int = 24,
    n_test_users: int = 4,
    law: PlantedLaw | None = None,
    seed: int = 0,
    provider: EmbeddingProvider | None = None,
    arm: ArmParams | None = None,
    attempts: int = 5,
    tasks_per_attempt: int = 7,
) -> tuple[list[Session], list[Session]]:
    """Synthesize train/test user groups; defaults give 24 x 35 / 4 x 35 records.

    All per-user seeds derive from the corpus seed, so the same seed yields
    byte-identical session files.
    """
    if n_train_users < 1 or n_test_users < 1:
        raise ValueError("user counts must be >= 1")
    law = law or PlantedLaw()
    provider = provider or HashEmbedding()
    children = np.random.SeedSequence(seed).spawn(n_train_users + n_test_users)
    train: list[Session] = []
    test: list[Session] = []
    for u, child in enumerate(children):
        rng = np.random.Generator(np.random.PCG64(child))
        is_test = u >= n_train_users
        user = SyntheticUser(
            user_id=(f"test-{u - n_train_users:02d}" if is_test else f"train-{u:02d}"),
            wais=WaisScore(int(rng.integers(0, 64)), int(rng.integers(0, 136))),
            skill=float(rng.uniform(0.0, 1.0)),
            fatigue_rate=law.fatigue_rate,
            learning_rate_decay=law.learning_decay,
            noise_sd_pt=law.noise_sd_pt,
            noise_sd_ce=law.noise_sd_ce,
            seed=int(rng.integers(2**31)),
        )
        plan = generate_session_plan(
            taxonomy, attempts, tasks_per_attempt, seed=int(rng.integers(2**31))
        )
        session = simulate_session(user, plan, law, provider, arm)
        (test if is_test else train).append(session)
    return train, test
