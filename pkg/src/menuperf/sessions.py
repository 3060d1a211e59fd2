"""Line-record session files: one user's ordered tasks with frames and measures.

The format is append-friendly plain text, one directive per line:

    #menuperf-session v1
    user <user_id>
    wais <symbol_search> <symbol_coding>
    arm <arm_mass> <com_fraction> <max_torque>
    task <index>
    prompt <text>
    level <target_index> <item>|<item>|...
    frames <count>
    f <t> <sx> <sy> <sz> <ex> <ey> <ez> <hx> <hy> <hz>
    measured <ce> <pt>
    end

`frames` (followed by exactly `count` `f` lines) and `measured` are optional
per task. Task indices must be contiguous from 0. Floats are written with
repr and parse back to the identical values, so emitted files round-trip
losslessly. Synthetic and captured sessions share this schema, so downstream
consumers cannot distinguish provenance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .endurance import ArmFrame, ArmParams, consumed_endurance
from .features import WaisScore
from .taxonomy import MenuLevel, SelectionTask

__all__ = [
    "SessionFormatError",
    "TaskRecord",
    "Session",
    "read_session",
    "write_session",
    "parse_session",
    "render_session",
    "read_sessions_dir",
    "write_corpus",
    "read_corpus",
]

SESSION_MAGIC = "#menuperf-session v1"


class SessionFormatError(ValueError):
    """Raised for malformed or invariant-violating session files."""


@dataclass
class TaskRecord:
    index: int
    task: SelectionTask
    frames: list[ArmFrame] | None = None
    measured_ce: float | None = None
    measured_pt: float | None = None


@dataclass
class Session:
    user_id: str
    wais: WaisScore
    arm: ArmParams = field(default_factory=ArmParams)
    records: list[TaskRecord] = field(default_factory=list)

    def validate(self, check_ce: bool = False) -> None:
        for i, rec in enumerate(self.records):
            if rec.index != i:
                raise SessionFormatError(
                    f"task indices must be contiguous from 0; record {i} has index {rec.index}"
                )
            rec.task.validate()
            if check_ce and rec.frames is not None:
                result = consumed_endurance(rec.frames, self.arm)
                if not np.isfinite(result.ce):
                    raise SessionFormatError(
                        f"task {i}: frames yield non-finite CE ({result.ce})"
                    )

    def measured_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Measured (ce, pt) per task; raises if any record lacks measures."""
        ces, pts = [], []
        for rec in self.records:
            if rec.measured_ce is None or rec.measured_pt is None:
                raise SessionFormatError(
                    f"user {self.user_id}: task {rec.index} has no measured ce/pt"
                )
            ces.append(rec.measured_ce)
            pts.append(rec.measured_pt)
        return np.array(ces), np.array(pts)


def _fmt(x: float) -> str:
    return repr(float(x))


def render_session(session: Session) -> str:
    session.validate(check_ce=True)
    lines = [SESSION_MAGIC, f"user {session.user_id}"]
    lines.append(f"wais {session.wais.symbol_search} {session.wais.symbol_coding}")
    arm = session.arm
    lines.append(f"arm {_fmt(arm.arm_mass)} {_fmt(arm.com_fraction)} {_fmt(arm.max_torque)}")
    for rec in session.records:
        lines.append(f"task {rec.index}")
        lines.append(f"prompt {rec.task.prompt}")
        for level in rec.task.levels:
            lines.append(f"level {level.target_index} " + "|".join(level.items))
        if rec.frames is not None:
            lines.append(f"frames {len(rec.frames)}")
            for fr in rec.frames:
                coords = np.concatenate([fr.shoulder, fr.elbow, fr.hand])
                lines.append("f " + _fmt(fr.t) + " " + " ".join(_fmt(v) for v in coords))
        if rec.measured_ce is not None or rec.measured_pt is not None:
            if rec.measured_ce is None or rec.measured_pt is None:
                raise SessionFormatError("measured line needs both ce and pt")
            lines.append(f"measured {_fmt(rec.measured_ce)} {_fmt(rec.measured_pt)}")
        lines.append("end")
    return "\n".join(lines) + "\n"


class _Cursor:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def peek(self) -> str | None:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def take(self) -> str | None:
        line = self.peek()
        if line is not None:
            self.pos += 1
        return line

    def lineno(self) -> int:
        return self.pos

    def fail(self, msg: str):
        raise SessionFormatError(f"line {self.pos}: {msg}")


def parse_session(text: str) -> Session:
    cur = _Cursor(text)
    try:
        return _parse_body(cur)
    except SessionFormatError:
        raise
    except ValueError as exc:  # bad int/float literals, invariant violations
        raise SessionFormatError(f"line {cur.lineno()}: {exc}") from exc


def _parse_body(cur: _Cursor) -> Session:
    if cur.take() != SESSION_MAGIC:
        raise SessionFormatError(f"missing magic line {SESSION_MAGIC!r}")

    def expect(prefix: str) -> str:
        line = cur.take()
        if line is None or not line.startswith(prefix + " "):
            cur.fail(f"expected {prefix!r} directive")
        return line[len(prefix) + 1 :]

    user_id = expect("user").strip()
    ss, sc = expect("wais").split()
    wais = WaisScore(int(ss), int(sc))
    mass, com, mx = (float(v) for v in expect("arm").split())
    arm = ArmParams(arm_mass=mass, com_fraction=com, max_torque=mx)

    records: list[TaskRecord] = []
    while cur.peek() is not None:
        index = int(expect("task"))
        prompt = expect("prompt")
        levels: list[MenuLevel] = []
        frames: list[ArmFrame] | None = None
        ce = pt = None
        while True:
            line = cur.take()
            if line is None:
                cur.fail("unterminated task record (missing 'end')")
            if line == "end":
                break
            if line.startswith("level "):
                _, target_index, rest = line.split(" ", 2)
                items = rest.split("|")
                levels.append(MenuLevel(items=items, target_index=int(target_index)))
            elif line.startswith("frames "):
                count = int(line.split(" ", 1)[1])
                frames = []
                for _ in range(count):
                    fline = cur.take()
                    if fline is None or not fline.startswith("f "):
                        cur.fail("expected frame line 'f <t> <9 coords>'")
                    vals = [float(v) for v in fline[2:].split()]
                    if len(vals) != 10:
                        cur.fail(f"frame line has {len(vals)} values, expected 10")
                    frames.append(
                        ArmFrame(t=vals[0], shoulder=vals[1:4], elbow=vals[4:7], hand=vals[7:10])
                    )
            elif line.startswith("measured "):
                parts = line.split()
                if len(parts) != 3:
                    cur.fail("measured line needs '<ce> <pt>'")
                ce, pt = float(parts[1]), float(parts[2])
            else:
                cur.fail(f"unknown directive {line.split(' ')[0]!r}")
        if not levels:
            cur.fail(f"task {index} has no levels")
        task = SelectionTask(levels=levels, prompt=prompt)
        records.append(
            TaskRecord(index=index, task=task, frames=frames, measured_ce=ce, measured_pt=pt)
        )
    session = Session(user_id=user_id, wais=wais, arm=arm, records=records)
    session.validate()
    return session


def write_session(session: Session, path) -> None:
    Path(path).write_text(render_session(session), encoding="utf-8")


def read_session(path) -> Session:
    try:
        return parse_session(Path(path).read_text(encoding="utf-8"))
    except SessionFormatError as exc:
        raise SessionFormatError(f"{path}: {exc}") from exc


def read_sessions_dir(directory) -> list[Session]:
    """All *.session files under a directory, sorted by filename."""
    paths = sorted(Path(directory).glob("*.session"))
    if not paths:
        raise SessionFormatError(f"no .session files found in {directory}")
    return [read_session(p) for p in paths]


def write_corpus(directory, train: list[Session], test: list[Session]) -> None:
    """Write train/ and test/ subdirectories of session files."""
    root = Path(directory)
    for sub, sessions in (("train", train), ("test", test)):
        d = root / sub
        d.mkdir(parents=True, exist_ok=True)
        for s in sessions:
            write_session(s, d / f"{s.user_id}.session")


def read_corpus(directory) -> tuple[list[Session], list[Session]]:
    root = Path(directory)
    return read_sessions_dir(root / "train"), read_sessions_dir(root / "test")
