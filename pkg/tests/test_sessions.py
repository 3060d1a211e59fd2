"""Tests for the plain-text session file format."""

import numpy as np
import pytest

from menuperf.endurance import ArmFrame, ArmParams
from menuperf.features import WaisScore
from menuperf.sessions import (
    SESSION_MAGIC,
    Session,
    SessionFormatError,
    TaskRecord,
    parse_session,
    read_corpus,
    read_session,
    read_sessions_dir,
    render_session,
    write_corpus,
    write_session,
)
from menuperf.taxonomy import MenuLevel, SelectionTask


def make_task(depth: int = 2) -> SelectionTask:
    levels = [
        MenuLevel(items=["alpha", "beta", "gamma"], target_index=1),
        MenuLevel(items=["delta", "epsilon"], target_index=0),
        MenuLevel(items=["zeta", "eta", "theta", "iota"], target_index=3),
    ]
    return SelectionTask(levels=levels[:depth])


def make_frames(n: int = 4) -> list[ArmFrame]:
    frames = []
    for k in range(n):
        t = k / 30.0
        frames.append(
            ArmFrame(
                t=t,
                shoulder=[0.0, 0.0, 1.4],
                elbow=[0.45, 0.0, 1.4],
                hand=[0.9, 0.0, 1.4],
            )
        )
    return frames


def make_session(with_frames: bool = True) -> Session:
    rec0 = TaskRecord(
        index=0,
        task=make_task(2),
        frames=make_frames() if with_frames else None,
        measured_ce=1.25,
        measured_pt=0.875,
    )
    rec1 = TaskRecord(index=1, task=make_task(3), measured_ce=2.5, measured_pt=1.0)
    return Session(
        user_id="u-01",
        wais=WaisScore(symbol_search=40, symbol_coding=90),
        records=[rec0, rec1],
    )


class TestRoundTrip:
    def test_render_parse_identity(self):
        session = make_session()
        text = render_session(session)
        back = parse_session(text)
        assert back.user_id == session.user_id
        assert back.wais == session.wais
        assert back.arm == session.arm
        assert len(back.records) == 2
        r0 = back.records[0]
        assert r0.task.prompt == session.records[0].task.prompt
        assert r0.measured_ce == 1.25 and r0.measured_pt == 0.875
        assert len(r0.frames) == 4
        assert r0.frames[2].t == session.records[0].frames[2].t
        assert np.array_equal(r0.frames[2].hand, session.records[0].frames[2].hand)
        assert back.records[1].frames is None

    def test_floats_survive_exactly(self):
        session = make_session()
        session.records[0].measured_ce = 0.1 + 0.2  # not representable nicely
        session.records[0].frames[1].t = 1.0 / 30.0 + 1.0 / 3.0e3
        back = parse_session(render_session(session))
        assert back.records[0].measured_ce == session.records[0].measured_ce
        assert back.records[0].frames[1].t == session.records[0].frames[1].t

    def test_render_is_stable(self):
        session = make_session()
        assert render_session(session) == render_session(session)

    def test_file_round_trip(self, tmp_path):
        session = make_session()
        path = tmp_path / "one.session"
        write_session(session, path)
        back = read_session(path)
        assert render_session(back) == render_session(session)

    def test_starts_with_magic(self):
        assert render_session(make_session()).startswith(SESSION_MAGIC + "\n")


class TestParsing:
    def test_blank_lines_ignored(self):
        text = render_session(make_session())
        spaced = text.replace("\ntask 1\n", "\n\n\ntask 1\n")
        back = parse_session(spaced)
        assert len(back.records) == 2

    def test_missing_magic(self):
        with pytest.raises(SessionFormatError, match="magic"):
            parse_session("user u-01\n")

    def test_unterminated_task(self):
        text = render_session(make_session())
        truncated = text.rsplit("end\n", 1)[0]
        with pytest.raises(SessionFormatError, match="end"):
            parse_session(truncated)

    def test_unknown_directive_has_line_number(self):
        text = render_session(make_session()).replace("measured ", "measured? ", 1)
        with pytest.raises(SessionFormatError, match=r"line \d+"):
            parse_session(text)

    def test_bad_float_reported_with_line(self):
        text = render_session(make_session()).replace("measured 1.25", "measured abc", 1)
        with pytest.raises(SessionFormatError, match=r"line \d+"):
            parse_session(text)

    def test_frame_width_enforced(self):
        session = make_session()
        text = render_session(session)
        lines = text.splitlines()
        fi = next(i for i, ln in enumerate(lines) if ln.startswith("f "))
        lines[fi] = lines[fi] + " 9.9"
        with pytest.raises(SessionFormatError, match="10"):
            parse_session("\n".join(lines) + "\n")

    def test_task_without_levels(self):
        text = "\n".join(
            [
                SESSION_MAGIC,
                "user u",
                "wais 10 20",
                "arm 3.5 0.33 30.0",
                "task 0",
                "prompt nothing",
                "end",
            ]
        )
        with pytest.raises(SessionFormatError, match="levels"):
            parse_session(text)

    def test_non_contiguous_indices(self):
        text = render_session(make_session()).replace("task 1\n", "task 5\n")
        with pytest.raises(SessionFormatError, match="contiguous"):
            parse_session(text)

    def test_file_error_names_path(self, tmp_path):
        path = tmp_path / "bad.session"
        path.write_text("not a session\n")
        with pytest.raises(SessionFormatError, match="bad.session"):
            read_session(path)


class TestValidation:
    def test_measured_needs_both_values(self):
        session = make_session()
        session.records[0].measured_pt = None
        with pytest.raises(SessionFormatError, match="both"):
            render_session(session)

    def test_measured_arrays(self):
        ces, pts = make_session().measured_arrays()
        assert ces.tolist() == [1.25, 2.5]
        assert pts.tolist() == [0.875, 1.0]

    def test_measured_arrays_require_measures(self):
        session = make_session()
        session.records[1].measured_ce = None
        session.records[1].measured_pt = None
        with pytest.raises(SessionFormatError, match="task 1"):
            session.measured_arrays()

    def test_depth_one_task_rejected_on_render(self):
        session = make_session()
        session.records[0].task = SelectionTask(
            levels=[MenuLevel(items=["only"], target_index=0)]
        )
        with pytest.raises(ValueError):
            render_session(session)


class TestCorpusLayout:
    def test_write_and_read_corpus(self, tmp_path):
        a, b, c = make_session(), make_session(), make_session()
        a.user_id, b.user_id, c.user_id = "train-00", "train-01", "test-00"
        write_corpus(tmp_path, [a, b], [c])
        train, test = read_corpus(tmp_path)
        assert [s.user_id for s in train] == ["train-00", "train-01"]
        assert [s.user_id for s in test] == ["test-00"]
        assert sorted(p.name for p in (tmp_path / "train").iterdir()) == [
            "train-00.session",
            "train-01.session",
        ]

    def test_empty_directory_rejected(self, tmp_path):
        (tmp_path / "train").mkdir()
        with pytest.raises(SessionFormatError, match="no .session files"):
            read_sessions_dir(tmp_path / "train")

    def test_custom_arm_round_trips(self, tmp_path):
        session = make_session()
        session.arm = ArmParams(arm_mass=2.75, com_fraction=0.4, max_torque=25.0)
        path = tmp_path / "arm.session"
        write_session(session, path)
        assert read_session(path).arm == session.arm
