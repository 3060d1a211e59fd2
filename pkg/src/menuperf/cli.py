"""Command-line entry point covering the whole pipeline.

Subcommands: `tasks sample`, `ce compute`, `features encode`, `train`,
`predict`, `evaluate`, `ablate`, `simulate`, `serve`. Every command accepts
`--seed` and `--config` either before or after the subcommand. Errors are
reported as a single machine-parseable line on stderr and a nonzero exit.

A JSON config file can set defaults (seed, port, model_dir, taxonomy,
embedding_table); environment variables MENUPERF_PORT, MENUPERF_MODEL_DIR,
MENUPERF_TAXONOMY and MENUPERF_EMBEDDING_TABLE override the file, and flags
override both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .endurance import ArmParams, consumed_endurance
from .evaluation import (
    ABLATION_GROUPS,
    build_training_set,
    encode_session,
    evaluate_per_user,
    render_ablation_table,
    render_user_table,
    report_rows,
    run_ablation,
    write_report_tsv,
)
from .features import (
    HashEmbedding,
    TableEmbedding,
    WaisScore,
    load_embedding_table,
)
from .metrics import MetricError
from .recurrent import ModelError, TrainConfig, load_weights, predict_session, save_weights, train
from .sessions import (
    Session,
    SessionFormatError,
    TaskRecord,
    read_session,
    read_sessions_dir,
    render_session,
    write_corpus,
)
from .synthetic import PlantedLaw, generate_corpus
from .taxonomy import TaxonomyError, bundled_taxonomy, load_taxonomy, sample_task

__all__ = ["main", "build_parser", "resolve_settings"]

ENV_PREFIX = "MENUPERF_"
CONFIG_KEYS = ("seed", "port", "model_dir", "taxonomy", "embedding_table")
DEFAULTS = {"seed": 0, "port": 8000, "model_dir": "models", "taxonomy": None, "embedding_table": None}


class CliError(Exception):
    """Carries a single-line message destined for stderr."""


class _Parser(argparse.ArgumentParser):
    # argparse prints usage plus the error; the contract wants one line
    def error(self, message):
        raise CliError(f"usage: {message}")


def _common_flags(p: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a leaf subparser from clobbering a value the top-level
    # parser already put in the namespace ("--seed 3 train ..." and
    # "train --seed 3 ..." must both work)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    p.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="menuperf", description=__doc__.splitlines()[0])
    _common_flags(top)
    sub = top.add_subparsers(dest="command", metavar="command")

    tasks = sub.add_parser("tasks", help="task sampling utilities")
    tasks_sub = tasks.add_subparsers(dest="subcommand", metavar="subcommand")
    ts = tasks_sub.add_parser("sample", help="sample selection tasks from a taxonomy")
    _common_flags(ts)
    ts.add_argument("--depth", type=int, default=2, help="menu depth (2 or 3)")
    ts.add_argument("--count", type=int, default=1, help="number of tasks")
    ts.add_argument("--taxonomy", default=None, help="taxonomy file (default: bundled)")
    ts.add_argument("--max-items", type=int, default=8, help="items per level cap")
    ts.add_argument("--out", default=None, help="output file (default: stdout)")

    ce = sub.add_parser("ce", help="endurance utilities")
    ce_sub = ce.add_subparsers(dest="subcommand", metavar="subcommand")
    cc = ce_sub.add_parser("compute", help="compute consumed endurance from session frames")
    _common_flags(cc)
    cc.add_argument("--session", required=True, help="session file with frame data")

    feats = sub.add_parser("features", help="feature encoding utilities")
    feats_sub = feats.add_subparsers(dest="subcommand", metavar="subcommand")
    fe = feats_sub.add_parser("encode", help="encode a session file into feature rows")
    _common_flags(fe)
    fe.add_argument("--session", required=True, help="session file to encode")
    fe.add_argument("--embedding-table", default=None, help="embedding table file")
    fe.add_argument("--out", default=None, help="output file (default: stdout)")

    tr = sub.add_parser("train", help="train a model on a directory of session files")
    _common_flags(tr)
    tr.add_argument("--data", required=True, help="directory of .session files")
    tr.add_argument("--out", required=True, help="weight file to write")
    tr.add_argument("--epochs", type=int, default=None)
    tr.add_argument("--batch-size", type=int, default=None)
    tr.add_argument("--hidden", type=int, default=None)
    tr.add_argument("--window", type=int, default=None)
    tr.add_argument("--learning-rate", type=float, default=None)
    tr.add_argument("--dropout", type=float, default=None)
    tr.add_argument("--embedding-table", default=None)
    tr.add_argument("--quiet", action="store_true", help="suppress progress lines")

    pr = sub.add_parser("predict", help="predict CE/PT for the tasks of a session file")
    _common_flags(pr)
    pr.add_argument("--model", required=True, help="weight file")
    pr.add_argument("--session", required=True, help="session file with tasks")
    pr.add_argument("--embedding-table", default=None)
    pr.add_argument("--out", default=None, help="output file (default: stdout)")

    ev = sub.add_parser("evaluate", help="per-user R2/MSE report on held-out sessions")
    _common_flags(ev)
    ev.add_argument("--data", required=True, help="directory of .session files")
    ev.add_argument("--model", required=True, help="weight file")
    ev.add_argument("--embedding-table", default=None)
    ev.add_argument("--tsv", default=None, help="also write a machine-readable TSV")

    ab = sub.add_parser("ablate", help="retrain with feature groups removed and compare")
    _common_flags(ab)
    ab.add_argument("--train-data", required=True, help="training session directory")
    ab.add_argument("--test-data", required=True, help="held-out session directory")
    ab.add_argument("--epochs", type=int, default=None)
    ab.add_argument("--batch-size", type=int, default=None)
    ab.add_argument("--hidden", type=int, default=None)
    ab.add_argument("--embedding-table", default=None)
    ab.add_argument("--drop-slots", action="store_true", help="shrink vectors instead of zeroing")
    ab.add_argument("--tsv", default=None)

    sim = sub.add_parser("simulate", help="generate a synthetic corpus of session files")
    _common_flags(sim)
    sim.add_argument("--users", type=int, default=28, help="total users; 1/7 held out for test")
    sim.add_argument("--out", required=True, help="corpus directory (train/ and test/)")
    sim.add_argument("--taxonomy", default=None)
    sim.add_argument("--attempts", type=int, default=5)
    sim.add_argument("--tasks-per-attempt", type=int, default=7)
    sim.add_argument("--noise-pt", type=float, default=None, help="PT noise sd, seconds")
    sim.add_argument("--noise-ce", type=float, default=None, help="CE pose-jitter scale")
    sim.add_argument("--semantic-weight", type=float, default=None, help="semantic channel weight")

    sv = sub.add_parser("serve", help="run the HTTP prediction service")
    _common_flags(sv)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=None)
    sv.add_argument("--model-dir", default=None)
    sv.add_argument("--taxonomy", default=None)
    sv.add_argument("--embedding-table", default=None)

    return top


def resolve_settings(args: argparse.Namespace) -> dict:
    """Merge built-in defaults < config file < environment < flags."""
    settings = dict(DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise CliError(f"config file not found: {config_path}")
        except json.JSONDecodeError as e:
            raise CliError(f"config file is not valid JSON: {e}")
        if not isinstance(loaded, dict):
            raise CliError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(CONFIG_KEYS))
        if unknown:
            raise CliError(f"unknown config keys: {', '.join(unknown)}")
        settings.update(loaded)
    for key in CONFIG_KEYS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            settings[key] = int(env) if key in ("seed", "port") else env
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    return settings


def _provider(settings: dict):
    table_path = settings.get("embedding_table")
    if table_path:
        return TableEmbedding(load_embedding_table(table_path), fallback=HashEmbedding())
    return HashEmbedding()


def _taxonomy(settings: dict):
    path = settings.get("taxonomy")
    return load_taxonomy(path) if path else bundled_taxonomy()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _train_config(args: argparse.Namespace, settings: dict, input_dim: int = 523) -> TrainConfig:
    base = TrainConfig()
    return TrainConfig(
        input_dim=input_dim,
        hidden_dim=getattr(args, "hidden", None) or base.hidden_dim,
        window=getattr(args, "window", None) or base.window,
        dropout_rate=base.dropout_rate if getattr(args, "dropout", None) is None else args.dropout,
        learning_rate=getattr(args, "learning_rate", None) or base.learning_rate,
        epochs=base.epochs if getattr(args, "epochs", None) is None else args.epochs,
        batch_size=getattr(args, "batch_size", None) or base.batch_size,
        seed=settings["seed"],
    )


def _cmd_tasks_sample(args, settings) -> int:
    if args.count < 1:
        raise CliError("--count must be >= 1")
    taxonomy = _taxonomy(settings if args.taxonomy is None else {**settings, "taxonomy": args.taxonomy})
    records = []
    for k in range(args.count):
        task = sample_task(taxonomy, args.depth, seed=settings["seed"] + k, max_items=args.max_items)
        records.append(TaskRecord(index=k, task=task))
    session = Session(user_id="sampled", wais=WaisScore(0, 0), arm=ArmParams(), records=records)
    _emit(render_session(session), args.out)
    return 0


def _cmd_ce_compute(args, settings) -> int:
    session = read_session(args.session)
    lines = []
    for rec in session.records:
        if rec.frames is None:
            continue
        result = consumed_endurance(rec.frames, session.arm)
        lines.append(f"task {rec.index} ce {result.ce!r}\n")
    if not lines:
        raise CliError(f"no frame data in {args.session}")
    sys.stdout.write("".join(lines))
    return 0


def _cmd_features_encode(args, settings) -> int:
    session = read_session(args.session)
    provider = _provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]})
    rows = encode_session(session, provider)
    text = "".join("\t".join(repr(float(v)) for v in row) + "\n" for row in rows)
    _emit(text, args.out)
    return 0


def _lock_path(out: str) -> Path:
    return Path(str(out) + ".lock")


def _cmd_train(args, settings) -> int:
    sessions = read_sessions_dir(args.data)
    provider = _provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]})
    config = _train_config(args, settings)
    dataset = build_training_set(sessions, provider, window=config.window)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    lock = _lock_path(args.out)
    lock.write_text(str(os.getpid()), encoding="ascii")
    try:
        weights, history = train(dataset, config)
        save_weights(weights, out)
    finally:
        lock.unlink(missing_ok=True)
    if not args.quiet:
        first = history[0] if history else float("nan")
        last = history[-1] if history else float("nan")
        print(f"trained {config.epochs} epochs on {len(dataset)} samples: loss {first:.4f} -> {last:.4f}")
    print(f"wrote {out}")
    return 0


def _cmd_predict(args, settings) -> int:
    weights = load_weights(args.model)
    session = read_session(args.session)
    provider = _provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]})
    feats = encode_session(session, provider)
    preds = predict_session(feats, weights)
    text = "".join(
        f"task {rec.index} ce {p.ce!r} pt {p.pt!r}\n" for rec, p in zip(session.records, preds)
    )
    _emit(text, args.out)
    return 0


def _cmd_evaluate(args, settings) -> int:
    weights = load_weights(args.model)
    sessions = read_sessions_dir(args.data)
    provider = _provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]})
    reports, avg = evaluate_per_user(sessions, weights, provider)
    print(render_user_table(reports, avg))
    if args.tsv:
        write_report_tsv(args.tsv, report_rows(reports, avg))
        print(f"wrote {args.tsv}")
    return 0


def _cmd_ablate(args, settings) -> int:
    train_sessions = read_sessions_dir(args.train_data)
    test_sessions = read_sessions_dir(args.test_data)
    provider = _provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]})
    config = _train_config(args, settings)
    results = {}
    for group in ABLATION_GROUPS:
        _, avg, _ = run_ablation(
            train_sessions, test_sessions, config, group, provider, drop_slots=args.drop_slots
        )
        results[group] = avg
    print(render_ablation_table(results))
    if args.tsv:
        rows = [
            {"group": g, "r2_ce": r.r2_ce, "mse_ce": r.mse_ce, "r2_pt": r.r2_pt, "mse_pt": r.mse_pt}
            for g, r in results.items()
        ]
        write_report_tsv(args.tsv, rows)
        print(f"wrote {args.tsv}")
    return 0


def _cmd_simulate(args, settings) -> int:
    if args.users < 2:
        raise CliError("--users must be >= 2 (need at least one train and one test user)")
    taxonomy = _taxonomy(settings if args.taxonomy is None else {**settings, "taxonomy": args.taxonomy})
    law = PlantedLaw()
    if args.noise_pt is not None:
        law.noise_sd_pt = args.noise_pt
    if args.noise_ce is not None:
        law.noise_sd_ce = args.noise_ce
    if args.semantic_weight is not None:
        law.pt_per_semantic = args.semantic_weight
    n_test = max(1, args.users // 7)
    n_train = args.users - n_test
    train_sessions, test_sessions = generate_corpus(
        taxonomy,
        n_train_users=n_train,
        n_test_users=n_test,
        law=law,
        seed=settings["seed"],
        attempts=args.attempts,
        tasks_per_attempt=args.tasks_per_attempt,
    )
    write_corpus(args.out, train_sessions, test_sessions)
    total = sum(len(s.records) for s in train_sessions + test_sessions)
    print(f"wrote {n_train} train / {n_test} test users ({total} records) to {args.out}")
    return 0


def _cmd_serve(args, settings) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        model_dir=args.model_dir or settings["model_dir"],
        taxonomy=_taxonomy(settings if args.taxonomy is None else {**settings, "taxonomy": args.taxonomy}),
        provider=_provider({**settings, "embedding_table": args.embedding_table or settings["embedding_table"]}),
    )
    port = args.port if args.port is not None else settings["port"]
    uvicorn.run(app, host=args.host, port=int(port))
    return 0


_HANDLERS = {
    ("tasks", "sample"): _cmd_tasks_sample,
    ("ce", "compute"): _cmd_ce_compute,
    ("features", "encode"): _cmd_features_encode,
    ("train", None): _cmd_train,
    ("predict", None): _cmd_predict,
    ("evaluate", None): _cmd_evaluate,
    ("ablate", None): _cmd_ablate,
    ("simulate", None): _cmd_simulate,
    ("serve", None): _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliError("usage: a subcommand is required (see --help)")
        key = (args.command, getattr(args, "subcommand", None))
        handler = _HANDLERS.get(key)
        if handler is None:
            raise CliError(f"usage: {args.command} needs a subcommand (see --help)")
        settings = resolve_settings(args)
        return handler(args, settings)
    except CliError as e:
        print(f"menuperf: error: {e}", file=sys.stderr)
        return 2 if str(e).startswith("usage:") else 1
    except (TaxonomyError, SessionFormatError, ModelError, MetricError, ValueError) as e:
        print(f"menuperf: error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"menuperf: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
