"""Operator entry point: ingest, train, crossval, benchmark, recommend, serve."""
from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .corpus import (
    RoleLabel,
    RoleTable,
    filter_projects,
    load_path,
    load_project_meta,
    split_train_validation,
)
from .errors import RoleTriageError
from .evaluation import benchmark, cross_validate, curves_text, evaluate_holdout
from .models import (
    Hyperparameters,
    MODEL_KINDS,
    NEURAL_KINDS,
    load_model,
    save_model,
    train_model,
)
from .recommender import recommend_top_k
from .seeding import derive_seed


def _add_hyper_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epochs", type=int, help="training epochs (neural kinds and LR)")
    p.add_argument("--batch-size", type=int, help="mini-batch size")
    p.add_argument("--learning-rate", type=float, help="Adam learning rate")
    p.add_argument("--hidden-units", type=int, help="LSTM hidden state width")
    p.add_argument("--embedding-dim", type=int, help="embedding width when not pretrained")
    p.add_argument("--dropout", type=float, help="spatial dropout rate for the LSTM")
    p.add_argument("--patience", type=int, help="early-stopping patience in epochs")
    p.add_argument("--l2", type=float, help="L2 weight penalty for LR")
    p.add_argument("--trees", type=int, help="random-forest tree count")
    p.add_argument("--alpha", type=float, help="naive-Bayes Laplace smoothing")
    p.add_argument("--svc-c", type=float, help="SVC regularization constant C")
    p.add_argument("--max-vocab", type=int, help="vocabulary size cap")
    p.add_argument("--max-len", type=int, help="sequence length (default: fit to data)")


_HYPER_MAP = {
    "epochs": "epochs",
    "batch_size": "batch_size",
    "learning_rate": "learning_rate",
    "hidden_units": "hidden_units",
    "embedding_dim": "embedding_dim",
    "dropout": "dropout_rate",
    "patience": "early_stop_patience",
    "l2": "l2_lambda",
    "trees": "trees",
    "alpha": "laplace_alpha",
    "svc_c": "svc_c",
    "max_vocab": "vocab_max_size",
    "max_len": "max_len",
}


def _hyperparams(args: argparse.Namespace) -> Hyperparameters:
    overrides = {"seed": args.seed}
    for flag, field in _HYPER_MAP.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    return Hyperparameters(**overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roletriage",
        description="Role-based task triage: train, benchmark, and serve role recommenders.",
    )
    parser.add_argument("--version", action="version", version=f"roletriage {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a task CSV and print corpus statistics")
    p.add_argument("--data", required=True, help="task CSV file or directory of CSVs")
    p.add_argument("--meta", help="project metadata sidecar for selection filtering")
    p.add_argument("--role-map", help="JSON file overriding the built-in role mapping")
    p.add_argument("--seed", type=int, default=42, help="master random seed")

    p = sub.add_parser("train", help="fit one model kind and save the container")
    p.add_argument("--data", required=True, help="task CSV file or directory of CSVs")
    p.add_argument("--kind", required=True, choices=MODEL_KINDS, help="classifier family")
    p.add_argument("--out", required=True, help="output model container path")
    p.add_argument("--embeddings", help="word2vec-text pretrained vectors")
    p.add_argument("--holdout", type=float, metavar="FRACTION",
                   help="hold out 1-FRACTION of records and report validation accuracy")
    p.add_argument("--seed", type=int, default=42, help="master random seed")
    _add_hyper_flags(p)

    p = sub.add_parser("crossval", help="stratified K-fold cross-validation")
    p.add_argument("--data", required=True, help="task CSV file or directory of CSVs")
    p.add_argument("--kind", required=True, choices=MODEL_KINDS, help="classifier family")
    p.add_argument("--k", type=int, default=10, help="fold count (>= 2)")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--seed", type=int, default=42, help="master random seed")
    _add_hyper_flags(p)

    p = sub.add_parser("benchmark", help="train all kinds on one split and report")
    p.add_argument("--data", required=True, help="task CSV file or directory of CSVs")
    p.add_argument("--kinds", default=",".join(MODEL_KINDS),
                   help="comma-separated model kinds to run")
    p.add_argument("--embeddings", help="word2vec-text pretrained vectors")
    p.add_argument("--per-project", action="store_true",
                   help="append the accuracy-by-project breakdown")
    p.add_argument("--curves", metavar="DIR",
                   help="write per-epoch training curves for neural kinds here")
    p.add_argument("--out", help="write the tab-separated report to this file")
    p.add_argument("--json", dest="json_out", help="write the structured report to this file")
    p.add_argument("--train-fraction", type=float, default=0.67,
                   help="share of records used for training")
    p.add_argument("--seed", type=int, default=42, help="master random seed")
    _add_hyper_flags(p)

    p = sub.add_parser("recommend", help="one-shot recommendation from a saved model")
    p.add_argument("--model", required=True, help="model container path")
    p.add_argument("--title", required=True, help="incoming task title")
    p.add_argument("--project", required=True, help="target project id")
    p.add_argument("--roles", help="comma-separated role names overriding the project's set")
    p.add_argument("-k", "--top-k", type=int, default=3, help="alternatives to print")
    p.add_argument("--seed", type=int, default=42, help="master random seed")

    # flags fall back to ROLETRIAGE_* environment variables
    env = os.environ
    p = sub.add_parser("serve", help="start the recommendation HTTP service")
    p.add_argument("--registry", default=env.get("ROLETRIAGE_REGISTRY"),
                   required="ROLETRIAGE_REGISTRY" not in env,
                   help="model registry directory [env: ROLETRIAGE_REGISTRY]")
    p.add_argument("--feedback", default=env.get("ROLETRIAGE_FEEDBACK_LOG"),
                   required="ROLETRIAGE_FEEDBACK_LOG" not in env,
                   help="feedback NDJSON log path [env: ROLETRIAGE_FEEDBACK_LOG]")
    p.add_argument("--host", default=env.get("ROLETRIAGE_HOST", "127.0.0.1"),
                   help="listen address [env: ROLETRIAGE_HOST]")
    p.add_argument("--port", type=int, default=int(env.get("ROLETRIAGE_PORT", "8000")),
                   help="listen port [env: ROLETRIAGE_PORT]")
    p.add_argument("--default-k", type=int,
                   default=int(env.get("ROLETRIAGE_DEFAULT_K", "3")),
                   help="default alternatives count [env: ROLETRIAGE_DEFAULT_K]")
    p.add_argument("--seed", type=int, default=42, help="master random seed")

    return parser


def _cmd_ingest(args) -> int:
    table = RoleTable.from_json(args.role_map) if args.role_map else None
    corpus = load_path(args.data, table)
    print(f"records\t{len(corpus)}")
    print(f"projects\t{len(corpus.project_index)}")
    role_counts = Counter(r.label for r in corpus.roles())
    for role in RoleLabel:
        print(f"role:{role.label}\t{role_counts.get(role.label, 0)}")
    if args.meta:
        meta = load_project_meta(args.meta)
        kept = filter_projects(corpus, meta)
        print(f"projects_after_filter\t{len(kept.project_index)}")
        print(f"records_after_filter\t{len(kept)}")
    return 0


def _cmd_train(args) -> int:
    corpus = load_path(args.data)
    hp = _hyperparams(args)
    if args.holdout:
        train, valid = split_train_validation(
            corpus, args.holdout, derive_seed(args.seed, "train-holdout")
        )
        model = train_model(args.kind, train, hp, embeddings_path=args.embeddings)
        _, acc, _ = evaluate_holdout(model, valid)
        print(f"validation_accuracy\t{acc:.6f}")
    else:
        model = train_model(args.kind, corpus, hp, embeddings_path=args.embeddings)
    save_model(model, args.out)
    print(f"saved\t{args.out}")
    return 0


def _cmd_crossval(args) -> int:
    if args.k < 2:
        raise SystemExit2("--k must be >= 2")
    corpus = load_path(args.data)
    report = cross_validate(args.kind, corpus, args.k, [_hyperparams(args)], seed=args.seed)
    text = report.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_benchmark(args) -> int:
    corpus = load_path(args.data)
    kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    for kind in kinds:
        if kind not in MODEL_KINDS:
            raise SystemExit2(f"unknown kind {kind!r}")
    keep = {} if args.curves else None
    report = benchmark(
        corpus, kinds, embeddings_path=args.embeddings, seed=args.seed,
        train_fraction=args.train_fraction, hp=_hyperparams(args),
        per_project=args.per_project, keep_models=keep,
    )
    text = report.to_text()
    if args.per_project:
        text += report.per_project_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.json_out:
        Path(args.json_out).write_text(report.to_json(), encoding="utf-8")
    if args.curves:
        out_dir = Path(args.curves)
        out_dir.mkdir(parents=True, exist_ok=True)
        for (kind, pretrained), model in keep.items():
            if kind in NEURAL_KINDS:
                name = f"{kind}{'-pretrained' if pretrained else ''}.curves.tsv"
                (out_dir / name).write_text(curves_text(model), encoding="utf-8")
    return 0


def _cmd_recommend(args) -> int:
    model = load_model(args.model)
    if args.roles:
        roles = {RoleLabel.from_name(r.strip()) for r in args.roles.split(",")}
    else:
        names = model.project_roles.get(args.project)
        if names is None:
            print(f"note: project {args.project!r} unknown to the model; using all roles",
                  file=sys.stderr)
            roles = set(RoleLabel)
        else:
            roles = {RoleLabel.from_name(n) for n in names}
    rec = recommend_top_k(model, args.title, roles, args.top_k)
    print(f"chosen\t{rec.chosen.label}")
    print(f"fallback_applied\t{str(rec.fallback_applied).lower()}")
    for role, conf in rec.ranked:
        print(f"{role.label}\t{conf:.6f}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.registry, args.feedback, default_k=args.default_k)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


class SystemExit2(Exception):
    """Usage error discovered after parsing; exits with status 2."""


_COMMANDS = {
    "ingest": _cmd_ingest,
    "train": _cmd_train,
    "crossval": _cmd_crossval,
    "benchmark": _cmd_benchmark,
    "recommend": _cmd_recommend,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit2 as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (RoleTriageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
