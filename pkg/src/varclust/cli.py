"""Command-line interface.

Subcommands: ``cluster``, ``select``, ``simulate``, ``evaluate``, ``pesel``.
Results are JSON documents written to ``--out`` or standard output. Exit
codes: 0 success, 2 input error, 3 configuration error.
"""

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .datagen import MODES, SimConfig, generate
from .engine import INITS, EngineConfig, default_threads, run_multi, select_k
from .exceptions import ConfigError, InputError, TooManyClusters, VarclustError
from .assignment import VARIANTS
from .metrics import acontamination, adjusted_rand_index, integration
from .pesel import pesel_rank
from .segmentation import Segmentation

log = logging.getLogger("varclust")


def _add_ingest(p):
    p.add_argument("data", help="delimited text file, observations in rows")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", dest="header", action="store_false", help="first row holds data, not names")
    p.add_argument("--missing-threshold", type=float, default=0.5,
                   help="drop columns with a larger missing fraction (default 0.5)")
    p.add_argument("--no-center", dest="center", action="store_false")
    p.add_argument("--no-scale", dest="scale", action="store_false")


def _add_engine(p):
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--max-iter", type=int, default=30)
    p.add_argument("--variant", choices=VARIANTS, default="rss")
    p.add_argument("--flat-prior", action="store_true")
    p.add_argument("--init", choices=INITS, default="one_dimensional", help="initialisation of random restarts")
    p.add_argument("--init-file", help="segmentation sidecar or result document used as the first restart")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="parallel restarts (default: all cores but one)")
    p.add_argument("--labels-out", help="also write the segmentation sidecar here")


def _add_output(p):
    p.add_argument("--out", help="result document path (default: standard output)")
    p.add_argument("--runtime", action="store_true", help="record wall-clock runtime in the document")


def build_parser():
    parser = argparse.ArgumentParser(prog="varclust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--quiet", action="store_true", help="suppress progress logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster variables with a fixed number of clusters")
    _add_ingest(p)
    p.add_argument("--k", type=int, required=True)
    _add_engine(p)
    _add_output(p)

    p = sub.add_parser("select", help="choose the number of clusters by mBIC")
    _add_ingest(p)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=10)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--greedy", dest="greedy", action="store_true", default=True)
    g.add_argument("--full", dest="greedy", action="store_false")
    _add_engine(p)
    _add_output(p)

    p = sub.add_parser("simulate", help="write a synthetic dataset and its ground truth")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--snr", type=float, default=1.0)
    p.add_argument("--mode", choices=MODES, default="independent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)

    p = sub.add_parser("evaluate", help="compare a candidate segmentation with the truth")
    p.add_argument("truth")
    p.add_argument("candidate")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--out")

    p = sub.add_parser("pesel", help="PESEL rank profile of a whole matrix")
    _add_ingest(p)
    p.add_argument("--max-dim", type=int, default=10)
    p.add_argument("--out")
    return parser


def _emit(doc, out):
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ingest(args):
    opts = io.IngestOptions(args.delimiter, args.header, args.missing_threshold, args.center, args.scale)
    ingested = io.read_matrix(args.data, opts)
    if ingested.dropped_columns:
        log.info("dropped %d columns over the missing threshold", len(ingested.dropped_columns))
    return ingested


def _engine_config(args, custom_init=None, greedy=True):
    return EngineConfig(
        d_max=args.max_dim,
        runs=args.runs,
        max_iter=args.max_iter,
        variant=args.variant,
        flat_prior=args.flat_prior,
        greedy=greedy,
        seed=args.seed,
        init=args.init,
        custom_init=custom_init,
        threads=args.threads or default_threads(),
    )


def _config_echo(cfg):
    # threads is excluded: results do not depend on it
    return {
        "max_dim": cfg.d_max,
        "runs": cfg.runs,
        "max_iter": cfg.max_iter,
        "variant": cfg.variant,
        "flat_prior": cfg.flat_prior,
        "greedy": cfg.greedy,
        "init": cfg.init,
        "hot_start": cfg.custom_init is not None,
    }


def _load_init(path, names, delimiter):
    init_names, labels = io.read_segmentation(path, delimiter)
    order = io.align(init_names, names, source=str(path))
    return Segmentation.from_labels(np.asarray(labels)[order])


def fit_document(fit, names):
    labels = fit.segmentation.labels
    return {
        "segmentation": {
            "columns": list(names),
            "labels": labels.tolist(),
            "clusters": [[names[j] for j in fit.segmentation.members(i)] for i in range(fit.segmentation.K)],
        },
        "K": fit.segmentation.K,
        "dims": list(fit.dims),
        "mbic": fit.mbic,
        "mbic_trace": list(fit.mbic_trace),
        "iterations": fit.iterations,
        "converged": fit.converged,
        "stop_reason": fit.stop_reason,
        "run_index": fit.run_index,
        "seed_used": fit.seed_used,
    }


def _base_doc(command, args, ingested, cfg):
    return {
        "command": command,
        "input": {
            "file": str(args.data),
            "n": ingested.data.n,
            "p": ingested.data.p,
            "dropped_columns": list(ingested.dropped_columns),
            "imputed_cells": ingested.imputed_cells,
        },
        "config": _config_echo(cfg),
        "seed": args.seed,
    }


def cmd_cluster(args):
    start = time.perf_counter()
    ingested = _ingest(args)
    names = ingested.data.column_names
    if args.k < 1 or args.k > ingested.data.p:
        raise TooManyClusters(args.k, ingested.data.p)
    init = _load_init(args.init_file, names, args.delimiter) if args.init_file else None
    if init is not None and init.K != args.k:
        raise InputError(f"{args.init_file}: has {init.K} clusters, --k is {args.k}")
    cfg = _engine_config(args, init)
    fit = run_multi(ingested.data, args.k, cfg)
    doc = _base_doc("cluster", args, ingested, cfg)
    doc.update(fit_document(fit, names))
    if args.runtime:
        doc["runtime_seconds"] = time.perf_counter() - start
    if args.labels_out:
        io.write_segmentation(args.labels_out, names, fit.segmentation.labels, args.delimiter)
    _emit(doc, args.out)


def cmd_select(args):
    start = time.perf_counter()
    ingested = _ingest(args)
    names = ingested.data.column_names
    if args.k_min < 1 or args.k_min > args.k_max:
        raise ConfigError(f"need 1 <= k-min <= k-max, got {args.k_min}..{args.k_max}")
    if args.k_max > ingested.data.p:
        raise TooManyClusters(args.k_max, ingested.data.p)
    init = _load_init(args.init_file, names, args.delimiter) if args.init_file else None
    cfg = _engine_config(args, init, greedy=args.greedy)
    sel = select_k(ingested.data, range(args.k_min, args.k_max + 1), cfg)
    doc = _base_doc("select", args, ingested, cfg)
    doc["K_range"] = [args.k_min, args.k_max]
    doc["K_chosen"] = sel.K_chosen
    doc.update(fit_document(sel.best, names))
    doc["per_K"] = [
        {"K": K, "mbic": f.mbic, "dims": list(f.dims), "iterations": f.iterations, "converged": f.converged}
        for K, f in sorted(sel.per_K.items())
    ]
    if args.runtime:
        doc["runtime_seconds"] = time.perf_counter() - start
    if args.labels_out:
        io.write_segmentation(args.labels_out, names, sel.best.segmentation.labels, args.delimiter)
    _emit(doc, args.out)


def cmd_simulate(args):
    cfg = SimConfig(args.n, args.p, args.k, args.d, args.snr, args.mode, args.seed)
    ds = generate(cfg)
    prefix = args.out_prefix
    io.write_matrix(f"{prefix}.csv", ds.X)
    io.write_segmentation(f"{prefix}_truth.csv", ds.X.column_names, ds.truth.labels)
    meta = {
        "config": {"n": cfg.n, "p": cfg.p, "K": cfg.K, "d": cfg.d, "snr": cfg.snr, "mode": cfg.mode, "seed": cfg.seed},
        "dims": list(ds.true_dims),
        "segmentation": {"columns": list(ds.X.column_names), "labels": ds.truth.labels.tolist()},
    }
    Path(f"{prefix}_truth.json").write_text(io.dumps(meta))
    log.info("wrote %s.csv, %s_truth.csv and %s_truth.json", prefix, prefix, prefix)


def cmd_evaluate(args):
    t_names, t_labels = io.read_segmentation(args.truth, args.delimiter)
    c_names, c_labels = io.read_segmentation(args.candidate, args.delimiter)
    if len(t_names) < 2:
        raise InputError(f"{args.truth}: need at least two variables")
    order = io.align(c_names, t_names, source=str(args.candidate))
    truth = np.asarray(t_labels)
    cand = np.asarray(c_labels)[order]
    ints, int_mean, integrating = integration(truth, cand)
    aconts, acont_mean = acontamination(truth, cand)
    t_ids = np.unique(truth)
    c_ids = np.unique(cand)
    doc = {
        "command": "evaluate",
        "p": len(t_names),
        "ari": adjusted_rand_index(truth, cand),
        "integration": int_mean,
        "acontamination": acont_mean,
        "per_cluster": [
            {"truth_cluster": int(t), "integrating_cluster": int(c_ids[b]), "integration": float(i), "acontamination": float(a)}
            for t, b, i, a in zip(t_ids, integrating, ints, aconts)
        ],
    }
    _emit(doc, args.out)


def cmd_pesel(args):
    ingested = _ingest(args)
    if args.max_dim < 1:
        raise ConfigError("--max-dim must be >= 1")
    profile = pesel_rank(ingested.data, args.max_dim)
    doc = {
        "command": "pesel",
        "input": {"file": str(args.data), "n": ingested.data.n, "p": ingested.data.p,
                  "dropped_columns": list(ingested.dropped_columns)},
        "max_dim": args.max_dim,
        "regime": profile.regime,
        "scores": [float(s) for s in profile.scores],
        "chosen_k": profile.chosen_k,
    }
    _emit(doc, args.out)


COMMANDS = {
    "cluster": cmd_cluster,
    "select": cmd_select,
    "simulate": cmd_simulate,
    "evaluate": cmd_evaluate,
    "pesel": cmd_pesel,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        COMMANDS[args.command](args)
    except InputError as exc:
        print(f"varclust: input error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"varclust: configuration error: {exc}", file=sys.stderr)
        return 3
    except VarclustError as exc:
        print(f"varclust: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
