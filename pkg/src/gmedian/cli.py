"""Command-line interface.

Subcommands: ``ged`` (distance between two graph files), ``set-median``,
``median`` (median of a collection, written in the native format),
``sod-table`` and ``classify`` (experiment reports). Exit codes: 0 success,
1 usage or configuration error, 2 data error. ``GMG_LOG`` sets the log
level (e.g. ``info``, ``debug``); configuration precedence is flags over
``--config`` file over defaults, and ``--dump-config`` prints the resolved
configuration as JSON without running.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import os
import sys
from pathlib import Path

from .costs import make_cost_model
from .datasets import (
    DatasetError,
    ModeHints,
    load_collection,
    load_graph,
    parse_gxl,
    save_graph,
)
from .graphs import LABEL, NO_EDGE_ATTRS, VECTOR, GraphError
from .harness import ExperimentConfig, run_classification, run_sod_experiment
from .median import DescentConfig, compute_median, set_median
from .solvers import METHODS, GedSolverConfig, solve_ged

__all__ = ["main"]

DEFAULTS = {
    "cost": {"c_vs": 1.0, "c_es": 1.0, "c_vr": 3.0, "c_vi": 3.0, "c_er": 3.0, "c_ei": 3.0},
    "ged": {
        "method": "mipfp",
        "phase1": "mbipartite",
        "phase2": "mipfp",
        "multistart": 40,
        "seed": 0,
        "ipfp_max_iters": 50,
        "ipfp_tol": 1e-6,
        "exact_cap": 8,
    },
    "data": {"node_kind": None, "node_attrs": None, "edge_kind": None, "edge_attr": None},
    "run": {
        "sample": 10.0,
        "repeats": 1,
        "threads": 1,
        "max_iters": 100,
        "out": None,
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(message)


def _parse_cost_spec(spec: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"bad --cost item {item!r}, expected name=value")
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in DEFAULTS["cost"]:
            raise UsageError(f"unknown cost constant {name!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"bad value for cost constant {name!r}: {value!r}")
    return out


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file")
    parser.add_argument("--dump-config", action="store_true", help="print resolved config and exit")
    parser.add_argument("--cost", metavar="SPEC", help="comma list, e.g. c_vs=1,c_vr=3")
    parser.add_argument("--phase1", choices=METHODS, help="solver for set-median search")
    parser.add_argument("--phase2", choices=METHODS, help="solver for refinement and distances")
    parser.add_argument("--multistart", type=int, metavar="N", help="random starts per solve")
    parser.add_argument("--seed", type=int, metavar="N", help="base random seed")
    parser.add_argument("--threads", type=int, metavar="N", help="worker threads")
    parser.add_argument("--sample", type=float, metavar="X", help="per-class count (>=1) or fraction (<1)")
    parser.add_argument("--repeats", type=int, metavar="N", help="experiment repetitions")
    parser.add_argument("--out", metavar="PATH", help="output file")
    parser.add_argument("--max-iters", type=int, metavar="N", help="descent iteration cap")
    parser.add_argument("--node-kind", choices=[LABEL, VECTOR], help="vertex attribute kind")
    parser.add_argument("--node-attrs", metavar="NAMES", help="comma list of GXL attr names")
    parser.add_argument("--edge-kind", choices=[LABEL, NO_EDGE_ATTRS], help="edge attribute kind")
    parser.add_argument("--edge-attr", metavar="NAME", help="GXL edge label attr name")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmedian", description="Median graphs under edit distance")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ged", help="edit distance between two graph files")
    p.add_argument("graph", help="source graph (.gxl or .gmg)")
    p.add_argument("graph2", help="target graph (.gxl or .gmg)")
    p.add_argument("--method", choices=METHODS, help="solver (default: ged.method)")
    _add_common(p)

    for name, help_text in (
        ("set-median", "collection member with the smallest distance sum"),
        ("median", "full median search over a collection"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dataset", required=True, metavar="INDEX", help="collection index file")
        _add_common(p)

    for name, help_text in (
        ("sod-table", "per-class set-median vs median distance sums"),
        ("classify", "nearest-prototype and 1-NN accuracy"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dataset", required=True, metavar="INDEX", help="collection index file")
        _add_common(p)
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    config = copy.deepcopy(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise DatasetError(f"cannot read config file {args.config}: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad JSON in config file {args.config}: {exc}")
        for section, values in loaded.items():
            if section not in config:
                raise UsageError(f"unknown config section {section!r}")
            if not isinstance(values, dict):
                raise UsageError(f"config section {section!r} must be an object")
            for key, value in values.items():
                if key not in config[section]:
                    raise UsageError(f"unknown config key {section}.{key}")
                config[section][key] = value
    if args.cost:
        config["cost"].update(_parse_cost_spec(args.cost))
    flag_map = {
        ("ged", "phase1"): args.phase1,
        ("ged", "phase2"): args.phase2,
        ("ged", "multistart"): args.multistart,
        ("ged", "seed"): args.seed,
        ("data", "node_kind"): args.node_kind,
        ("data", "node_attrs"): args.node_attrs.split(",") if args.node_attrs else None,
        ("data", "edge_kind"): args.edge_kind,
        ("data", "edge_attr"): args.edge_attr,
        ("run", "sample"): args.sample,
        ("run", "repeats"): args.repeats,
        ("run", "threads"): args.threads,
        ("run", "max_iters"): args.max_iters,
        ("run", "out"): args.out,
    }
    if getattr(args, "method", None):
        config["ged"]["method"] = args.method
    for (section, key), value in flag_map.items():
        if value is not None:
            config[section][key] = value
    return config


def _solver_config(config: dict, method: str) -> GedSolverConfig:
    ged = config["ged"]
    return GedSolverConfig(
        method=method,
        multistart_count=int(ged["multistart"]),
        ipfp_max_iters=int(ged["ipfp_max_iters"]),
        ipfp_tol=float(ged["ipfp_tol"]),
        rng_seed=int(ged["seed"]),
        exact_order_cap=int(ged["exact_cap"]),
    )


def _descent_config(config: dict) -> DescentConfig:
    return DescentConfig(
        ged_phase1=_solver_config(config, config["ged"]["phase1"]),
        ged_phase2=_solver_config(config, config["ged"]["phase2"]),
        max_iters=int(config["run"]["max_iters"]),
        threads=int(config["run"]["threads"]),
    )


def _hints(config: dict) -> ModeHints | None:
    data = config["data"]
    if all(v is None for v in data.values()):
        return None
    return ModeHints(data["node_kind"], data["node_attrs"], data["edge_kind"], data["edge_attr"])


def _model_for(config: dict, vertex_mode: str, edge_mode: str):
    cost = config["cost"]
    return make_cost_model(
        vertex_mode,
        edge_mode,
        c_vs=cost["c_vs"],
        c_es=cost["c_es"],
        c_vr=cost["c_vr"],
        c_vi=cost["c_vi"],
        c_er=cost["c_er"],
        c_ei=cost["c_ei"],
    )


def _read_graph_file(path: str, config: dict):
    suffix = Path(path).suffix.lower()
    if suffix == ".gmg":
        return load_graph(path)
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise DatasetError(f"cannot read graph file {path}: {exc}")
    return parse_gxl(data, _hints(config), graph_id=Path(path).stem)


def _format_forward(t) -> str:
    parts = []
    for i in range(t.source_order):
        v = t.forward[i]
        parts.append(f"{i}->{'x' if v >= t.target_order else int(v)}")
    return " ".join(parts) if parts else "(empty)"


def _cmd_ged(args: argparse.Namespace, config: dict) -> int:
    g = _read_graph_file(args.graph, config)
    g2 = _read_graph_file(args.graph2, config)
    model = _model_for(config, g.vertex_mode, g.edge_mode)
    result = solve_ged(model, g, g2, _solver_config(config, config["ged"]["method"]))
    print(f"cost {result.cost:.12g}")
    print(f"exact {'yes' if result.is_exact else 'no'}")
    print(f"map {_format_forward(result.transformation)}")
    return 0


def _load_dataset(args: argparse.Namespace, config: dict):
    dataset = load_collection(args.dataset, _hints(config))
    model = _model_for(config, dataset.vertex_mode, dataset.edge_mode)
    return dataset, model


def _cmd_set_median(args: argparse.Namespace, config: dict) -> int:
    dataset, model = _load_dataset(args, config)
    descent = _descent_config(config)
    result = set_median(model, dataset.graphs, descent.ged_phase1, threads=descent.threads)
    print(f"set-median index {result.index}")
    print(f"sod {result.sod:.12g}")
    out = config["run"]["out"] or "set_median.gmg"
    save_graph(dataset.graphs[result.index], out)
    print(f"wrote {out}")
    return 0


def _cmd_median(args: argparse.Namespace, config: dict) -> int:
    dataset, model = _load_dataset(args, config)
    result = compute_median(model, dataset.graphs, _descent_config(config))
    for rec in result.trace:
        print(f"iter {rec.iteration} sod {rec.sod_upper:.12g} changed {rec.changed}")
    print(f"converged {'yes' if result.converged else 'no'} iterations {result.iterations}")
    out = config["run"]["out"] or "median.gmg"
    save_graph(result.median, out)
    print(f"wrote {out}")
    print(f"sod {result.sod:.12g}")
    return 0


def _cmd_sod_table(args: argparse.Namespace, config: dict) -> int:
    dataset, model = _load_dataset(args, config)
    exp = ExperimentConfig(
        model=model,
        descent=_descent_config(config),
        per_class_sample=float(config["run"]["sample"]),
        repeats=int(config["run"]["repeats"]),
        rng_seed=int(config["ged"]["seed"]),
    )
    report = run_sod_experiment(dataset, exp)
    print(report.to_table())
    if config["run"]["out"]:
        Path(config["run"]["out"]).write_text(report.to_csv())
        print(f"wrote {config['run']['out']}")
    return 0


def _cmd_classify(args: argparse.Namespace, config: dict) -> int:
    dataset, model = _load_dataset(args, config)
    exp = ExperimentConfig(
        model=model,
        descent=_descent_config(config),
        per_class_sample=float(config["run"]["sample"]),
        repeats=int(config["run"]["repeats"]),
        rng_seed=int(config["ged"]["seed"]),
    )
    report = run_classification(dataset, exp)
    print(report.to_table())
    if config["run"]["out"]:
        Path(config["run"]["out"]).write_text(report.to_csv())
        print(f"wrote {config['run']['out']}")
    return 0


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("GMG_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        config = _resolve_config(args)
        if args.dump_config:
            print(json.dumps(config, indent=2, sort_keys=True))
            return 0
        if args.command == "ged":
            return _cmd_ged(args, config)
        if args.command == "set-median":
            return _cmd_set_median(args, config)
        if args.command == "median":
            return _cmd_median(args, config)
        if args.command == "sod-table":
            return _cmd_sod_table(args, config)
        if args.command == "classify":
            return _cmd_classify(args, config)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DatasetError, GraphError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
