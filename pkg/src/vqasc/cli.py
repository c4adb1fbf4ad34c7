"""Command-line front end.

    vqasc generate --kind moons --n 128 --noise 0.05 --seed 0 --out moons.csv
    vqasc cluster  --config run.json --seed 0 --out result.json [--dump-statevector]
    vqasc express  --ids 1-19 --qubits 4 --layers 1 --mode both --seed 0 --out expr.csv
    vqasc oracle   --data moons.csv --gamma 10 --k 10 --out oracle.json
    vqasc catalog  [--qubits 7 --layers 7] [--format json]

Exit codes: 0 success, 1 pipeline error, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import xpress as xp
from .ansatz import AnsatzSpec, catalog, iter_ids, lookup, param_count
from .clustering import (DEFAULT_ANGLES, GRADIENT_MODES, DisconnectedGraphError, GraphConfig,
                         ObjectiveConfig, cluster, n_qubits_for)
from .datasets import atomic_write_text, generate, iris_binary, load_csv, save_csv
from .metrics import adjusted_rand_index, classical_fiedler, score

log = logging.getLogger("vqasc")

EXIT_OK, EXIT_PIPELINE, EXIT_CONFIG = 0, 1, 2

RUN_SCHEMA = {
    "type": "object",
    "required": ["dataset", "graph", "ansatz"],
    "additionalProperties": False,
    "properties": {
        "dataset": {"type": "string", "minLength": 1},
        "graph": {
            "type": "object",
            "required": ["gamma"],
            "additionalProperties": False,
            "properties": {
                "gamma": {"type": "number", "exclusiveMinimum": 0},
                "k": {"type": ["integer", "null"], "minimum": 1},
                "rescale": {"type": "boolean"},
                "pca_dims": {"type": ["integer", "null"], "minimum": 1},
            },
        },
        "ansatz": {
            "type": "object",
            "required": ["id"],
            "additionalProperties": False,
            "properties": {
                "id": {"type": "string"},
                "layers": {"type": "integer", "minimum": 1},
                "n_qubits": {"type": "integer", "minimum": 1},
            },
        },
        "objective": {
            "type": "object",
            "additionalProperties": False,
            "not": {"required": ["tau", "alpha"]},
            "properties": {
                "tau": {"type": "number", "minimum": 0},
                "alpha": {"type": "number", "exclusiveMinimum": 0},
                "max_itr": {"type": "integer", "minimum": 1},
                "convergence_tol": {"type": "number", "exclusiveMinimum": 0},
                "gradient_mode": {"enum": list(GRADIENT_MODES)},
                "restarts": {"type": "integer", "minimum": 1},
            },
        },
        "angles": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "diagnostics": {"type": "boolean"},
    },
}


class ConfigError(Exception):
    pass


def _field_path(err: jsonschema.ValidationError) -> str:
    path = "$"
    for part in err.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def validate_run_config(cfg) -> None:
    """Raise ConfigError listing every schema violation with its field path."""
    validator = jsonschema.Draft202012Validator(RUN_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{_field_path(e)}: {e.message}" for e in errors]
        raise ConfigError("invalid config:\n  " + "\n  ".join(lines))
    if lookup(cfg["ansatz"]["id"]) is None:
        raise ConfigError(f"$.ansatz.id: unknown ansatz id {cfg['ansatz']['id']!r}")


def load_run_config(path) -> dict:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    validate_run_config(cfg)
    data = Path(cfg["dataset"])
    if not data.is_absolute():
        cfg["dataset"] = str(path.parent / data)
    return cfg


def _write_json(path, doc):
    atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --- generate -----------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.kind == "iris":
        ds = iris_binary()
        if args.n is not None and args.n != len(ds):
            ds = ds.subsample(args.n, args.seed)
    else:
        kw = {"factor": args.factor} if args.factor is not None else {}
        ds = generate(args.kind, args.n or 128, args.noise, args.seed, **kw)
    save_csv(ds, args.out)
    print(f"wrote {len(ds)} points to {args.out}")
    return EXIT_OK


# --- cluster ------------------------------------------------------------------

def run_cluster(cfg: dict, seed: int, dump_statevector: bool = False) -> dict:
    """Execute one validated run config; returns the result document."""
    ds = load_csv(cfg["dataset"])
    n = n_qubits_for(len(ds))
    g = cfg["graph"]
    graph = GraphConfig(gamma=g["gamma"], k=g.get("k"), rescale=g.get("rescale", True),
                        pca_dims=g.get("pca_dims"))
    a = cfg["ansatz"]
    if a.get("n_qubits", n) != n:
        raise ConfigError(f"$.ansatz.n_qubits: {a['n_qubits']} does not match N={len(ds)}")
    spec = AnsatzSpec(a["id"], n, a.get("layers", 1))
    obj = ObjectiveConfig(seed=seed, **cfg.get("objective", {}))
    angles = cfg.get("angles", list(DEFAULT_ANGLES))
    diagnostics = dump_statevector or cfg.get("diagnostics", False)

    res = cluster(ds, graph, spec, obj, angles, diagnostics=diagnostics)
    L = graph.laplacian(ds.points)
    oracle = classical_fiedler(L)
    tr = res.trace
    doc = {
        "config": cfg,
        "seed": seed,
        "N": len(ds),
        "n_qubits": n,
        "n_params": param_count(spec),
        "labels": res.labels.tolist(),
        "signs": res.signs.tolist(),
        "chosen_lambda": res.chosen_lambda,
        "cut_value": res.cut_value,
        "cut_values": [[lam, w] for lam, w in res.cut_values.items()],
        "tau": tr.tau,
        "J_star": tr.J_star,
        "history": [list(map(float, row)) for row in tr.iterations],
        "converged": tr.converged,
        "optimizer_message": tr.message,
        "settling_fraction": res.settling_fraction,
        "settling_warning": res.settling_warning,
        "wall_time": res.wall_time,
        "oracle": {
            "fiedler_value": oracle.fiedler_value,
            "labels": oracle.labels.tolist(),
            "ari_vs_vqasc": adjusted_rand_index(res.labels, oracle.labels),
            "relative_gap": (tr.J_star - oracle.fiedler_value) / max(oracle.fiedler_value, 1e-300),
        },
    }
    if ds.labels is not None:
        doc["metrics"] = score(res.labels, ds.labels)
        doc["oracle"]["metrics"] = score(oracle.labels, ds.labels)
    if res.statevector_dump is not None and dump_statevector:
        psi = res.statevector_dump
        doc["statevector"] = [[j, float(z.real), float(z.imag), float(abs(z))]
                              for j, z in enumerate(psi)]
    return doc


def cmd_cluster(args) -> int:
    cfg = load_run_config(args.config)
    doc = run_cluster(cfg, args.seed, args.dump_statevector)
    _write_json(args.out, doc)
    if "statevector" in doc:
        side = Path(args.out).with_suffix(".statevector.csv")
        atomic_write_text(side, _csv_text(["index", "re", "im", "abs"], doc["statevector"]))
    m = doc.get("metrics")
    extra = f" acc={m['acc']:.3f} ari={m['ari']:.3f} nmi={m['nmi']:.3f}" if m else ""
    print(f"J*={doc['J_star']:.6g} cut={doc['cut_value']:.6g} "
          f"lambda={doc['chosen_lambda']:.4f}{extra} -> {args.out}")
    return EXIT_OK


# --- express ------------------------------------------------------------------

def parse_ids(text: str) -> list[str]:
    """Comma list of ids, numeric ranges (``1-19``) or group names."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if part in ("benchmark", "template", "all"):
            out.extend(iter_ids(part))
        elif "-" in part and all(p.isdigit() for p in part.split("-", 1)):
            lo, hi = map(int, part.split("-", 1))
            out.extend(str(i) for i in range(lo, hi + 1))
        elif part:
            out.append(part)
    for i in out:
        if lookup(i) is None:
            raise ConfigError(f"unknown circuit id {i!r}")
    return out


def cmd_express(args) -> int:
    ids = parse_ids(args.ids)
    modes = list(xp.MODES) if args.mode == "both" else [args.mode]
    out = Path(args.out)
    hist_dir = Path(args.hist_dir) if args.hist_dir else out.parent
    hist_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for cid in ids:
        spec = AnsatzSpec(cid, args.qubits, args.layers)
        for mode in modes:
            rep = xp.expressibility(spec, mode, args.samples, args.bins, args.seed)
            std = (xp.bootstrap_kl_std(rep.fidelities, args.qubits, args.bins, args.bootstrap,
                                       args.seed) if args.bootstrap > 0 else float("nan"))
            kl = rep.kl_value if rep.overflow else f"{rep.kl_value:.8g}"
            rows.append([cid, args.qubits, args.layers, param_count(spec), mode, kl,
                         "" if np.isnan(std) else f"{std:.3g}", rep.n_samples, args.seed])
            side = hist_dir / f"{out.stem}_{cid}_{mode}.csv"
            atomic_write_text(side, _csv_text(
                ["bin_lower", "bin_upper", "count", "empirical_prob", "haar_prob"],
                rep.histogram_rows(args.qubits)))
            print(f"#{cid:>4} {mode:5s} kl={kl}", flush=True)
    atomic_write_text(out, _csv_text(
        ["id", "n_qubits", "layers", "n_params", "mode", "kl_value", "kl_bootstrap_std",
         "n_samples", "seed"], rows))
    return EXIT_OK


# --- oracle -------------------------------------------------------------------

def cmd_oracle(args) -> int:
    ds = load_csv(args.data)
    graph = GraphConfig(gamma=args.gamma, k=args.k, rescale=not args.no_rescale)
    L = graph.laplacian(ds.points)
    res = classical_fiedler(L)
    doc = {"N": len(ds), "gamma": args.gamma, "k": args.k, "connected": L.connected}
    doc.update(res.to_dict())
    if not L.connected:
        doc["warning"] = "graph is disconnected: the zero eigenvalue is degenerate"
        log.warning("graph is disconnected; fiedler_value=%.3g", res.fiedler_value)
    if ds.labels is not None:
        doc["metrics"] = score(res.labels, ds.labels)
    _write_json(args.out, doc)
    print(f"lambda2={res.fiedler_value:.8g} connected={L.connected} -> {args.out}")
    return EXIT_OK


# --- catalog ------------------------------------------------------------------

def cmd_catalog(args) -> int:
    rows = []
    for e in catalog():
        row = {"id": e.id, "formula": e.formula, "min_qubits": e.min_qubits, "source": e.source}
        if args.qubits is not None and args.qubits >= e.min_qubits:
            row["n_params"] = e.param_count(args.qubits, args.layers)
        rows.append(row)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            p = f"{r['n_params']:>5}" if "n_params" in r else "    -"
            print(f"{r['id']:>5}  {r['formula']:<12} {p}  {r['source']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vqasc", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a two-cluster dataset as CSV")
    g.add_argument("--kind", required=True, choices=["blobs", "moons", "circles", "iris"])
    g.add_argument("--n", type=int, default=None, help="points (default 128; iris: all 150)")
    g.add_argument("--noise", type=float, default=0.05)
    g.add_argument("--factor", type=float, default=None, help="circles: inner/outer radius")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("cluster", help="run the variational clustering pipeline")
    c.add_argument("--config", required=True, help="JSON run config")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--dump-statevector", action="store_true",
                   help="add the (index, re, im, abs) amplitude table")
    c.set_defaults(func=cmd_cluster)

    e = sub.add_parser("express", help="expressibility sweep over catalog circuits")
    e.add_argument("--ids", required=True, help="e.g. 1-19, 23,25, benchmark, template")
    e.add_argument("--qubits", type=int, required=True)
    e.add_argument("--layers", type=int, default=1)
    e.add_argument("--mode", choices=["raw", "phase", "both"], default="both")
    e.add_argument("--samples", type=int, default=xp.DEFAULT_SAMPLES)
    e.add_argument("--bins", type=int, default=xp.DEFAULT_BINS)
    e.add_argument("--bootstrap", type=int, default=100, help="resamples for the KL std (0 = off)")
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--hist-dir", default=None, help="histogram CSV directory (default: next to --out)")
    e.set_defaults(func=cmd_express)

    o = sub.add_parser("oracle", help="classical Fiedler partition of a dataset")
    o.add_argument("--data", required=True)
    o.add_argument("--gamma", type=float, required=True)
    o.add_argument("--k", type=int, default=None)
    o.add_argument("--no-rescale", action="store_true")
    o.add_argument("--out", required=True)
    o.set_defaults(func=cmd_oracle)

    k = sub.add_parser("catalog", help="list ansatz circuits")
    k.add_argument("--qubits", type=int, default=None)
    k.add_argument("--layers", type=int, default=1)
    k.add_argument("--format", choices=["table", "json"], default="table")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DisconnectedGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
