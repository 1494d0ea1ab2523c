"""Command-line front end.

Exit codes: 0 success, 1 verification/assertion failure, 2 usage error,
3 I/O error.

Schedule strings are comma lists of layer tokens:
    ego              ego layer, p=1, normalized
    ego:p=2          ego layer with scale p
    ego:p=1(raw)     unnormalized ego layer
    gcn              propagation-only GCN layer (normalized, no weights)
    gcn:unnormalized propagation-only (A+I) layer
    gcn:64           weighted GCN layer, 64 hidden units
    gcn:out          weighted readout layer (width = number of classes)
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from .expressiveness import (triangle_oracle, triangles_at, triangles_total,
                             graph_signature, ego_distinguish, wl_distinguish,
                             wl_signature)
from .graph import GraphFormatError, ego_members, load_graph
from .propagation import EgoLayerConfig, GcnLayerConfig
from .sbm import (DEFAULT_BLOCKS, DEFAULT_DEPTH, DEFAULT_P_INTER_GRID,
                  DEFAULT_P_INTRA, DEFAULT_SEEDS, oversmoothing_sweep,
                  stratified_split, sweep_to_csv_rows)
from .spectral import check_interlacing, supra_spectrum, sym_eigenvalues
from .training import TrainConfig, save_params, train
from .verify import run_equivalence_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(ValueError):
    pass


def parse_schedule(text, n_classes=None):
    layers = []
    for token in text.split(","):
        token = token.strip()
        m = re.fullmatch(r"ego(?::p=(\d+))?(?:\((raw|norm)\))?", token)
        if m:
            p = int(m.group(1)) if m.group(1) else 1
            layers.append(EgoLayerConfig(p=p, normalized=m.group(2) != "raw"))
            continue
        m = re.fullmatch(r"gcn(?::(\d+|out|unnormalized))?", token)
        if m:
            arg = m.group(1)
            if arg is None:
                layers.append(GcnLayerConfig(normalized=True))
            elif arg == "unnormalized":
                layers.append(GcnLayerConfig(normalized=False))
            elif arg == "out":
                if n_classes is None:
                    raise UsageError("'gcn:out' needs labeled data to size the readout")
                layers.append(GcnLayerConfig(normalized=True, out_dim=n_classes))
            else:
                layers.append(GcnLayerConfig(normalized=True, out_dim=int(arg)))
            continue
        raise UsageError(f"cannot parse schedule token {token!r}")
    if not layers:
        raise UsageError("schedule is empty")
    return layers


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_verify(args):
    report = run_equivalence_suite(sizes=tuple(args.sizes),
                                   n_seeds=args.seeds)
    _emit(json.dumps(report, indent=2), args.output)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_distinguish(args):
    g1, g2 = load_graph(args.graph1), load_graph(args.graph2)
    schedule = parse_schedule(args.schedule)
    s1 = graph_signature(g1, schedule).value
    s2 = graph_signature(g2, schedule).value
    doc = {"wl": wl_distinguish(g1, g2),
           "ego": ego_distinguish(g1, g2, schedule),
           "sig1": s1.tolist(), "sig2": s2.tolist()}
    _emit(json.dumps(doc), args.output)
    return EXIT_OK


def cmd_wl_test(args):
    g1, g2 = load_graph(args.graph1), load_graph(args.graph2)
    sig1, sig2 = wl_signature(g1, g2)
    doc = {"distinguished": wl_distinguish(g1, g2),
           "signature_g1": sig1, "signature_g2": sig2}
    _emit(json.dumps(doc), args.output)
    return EXIT_OK


def cmd_triangles(args):
    g = load_graph(args.graph)
    per_node = [triangles_at(g, i) for i in range(g.n)]
    doc = {"per_node": per_node, "total": triangles_total(g)}
    if args.check_oracle and triangle_oracle(g) != doc["total"]:
        return EXIT_FAIL
    _emit(json.dumps(doc), args.output)
    return EXIT_OK


def cmd_spectra(args):
    g = load_graph(args.graph)
    rows = ["matrix,index,eigenvalue"]
    base = sym_eigenvalues(g.adjacency)
    rows += [f"base,{i},{v:.17g}" for i, v in enumerate(base.eigenvalues)]
    ok = True
    if args.node is not None:
        res = check_interlacing(g, args.node)
        ok = res.ok
        rows += [f"ego_submatrix,{i},{v:.17g}"
                 for i, v in enumerate(res.sub.eigenvalues)]
    if args.supra:
        sup = supra_spectrum(g)
        rows += [f"supra,{i},{v:.17g}" for i, v in enumerate(sup.eigenvalues)]
    _emit("\n".join(rows), args.output)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sbm_sweep(args):
    grid = (DEFAULT_P_INTER_GRID if args.p_inter_grid is None
            else tuple(float(x) for x in args.p_inter_grid.split(",")))
    blocks = (DEFAULT_BLOCKS if args.blocks is None
              else tuple(int(x) for x in args.blocks.split(",")))
    seeds = tuple(range(args.n_seeds)) if args.n_seeds else DEFAULT_SEEDS
    result = oversmoothing_sweep(block_sizes=blocks, p_intra=args.p_intra,
                                 p_inter_grid=grid,
                                 models=tuple(args.models.split(",")),
                                 depth=args.depth, seeds=seeds,
                                 hidden=args.hidden)
    _emit("\n".join(sweep_to_csv_rows(result)), args.output)
    return EXIT_OK


def cmd_train(args):
    g = load_graph(args.graph)
    if g.labels is None:
        raise UsageError("training requires a graph file with labels")
    if g.features is None:
        raise UsageError("training requires a graph file with features")
    n_classes = int(g.labels.max()) + 1
    schedule = parse_schedule(args.schedule, n_classes=n_classes)
    cfg = TrainConfig(learning_rate=args.lr, epochs=args.epochs,
                      weight_decay=args.weight_decay, seed=args.seed,
                      patience=args.patience)
    splits = stratified_split(g.labels, args.seed)
    params, report = train(g, g.features, g.labels, splits, schedule, cfg)
    if args.params_out:
        save_params(args.params_out, schedule, params, cfg)
    doc = {"test_accuracy": report.test_accuracy,
           "epochs_run": report.epochs_run,
           "final_train_loss": report.train_loss[-1]}
    _emit(json.dumps(doc), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="egognn",
        description="Ego-graph message passing: verification, expressiveness "
                    "tests, spectra, and synthetic experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the three-formulation equivalence suite")
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    p.add_argument("--seeds", type=int, default=20, help="seeds per grid cell")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distinguish", help="WL and Ego-GNN verdicts for two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--schedule", default="ego:p=1(raw),gcn:unnormalized")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("wl-test", help="1-WL comparison of two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_wl_test)

    p = sub.add_parser("triangles", help="per-node and total triangle counts")
    p.add_argument("--graph", required=True)
    p.add_argument("--check-oracle", action="store_true",
                   help="cross-check against brute-force enumeration")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_triangles)

    p = sub.add_parser("spectra", help="base/ego/supra spectra as CSV")
    p.add_argument("--graph", required=True)
    p.add_argument("--node", type=int, default=None,
                   help="also emit the ego submatrix spectrum and check interlacing")
    p.add_argument("--supra", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("sbm-sweep", help="over-smoothing sweep, CSV output")
    p.add_argument("--defaults", action="store_true",
                   help="run the default grid (equivalent to no overrides)")
    p.add_argument("--blocks", default=None, help="comma list, e.g. 100,100,100")
    p.add_argument("--p-intra", type=float, default=DEFAULT_P_INTRA)
    p.add_argument("--p-inter-grid", default=None, help="comma list of probabilities")
    p.add_argument("--models", default="gcn,ego_gnn")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--n-seeds", type=int, default=None)
    p.add_argument("--hidden", type=int, default=16)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sbm_sweep)

    p = sub.add_parser("train", help="train an interleaved classifier")
    p.add_argument("--graph", required=True)
    p.add_argument("--schedule", default="ego,gcn:16,ego,gcn:out")
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--weight-decay", type=float, default=5e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=30)
    p.add_argument("--params-out", default=None, help="persist weights as JSON")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_train)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
