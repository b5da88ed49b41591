"""Command-line entry point for learning, sampling, scoring, comparing,
and the small-graph census verifier.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_mod
from . import data as data_mod
from .evaluation import evaluate, hamming
from .graph import GraphError
from .scoring import Scorer, kl_fit_term
from .search import (dag_greedy_search, dag_tabu_search, greedy_search,
                     tabu_search)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check_output_path(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise UsageError(f"output directory does not exist: {parent}")


def _print_table(record):
    keys = list(record)
    widths = [max(len(k), len(_fmt(record[k]))) for k in keys]
    print("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
    print("  ".join(_fmt(record[k]).ljust(w) for k, w in zip(keys, widths)))


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.5f}"
    return str(v)


def cmd_learn(args):
    _check_output_path(args.out)
    if args.report:
        _check_output_path(args.report)
    dataset = data_mod.load_csv(args.data, args.missing_token)
    scorer = Scorer(dataset, args.score, args.ess, args.prior)
    start = None
    if args.start:
        start = data_mod.load_network(args.start).structure
    tll = dataset.n if args.tabu_len is None else args.tabu_len
    tsit = dataset.n * (dataset.n - 1) if args.tabu_iters is None \
        else args.tabu_iters
    if args.space == "rpdag":
        if args.strategy == "greedy":
            graph, report = greedy_search(dataset, scorer, start=start)
        else:
            graph, report = tabu_search(dataset, scorer, tll, tsit,
                                        start=start)
    else:
        if args.strategy == "greedy":
            graph, report = dag_greedy_search(dataset, scorer, start=start)
        else:
            graph, report = dag_tabu_search(dataset, scorer, tll, tsit,
                                            start=start)

    net = data_mod.BayesNet(dataset.variable_names, dataset.cardinalities,
                            graph, None, dataset.state_labels)
    data_mod.save_network(net, args.out)

    h = graph if graph.is_dag() else graph.extend()
    record = {
        "BDeu": Scorer(dataset, "bdeu", args.ess, args.prior).score_dag(h),
        "BIC": Scorer(dataset, "bic").score_dag(h),
        "KL": kl_fit_term(h, dataset),
        "Edg": graph.edge_count(),
        "Iter": report.iterations_applied,
        "BIter": report.best_iteration,
        "Ind": report.individuals_evaluated,
        "EstEv": report.evaluated,
        "TEst": report.requested,
        "NVars": report.nvars,
        "Time": report.wall_time_seconds,
    }
    if args.gold:
        gold = data_mod.load_network(args.gold).structure
        breakdown = hamming(graph, gold)
        record.update(H=breakdown.total, A=breakdown.added,
                      D=breakdown.deleted, I=breakdown.inverted)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2)
            fh.write("\n")
    _print_table(record)
    return EXIT_OK


def cmd_sample(args):
    _check_output_path(args.out)
    net = data_mod.load_network(args.net)
    dataset = data_mod.sample(net, args.n, args.seed)
    data_mod.save_csv(dataset, args.out)
    print(f"wrote {dataset.m} rows over {dataset.n} variables to {args.out}")
    return EXIT_OK


def cmd_score(args):
    net = data_mod.load_network(args.net)
    dataset = data_mod.load_csv(args.data, args.missing_token)
    if dataset.variable_names != net.variable_names:
        raise data_mod.DataError("network and dataset variables differ")
    record = evaluate(net.structure, dataset, ess=args.ess, prior=args.prior)
    _print_table({"BDeu": record["bdeu_train"], "BIC": record["bic_train"],
                  "KL": record["kl_train"], "Edg": record["edges"]})
    return EXIT_OK


def cmd_compare(args):
    learned = data_mod.load_network(args.net).structure
    gold = data_mod.load_network(args.gold).structure
    breakdown = hamming(learned, gold)
    _print_table({"H": breakdown.total, "A": breakdown.added,
                  "D": breakdown.deleted, "I": breakdown.inverted})
    return EXIT_OK


def cmd_census(args):
    if args.n < 1 or args.n > census_mod.MAX_CENSUS_NODES:
        raise UsageError(
            f"census supports 1 <= n <= {census_mod.MAX_CENSUS_NODES}")
    result = census_mod.census(args.n)
    verified = True
    if args.n <= 4:
        for key, dags in census_mod.group_by_rpdag_key(args.n).items():
            rep = dags[0].reduce_to_rpdag()
            if not rep.is_rpdag():
                verified = False
            if rep.count_extensions() != len(dags):
                verified = False
            if any(h.reduce_to_rpdag() != rep for h in dags[1:]):
                verified = False
    _print_table({"n": result.node_count, "DAGs": result.dag_count,
                  "classes": result.class_count,
                  "rpdag_keys": result.rpdag_key_count,
                  "partition_verified": "yes" if args.n <= 4 and verified
                  else ("no" if args.n <= 4 else "skipped")})
    if args.n <= 4 and not verified:
        raise GraphError("partition properties violated")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="rpdaglearn",
                     description="Bayesian network structure learning in "
                                 "the space of restricted PDAGs")
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="learn a structure from a CSV")
    learn.add_argument("--data", required=True)
    learn.add_argument("--out", required=True)
    learn.add_argument("--report", default=None)
    learn.add_argument("--gold", default=None)
    learn.add_argument("--space", choices=("rpdag", "dag"), default="rpdag")
    learn.add_argument("--strategy", choices=("greedy", "tabu"),
                       default="greedy")
    learn.add_argument("--score", choices=("bdeu", "bic"), default="bdeu")
    learn.add_argument("--ess", type=float, default=1.0)
    learn.add_argument("--prior", choices=("uniform", "param-penalty"),
                       default="uniform")
    learn.add_argument("--tabu-len", type=int, default=None)
    learn.add_argument("--tabu-iters", type=int, default=None)
    learn.add_argument("--seed", type=int, default=0)
    learn.add_argument("--missing-token", default="?")
    learn.add_argument("--start", default=None)
    learn.set_defaults(func=cmd_learn)

    smp = sub.add_parser("sample", help="sample a CSV from a network file")
    smp.add_argument("--net", required=True)
    smp.add_argument("--n", type=int, required=True)
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--out", required=True)
    smp.set_defaults(func=cmd_sample)

    sc = sub.add_parser("score", help="score a structure against a dataset")
    sc.add_argument("--net", required=True)
    sc.add_argument("--data", required=True)
    sc.add_argument("--ess", type=float, default=1.0)
    sc.add_argument("--prior", choices=("uniform", "param-penalty"),
                    default="uniform")
    sc.add_argument("--missing-token", default="?")
    sc.set_defaults(func=cmd_score)

    cmp_ = sub.add_parser("compare", help="Hamming distance against a gold "
                                          "network")
    cmp_.add_argument("--net", required=True)
    cmp_.add_argument("--gold", required=True)
    cmp_.set_defaults(func=cmd_compare)

    cen = sub.add_parser("census", help="enumerate small DAGs and verify "
                                        "the equivalence partition")
    cen.add_argument("--n", type=int, required=True)
    cen.set_defaults(func=cmd_census)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (data_mod.DataError, FileNotFoundError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GraphError, ValueError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
