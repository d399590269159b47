"""Command-line entry point: ``smallfrac <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .runner import EXIT_USAGE, ExperimentSpec, run


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--threads", type=int, default=1, help="worker processes")
    g.add_argument("--precision", type=int, default=None, help="angle precision in bits")
    g.add_argument("--budget", type=int, default=None, help="override the evaluation budget")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--eps", default=None, help="epsilon, as a decimal or a/b")
    g.add_argument("--out", default=None, help="write output to this file (atomically)")
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=["json", "csv", "table"], default=None)
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    fmt.add_argument("--table", dest="format", action="store_const", const="table")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="smallfrac", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("weyl", parents=[common], help="evaluate a Weyl sum")
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--coeffs", required=True, help="alpha_1,...,alpha_k")
    w.add_argument("--n", type=int, required=True)

    m = sub.add_parser("meanvalue", parents=[common], help="count Vinogradov solutions")
    m.add_argument("--s", required=True, help="value or range, e.g. 1..3")
    m.add_argument("--k", required=True)
    m.add_argument("--nmax", type=int, required=True)
    m.add_argument("--nmin", type=int, default=1)

    e = sub.add_parser("exponents", parents=[common], help="exponent comparison tables")
    e.add_argument("--k", required=True)
    e.add_argument("--problem", choices=["i", "ii", "iii"], default=None)
    e.add_argument("--s", default=None)
    e.add_argument("--B", type=float, default=None, help="constant B of the log-type exponent")
    e.add_argument("--C", type=float, default=None, help="constant C of the monomial prior")

    mn = sub.add_parser("minimize", help="exhaustive minimisation")
    msub = mn.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    mp = msub.add_parser("poly", parents=[common])
    mp.add_argument("--k", type=int, required=True)
    mp.add_argument("--coeffs", required=True)
    mp.add_argument("--n", type=int, required=True)
    mf = msub.add_parser("form", parents=[common])
    mf.add_argument("--k", type=int, required=True)
    mf.add_argument("--betas", required=True)
    mf.add_argument("--s", type=int, default=None)
    mf.add_argument("--n", type=int, required=True)

    pl = sub.add_parser("pipeline", help="constructive pipelines")
    psub = pl.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    pq = psub.add_parser("qm", parents=[common])
    pq.add_argument("--k", type=int, required=True)
    pq.add_argument("--coeffs", required=True)
    pq.add_argument("--n", type=int, required=True)
    pq.add_argument("--strict", action="store_true")
    pt = psub.add_parser("twostep", parents=[common])
    pt.add_argument("--k", type=int, required=True)
    pt.add_argument("--alpha-k", dest="alpha_k", required=True)
    pt.add_argument("--alpha-1", dest="alpha_1", required=True)
    pt.add_argument("--n", type=int, required=True)
    pt.add_argument("--nu", default=None)

    r = sub.add_parser("recover", parents=[common], help="rational recovery from a large sum")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--coeffs", required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--A", default=None, help="observed |g|; computed when omitted")

    sc = sub.add_parser("scan", parents=[common], help="empirical decay slopes")
    sc.add_argument("--generator", required=True)
    sc.add_argument("--k", type=int, required=True)
    sc.add_argument("--n-list", dest="n_list", required=True, help="e.g. 10,100,1000")
    sc.add_argument("--trials", type=int, default=1)
    return parser


_GLOBAL = {"threads", "precision", "budget", "seed", "out", "format", "verbose", "command"}
_DEFAULT_FORMAT = {"meanvalue": "csv", "exponents": "csv", "scan": "json"}


def spec_from_args(ns: argparse.Namespace) -> ExperimentSpec:
    params = {k: v for k, v in vars(ns).items() if k not in _GLOBAL and v is not None}
    if ns.eps is None:
        params.pop("eps", None)
    return ExperimentSpec(
        command=ns.command,
        parameters=params,
        seed=ns.seed,
        output=ns.format or _DEFAULT_FORMAT.get(ns.command, "json"),
        precision_bits=ns.precision,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = spec_from_args(ns)
    except ValueError as exc:
        parser.error(str(exc))
    return run(spec, out=ns.out, workers=max(1, ns.threads), budget=ns.budget)


if __name__ == "__main__":
    sys.exit(main())
