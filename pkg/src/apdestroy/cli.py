"""Command-line front end.

Exit status: 0 pass/found, 1 fail/none, 2 usage or precondition error,
3 search stopped at its node limit.  Documents go to stdout, diagnostics
to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import core
from .almost import build_almost
from .blocks import PreconditionError, build_destroyer
from .catalog import table_entries, verify_entry
from .crt import CrtBasis, check_coverage, compose_perms
from .prime import find_xi, prime_destroyer
from .search import SearchConfig, exhaust_count, search_perm, EXHAUST_CEILING
from .verify import Certificate, Pattern, check_almost, check_pattern, check_patterns, \
    destroyed_patterns, parse_patterns, survivor_stats

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

LOG = logging.getLogger("apdestroy")


def _default_threads() -> int:
    return os.cpu_count() or 1


def _emit(doc) -> None:
    sys.stdout.write(doc if isinstance(doc, str) else json.dumps(doc) + "\n")


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def _verdict_status(cert: Certificate) -> int:
    return EXIT_OK if cert.verdict else EXIT_FAIL


def cmd_verify(args) -> int:
    p = core.load(args.perm)
    if args.patterns is not None:
        cert = check_patterns(p, parse_patterns(args.patterns), threads=args.threads)
    else:
        cert = check_almost(p, args.s, args.t, threads=args.threads)
    _emit(cert.as_dict())
    return _verdict_status(cert)


def cmd_search(args) -> int:
    pats = parse_patterns(args.patterns)
    if args.exhaustive:
        if args.n > EXHAUST_CEILING:
            raise PreconditionError(f"--exhaustive supports n <= {EXHAUST_CEILING}")
        count = exhaust_count(args.n, pats, normalize=args.normalize, threads=args.threads)
        _emit({"n": args.n, "patterns": [[q.s, q.t] for q in pats], "count": count})
        return EXIT_OK if count else EXIT_FAIL
    cfg = SearchConfig(pats, normalize=args.normalize, node_limit=args.limit,
                       threads=args.threads, seed=args.seed, mrv=args.mrv)
    res = search_perm(args.n, cfg)
    if res.found:
        _emit(res.certificate.as_dict())
        return EXIT_OK
    _emit({"n": args.n, "patterns": [[q.s, q.t] for q in pats], "status": res.status,
           "nodes": res.nodes})
    return EXIT_LIMIT if res.status == "limit" else EXIT_FAIL


def cmd_compose(args) -> int:
    perms = [core.load(f) for f in args.components]
    basis = CrtBasis(tuple(p.n for p in perms))
    comps = []
    for path, p in zip(args.components, perms):
        if 2 * max(args.S, args.T) >= p.n:
            claims = []
        else:
            claims = destroyed_patterns(p, args.S, args.T)
        LOG.info("%s: destroys %s", path, ",".join(map(str, claims)) or "nothing in range")
        comps.append((p, claims))
    report = check_coverage(comps, args.S, args.T)
    composed = compose_perms(perms, basis)
    core.dump(composed, args.out, args.format)
    _emit({"n": composed.n, "out": str(args.out), **report.as_dict()})
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_build(args) -> int:
    master = core.load(args.master)
    check = not args.no_check_master
    if args.t is None:
        perm = build_destroyer(args.n, master, check_master=check)
        trace = None
    else:
        perm, trace = build_almost(args.n, args.t, master, check_master=check)
    if args.out:
        core.dump(perm, args.out)
    if trace is not None and args.trace:
        _write(args.trace, trace.to_json() + "\n")
    if args.no_verify:
        _emit(core.to_text(perm))
        return EXIT_OK
    if args.t is None:
        cert = check_pattern(perm, Pattern(0, 0), threads=args.threads)
    else:
        cert = check_almost(perm, args.t, args.t, threads=args.threads)
    cert.extra["master_modulus"] = master.n
    _emit(cert.as_dict())
    return _verdict_status(cert)


def cmd_prime(args) -> int:
    perm = prime_destroyer(args.p)
    cert = check_pattern(perm, Pattern(0, 0), threads=args.threads)
    cert.extra["xi"] = find_xi(args.p).xi
    _emit(core.to_text(perm))
    if args.cert:
        _write(args.cert, cert.to_json() + "\n")
    return _verdict_status(cert)


def cmd_table(args) -> int:
    ok = True
    for e in table_entries():
        passed = verify_entry(e)
        ok &= passed
        claims = ",".join(str(c) for c in e.claims)
        print(f"{e.index} {e.modulus} {claims} {'pass' if passed else 'fail'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_stats(args) -> int:
    _emit(survivor_stats(args.n, args.trials, args.seed).as_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="apdestroy",
                                 description="Build and verify AP-destroying permutations of Z_n.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def threads(p):
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="worker count (default: available CPUs)")

    p = sub.add_parser("verify", help="brute-force certificate for a permutation file")
    p.add_argument("--perm", required=True, type=Path)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--patterns", help='explicit list such as "0:0,1:-2" (overrides --s/--t)')
    threads(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="backtracking search for a pattern-destroying permutation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--patterns", default="0:0")
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True,
                   help="pin pi(0) = 0 (default on)")
    p.add_argument("--limit", type=int, default=None, help="node budget")
    p.add_argument("--exhaustive", action="store_true", help="count all solutions")
    p.add_argument("--seed", type=int, default=None, help="shuffle value order")
    p.add_argument("--mrv", action="store_true", help="assign the most constrained position first")
    threads(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("compose", help="CRT-compose component permutation files")
    p.add_argument("components", nargs="+", type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--S", type=int, default=1)
    p.add_argument("--T", type=int, default=2)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("build", help="block builder (no --t) or the (t,t)-almost builder")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--master", required=True, type=Path)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--out", type=Path, help="also write the permutation file here")
    p.add_argument("--trace", type=Path, help="write the stage trace JSON here (with --t)")
    p.add_argument("--no-check-master", action="store_true",
                   help="skip verifying the master's almost-destroying property")
    p.add_argument("--no-verify", action="store_true",
                   help="print the permutation instead of an O(n^2) certificate")
    threads(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("prime", help="quadratic-residue permutation for p = 3 (mod 8)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cert", type=Path, help="write the certificate (with xi) here")
    threads(p)
    p.set_defaults(func=cmd_prime)

    p = sub.add_parser("table", help="embedded catalog")
    p.add_argument("action", choices=("verify",))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("stats", help="survivor statistic over random permutations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors as status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ValueError, OverflowError, KeyError, OSError) as exc:
        print(f"apdestroy {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
