"""Command-line interface.

Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 target provably
unreachable, 4 invalid certificate.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from .graph import GraphError, components, format_edge_list, is_fragment, key, random_regular, read_graph, triangle_count
from .moves import KeyMismatch, MoveCertificate, StepNotApplicable, applicable, certificate

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_UNREACHABLE, EXIT_BAD_CERT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path: str):
    try:
        return read_graph(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    except (GraphError, ValueError) as e:
        raise UsageError(f"{path}: {e}") from e


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# -- sample ---------------------------------------------------------------------


def cmd_sample(args) -> int:
    from .sampler import Policy, run
    from .statespace import cycle_class

    if args.steps < 0:
        raise UsageError("--steps must be non-negative")
    if args.sample_every < 0:
        raise UsageError("--sample-every must be non-negative")
    if args.policy == "triangle-boost":
        if args.beta is None or args.beta < 0:
            raise UsageError("--policy triangle-boost needs --beta >= 0")
        policy = Policy.triangle_boost(args.beta)
    else:
        policy = Policy.uniform()
    start = None
    if args.start:
        start = _load(args.start)
        if (args.n is not None and args.n != start.n) or (args.d is not None and args.d != start.d):
            raise UsageError("--n/--d disagree with the start graph")
    else:
        if args.n is None or args.d is None:
            raise UsageError("give --n and --d, or --start")
        if args.n < 1 or args.d < 0:
            raise UsageError("--n must be positive and --d non-negative")
        if (args.n * args.d) % 2:
            raise UsageError(f"no {args.d}-regular graph on {args.n} vertices: n*d must be even")
        if args.n < args.d + 1:
            raise UsageError(f"no {args.d}-regular graph on {args.n} vertices: need n >= d+1")
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(32)
        print(f"seed: {seed}", file=sys.stderr)
    g = start if start is not None else random_regular(args.n, args.d, seed)
    if g.d == 2:
        _warn(f"the 2-regular chain never leaves cycle class {cycle_class(g)} of the start graph")
    elif g.d < 2:
        _warn(f"no triangle switch exists for d = {g.d}; the chain stays put")

    stats_fh = open(args.stats, "w") if args.stats else None

    def emit(t, ch):
        if stats_fh:
            stats_fh.write(json.dumps({"step": t, "triangles": ch.triangles}) + "\n")

    try:
        res = run(g, policy, args.steps, seed, sample_every=args.sample_every, on_sample=emit)
        if stats_fh:
            stats_fh.write(json.dumps({"final": True, "seed": seed, **res.stats.to_dict()}) + "\n")
    finally:
        if stats_fh:
            stats_fh.close()
    _write(args.out, format_edge_list(res.graph))
    print(f"triangles: {res.stats.triangle_count}", file=sys.stderr)
    return EXIT_OK


# -- path -----------------------------------------------------------------------


def cmd_path(args) -> int:
    from .reconfigure import connect, connect_two_regular
    from .statespace import cycle_class

    x, y = _load(args.src), _load(args.dst)
    if (x.n, x.d) != (y.n, y.d):
        raise UsageError(f"graphs differ: (n, d) = ({x.n}, {x.d}) vs ({y.n}, {y.d})")
    if x == y:
        cert = certificate(x, [])
    elif x.d >= 3:
        cert = connect(x, y)
    elif x.d == 2:
        cx, cy = cycle_class(x), cycle_class(y)
        if cx != cy:
            print(f"unreachable: cycle classes differ ({cx} vs {cy}) and switches preserve the class")
            return EXIT_UNREACHABLE
        if x.n not in (3, 6, 7):
            print(f"no path construction for 2-regular graphs with n = {x.n} (same class {cx})", file=sys.stderr)
            return EXIT_RUNTIME
        cert = connect_two_regular(x, y)
    else:
        print(f"unreachable: no triangle switch exists for d = {x.d}")
        return EXIT_UNREACHABLE
    _write(args.out, cert.dumps())
    print(f"moves: {len(cert)}", file=sys.stderr)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    from .statespace import in_whitelist, verify

    if (args.n * args.d) % 2:
        raise UsageError(f"no {args.d}-regular graph on {args.n} vertices: n*d must be even")
    if args.n < args.d + 1 or (args.d == 2 and args.n < 3):
        raise UsageError(f"no {args.d}-regular graph on {args.n} vertices")
    if not in_whitelist(args.n, args.d):
        raise UsageError(f"(n, d) = ({args.n}, {args.d}) is outside the enumeration range")
    report = verify(args.n, args.d, threads=args.threads)
    text = json.dumps(report, sort_keys=True) + "\n"
    if args.report:
        _write(args.report, text)
    sys.stdout.write(text)
    return EXIT_OK if report["verdict"] == "PASS" else EXIT_RUNTIME


# -- classify -------------------------------------------------------------------


def cmd_classify(args) -> int:
    from .statespace import cycle_class

    g = _load(args.graph)
    info = {
        "n": g.n,
        "d": g.d,
        "triangles": triangle_count(g),
        "components": sorted(len(c) for c in components(g)),
        "fragment": is_fragment(g),
    }
    if g.d == 2:
        c = cycle_class(g)
        info["cycle_class"] = [c.c1, c.c2]
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK


# -- clique ---------------------------------------------------------------------


def cmd_clique(args) -> int:
    from .reconfigure import build_clique_component

    g = _load(args.graph)
    if g.d < 3:
        raise UsageError("clique building needs d >= 3")
    if g.n < 2 * (g.d + 1):
        raise UsageError(f"clique building needs n >= 2(d+1) = {2 * (g.d + 1)}, got n = {g.n}")
    if not 1 <= args.v <= g.n:
        raise UsageError(f"--v must be a vertex in 1..{g.n}")
    h, trace = build_clique_component(g, args.v)
    cert = certificate(g, trace.moves, trace.tags)
    _write(args.out, cert.dumps())
    if args.graph_out:
        _write(args.graph_out, format_edge_list(h))
    print(f"moves: {len(cert)}", file=sys.stderr)
    return EXIT_OK


# -- replay ---------------------------------------------------------------------


def cmd_replay(args) -> int:
    g = _load(args.start)
    try:
        with open(args.cert) as fh:
            cert = MoveCertificate.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {args.cert}: {e.strerror}") from e
    except (ValueError, KeyError, StopIteration) as e:
        print(f"INVALID: certificate does not parse ({e})")
        return EXIT_BAD_CERT
    if key(g) != cert.start_key:
        print("INVALID: start graph does not match the certificate's start key")
        return EXIT_BAD_CERT
    if (cert.n, cert.d) != (g.n, g.d):
        _warn(f"header says (n, d) = ({cert.n}, {cert.d}), start graph has ({g.n}, {g.d})")
    for i, m in enumerate(cert.moves):
        if not m.is_delta or not applicable(g, m):
            print(f"INVALID: step {i} ({m}) is not an applicable triangle switch")
            return EXIT_BAD_CERT
        g = g.with_edge_change(m.removed(), m.added())
        if args.verbose:
            print(f"step {i}: {m} ok")
    end = key(g)
    if end != cert.end_key:
        _warn("end graph differs from the header's end key (truncated certificate?)")
    print(f"PASS {len(cert)} steps")
    print(f"end: {end.decode()}")
    return EXIT_OK


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trichain", description="Triangle switches on regular graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="run the triangle-switch chain")
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--policy", choices=["uniform", "triangle-boost"], default="uniform")
    s.add_argument("--beta", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--start", help="start graph (edge list); default: a random graph from the seed")
    s.add_argument("--sample-every", type=int, default=0)
    s.add_argument("--out", help="final graph (edge list); default stdout")
    s.add_argument("--stats", help="JSON-lines statistics file")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("path", help="certificate of triangle switches between two graphs")
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    s.add_argument("--out", help="certificate file; default stdout")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("verify", help="exhaustive connectivity check of the switch graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--report")
    s.add_argument("--threads", type=int, help="worker processes (default: TRICHAIN_THREADS or 1)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", help="basic invariants of a graph, with its cycle class when d = 2")
    s.add_argument("--in", dest="graph", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("clique", help="make N[v] a clique component")
    s.add_argument("--in", dest="graph", required=True)
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--out", help="certificate file; default stdout")
    s.add_argument("--graph-out", help="resulting graph (edge list)")
    s.set_defaults(func=cmd_clique)

    s = sub.add_parser("replay", help="check a certificate step by step")
    s.add_argument("--start", required=True)
    s.add_argument("--cert", required=True)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"{parser.prog} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyMismatch, StepNotApplicable) as e:
        print(f"INVALID: {e}", file=sys.stderr)
        return EXIT_BAD_CERT
    except Exception as e:  # noqa: BLE001 - reported as a runtime failure
        print(f"{parser.prog} {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
