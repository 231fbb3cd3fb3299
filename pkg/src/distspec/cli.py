"""``distspec`` command line.

Every command prints one JSON document (``--format json``, the default)::

    {"schema": 1, "header": {"config": ..., "version": ..., "timestamp": ...,
     "wall_time": ...}, "body": {...}}

Only ``timestamp`` and ``wall_time`` vary between identical runs.

Exit codes: 0 ok, 1 I/O or parse error, 2 contract error, 3 convergence
failure, 4 verification verdict is a violation.

Environment overrides (used when the flag is not given):
  DISTSPEC_TOL        eigensolver / secular tolerance
  DISTSPEC_TIE_TOL    minimiser tie tolerance
  DISTSPEC_DEPTH      walk truncation depth
  DISTSPEC_CAP        exhaustive candidate cap
  DISTSPEC_WORKERS    worker processes for exhaustive runs
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
import time

from . import __version__
from .enumerate import (DEFAULT_CAP, TIE_TOL, VERDICT_OK, edge_switch_counterexample,
                        verify_exhaustive, verify_structured)
from .errors import ContractError, ConvergenceError, ParseError
from .extremal import ExtremalSpec, build_extremal_graph, params_from_m
from .graph import Graph, complement, parse_graph, to_graph6
from .phipsi import (AGREEMENT_TOL, ComplementConfig, compare_rho, phi_cycle, phi_path,
                     psi, rho_via_secular)
from .spectral import DEFAULT_TOL, distance_spectral_radius
from .walks import DEFAULT_DEPTH, psi_via_neumann, verify_large_s, walk_counts

EXIT_OK, EXIT_IO, EXIT_CONTRACT, EXIT_CONVERGENCE, EXIT_VIOLATION = 0, 1, 2, 3, 4


def _env(name, cast, default):
    raw = os.environ.get("DISTSPEC_" + name)
    return default if raw is None else cast(raw)


def _add_graph_input(p, required=True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--file", help="edge list or graph6 file (format sniffed by first byte)")
    src.add_argument("--g6", help="inline graph6 string")


def _read_graph(args) -> Graph:
    if args.g6 is not None:
        return parse_graph(args.g6)
    with open(args.file, encoding="ascii") as fh:
        return parse_graph(fh.read())


def _config_or_graph(text):
    """``C3+P4+P4`` style configuration, or graph6 of the complement."""
    try:
        return ComplementConfig.parse(text)
    except (ParseError, ValueError):
        return parse_graph(text)


# ---------------------------------------------------------------- commands

def cmd_rho(args):
    g = _read_graph(args)
    body = {"graph6": to_graph6(g), "n": g.n, "m": g.m}
    if args.method in ("eigen", "both"):
        body["eigen"] = distance_spectral_radius(g, tol=args.tol).to_dict()
    if args.method in ("secular", "both"):
        body["secular"] = rho_via_secular(complement(g), tol=args.tol).to_dict()
    if args.method == "both":
        delta = abs(body["eigen"]["value"] - body["secular"]["value"])
        body["delta"] = delta
        body["agree"] = delta <= AGREEMENT_TOL
    body["rho"] = (body.get("eigen") or body["secular"])["value"]
    return body, None


def cmd_phi(args):
    fn = phi_path if args.kind == "path" else phi_cycle
    return {"kind": args.kind, "k": args.k, "lam": args.lam, "phi": fn(args.k, args.lam)}, None


def cmd_psi(args):
    if args.config:
        h0 = ComplementConfig.parse(args.config)
        label = str(h0)
    else:
        g = _read_graph(args)
        h0 = complement(g)
        label = to_graph6(g)
    body = {"input": label, "lam": args.lam, "psi": psi(h0, args.lam)}
    if args.neumann is not None:
        graph = h0.to_graph() if isinstance(h0, ComplementConfig) else h0
        body["neumann"] = psi_via_neumann(graph, args.lam, args.neumann).to_dict()
    return body, None


def cmd_extremal(args):
    spec = params_from_m(args.m)
    g = build_extremal_graph(spec)
    body = spec.to_dict()
    body.update({"edges": g.m, "graph6": to_graph6(g),
                 "rho": distance_spectral_radius(g, tol=args.tol).value})
    return body, None


def cmd_verify(args):
    if args.mode == "exhaustive":
        if args.m is None:
            if args.n is None or args.s is None:
                raise ContractError("exhaustive mode needs --m or both --n and --s")
            args.m = ExtremalSpec.from_ns(args.n, args.s).m
        rep = verify_exhaustive(args.m, cap=args.cap, tol=args.tol, tie_tol=args.tie_tol,
                                workers=args.workers)
    else:
        n, s = args.n, args.s
        if args.m is not None:
            spec = params_from_m(args.m)
            n, s = spec.n, spec.s
        if n is None or s is None:
            raise ContractError(f"{args.mode} mode needs --n and --s (or --m)")
        if args.mode == "structured":
            rep = verify_structured(n, s, tol=args.tol, tie_tol=args.tie_tol,
                                    keep_rows=args.format == "csv")
        else:
            rep = verify_large_s(n, s, K=args.depth, tol=args.tol, tie_tol=args.tie_tol)
    code = EXIT_OK if rep.verdict == VERDICT_OK else EXIT_VIOLATION
    return rep.to_dict(), {"rows": rep.rows, "code": code, "wall_time": rep.wall_time}


def cmd_walks(args):
    g = _read_graph(args)
    h0 = g if args.as_complement else complement(g)
    return walk_counts(h0, args.depth).to_dict(), None


def cmd_compare(args):
    a, b = _config_or_graph(args.a), _config_or_graph(args.b)
    return {"a": args.a, "b": args.b, **compare_rho(a, b, tol=args.tol).to_dict()}, None


def cmd_counterexample(args):
    return edge_switch_counterexample(tol=args.tol), None


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="distspec", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=_env("TOL", float, DEFAULT_TOL))
    common.add_argument("--format", choices=["json", "csv", "plain"], default="json")
    common.add_argument("--seed", type=int, default=0, help="recorded in the header")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rho", parents=[common], help="distance spectral radius")
    _add_graph_input(s)
    s.add_argument("--method", choices=["eigen", "secular", "both"], default="eigen")
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("phi", parents=[common], help="closed-form Phi of a path or cycle")
    s.add_argument("--kind", choices=["path", "cycle"], required=True)
    s.add_argument("--k", type=int, required=True, help="order (path) or length (cycle)")
    s.add_argument("--lam", type=float, required=True)
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("psi", parents=[common], help="Psi of a graph's complement")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--file")
    src.add_argument("--g6")
    src.add_argument("--config", help="complement as e.g. C3+P4+P4")
    s.add_argument("--lam", type=float, required=True)
    s.add_argument("--neumann", type=int, metavar="K", help="also report the walk series to depth K")
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("extremal", parents=[common], help="(n, s), partition and extremal graph for m")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_extremal)

    s = sub.add_parser("verify", parents=[common], help="run a verification engine")
    s.add_argument("--mode", choices=["structured", "exhaustive", "large-s"], required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--cap", type=int, default=_env("CAP", int, DEFAULT_CAP))
    s.add_argument("--tie-tol", type=float, default=_env("TIE_TOL", float, TIE_TOL))
    s.add_argument("--depth", type=int, default=_env("DEPTH", int, DEFAULT_DEPTH))
    s.add_argument("--workers", type=int, default=_env("WORKERS", int, None))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("walks", parents=[common], help="walk counts of the complement")
    _add_graph_input(s)
    s.add_argument("--depth", type=int, default=_env("DEPTH", int, DEFAULT_DEPTH))
    s.add_argument("--as-complement", action="store_true",
                   help="treat the input as the complement itself")
    s.set_defaults(func=cmd_walks)

    s = sub.add_parser("compare", parents=[common], help="order rho of two complements")
    s.add_argument("a", help="configuration (C3+P4+P4) or graph6 of a complement")
    s.add_argument("b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("counterexample", parents=[common], help="the n = 11 edge-switch example")
    s.set_defaults(func=cmd_counterexample)
    return p


def _resolved_config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, body, extra, wall, out):
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        rows = (extra or {}).get("rows")
        if rows:
            w.writerow(["config", "rho", "method", "residual"])
            w.writerows(rows)
        else:
            w.writerow(["key", "value"])
            for k, v in body.items():
                w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
        return
    if args.format == "plain":
        for k, v in body.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
        return
    doc = {
        "schema": 1,
        "header": {
            "config": _resolved_config(args),
            "version": __version__,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "wall_time": round(wall, 6),
        },
        "body": body,
    }
    out.write(json.dumps(doc, indent=2, default=_jsonable) + "\n")


def _jsonable(x):
    if hasattr(x, "item"):
        return x.item()
    if hasattr(x, "tolist"):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        body, extra = args.func(args)
    except (OSError, ParseError, UnicodeDecodeError) as exc:
        print(f"distspec: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ContractError as exc:
        print(f"distspec: contract: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except ConvergenceError as exc:
        print(f"distspec: convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    wall = (extra or {}).get("wall_time", time.perf_counter() - t0)
    buf = io.StringIO()
    _emit(args, body, extra, wall, buf)
    out.write(buf.getvalue())
    return (extra or {}).get("code", EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
