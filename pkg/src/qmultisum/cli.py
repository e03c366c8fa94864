"""Command-line front end: ``verify``, ``series``, ``eval`` and ``bench``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad usage.
Output is JSON by default; ``--format text`` (and ``csv`` where it makes
sense) gives a human-readable rendering.  ``QMULTISUM_WORKERS`` sets the
size of the process pool used by ``verify``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import MismatchError, QSeriesError
from .hecke import HeckeParams, find_generic_monomials, hecke_g, hecke_g_terms, verify_hm
from .identities import (
    StringParams,
    andrews_gordon,
    bn_from_string_function,
    bn_hecke,
    bn_multisum,
    bn_theta,
    slater_product,
    string_function,
)
from .series import Monomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("theorem1", "slater", "heckeroute", "string", "hm", "andrews-gordon")
MULTISUM_MAX_N = 12
DEFAULTS = {
    "verify": {"order": 60, "slater_order": 200, "n": "2..6", "k": "2..3"},
    "series": {"order": 20, "n": "2"},
    "eval": {"digits": 5},
    "bench": {"n": "6", "order": 60, "repeats": 3},
}


class UsageError(Exception):
    pass


@dataclass
class VerifyReport:
    identity: str
    params: dict
    order: int
    status: str = "pass"
    first_difference: dict | None = None
    wall_time: float = 0.0
    error: str | None = None
    notes: dict = field(default_factory=dict)


def _compare(report, lhs, rhs):
    diff = lhs.first_difference(rhs)
    if diff is not None:
        e, a, b = diff
        report.status = "fail"
        report.first_difference = {"exponent": e, "lhs": str(a), "rhs": str(b)}
    return report


# -- verification tasks (module level so they can run in worker processes) --


def _task_theorem1(N, T):
    r = VerifyReport("theorem1", {"N": N}, T)
    return _compare(r, bn_multisum(N, T), bn_theta(N, T))


def _task_slater(T):
    r = VerifyReport("slater", {"N": 2}, T)
    prod = slater_product(T)
    _compare(r, bn_multisum(2, T), prod)
    if r.status == "pass":
        _compare(r, bn_theta(2, T), prod)
    return r


def _task_hecke(N, m, T):
    r = VerifyReport("heckeroute", {"N": N, "m": m}, T)
    return _compare(r, bn_hecke(N, m, T), bn_multisum(N, T))


def _task_string(N, m, T):
    r = VerifyReport("string", {"N": N, "m": m, "ell": 0}, T)
    return _compare(r, bn_from_string_function(N, m, T), bn_multisum(N, T))


def _task_hm(n, p, x, y, T):
    x, y = Monomial(*x), Monomial(*y)
    r = VerifyReport("hm", {"n": n, "p": p, "x": str(x), "y": str(y)}, T)
    ok, diff = verify_hm(n, p, x, y, T)
    if not ok:
        r.status = "fail"
        r.first_difference = {"exponent": diff.min_exp, "lhs - rhs": str(diff.coeff(diff.min_exp))}
    return r


def _task_gvanish(N, T):
    q = Monomial(1, 1)
    params = HeckeParams(1, N + 1, 1, q, q)
    minus = Monomial(-1, 0)
    terms = hecke_g_terms(params, minus, minus)
    r = VerifyReport("g-vanishing", {"N": N}, T)
    r.notes = {"terms": len(terms),
               "all_theta_zero": all(t.theta_vanishes for t in terms),
               "all_pole_free": all(t.pole_free for t in terms)}
    g = hecke_g(params, minus, minus, T)
    if not (g.is_zero() and r.notes["all_theta_zero"] and r.notes["all_pole_free"]):
        r.status = "fail"
        if not g.is_zero():
            r.first_difference = {"exponent": g.min_exp, "lhs": str(g.coeff(g.min_exp)),
                                  "rhs": "0"}
    return r


def _task_ag(k, i, T):
    r = VerifyReport("andrews-gordon", {"k": k, "i": i}, T)
    lhs, rhs = andrews_gordon(k, i, T)
    return _compare(r, lhs, rhs)


def _run_task(task):
    fn, args = task
    t0 = time.perf_counter()
    try:
        rep = fn(*args)
    except QSeriesError as exc:
        rep = VerifyReport(fn.__name__.replace("_task_", ""), {"args": list(args)}, -1,
                           status="error", error=f"{type(exc).__name__}: {exc}")
    rep.wall_time = round(time.perf_counter() - t0, 4)
    return rep


def build_tasks(suite, Ns, T, slater_T, ks):
    suites = SUITES if suite == "all" else (suite,)
    tasks = []
    for s in suites:
        if s == "theorem1":
            tasks += [(_task_theorem1, (N, T)) for N in Ns]
        elif s == "slater":
            tasks.append((_task_slater, (slater_T,)))
        elif s == "heckeroute":
            tasks += [(_task_hecke, (N, 0, T)) for N in Ns]
            tasks += [(_task_hecke, (N, 2 * N, T)) for N in Ns]
        elif s == "string":
            tasks += [(_task_string, (N, m, T)) for N in Ns for m in (0, 2 * N)]
        elif s == "hm":
            tasks += [(_task_gvanish, (N, T)) for N in Ns]
            tasks += [(_task_hm, (1, N, (1, 1), (1, 1), T)) for N in Ns]
            tasks += [(_task_hm, (1, 2, (1, 2), (1, 3), T)), (_task_hm, (1, 3, (1, 2), (1, 3), T))]
            x, y = find_generic_monomials(2, 3)
            tasks.append((_task_hm, (2, 3, (x.sign, x.exp), (y.sign, y.exp), T)))
        elif s == "andrews-gordon":
            tasks += [(_task_ag, (k, i, T)) for k in ks for i in range(1, k + 1)]
    return tasks


def run_tasks(tasks, workers=None):
    if workers is None:
        workers = int(os.environ.get("QMULTISUM_WORKERS", "1") or 1)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


# -- argument helpers ------------------------------------------------------


def parse_range(text):
    """``"2..6"`` -> [2, 3, 4, 5, 6]; ``"3"`` -> [3]; ``"2,4,7"`` -> [2, 4, 7]."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse range {text!r}") from None


def parse_q(text):
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse q = {text!r}") from None
    if not 0 < q < 1:
        raise UsageError(f"q must lie strictly between 0 and 1, got {text}")
    return q


def _apply_config(args):
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
    for key, val in cfg.items():
        key = key.replace("-", "_")
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    for key, val in dict(DEFAULTS[args.command], format="json").items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)


def _emit(obj, fmt, text_fn, out):
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, default=str) + "\n")
    else:
        out.write(text_fn(obj))


# -- subcommands -------------------------------------------------------------


def cmd_verify(args, out):
    Ns = parse_range(args.n)
    ks = parse_range(args.k)
    if min(Ns) < 2 or min(ks) < 2:
        raise UsageError("N and k must be at least 2")
    t0 = time.perf_counter()
    tasks = build_tasks(args.suite, Ns, int(args.order), int(args.slater_order), ks)
    reports = run_tasks(tasks)
    ok = all(r.status == "pass" for r in reports)
    payload = {"suite": args.suite, "status": "pass" if ok else "fail",
               "runtime": round(time.perf_counter() - t0, 3),
               "reports": [asdict(r) for r in reports]}

    def text(p):
        lines = []
        for r in p["reports"]:
            params = " ".join(f"{k}={v}" for k, v in r["params"].items())
            extra = f"  first difference {r['first_difference']}" if r["first_difference"] else ""
            if r["error"]:
                extra = f"  {r['error']}"
            lines.append(f"{r['status'].upper():5} {r['identity']:15} {params:30} "
                         f"T={r['order']:<4} {r['wall_time']:.3f}s{extra}")
        lines.append(f"{p['status'].upper()} ({len(p['reports'])} checks, {p['runtime']}s)")
        return "\n".join(lines) + "\n"

    _emit(payload, args.format, text, out)
    return EXIT_OK if ok else EXIT_FAIL


def _series_for(args):
    T = int(args.order)
    N = args.n_int
    if args.target == "multisum":
        return bn_multisum(N, T)
    if args.target == "theta":
        return bn_theta(N, T)
    if args.target == "hecke":
        return bn_hecke(N, args.m or 0, T)
    if args.target == "string":
        return string_function(StringParams(N, args.m or 0, args.ell or 0), T)
    if args.target == "slater":
        return slater_product(T)
    raise UsageError(f"unknown target {args.target}")


def cmd_series(args, out):
    try:
        args.n_int = int(args.n)
    except ValueError:
        raise UsageError(f"--n must be a single integer for series, got {args.n!r}") from None
    s = _series_for(args)
    if args.format == "json":
        out.write(s.to_json(indent=None) + "\n")
        return EXIT_OK
    if s.scale == 1 and s.min_exp >= 0:
        out.write(", ".join(str(c) for c in s.dense(0)) + "\n")
    else:
        for e, c in s.items():
            out.write(f"q^({e}/{s.scale})  {c}\n")
        out.write(f"+ O(q^({s.trunc_order + 1}/{s.scale}))\n")
    return EXIT_OK


def cmd_eval(args, out):
    from .numeric import (
        SERIES_MAX_N,
        eval_bn_series,
        eval_bn_theta_numeric,
        table1,
        table1_csv,
    )

    digits = int(args.digits)
    if args.table1:
        cells = table1(digits)
        payload = {"quantity": "1/B_N(q) and (q;q)_oo", "digits": digits,
                   "cells": [c.as_dict() for c in cells]}
        if args.format == "csv":
            out.write(table1_csv(cells))
        else:
            _emit(payload, args.format, lambda p: table1_csv(cells), out)
        return EXIT_OK
    if args.n is None or args.q is None:
        raise UsageError("eval needs --table1, or both --n and --q")
    try:
        N = int(args.n)
    except ValueError:
        raise UsageError(f"--n must be a single integer for eval, got {args.n!r}") from None
    if N < 2:
        raise UsageError("N must be at least 2")
    q = parse_q(args.q)
    theta = eval_bn_theta_numeric(N, q, digits)
    cross = eval_bn_series(N, q, digits) if N <= SERIES_MAX_N else None
    status = EXIT_OK
    payload = {"N": N, "q": str(q), "digits": digits,
               "density": theta.reciprocal().as_dict(), "B_N": theta.as_dict()}
    if cross is not None:
        gap = abs(theta.value - cross.value)
        payload["cross_check"] = {"B_N": cross.as_dict(), "gap": float(gap)}
        if gap > theta.err_est + cross.err_est + 10.0 ** -(digits + 8):
            payload["cross_check"]["status"] = "fail"
            status = EXIT_FAIL
        else:
            payload["cross_check"]["status"] = "pass"

    def text(p):
        s = p["density"]["value"] + "\n"
        return s

    _emit(payload, args.format, text, out)
    return status


def _bench_one(N, T, reps):
    def timed(fn):
        best, result = None, None
        for _ in range(reps):
            t0 = time.perf_counter()
            result = fn()
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        return best, result

    t_theta, s_theta = timed(lambda: bn_theta(N, T))
    row = {"N": N, "order": T, "repeats": reps,
           "theta": {"seconds": t_theta, "terms": N * N}}
    if N > MULTISUM_MAX_N:
        row["multisum"] = {
            "refused": f"the multisum is a {N - 1}-fold sum; enumeration is only attempted "
                       f"for N <= {MULTISUM_MAX_N}"}
        return row
    stats = {}
    s_multi = bn_multisum(N, T, stats=stats)
    # identity is asserted before any timing is reported
    if s_multi != s_theta:
        raise MismatchError(f"routes differ at N={N}, T={T}: {s_multi.first_difference(s_theta)}")
    t_multi, _ = timed(lambda: bn_multisum(N, T))
    row["identical"] = True
    row["multisum"] = {"seconds": t_multi, "indices": stats["leaves"],
                       "search_nodes": stats["nodes"]}
    row["ratio_multisum_over_theta"] = t_multi / t_theta if t_theta else None
    return row


def _bench_text(row):
    m = row["multisum"]
    head = f"N={row['N']} T={row['order']}: theta {row['theta']['terms']} terms " \
           f"{row['theta']['seconds']:.4f}s"
    if "refused" in m:
        return head + f"; multisum refused ({m['refused']})"
    return head + f"; multisum {m['indices']} indices / {m['search_nodes']} nodes " \
                  f"{m['seconds']:.4f}s; identical"


def cmd_bench(args, out):
    Ns = parse_range(str(args.n))
    T = int(args.order)
    reps = int(args.repeats)
    if min(Ns) < 2 or T < 0 or reps < 1:
        raise UsageError("bench needs N >= 2, order >= 0 and repeats >= 1")
    rows = [_bench_one(N, T, reps) for N in Ns]
    if args.format == "csv":
        out.write("route,N,order,seconds,work\n")
        for r in rows:
            out.write(f"theta,{r['N']},{T},{r['theta']['seconds']:.6f},{r['N'] ** 2}\n")
            m = r["multisum"]
            if "seconds" in m:
                out.write(f"multisum,{r['N']},{T},{m['seconds']:.6f},{m['indices']}\n")
            else:
                out.write(f"multisum,{r['N']},{T},,refused\n")
        return EXIT_OK
    payload = rows[0] if len(rows) == 1 else {"order": T, "runs": rows}
    if args.format == "text":
        out.write("\n".join(_bench_text(r) for r in rows) + "\n")
    else:
        _emit(payload, "json", None, out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="qmultisum", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--format", choices=formats, default=None)
        sp.add_argument("--config", help="JSON file of default flag values")

    v = sub.add_parser("verify", help="run identity verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n", help="range of N, e.g. 2..6")
    v.add_argument("--k", help="range of k for Andrews-Gordon, e.g. 2..3")
    v.add_argument("--order", type=int, help="truncation order T (default 60)")
    v.add_argument("--slater-order", type=int, help="truncation order for the Slater check")
    common(v)

    s = sub.add_parser("series", help="print an exact series")
    s.add_argument("target", choices=("multisum", "theta", "hecke", "string", "slater"))
    s.add_argument("--n")
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--order", type=int)
    common(s)

    e = sub.add_parser("eval", help="numeric values of 1/B_N(q)")
    e.add_argument("--table1", action="store_true")
    e.add_argument("--n")
    e.add_argument("--q")
    e.add_argument("--digits", type=int)
    common(e, ("json", "text", "csv"))

    b = sub.add_parser("bench", help="time the multisum against the theta formula")
    b.add_argument("--n", help="N or a range such as 2..8")
    b.add_argument("--order", type=int)
    b.add_argument("--repeats", type=int)
    common(b, ("json", "text", "csv"))
    return p


COMMANDS = {"verify": cmd_verify, "series": cmd_series, "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _apply_config(args)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MismatchError as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except QSeriesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
