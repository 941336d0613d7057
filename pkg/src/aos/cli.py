"""Command-line front end: ``aos {list | verify | gram | schur}``.

JSON is the canonical report format; CSV and markdown are projections of
the same document.  Exit codes: 0 when every status is pass/advisory, 1
when any inequality check fails, 2 on usage errors.  Timings are kept in a
sidecar field so report bodies are byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from . import catalog
from . import operator as op
from .errors import AosError, UnknownCaseError


def _canonical_body(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "timings_ms"}
    return json.dumps(body, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def _check_finite(obj, path="report"):
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            raise AosError(f"non-finite value at {path}")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}[{i}]")


def _parse_params(pairs):
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ValueError(f"--param expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        try:
            out[key] = int(val)
        except ValueError:
            try:
                out[key] = float(val)
            except ValueError:
                out[key] = val
    return out


def _run_one(case_id: str, N: int, params: dict) -> dict:
    t0 = time.perf_counter()
    doc = catalog.run_case(catalog.instantiate(case_id, **params), N=N)
    doc["artifact_version"] = __version__
    doc["timings_ms"] = {"total": (time.perf_counter() - t0) * 1000.0}
    _check_finite({k: v for k, v in doc.items() if k != "timings_ms"})
    return doc


def _worker(args):
    case_id, N, params = args
    return case_id, _run_one(case_id, N, params)


def _format_csv(doc: dict) -> str:
    rows = [("case", doc["case"]), ("N", doc["N"]),
            ("overall", doc["overall"]),
            ("schur_finite_sup", doc["schur"]["finite_sup"]),
            ("schur_certified_C", doc["schur"]["certified_C"]),
            ("operator_norm", doc["operator"]["operator_norm"]),
            ("min_eigenvalue", doc["operator"]["min_eigenvalue"]),
            ("bessel_lhs", doc["bessel"]["lhs_partial"]),
            ("bessel_rhs", doc["bessel"]["rhs"]),
            ("bessel_margin", doc["bessel"]["margin"]),
            ("bessel_status", doc["bessel"]["status"])]
    lines = ["field,value"]
    lines += [f"{k},{v}" for k, v in rows]
    return "\n".join(lines) + "\n"


def _format_md(doc: dict) -> str:
    s = doc["statuses"]
    lines = [f"# {doc['case']} (N={doc['N']})", "",
             f"overall: **{doc['overall']}**", "",
             "| check | status |", "|---|---|"]
    lines += [f"| {k} | {v} |" for k, v in s.items()]
    lines += ["", f"certified C = {doc['schur']['certified_C']:.10g}",
              f"Bessel margin = {doc['bessel']['margin']:.6g} "
              f"(budget {doc['bessel']['budget']:.3g})"]
    return "\n".join(lines) + "\n"


def _write_report(doc: dict, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = _canonical_body(doc) + "\n"
    elif fmt == "csv":
        text = _format_csv(doc)
    else:
        text = _format_md(doc)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary_line(doc: dict) -> str:
    return (f"{doc['case']}: {doc['overall']}  "
            f"C={doc['schur']['certified_C']:.8g}  "
            f"bessel margin={doc['bessel']['margin']:.4g}")


def cmd_list(_args) -> int:
    for cid, summary in catalog.list_cases():
        print(f"{cid}: {summary}")
    return 0


def cmd_verify(args) -> int:
    params = _parse_params(args.param)
    fmt = args.format
    if args.all:
        case_ids = [cid for cid, _ in catalog.list_cases()]
        jobs = args.jobs or int(os.environ.get("AOS_JOBS", 0)) or os.cpu_count() or 1
        out_dir = args.out or "aos-reports"
        os.makedirs(out_dir, exist_ok=True)
        work = [(cid, args.N, params) for cid in case_ids]
        results = {}
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for cid, doc in pool.map(_worker, work):
                    results[cid] = doc
        else:
            for item in work:
                cid, doc = _worker(item)
                results[cid] = doc
        worst = 0
        ext = {"json": "json", "csv": "csv", "md": "md"}[fmt]
        for cid in case_ids:  # fixed order, serialized writes
            doc = results[cid]
            _write_report(doc, fmt, os.path.join(out_dir, f"{cid}.{ext}"))
            print(_summary_line(doc))
            if doc["overall"] == "fail":
                worst = 1
        return worst
    try:
        doc = _run_one(args.case, args.N, params)
    except UnknownCaseError:
        print(f"unknown case: {args.case}", file=sys.stderr)
        return 2
    _write_report(doc, fmt, args.out)
    if args.out:
        print(_summary_line(doc))
    return 0 if doc["overall"] != "fail" else 1


def cmd_gram(args) -> int:
    from . import spaces

    try:
        inst = catalog.instantiate(args.case, **_parse_params(args.param))
    except UnknownCaseError:
        print(f"unknown case: {args.case}", file=sys.stderr)
        return 2
    mode = args.mode
    lines = ["m,n,re,im,provenance,discrepancy"]
    cache = {}
    for m in range(1, args.N + 1):
        for n in range(1, args.N + 1):
            key = (min(m, n), max(m, n))
            if key not in cache:
                cache[key] = spaces.gram_entry(
                    inst.space, inst.family, key[0], key[1], mode)
            got = cache[key]
            if mode == "both":
                v, _, d = got
                disc = f"{d:.6e}"
            else:
                v, disc = got, ""
            if n < m:
                v = v.conjugate()
            lines.append(f"{m},{n},{v.real!r},{v.imag!r},{mode},{disc}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_schur(args) -> int:
    try:
        inst = catalog.instantiate(args.case, **_parse_params(args.param))
    except UnknownCaseError:
        print(f"unknown case: {args.case}", file=sys.stderr)
        return 2
    n_list = [int(x) for x in args.N_list.split(",")]
    print("N,finite_sup,tail_bound,certified_C,certified")
    for n in n_list:
        gram = catalog.build_case_gram(inst, n, mode="closed")
        est = op.schur_constant(gram, inst.schur_tail)
        print(f"{n},{est.finite_sup!r},{est.tail_bound!r},"
              f"{est.upper!r},{est.certified}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="aos",
        description="verification harness for almost-orthogonal sequence "
                    "inequalities over weighted probability spaces")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print the case roster")

    v = sub.add_parser("verify", help="run the verification bundle")
    v.add_argument("case", nargs="?", help="case id (or use --all)")
    v.add_argument("--all", action="store_true", help="run every case")
    v.add_argument("--N", type=int, default=32, help="truncation (<= 128)")
    v.add_argument("--param", action="append", metavar="k=v",
                   help="case parameter override")
    v.add_argument("--tol", type=float, default=None,
                   help="reserved: report-level tolerance override")
    v.add_argument("--format", choices=("json", "csv", "md"), default="json")
    v.add_argument("--out", help="output file (or directory with --all)")
    v.add_argument("--jobs", type=int, default=0,
                   help="worker processes for --all (default: cores; "
                        "env AOS_JOBS overrides)")

    g = sub.add_parser("gram", help="dump Gram entries as CSV")
    g.add_argument("case")
    g.add_argument("--N", type=int, default=8)
    g.add_argument("--mode", choices=("closed", "numeric", "both"),
                   default="closed")
    g.add_argument("--param", action="append", metavar="k=v")
    g.add_argument("--out")

    s = sub.add_parser("schur", help="finite/certified Schur constants per N")
    s.add_argument("case")
    s.add_argument("--N-list", default="8,16,32,64")
    s.add_argument("--param", action="append", metavar="k=v")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify" and not args.all and not args.case:
        ap.error("verify needs a case id or --all")
    try:
        if args.command == "list":
            return cmd_list(args)
        if args.command == "verify":
            if args.N > 128:
                ap.error("--N must be <= 128")
            return cmd_verify(args)
        if args.command == "gram":
            return cmd_gram(args)
        if args.command == "schur":
            return cmd_schur(args)
    except UnknownCaseError as exc:
        print(f"unknown case: {exc}", file=sys.stderr)
        return 2
    except AosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
