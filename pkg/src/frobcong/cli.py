"""Command-line front end: ``frobcong compute|verify|search|dissect``.

Exit codes: 0 success (or congruence holds), 3 counterexample found,
2 usage error, 1 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from typing import Any, Optional, Sequence

from . import __version__
from .congruence import (
    CongruenceFamily,
    crt_combine,
    lift_family,
    search,
    verify_composite,
    verify_dissection_ingredients,
    verify_family,
    verify_single,
)
from .cphi import compute_table
from .errors import UsageError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_COUNTEREXAMPLE = 3

log = logging.getLogger("frobcong")


def _record(command: str, params: dict, method: str, results: Any, started: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": params,
        "method": method,
        "results": results,
        "elapsed_ms": int((time.perf_counter() - started) * 1000),
    }


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(["" if v is None else v for v in row] for row in rows)
    return buf.getvalue()


def _json(record: dict) -> str:
    return json.dumps(record, indent=2, ensure_ascii=False) + "\n"


def _witness(cx) -> Optional[dict]:
    if cx is None:
        return None
    return {"k": cx.k, "n": cx.n, "argument": cx.argument, "residue": str(cx.residue), "modulus": cx.modulus}


# -- commands ----------------------------------------------------------------


def cmd_compute(args, params, started):
    if args.colors < 1:
        raise UsageError(f"--colors must be >= 1, got {args.colors}")
    if args.upto < 0:
        raise UsageError(f"--upto must be >= 0, got {args.upto}")
    table = compute_table(args.colors, args.upto, args.mod, args.method)
    rows = [(n, str(v)) for n, v in enumerate(table.values)]
    if args.format == "csv":
        return _csv(["n", "value"], rows), EXIT_OK
    results = {
        "k": table.k,
        "ring": str(table.ring),
        "values": [{"n": n, "value": v} for n, v in rows],
    }
    return _json(_record("compute", params, str(table.method), results, started)), EXIT_OK


def _parse_composite(spec: str) -> list[CongruenceFamily]:
    families = []
    for part in spec.split(","):
        try:
            k0, p, r = (int(x) for x in part.strip().split(":"))
        except ValueError:
            raise UsageError(f"composite member {part!r} is not of the form k0:p:r") from None
        families.append(lift_family(k0, p, r))
    return families


def cmd_verify(args, params, started):
    method = args.method
    N_max = args.family_upto if args.family_upto is not None else 0
    if args.composite:
        c = crt_combine(_parse_composite(args.composite))
        verdict = verify_composite(c, N_max, args.n_upto)
        statement = str(c)
        method = "descent"
    else:
        missing = [f for f in ("prime", "residue", "colors") if getattr(args, f) is None]
        if missing:
            raise UsageError("verify needs " + ", ".join("--" + m for m in missing) + " (or --composite)")
        if args.step is not None or args.family_upto is not None:
            f = CongruenceFamily(args.colors, args.prime, args.residue, args.step if args.step is not None else args.prime)
            verdict = verify_family(f, N_max, args.n_upto, method)
            statement = str(f)
        else:
            verdict = verify_single(args.colors, args.prime, args.residue, args.n_upto, method)
            statement = str(CongruenceFamily(args.colors, args.prime, args.residue))
    code = EXIT_OK if verdict.holds else EXIT_COUNTEREXAMPLE
    if args.format == "csv":
        w = _witness(verdict.counterexample) or {}
        row = [
            str(verdict.holds).lower(),
            verdict.checked_n_max,
            verdict.checked_N_max,
            w.get("k"),
            w.get("n"),
            w.get("argument"),
            w.get("residue"),
            w.get("modulus"),
        ]
        header = ["holds", "checked_n_max", "checked_N_max", "witness_k", "witness_n", "witness_argument",
                  "witness_residue", "witness_modulus"]
        return _csv(header, [row]), code
    results = {
        "statement": statement,
        "holds": verdict.holds,
        "checked_n_max": verdict.checked_n_max,
        "checked_N_max": verdict.checked_N_max,
        "counterexample": _witness(verdict.counterexample),
    }
    return _json(_record("verify", params, str(method), results, started)), code


def cmd_search(args, params, started):
    if args.colors_from < 1:
        raise UsageError(f"--colors-from must be >= 1, got {args.colors_from}")
    found = search(args.prime, range(args.colors_from, args.colors_to + 1), args.n_scan, args.method)
    rows = [(c.k, c.r, c.p, c.n_scan, c.status) for c in found]
    if args.format == "csv":
        return _csv(["k", "r", "p", "n_scan", "status"], rows), EXIT_OK
    results = {"candidates": [{"k": k, "r": r, "p": p, "n_scan": s, "status": st} for k, r, p, s, st in rows]}
    return _json(_record("search", params, str(args.method), results, started)), EXIT_OK


def cmd_dissect(args, params, started):
    report = verify_dissection_ingredients(args.colors, args.prime, args.residue, args.j_upto, args.n_upto)
    rows = [(d.j, d.z_exponent, d.status, d.witness_n, None if d.witness_residue is None else str(d.witness_residue))
            for d in report]
    if args.format == "csv":
        return _csv(["j", "z_exponent", "status", "witness_n", "witness_residue"], rows), EXIT_OK
    results = {
        "rows": [
            {"j": j, "z_exponent": e, "status": s, "witness_n": wn, "witness_residue": wr}
            for j, e, s, wn, wr in rows
        ]
    }
    return _json(_record("dissect", params, "direct", results, started)), EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobcong",
        description="k-colored generalized Frobenius partitions and their congruences",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format):
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("compute", help="tabulate cφ_K(n) for n = 0..T")
    p.add_argument("--colors", type=int, required=True, metavar="K")
    p.add_argument("--upto", type=int, required=True, metavar="T")
    p.add_argument("--mod", type=int, metavar="M", help="reduce modulo M (descent needs M prime)")
    p.add_argument("--method", choices=("direct", "descent", "theta"), default="direct")
    common(p, "csv")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check a congruence, a lifted family or a CRT composite")
    p.add_argument("--prime", type=int, metavar="P")
    p.add_argument("--residue", type=int, metavar="R")
    p.add_argument("--colors", type=int, metavar="K")
    p.add_argument("--step", type=int, metavar="S", help="color stride of the family (default P)")
    p.add_argument("--family-upto", type=int, metavar="NMAX", help="check members N = 0..NMAX")
    p.add_argument("--n-upto", type=int, required=True, metavar="NMAX2")
    p.add_argument("--composite", metavar="SPEC", help="comma-separated base cases k0:p:r, lifted and CRT-combined")
    p.add_argument("--method", choices=("direct", "descent"), default="descent")
    common(p, "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="scan for residues r with cφ_k(pn+r) ≡ 0 (mod p)")
    p.add_argument("--prime", type=int, required=True, metavar="P")
    p.add_argument("--colors-from", type=int, required=True, metavar="A")
    p.add_argument("--colors-to", type=int, required=True, metavar="B")
    p.add_argument("--n-scan", type=int, required=True, metavar="S")
    p.add_argument("--method", choices=("direct", "descent"), default="descent")
    common(p, "json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dissect", help="report vanishing of the z^(pj) rows on the class pn+r")
    p.add_argument("--prime", type=int, required=True, metavar="P")
    p.add_argument("--residue", type=int, required=True, metavar="R")
    p.add_argument("--colors", type=int, required=True, metavar="K")
    p.add_argument("--j-upto", type=int, required=True, metavar="J")
    p.add_argument("--n-upto", type=int, required=True, metavar="N")
    common(p, "json")
    p.set_defaults(func=cmd_dissect)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    params = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
    started = time.perf_counter()
    try:
        text, code = args.func(args, params, started)
    except UsageError as exc:
        print(f"frobcong {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        log.exception("internal failure")
        return EXIT_INTERNAL
    log.info("%s finished in %.0f ms", args.command, (time.perf_counter() - started) * 1000)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
