"""Command line: ``mi-racah verify`` and ``mi-racah table``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import tables
from .verify import CHECKS, ConfigError, RunConfig, run_dict

FLAG_KEYS = ("family", "N", "b", "c", "d", "q", "D", "checks", "precision_bits",
             "out", "format", "allow_unvalidated", "timings")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mi-racah",
                                 description="Exact verification of multi-indexed (q-)Racah systems.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (("verify", "run verification suites"),
                       ("table", "write polynomial, grid and spectrum tables")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", help="JSON file: one config object or a list of them")
        sp.add_argument("--family", choices=("racah", "qracah"))
        sp.add_argument("--N", type=int)
        sp.add_argument("--b")
        sp.add_argument("--c")
        sp.add_argument("--d")
        sp.add_argument("--q")
        sp.add_argument("--D", help="comma separated indices, or 'all'")
        sp.add_argument("--checks", help=f"'all' or a comma separated subset of: {', '.join(CHECKS)}")
        sp.add_argument("--precision-bits", type=int)
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--allow-unvalidated", action="store_true", default=None)
        sp.add_argument("--timings", action="store_true", default=None,
                        help="record wall-clock runtimes (reports are then not reproducible)")
        sp.add_argument("--jobs", type=int, default=None,
                        help="worker processes for a batch config")
    return ap


def _load_configs(args) -> list[dict]:
    flags = {k: getattr(args, k) for k in FLAG_KEYS if getattr(args, k) is not None}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        items = raw if isinstance(raw, list) else [raw]
        if not all(isinstance(item, dict) for item in items):
            raise ConfigError("config must be an object or a list of objects")
        # explicit flags override the file
        return [{**item, **flags} for item in items]
    return [flags]


def _report_csv(docs: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("config", "name", "case", "status", "exact_residuals", "float_residuals",
                "runtime_ms", "detail"))
    for i, doc in enumerate(docs):
        for r in doc["records"]:
            w.writerow((i, r["name"], r["case"], r["status"], " ".join(r["exact_residuals"]),
                        " ".join(r["float_residuals"]),
                        "" if r["runtime_ms"] is None else r["runtime_ms"], r["detail"]))
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _verify(cfgs: list[RunConfig], raws: list[dict], jobs: int | None) -> int:
    if len(raws) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            docs = list(pool.map(run_dict, raws))
    else:
        docs = [run_dict(raws[0])]
    first = cfgs[0]
    if first.format == "csv":
        text = _report_csv(docs)
    else:
        body = docs[0] if len(docs) == 1 else {"schema": docs[0]["schema"], "runs": docs}
        text = json.dumps(body, indent=2) + "\n"
    _emit(text, first.out)
    for doc in docs:
        s = doc["summary"]
        print(f"{doc['params']}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip",
              file=sys.stderr)
    return 0 if all(doc["summary"]["fail"] == 0 for doc in docs) else 1


def _table(cfgs: list[RunConfig]) -> int:
    docs = [tables.table_document(cfg) for cfg in cfgs]
    first = cfgs[0]
    if first.format == "csv":
        text = "".join(tables.to_csv(doc) if i == 0 else tables.to_csv(doc).split("\n", 1)[1]
                       for i, doc in enumerate(docs))
    else:
        text = tables.to_json(docs[0] if len(docs) == 1 else {"runs": docs})
    _emit(text, first.out)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        raws = _load_configs(args)
        cfgs = [RunConfig.from_dict(raw) for raw in raws]
        for cfg in cfgs:
            cfg.params()
    except ConfigError as e:
        print(f"mi-racah: config error: {e}", file=sys.stderr)
        return 2
    if args.command == "verify":
        return _verify(cfgs, raws, args.jobs)
    return _table(cfgs)


if __name__ == "__main__":
    sys.exit(main())
