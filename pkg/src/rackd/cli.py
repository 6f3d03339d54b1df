"""Command-line entry point: classify, verify, census, table, cocycle-check, reps, sweep."""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import typed
from .group import Ambient, ConjClassSpec, SplitPart, all_class_specs, class_elements, OVERFLOW
from .perm import CycleType

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_UNKNOWN = 3


@dataclass
class RunConfig:
    caps: dict[str, int] = field(default_factory=dict)
    threads: int = 1
    fmt: str = "text"
    budget: int = 5000

    def apply(self) -> None:
        if self.caps:
            typed.set_caps(**self.caps)


def parse_caps(text: str | None) -> dict[str, int]:
    """``"orbit=1000,subrack=50"`` → {"orbit": 1000, "subrack": 50}."""
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        k, sep, v = item.partition("=")
        if not sep:
            raise ValueError(f"bad cap entry {item!r}")
        out[k.strip()] = int(v)
    return out


def parse_m_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(text)]


def spec_from_args(args) -> ConjClassSpec:
    t = CycleType.parse(args.type)
    amb = Ambient(args.group)
    if t.degree > args.m:
        raise ValueError(f"type {args.type} has degree {t.degree} > m = {args.m}")
    split = SplitPart(args.split) if args.split else None
    return ConjClassSpec(args.m, t, amb, split)


def dump(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------- commands

def cmd_classify(args, cfg: RunConfig) -> int:
    spec = spec_from_args(args)
    v = typed.classify(spec, cfg.budget)
    if cfg.fmt == "json":
        print(dump(v.to_json()))
    else:
        line = f"{spec.label()}: {v.status.value}"
        if v.tag:
            line += f" [{v.tag}]"
        if v.witness is not None:
            line += f" via {v.witness.provenance} (|R|={len(v.witness.R)}, |S|={len(v.witness.S)})"
        if v.scope:
            line += f"; scope: {v.scope}"
        print(line)
        for k, val in sorted(v.notes.items()):
            print(f"  {k}: {val}")
    return EXIT_UNKNOWN if v.status is typed.Status.UNKNOWN else EXIT_OK


def _classify_one(job):
    spec, budget, caps = job
    if caps:
        typed.set_caps(**caps)
    return typed.classify(spec, budget).to_json()


def cmd_sweep(args, cfg: RunConfig) -> int:
    specs = [s for m in parse_m_range(args.m) for s in all_class_specs(m)]
    jobs = [(s, cfg.budget, cfg.caps) for s in specs]
    if cfg.threads > 1:
        with ProcessPoolExecutor(cfg.threads) as pool:
            results = list(pool.map(_classify_one, jobs))
    else:
        results = [_classify_one(j) for j in jobs]
    unknown = sum(r["status"] == "UNKNOWN" for r in results)
    if cfg.fmt == "json":
        print(dump(results))
    else:
        for r in results:
            extra = r.get("tag") or (r["witness"]["provenance"] if "witness" in r else r.get("scope", ""))
            print(f"{r['label']:32s} {r['status']:11s} {extra}")
        print(f"{len(results)} classes, {unknown} unknown")
    return EXIT_UNKNOWN if unknown else EXIT_OK


def _load_records(path: str) -> list[dict]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    text = text.strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = []
        for i, line in enumerate(text.splitlines(), 1):
            if line.strip():
                try:
                    data.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise ValueError(f"{path}:{i}:{e.colno}: {e.msg}") from None
    return data if isinstance(data, list) else [data]


def verify_record(rec: dict) -> tuple[bool, str]:
    """Re-check one certificate from scratch: a witness, a verdict carrying one, or a triple."""
    from .abelian import CommutingTriple
    if rec.get("kind") == "commuting_triple":
        t = CommutingTriple.from_json(rec)
        bad = [k for k, v in t.check().items() if not v]
        return not bad, ("commuting triple ok" if not bad else f"failed: {bad}")
    if "status" in rec:
        if rec["status"] != "TYPE_D":
            return True, f"{rec.get('label', '?')}: {rec['status']} (nothing to verify)"
        rec = rec["witness"]
    w = typed.TypeDWitness.from_json(rec)
    chk = typed.check_witness(w)
    label = w.ambient.label() if w.ambient else "bare witness"
    return chk.ok, f"{label}: " + ("ok" if chk.ok else f"violation: {chk.violation}")


def cmd_verify(args, cfg: RunConfig) -> int:
    records = _load_records(args.file)
    results = [verify_record(r) for r in records]
    if cfg.fmt == "json":
        print(dump([{"ok": ok, "message": msg} for ok, msg in results]))
    else:
        for _ok, msg in results:
            print(msg)
    return EXIT_OK if all(ok for ok, _ in results) else EXIT_VIOLATION


def cmd_census(args, cfg: RunConfig) -> int:
    from .rack import FiniteRack, two_generated_census
    spec = spec_from_args(args)
    els = class_elements(spec, cap=typed.current_caps()["embed"])
    if els is OVERFLOW:
        print("class above cap", file=sys.stderr)
        return EXIT_UNKNOWN
    counts = two_generated_census(FiniteRack.from_permutations(els), homogeneous=True)
    names = sorted(counts)
    if cfg.fmt == "json":
        print(dump({"class": spec.to_json(), "size": len(els), "census": {k: counts[k] for k in names}}))
    else:
        print(f"{spec.label()} ({len(els)} elements), proper 2-generated subracks through one element:")
        for k in names:
            print(f"  {k:20s} {counts[k]}")
    return EXIT_OK


def cmd_table(args, cfg: RunConfig) -> int:
    from .reps import survivors, survivor_tables
    amb = Ambient(args.group)
    out = []
    for m in parse_m_range(args.m):
        rows = survivor_tables(m, amb, cfg.budget)
        out.append((m, rows))
    if cfg.fmt == "json":
        print(dump([{"m": m, "group": amb.value, "rows": [r.to_json() for r in rows],
                     "survivors": [r.to_json() for r in survivors(rows)]} for m, rows in out]))
    else:
        for m, rows in out:
            print(f"== {amb.value}_{m}")
            for r in rows if args.all_rows else survivors(rows):
                print("  " + r.line())
            if not survivors(rows):
                print("  no surviving pairs")
    return EXIT_OK


def cmd_cocycle_check(args, cfg: RunConfig) -> int:
    from .cocycle import Cocycle, braiding_check, g_map_faithful, validate_cocycle
    records = _load_records(args.file)
    report = []
    bad = False
    for rec in records:
        c = Cocycle.from_json(rec)
        v, b = validate_cocycle(c), braiding_check(c)
        entry = {"size": c.rack.size, "cocycle": v.ok, "braid": b.ok,
                 "violation": list(map(str, v.violation)) if v.violation else None}
        if v.ok:
            entry["faithful"] = g_map_faithful(c)
        if v.ok != b.ok:
            entry["disagreement"] = True
        bad |= not v.ok
        report.append(entry)
    if cfg.fmt == "json":
        print(dump(report))
    else:
        for e in report:
            print(f"size {e['size']}: cocycle={e['cocycle']} braid={e['braid']}"
                  + (f" faithful={e['faithful']}" if "faithful" in e else "")
                  + (f" first violation {e['violation']}" if e["violation"] else ""))
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_reps(args, cfg: RunConfig) -> int:
    from .reps import enumerate_degree_one, q_sigma_sigma
    t = CycleType.parse(args.type)
    if args.m:
        t = t.pad(args.m)
    rows = [(r, q_sigma_sigma(t, r)) for r in enumerate_degree_one(t)]
    if cfg.fmt == "json":
        print(dump([{"rep": r.to_json(), "q_sigma_sigma": {"N": q.N, "exponent": q.root_exponent()}}
                    for r, q in rows]))
    else:
        print(f"degree-one characters of the centralizer of type ({t.label()}): {len(rows)}")
        for r, q in rows:
            mark = "  (q = -1)" if q == -1 else ""
            print(f"  {r.label():40s} q_sigma_sigma = {q!r}{mark}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=5000, help="splitting-search budget")
    for name in typed.CAP_NAMES:
        common.add_argument(f"--cap-{name}", type=int, default=None)

    def cls_args(p, type_required=True):
        p.add_argument("--group", choices=["S", "A"], required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--type", required=type_required)
        p.add_argument("--split", choices=["plus", "minus"])

    ap = argparse.ArgumentParser(prog="rackd", description="Type-D racks from conjugacy classes of S_m and A_m.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="verdict and certificate for one class")
    cls_args(p)
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("sweep", parents=[common], help="classify every class for a range of m")
    p.add_argument("--m", required=True, help="degree or range a..b")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify", parents=[common], help="re-verify certificates from a JSON file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("census", parents=[common], help="two-generated subracks of a class")
    cls_args(p)
    p.set_defaults(func=cmd_census)
    p = sub.add_parser("table", parents=[common], help="surviving (class, character) pairs")
    p.add_argument("--group", choices=["S", "A"], required=True)
    p.add_argument("--m", required=True, help="degree or range a..b")
    p.add_argument("--all-rows", action="store_true", help="print kills as well as survivors")
    p.set_defaults(func=cmd_table)
    p = sub.add_parser("cocycle-check", parents=[common], help="cocycle identity and braid equation")
    p.add_argument("file")
    p.set_defaults(func=cmd_cocycle_check)
    p = sub.add_parser("reps", parents=[common], help="degree-one characters and q_sigma_sigma")
    p.add_argument("--type", required=True)
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_reps)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        caps = parse_caps(os.environ.get("RACKD_CAPS"))
        for name in typed.CAP_NAMES:
            v = getattr(args, f"cap_{name}", None)
            if v is not None:
                caps[name] = v
        cfg = RunConfig(caps, args.threads, args.format, args.budget)
        cfg.apply()
        return args.func(args, cfg)
    except (ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
