"""Command-line pipeline: enumerate, classify, verify, export.

Commands write JSON-lines files under an output directory and print a
short summary.  All outputs are deterministic: records are emitted in
canonical code order and JSON keys are sorted, so re-runs (and runs with
different worker counts) produce byte-identical files.

Exit codes: 0 success, 2 I/O failure, 3 invalid input record,
4 more than two building classes, 5 dataset verification mismatch,
6 m-gon link verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import store
from .canon import canonical_form
from .polyhedra import (abelianization, dual_graph, expand_index3,
                        group_presentation)
from .presentations import (Labeling, emit_labeling, labeling_of,
                            load_appendix, parse_appendix_labeling,
                            reduce_codes, triples_from_labeling, validate,
                            has_torsion)

EXIT_IO = 2
EXIT_BAD_RECORD = 3
EXIT_TOO_MANY_CLASSES = 4
EXIT_DATASET_MISMATCH = 5
EXIT_LINK_MISMATCH = 6


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _write_text(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e}")


def _read_lines(path: Path):
    try:
        return Path(path).read_text().splitlines()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e}")


def _json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_presentations(path):
    """Read a presentations JSON-lines file into (id, Labeling) pairs."""
    out = []
    for i, line in enumerate(_read_lines(path)):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            lab = Labeling(tuple(rec["labels"]))
        except (ValueError, KeyError, TypeError) as e:
            raise CliError(EXIT_BAD_RECORD, f"{path}:{i + 1}: bad record: {e}")
        try:
            ok = validate(triples_from_labeling(lab))
        except ValueError:
            ok = False
        if not ok:
            raise CliError(EXIT_BAD_RECORD,
                           f"{path}:{i + 1}: labeling does not validate")
        out.append((rec.get("id", f"L{i + 1}"), lab))
    return out


# --- commands ----------------------------------------------------------------


def cmd_enumerate(args) -> int:
    raw = store.raw_enumeration(workers=args.workers, cache=args.cache)
    codes = store.class_codes(args.mode, args.equivalence == "dual",
                              workers=args.workers, cache=args.cache)
    del raw
    lines = []
    rows = []
    for i, code in enumerate(codes):
        lab = Labeling.from_code(int(code))
        K = triples_from_labeling(lab)
        rec = {"id": f"K{i + 1}", "code": int(code),
               "labels": list(lab.labels),
               "torsion": has_torsion(K),
               "diagonal_count": K.diagonal_count,
               "triangle_count": K.triangle_count}
        lines.append(_json_line(rec))
        rows.append(rec)
    out = Path(args.out) / f"presentations_{args.mode}_{args.equivalence}.jsonl"
    if args.format == "csv":
        out = out.with_suffix(".csv")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "code", "labels", "torsion", "diagonal_count",
                    "triangle_count"])
        for r in rows:
            w.writerow([r["id"], r["code"],
                        " ".join(map(str, r["labels"])),
                        int(r["torsion"]), r["diagonal_count"],
                        r["triangle_count"]])
        _write_text(out, buf.getvalue())
    else:
        _write_text(out, "\n".join(lines) + "\n")
    print(f"{len(codes)} classes (mode={args.mode}, "
          f"equivalence={args.equivalence}) -> {out}")
    return 0


def cmd_classify(args) -> int:
    records = _load_presentations(args.presentations)
    by_cert = {}
    for pid, lab in records:
        cert = canonical_form(dual_graph(
            expand_index3(triples_from_labeling(lab))).graph)
        by_cert.setdefault(cert.data, []).append(pid)
    classes = sorted(by_cert.items(), key=lambda kv: kv[1][0])
    lines = []
    for i, (data, members) in enumerate(classes):
        lines.append(_json_line({
            "class": i + 1,
            "certificate_sha256": hashlib.sha256(data).hexdigest(),
            "representative": members[0],
            "size": len(members),
            "members": members}))
    out = Path(args.out) / "dual_graph_classes.jsonl"
    _write_text(out, "\n".join(lines) + "\n")
    print(f"{len(records)} presentations -> {len(classes)} dual-graph "
          f"classes -> {out}")
    return 0


def cmd_buildings(args) -> int:
    records = _load_presentations(args.presentations)
    lines = []
    counts = {}
    unmatched = []
    for pid, lab in records:
        cert = store.ball_certificate(triples_from_labeling(lab),
                                      cache=args.cache)
        counts[cert] = counts.get(cert, 0) + 1
        if cert == "ball:unmatched":
            unmatched.append(pid)
            cls = None
        else:
            cls = int(cert.removeprefix("ball:"))
        lines.append(_json_line({"id": pid, "class": cls,
                                 "certificate": cert}))
    out = Path(args.out) / "building_classes.jsonl"
    _write_text(out, "\n".join(lines) + "\n")
    summary = ", ".join(f"{c.removeprefix('ball:')}: {n}"
                        for c, n in sorted(counts.items()))
    print(f"{len(records)} presentations -> building classes {{{summary}}} "
          f"-> {out}")
    if unmatched:
        raise CliError(EXIT_TOO_MANY_CLASSES,
                       f"balls isomorphic to neither reference: {unmatched}")
    return 0


def cmd_verify_appendix(args) -> int:
    failures = []
    rows = load_appendix()
    if args.dataset:
        rows = []
        for i, line in enumerate(_read_lines(args.dataset)):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append(parse_appendix_labeling(line))
            except ValueError as e:
                failures.append(f"line {i + 1}: {e}")
    presentations = []
    for name, tag, lab in rows:
        try:
            K = triples_from_labeling(lab)
        except ValueError as e:
            failures.append(f"{name}: no valid presentation: {e}")
            continue
        if not validate(K):
            failures.append(f"{name}: labeling does not validate")
            continue
        if not has_torsion(K):
            failures.append(f"{name}: expected torsion, found none")
        presentations.append((name, tag, lab, K))

    # pairwise inequivalence via canonical orbit codes
    codes = np.array([lab.code() for _n, _t, lab, _K in presentations],
                     dtype=np.uint64)
    canon_codes = reduce_codes(codes, False)
    seen = {}
    for (name, _t, _lab, _K), cc in zip(presentations, canon_codes):
        cc = int(cc)
        if cc in seen:
            failures.append(f"{name}: equivalent to {seen[cc]}")
        else:
            seen[cc] = name

    # each row must be an enumerated torsion class member
    enumerated = set(int(c) for c in
                     store.class_codes("torsion", False, cache=args.cache))
    for (name, _t, _lab, _K), cc in zip(presentations, canon_codes):
        if int(cc) not in enumerated:
            failures.append(f"{name}: not an enumerated torsion class")

    # pairwise non-isomorphic dual graphs
    certs = {}
    for name, _t, _lab, K in presentations:
        cert = canonical_form(dual_graph(expand_index3(K)).graph)
        if cert.data in certs:
            failures.append(f"{name}: dual graph isomorphic to "
                            f"{certs[cert.data]}")
        else:
            certs[cert.data] = name

    # building tags against the ball invariant
    if not args.skip_tags:
        for name, tag, _lab, K in presentations:
            cert = store.ball_certificate(K, cache=args.cache)
            if cert != f"ball:{tag}":
                failures.append(f"{name}: tag ({tag}) but ball certificate "
                                f"{cert}")

    print(f"{len(rows)} rows checked, {len(failures)} failures")
    for f in failures:
        print(f"  MISMATCH {f}")
    if failures:
        raise CliError(EXIT_DATASET_MISMATCH,
                       f"{len(failures)} dataset mismatches")
    return 0


def _resolve_id(pid: str):
    """A presentation by id: T24..T191 from the embedded table, T1..T23
    the torsion-free class representatives in canonical order."""
    if not pid.startswith("T"):
        raise CliError(EXIT_BAD_RECORD, f"unknown presentation id {pid!r}")
    try:
        n = int(pid[1:])
    except ValueError:
        raise CliError(EXIT_BAD_RECORD, f"unknown presentation id {pid!r}")
    if n >= 24:
        for name, _tag, lab in load_appendix():
            if name == pid:
                return triples_from_labeling(lab)
        raise CliError(EXIT_BAD_RECORD, f"{pid} not in the embedded table")
    codes = store.class_codes("torsion-free", True)
    if not 1 <= n <= len(codes):
        raise CliError(EXIT_BAD_RECORD, f"{pid} out of range")
    return triples_from_labeling(Labeling.from_code(int(codes[n - 1])))


def cmd_mgon(args) -> int:
    from .mgon import (VerificationFailed, link_types, validate_pattern_word,
                      verify_theorem_4_1)

    K = _resolve_id(args.id)
    try:
        w = validate_pattern_word(args.word)
    except ValueError as e:
        raise CliError(EXIT_BAD_RECORD, str(e))
    try:
        report = verify_theorem_4_1(K, w)
    except VerificationFailed as e:
        print(f"FAILED vertex {e.vertex + 1}: expected {e.expected}, "
              f"measured {e.measured}")
        raise CliError(EXIT_LINK_MISMATCH, str(e))
    rec = {"id": args.id, "word": args.word, "m": report.m,
           "vertices": report.vertex_count, "faces": report.face_count,
           "link_types": list(link_types(w).types), "verified": report.ok}
    if args.out:
        _write_text(Path(args.out) / f"mgon_{args.id}_{args.word}.json",
                    _json_line(rec) + "\n")
    print(_json_line(rec))
    return 0


def cmd_export_group(args) -> int:
    K = _resolve_id(args.id)
    G = group_presentation(K)
    divisors, rank = abelianization(G)
    rec = {"id": args.id,
           "labeling": emit_labeling(labeling_of(K)),
           "generators": G.generator_count,
           "relators": [list(w) for w in G.relators],
           "presentation": G.to_text(),
           "abelianization": {"divisors": list(map(int, divisors)),
                              "free_rank": int(rank)}}
    if args.format == "text":
        print(G.to_text())
    else:
        print(_json_line(rec))
    if args.out:
        _write_text(Path(args.out) / f"group_{args.id}.json",
                    _json_line(rec) + "\n")
    return 0


# --- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tripres",
        description="Triangle presentations over the smallest thick "
                    "generalized quadrangle: enumeration and classification.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cache=True, workers=False, out=True):
        if out:
            sp.add_argument("--out", default="out",
                            help="output directory (default: ./out)")
        if cache:
            sp.add_argument("--no-cache", dest="cache", action="store_false",
                            help="recompute instead of using the disk cache")
        if workers:
            sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("enumerate", help="emit equivalence class "
                        "representatives")
    sp.add_argument("--mode", choices=["torsion-free", "torsion", "all"],
                    default="all")
    sp.add_argument("--equivalence", choices=["color", "dual"],
                    default="color",
                    help="color-preserving or full (with dualities) group")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("classify", help="partition presentations by dual "
                        "graph isomorphism")
    sp.add_argument("presentations", help="presentations JSON-lines file")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("buildings", help="building class of each "
                        "presentation")
    sp.add_argument("presentations", help="presentations JSON-lines file")
    common(sp)
    sp.set_defaults(func=cmd_buildings)

    sp = sub.add_parser("verify-appendix", help="check the embedded dataset")
    sp.add_argument("--dataset", help="verify an external dataset file "
                    "instead of the embedded one")
    sp.add_argument("--skip-tags", action="store_true",
                    help="skip the building tag comparison")
    common(sp, out=False)
    sp.set_defaults(func=cmd_verify_appendix)

    sp = sub.add_parser("mgon", help="build and verify an m-gonal "
                        "presentation")
    sp.add_argument("id", help="presentation id, e.g. T24")
    sp.add_argument("--word", required=True, help="pattern word, e.g. abcbcb")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_mgon, cache=True)

    sp = sub.add_parser("export-group", help="group presentation and "
                        "abelianization")
    sp.add_argument("id", help="presentation id, e.g. T24")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_export_group, cache=True)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
