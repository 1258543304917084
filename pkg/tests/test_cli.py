"""Command-line interface: outputs, determinism, exit codes.

Oracles: class counts are [DERIVED]/[PAPER] as in the library tests;
exit-code behaviors are [TRIVIAL] contract checks, including the
mutation tests on the dataset verifier.
"""

import json
from pathlib import Path

import pytest

from tripres.cli import main
from tripres.presentations import emit_labeling, load_appendix


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_torsion_free(tmp_path, capsys):
    code, out, _ = run(["enumerate", "--mode", "torsion-free",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = (tmp_path / "presentations_torsion-free_color.jsonl") \
        .read_text().splitlines()
    assert len(lines) == 45
    rec = json.loads(lines[0])
    assert rec["id"] == "K1"
    assert rec["torsion"] is False
    assert len(rec["labels"]) == 15


def test_enumerate_deterministic_across_worker_flags(tmp_path, capsys):
    # [TRIVIAL] same cached search, any worker flag: byte-identical
    outs = []
    for w in ("1", "4"):
        d = tmp_path / f"w{w}"
        code, _, _ = run(["enumerate", "--mode", "torsion-free",
                          "--workers", w, "--out", str(d)], capsys)
        assert code == 0
        outs.append((d / "presentations_torsion-free_color.jsonl")
                    .read_bytes())
    assert outs[0] == outs[1]


def test_enumerate_csv(tmp_path, capsys):
    code, _, _ = run(["enumerate", "--mode", "torsion-free", "--format",
                      "csv", "--out", str(tmp_path)], capsys)
    assert code == 0
    lines = (tmp_path / "presentations_torsion-free_color.csv") \
        .read_text().splitlines()
    assert len(lines) == 46
    assert lines[0].startswith("id,code,labels")


def test_classify_torsion_free(tmp_path, capsys):
    run(["enumerate", "--mode", "torsion-free", "--out", str(tmp_path)],
        capsys)
    pres = tmp_path / "presentations_torsion-free_color.jsonl"
    code, out, _ = run(["classify", str(pres), "--out", str(tmp_path)],
                       capsys)
    assert code == 0
    assert "23 dual-graph classes" in out
    lines = (tmp_path / "dual_graph_classes.jsonl").read_text().splitlines()
    assert len(lines) == 23
    sizes = [json.loads(l)["size"] for l in lines]
    assert sum(sizes) == 45


def test_classify_single_record(tmp_path, capsys):
    rows = load_appendix()
    rec = {"id": "T24", "labels": list(rows[0][2].labels)}
    pres = tmp_path / "one.jsonl"
    pres.write_text(json.dumps(rec) + "\n")
    code, out, _ = run(["classify", str(pres), "--out", str(tmp_path)],
                       capsys)
    assert code == 0
    assert "1 dual-graph classes" in out


def test_classify_invalid_record_exit_3(tmp_path, capsys):
    pres = tmp_path / "bad.jsonl"
    pres.write_text('{"id": "X", "labels": [1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]}\n')
    code, _, err = run(["classify", str(pres), "--out", str(tmp_path)],
                       capsys)
    assert code == 3


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(["classify", str(tmp_path / "nope.jsonl"),
                        "--out", str(tmp_path)], capsys)
    assert code == 2


def test_buildings_subset(tmp_path, capsys):
    rows = {n: lab for n, _t, lab in load_appendix()}
    pres = tmp_path / "p.jsonl"
    pres.write_text("\n".join(
        json.dumps({"id": n, "labels": list(rows[n].labels)})
        for n in ("T24", "T25", "T28")) + "\n")
    code, out, _ = run(["buildings", str(pres), "--out", str(tmp_path)],
                       capsys)
    assert code == 0
    recs = [json.loads(l) for l in
            (tmp_path / "building_classes.jsonl").read_text().splitlines()]
    assert [r["class"] for r in recs] == [1, 2, 2]


def test_verify_appendix_skip_tags(capsys):
    code, out, _ = run(["verify-appendix", "--skip-tags"], capsys)
    assert code == 0
    assert "168 rows checked, 0 failures" in out


def test_verify_appendix_swapped_label_fails(tmp_path, capsys):
    # [TRIVIAL] mutation: swap two labels in one line
    rows = load_appendix()
    lines = [emit_labeling(lab, name=n, tag=t) for n, t, lab in rows]
    lab = list(rows[0][2].labels)
    lab[2], lab[3] = lab[3], lab[2]
    from tripres.presentations import Labeling
    lines[0] = emit_labeling(Labeling(tuple(lab)), name="T24", tag=1)
    ds = tmp_path / "mutated.txt"
    ds.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["verify-appendix", "--skip-tags",
                        "--dataset", str(ds)], capsys)
    assert code == 5
    assert "MISMATCH" in out


def test_verify_appendix_duplicate_line_fails(tmp_path, capsys):
    rows = load_appendix()
    lines = [emit_labeling(lab, name=n, tag=t) for n, t, lab in rows]
    lines.append(lines[0])
    ds = tmp_path / "dup.txt"
    ds.write_text("\n".join(lines) + "\n")
    code, out, _ = run(["verify-appendix", "--skip-tags",
                        "--dataset", str(ds)], capsys)
    assert code == 5
    assert "equivalent to" in out


def test_mgon_command(capsys):
    code, out, _ = run(["mgon", "T24", "--word", "abcbcb"], capsys)
    assert code == 0
    rec = json.loads(out.splitlines()[-1])
    assert rec["verified"] is True
    assert rec["vertices"] == 6


def test_mgon_bad_word_exit_3(capsys):
    code, _, err = run(["mgon", "T24", "--word", "abca"], capsys)
    assert code == 3


def test_export_group(capsys):
    code, out, _ = run(["export-group", "T24"], capsys)
    assert code == 0
    rec = json.loads(out.splitlines()[-1])
    assert rec["generators"] == 15
    assert len(rec["relators"]) == 17


def test_unknown_id_exit_3(capsys):
    code, _, _ = run(["export-group", "T999"], capsys)
    assert code == 3
