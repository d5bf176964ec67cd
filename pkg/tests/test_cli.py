from __future__ import annotations

import json
import shutil

import pytest

from hyperfuzz import formats
from hyperfuzz.cli import main
from hyperfuzz.ifalgebra import IFS


@pytest.fixture
def work(tmp_path, fixtures_dir, monkeypatch):
    for path in fixtures_dir.iterdir():
        shutil.copy(path, tmp_path / path.name)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", ["krasner.hs", "gf2.hs", "gf3.hs", "k-over-k.hs", "k-squared.hs",
                                  "gf2-squared.hs", "gf3-over-gf3.hs"])
def test_check_fixtures(work, capsys, name):
    assert run(capsys, "check", name)[0] == 0


def test_check_failure(work, capsys):
    text = (work / "krasner.hs").read_text().replace("1 . 1 = 1", "1 . 1 = 0")
    (work / "broken.hs").write_text(text)
    code, out, _ = run(capsys, "check", "broken.hs", "--json")
    assert code == 1 and "DEF2.6.ii" in out


def test_usage_errors(work, capsys):
    assert run(capsys, "check", "missing.hs")[0] == 64
    (work / "garbage.hs").write_text("kind: hyperfield\nelements: 0 1\nhyperadd:\n  0 # 0 =\n")
    code, _, err = run(capsys, "check", "garbage.hs")
    assert code == 64 and "garbage.hs:4" in err
    with pytest.raises(SystemExit) as e:
        main(["check", "krasner.hs", "--frobnicate"])
    assert e.value.code == 64
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 64


def test_fuzz_check(work, capsys):
    assert run(capsys, "fuzz-check", "krasner.hs", "k-field.ifs")[0] == 0
    assert run(capsys, "fuzz-check", "k-over-k.hs", "k-good.ifs")[0] == 0
    code, out, _ = run(capsys, "fuzz-check", "k-over-k.hs", "k-bad.ifs", "--json")
    assert code == 1
    first = json.loads(next(line for line in out.splitlines() if line.startswith("{")))
    assert first["axiom"] == "DEF3.3.i" and first["witnesses"] == [["x", "1"], ["y", "1"]]


def test_fuzz_check_needs_field_overlay(work, capsys):
    text = (work / "k-good.ifs").read_text().replace("field-overlay: k-field.ifs\n", "")
    (work / "bare.ifs").write_text(text)
    assert run(capsys, "fuzz-check", "k-over-k.hs", "bare.ifs")[0] == 64
    assert run(capsys, "fuzz-check", "k-over-k.hs", "bare.ifs", "--field-overlay", "k-field.ifs")[0] == 0


def test_characterization_flag(work, capsys):
    code, out, _ = run(capsys, "fuzz-check", "k-over-k.hs", "k-converse-gap.ifs", "--characterization")
    assert code == 1 and "DISAGREE" in out


def test_combine(work, capsys):
    (work / "out").mkdir()
    code, _, _ = run(capsys, "combine", "--op", "intersect", "--convention", "standard",
                     "k-good.ifs", "k-bad.ifs", "-o", "out/both.ifs")
    assert code == 0
    o = formats.load_overlay(work / "out" / "both.ifs")
    assert o.over == "../k-over-k.hs" and o.field_overlay_ref == "../k-field.ifs"
    assert [str(d) for d in o.ifs.mu] == ["1/3", "1/3"]


def test_combine_overflow(work, capsys):
    carrier = formats.load_structure(work / "k-over-k.hs").carrier
    (work / "hi.ifs").write_text(formats.serialize_overlay(IFS.constant(carrier, 0, 1), "k-over-k.hs"))
    code, _, err = run(capsys, "combine", "--op", "union", "--convention", "paper", "k-good.ifs", "hi.ifs")
    assert code == 1 and "DEF2.9" in err


def test_preimage(work, capsys):
    code, out, _ = run(capsys, "preimage", "--map", "k-embed.map", "--overlay", "k-squared.ifs")
    assert code == 0
    o = formats.parse_overlay(out, base=work)
    assert o.field_overlay_ref == "k-field.ifs"
    assert run(capsys, "preimage", "--map", "k-embed.map", "--overlay", "k-good.ifs")[0] == 64


def test_theorem_counterexamples_replay(work, capsys):
    code, out, _ = run(capsys, "theorem", "--id", "3.8", "--convention", "standard", "--trials", "60",
                       "--seed", "0", "--report", "r.jsonl", "--bundle", "cases", "--bundle-limit", "3")
    assert code == 2
    records = [json.loads(line) for line in (work / "r.jsonl").read_text().splitlines()]
    tally = records[-1]["tally"]
    assert tally["trials"] == 60 and tally["counterexample"] == len(records) - 1 > 0
    for i, rec in enumerate(records[:3]):
        d = work / "cases" / f"case-{i:03d}"
        if not d.exists():
            continue
        code, out, _ = run(capsys, "fuzz-check", str(d / "space.hs"), str(d / "overlay.ifs"), "--json")
        assert code == 1
        replayed = [json.loads(line) for line in out.splitlines() if line.startswith("{")]
        assert any(r["axiom"] == rec["axiom"] and r["witnesses"] == rec["witnesses"]
                   and r["lhs_value"] == rec["lhs_value"] for r in replayed)


def test_theorem_verified(work, capsys):
    code, out, _ = run(capsys, "theorem", "--id", "3.7", "--convention", "standard", "--trials", "20")
    assert code == 0 and "20/20 verified" in out


def test_theorem_reproducible(work, capsys):
    run(capsys, "theorem", "--id", "3.7", "--trials", "40", "--seed", "3", "--report", "a.jsonl")
    run(capsys, "theorem", "--id", "3.7", "--trials", "40", "--seed", "3", "--report", "b.jsonl")
    assert (work / "a.jsonl").read_text() == (work / "b.jsonl").read_text()


def test_search(work, capsys):
    code, out, _ = run(capsys, "search", "--kind", "hyperfield", "--size", "2", "--out", "hf")
    assert code == 0 and out.startswith("2 ")
    files = sorted((work / "hf").iterdir())
    assert len(files) == 2
    for f in files:
        assert run(capsys, "check", str(f))[0] == 0


def test_search_spaces(work, capsys):
    code, _, _ = run(capsys, "search", "--kind", "hypervectorspace", "--size", "2", "--field", "K", "--out", "sp")
    assert code == 0
    spaces = sorted(p for p in (work / "sp").iterdir() if p.name != "field.hs")
    assert len(spaces) == 6
    assert all(run(capsys, "check", str(p))[0] == 0 for p in spaces)
    assert run(capsys, "search", "--kind", "hypervectorspace", "--size", "2")[0] == 64
