from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfuzz import formats
from hyperfuzz.catalog import gf, krasner, self_space
from hyperfuzz.hypercore import StructureError
from hyperfuzz.ifalgebra import IFS

K_TEXT = """\
kind: hyperfield   ; Krasner
elements: 0 1
zero: 0
one: 1
symmetric: true

hyperadd:
  0 + 0 = 0
  0 # 1 = 1
  1 # 1 = 0 1

mul:
  0 . 0 = 0
  0 . 1 = 0
  1 . 1 = 1
"""


def test_parse_krasner():
    assert formats.parse_structure(K_TEXT) == krasner()


def test_symmetric_matches_full_table():
    full = formats.serialize_structure(krasner()).replace("symmetric: true\n", "")
    full = full.replace("  0 # 1 = 1\n", "  0 # 1 = 1\n  1 # 0 = 1\n").replace(
        "  0 . 1 = 0\n", "  0 . 1 = 0\n  1 . 0 = 0\n")
    assert formats.parse_structure(full) == krasner()


@pytest.mark.parametrize("text,line,needle", [
    (K_TEXT.replace("1 # 1 = 0 1", "1 + 1 ="), 10, "nonempty"),
    (K_TEXT.replace("1 # 1 = 0 1", "1 # 1 = 0 2"), 10, "unknown element '2'"),
    (K_TEXT.replace("  1 # 1 = 0 1\n", ""), None, "missing cell 1 # 1"),
    (K_TEXT.replace("  0 # 1 = 1\n", "  0 # 1 = 1\n  1 # 0 = 1\n"), 10, "already given"),
    (K_TEXT.replace("1 . 1 = 1", "1 . 1 = 0 1"), 15, "single-valued"),
    (K_TEXT.replace("kind: hyperfield", "kind: ring"), 1, "kind must be"),
    (K_TEXT + "bogus line\n", 16, "expected 'a . b = ...'"),
])
def test_structure_errors(text, line, needle):
    with pytest.raises(formats.ParseError) as e:
        formats.parse_structure(text)
    if line is not None:
        assert e.value.line == line
    assert needle in str(e.value)


def test_axiom_failure_is_structure_error():
    with pytest.raises(StructureError):
        formats.parse_structure(K_TEXT.replace("1 . 1 = 1", "1 . 1 = 0"))


def test_raw_parse_audits_instead():
    raw = formats.parse_structure_raw(K_TEXT.replace("1 . 1 = 1", "1 . 1 = 0"))
    assert "DEF2.6.ii" in raw.audit().axioms()


OVERLAY = """\
kind: ifs
over: krasner.hs
mu:
  0 = 1
  1 = 3/4
nu:
  0 = 0
  1 = 1/4
"""


def write_krasner(tmp_path):
    (tmp_path / "krasner.hs").write_text(formats.serialize_structure(krasner()))


def test_overlay_parse(tmp_path):
    write_krasner(tmp_path)
    o = formats.parse_overlay(OVERLAY, base=tmp_path)
    assert o.ifs.mu == (1, Fr(3, 4)) and o.structure == krasner()


@pytest.mark.parametrize("old,new,line,needle", [
    ("1 = 1/4", "1 = 1/2", 8, "> 1"),
    ("1 = 3/4", "1 = 5/4", 5, "outside"),
    ("1 = 3/4", "1 = 0.75", 5, "p/q"),
    ("1 = 3/4", "1 = 3/0", 5, "zero denominator"),
    ("  1 = 1/4\n", "", None, "missing nu"),
    ("over: krasner.hs", "over: nowhere.hs", 2, "not found"),
])
def test_overlay_errors(tmp_path, old, new, line, needle):
    write_krasner(tmp_path)
    with pytest.raises(formats.ParseError) as e:
        formats.parse_overlay(OVERLAY.replace(old, new), base=tmp_path)
    assert needle in str(e.value)
    if line is not None:
        assert e.value.line == line


def test_shipped_fixtures_round_trip(fixtures_dir):
    files = sorted(fixtures_dir.iterdir())
    assert len(files) >= 10
    for path in files:
        text = path.read_text()
        kind = formats.file_kind(path)
        if kind == "ifs":
            o = formats.load_overlay(path)
            again = formats.serialize_overlay(o.ifs, o.over, o.field_overlay_ref)
        elif kind == "linearmap":
            m = formats.load_map(path)
            again = formats.serialize_map(m.linear_map, m.source_ref, m.target_ref)
        else:
            raw = formats.load_structure_raw(path)
            again = formats.serialize_structure(raw.build(), raw.field_ref)
        assert again == text, path.name


def test_map_errors(tmp_path, fixtures_dir):
    text = (fixtures_dir / "k-embed.map").read_text()
    for name in ("krasner.hs", "k-over-k.hs", "k-squared.hs"):
        (tmp_path / name).write_text((fixtures_dir / name).read_text())
    with pytest.raises(formats.ParseError, match="missing image"):
        formats.parse_map(text.replace("  1 -> 10\n", ""), base=tmp_path)
    with pytest.raises(formats.ParseError, match="unknown target vector"):
        formats.parse_map(text.replace("1 -> 10", "1 -> 12"), base=tmp_path)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12), st.integers(1, 12)), min_size=3, max_size=3))
def test_overlay_serialization_round_trip(triples):
    f = gf(3)
    mu, nu = [], []
    for m, v, q in triples:
        m, v = min(m, q), min(v, q)
        if m + v > q:
            v = q - m
        mu.append(Fr(m, q))
        nu.append(Fr(v, q))
    b = IFS(f.carrier, tuple(mu), tuple(nu))
    text = formats.serialize_overlay(b, "gf3.hs")
    assert formats.parse_overlay(text, structure=f).ifs == b


def test_space_round_trip_through_files(tmp_path):
    f = gf(3)
    (tmp_path / "gf3.hs").write_text(formats.serialize_structure(f))
    text = formats.serialize_structure(self_space(f), "gf3.hs")
    assert formats.parse_structure(text, base=tmp_path) == self_space(f)
