"""Text formats for structures, overlays and linear maps.

Structure files (``.hs``)::

    kind: hyperfield          ; hypergroup | hyperfield | hypervectorspace
    elements: 0 1
    zero: 0
    one: 1
    symmetric: true           ; unordered pairs are listed once

    hyperadd:
      0 # 0 = 0
      0 # 1 = 1
      1 # 1 = 0 1

    mul:
      0 . 0 = 0
      ...

A hypervector space names its scalar hyperfield with ``field: <path>`` and
lists its scalar action as ``a * x = ...`` lines in an ``action:`` block.

Overlay files (``.ifs``) carry ``kind: ifs``, ``over: <path>``, an optional
``field-overlay: <path>`` and ``mu:``/``nu:`` blocks of ``name = p/q`` lines.
Map files carry ``kind: linearmap``, ``source:``/``target:`` paths and a
``map:`` block of ``x -> y`` lines.  ``;`` starts a comment everywhere and
relative paths resolve against the directory of the file that names them.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

from .hypercore import (
    BinOp,
    Carrier,
    Hyperfield,
    Hypergroup,
    HyperOp,
    HypervectorSpace,
    ScalarAction,
    StructureError,
    check_hyperfield,
    check_hypergroup,
    check_hypervector_space,
)
from .ifalgebra import IFS
from .lintrans import LinearMap

Structure = Union[Hypergroup, Hyperfield, HypervectorSpace]

STRUCTURE_KINDS = ("hypergroup", "hyperfield", "hypervectorspace")
ADD_OPS = ("#", "+", "⊕")
MUL_OPS = (".", "·")
ACT_OPS = ("*", "∗")

_HEADER = re.compile(r"^([A-Za-z][A-Za-z-]*)\s*:\s*(.*)$")
_DEGREE = re.compile(r"^(\d+)(?:/(\d+))?$")
_RESERVED = set("=:;{},") | {"->"}


class ParseError(ValueError):
    """A malformed or inconsistent file, positioned at a line when possible."""

    def __init__(self, message: str, line: int | None = None, source: str = "<text>"):
        self.message, self.line, self.source = message, line, source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


# -- low-level line handling ------------------------------------------------------


@dataclass
class _Doc:
    source: str
    base: Path
    headers: dict[str, tuple[str, int]] = field(default_factory=dict)
    blocks: dict[str, list[tuple[str, int]]] = field(default_factory=dict)

    def error(self, message: str, line: int | None = None) -> ParseError:
        return ParseError(message, line, self.source)

    def header(self, key: str, required: bool = True) -> tuple[str, int] | None:
        if key in self.headers:
            return self.headers[key]
        if required:
            raise self.error(f"missing header '{key}:'")
        return None

    def block(self, name: str, required: bool = True) -> list[tuple[str, int]]:
        if name in self.blocks:
            return self.blocks[name]
        if required:
            raise self.error(f"missing block '{name}:'")
        return []

    def resolve(self, ref: str) -> Path:
        p = Path(ref)
        return p if p.is_absolute() else self.base / p

    def check_keys(self, headers: set[str], blocks: set[str]) -> None:
        for key, (_, line) in self.headers.items():
            if key not in headers:
                raise self.error(f"unexpected header '{key}:'", line)
        for name, lines in self.blocks.items():
            if name not in blocks:
                raise self.error(f"unexpected block '{name}:'", lines[0][1] if lines else None)


def _split(text: str, source: str, base: Path) -> _Doc:
    doc = _Doc(source, base)
    current: str | None = None
    block_line = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m and "=" not in line and "->" not in line:
            key, value = m.group(1).lower(), m.group(2).strip()
            if key in doc.headers or key in doc.blocks:
                raise doc.error(f"'{key}:' given twice", number)
            if value:
                doc.headers[key] = (value, number)
                current = None
            else:
                doc.blocks[key] = []
                block_line[key] = number
                current = key
            continue
        if current is None:
            raise doc.error(f"line outside any block: {line!r}", number)
        doc.blocks[current].append((line, number))
    return doc


def _read(path: str | os.PathLike) -> tuple[str, Path]:
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8"), p
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}", None, str(p)) from None


def _carrier(doc: _Doc) -> Carrier:
    value, line = doc.header("elements")
    names = value.split()
    for n in names:
        if any(ch in n for ch in "=:;{},") or "->" in n:
            raise doc.error(f"element name {n!r} uses a reserved character", line)
    if len(set(names)) != len(names):
        raise doc.error("element names must be distinct", line)
    return Carrier(tuple(names))


def _element(doc: _Doc, carrier: Carrier, name: str, line: int, what: str = "element") -> int:
    try:
        return carrier.index(name)
    except KeyError:
        raise doc.error(f"unknown {what} {name!r}", line) from None


def _optional_element(doc: _Doc, carrier: Carrier, key: str) -> int | None:
    got = doc.header(key, required=False)
    if got is None:
        return None
    return _element(doc, carrier, got[0], got[1])


def _symmetric(doc: _Doc) -> bool:
    got = doc.header("symmetric", required=False)
    if got is None:
        return False
    if got[0].lower() not in ("true", "false"):
        raise doc.error("symmetric must be 'true' or 'false'", got[1])
    return got[0].lower() == "true"


def _cells(doc: _Doc, block: str, ops: tuple[str, ...], left: Carrier, right: Carrier,
           out: Carrier, symmetric: bool, single: bool) -> dict[tuple[int, int], tuple[frozenset, int]]:
    cells: dict[tuple[int, int], tuple[frozenset, int]] = {}
    op_pattern = "|".join(re.escape(o) for o in ops)
    pattern = re.compile(rf"^(\S+?)\s*(?:{op_pattern})\s*(\S+)\s*=(.*)$")
    for text, line in doc.block(block):
        m = pattern.match(text)
        if not m:
            raise doc.error(f"expected 'a {ops[0]} b = ...' in {block}, got {text!r}", line)
        a = _element(doc, left, m.group(1), line)
        b = _element(doc, right, m.group(2), line)
        rhs = m.group(3).split()
        if not rhs:
            raise doc.error(
                f"empty right-hand side for {m.group(1)} {ops[0]} {m.group(2)}: "
                "a hyperoperation takes values in nonempty subsets of the carrier",
                line,
            )
        if single and len(rhs) != 1:
            raise doc.error(f"{block} is single-valued; got {len(rhs)} elements", line)
        value = frozenset(_element(doc, out, e, line) for e in rhs)
        keys = {(a, b), (b, a)} if symmetric else {(a, b)}
        for key in keys:
            if key in cells:
                raise doc.error(
                    f"cell ({left.label(key[0])}, {right.label(key[1])}) already given on line {cells[key][1]}",
                    line,
                )
        for key in keys:
            cells[key] = (value, line)
    for a in range(len(left)):
        for b in range(len(right)):
            if (a, b) not in cells:
                raise doc.error(f"missing cell {left.label(a)} {ops[0]} {right.label(b)} in {block}")
    return cells


def _table(cells, n: int, m: int):
    return tuple(tuple(cells[(a, b)][0] for b in range(m)) for a in range(n))


# -- structures -------------------------------------------------------------------------


@dataclass
class RawStructure:
    """Parsed tables before axiom checking (what ``check`` audits)."""

    kind: str
    carrier: Carrier
    add: HyperOp
    zero: int | None = None
    one: int | None = None
    mul: BinOp | None = None
    action: ScalarAction | None = None
    field: Hyperfield | None = None
    field_ref: str | None = None
    source: str = "<text>"

    def audit(self):
        """The kind-appropriate hypercore report."""
        if self.kind == "hypergroup":
            return check_hypergroup(self.carrier, self.add, self.zero)[0]
        if self.kind == "hyperfield":
            return check_hyperfield(self.carrier, self.add, self.mul, self.zero, self.one)[0]
        return check_hypervector_space(self.field, self.carrier, self.add, self.action, self.zero)[0]

    def build(self) -> Structure:
        if self.kind == "hypergroup":
            return Hypergroup.build(self.carrier, self.add, self.zero)
        if self.kind == "hyperfield":
            return Hyperfield.build(self.carrier, self.add, self.mul, self.zero, self.one)
        return HypervectorSpace.build(self.field, self.carrier, self.add, self.action, self.zero)


def parse_structure_raw(text: str, source: str = "<text>", base: str | os.PathLike = ".") -> RawStructure:
    doc = _split(text, source, Path(base))
    kind_value = doc.header("kind")
    kind = kind_value[0].lower()
    if kind not in STRUCTURE_KINDS:
        raise doc.error(f"kind must be one of {', '.join(STRUCTURE_KINDS)}; got {kind!r}", kind_value[1])
    headers = {"kind", "elements", "zero", "symmetric"}
    blocks = {"hyperadd"}
    if kind == "hyperfield":
        headers.add("one")
        blocks.add("mul")
    if kind == "hypervectorspace":
        headers.add("field")
        blocks.add("action")
    doc.check_keys(headers, blocks)
    carrier = _carrier(doc)
    n = len(carrier)
    symmetric = _symmetric(doc)
    add = HyperOp(carrier, _table(_cells(doc, "hyperadd", ADD_OPS, carrier, carrier, carrier, symmetric, False), n, n))
    raw = RawStructure(kind, carrier, add, zero=_optional_element(doc, carrier, "zero"), source=source)
    if kind == "hyperfield":
        raw.one = _optional_element(doc, carrier, "one")
        cells = _cells(doc, "mul", MUL_OPS, carrier, carrier, carrier, symmetric, True)
        raw.mul = BinOp(carrier, tuple(tuple(next(iter(c)) for c in row) for row in _table(cells, n, n)))
    if kind == "hypervectorspace":
        ref, line = doc.header("field")
        path = doc.resolve(ref)
        try:
            scalar = load_structure(path)
        except FileNotFoundError:
            raise doc.error(f"field file {ref!r} not found", line) from None
        except StructureError as e:
            raise doc.error(f"field file {ref!r} is not a hyperfield:\n{e.report}", line) from None
        if not isinstance(scalar, Hyperfield):
            raise doc.error(f"field file {ref!r} does not describe a hyperfield", line)
        raw.field, raw.field_ref = scalar, ref
        cells = _cells(doc, "action", ACT_OPS, scalar.carrier, carrier, carrier, False, False)
        raw.action = ScalarAction(scalar.carrier, carrier, _table(cells, len(scalar.carrier), n))
    return raw


def parse_structure(text: str, source: str = "<text>", base: str | os.PathLike = ".") -> Structure:
    """Parse and validate; axiom failures surface as :class:`StructureError`."""
    return parse_structure_raw(text, source, base).build()


def load_structure_raw(path: str | os.PathLike) -> RawStructure:
    text, p = _read(path)
    return parse_structure_raw(text, str(p), p.parent)


def load_structure(path: str | os.PathLike) -> Structure:
    return load_structure_raw(path).build()


def _kind_of(s: Structure) -> str:
    if isinstance(s, HypervectorSpace):
        return "hypervectorspace"
    return "hyperfield" if isinstance(s, Hyperfield) else "hypergroup"


def _pairs(n: int, symmetric: bool):
    for a in range(n):
        for b in range(a if symmetric else 0, n):
            yield a, b


def serialize_structure(s: Structure, field_ref: str | None = None) -> str:
    """Canonical text.  Commutative tables are written with ``symmetric: true``."""
    kind = _kind_of(s)
    c = s.carrier
    n = len(c)
    fmt = lambda cell: " ".join(c.label(e) for e in sorted(cell))  # noqa: E731
    symmetric = s.add.is_commutative()
    if isinstance(s, Hyperfield):
        symmetric = symmetric and all(s.mul(a, b) == s.mul(b, a) for a in range(n) for b in range(n))
    lines = [f"kind: {kind}"]
    if isinstance(s, HypervectorSpace):
        if field_ref is None:
            raise ValueError("a hypervector space file must name its field file")
        lines.append(f"field: {field_ref}")
    lines.append("elements: " + " ".join(c.names))
    zero = s.theta if isinstance(s, HypervectorSpace) else s.zero
    lines.append(f"zero: {c.label(zero)}")
    if isinstance(s, Hyperfield):
        lines.append(f"one: {c.label(s.one)}")
    if symmetric:
        lines.append("symmetric: true")
    lines += ["", "hyperadd:"]
    lines += [f"  {c.label(a)} # {c.label(b)} = {fmt(s.add(a, b))}" for a, b in _pairs(n, symmetric)]
    if isinstance(s, Hyperfield):
        lines += ["", "mul:"]
        lines += [f"  {c.label(a)} . {c.label(b)} = {c.label(s.mul(a, b))}" for a, b in _pairs(n, symmetric)]
    if isinstance(s, HypervectorSpace):
        fc = s.field.carrier
        lines += ["", "action:"]
        lines += [f"  {fc.label(a)} * {c.label(x)} = {fmt(s.act(a, x))}" for a in range(len(fc)) for x in range(n)]
    return "\n".join(lines) + "\n"


# -- overlays ------------------------------------------------------------------------------


def parse_degree(text: str) -> Fraction:
    """``p/q``, ``0`` or ``1`` (any integer ``p``); decimals are refused."""
    m = _DEGREE.match(text)
    if not m:
        raise ValueError(f"degree {text!r} must be written p/q")
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise ValueError(f"degree {text!r} has a zero denominator")
    d = Fraction(int(m.group(1)), int(m.group(2) or 1))
    if d > 1:
        raise ValueError(f"degree {text} is outside [0, 1]")
    return d


def format_degree(d: Fraction) -> str:
    return str(Fraction(d))


@dataclass
class OverlayFile:
    """An IFS together with the structure (and field overlay) it refers to."""

    ifs: IFS
    structure: Structure
    over: str
    field_overlay: OverlayFile | None = None
    field_overlay_ref: str | None = None
    source: str = "<text>"


def _degrees(doc: _Doc, name: str, carrier: Carrier) -> tuple[dict[int, Fraction], dict[int, int]]:
    values, lines = {}, {}
    for text, line in doc.block(name):
        if "=" not in text:
            raise doc.error(f"expected 'element = p/q' in {name}, got {text!r}", line)
        elem, value = (part.strip() for part in text.split("=", 1))
        x = _element(doc, carrier, elem, line)
        if x in values:
            raise doc.error(f"{name}({elem}) already given on line {lines[x]}", line)
        try:
            values[x] = parse_degree(value)
        except ValueError as e:
            raise doc.error(str(e), line) from None
        lines[x] = line
    for x in range(len(carrier)):
        if x not in values:
            raise doc.error(f"missing {name} degree for {carrier.label(x)}")
    return values, lines


def parse_overlay(
    text: str, source: str = "<text>", base: str | os.PathLike = ".", structure: Structure | None = None
) -> OverlayFile:
    doc = _split(text, source, Path(base))
    kind, line = doc.header("kind")
    if kind.lower() != "ifs":
        raise doc.error(f"expected 'kind: ifs', got {kind!r}", line)
    doc.check_keys({"kind", "over", "field-overlay"}, {"mu", "nu"})
    over, over_line = doc.header("over")
    if structure is None:
        try:
            structure = load_structure(doc.resolve(over))
        except FileNotFoundError:
            raise doc.error(f"structure file {over!r} not found", over_line) from None
        except StructureError as e:
            raise doc.error(f"structure file {over!r} fails its axioms:\n{e.report}", over_line) from None
    carrier = structure.carrier
    mu, _ = _degrees(doc, "mu", carrier)
    nu, nu_lines = _degrees(doc, "nu", carrier)
    for x in range(len(carrier)):
        if mu[x] + nu[x] > 1:
            raise doc.error(
                f"mu({carrier.label(x)}) + nu({carrier.label(x)}) = {mu[x]} + {nu[x]} > 1", nu_lines[x]
            )
    ifs = IFS(carrier, tuple(mu[x] for x in range(len(carrier))), tuple(nu[x] for x in range(len(carrier))))
    result = OverlayFile(ifs, structure, over, source=source)
    got = doc.header("field-overlay", required=False)
    if got is not None:
        ref, line = got
        if not isinstance(structure, HypervectorSpace):
            raise doc.error("field-overlay only applies to overlays on hypervector spaces", line)
        try:
            fo = load_overlay(doc.resolve(ref))
        except FileNotFoundError:
            raise doc.error(f"field overlay {ref!r} not found", line) from None
        if fo.structure != structure.field:
            raise doc.error(f"field overlay {ref!r} is not over this space's field", line)
        result.field_overlay, result.field_overlay_ref = fo, ref
    return result


def load_overlay(path: str | os.PathLike, structure: Structure | None = None) -> OverlayFile:
    text, p = _read(path)
    return parse_overlay(text, str(p), p.parent, structure)


def serialize_overlay(ifs: IFS, over: str, field_overlay: str | None = None) -> str:
    names = ifs.carrier.names
    lines = ["kind: ifs", f"over: {over}"]
    if field_overlay is not None:
        lines.append(f"field-overlay: {field_overlay}")
    lines += ["", "mu:"] + [f"  {n} = {format_degree(d)}" for n, d in zip(names, ifs.mu)]
    lines += ["", "nu:"] + [f"  {n} = {format_degree(d)}" for n, d in zip(names, ifs.nu)]
    return "\n".join(lines) + "\n"


# -- linear maps ---------------------------------------------------------------------------


@dataclass
class MapFile:
    linear_map: LinearMap
    source_ref: str
    target_ref: str
    source: str = "<text>"


def parse_map(text: str, source: str = "<text>", base: str | os.PathLike = ".") -> MapFile:
    doc = _split(text, source, Path(base))
    kind, line = doc.header("kind")
    if kind.lower() != "linearmap":
        raise doc.error(f"expected 'kind: linearmap', got {kind!r}", line)
    doc.check_keys({"kind", "source", "target"}, {"map"})
    spaces = []
    for key in ("source", "target"):
        ref, line = doc.header(key)
        try:
            s = load_structure(doc.resolve(ref))
        except FileNotFoundError:
            raise doc.error(f"{key} file {ref!r} not found", line) from None
        if not isinstance(s, HypervectorSpace):
            raise doc.error(f"{key} file {ref!r} is not a hypervector space", line)
        spaces.append((s, ref))
    (src, src_ref), (dst, dst_ref) = spaces
    values: dict[int, int] = {}
    seen: dict[int, int] = {}
    for text_line, line in doc.block("map"):
        parts = text_line.split("->")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise doc.error(f"expected 'x -> y', got {text_line!r}", line)
        x = _element(doc, src.carrier, parts[0].strip(), line, "source vector")
        y = _element(doc, dst.carrier, parts[1].strip(), line, "target vector")
        if x in values:
            raise doc.error(f"image of {parts[0].strip()} already given on line {seen[x]}", line)
        values[x], seen[x] = y, line
    for x in range(len(src.carrier)):
        if x not in values:
            raise doc.error(f"missing image for {src.carrier.label(x)}")
    t = LinearMap(src, dst, tuple(values[x] for x in range(len(src.carrier))))
    return MapFile(t, src_ref, dst_ref, source)


def load_map(path: str | os.PathLike) -> MapFile:
    text, p = _read(path)
    return parse_map(text, str(p), p.parent)


def serialize_map(t: LinearMap, source_ref: str, target_ref: str) -> str:
    sc, tc = t.source.carrier, t.target.carrier
    lines = ["kind: linearmap", f"source: {source_ref}", f"target: {target_ref}", "", "map:"]
    lines += [f"  {sc.label(x)} -> {tc.label(y)}" for x, y in enumerate(t.values)]
    return "\n".join(lines) + "\n"


# -- dispatch --------------------------------------------------------------------------------


def file_kind(path: str | os.PathLike) -> str:
    """The ``kind:`` header of a file, lower-cased."""
    text, p = _read(path)
    doc = _split(text, str(p), p.parent)
    return doc.header("kind")[0].lower()


def relative_ref(target: str | os.PathLike, from_dir: str | os.PathLike) -> str:
    """A path to ``target`` usable from a file written in ``from_dir``."""
    return Path(os.path.relpath(Path(target).resolve(), Path(from_dir).resolve())).as_posix()


def write_atomic(path: str | os.PathLike, text: str) -> None:
    p = Path(path)
    tmp = p.with_name(f".{p.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, p)
