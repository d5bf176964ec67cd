"""Finite hyperstructures and exhaustive axiom checkers.

Elements are indices into an ordered :class:`Carrier`; a set of elements is a
``frozenset`` of indices.  Hyperoperations are dense tables of nonempty sets,
ordinary multiplications are dense tables of indices.

Every ``check_*`` function evaluates all instances of every axiom it covers
and returns a :class:`Report`.  Reports list violations in a deterministic
order (axiom id, then witness indices) and can replay any of their own
violations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

DEFAULT_CAP = 100

ElemSet = frozenset


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


class StructureError(ValueError):
    """A candidate structure failed validation; carries the failing report."""

    def __init__(self, kind: str, report: Report):
        self.kind = kind
        self.report = report
        super().__init__(f"not a {kind}:\n{report}")


@dataclass(frozen=True)
class Carrier:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("carrier must have at least one element")
        if any(not isinstance(n, str) or not n or n != n.strip() for n in names):
            raise ValueError(f"element labels must be nonempty strings: {names!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"element labels must be distinct: {names!r}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown element {name!r}") from None

    def label(self, i: int) -> str:
        return self.names[i]

    def fmt_set(self, s: Iterable[int]) -> str:
        return "{" + ", ".join(self.names[i] for i in sorted(s)) + "}"

    def elem_set(self, items: Iterable[int]) -> frozenset:
        s = frozenset(items)
        if any(not 0 <= i < len(self) for i in s):
            raise PreconditionError(f"set {sorted(s)} is not a subset of the carrier")
        return s


@dataclass(frozen=True)
class HyperOp:
    """A total hyperoperation ``X x X -> P*(X)``."""

    carrier: Carrier
    table: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        n = len(self.carrier)
        rows = tuple(tuple(frozenset(cell) for cell in row) for row in self.table)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"hyperoperation table must be {n}x{n}")
        for a, row in enumerate(rows):
            for b, cell in enumerate(row):
                if not cell:
                    raise ValueError(
                        f"cell ({self.carrier.label(a)}, {self.carrier.label(b)}) is empty; "
                        "a hyperoperation takes values in nonempty subsets"
                    )
                self.carrier.elem_set(cell)
        object.__setattr__(self, "table", rows)

    def __call__(self, a: int, b: int) -> frozenset:
        return self.table[a][b]

    def is_commutative(self) -> bool:
        n = len(self.carrier)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a + 1, n))

    def replace(self, a: int, b: int, cell: Iterable[int]) -> HyperOp:
        rows = [list(row) for row in self.table]
        rows[a][b] = frozenset(cell)
        return HyperOp(self.carrier, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class BinOp:
    carrier: Carrier
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.carrier)
        rows = tuple(tuple(int(c) for c in row) for row in self.table)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"operation table must be {n}x{n}")
        if any(not 0 <= c < n for row in rows for c in row):
            raise ValueError("operation table refers to elements outside the carrier")
        object.__setattr__(self, "table", rows)

    def __call__(self, a: int, b: int) -> int:
        return self.table[a][b]

    def left(self, a: int, s: Iterable[int]) -> frozenset:
        return frozenset(self.table[a][x] for x in s)

    def right(self, s: Iterable[int], a: int) -> frozenset:
        return frozenset(self.table[x][a] for x in s)

    def replace(self, a: int, b: int, value: int) -> BinOp:
        rows = [list(row) for row in self.table]
        rows[a][b] = value
        return BinOp(self.carrier, tuple(tuple(r) for r in rows))


def extend_elem_set(op: HyperOp, x: int, s: Iterable[int]) -> frozenset:
    """``x # A``: the union of ``x # a`` over ``a`` in ``A``."""
    s = frozenset(s)
    if not s:
        raise PreconditionError("x # A needs a nonempty A")
    row = op.table[x]
    return frozenset().union(*(row[a] for a in s))


def extend_set_set(op: HyperOp, left: Iterable[int], right: Iterable[int]) -> frozenset:
    """``A # B``: the union of ``a # b`` over all pairs."""
    left, right = frozenset(left), frozenset(right)
    if not left or not right:
        raise PreconditionError("A # B needs nonempty A and B")
    t = op.table
    return frozenset().union(*(t[a][b] for a in left for b in right))


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One failing axiom instance with its witnesses and both sides rendered."""

    axiom: str
    witnesses: tuple[tuple[str, str], ...]
    lhs: str
    lhs_value: str
    rhs: str
    rhs_value: str
    part: str = ""
    key: tuple[int, ...] = ()

    @property
    def sort_key(self):
        return (self.axiom, self.part, self.key)

    @property
    def rule_id(self) -> str:
        return f"{self.axiom}:{self.part}" if self.part else self.axiom

    def __str__(self) -> str:
        where = ", ".join(f"{k}={v}" for k, v in self.witnesses)
        head = self.axiom + (f" ({self.part})" if self.part else "")
        if where:
            head += f" [{where}]"
        return f"{head}: {self.lhs} = {self.lhs_value}  vs  {self.rhs} = {self.rhs_value}"

    def to_record(self) -> dict[str, Any]:
        return {
            "axiom": self.axiom,
            "part": self.part,
            "witnesses": [list(w) for w in self.witnesses],
            "lhs": self.lhs,
            "lhs_value": self.lhs_value,
            "rhs": self.rhs,
            "rhs_value": self.rhs_value,
        }


@dataclass(frozen=True)
class Rule:
    """A universally quantified axiom over one or more carriers.

    ``test`` receives element indices in ``variables`` order and returns the
    raw left side, raw right side and whether the instance holds.
    """

    axiom: str
    lhs: str
    rhs: str
    variables: tuple[tuple[str, Carrier], ...]
    test: Callable[..., tuple[Any, Any, bool]]
    show_lhs: Callable[[Any], str] = str
    show_rhs: Callable[[Any], str] = str
    part: str = ""
    where: Callable[..., bool] | None = None

    @property
    def rule_id(self) -> str:
        return f"{self.axiom}:{self.part}" if self.part else self.axiom

    def instances(self):
        domains = [range(len(c)) for _, c in self.variables]
        for combo in itertools.product(*domains):
            if self.where is None or self.where(*combo):
                yield combo

    def violation(self, combo, lhs, rhs) -> Violation:
        return Violation(
            axiom=self.axiom,
            part=self.part,
            witnesses=tuple((v, c.label(i)) for (v, c), i in zip(self.variables, combo)),
            key=tuple(combo),
            lhs=self.lhs,
            lhs_value=self.show_lhs(lhs),
            rhs=self.rhs,
            rhs_value=self.show_rhs(rhs),
        )


@dataclass(frozen=True)
class Report:
    violations: tuple[Violation, ...] = ()
    total: int = 0
    checked: int = 0
    rules: dict[str, Rule] = field(default_factory=dict, compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return self.total == 0

    @property
    def truncated(self) -> bool:
        return self.total > len(self.violations)

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def replay(self, v: Violation) -> Violation | None:
        """Re-evaluate the instance behind ``v``; ``None`` if it now holds."""
        rule = self.rules[v.rule_id]
        lhs, rhs, ok = rule.test(*v.key)
        return None if ok else rule.violation(v.key, lhs, rhs)

    def __str__(self) -> str:
        if self.ok:
            return f"ok ({self.checked} instances checked)"
        lines = [f"{self.total} violation(s) in {self.checked} instances"]
        lines += [f"  {v}" for v in self.violations]
        if self.truncated:
            lines.append(f"  ... {self.total - len(self.violations)} more")
        return "\n".join(lines)


def evaluate_rules(rules: Iterable[Rule], cap: int = DEFAULT_CAP, stop_early: bool = False) -> Report:
    """Run every instance of every rule, keeping the first ``cap`` violations."""
    rules = sorted(rules, key=lambda r: (r.axiom, r.part))
    kept: list[Violation] = []
    total = checked = 0
    for rule in rules:
        test = rule.test
        for combo in rule.instances():
            checked += 1
            lhs, rhs, ok = test(*combo)
            if not ok:
                total += 1
                if len(kept) < cap:
                    kept.append(rule.violation(combo, lhs, rhs))
                if stop_early:
                    return Report(tuple(kept), total, checked, {r.rule_id: r for r in rules})
    return Report(tuple(kept), total, checked, {r.rule_id: r for r in rules})


def merge_reports(*reports: Report, cap: int = DEFAULT_CAP) -> Report:
    violations = sorted((v for r in reports for v in r.violations), key=lambda v: v.sort_key)
    rules: dict[str, Rule] = {}
    for r in reports:
        rules.update(r.rules)
    return Report(
        tuple(violations[:cap]),
        sum(r.total for r in reports),
        sum(r.checked for r in reports),
        rules,
    )


def _const(value: str) -> Callable[[Any], str]:
    return lambda _: value


# -- hypergroups (Def 2.3, Prop 2.4) ----------------------------------------


def _negatives(add: HyperOp, zero: int, a: int) -> frozenset:
    t = add.table
    return frozenset(b for b in range(len(add.carrier)) if zero in t[a][b] and zero in t[b][a])


def negation_candidates(add: HyperOp) -> list[int]:
    """Elements ``z`` giving every ``a`` a unique two-sided negative relative to ``z``.

    In an ordinary group every element qualifies, so this alone does not pin
    down the zero; see :func:`zero_candidates`.
    """
    n = len(add.carrier)
    return [z for z in range(n) if all(len(_negatives(add, z, a)) == 1 for a in range(n))]


def _reversible(add: HyperOp, neg: Sequence[int]) -> bool:
    n = len(add.carrier)
    t = add.table
    return all(b in t[a][neg[c]] for b in range(n) for c in range(n) for a in t[b][c])


def zero_candidates(add: HyperOp) -> list[int]:
    """Elements that serve as the zero of a hypergroup: unique negatives and
    reversibility with respect to them."""
    n = len(add.carrier)
    out = []
    for z in negation_candidates(add):
        neg = [min(_negatives(add, z, a)) for a in range(n)]
        if _reversible(add, neg):
            out.append(z)
    return out


def check_hypergroup(
    carrier: Carrier, add: HyperOp, zero: int | None = None, cap: int = DEFAULT_CAP
) -> tuple[Report, int | None, tuple[int, ...] | None]:
    """Audit ``(carrier, add)`` as a hypergroup.

    Returns the report together with the zero and the negation map when the
    structure passes, ``(report, None, None)`` otherwise.  Without an explicit
    ``zero`` every element is tried; several surviving candidates make a
    non-commutative structure ambiguous.
    """
    if add.carrier != carrier:
        raise PreconditionError("hyperoperation is over a different carrier")
    C = carrier
    fmt = C.fmt_set

    def assoc(x, y, z):
        lhs = extend_elem_set(add, x, add(y, z))
        rhs = extend_set_set(add, add(x, y), {z})
        return lhs, rhs, lhs == rhs

    rules = [Rule("DEF2.3.i", "x#(y#z)", "(x#y)#z", (("x", C), ("y", C), ("z", C)), assoc, fmt, fmt)]

    pool = range(len(C)) if zero is None else [zero]
    partial = [z for z in negation_candidates(add) if z in pool]
    found = [z for z in zero_candidates(add) if z in pool]
    chosen: int | None = None
    if len(found) == 1 or (len(found) > 1 and add.is_commutative()) or (partial and not found):
        # several zeros in a commutative structure is left for check_prop_2_4 to flag;
        # with no reversible candidate, the first one is audited so (iii) reports witnesses
        chosen = (found or partial)[0]
        rules.append(
            Rule(
                "DEF2.3.ii", "{b : 0 in a#b, 0 in b#a}", "exactly one element",
                (("a", C),),
                lambda a: (_negatives(add, chosen, a), None, len(_negatives(add, chosen, a)) == 1),
                fmt, _const("1 element"),
            )
        )
    elif not partial:
        rules.append(
            Rule(
                "DEF2.3.ii", "{b : 0 in a#b, 0 in b#a}", "exactly one element",
                (("zero", C), ("a", C)),
                lambda z, a: (_negatives(add, z, a), None, len(_negatives(add, z, a)) == 1),
                fmt, _const("1 element"),
                where=lambda z, a: z in pool,
            )
        )
    else:
        cands = frozenset(found)
        rules.append(
            Rule(
                "DEF2.3.ii", "zero candidates", "exactly one zero",
                (("zero", C),),
                lambda z: (cands, None, False),
                fmt, _const("1 element"),
                part="ambiguous",
                where=lambda z: z in cands,
            )
        )

    neg: tuple[int, ...] | None = None
    if chosen is not None:
        neg = tuple(min(_negatives(add, chosen, a)) for a in range(len(C)))

        def reversible(a, b, c):
            s = add(a, neg[c])
            return b, s, b in s

        rules.append(
            Rule(
                "DEF2.3.iii", "b", "a#(-c)", (("a", C), ("b", C), ("c", C)), reversible,
                C.label, fmt, where=lambda a, b, c: a in add(b, c),
            )
        )

    report = evaluate_rules(rules, cap)
    if report.ok:
        return report, chosen, neg
    return report, None, None


@dataclass(frozen=True)
class Hypergroup:
    carrier: Carrier
    add: HyperOp
    zero: int
    neg: tuple[int, ...]

    @classmethod
    def build(cls, carrier: Carrier, add: HyperOp, zero: int | None = None) -> Hypergroup:
        report, z, neg = check_hypergroup(carrier, add, zero)
        if not report.ok:
            raise StructureError("hypergroup", report)
        return cls(carrier, add, z, neg)

    @property
    def commutative(self) -> bool:
        return self.add.is_commutative()

    def add_sets(self, left, right) -> frozenset:
        return extend_set_set(self.add, left, right)


def check_prop_2_4(h: Hypergroup, cap: int = DEFAULT_CAP) -> Report:
    """Derived hypergroup facts: double negation, and in the commutative case
    ``0#a = {a}`` and uniqueness of the zero."""
    C, add, neg, zero = h.carrier, h.add, h.neg, h.zero
    rules = [
        Rule("PROP2.4.i", "-(-a)", "a", (("a", C),),
             lambda a: (neg[neg[a]], a, neg[neg[a]] == a), C.label, C.label),
    ]
    if add.is_commutative():
        rules.append(
            Rule("PROP2.4.ii", "0#a", "{a}", (("a", C),),
                 lambda a: (add(zero, a), frozenset({a}), add(zero, a) == {a}), C.fmt_set, C.fmt_set)
        )
        cands = frozenset(zero_candidates(add))
        rules.append(
            Rule("PROP2.4.iii", "zero candidates", "exactly one", (),
                 lambda: (cands, None, len(cands) == 1), C.fmt_set, _const("1 element"))
        )
    return evaluate_rules(rules, cap)


# -- hyperrings and hyperfields (Defs 2.5, 2.6) ------------------------------


def _ring_rules(carrier: Carrier, add: HyperOp, mul: BinOp, zero: int | None) -> list[Rule]:
    C = carrier
    fmt = C.fmt_set

    def comm(a, b):
        return add(a, b), add(b, a), add(a, b) == add(b, a)

    def mul_assoc(a, b, c):
        lhs, rhs = mul(mul(a, b), c), mul(a, mul(b, c))
        return lhs, rhs, lhs == rhs

    def left_dist(a, b, c):
        lhs = mul.left(a, add(b, c))
        rhs = add(mul(a, b), mul(a, c))
        return lhs, rhs, lhs == rhs

    def right_dist(a, b, c):
        lhs = mul.right(add(b, c), a)
        rhs = add(mul(b, a), mul(c, a))
        return lhs, rhs, lhs == rhs

    rules = [
        Rule("DEF2.5.i", "a#b", "b#a", (("a", C), ("b", C)), comm, fmt, fmt, where=lambda a, b: a < b),
        Rule("DEF2.5.ii", "(a.b).c", "a.(b.c)", (("a", C), ("b", C), ("c", C)), mul_assoc, C.label, C.label),
        Rule("DEF2.5.iii", "a.(b#c)", "a.b # a.c", (("a", C), ("b", C), ("c", C)), left_dist, fmt, fmt,
             part="left"),
        Rule("DEF2.5.iii", "(b#c).a", "b.a # c.a", (("a", C), ("b", C), ("c", C)), right_dist, fmt, fmt,
             part="right"),
    ]
    if zero is not None:
        def absorb(a):
            lhs = (mul(a, zero), mul(zero, a))
            return lhs, None, lhs == (zero, zero)

        rules.append(
            Rule("DEF2.5.iv", "(a.0, 0.a)", "(0, 0)", (("a", C),), absorb,
                 lambda p: f"({C.label(p[0])}, {C.label(p[1])})",
                 _const(f"({C.label(zero)}, {C.label(zero)})"))
        )
    return rules


def check_hyperring(
    carrier: Carrier, add: HyperOp, mul: BinOp, zero: int | None = None, cap: int = DEFAULT_CAP
) -> Report:
    group_report, z, _ = check_hypergroup(carrier, add, zero, cap)
    if z is None:
        z = zero
    return merge_reports(group_report, evaluate_rules(_ring_rules(carrier, add, mul, z), cap), cap=cap)


def identity_candidates(mul: BinOp) -> list[int]:
    n = len(mul.carrier)
    return [e for e in range(n) if all(mul(a, e) == a for a in range(n))]


def check_hyperfield(
    carrier: Carrier,
    add: HyperOp,
    mul: BinOp,
    zero: int | None = None,
    one: int | None = None,
    cap: int = DEFAULT_CAP,
) -> tuple[Report, int | None, tuple[int | None, ...] | None]:
    """Audit a hyperfield candidate; on success also return ``one`` and the
    inverse map (``None`` at zero)."""
    C = carrier
    group_report, z, _ = check_hypergroup(carrier, add, zero, cap)
    if z is None:
        z = zero
    rules = _ring_rules(carrier, add, mul, z)

    pool = range(len(C)) if one is None else [one]
    ones = [e for e in identity_candidates(mul) if e in pool]
    e = ones[0] if ones else None
    if e is not None:
        rules.append(Rule("DEF2.6.ii", "a.1", "a", (("a", C),),
                          lambda a: (mul(a, e), a, mul(a, e) == a), C.label, C.label))
    else:
        rules.append(Rule("DEF2.6.ii", "a.1", "a", (("one", C), ("a", C)),
                          lambda u, a: (mul(a, u), a, mul(a, u) == a), C.label, C.label,
                          where=lambda u, a: u in pool))

    def inverses(a):
        return frozenset(b for b in range(len(C)) if mul(a, b) == e)

    if e is not None and z is not None:
        rules.append(Rule("DEF2.6.iii", "{b : a.b = 1}", "nonempty", (("a", C),),
                          lambda a: (inverses(a), None, bool(inverses(a))), C.fmt_set, _const("nonempty"),
                          where=lambda a: a != z))
    rules.append(Rule("DEF2.6.iv", "a.b", "b.a", (("a", C), ("b", C)),
                      lambda a, b: (mul(a, b), mul(b, a), mul(a, b) == mul(b, a)), C.label, C.label,
                      where=lambda a, b: a < b))

    report = merge_reports(group_report, evaluate_rules(rules, cap), cap=cap)
    if not report.ok:
        return report, None, None
    inv = tuple(None if a == z else min(inverses(a)) for a in range(len(C)))
    return report, e, inv


@dataclass(frozen=True)
class Hyperfield:
    carrier: Carrier
    add: HyperOp
    mul: BinOp
    zero: int
    one: int
    neg: tuple[int, ...]
    inv: tuple[int | None, ...]

    @classmethod
    def build(
        cls, carrier: Carrier, add: HyperOp, mul: BinOp, zero: int | None = None, one: int | None = None
    ) -> Hyperfield:
        report, e, inv = check_hyperfield(carrier, add, mul, zero, one)
        if not report.ok:
            raise StructureError("hyperfield", report)
        _, z, neg = check_hypergroup(carrier, add, zero)
        return cls(carrier, add, mul, z, e, neg, inv)

    @property
    def additive(self) -> Hypergroup:
        return Hypergroup(self.carrier, self.add, self.zero, self.neg)


# -- hypervector spaces (Def 2.7) --------------------------------------------


@dataclass(frozen=True)
class ScalarAction:
    """A hyperoperation ``F x V -> P*(V)``."""

    scalars: Carrier
    vectors: Carrier
    table: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(frozenset(c) for c in row) for row in self.table)
        if len(rows) != len(self.scalars) or any(len(r) != len(self.vectors) for r in rows):
            raise ValueError(f"action table must be {len(self.scalars)}x{len(self.vectors)}")
        for a, row in enumerate(rows):
            for x, cell in enumerate(row):
                if not cell:
                    raise ValueError(
                        f"cell ({self.scalars.label(a)} * {self.vectors.label(x)}) is empty; "
                        "the action takes values in nonempty subsets"
                    )
                self.vectors.elem_set(cell)
        object.__setattr__(self, "table", rows)

    def __call__(self, a: int, x: int) -> frozenset:
        return self.table[a][x]

    def on_set(self, a: int, s: Iterable[int]) -> frozenset:
        row = self.table[a]
        return frozenset().union(*(row[x] for x in s))

    def by_set(self, scalars: Iterable[int], x: int) -> frozenset:
        return frozenset().union(*(self.table[a][x] for a in scalars))

    def replace(self, a: int, x: int, cell: Iterable[int]) -> ScalarAction:
        rows = [list(r) for r in self.table]
        rows[a][x] = frozenset(cell)
        return ScalarAction(self.scalars, self.vectors, tuple(tuple(r) for r in rows))


def check_hypervector_space(
    field: Hyperfield,
    carrier: Carrier,
    add: HyperOp,
    action: ScalarAction,
    theta: int | None = None,
    cap: int = DEFAULT_CAP,
) -> tuple[Report, int | None, tuple[int, ...] | None]:
    """Audit ``(carrier, add, action)`` as a hypervector space over ``field``."""
    F, V = field.carrier, carrier
    if action.scalars != F or action.vectors != V:
        raise PreconditionError("action table does not match the field and vector carriers")
    group_report, th, negv = check_hypergroup(carrier, add, theta, cap)
    fmt = V.fmt_set
    act = action
    vsum = lambda s, t: extend_set_set(add, s, t)  # noqa: E731

    def comm(x, y):
        return add(x, y), add(y, x), add(x, y) == add(y, x)

    def dist_vec(a, x, y):
        lhs = act.on_set(a, add(x, y))
        rhs = vsum(act(a, x), act(a, y))
        return lhs, rhs, lhs <= rhs

    def dist_scalar(a, b, x):
        lhs = act.by_set(field.add(a, b), x)
        rhs = vsum(act(a, x), act(b, x))
        return lhs, rhs, lhs <= rhs

    def compat(a, b, x):
        lhs = act(field.mul(a, b), x)
        rhs = act.on_set(a, act(b, x))
        return lhs, rhs, lhs == rhs

    rules = [
        Rule("DEF2.7.pre", "x#y", "y#x", (("x", V), ("y", V)), comm, fmt, fmt, where=lambda x, y: x < y),
        Rule("DEF2.7.i", "a*(x#y)", "a*x # a*y", (("a", F), ("x", V), ("y", V)), dist_vec, fmt, fmt),
        Rule("DEF2.7.ii", "(a+b)*x", "a*x # b*x", (("a", F), ("b", F), ("x", V)), dist_scalar, fmt, fmt),
        Rule("DEF2.7.iii", "(a.b)*x", "a*(b*x)", (("a", F), ("b", F), ("x", V)), compat, fmt, fmt),
    ]
    if th is None:
        th = theta
    if negv is not None:
        def neg_compat(a, x):
            lhs, rhs = act(field.neg[a], x), act(a, negv[x])
            return lhs, rhs, lhs == rhs

        rules.append(Rule("DEF2.7.iv", "(-a)*x", "a*(-x)", (("a", F), ("x", V)), neg_compat, fmt, fmt))
    rules.append(Rule("DEF2.7.v", "x", "1*x", (("x", V),),
                      lambda x: (x, act(field.one, x), x in act(field.one, x)), V.label, fmt, part="unit"))
    if th is not None:
        rules.append(Rule("DEF2.7.v", "theta", "0*x", (("x", V),),
                          lambda x: (th, act(field.zero, x), th in act(field.zero, x)), V.label, fmt,
                          part="zero"))
        rules.append(Rule("DEF2.7.v", "0*theta", "{theta}", (),
                          lambda: (act(field.zero, th), frozenset({th}), act(field.zero, th) == {th}),
                          fmt, fmt, part="null"))
    report = merge_reports(group_report, evaluate_rules(rules, cap), cap=cap)
    if not report.ok:
        return report, None, None
    return report, th, negv


@dataclass(frozen=True)
class HypervectorSpace:
    field: Hyperfield
    vectors: Hypergroup
    action: ScalarAction

    @classmethod
    def build(
        cls,
        field: Hyperfield,
        carrier: Carrier,
        add: HyperOp,
        action: ScalarAction,
        theta: int | None = None,
    ) -> HypervectorSpace:
        report, th, negv = check_hypervector_space(field, carrier, add, action, theta)
        if not report.ok:
            raise StructureError("hypervector space", report)
        return cls(field, Hypergroup(carrier, add, th, negv), action)

    @property
    def carrier(self) -> Carrier:
        return self.vectors.carrier

    @property
    def add(self) -> HyperOp:
        return self.vectors.add

    @property
    def theta(self) -> int:
        return self.vectors.zero

    @property
    def neg(self) -> tuple[int, ...]:
        return self.vectors.neg

    def act(self, a: int, x: int) -> frozenset:
        return self.action(a, x)

    def combination(self, a: int, x: int, b: int, y: int) -> frozenset:
        """The composite set ``a*x # b*y``."""
        return extend_set_set(self.vectors.add, self.action(a, x), self.action(b, y))


def hyperop_from(carrier: Carrier, fn: Callable[[int, int], Iterable[int]]) -> HyperOp:
    n = len(carrier)
    return HyperOp(carrier, tuple(tuple(frozenset(fn(a, b)) for b in range(n)) for a in range(n)))


def binop_from(carrier: Carrier, fn: Callable[[int, int], int]) -> BinOp:
    n = len(carrier)
    return BinOp(carrier, tuple(tuple(fn(a, b) for b in range(n)) for a in range(n)))


def action_from(scalars: Carrier, vectors: Carrier, fn: Callable[[int, int], Iterable[int]]) -> ScalarAction:
    return ScalarAction(
        scalars, vectors,
        tuple(tuple(frozenset(fn(a, x)) for x in range(len(vectors))) for a in range(len(scalars))),
    )


def singletons(op: Sequence[Sequence[int]]) -> tuple[tuple[frozenset, ...], ...]:
    """Lift an ordinary operation table to singleton-valued cells."""
    return tuple(tuple(frozenset({c}) for c in row) for row in op)
