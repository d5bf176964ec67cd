"""Intuitionistic fuzzy overlays on hyperfields and hypervector spaces.

Degrees are exact :class:`fractions.Fraction` values in ``[0, 1]``; meets and
joins are plain ``min``/``max``.  The checkers follow the same
report/replay protocol as :mod:`hyperfuzz.hypercore`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Literal, Mapping, Sequence

from .hypercore import (
    DEFAULT_CAP,
    Carrier,
    Hyperfield,
    HypervectorSpace,
    PreconditionError,
    Report,
    Rule,
    Violation,
    evaluate_rules,
)

Degree = Fraction
Op = Literal["intersect", "union"]
Convention = Literal["paper", "standard"]
OPS = ("intersect", "union")
CONVENTIONS = ("paper", "standard")


def degree(value: Any) -> Fraction:
    """Coerce to an exact degree in ``[0, 1]``; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"degrees must be exact, got float {value!r}")
    d = Fraction(value)
    if not 0 <= d <= 1:
        raise ValueError(f"degree {d} is outside [0, 1]")
    return d


class IFSConstraintError(ValueError):
    """Membership plus non-membership exceeds 1 at some element."""

    def __init__(self, label: str, mu: Fraction, nu: Fraction, index: int | None = None):
        self.label, self.mu, self.nu, self.index = label, mu, nu, index
        super().__init__(f"mu({label}) + nu({label}) = {mu} + {nu} = {mu + nu} > 1")


@dataclass(frozen=True)
class IFS:
    """An intuitionistic fuzzy set: paired membership/non-membership maps."""

    carrier: Carrier
    mu: tuple[Fraction, ...]
    nu: tuple[Fraction, ...]

    def __post_init__(self):
        mu = tuple(degree(v) for v in self.mu)
        nu = tuple(degree(v) for v in self.nu)
        n = len(self.carrier)
        if len(mu) != n or len(nu) != n:
            raise ValueError(f"IFS over {n} elements needs {n} membership and non-membership degrees")
        for i, (m, v) in enumerate(zip(mu, nu)):
            if m + v > 1:
                raise IFSConstraintError(self.carrier.label(i), m, v, i)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def from_maps(cls, carrier: Carrier, mu: Mapping[str, Any], nu: Mapping[str, Any]) -> IFS:
        return cls(carrier, tuple(mu[n] for n in carrier.names), tuple(nu[n] for n in carrier.names))

    @classmethod
    def constant(cls, carrier: Carrier, mu: Any, nu: Any) -> IFS:
        return cls(carrier, (mu,) * len(carrier), (nu,) * len(carrier))

    def as_maps(self) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
        names = self.carrier.names
        return dict(zip(names, self.mu)), dict(zip(names, self.nu))

    def __str__(self) -> str:
        return ", ".join(
            f"{n}: ({m}, {v})" for n, m, v in zip(self.carrier.names, self.mu, self.nu)
        )


def aggregate_min(mu: Sequence[Fraction], s: Iterable[int]) -> Fraction:
    s = list(s)
    if not s:
        raise PreconditionError("meet over an empty set")
    return min(mu[x] for x in s)


def aggregate_max(nu: Sequence[Fraction], s: Iterable[int]) -> Fraction:
    s = list(s)
    if not s:
        raise PreconditionError("join over an empty set")
    return max(nu[x] for x in s)


def _over(ifs: IFS, carrier: Carrier, what: str) -> None:
    if ifs.carrier != carrier:
        raise PreconditionError(f"{what} is not an IFS over {carrier.names}")


# -- IF hyperfields -----------------------------------------------------------


def _if_hyperfield_rules(F: Hyperfield, A: IFS) -> list[Rule]:
    C = F.carrier
    mu, nu = A.mu, A.nu
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    nonzero = lambda a: a != F.zero  # noqa: E731

    def i(a, b):
        lhs = min(mu[x] for x in add(a, b))
        rhs = min(mu[a], mu[b])
        return lhs, rhs, lhs >= rhs

    def v(a, b):
        lhs = max(nu[x] for x in add(a, b))
        rhs = max(nu[a], nu[b])
        return lhs, rhs, lhs <= rhs

    def iii(a, b):
        lhs, rhs = mu[mul(a, b)], min(mu[a], mu[b])
        return lhs, rhs, lhs >= rhs

    def vii(a, b):
        lhs, rhs = nu[mul(a, b)], max(nu[a], nu[b])
        return lhs, rhs, lhs <= rhs

    ab = (("a", C), ("b", C))
    return [
        Rule("DEF3.1.i", "min mu over a+b", "mu(a) ^ mu(b)", ab, i),
        Rule("DEF3.1.ii", "mu(-a)", "mu(a)", (("a", C),),
             lambda a: (mu[neg[a]], mu[a], mu[neg[a]] >= mu[a])),
        Rule("DEF3.1.iii", "mu(a.b)", "mu(a) ^ mu(b)", ab, iii),
        Rule("DEF3.1.iv", "mu(a^-1)", "mu(a)", (("a", C),),
             lambda a: (mu[inv[a]], mu[a], mu[inv[a]] >= mu[a]), where=nonzero),
        Rule("DEF3.1.v", "max nu over a+b", "nu(a) v nu(b)", ab, v),
        Rule("DEF3.1.vi", "nu(-a)", "nu(a)", (("a", C),),
             lambda a: (nu[neg[a]], nu[a], nu[neg[a]] <= nu[a])),
        Rule("DEF3.1.vii", "nu(a.b)", "nu(a) v nu(b)", ab, vii),
        Rule("DEF3.1.viii", "nu(a^-1)", "nu(a)", (("a", C),),
             lambda a: (nu[inv[a]], nu[a], nu[inv[a]] <= nu[a]), where=nonzero),
    ]


def check_if_hyperfield(F: Hyperfield, A: IFS, cap: int = DEFAULT_CAP) -> Report:
    _over(A, F.carrier, "field overlay")
    return evaluate_rules(_if_hyperfield_rules(F, A), cap)


def is_if_hyperfield(F: Hyperfield, A: IFS) -> bool:
    return evaluate_rules(_if_hyperfield_rules(F, A), stop_early=True).ok


def check_result_3_2(F: Hyperfield, A: IFS, cap: int = DEFAULT_CAP) -> Report:
    """Consequences for an IF hyperfield: the zero carries the largest
    membership, then the identity (over nonzero elements); duals for ``nu``."""
    _over(A, F.carrier, "field overlay")
    C = F.carrier
    mu, nu, z, e = A.mu, A.nu, F.zero, F.one
    nonzero = lambda a: a != z  # noqa: E731
    rules = [
        Rule("RES3.2.i", "mu(0)", "mu(a)", (("a", C),), lambda a: (mu[z], mu[a], mu[z] >= mu[a])),
        Rule("RES3.2.ii", "mu(1)", "mu(a)", (("a", C),), lambda a: (mu[e], mu[a], mu[e] >= mu[a]),
             where=nonzero),
        Rule("RES3.2.iii", "mu(0)", "mu(1)", (), lambda: (mu[z], mu[e], mu[z] >= mu[e])),
        Rule("RES3.2.iv", "nu(0)", "nu(a)", (("a", C),), lambda a: (nu[z], nu[a], nu[z] <= nu[a])),
        Rule("RES3.2.v", "nu(1)", "nu(a)", (("a", C),), lambda a: (nu[e], nu[a], nu[e] <= nu[a]),
             where=nonzero),
        Rule("RES3.2.vi", "nu(0)", "nu(1)", (), lambda: (nu[z], nu[e], nu[z] <= nu[e])),
    ]
    return evaluate_rules(rules, cap)


# -- IF hypervector spaces ------------------------------------------------------


def _if_hvs_rules(V: HypervectorSpace, A: IFS, B: IFS) -> list[Rule]:
    F = V.field
    Fc, Vc = F.carrier, V.carrier
    muF, nuF, mu, nu = A.mu, A.nu, B.mu, B.nu
    add, act, neg, th, one = V.add, V.action, V.neg, V.theta, F.one

    def i(x, y):
        lhs, rhs = min(mu[z] for z in add(x, y)), min(mu[x], mu[y])
        return lhs, rhs, lhs >= rhs

    def iii(a, x):
        lhs, rhs = min(mu[y] for y in act(a, x)), min(mu[x], muF[a])
        return lhs, rhs, lhs >= rhs

    def v(x, y):
        lhs, rhs = max(nu[z] for z in add(x, y)), max(nu[x], nu[y])
        return lhs, rhs, lhs <= rhs

    def vii(a, x):
        lhs, rhs = max(nu[y] for y in act(a, x)), max(nu[x], nuF[a])
        return lhs, rhs, lhs <= rhs

    xy = (("x", Vc), ("y", Vc))
    ax = (("a", Fc), ("x", Vc))
    return [
        Rule("DEF3.3.i", "min mu_V over x#y", "mu_V(x) ^ mu_V(y)", xy, i),
        Rule("DEF3.3.ii", "mu_V(-x)", "mu_V(x)", (("x", Vc),),
             lambda x: (mu[neg[x]], mu[x], mu[neg[x]] >= mu[x])),
        Rule("DEF3.3.iii", "min mu_V over a*x", "mu_V(x) ^ mu_F(a)", ax, iii),
        Rule("DEF3.3.iv", "mu_F(1)", "mu_V(theta)", (), lambda: (muF[one], mu[th], muF[one] >= mu[th])),
        Rule("DEF3.3.v", "max nu_V over x#y", "nu_V(x) v nu_V(y)", xy, v),
        Rule("DEF3.3.vi", "nu_V(-x)", "nu_V(x)", (("x", Vc),),
             lambda x: (nu[neg[x]], nu[x], nu[neg[x]] <= nu[x])),
        Rule("DEF3.3.vii", "max nu_V over a*x", "nu_V(x) v nu_F(a)", ax, vii),
        Rule("DEF3.3.viii", "nu_F(1)", "nu_V(theta)", (), lambda: (nuF[one], nu[th], nuF[one] <= nu[th])),
    ]


def check_if_hvs(V: HypervectorSpace, A: IFS, B: IFS, cap: int = DEFAULT_CAP) -> Report:
    _over(A, V.field.carrier, "field overlay")
    _over(B, V.carrier, "space overlay")
    return evaluate_rules(_if_hvs_rules(V, A, B), cap)


def is_if_hvs(V: HypervectorSpace, A: IFS, B: IFS) -> bool:
    return evaluate_rules(_if_hvs_rules(V, A, B), stop_early=True).ok


def check_result_3_4(V: HypervectorSpace, A: IFS, B: IFS, cap: int = DEFAULT_CAP) -> Report:
    _over(A, V.field.carrier, "field overlay")
    _over(B, V.carrier, "space overlay")
    Vc = V.carrier
    muF, nuF, mu, nu = A.mu, A.nu, B.mu, B.nu
    z, th = V.field.zero, V.theta
    rules = [
        Rule("RES3.4.i", "mu_F(0)", "mu_V(theta)", (), lambda: (muF[z], mu[th], muF[z] >= mu[th])),
        Rule("RES3.4.ii", "mu_V(theta)", "mu_V(x)", (("x", Vc),), lambda x: (mu[th], mu[x], mu[th] >= mu[x])),
        Rule("RES3.4.iii", "mu_F(0)", "mu_V(x)", (("x", Vc),), lambda x: (muF[z], mu[x], muF[z] >= mu[x])),
        Rule("RES3.4.iv", "nu_F(0)", "nu_V(theta)", (), lambda: (nuF[z], nu[th], nuF[z] <= nu[th])),
        Rule("RES3.4.v", "nu_V(theta)", "nu_V(x)", (("x", Vc),), lambda x: (nu[th], nu[x], nu[th] <= nu[x])),
        Rule("RES3.4.vi", "nu_F(0)", "nu_V(x)", (("x", Vc),), lambda x: (nuF[z], nu[x], nuF[z] <= nu[x])),
    ]
    return evaluate_rules(rules, cap)


def check_characterization(V: HypervectorSpace, A: IFS, B: IFS, cap: int = DEFAULT_CAP) -> Report:
    """The four-condition test on composite sets ``a*x # b*y``."""
    _over(A, V.field.carrier, "field overlay")
    _over(B, V.carrier, "space overlay")
    Fc, Vc = V.field.carrier, V.carrier
    muF, nuF, mu, nu = A.mu, A.nu, B.mu, B.nu
    th, one = V.theta, V.field.one
    n = len(Vc)
    # composite sets are shared by the mu and nu conditions
    combos = {
        (a, x, b, y): V.combination(a, x, b, y)
        for a in range(len(Fc)) for x in range(n) for b in range(len(Fc)) for y in range(n)
    }

    def i(a, b, x, y):
        lhs = min(mu[z] for z in combos[a, x, b, y])
        rhs = min(muF[a], mu[x], muF[b], mu[y])
        return lhs, rhs, lhs >= rhs

    def iii(a, b, x, y):
        lhs = max(nu[z] for z in combos[a, x, b, y])
        rhs = max(nuF[a], nu[x], nuF[b], nu[y])
        return lhs, rhs, lhs <= rhs

    abxy = (("a", Fc), ("b", Fc), ("x", Vc), ("y", Vc))
    rules = [
        Rule("THM3.5.i", "min mu_V over a*x # b*y", "(mu_F(a) ^ mu_V(x)) ^ (mu_F(b) ^ mu_V(y))", abxy, i),
        Rule("THM3.5.ii", "mu_F(1)", "mu_V(theta)", (), lambda: (muF[one], mu[th], muF[one] >= mu[th])),
        Rule("THM3.5.iii", "max nu_V over a*x # b*y", "(nu_F(a) v nu_V(x)) v (nu_F(b) v nu_V(y))", abxy, iii),
        Rule("THM3.5.iv", "nu_F(1)", "nu_V(theta)", (), lambda: (nuF[one], nu[th], nuF[one] <= nu[th])),
    ]
    return evaluate_rules(rules, cap)


@dataclass(frozen=True)
class Agreement:
    eight: bool
    four: bool
    eight_report: Report = field(repr=False)
    four_report: Report = field(repr=False)

    @property
    def agree(self) -> bool:
        return self.eight == self.four


def equivalence_oracle(V: HypervectorSpace, A: IFS, B: IFS) -> Agreement:
    """Compare the eight-condition definition with the four-condition
    characterization on one overlay.  ``A`` must be an IF hyperfield."""
    field_report = check_if_hyperfield(V.field, A)
    if not field_report.ok:
        raise PreconditionError(f"field overlay is not an IF hyperfield:\n{field_report}")
    eight = check_if_hvs(V, A, B)
    four = check_characterization(V, A, B)
    return Agreement(eight.ok, four.ok, eight, four)


# -- overlay wrappers and families ------------------------------------------------


@dataclass(frozen=True)
class IFHyperfieldOverlay:
    field: Hyperfield
    ifs: IFS

    def __post_init__(self):
        report = check_if_hyperfield(self.field, self.ifs)
        if not report.ok:
            raise PreconditionError(f"not an IF hyperfield:\n{report}")


@dataclass(frozen=True)
class IFHVSOverlay:
    space: HypervectorSpace
    field_overlay: IFHyperfieldOverlay
    ifs: IFS

    def __post_init__(self):
        report = check_if_hvs(self.space, self.field_overlay.ifs, self.ifs)
        if not report.ok:
            raise PreconditionError(f"not an IF hypervector space:\n{report}")


@dataclass(frozen=True)
class OverlayFamily:
    space: HypervectorSpace
    field_ifs: IFS
    members: tuple[IFS, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise PreconditionError("a family needs at least one member")
        for m in members:
            _over(m, self.space.carrier, "family member")
        _over(self.field_ifs, self.space.field.carrier, "field overlay")
        object.__setattr__(self, "members", members)


def _check_op(op: str, convention: str) -> None:
    if op not in OPS:
        raise ValueError(f"op must be one of {OPS}, got {op!r}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def combine_degrees(
    members: Sequence[IFS], op: Op, convention: Convention
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Pointwise combined degrees, without enforcing ``mu + nu <= 1``.

    ``paper`` pairs ``nu`` with the same lattice operation as ``mu``;
    ``standard`` dualizes it.
    """
    _check_op(op, convention)
    if not members:
        raise PreconditionError("a family needs at least one member")
    mu_op = min if op == "intersect" else max
    if convention == "paper":
        nu_op = mu_op
    else:
        nu_op = max if op == "intersect" else min
    n = len(members[0].carrier)
    mu = tuple(mu_op(m.mu[x] for m in members) for x in range(n))
    nu = tuple(nu_op(m.nu[x] for m in members) for x in range(n))
    return mu, nu


def combine_family(fam: OverlayFamily | Sequence[IFS], op: Op, convention: Convention = "paper") -> IFS:
    members = fam.members if isinstance(fam, OverlayFamily) else tuple(fam)
    if members and any(m.carrier != members[0].carrier for m in members):
        raise PreconditionError("family members live over different carriers")
    mu, nu = combine_degrees(members, op, convention)
    return IFS(members[0].carrier, mu, nu)


# -- closure verdicts -------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """A failing instance on a concrete overlay, replayable via ``check_if_hvs``."""

    theorem: str
    violation: Violation
    mu: tuple[Fraction, ...]
    nu: tuple[Fraction, ...]
    convention: str = ""
    seed: int | None = None
    trial: int | None = None

    def to_record(self) -> dict[str, Any]:
        rec = {"theorem": self.theorem, **self.violation.to_record()}
        rec["convention"] = self.convention
        rec["seed"] = self.seed
        rec["trial"] = self.trial
        rec["mu"] = [str(d) for d in self.mu]
        rec["nu"] = [str(d) for d in self.nu]
        return rec


@dataclass(frozen=True)
class TheoremVerdict:
    verified: bool
    instances: int
    certificate: Certificate | None = None

    @property
    def status(self) -> str:
        return "verified" if self.verified else "counterexample"


def _constraint_violation(carrier: Carrier, x: int, mu: Fraction, nu: Fraction) -> Violation:
    return Violation(
        axiom="DEF2.9",
        witnesses=(("x", carrier.label(x)),),
        key=(x,),
        lhs="mu(x) + nu(x)",
        lhs_value=str(mu + nu),
        rhs="1",
        rhs_value="1",
    )


def verdict_for(
    V: HypervectorSpace,
    A: IFS,
    mu: Sequence[Fraction],
    nu: Sequence[Fraction],
    theorem: str,
    convention: str = "",
    seed: int | None = None,
    trial: int | None = None,
) -> TheoremVerdict:
    """Audit a constructed degree pair against the IF-HVS definition."""
    mu, nu = tuple(mu), tuple(nu)
    for x, (m, v) in enumerate(zip(mu, nu)):
        if m + v > 1:
            cert = Certificate(theorem, _constraint_violation(V.carrier, x, m, v), mu, nu, convention, seed, trial)
            return TheoremVerdict(False, 0, cert)
    report = check_if_hvs(V, A, IFS(V.carrier, mu, nu))
    if report.ok:
        return TheoremVerdict(True, report.checked)
    cert = Certificate(theorem, report.violations[0], mu, nu, convention, seed, trial)
    return TheoremVerdict(False, report.checked, cert)


def closure_oracle(
    V: HypervectorSpace,
    A: IFS,
    fam: OverlayFamily | Sequence[IFS],
    op: Op,
    convention: Convention = "paper",
    seed: int | None = None,
    trial: int | None = None,
) -> TheoremVerdict:
    """Combine a family of valid IF-HVS overlays and audit the result."""
    members = fam.members if isinstance(fam, OverlayFamily) else tuple(fam)
    for k, m in enumerate(members):
        report = check_if_hvs(V, A, m)
        if not report.ok:
            raise PreconditionError(f"family member {k} is not an IF hypervector space:\n{report}")
    mu, nu = combine_degrees(members, op, convention)
    theorem = "THM3.7" if op == "intersect" else "THM3.8"
    return verdict_for(V, A, mu, nu, theorem, convention, seed, trial)


def replay_certificate(cert: Certificate, V: HypervectorSpace, A: IFS) -> bool:
    """True iff re-auditing the certificate's overlay reproduces its violation exactly."""
    v = cert.violation
    if v.axiom == "DEF2.9":
        x = v.key[0]
        total = cert.mu[x] + cert.nu[x]
        return total > 1 and str(total) == v.lhs_value
    report = check_if_hvs(V, A, IFS(V.carrier, cert.mu, cert.nu), cap=10**9)
    for w in report.violations:
        if w.sort_key == v.sort_key:
            return w == v and report.replay(w) == v
    return False
