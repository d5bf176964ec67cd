"""Linear maps between hypervector spaces and fuzzy preimages along them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hypercore import DEFAULT_CAP, HypervectorSpace, PreconditionError, Report, Rule, evaluate_rules
from .ifalgebra import IFS, TheoremVerdict, check_if_hvs, verdict_for

DEFAULT_BOUND = 10**6


class SearchBoundError(RuntimeError):
    """The candidate space is larger than the configured bound."""


@dataclass(frozen=True)
class LinearMap:
    """A total map ``source -> target`` given by its value table."""

    source: HypervectorSpace
    target: HypervectorSpace
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.source.carrier):
            raise ValueError("map must send every source vector somewhere")
        if any(not 0 <= y < len(self.target.carrier) for y in values):
            raise ValueError("map sends a vector outside the target")
        object.__setattr__(self, "values", values)

    def __call__(self, x: int) -> int:
        return self.values[x]

    def image(self, s) -> frozenset:
        return frozenset(self.values[x] for x in s)

    @classmethod
    def build(cls, source: HypervectorSpace, target: HypervectorSpace, values) -> LinearMap:
        t = cls(source, target, values)
        report = check_linear(t)
        if not report.ok:
            raise PreconditionError(f"not a linear transformation:\n{report}")
        return t

    @classmethod
    def identity(cls, space: HypervectorSpace) -> LinearMap:
        return cls(space, space, tuple(range(len(space.carrier))))

    @classmethod
    def zero(cls, source: HypervectorSpace, target: HypervectorSpace) -> LinearMap:
        return cls(source, target, (target.theta,) * len(source.carrier))

    def then(self, other: LinearMap) -> LinearMap:
        """``other`` after ``self``."""
        if other.source != self.target:
            raise PreconditionError("maps are not composable")
        return LinearMap(self.source, other.target, tuple(other.values[y] for y in self.values))


def check_linear(t: LinearMap, cap: int = DEFAULT_CAP) -> Report:
    V, W = t.source, t.target
    if V.field != W.field:
        raise PreconditionError("source and target are over different hyperfields")
    Vc, Wc, Fc = V.carrier, W.carrier, V.field.carrier

    def additive(x, y):
        lhs = t.image(V.add(x, y))
        rhs = W.add(t(x), t(y))
        return lhs, rhs, lhs <= rhs

    def homogeneous(a, x):
        lhs = t.image(V.act(a, x))
        rhs = W.act(a, t(x))
        return lhs, rhs, lhs <= rhs

    rules = [
        Rule("DEF4.1.i", "T(x#y)", "T(x) #' T(y)", (("x", Vc), ("y", Vc)), additive, Wc.fmt_set, Wc.fmt_set),
        Rule("DEF4.1.ii", "T(a*x)", "a *' T(x)", (("a", Fc), ("x", Vc)), homogeneous, Wc.fmt_set, Wc.fmt_set),
        Rule("DEF4.1.iii", "T(theta)", "theta'", (),
             lambda: (t(V.theta), W.theta, t(V.theta) == W.theta), Wc.label, Wc.label),
    ]
    return evaluate_rules(rules, cap)


def preimage_ifs(t: LinearMap, B: IFS) -> IFS:
    """Pull ``B`` back along ``t``: both degree maps are composed with ``t``."""
    if B.carrier != t.target.carrier:
        raise PreconditionError("overlay is not over the target space")
    return IFS(
        t.source.carrier,
        tuple(B.mu[y] for y in t.values),
        tuple(B.nu[y] for y in t.values),
    )


def theorem_4_2_oracle(t: LinearMap, A: IFS, B: IFS) -> TheoremVerdict:
    lin = check_linear(t)
    if not lin.ok:
        raise PreconditionError(f"map is not linear:\n{lin}")
    target = check_if_hvs(t.target, A, B)
    if not target.ok:
        raise PreconditionError(f"target overlay is not an IF hypervector space:\n{target}")
    pulled = preimage_ifs(t, B)
    return verdict_for(t.source, A, pulled.mu, pulled.nu, "THM4.2")


def enumerate_linear_maps(
    source: HypervectorSpace, target: HypervectorSpace, bound: int = DEFAULT_BOUND
) -> list[LinearMap]:
    """Every linear map ``source -> target``, in lexicographic order of value tables."""
    n, m = len(source.carrier), len(target.carrier)
    if m**n > bound:
        raise SearchBoundError(f"{m}^{n} candidate maps exceed the bound {bound}")
    found = []
    for values in itertools.product(range(m), repeat=n):
        if values[source.theta] != target.theta:
            continue
        t = LinearMap(source, target, values)
        if check_linear(t).ok:
            found.append(t)
    return found
