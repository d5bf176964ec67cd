"""Named fixture structures: Krasner's hyperfield, singleton lifts of prime
fields, and the hypervector spaces built over them."""

from __future__ import annotations

import itertools

from .hypercore import (
    Carrier,
    Hyperfield,
    HypervectorSpace,
    action_from,
    binop_from,
    hyperop_from,
)


def krasner() -> Hyperfield:
    """``K = {0, 1}`` with ``1 + 1 = {0, 1}`` and ordinary multiplication."""
    c = Carrier(("0", "1"))
    add = hyperop_from(c, lambda a, b: {0, 1} if a == b == 1 else {a | b})
    mul = binop_from(c, lambda a, b: a * b)
    return Hyperfield.build(c, add, mul, 0, 1)


def gf(p: int) -> Hyperfield:
    """The prime field ``GF(p)`` lifted to singleton hyperaddition."""
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    c = Carrier(tuple(str(i) for i in range(p)))
    add = hyperop_from(c, lambda a, b: {(a + b) % p})
    mul = binop_from(c, lambda a, b: (a * b) % p)
    return Hyperfield.build(c, add, mul, 0, 1)


def self_space(field: Hyperfield) -> HypervectorSpace:
    """``F`` as a space over itself with ``a * x = {a.x}``."""
    c = field.carrier
    action = action_from(c, c, lambda a, x: {field.mul(a, x)})
    return HypervectorSpace.build(field, c, field.add, action, field.zero)


def power_space(field: Hyperfield, k: int) -> HypervectorSpace:
    """``F^k`` with componentwise hyperaddition and action."""
    n = len(field.carrier)
    tuples = list(itertools.product(range(n), repeat=k))
    index = {t: i for i, t in enumerate(tuples)}
    names = tuple("".join(field.carrier.label(e) for e in t) for t in tuples)
    c = Carrier(names)

    def vadd(x, y):
        parts = [field.add(a, b) for a, b in zip(tuples[x], tuples[y])]
        return {index[t] for t in itertools.product(*parts)}

    def act(a, x):
        return {index[tuple(field.mul(a, e) for e in tuples[x])]}

    add = hyperop_from(c, vadd)
    return HypervectorSpace.build(field, c, add, action_from(field.carrier, c, act), index[(field.zero,) * k])


def trivial_space(field: Hyperfield) -> HypervectorSpace:
    c = Carrier(("0",))
    return HypervectorSpace.build(
        field, c, hyperop_from(c, lambda a, b: {0}), action_from(field.carrier, c, lambda a, x: {0}), 0
    )


def fixture_fields() -> dict[str, Hyperfield]:
    return {"K": krasner(), "GF2": gf(2), "GF3": gf(3)}


def fixture_spaces(max_size: int = 4) -> dict[str, HypervectorSpace]:
    """All catalog spaces with at most ``max_size`` vectors, keyed by name."""
    spaces = {}
    for name, f in fixture_fields().items():
        spaces[f"0/{name}"] = trivial_space(f)
        spaces[f"{name}/{name}"] = self_space(f)
        if len(f.carrier) ** 2 <= max_size:
            spaces[f"{name}^2/{name}"] = power_space(f, 2)
    return {k: v for k, v in spaces.items() if len(v.carrier) <= max_size}
