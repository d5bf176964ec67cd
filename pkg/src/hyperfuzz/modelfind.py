"""Small-model search and random fuzzy overlays.

Structures are enumerated over carriers labelled ``"0" .. "n-1"`` with the
zero at index 0 (and the identity at index 1 for hyperfields).  Tables are
handled as bit masks during the search; each completed candidate is then
audited by the checkers in :mod:`hyperfuzz.hypercore`, relabelled into its
canonical form and deduplicated.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal, Sequence, Union

from .hypercore import (
    BinOp,
    Carrier,
    HyperOp,
    Hyperfield,
    Hypergroup,
    HypervectorSpace,
    ScalarAction,
    check_hyperfield,
    check_hypergroup,
    check_hypervector_space,
)
from .ifalgebra import IFS, is_if_hvs, is_if_hyperfield

Kind = Literal["hypergroup", "hyperfield", "hypervectorspace"]
Structure = Union[Hypergroup, Hyperfield, HypervectorSpace]
KINDS = ("hypergroup", "hyperfield", "hypervectorspace")
SIZE_CEILING = {"hypergroup": 4, "hyperfield": 3, "hypervectorspace": 3}
DEFAULT_BUDGET = 2_000_000
DEFAULT_RETRIES = 20_000


class OverlaySearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    kind: Kind
    size: int
    field: Hyperfield | None = None
    budget: int = DEFAULT_BUDGET
    allow_large: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.size < 1:
            raise ValueError("size must be at least 1")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.kind == "hypervectorspace" and self.field is None:
            raise ValueError("a hypervector space search needs a scalar hyperfield")
        if self.size > SIZE_CEILING[self.kind] and not self.allow_large:
            raise ValueError(
                f"size {self.size} is above the {self.kind} ceiling {SIZE_CEILING[self.kind]}; "
                "pass allow_large=True with an explicit budget"
            )


@dataclass(frozen=True, order=True)
class CanonicalForm:
    kind: str
    size: int
    key: tuple[int, ...]


@dataclass
class SearchResult:
    spec: SearchSpec
    structures: list[Structure] = field(default_factory=list)
    forms: list[CanonicalForm] = field(default_factory=list)
    partial: bool = False
    nodes: int = 0

    def __iter__(self) -> Iterator[Structure]:
        return iter(self.structures)

    def __len__(self) -> int:
        return len(self.structures)


# -- mask helpers -------------------------------------------------------------------


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _to_mask(s) -> int:
    m = 0
    for i in s:
        m |= 1 << i
    return m


def _permute_mask(mask: int, p: Sequence[int]) -> int:
    out = 0
    for i in _bits(mask):
        out |= 1 << p[i]
    return out


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.exhausted = False

    def tick(self) -> bool:
        self.used += 1
        if self.used > self.limit:
            self.exhausted = True
        return not self.exhausted


# -- commutative hypergroups with zero 0 ----------------------------------------------


def _hypergroup_masks(n: int, budget: _Budget, first: int | None = None) -> list[tuple[tuple[int, ...], ...]]:
    """Raw commutative hyperaddition tables with ``0 # a = {a}``.

    Cells above the diagonal are filled row-major; partial tables are pruned
    on negative uniqueness and on every associativity instance whose cells are
    already known.  ``first`` pins the value of cell (1, 1).
    """
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    full = (1 << n) - 1
    t = [[0] * n for _ in range(n)]
    known = [[False] * n for _ in range(n)]
    for a in range(n):
        t[0][a] = t[a][0] = 1 << a
        known[0][a] = known[a][0] = True
    triples = list(itertools.product(range(1, n), repeat=3))
    out: list[tuple[tuple[int, ...], ...]] = []

    def lsum(x, mask):
        acc = 0
        for w in _bits(mask):
            if not known[x][w]:
                return None
            acc |= t[x][w]
        return acc

    def rsum(mask, z):
        acc = 0
        for w in _bits(mask):
            if not known[w][z]:
                return None
            acc |= t[w][z]
        return acc

    def consistent(i, j) -> bool:
        for r in {i, j}:
            count, complete = 0, True
            for b in range(n):
                if known[r][b]:
                    count += t[r][b] & 1
                else:
                    complete = False
            if count > 1 or (complete and count != 1):
                return False
        for x, y, z in triples:
            if not (known[y][z] and known[x][y]):
                continue
            left = lsum(x, t[y][z])
            if left is None:
                continue
            right = rsum(t[x][y], z)
            if right is not None and left != right:
                return False
        return True

    def fill(k):
        if not budget.tick():
            return
        if k == len(cells):
            out.append(tuple(tuple(row) for row in t))
            return
        i, j = cells[k]
        choices = [first] if (k == 0 and first is not None) else range(1, full + 1)
        for m in choices:
            t[i][j] = t[j][i] = m
            known[i][j] = known[j][i] = True
            if consistent(i, j):
                fill(k + 1)
            known[i][j] = known[j][i] = False
            if budget.exhausted:
                return

    fill(0)
    return out


def _hyperop(carrier: Carrier, masks) -> HyperOp:
    return HyperOp(carrier, tuple(tuple(frozenset(_bits(m)) for m in row) for row in masks))


def _labels(n: int) -> Carrier:
    return Carrier(tuple(str(i) for i in range(n)))


# -- multiplicative groups on the nonzero elements --------------------------------------


def _mul_tables(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Commutative multiplications with 0 absorbing, 1 the identity and
    ``{1..n-1}`` an abelian group."""
    if n == 1:
        return [((0,),)]
    free = [(i, j) for i in range(2, n) for j in range(i, n)]
    tables = []
    for values in itertools.product(range(1, n), repeat=len(free)):
        m = [[0] * n for _ in range(n)]
        for a in range(1, n):
            m[1][a] = m[a][1] = a
        for (i, j), v in zip(free, values):
            m[i][j] = m[j][i] = v
        nz = range(1, n)
        if any(m[m[a][b]][c] != m[a][m[b][c]] for a in nz for b in nz for c in nz):
            continue
        if any(all(m[a][b] != 1 for b in nz) for a in nz):
            continue
        tables.append(tuple(tuple(r) for r in m))
    return tables


def _distributive(add, mul, n: int) -> bool:
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = _to_mask(mul[a][x] for x in _bits(add[b][c]))
                if lhs != add[mul[a][b]][mul[a][c]]:
                    return False
    return True


# -- canonical forms ------------------------------------------------------------------


def _perms(n: int, fixed: dict[int, int]) -> Iterator[tuple[int, ...]]:
    """Permutations ``old -> new`` sending each fixed old index to its target."""
    free_old = [i for i in range(n) if i not in fixed]
    free_new = [i for i in range(n) if i not in fixed.values()]
    for image in itertools.permutations(free_new):
        p = [0] * n
        for o, t in fixed.items():
            p[o] = t
        for o, t in zip(free_old, image):
            p[o] = t
        yield tuple(p)


def _relabel_add(masks, p) -> tuple[tuple[int, ...], ...]:
    n = len(p)
    out = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            out[p[a]][p[b]] = _permute_mask(masks[a][b], p)
    return tuple(tuple(r) for r in out)


def _relabel_mul(table, p) -> tuple[tuple[int, ...], ...]:
    n = len(p)
    out = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            out[p[a]][p[b]] = p[table[a][b]]
    return tuple(tuple(r) for r in out)


def _relabel_action(masks, p) -> tuple[tuple[int, ...], ...]:
    out = [[0] * len(p) for _ in masks]
    for a, row in enumerate(masks):
        for x, m in enumerate(row):
            out[a][p[x]] = _permute_mask(m, p)
    return tuple(tuple(r) for r in out)


def _flat(*tables) -> tuple[int, ...]:
    return tuple(c for t in tables for row in t for c in row)


def _add_masks(op: HyperOp):
    return tuple(tuple(_to_mask(c) for c in row) for row in op.table)


def _canon_hypergroup(masks, zero: int):
    best = None
    for p in _perms(len(masks), {zero: 0}):
        key = _flat(_relabel_add(masks, p))
        if best is None or key < best:
            best = key
    return best


def _canon_hyperfield(add, mul, zero: int, one: int):
    n = len(add)
    fixed = {zero: 0} if zero == one else {zero: 0, one: 1}
    best = None
    for p in _perms(n, fixed):
        key = _flat(_relabel_add(add, p), _relabel_mul(mul, p))
        if best is None or key < best:
            best = key
    return best


def _canon_space(add, action, theta: int):
    best = None
    for p in _perms(len(add), {theta: 0}):
        key = _flat(_relabel_add(add, p), _relabel_action(action, p))
        if best is None or key < best:
            best = key
    return best


def canonical_form(structure: Structure) -> CanonicalForm:
    """Lexicographically least table serialization over relabelings that
    fix the distinguished elements."""
    if isinstance(structure, HypervectorSpace):
        add = _add_masks(structure.add)
        action = tuple(tuple(_to_mask(c) for c in row) for row in structure.action.table)
        return CanonicalForm("hypervectorspace", len(add), _canon_space(add, action, structure.theta))
    if isinstance(structure, Hyperfield):
        add = _add_masks(structure.add)
        return CanonicalForm(
            "hyperfield", len(add), _canon_hyperfield(add, structure.mul.table, structure.zero, structure.one)
        )
    if isinstance(structure, Hypergroup):
        add = _add_masks(structure.add)
        return CanonicalForm("hypergroup", len(add), _canon_hypergroup(add, structure.zero))
    raise TypeError(f"no canonical form for {type(structure).__name__}")


def _unflat(key, n: int, rows: int = None):
    rows = n if rows is None else rows
    return tuple(tuple(key[r * n:(r + 1) * n]) for r in range(rows))


def _rebuild(form: CanonicalForm, fld: Hyperfield | None) -> Structure:
    n, key = form.size, form.key
    c = _labels(n)
    add = _hyperop(c, _unflat(key[: n * n], n))
    if form.kind == "hypergroup":
        return Hypergroup.build(c, add, 0)
    if form.kind == "hyperfield":
        mul = BinOp(c, _unflat(key[n * n:], n))
        return Hyperfield.build(c, add, mul, 0, 0 if n == 1 else 1)
    rows = len(fld.carrier)
    action = ScalarAction(fld.carrier, c, tuple(
        tuple(frozenset(_bits(m)) for m in row) for row in _unflat(key[n * n:], n, rows)
    ))
    return HypervectorSpace.build(fld, c, add, action, 0)


# -- search tasks (top level so they pickle) ------------------------------------------


def _hypergroup_task(n: int, first: int | None, budget: int):
    b = _Budget(budget)
    c = _labels(n)
    found = {}
    for masks in _hypergroup_masks(n, b, first):
        report, zero, _ = check_hypergroup(c, _hyperop(c, masks))
        if report.ok:
            found[_canon_hypergroup(masks, zero)] = True
    return sorted(found), b.used, b.exhausted


def _hyperfield_task(n: int, mul, budget: int):
    b = _Budget(budget)
    c = _labels(n)
    one = 0 if n == 1 else 1
    found = {}
    for masks in _hypergroup_masks(n, b):
        if not _distributive(masks, mul, n):
            continue
        report, _, _ = check_hyperfield(c, _hyperop(c, masks), BinOp(c, mul), 0, one)
        if report.ok:
            found[_canon_hyperfield(masks, mul, 0, one)] = True
    return sorted(found), b.used, b.exhausted


def _action_rows(fld: Hyperfield, add, n: int, budget: _Budget):
    """Action tables, assigned one scalar row at a time.  After each row every
    Def 2.7 instance that only touches assigned rows is checked."""
    F = fld
    m = len(F.carrier)
    full = (1 << n) - 1
    rows: list[list[int] | None] = [None] * m
    negv = [next(y for y in range(n) if add[x][y] & 1) for x in range(n)]
    out = []

    def vsum(s, t):
        acc = 0
        for x in _bits(s):
            for y in _bits(t):
                acc |= add[x][y]
        return acc

    def on_set(a, s):
        acc = 0
        for x in _bits(s):
            acc |= rows[a][x]
        return acc

    def options(a, x):
        for mask in range(1, full + 1):
            if a == F.zero and x == 0 and mask != 1:
                continue
            if a == F.zero and not mask & 1:
                continue
            if a == F.one and not mask >> x & 1:
                continue
            yield mask

    def ok(done):
        for a in done:
            for x in range(n):
                for y in range(n):
                    if on_set(a, add[x][y]) & ~vsum(rows[a][x], rows[a][y]):
                        return False
        for a in done:
            if F.neg[a] in done and any(rows[F.neg[a]][x] != rows[a][negv[x]] for x in range(n)):
                return False
            for b in done:
                s = F.add(a, b)
                if all(c in done for c in s):
                    for x in range(n):
                        lhs = 0
                        for c in s:
                            lhs |= rows[c][x]
                        if lhs & ~vsum(rows[a][x], rows[b][x]):
                            return False
                ab = F.mul(a, b)
                if ab in done:
                    for x in range(n):
                        if rows[ab][x] != on_set(a, rows[b][x]):
                            return False
        return True

    def fill(a, done):
        if not budget.tick():
            return
        if a == m:
            out.append(tuple(tuple(r) for r in rows))
            return
        for row in itertools.product(*(list(options(a, x)) for x in range(n))):
            rows[a] = list(row)
            if ok(done | {a}):
                fill(a + 1, done | {a})
            rows[a] = None
            if budget.exhausted:
                return

    fill(0, frozenset())
    return out


def _space_task(fld: Hyperfield, n: int, add, budget: int):
    b = _Budget(budget)
    c = _labels(n)
    found = {}
    hop = _hyperop(c, add)
    for action in _action_rows(fld, add, n, b):
        act = ScalarAction(fld.carrier, c, tuple(tuple(frozenset(_bits(m)) for m in r) for r in action))
        report, theta, _ = check_hypervector_space(fld, c, hop, act, 0)
        if report.ok:
            found[_canon_space(add, action, theta)] = True
    return sorted(found), b.used, b.exhausted


def _tasks(spec: SearchSpec):
    n = spec.size
    if spec.kind == "hypergroup":
        if n == 1:
            return [(_hypergroup_task, (n, None, spec.budget))]
        return [(_hypergroup_task, (n, first, spec.budget)) for first in range(1, 1 << n)]
    if spec.kind == "hyperfield":
        return [(_hyperfield_task, (n, mul, spec.budget)) for mul in _mul_tables(n)]
    groups = _hypergroup_masks(n, _Budget(spec.budget))
    return [(_space_task, (spec.field, n, add, spec.budget)) for add in groups]


def _run(task):
    fn, args = task
    return fn(*args)


def enumerate_structures(spec: SearchSpec, workers: int = 1) -> SearchResult:
    """Every structure of the requested kind and size up to isomorphism, in
    canonical-form order.  ``spec.budget`` bounds the nodes of each top-level
    branch, so the output does not depend on ``workers``."""
    tasks = _tasks(spec)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, tasks))
    else:
        results = [_run(t) for t in tasks]
    keys = sorted({k for found, _, _ in results for k in found})
    result = SearchResult(spec)
    result.nodes = sum(used for _, used, _ in results)
    result.partial = any(exhausted for _, _, exhausted in results)
    for key in keys:
        form = CanonicalForm(spec.kind, spec.size, key)
        result.forms.append(form)
        result.structures.append(_rebuild(form, spec.field))
    return result


# -- random overlays -----------------------------------------------------------------


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_ifs(carrier: Carrier, grid: int = 8, seed=0) -> IFS:
    """Draw ``mu`` uniformly from ``{0, 1/g, .., 1}``, then ``nu`` uniformly
    from the grid points in ``[0, 1 - mu]``."""
    if grid < 1:
        raise ValueError("grid must be at least 1")
    rng = _rng(seed)
    mu, nu = [], []
    for _ in range(len(carrier)):
        m = rng.randint(0, grid)
        mu.append(Fraction(m, grid))
        nu.append(Fraction(rng.randint(0, grid - m), grid))
    return IFS(carrier, tuple(mu), tuple(nu))


def _space_screen(space: HypervectorSpace, field_overlay: IFS, grid: int):
    """Proposal and a fast acceptance test on grid numerators.

    Field degrees are scaled by ``grid`` (possibly non-integral, compared
    exactly); the full checker still confirms every accepted draw.
    """
    n = len(space.carrier)
    one, th = space.field.one, space.theta
    mu_f = [d * grid for d in field_overlay.mu]
    nu_f = [d * grid for d in field_overlay.nu]
    top = math.floor(mu_f[one])
    floor = math.ceil(nu_f[one])
    cells = [(x, y, tuple(space.add(x, y))) for x in range(n) for y in range(x, n)]
    acts = [(x, mu_f[a], nu_f[a], tuple(space.act(a, x))) for a in range(len(mu_f)) for x in range(n)]
    neg = space.neg

    def draw(rng: random.Random):
        mu, nu = [], []
        for x in range(n):
            if x == th:
                m = rng.randint(0, top)
                v = rng.randint(min(floor, grid - m), grid - m)
            else:
                m = rng.randint(0, grid)
                v = rng.randint(0, grid - m)
            mu.append(m)
            nu.append(v)
        return mu, nu

    def accept(mu, nu) -> bool:
        if mu[th] > mu_f[one] or nu[th] < nu_f[one]:
            return False
        for x in range(n):
            if mu[neg[x]] < mu[x] or nu[neg[x]] > nu[x]:
                return False
        for x, y, cell in cells:
            if min(mu[z] for z in cell) < min(mu[x], mu[y]) or max(nu[z] for z in cell) > max(nu[x], nu[y]):
                return False
        for x, mf, nf, cell in acts:
            if min(mu[z] for z in cell) < min(mu[x], mf) or max(nu[z] for z in cell) > max(nu[x], nf):
                return False
        return True

    return draw, accept


def random_overlay(
    structure: Structure,
    grid: int = 8,
    seed=0,
    field_overlay: IFS | None = None,
    retries: int = DEFAULT_RETRIES,
) -> IFS:
    """A random overlay that passes the structure's fuzzy predicate, by rejection.

    Hyperfields are sampled against the IF-hyperfield conditions, hypervector
    spaces against the IF-hypervector-space conditions relative to
    ``field_overlay``; plain hypergroups accept any IFS.
    """
    rng = _rng(seed)
    if isinstance(structure, HypervectorSpace):
        if field_overlay is None:
            raise ValueError("sampling a space overlay needs the field overlay")
        propose, screen = _space_screen(structure, field_overlay, grid)
        for _ in range(retries):
            mu, nu = propose(rng)
            if screen(mu, nu):
                b = IFS(structure.carrier, tuple(Fraction(m, grid) for m in mu), tuple(Fraction(v, grid) for v in nu))
                if not is_if_hvs(structure, field_overlay, b):
                    raise AssertionError(f"screened overlay fails the full audit: {b}")
                return b
        raise OverlaySearchError(
            f"no valid overlay for the HypervectorSpace on {structure.carrier.names} after {retries} draws"
        )
    elif isinstance(structure, Hyperfield):
        draw = lambda: random_ifs(structure.carrier, grid, rng)  # noqa: E731
        accept = lambda a: is_if_hyperfield(structure, a)  # noqa: E731
    else:
        return random_ifs(structure.carrier, grid, rng)
    for _ in range(retries):
        candidate = draw()
        if accept(candidate):
            return candidate
    raise OverlaySearchError(
        f"no valid overlay for the {type(structure).__name__} on {structure.carrier.names} "
        f"after {retries} draws"
    )
