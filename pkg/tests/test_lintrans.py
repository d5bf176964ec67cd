from __future__ import annotations

import itertools
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfuzz.catalog import gf, krasner, power_space, self_space
from hyperfuzz.hypercore import PreconditionError
from hyperfuzz.ifalgebra import IFS, check_if_hvs
from hyperfuzz.lintrans import (
    LinearMap,
    SearchBoundError,
    check_linear,
    enumerate_linear_maps,
    preimage_ifs,
    theorem_4_2_oracle,
)
from hyperfuzz.trials import valid_pair

K = krasner()
KK = self_space(K)
K2 = power_space(K, 2)


def matrix_maps(p: int, k: int, m: int) -> set[tuple[int, ...]]:
    """Value tables of all m x k matrices over GF(p), acting on labelled tuples."""
    src = list(itertools.product(range(p), repeat=k))
    dst = {t: i for i, t in enumerate(itertools.product(range(p), repeat=m))}
    tables = set()
    for entries in itertools.product(range(p), repeat=k * m):
        rows = [entries[r * k:(r + 1) * k] for r in range(m)]
        image = [tuple(sum(a * x for a, x in zip(row, vec)) % p for row in rows) for vec in src]
        tables.add(tuple(dst[y] for y in image))
    return tables


class TestLinearMaps:
    def test_identity_and_zero(self):
        for v in (KK, K2):
            assert check_linear(LinearMap.identity(v)).ok
            assert check_linear(LinearMap.zero(v, KK)).ok

    def test_projection_and_embedding(self):
        proj = LinearMap(K2, KK, tuple(int(n[0]) for n in K2.carrier.names))
        emb = LinearMap(KK, K2, (K2.carrier.index("00"), K2.carrier.index("10")))
        assert check_linear(proj).ok and check_linear(emb).ok
        assert check_linear(emb.then(proj)).ok
        assert emb.then(proj) == LinearMap.identity(KK)

    def test_theta_not_fixed(self):
        report = check_linear(LinearMap(KK, KK, (1, 1)))
        assert "DEF4.1.iii" in report.axioms()

    def test_inclusion_failure(self):
        # GF(2): x -> 1 for x != 0 on GF(2)^2 is not additive
        v = power_space(gf(2), 2)
        w = self_space(gf(2))
        t = LinearMap(v, w, (0, 1, 1, 1))
        assert "DEF4.1.i" in check_linear(t).axioms()

    @pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
    def test_gf2_counts_match_matrices(self, k, m):
        f = gf(2)
        v = self_space(f) if k == 1 else power_space(f, k)
        w = self_space(f) if m == 1 else power_space(f, m)
        found = {t.values for t in enumerate_linear_maps(v, w)}
        assert found == matrix_maps(2, k, m)

    def test_gf3_count(self):
        v = self_space(gf(3))
        assert {t.values for t in enumerate_linear_maps(v, v)} == matrix_maps(3, 1, 1)

    def test_bound(self):
        with pytest.raises(SearchBoundError):
            enumerate_linear_maps(K2, K2, bound=10)

    def test_different_fields(self):
        with pytest.raises(PreconditionError):
            check_linear(LinearMap(KK, self_space(gf(2)), (0, 0)))


class TestPreimage:
    def test_composes_degrees(self):
        proj = LinearMap(K2, KK, tuple(int(n[0]) for n in K2.carrier.names))
        b = IFS(KK.carrier, (Fr(1, 2), Fr(1, 3)), (Fr(1, 4), Fr(1, 2)))
        pulled = preimage_ifs(proj, b)
        assert pulled.mu == (Fr(1, 2), Fr(1, 2), Fr(1, 3), Fr(1, 3))
        assert pulled.nu == (Fr(1, 4), Fr(1, 4), Fr(1, 2), Fr(1, 2))

    def test_wrong_carrier(self):
        with pytest.raises(PreconditionError):
            preimage_ifs(LinearMap.identity(KK), IFS.constant(K2.carrier, 0, 0))

    def test_oracle_preconditions(self):
        a = IFS(K.carrier, (Fr(1), Fr(1, 2)), (Fr(0), Fr(1, 4)))
        bad = IFS(KK.carrier, (Fr(1, 3), Fr(1, 2)), (Fr(1, 4), Fr(1, 2)))
        with pytest.raises(PreconditionError):
            theorem_4_2_oracle(LinearMap.identity(KK), a, bad)
        with pytest.raises(PreconditionError):
            theorem_4_2_oracle(LinearMap(KK, KK, (1, 1)), a, bad)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_preimage_is_valid(self, spaces, seed):
        rng = random.Random(seed)
        names = sorted(spaces)
        w = spaces[rng.choice(names)]
        sources = [spaces[n] for n in names if spaces[n].field == w.field]
        v = rng.choice(sources)
        t = rng.choice(enumerate_linear_maps(v, w))
        a, b = valid_pair(w, 8, rng)
        verdict = theorem_4_2_oracle(t, a, b)
        assert verdict.verified
        assert check_if_hvs(v, a, preimage_ifs(t, b)).ok
