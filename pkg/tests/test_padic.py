import random
from fractions import Fraction as F
from math import gcd, inf

import pytest

from asaikit.arith import CyclotomicNumber, euler_phi
from asaikit.characters import enumerate_characters
from asaikit.padic import (
    MeasureTable,
    akc_check,
    dirac_measure_table,
    glue_check,
    integrality_bound_check,
    kummer_check,
    level_view,
    mellin_table,
    padic_valuation,
    single_m_weights,
)


class TestValuation:
    def test_basic_values(self):
        assert padic_valuation(CyclotomicNumber.from_rational(3), 3) == 1
        assert padic_valuation(CyclotomicNumber.from_rational(F(2, 9)), 3) == -2
        assert padic_valuation(CyclotomicNumber.from_rational(0), 3) == inf

    def test_uniformizer(self):
        assert padic_valuation(1 - CyclotomicNumber.zeta(5), 5) == F(1, 4)
        assert padic_valuation(1 - CyclotomicNumber.zeta(9), 3) == F(1, 6)
        assert padic_valuation(1 - CyclotomicNumber.zeta(3), 3) == F(1, 2)

    def test_axioms_pure_field(self):
        rng = random.Random(0)
        for m, p in ((9, 3), (27, 3), (25, 5)):
            deg = euler_phi(m)
            for _ in range(8):
                a = CyclotomicNumber(m, [F(rng.randint(-6, 6), rng.choice((1, 3))) for _ in range(deg)])
                b = CyclotomicNumber(m, [F(rng.randint(-6, 6)) for _ in range(deg)])
                if a.is_zero() or b.is_zero():
                    continue
                va, vb = padic_valuation(a, p), padic_valuation(b, p)
                assert padic_valuation(a * b, p) == va + vb
                assert padic_valuation(a + b, p) >= min(va, vb)

    def test_mixed_field_embedding(self):
        i4 = CyclotomicNumber.zeta(4)
        assert padic_valuation(i4, 5) == 0
        assert padic_valuation(5 * i4, 5) == 1
        v1 = padic_valuation(2 + i4, 5)
        v2 = padic_valuation(2 - i4, 5)
        assert sorted([v1, v2]) == [0, 1]  # norm 5 splits across the embedding pair

    def test_mixed_with_ramified_part(self):
        z20 = CyclotomicNumber.zeta(20)
        assert padic_valuation(1 - z20**4, 5) == F(1, 4)
        x = (1 - CyclotomicNumber.zeta(5)) * 5
        assert padic_valuation(x.lift(20), 5) == F(5, 4)

    def test_mixed_axioms(self):
        rng = random.Random(1)
        deg = euler_phi(20)
        for _ in range(6):
            a = CyclotomicNumber(20, [F(rng.randint(-4, 4)) for _ in range(deg)])
            b = CyclotomicNumber(20, [F(rng.randint(-4, 4)) for _ in range(deg)])
            if a.is_zero() or b.is_zero():
                continue
            va, vb = padic_valuation(a, 5), padic_valuation(b, 5)
            assert padic_valuation(a * b, 5) == va + vb

    def test_unsupported_residue_degree(self):
        # 7-th roots of unity do not embed in Z_5 (5 has order 6 mod 7)
        with pytest.raises(ValueError):
            padic_valuation(1 + CyclotomicNumber.zeta(7), 5)

    def test_margin_constant(self):
        # v(phi(p^j)) = j - 1
        for p in (3, 5):
            for j in (1, 2, 3):
                v = padic_valuation(CyclotomicNumber.from_rational(euler_phi(p**j)), p)
                assert v == j - 1


class TestKummer:
    def test_dirac_control(self):
        for p, j in ((3, 1), (3, 2), (3, 3), (5, 1), (5, 2)):
            chars = enumerate_characters(p**j)
            u = (1 + p) % p**j
            table = {ch: ch.value(u) for ch in chars}
            for a in range(1, p**j):
                if gcd(a, p) != 1:
                    continue
                rep = kummer_check(table, a, j, p)
                assert rep.passed
                if a % p**j == u:
                    assert rep.valuation == j - 1  # tight margin
                else:
                    assert rep.valuation == inf

    def test_negative_control(self):
        chars = enumerate_characters(25)
        prim = [c for c in chars if c.is_primitive and not c.is_trivial][0]
        table = {
            ch: CyclotomicNumber.from_rational(1 if ch == prim else 0) for ch in chars
        }
        rep = kummer_check(table, 2, 2, 5)
        assert not rep.passed and rep.valuation == 0

    def test_level_one_integral_tables_pass(self):
        table = {ch: CyclotomicNumber.from_rational(7) for ch in enumerate_characters(5)}
        assert kummer_check(table, 3, 1, 5).passed

    def test_incomplete_table_rejected(self):
        chars = enumerate_characters(9)
        table = {ch: ch.value(2) for ch in chars[:-1]}
        with pytest.raises(ValueError):
            kummer_check(table, 1, 2, 3)


class TestAkc:
    def test_dirac_reduction(self):
        chars = enumerate_characters(5)
        ys = [y for y in range(1, 26) if gcd(y, 5) == 1]
        funcs = [(ch.inverse().value(2), {y: ch.value(y) for y in ys}) for ch in chars]
        targets = [ch.value(7) for ch in chars]  # values of a point mass at 7
        rep = akc_check(funcs, targets, 0, 5)
        assert rep.hypothesis_holds and rep.passed

    def test_vacuous_weights(self):
        chars = enumerate_characters(5)
        zero = CyclotomicNumber.from_rational(0)
        funcs = [(zero, {1: ch.value(1)}) for ch in chars]
        targets = [ch.value(2) for ch in chars]
        rep = akc_check(funcs, targets, 3, 5)
        assert rep.hypothesis_holds and rep.passed

    def test_failed_hypothesis_reported(self):
        prim = [c for c in enumerate_characters(5) if not c.is_trivial][0]
        funcs = [(CyclotomicNumber.from_rational(1), {2: prim.value(2)})]
        targets = [CyclotomicNumber.from_rational(0)]
        rep = akc_check(funcs, targets, 2, 5)
        assert not rep.hypothesis_holds
        assert rep.counterexample_y == 2
        assert rep.passed is None


class TestGlue:
    def test_dirac_table_passes_all_families(self):
        tab = dirac_measure_table(5, 2, 7, 2)
        fams = [single_m_weights(tab, m, a, j) for m in (0, 2) for a in (1, 3) for j in (1, 2)]
        rep = glue_check(tab, fams, 1, depth=1)
        assert rep.passed and rep.hypothesis_failures == 0

    def test_single_m_reduction_bit_identical(self):
        tab = dirac_measure_table(3, 2, 4, 2)
        for m in (0, 2):
            for a in (1, 2):
                for j in (1, 2):
                    fam = single_m_weights(tab, m, a, j)
                    acc = CyclotomicNumber.from_rational(0)
                    for (mm, ch), b in fam.items():
                        acc = acc + b * tab.entries[(mm, ch)]
                    sub = level_view(tab, m, j)
                    acc2 = CyclotomicNumber.from_rational(0)
                    for ch in enumerate_characters(3**j):
                        acc2 = acc2 + ch.inverse().value(a) * sub[ch]
                    assert acc == acc2

    def test_random_table_fails(self):
        rng = random.Random(3)
        bad = dirac_measure_table(5, 2, 7, 2)
        for key in list(bad.entries)[:8]:
            bad.entries[key] = CyclotomicNumber.from_rational(F(rng.randint(1, 9)))
        rep = glue_check(bad, [single_m_weights(bad, 0, 1, 2)], 2, depth=1)
        assert not rep.passed or rep.hypothesis_failures > 0


class TestBoundsAndMellin:
    def test_integrality_bound(self):
        one = CyclotomicNumber.from_rational(1)
        assert integrality_bound_check(one, 2, 0, 1, 0, 5)
        past = CyclotomicNumber.from_rational(F(1, 5 ** (1 * (4 * 2 - 0 + 3) + 0 + 1)))
        assert not integrality_bound_check(past, 2, 0, 1, 0, 5)

    def test_mellin_is_zero_slice(self):
        tab = dirac_measure_table(5, 2, 7, 1)
        mt = mellin_table(tab)
        for ch, val in mt.items():
            assert val == ch.value(7)
        assert len(mt) == euler_phi(5) + 1 - 1  # all chars of conductor <= 5

    def test_empty_character_set(self):
        tab = MeasureTable(5, 2, F(1))
        assert mellin_table(tab) == {}


class TestMeasureFile:
    def test_round_trip(self):
        tab = dirac_measure_table(5, 2, 7, 2)
        tab2 = MeasureTable.loads(tab.dumps())
        assert tab2.p == tab.p and tab2.n == tab.n and tab2.kappa == tab.kappa
        assert set(tab2.entries) == set(tab.entries)
        for k, v in tab.entries.items():
            assert tab2.entries[k] == v

    def test_missing_header(self):
        with pytest.raises(ValueError):
            MeasureTable.loads("p 5\nn 2\n")
