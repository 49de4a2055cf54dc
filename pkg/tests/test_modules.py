"""Tests for NT-modules: free modules, sums, quotients, exactness and hom spaces."""

import numpy as np
import pytest

from common.errors import NotTypeA, ObjectMismatch
from modules.kgroups.order_complex import GradedAbelianGroup, Z0, Z1, ZERO
from modules.ntmodules.modules import (
    Entry, Resolution, cokernel, direct_sum, exactness_failure, free_certificate, free_module, is_exact,
    is_projective_type_a, module_hom_space, morphism_action, pushforward_module, quotient_map, scalar_map,
    scalar_quotient, shift_module, ss_and_nil, verify_properties,
)
from modules.poset.poset_core import MonotoneMap


class TestEntries:

    def test_group_with_relations(self):
        e = Entry((0, 0, 1), ((2, 0, 0),))
        assert e.group() == GradedAbelianGroup(1, 1, (2,), ())
        assert not e.is_free()

    def test_shift(self):
        assert Entry((0, 1)).shifted().parity == (1, 0)

    def test_zero_rows_are_dropped(self):
        assert Entry((0,)).with_relations([[0]]).relations == ()


class TestFreeModules:

    def test_entries_follow_hom_groups(self, cat_x3):
        p = free_module(cat_x3, "34")
        for z in cat_x3.objects:
            assert p.group(z) == cat_x3.hom_group("34", z)

    def test_shifted_free_module(self, cat_o2):
        p = free_module(cat_o2, "1", shift=1)
        assert p.name == "P_1[1]"
        assert p.group("2") == Z0
        assert p.group("1") == Z1

    @pytest.mark.parametrize("y", ["4", "34", "123", "1234"])
    def test_functorial_and_exact(self, cat_x3, y):
        p = free_module(cat_x3, y)
        assert p.is_functorial()
        assert exactness_failure(p) is None

    def test_semisimple_part(self, cat_x3):
        p = free_module(cat_x3, "123")
        ss = ss_and_nil(p).ss_groups()
        for z in cat_x3.objects:
            assert ss[z.bits] == (Z0 if str(z) == "123" else ZERO), str(z)

    def test_projective_over_accordion(self, cat_w4):
        for y in ("1", "34", "1234"):
            assert is_projective_type_a(free_module(cat_w4, y))

    def test_projectivity_needs_an_accordion(self, cat_x3):
        with pytest.raises(NotTypeA):
            is_projective_type_a(free_module(cat_x3, "3"))


class TestConstructions:

    def test_direct_sum_splits(self, cat_o2):
        a, b = free_module(cat_o2, "1"), free_module(cat_o2, "12")
        total, inclusions, projections = direct_sum([a, b])
        assert total.group("12") == a.group("12") + b.group("12")
        for inc, proj, part in zip(inclusions, projections, (a, b)):
            back = inc.then(proj)
            for y, comp in back.components.items():
                n = part.entries[y].size
                assert comp == [[int(i == j) for j in range(n)] for i in range(n)]
        assert total.is_functorial()

    def test_shift_module_flips_degrees(self, cat_o2):
        p = free_module(cat_o2, "12")
        assert shift_module(p).group("12") == Z1

    def test_quotient_by_scalar(self, cat_x3):
        p = free_module(cat_x3, "123")
        q = scalar_quotient(p, 3)
        assert q.group("123") == GradedAbelianGroup(even_torsion=(3,))
        assert q.is_functorial()
        coker, _ = cokernel(scalar_map(p, 3))
        assert coker.group("123") == q.group("123")

    def test_scalar_map_is_natural(self, cat_w4):
        assert scalar_map(free_module(cat_w4, "3"), 5).is_natural()

    def test_identity_pushforward(self, cat_x3, x3):
        p = free_module(cat_x3, "34")
        pushed = pushforward_module(p, MonotoneMap(x3, x3, (0, 1, 2, 3)), cat_x3)
        assert pushed.entry_table() == p.entry_table()

    def test_mismatched_composition(self, cat_o2):
        a, b = free_module(cat_o2, "1"), free_module(cat_o2, "2")
        with pytest.raises(ObjectMismatch):
            scalar_map(a, 2).then(scalar_map(b, 2))


class TestHomSpaces:

    @pytest.mark.parametrize("source, target, expected", [
        ("123", "123", 1),
        ("4", "34", 1),
        ("34", "4", 0),
    ])
    def test_free_module_maps(self, cat_x3, source, target, expected):
        hom = module_hom_space(free_module(cat_x3, source), free_module(cat_x3, target))
        assert hom.free_rank == expected
        assert hom.torsion == []
        assert all(f.is_natural() for f in hom.basis)

    def test_coordinates_of_a_scalar(self, cat_x3):
        p = free_module(cat_x3, "123")
        hom = module_hom_space(p, p)
        coords = hom.coordinates(scalar_map(p, 4))
        assert coords in ([4], [-4])

    def test_modules_over_different_categories(self, cat_o2, cat_x3):
        with pytest.raises(ObjectMismatch):
            module_hom_space(free_module(cat_o2, "1"), free_module(cat_x3, "1"))


class TestCategoryProperties:

    @pytest.mark.parametrize("fixture", ["cat_x3", "cat_x1", "cat_w4"])
    def test_properties_hold(self, fixture, request):
        report = verify_properties(request.getfixturevalue(fixture))
        assert report.prop1 and report.prop2
        assert report.nilpotency_index is not None

    def test_exactness_of_a_sum(self, cat_w4):
        total, _, _ = direct_sum([free_module(cat_w4, "1"), free_module(cat_w4, "34")])
        assert is_exact(total)


class TestRandomisedSums:

    @pytest.mark.parametrize("seed", range(6))
    def test_sums_of_free_modules(self, cat_w4, seed):
        rng = np.random.default_rng(seed)
        objects = cat_w4.objects
        picks = rng.choice(len(objects), size=3)
        shifts = rng.integers(0, 2, size=3)
        parts = [free_module(cat_w4, objects[int(i)], int(sh)) for i, sh in zip(picks, shifts)]
        total, _, _ = direct_sum(parts)
        assert is_projective_type_a(total)
        ss = ss_and_nil(total).ss_groups()
        assert sum(g.total_rank for g in ss.values()) == 3
        cert = free_certificate(total)
        assert cert is not None
        assert len(cert.summands) == 3

    def test_entry_free_exact_quotient_is_free(self, cat_w4):
        total, inclusions, _ = direct_sum([free_module(cat_w4, y) for y in ("1", "34", "1234")])
        quotient, _ = cokernel(inclusions[0])
        assert is_projective_type_a(quotient)
        cert = free_certificate(quotient)
        assert sorted(str(o) for o, _ in cert.summands) == ["1234", "34"]

    @pytest.mark.parametrize("seed", range(4))
    def test_nonzero_modules_have_nonzero_tops(self, cat_x3, seed):
        rng = np.random.default_rng(100 + seed)
        objects = cat_x3.objects
        parts = [free_module(cat_x3, objects[int(i)]) for i in rng.choice(len(objects), size=2)]
        total, _, _ = direct_sum(parts)
        quotient = scalar_quotient(total, int(rng.integers(2, 6)))
        assert not quotient.is_zero()
        assert any(not g.is_zero() for g in ss_and_nil(quotient).ss_groups().values())


class TestResolutions:

    @staticmethod
    def _multiplication(p, k, n):
        """0 -> P --k--> P -> P/n -> 0."""
        quotient = scalar_quotient(p, n)
        return Resolution([p, p], [scalar_map(p, k)], quotient, quotient_map(p, quotient))

    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_multiplication_resolves_the_quotient(self, cat_o2, k):
        res = self._multiplication(free_module(cat_o2, "1"), k, k)
        assert res.length == 1
        assert res.is_exact()

    def test_augmentation_kernel_must_match(self, cat_o2):
        res = self._multiplication(free_module(cat_o2, "1"), 2, 4)
        assert not res.is_exact()
        assert res.failure()[1] == 1

    def test_injectivity_is_taken_modulo_relations(self, cat_o2):
        # 2 kills the class of 2 in Z/4
        q = scalar_quotient(free_module(cat_o2, "1"), 4)
        res = self._multiplication(q, 2, 2)
        assert res.failure()[1] == 0


class TestFreeCertificates:

    @pytest.mark.parametrize("seed", range(4))
    def test_sums_of_free_modules(self, cat_x3, seed):
        rng = np.random.default_rng(200 + seed)
        objects = cat_x3.objects
        picks = [(objects[int(i)], int(sh))
                 for i, sh in zip(rng.choice(len(objects), size=3), rng.integers(0, 2, size=3))]
        total, _, _ = direct_sum([free_module(cat_x3, o, sh) for o, sh in picks])
        cert = free_certificate(total)
        assert cert is not None
        assert sorted((o.bits, sh) for o, sh in cert.summands) == sorted((o.bits, sh) for o, sh in picks)
        assert cert.iso.is_natural()

    def test_quotient_by_a_summand(self, cat_x3):
        picks = [("4", 0), ("34", 1), ("123", 1), ("1", 0)]
        total, inclusions, _ = direct_sum([free_module(cat_x3, y, sh) for y, sh in picks])
        quotient, _ = cokernel(inclusions[1])
        cert = free_certificate(quotient)
        assert cert is not None
        assert sorted((str(o), sh) for o, sh in cert.summands) == [("1", 0), ("123", 1), ("4", 0)]

    def test_torsion_top(self, cat_x3):
        assert free_certificate(scalar_quotient(free_module(cat_x3, "123"), 3)) is None

    def test_morphism_action_of_a_generator(self, cat_x3):
        p = free_module(cat_x3, "34")
        for k, a in enumerate(cat_x3.generators):
            assert morphism_action(p, cat_x3.generator(k)) == p.actions[k], a.name
