"""Tests for the exact module with a length-two projective resolution and its Ext^2."""

import pytest

from common.errors import PipelinePreconditionFailed
from common.intmat import unimodular_inverse
from modules.kgroups.order_complex import GradedAbelianGroup
from modules.ntmodules.counterexample import build_j, counterexample_pipeline
from modules.ntmodules.modules import free_certificate, is_exact

X3_M_ENTRIES = {
    "4": "ℤ[0]",
    "34": "ℤ[0]²",
    "134": "ℤ[0]",
    "234": "ℤ[0]",
    "3": "ℤ[0]",
    "1234": "0",
    "13": "0",
    "23": "0",
    "123": "ℤ[1]",
    "1": "ℤ[1]",
    "2": "ℤ[1]",
}


class TestBuildJ:

    def test_x3(self, cat_x3):
        p_y, p0, into_y, j = build_j(cat_x3, "34")
        assert into_y
        assert all(ind.target == cat_x3.objects[cat_x3.obj("34")] for ind in into_y)
        assert j.is_natural()
        assert p0.is_functorial()

    def test_pseudocircle_entry_map(self, cat_c2, c2):
        p_y, p0, into_y, j = build_j(cat_c2, "1^1")
        assert {ind.source.bits for ind in into_y} == {
            c2.parse_subset("{1^0,2^0,1^1}").bits, c2.parse_subset("{1^1,2^1,1^0}").bits,
        }
        z = "{2^1,1^0,2^0}"
        assert p_y.group(z) == GradedAbelianGroup(odd_rank=2)
        assert p0.group(z) == GradedAbelianGroup(odd_rank=4)
        block = j.component(z)
        # (a, b) -> (a, b, a, b) up to a basis change in each summand
        assert unimodular_inverse(block[:2]) is not None
        assert unimodular_inverse(block[2:]) is not None
        report = counterexample_pipeline(cat_c2, "1^1", 2)
        assert report.M.group(z) == GradedAbelianGroup(odd_rank=2)


class TestPipeline:

    @pytest.mark.parametrize("k", [2, 3])
    def test_x3(self, cat_x3, k):
        report = counterexample_pipeline(cat_x3, "34", k)
        assert report.ext2_order == k
        assert report.hom_p0_py_rank == 0
        assert report.m_exact
        assert report.resolution.is_exact()
        assert report.resolution.length == 2

    @pytest.mark.slow
    @pytest.mark.parametrize("k", range(4, 13))
    def test_x3_many_k(self, cat_x3, k):
        report = counterexample_pipeline(cat_x3, "34", k)
        assert report.ext2_order == k
        assert report.resolution.is_exact()

    def test_x3_module_entries(self, cat_x3):
        report = counterexample_pipeline(cat_x3, "34", 2)
        assert report.M.entry_table() == X3_M_ENTRIES
        assert is_exact(report.M)
        assert free_certificate(report.M) is None
        assert report.M_k.is_functorial()

    def test_report_dict(self, cat_x3):
        out = counterexample_pipeline(cat_x3, "34", 5).as_dict()
        assert out["y"] == "34"
        assert out["k"] == 5
        assert out["ext2_order"] == 5
        assert out["resolution_exact"] is True
        assert out["M_entries"] == X3_M_ENTRIES

    def test_report_dict_mirrors_checks(self, cat_x3):
        report = counterexample_pipeline(cat_x3, "34", 2)
        out = report.as_dict()
        assert (out["j_injective"], out["M_entry_free"], out["M_exact"], out["resolution_exact"]) == (
            report.j_injective, report.m_entry_free, report.m_exact, report.resolution_exact)
        report.m_exact = False
        assert report.as_dict()["M_exact"] is False

    def test_x1(self, cat_x1):
        report = counterexample_pipeline(cat_x1, "4", 2)
        assert report.ext2_order == 2
        assert report.resolution.is_exact()

    def test_pseudocircle(self, cat_c2):
        report = counterexample_pipeline(cat_c2, "1^1", 3)
        assert report.ext2_order == 3
        assert report.hom_p0_py_rank == 0

    def test_k_must_be_at_least_two(self, cat_x3):
        with pytest.raises(PipelinePreconditionFailed) as info:
            counterexample_pipeline(cat_x3, "34", 1)
        assert info.value.assumption == "k >= 2"
