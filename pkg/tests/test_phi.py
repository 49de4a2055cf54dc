"""Tests for the ungraded isomorphism from an accordion's category onto the chain's."""

import pytest

from common.errors import NotTypeA
from modules.ntcat.category import build_presented_category
from modules.ntcat.phi import boundary_sign, phi_iso
from modules.ntcat.type_a import accordion_form
from modules.poset.builtins import accordion
from tests.tables import accordion_shapes


class TestPhi:

    def test_w4(self, w4, cat_w4, cat_o4):
        iso = phi_iso(w4, cat_w4, cat_o4)
        assert len(iso.generator_map) == 15
        assert len(iso.object_map) == 10
        negated = [a.name for a, (sign, _) in iso.generator_map.items() if sign == -1]
        assert negated == ["d:4->3"]

    def test_identity_on_the_chain(self, o4, cat_o4):
        iso = phi_iso(o4, cat_o4, cat_o4)
        assert all(a == b for a, b in iso.object_map.items())
        assert all(sign == 1 and a == b for a, (sign, b) in iso.generator_map.items())

    def test_preserves_identities_and_generators(self, w4, cat_w4, cat_o4):
        iso = phi_iso(w4, cat_w4, cat_o4)
        for y in cat_w4.objects:
            assert iso.apply(cat_w4.identity(y)) == cat_o4.identity(iso.map_object(y))
        for a, (sign, b) in iso.generator_map.items():
            image = iso.apply(cat_w4.arrow_morphism(a.kind, a.source, a.target))
            assert image == cat_o4.arrow_morphism(b.kind, b.source, b.target).scale(sign)

    def test_as_dict(self, w4, cat_w4, cat_o4):
        out = phi_iso(w4, cat_w4, cat_o4).as_dict()
        assert out["objects"]["1"] == "1"
        assert len(out["generators"]) == 15

    def test_boundary_sign(self, w4):
        position = accordion_form(w4).position
        arrows = {a.name: a for a in build_presented_category(w4).generators}
        assert boundary_sign(w4, position, arrows["d:4->3"]) == -1
        assert boundary_sign(w4, position, arrows["d:1->2"]) == 1
        assert boundary_sign(w4, position, arrows["i:3->23"]) == 1

    def test_rejects_non_accordion(self, x3):
        with pytest.raises(NotTypeA):
            phi_iso(x3)

    @pytest.mark.slow
    @pytest.mark.parametrize("n_points", [5, 6])
    def test_every_accordion(self, n_points):
        co = build_presented_category(accordion([n_points, 1]))
        for shape in accordion_shapes(n_points):
            iso = phi_iso(accordion(shape), co=co)
            assert len(iso.object_map) == n_points * (n_points + 1) // 2
