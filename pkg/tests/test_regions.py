import math

import pytest

from specon import (
    BandUnion,
    BoxUnion,
    DescriptorError,
    FiniteGroup,
    FiniteSubset,
    ProductRegion,
    ProductSpace,
    Sphere2,
    Torus,
    arc,
    cap,
    empty_region,
    full_region,
    parse_region,
)

TWO_PI = 2 * math.pi


class TestMeasure:
    def test_arc(self):
        assert arc(Torus(1), 0.0, math.pi).measure == pytest.approx(math.pi)

    def test_cap_hemisphere(self):
        assert cap(Sphere2(), math.pi / 2).measure == pytest.approx(TWO_PI)

    def test_cap_closed_form(self):
        for t0 in [0.1, 0.7853, 2.5]:
            assert cap(Sphere2(), t0).measure == pytest.approx(TWO_PI * (1 - math.cos(t0)))

    def test_finite_subset(self):
        assert FiniteSubset(FiniteGroup(12, 1), [0, 4, 8]).measure == 3.0

    def test_box(self):
        r = BoxUnion(Torus(2), [((0, 1), (0, 2))])
        assert r.measure == pytest.approx(2.0)

    def test_overlapping_union_additive(self):
        # overlap disjointified: 2x2 + 2x2 - 1x1 overlap
        r = BoxUnion(Torus(2), [((0, 2), (0, 2)), ((1, 3), (1, 3))])
        assert r.measure == pytest.approx(7.0)

    def test_band_union_merges(self):
        r = BandUnion(Sphere2(), [(0.2, 0.8), (0.5, 1.0)])
        assert r.measure == pytest.approx(TWO_PI * (math.cos(0.2) - math.cos(1.0)))

    def test_bounds(self):
        for space, region in [
            (Torus(1), arc(Torus(1), 0.3, 2.0)),
            (Sphere2(), cap(Sphere2(), 1.1)),
            (FiniteGroup(9, 1), FiniteSubset(FiniteGroup(9, 1), [1, 5])),
        ]:
            assert 0 <= region.measure <= space.total_measure


class TestContains:
    def test_arc_midpoint(self):
        assert arc(Torus(1), 0.0, math.pi).contains([math.pi / 2])

    def test_arc_boundary_inside(self):
        r = arc(Torus(1), 0.5, 1.5)
        assert r.contains([0.5]) and r.contains([1.5])
        assert not r.contains([1.5000001])

    def test_cap_excludes(self):
        assert not cap(Sphere2(), math.pi / 4).contains([math.pi / 3, 0.0])

    def test_group_membership(self):
        r = FiniteSubset(FiniteGroup(12, 1), [0, 4, 8])
        assert r.contains([4.0])
        assert not r.contains([5.0])

    def test_wraparound_full_interval(self):
        r = arc(Torus(1), 0.0, TWO_PI)
        assert r.contains([0.0]) and r.contains([6.2])


class TestQuadratureMeasure:
    def test_full_space(self):
        for space in [Torus(2), Sphere2(), FiniteGroup(8, 1)]:
            cutoff = space.max_frequency() or 3.0
            q = space.build_quadrature(cutoff)
            assert full_region(space).quadrature_measure(q) == pytest.approx(
                space.total_measure, rel=1e-12
            )

    def test_arc_riemann_bound(self):
        t = Torus(1)
        q = t.build_quadrature(0, oversample=1000)  # 2000 nodes
        h = TWO_PI / q.nodes.shape[0]
        got = arc(t, 0.0, math.pi).quadrature_measure(q)
        assert abs(got - math.pi) <= 2 * h

    def test_empty(self):
        t = Torus(1)
        q = t.build_quadrature(2.0)
        assert empty_region(t).quadrature_measure(q) == 0.0
        assert empty_region(t).measure == 0.0


class TestInvariants:
    def test_monotone_nested_arcs(self):
        t = Torus(1)
        widths = [0.5, 1.0, 2.0, 4.0]
        measures = [arc(t, 0.0, w).measure for w in widths]
        assert measures == sorted(measures)

    def test_monotone_nested_caps(self):
        s = Sphere2()
        measures = [cap(s, t0).measure for t0 in [0.3, 0.8, 1.5, 2.9]]
        assert measures == sorted(measures)

    def test_complement_arc(self):
        r = arc(Torus(1), 0.7, 2.9)
        assert r.measure + r.complement().measure == pytest.approx(TWO_PI, abs=1e-12)

    def test_complement_cap_band(self):
        s = Sphere2()
        for r in [cap(s, 0.6), BandUnion(s, [(0.5, 1.2)])]:
            assert r.measure + r.complement().measure == pytest.approx(4 * math.pi, abs=1e-12)

    def test_complement_box_2d(self):
        r = BoxUnion(Torus(2), [((0, 1), (1, 3)), ((2, 4), (0, 2))])
        assert r.measure + r.complement().measure == pytest.approx(TWO_PI**2, abs=1e-10)

    def test_complement_subset(self):
        g = FiniteGroup(10, 1)
        r = FiniteSubset(g, [1, 2, 3])
        assert r.measure + r.complement().measure == 10.0


class TestProductRegions:
    def test_product(self):
        p = ProductSpace(Torus(1), Sphere2())
        r = ProductRegion(p, arc(p.first, 0, 1.0), cap(p.second, 0.5))
        assert r.measure == pytest.approx(1.0 * TWO_PI * (1 - math.cos(0.5)))
        assert r.contains([0.5, 0.2, 1.0])
        assert not r.contains([1.5, 0.2, 1.0])


class TestDescriptors:
    def test_parse_arc(self):
        r = parse_region(Torus(1), "arc:0:3.14159")
        assert r.measure == pytest.approx(3.14159)

    def test_parse_box(self):
        r = parse_region(Torus(2), "box:(0,1)x(0,2)")
        assert r.measure == pytest.approx(2.0)

    def test_parse_cap_band_set(self):
        assert parse_region(Sphere2(), "cap:0.7853").measure == pytest.approx(
            TWO_PI * (1 - math.cos(0.7853)))
        assert parse_region(Sphere2(), "band:0.5:1.2").measure == pytest.approx(
            TWO_PI * (math.cos(0.5) - math.cos(1.2)))
        assert parse_region(FiniteGroup(12, 1), "set:{0,4,8}").measure == 3.0

    def test_parse_set_tuples(self):
        r = parse_region(FiniteGroup(4, 2), "set:{(0,0),(1,2)}")
        assert r.measure == 2.0
        assert r.contains([1.0, 2.0])

    def test_parse_union(self):
        r = parse_region(Torus(1), "arc:0:1+arc:0.5:2")
        assert r.measure == pytest.approx(2.0)

    def test_parse_product(self):
        p = ProductSpace(Torus(1), Torus(1))
        r = parse_region(p, "product(arc:0:1,arc:0:2)")
        assert r.measure == pytest.approx(2.0)

    @pytest.mark.parametrize("text", ["arc:0", "cap:a", "blob:1", "set:{1,2", "box:(0,1)"])
    def test_parse_errors(self, text):
        space = FiniteGroup(8, 1) if text.startswith("set") else (
            Sphere2() if text.startswith("cap") else Torus(2))
        with pytest.raises(DescriptorError):
            parse_region(space, text)

    def test_parse_error_carries_token(self):
        with pytest.raises(DescriptorError) as err:
            parse_region(Torus(1), "arc:0:zebra")
        assert "arc:0:zebra" in str(err.value)
