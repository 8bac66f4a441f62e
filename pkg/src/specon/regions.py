"""Measurable subsets with exact closed-form measure.

Regions are restricted to shapes whose measure is exact: unions of
axis-aligned boxes of arcs on tori, polar caps and latitude bands on the
sphere, explicit point subsets of finite groups, and products of the above.
Keeping the measure exact matters because every uncertainty inequality
multiplies by it; quadrature error is confined to the integrals over the
region, where it is reported separately.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DescriptorError
from .spaces import TWO_PI, FiniteGroup, ModelSpace, ProductSpace, Sphere2, Torus


class Region:
    """Base class: a subset of a model space with exact measure."""

    space: ModelSpace
    descriptor: str

    @property
    def measure(self) -> float:
        raise NotImplementedError

    def contains_mask(self, points) -> np.ndarray:
        """Boolean membership for an (n, coord_dim) array; boundary points
        count as inside."""
        raise NotImplementedError

    def contains(self, point) -> bool:
        pts = self.space._check_points(np.asarray(point, float))
        return bool(self.contains_mask(pts)[0])

    def quadrature_measure(self, quad) -> float:
        """Sum of quadrature weights at nodes inside the region; a diagnostic
        against the exact measure."""
        return float(quad.weights[self.contains_mask(quad.nodes)].sum())

    def nodes_inside(self, quad) -> int:
        return int(self.contains_mask(quad.nodes).sum())

    def complement(self) -> "Region":
        raise NotImplementedError(f"complement not defined for {type(self).__name__}")

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor!r} on {self.space.kind})"


def _disjoint_cells(boxes, lo, hi, dim):
    """Partition [lo, hi]^dim along all box edges; yield the cells covered by
    at least one box.  Makes union measures additive regardless of overlap."""
    edges = []
    for axis in range(dim):
        vals = {lo, hi}
        for box in boxes:
            vals.add(box[axis][0])
            vals.add(box[axis][1])
        edges.append(sorted(vals))
    covered = []
    for cell in itertools.product(*[zip(e[:-1], e[1:]) for e in edges]):
        center = [0.5 * (a + b) for a, b in cell]
        if any(all(box[i][0] <= center[i] <= box[i][1] for i in range(dim)) for box in boxes):
            covered.append(tuple(cell))
    return covered


class BoxUnion(Region):
    """Finite union of axis-aligned boxes of arcs on a torus.

    Each box is a tuple of per-axis intervals (a, b) with 0 <= a <= b <= 2 pi.
    Overlaps are disjointified internally, so the measure is additive.
    """

    def __init__(self, space: Torus, boxes, descriptor=None):
        if not isinstance(space, Torus):
            raise ValueError("BoxUnion regions live on tori")
        self.space = space
        norm = []
        for box in boxes:
            box = tuple((float(a), float(b)) for a, b in box)
            if len(box) != space.dim:
                raise ValueError(f"box needs {space.dim} intervals, got {len(box)}")
            for a, b in box:
                if not (0.0 <= a <= b <= TWO_PI + 1e-12):
                    raise ValueError(f"interval ({a}, {b}) must satisfy 0 <= a <= b <= 2*pi")
            norm.append(box)
        self.boxes = norm
        self._cells = _disjoint_cells(norm, 0.0, TWO_PI, space.dim)
        self.descriptor = descriptor or "+".join(
            "box:" + "x".join(f"({a:.12g},{b:.12g})" for a, b in box) for box in norm
        )

    @property
    def measure(self):
        return float(sum(math.prod(b - a for a, b in cell) for cell in self._cells))

    def contains_mask(self, points):
        pts = self.space._check_points(points) % TWO_PI
        mask = np.zeros(pts.shape[0], dtype=bool)
        for box in self.boxes:
            inside = np.ones(pts.shape[0], dtype=bool)
            for axis, (a, b) in enumerate(box):
                x = pts[:, axis]
                inside &= ((a <= x) & (x <= b)) | ((a <= x + TWO_PI) & (x + TWO_PI <= b))
            mask |= inside
        return mask

    def complement(self):
        covered = set(self._cells)
        edges = []
        for axis in range(self.space.dim):
            vals = {0.0, TWO_PI}
            for box in self.boxes:
                vals.add(box[axis][0])
                vals.add(box[axis][1])
            edges.append(sorted(vals))
        gaps = [
            cell
            for cell in itertools.product(*[zip(e[:-1], e[1:]) for e in edges])
            if tuple(cell) not in covered
        ]
        return BoxUnion(self.space, gaps)


def arc(space: Torus, a: float, b: float) -> BoxUnion:
    """Arc [a, b] on the one-dimensional torus."""
    r = BoxUnion(space, [((a, b),)])
    r.descriptor = f"arc:{a:.12g}:{b:.12g}"
    return r


class BandUnion(Region):
    """Union of latitude bands {theta_a <= colatitude <= theta_b} on the sphere.

    A polar cap of angular radius theta0 is the band [0, theta0]; its measure
    is 2 pi (1 - cos theta0).
    """

    def __init__(self, space: Sphere2, intervals, descriptor=None):
        if not isinstance(space, Sphere2):
            raise ValueError("BandUnion regions live on the sphere")
        self.space = space
        ivals = sorted((float(a), float(b)) for a, b in intervals)
        for a, b in ivals:
            if not (0.0 <= a <= b <= math.pi + 1e-12):
                raise ValueError(f"band ({a}, {b}) must satisfy 0 <= a <= b <= pi")
        merged = []
        for a, b in ivals:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        self.intervals = merged
        self.descriptor = descriptor or "+".join(f"band:{a:.12g}:{b:.12g}" for a, b in merged)

    @property
    def measure(self):
        return float(sum(TWO_PI * (math.cos(a) - math.cos(b)) for a, b in self.intervals))

    def contains_mask(self, points):
        pts = self.space._check_points(points)
        theta = pts[:, 0]
        mask = np.zeros(pts.shape[0], dtype=bool)
        for a, b in self.intervals:
            mask |= (a <= theta) & (theta <= b)
        return mask

    def complement(self):
        gaps, prev = [], 0.0
        for a, b in self.intervals:
            if a > prev:
                gaps.append((prev, a))
            prev = b
        if prev < math.pi:
            gaps.append((prev, math.pi))
        return BandUnion(self.space, gaps)


def cap(space: Sphere2, theta0: float) -> BandUnion:
    """Polar cap of angular radius theta0 about the north pole."""
    r = BandUnion(space, [(0.0, theta0)])
    r.descriptor = f"cap:{theta0:.12g}"
    return r


class FiniteSubset(Region):
    """Explicit subset of a finite group; measure is the cardinality."""

    def __init__(self, space: FiniteGroup, elements, descriptor=None):
        if not isinstance(space, FiniteGroup):
            raise ValueError("FiniteSubset regions live on finite groups")
        self.space = space
        pts = set()
        for e in elements:
            if np.isscalar(e):
                e = (e,)
            pt = tuple(int(c) % space.order for c in e)
            if len(pt) != space.dim:
                raise ValueError(f"element {e!r} needs {space.dim} coordinates")
            pts.add(pt)
        self.elements = frozenset(pts)
        self.descriptor = descriptor or "set:{" + ",".join(
            (str(p[0]) if space.dim == 1 else "(" + ",".join(map(str, p)) + ")")
            for p in sorted(pts)
        ) + "}"

    @property
    def measure(self):
        return float(len(self.elements))

    def contains_mask(self, points):
        pts = self.space._check_points(points)
        ints = np.rint(pts).astype(int) % self.space.order
        return np.array([tuple(row) in self.elements for row in ints], dtype=bool)

    def complement(self):
        every = {tuple(int(c) for c in row) for row in self.space.points().astype(int)}
        return FiniteSubset(self.space, every - self.elements)


class ProductRegion(Region):
    """Product of a region on each factor of a product space."""

    def __init__(self, space: ProductSpace, first: Region, second: Region):
        if not isinstance(space, ProductSpace):
            raise ValueError("ProductRegion regions live on product spaces")
        self.space = space
        self.first = first
        self.second = second
        self.descriptor = f"product({first.descriptor},{second.descriptor})"

    @property
    def measure(self):
        return self.first.measure * self.second.measure

    def contains_mask(self, points):
        pts = self.space._check_points(points)
        pa, pb = self.space._split(pts)
        return self.first.contains_mask(pa) & self.second.contains_mask(pb)


def full_region(space: ModelSpace) -> Region:
    if isinstance(space, Torus):
        r = BoxUnion(space, [tuple((0.0, TWO_PI) for _ in range(space.dim))])
    elif isinstance(space, Sphere2):
        r = BandUnion(space, [(0.0, math.pi)])
    elif isinstance(space, FiniteGroup):
        r = FiniteSubset(space, [tuple(int(c) for c in row) for row in space.points().astype(int)])
    elif isinstance(space, ProductSpace):
        r = ProductRegion(space, full_region(space.first), full_region(space.second))
    else:
        raise ValueError(f"no full region for {space!r}")
    r.descriptor = "full"
    return r


def empty_region(space: ModelSpace) -> Region:
    if isinstance(space, Torus):
        r = BoxUnion(space, [])
    elif isinstance(space, Sphere2):
        r = BandUnion(space, [])
    elif isinstance(space, FiniteGroup):
        r = FiniteSubset(space, [])
    elif isinstance(space, ProductSpace):
        r = ProductRegion(space, empty_region(space.first), empty_region(space.second))
    else:
        raise ValueError(f"no empty region for {space!r}")
    r.descriptor = "empty"
    return r


def _parse_one(space, token):
    t = token.strip()
    if t == "full":
        return full_region(space)
    if t == "empty":
        return empty_region(space)
    try:
        if t.startswith("arc:"):
            _, a, b = t.split(":")
            return arc(space, float(a), float(b))
        if t.startswith("box:"):
            parts = t[len("box:"):].split("x")
            box = []
            for p in parts:
                p = p.strip()
                if not (p.startswith("(") and p.endswith(")")):
                    raise ValueError(f"interval {p!r} must look like (a,b)")
                a, b = p[1:-1].split(",")
                box.append((float(a), float(b)))
            return BoxUnion(space, [tuple(box)])
        if t.startswith("cap:"):
            return cap(space, float(t[len("cap:"):]))
        if t.startswith("band:"):
            _, a, b = t.split(":")
            return BandUnion(space, [(float(a), float(b))], descriptor=t)
        if t.startswith("set:"):
            body = t[len("set:"):].strip()
            if not (body.startswith("{") and body.endswith("}")):
                raise ValueError("set descriptor must look like set:{...}")
            body = body[1:-1].strip()
            elements = []
            if body:
                if body.startswith("("):
                    for grp in body.replace("),", ");").split(";"):
                        grp = grp.strip().lstrip("(").rstrip(")")
                        elements.append(tuple(int(c) for c in grp.split(",") if c.strip()))
                else:
                    elements = [int(c) for c in body.split(",")]
            return FiniteSubset(space, elements, descriptor=t)
        if t.startswith("product(") and t.endswith(")"):
            inner = t[len("product("):-1]
            depth = 0
            for i, ch in enumerate(inner):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                elif ch == "," and depth == 0:
                    return ProductRegion(
                        space,
                        parse_region(space.first, inner[:i]),
                        parse_region(space.second, inner[i + 1:]),
                    )
            raise ValueError("product region needs two comma-separated parts")
    except DescriptorError:
        raise
    except (ValueError, TypeError) as exc:
        raise DescriptorError(token, f"bad region descriptor ({exc})") from exc
    raise DescriptorError(token, "unrecognized region descriptor")


def parse_region(space: ModelSpace, text: str) -> Region:
    """Build a region from a descriptor.

    Examples: ``arc:0:3.14159``, ``box:(0,1)x(0,2)``, ``cap:0.7853``,
    ``band:0.5:1.2``, ``set:{0,4,8}``, ``full``; constituents of the same
    shape family may be joined with ``+``.
    """
    tokens = [t for t in text.split("+") if t.strip()]
    if not tokens:
        raise DescriptorError(text, "empty region descriptor")
    parts = [_parse_one(space, t) for t in tokens]
    if len(parts) == 1:
        return parts[0]
    if all(isinstance(p, BoxUnion) for p in parts):
        return BoxUnion(space, [b for p in parts for b in p.boxes], descriptor=text)
    if all(isinstance(p, BandUnion) for p in parts):
        return BandUnion(space, [iv for p in parts for iv in p.intervals], descriptor=text)
    if all(isinstance(p, FiniteSubset) for p in parts):
        return FiniteSubset(space, set().union(*[p.elements for p in parts]), descriptor=text)
    raise DescriptorError(text, "cannot union region descriptors of different shapes")
