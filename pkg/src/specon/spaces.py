"""Model domains with closed-form orthonormal eigenbases.

Four kinds of space are supported:

* flat tori ``R^d / (2 pi Z)^d`` with exponentials ``(2 pi)^{-d/2} e^{i<m,x>}``,
* the round two-sphere with complex spherical harmonics (Condon-Shortley phase),
* finite abelian groups ``Z_N^d`` under counting measure, with characters
  normalized to unit L2 norm,
* cartesian products of any two of the above (tensor-product eigenbasis).

Every space enumerates its basis in nondecreasing frequency order (ties broken
lexicographically on the label), evaluates elements at points, and builds a
quadrature rule that integrates products of any two basis elements below a
requested frequency cutoff exactly.  The frequency convention is the square
root of the (-Laplacian) eigenvalue: ``|m|`` on the torus, ``sqrt(l(l+1))`` on
the sphere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DescriptorError

TWO_PI = 2.0 * math.pi


def _r2max(lam: float) -> int:
    """Largest integer t with sqrt(t) <= lam in floating point, so integer
    squared-norm tests agree exactly with frequency comparisons."""
    if lam < 0:
        return -1
    t = int(math.floor(lam * lam))
    while math.sqrt(t + 1) <= lam:
        t += 1
    while t >= 0 and math.sqrt(t) > lam:
        t -= 1
    return t


@dataclass(frozen=True)
class BasisElement:
    """One eigenfunction: position in the global enumeration, structured label,
    scalar frequency, and the joint eigenvalue tuple."""

    index: int
    label: tuple
    frequency: float
    joint: tuple


@dataclass(frozen=True)
class Quadrature:
    """Nodes and positive weights realizing integration over the space.

    ``exactness_degree`` is the largest combined frequency degree for which
    products of two basis elements are integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def integrate(self, samples) -> complex:
        return complex(np.sum(self.weights * np.asarray(samples)))

    def norm(self, samples, p: float = 2) -> float:
        """Weighted L^p norm of node samples; ``p = inf`` gives the node max."""
        a = np.abs(np.asarray(samples))
        if math.isinf(p):
            return float(a.max()) if a.size else 0.0
        return float(np.sum(self.weights * a**p) ** (1.0 / p))


class ModelSpace:
    """Base class: a compact model domain with an explicit eigenbasis."""

    kind: str
    dim: int
    coord_dim: int
    joint_dim: int
    total_measure: float

    @property
    def unit_ball_volume(self) -> float:
        d = self.dim
        return math.pi ** (d / 2) / math.gamma(d / 2 + 1)

    # -- enumeration ---------------------------------------------------------

    def enumerate_basis(self, cutoff: float) -> list[BasisElement]:
        """All basis elements with frequency <= cutoff, sorted by
        (frequency, label).  The position in this list is the element's global
        index and does not depend on the cutoff."""
        if not math.isfinite(cutoff):
            raise ValueError(f"cutoff must be finite, got {cutoff}")
        if cutoff < 0:
            raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
        rows = sorted(self._labels_upto(cutoff), key=lambda r: (r[1], r[0]))
        return [
            BasisElement(index=j, label=lab, frequency=freq, joint=joint)
            for j, (lab, freq, joint) in enumerate(rows)
        ]

    def first_elements(self, n: int) -> list[BasisElement]:
        """The first ``n`` elements of the global enumeration."""
        cutoff = 1.0
        while True:
            els = self.enumerate_basis(cutoff)
            if len(els) >= n:
                return els[:n]
            top = self.max_frequency()
            if top is not None and cutoff >= top:
                raise ValueError(f"space has only {len(els)} basis elements, {n} requested")
            cutoff = 2 * cutoff if top is None else min(2 * cutoff, top)

    def elements_by_index(self, indices) -> list[BasisElement]:
        els = self.first_elements(max(indices) + 1)
        return [els[i] for i in indices]

    def count_upto(self, lam: float) -> int:
        """Number of eigenvalues (with multiplicity) of frequency <= lam."""
        raise NotImplementedError

    def max_frequency(self):
        """Largest frequency in the spectrum, or None if unbounded."""
        return None

    def _labels_upto(self, cutoff):
        raise NotImplementedError

    def _element(self, label) -> BasisElement:
        """Rebuild an element from its label (index left at -1)."""
        raise NotImplementedError

    # -- evaluation ----------------------------------------------------------

    def values(self, element: BasisElement, points) -> np.ndarray:
        """Eigenfunction values at an (n, coord_dim) array of points."""
        return self.basis_matrix([element], points)[:, 0]

    def evaluate(self, element: BasisElement, point) -> complex:
        return complex(self.values(element, np.atleast_2d(np.asarray(point, float)))[0])

    def basis_matrix(self, elements, points) -> np.ndarray:
        """Matrix V with V[i, j] = e_j(points[i])."""
        raise NotImplementedError

    def _check_points(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[1] != self.coord_dim:
            raise ValueError(
                f"points for {self.kind} must have {self.coord_dim} coordinates, "
                f"got shape {pts.shape}"
            )
        return pts

    # -- quadrature and sampling ---------------------------------------------

    def build_quadrature(self, cutoff: float, oversample: int = 1) -> Quadrature:
        """Quadrature exact for products of two elements of frequency <= cutoff.
        ``oversample`` multiplies the node counts for region-resolution needs."""
        raise NotImplementedError

    def sample_points(self, k: int, rng) -> np.ndarray:
        """k points drawn from the normalized volume measure."""
        raise NotImplementedError

    def extreme_points(self) -> np.ndarray:
        """Canonical points where eigenfunctions peak (poles on the sphere);
        used to seed sup-norm estimates."""
        return np.zeros((1, self.coord_dim))

    def frequency_from_joint(self, joint) -> float:
        """Scalar frequency of a joint eigenvalue tuple."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.kind!r})"


class Torus(ModelSpace):
    """Flat torus R^d / (2 pi Z)^d; eigenfunctions (2 pi)^{-d/2} e^{i<m, x>}
    indexed by m in Z^d with frequency |m|."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("torus dimension must be >= 1")
        self.dim = dim
        self.coord_dim = dim
        self.joint_dim = dim
        self.total_measure = TWO_PI**dim
        self.kind = f"torus:d={dim}"

    def _labels_upto(self, cutoff):
        r2 = _r2max(cutoff)
        r = math.isqrt(max(r2, 0))
        out = []
        for m in itertools.product(range(-r, r + 1), repeat=self.dim):
            n2 = sum(c * c for c in m)
            if n2 <= r2:
                out.append((m, math.sqrt(n2), tuple(float(c) for c in m)))
        return out

    def count_upto(self, lam: float) -> int:
        if lam < 0:
            return 0
        return self._lattice_count(_r2max(lam), self.dim)

    @staticmethod
    def _lattice_count(r2: int, d: int) -> int:
        if r2 < 0:
            return 0
        if d == 1:
            return 2 * math.isqrt(r2) + 1
        r = math.isqrt(r2)
        total = 0
        for m in range(-r, r + 1):
            total += Torus._lattice_count(r2 - m * m, d - 1)
        return total

    def _element(self, label):
        m = tuple(int(c) for c in label)
        if len(m) != self.dim:
            raise ValueError(f"label {label!r} inconsistent with {self.kind}")
        return BasisElement(-1, m, math.sqrt(sum(c * c for c in m)), tuple(float(c) for c in m))

    def basis_matrix(self, elements, points):
        pts = self._check_points(points)
        freqs = np.empty((len(elements), self.dim))
        for j, el in enumerate(elements):
            try:
                freqs[j] = el.label
            except (ValueError, TypeError) as exc:
                raise ValueError(f"label {el.label!r} inconsistent with {self.kind}") from exc
        return np.exp(1j * pts @ freqs.T) * TWO_PI ** (-self.dim / 2)

    def build_quadrature(self, cutoff, oversample=1):
        if not math.isfinite(cutoff):
            raise ValueError("quadrature cutoff must be finite")
        # midpoint grid: exact for e^{ikx} with |k| < n per axis, and region
        # boundaries at cell edges never collide with nodes
        n = 2 * (math.ceil(cutoff) + 1) * max(1, int(oversample))
        axis = (np.arange(n) + 0.5) * (TWO_PI / n)
        grids = np.meshgrid(*([axis] * self.dim), indexing="ij")
        nodes = np.stack([g.ravel() for g in grids], axis=-1)
        weights = np.full(nodes.shape[0], (TWO_PI / n) ** self.dim)
        return Quadrature(nodes, weights, exactness_degree=n - 1)

    def sample_points(self, k, rng):
        return rng.uniform(0.0, TWO_PI, size=(k, self.dim))

    def frequency_from_joint(self, joint):
        return float(np.linalg.norm(np.asarray(joint, float)))


class Sphere2(ModelSpace):
    """Round two-sphere (radius 1) with complex spherical harmonics Y_l^m.

    Points are (colatitude theta, longitude phi).  Normalization makes the
    basis orthonormal under the area measure (total 4 pi); the phase follows
    the Condon-Shortley convention, so Y_l^{-m} = (-1)^m conj(Y_l^m).
    Frequency is sqrt(l(l+1)); the joint eigenvalue is (m, l(l+1)) for the
    commuting pair (rotation generator, -Laplacian).
    """

    def __init__(self):
        self.dim = 2
        self.coord_dim = 2
        self.joint_dim = 2
        self.total_measure = 4.0 * math.pi
        self.kind = "sphere2"

    def _lmax(self, cutoff: float) -> int:
        r2 = _r2max(cutoff)
        if r2 < 0:
            return -1
        l = int((-1 + math.sqrt(1 + 4 * r2)) // 2)
        while (l + 1) * (l + 2) <= r2:
            l += 1
        while l > 0 and l * (l + 1) > r2:
            l -= 1
        return l

    def _labels_upto(self, cutoff):
        out = []
        for l in range(self._lmax(cutoff) + 1):
            freq = math.sqrt(l * (l + 1))
            for m in range(-l, l + 1):
                out.append(((l, m), freq, (float(m), float(l * (l + 1)))))
        return out

    def count_upto(self, lam):
        if lam < 0:
            return 0
        return (self._lmax(lam) + 1) ** 2

    def _element(self, label):
        l, m = label
        if not (isinstance(l, int) and isinstance(m, int) and 0 <= abs(m) <= l):
            raise ValueError(f"label {label!r} inconsistent with {self.kind}")
        return BasisElement(-1, (l, m), math.sqrt(l * (l + 1)), (float(m), float(l * (l + 1))))

    def basis_matrix(self, elements, points):
        pts = self._check_points(points)
        theta, phi = pts[:, 0], pts[:, 1]
        x = np.cos(theta)
        s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
        out = np.empty((pts.shape[0], len(elements)), dtype=complex)

        by_order: dict[int, dict[int, list[tuple[int, int]]]] = {}
        for col, el in enumerate(elements):
            try:
                l, m = el.label
                ok = 0 <= abs(m) <= l
            except (ValueError, TypeError):
                ok = False
            if not ok:
                raise ValueError(f"label {el.label!r} inconsistent with {self.kind}")
            by_order.setdefault(abs(m), {}).setdefault(l, []).append((col, m))

        for mm, want in by_order.items():
            lmax = max(want)
            eim = np.exp(1j * mm * phi)

            def emit(l, leg):
                for col, m in want.get(l, ()):
                    out[:, col] = leg * eim if m >= 0 else ((-1) ** mm) * leg * np.conj(eim)

            # ascending normalized recurrence at fixed order; normalizing at
            # every step keeps values bounded well past l ~ 150
            p = np.full(pts.shape[0], math.sqrt(1.0 / (4.0 * math.pi)))
            for k in range(1, mm + 1):
                p = -math.sqrt((2 * k + 1) / (2.0 * k)) * s * p
            emit(mm, p)
            if lmax > mm:
                prev2, prev = p, math.sqrt(2 * mm + 3) * x * p
                emit(mm + 1, prev)
                for l in range(mm + 2, lmax + 1):
                    a = math.sqrt((4 * l * l - 1) / (l * l - mm * mm))
                    b = math.sqrt(((l - 1) ** 2 - mm * mm) / (4 * (l - 1) ** 2 - 1))
                    prev2, prev = prev, a * (x * prev - b * prev2)
                    emit(l, prev)
        return out

    def build_quadrature(self, cutoff, oversample=1):
        if not math.isfinite(cutoff):
            raise ValueError("quadrature cutoff must be finite")
        lmax = self._lmax(cutoff)
        over = max(1, int(oversample))
        n_theta = (lmax + 1) * over
        n_phi = (2 * lmax + 1) * over
        x, w = np.polynomial.legendre.leggauss(n_theta)
        theta = np.arccos(x)
        phi = (np.arange(n_phi) + 0.5) * (TWO_PI / n_phi)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        ww = np.repeat(w, n_phi) * (TWO_PI / n_phi)
        nodes = np.stack([tt.ravel(), pp.ravel()], axis=-1)
        return Quadrature(nodes, ww, exactness_degree=min(2 * n_theta - 1, n_phi - 1))

    def sample_points(self, k, rng):
        theta = np.arccos(rng.uniform(-1.0, 1.0, size=k))
        phi = rng.uniform(0.0, TWO_PI, size=k)
        return np.stack([theta, phi], axis=-1)

    def extreme_points(self):
        return np.array([[0.0, 0.0], [math.pi, 0.0]])

    def frequency_from_joint(self, joint):
        return math.sqrt(max(0.0, float(joint[1])))


class FiniteGroup(ModelSpace):
    """Finite abelian group Z_N^d under counting measure (total mass N^d).

    Characters chi_k(x) = exp(2 pi i <k, x> / N) are normalized by N^{-d/2} to
    unit L2 norm.  The frequency of a character is the Euclidean norm of its
    centered residue vector (components mapped to (-N/2, N/2]); the joint
    eigenvalue is that centered vector.  The dual measure assigns weight
    1/N^d per character, so Fourier inversion holds exactly (see
    :meth:`fourier` / :meth:`inverse_fourier`).
    """

    def __init__(self, order: int, dim: int = 1):
        if order < 1 or dim < 1:
            raise ValueError("group order and dimension must be >= 1")
        self.order = order
        self.dim = dim
        self.coord_dim = dim
        self.joint_dim = dim
        self.total_measure = float(order**dim)
        self.kind = f"zn:N={order},d={dim}"

    def _centered(self, k: int) -> int:
        return k if k <= self.order // 2 else k - self.order

    def _labels_upto(self, cutoff):
        r2 = _r2max(cutoff)
        out = []
        for k in itertools.product(range(self.order), repeat=self.dim):
            c = [self._centered(ki) for ki in k]
            n2 = sum(ci * ci for ci in c)
            if n2 <= r2:
                out.append((k, math.sqrt(n2), tuple(float(ci) for ci in c)))
        return out

    def count_upto(self, lam):
        if lam < 0:
            return 0
        return len(self._labels_upto(lam))

    def max_frequency(self):
        half = self.order // 2
        return math.sqrt(self.dim * half * half)

    def _element(self, label):
        k = tuple(int(c) % self.order for c in label)
        if len(k) != self.dim:
            raise ValueError(f"label {label!r} inconsistent with {self.kind}")
        c = [self._centered(ki) for ki in k]
        return BasisElement(-1, k, math.sqrt(sum(ci * ci for ci in c)), tuple(float(ci) for ci in c))

    def basis_matrix(self, elements, points):
        pts = self._check_points(points)
        x = np.rint(pts).astype(int) % self.order
        ks = np.empty((len(elements), self.dim))
        for j, el in enumerate(elements):
            try:
                ks[j] = el.label
            except (ValueError, TypeError) as exc:
                raise ValueError(f"label {el.label!r} inconsistent with {self.kind}") from exc
        phase = np.exp(2j * math.pi * (x @ ks.T) / self.order)
        return phase * self.order ** (-self.dim / 2)

    def points(self) -> np.ndarray:
        """All group elements in lexicographic (C) order."""
        grids = np.meshgrid(*([np.arange(self.order)] * self.dim), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1).astype(float)

    def build_quadrature(self, cutoff=None, oversample=1):
        nodes = self.points()
        return Quadrature(nodes, np.ones(nodes.shape[0]), exactness_degree=2 * self.order)

    def sample_points(self, k, rng):
        return rng.integers(0, self.order, size=(k, self.dim)).astype(float)

    def frequency_from_joint(self, joint):
        return float(np.linalg.norm(np.asarray(joint, float)))

    # -- exact Fourier pair ---------------------------------------------------

    def fourier(self, samples) -> np.ndarray:
        """Unnormalized transform f_hat(k) = sum_x f(x) conj(chi_k(x)) with
        samples (and output) in the lexicographic order of :meth:`points`."""
        a = np.asarray(samples, dtype=complex).reshape((self.order,) * self.dim)
        return np.fft.fftn(a).ravel()

    def inverse_fourier(self, coeffs) -> np.ndarray:
        """Inverse with dual weight 1/N^d: f(x) = N^{-d} sum_k f_hat(k) chi_k(x)."""
        a = np.asarray(coeffs, dtype=complex).reshape((self.order,) * self.dim)
        return np.fft.ifftn(a).ravel()


class ProductSpace(ModelSpace):
    """Cartesian product of two model spaces with the tensor-product basis.

    Coordinates concatenate; the joint eigenvalue concatenates; the scalar
    frequency is the hypotenuse of the factor frequencies (the product
    Laplacian eigenvalue adds)."""

    def __init__(self, first: ModelSpace, second: ModelSpace):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim
        self.coord_dim = first.coord_dim + second.coord_dim
        self.joint_dim = first.joint_dim + second.joint_dim
        self.total_measure = first.total_measure * second.total_measure
        self.kind = f"product({first.kind},{second.kind})"

    def _labels_upto(self, cutoff):
        out = []
        for ea in self.first.enumerate_basis(cutoff):
            residual = cutoff * cutoff - ea.frequency * ea.frequency
            if residual < 0:
                continue
            # enumerate a slight superset; the hypot filter below is exact
            inner = math.sqrt(max(0.0, residual)) * (1 + 1e-12) + 1e-12
            for eb in self.second.enumerate_basis(inner):
                freq = math.hypot(ea.frequency, eb.frequency)
                if freq <= cutoff:
                    out.append(((ea.label, eb.label), freq, ea.joint + eb.joint))
        return out

    def count_upto(self, lam):
        if lam < 0:
            return 0
        return len(self._labels_upto(lam))

    def max_frequency(self):
        a, b = self.first.max_frequency(), self.second.max_frequency()
        if a is None or b is None:
            return None
        return math.hypot(a, b)

    def _element(self, label):
        ea = self.first._element(label[0])
        eb = self.second._element(label[1])
        return BasisElement(-1, (ea.label, eb.label), math.hypot(ea.frequency, eb.frequency),
                            ea.joint + eb.joint)

    def _split(self, pts):
        c = self.first.coord_dim
        return pts[:, :c], pts[:, c:]

    def basis_matrix(self, elements, points):
        pts = self._check_points(points)
        pa, pb = self._split(pts)
        labels_a = sorted({el.label[0] for el in elements})
        labels_b = sorted({el.label[1] for el in elements})
        va = self.first.basis_matrix([self.first._element(l) for l in labels_a], pa)
        vb = self.second.basis_matrix([self.second._element(l) for l in labels_b], pb)
        ia = {l: i for i, l in enumerate(labels_a)}
        ib = {l: i for i, l in enumerate(labels_b)}
        out = np.empty((pts.shape[0], len(elements)), dtype=complex)
        for col, el in enumerate(elements):
            out[:, col] = va[:, ia[el.label[0]]] * vb[:, ib[el.label[1]]]
        return out

    def build_quadrature(self, cutoff, oversample=1):
        qa = self.first.build_quadrature(cutoff, oversample)
        qb = self.second.build_quadrature(cutoff, oversample)
        na, nb = qa.nodes.shape[0], qb.nodes.shape[0]
        nodes = np.concatenate(
            [np.repeat(qa.nodes, nb, axis=0), np.tile(qb.nodes, (na, 1))], axis=1
        )
        weights = np.repeat(qa.weights, nb) * np.tile(qb.weights, na)
        return Quadrature(nodes, weights, exactness_degree=min(qa.exactness_degree, qb.exactness_degree))

    def sample_points(self, k, rng):
        return np.concatenate([self.first.sample_points(k, rng), self.second.sample_points(k, rng)], axis=1)

    def extreme_points(self):
        xa, xb = self.first.extreme_points(), self.second.extreme_points()
        na, nb = xa.shape[0], xb.shape[0]
        return np.concatenate([np.repeat(xa, nb, axis=0), np.tile(xb, (na, 1))], axis=1)

    def frequency_from_joint(self, joint):
        wa = self.first.joint_dim
        fa = self.first.frequency_from_joint(joint[:wa])
        fb = self.second.frequency_from_joint(joint[wa:])
        return math.hypot(fa, fb)


def parse_space(text: str) -> ModelSpace:
    """Build a space from a compact descriptor.

    Examples: ``torus:d=2``, ``sphere2``, ``zn:N=256,d=1``,
    ``product(torus:d=1,sphere2)``.
    """
    s = text.strip()
    if s == "sphere2":
        return Sphere2()
    if s.startswith("torus:"):
        try:
            fields = dict(kv.split("=") for kv in s[len("torus:"):].split(","))
            return Torus(int(fields["d"]))
        except (ValueError, KeyError) as exc:
            raise DescriptorError(text, f"bad torus descriptor ({exc})") from exc
    if s.startswith("zn:"):
        try:
            fields = dict(kv.split("=") for kv in s[len("zn:"):].split(","))
            return FiniteGroup(int(fields["N"]), int(fields.get("d", 1)))
        except (ValueError, KeyError) as exc:
            raise DescriptorError(text, f"bad finite-group descriptor ({exc})") from exc
    if s.startswith("product(") and s.endswith(")"):
        inner = s[len("product("):-1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return ProductSpace(parse_space(inner[:i]), parse_space(inner[i + 1:]))
        raise DescriptorError(text, "product descriptor needs two comma-separated factors")
    raise DescriptorError(text, "unrecognized space descriptor")
