"""The operator core: spatial cut-off, band-limiting, the concentration
(Gram) matrix over a region, its eigenproblem, and concentration levels.

The Gram matrix G_{jk} = int_E e_j conj(e_k) represents the composition
"band-limit, then cut off" on the span of X_S; its top eigenvalue is the
largest fraction of L2 mass a function band-limited to X_S can place inside
E, which is the classical concentration problem of Slepian type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoarseQuadratureError
from .regions import Region
from .reports import InequalityReport
from .spaces import Quadrature
from .spectral import SpectralSet

EIG_EXCURSION = 1e-8


@dataclass
class BandlimitedFunction:
    """f = sum over X_S of a_j e_j, stored as coefficients aligned with the
    elements of its spectral set."""

    spectral_set: SpectralSet
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=complex)
        if self.coefficients.shape != (self.spectral_set.size,):
            raise ValueError(
                f"need {self.spectral_set.size} coefficients, got {self.coefficients.shape}"
            )

    @property
    def norm(self) -> float:
        """L2 norm by Plancherel on the orthonormal system."""
        return float(np.linalg.norm(self.coefficients))

    def values(self, points) -> np.ndarray:
        space = self.spectral_set.space
        v = space.basis_matrix(self.spectral_set.elements, points)
        return v @ self.coefficients

    def samples(self, quad: Quadrature) -> np.ndarray:
        return self.values(quad.nodes)

    def full_coefficients(self, size: int) -> np.ndarray:
        """Embed into a coefficient vector over the first ``size`` elements of
        the global enumeration."""
        out = np.zeros(size, dtype=complex)
        for idx, a in zip(self.spectral_set.indices, self.coefficients):
            if idx >= size:
                raise ValueError(f"index {idx} does not fit in a vector of size {size}")
            out[idx] = a
        return out


@dataclass(frozen=True)
class ConcentrationLevels:
    """Spatial and spectral tail fractions and the equivalent levels:
    epsilon is the L^p mass fraction outside E, epsilon_prime the l2
    coefficient fraction outside X_S, and L = (1 - epsilon^p)^{-1/p},
    L_prime = (1 - epsilon_prime^2)^{-1/2}."""

    epsilon: float
    epsilon_prime: float
    p: int

    @property
    def L(self) -> float:
        base = 1.0 - self.epsilon**self.p
        return math.inf if base <= 0 else base ** (-1.0 / self.p)

    @property
    def L_prime(self) -> float:
        base = 1.0 - self.epsilon_prime**2
        return math.inf if base <= 0 else base**-0.5

    @property
    def informative(self) -> bool:
        """The (1 - epsilon - epsilon') bounds say something only here."""
        return self.epsilon + self.epsilon_prime < 1.0


def sample_values(f, quad: Quadrature, space=None) -> np.ndarray:
    """Node samples of ``f``: a BandlimitedFunction, an array already aligned
    with the nodes, or a callable on point arrays."""
    if isinstance(f, BandlimitedFunction):
        return f.samples(quad)
    if callable(f):
        return np.asarray(f(quad.nodes), dtype=complex)
    a = np.asarray(f, dtype=complex)
    if a.shape != (quad.nodes.shape[0],):
        raise ValueError(f"sample vector shape {a.shape} does not match {quad.nodes.shape[0]} nodes")
    return a


def band_project(f_hat, sset: SpectralSet) -> BandlimitedFunction:
    """Keep the coordinates of a full coefficient vector (indexed by the
    global enumeration) that lie in X_S, zeroing the rest.  Idempotent."""
    f_hat = np.asarray(f_hat, dtype=complex)
    if sset.indices and max(sset.indices) >= f_hat.shape[0]:
        raise ValueError(
            f"coefficient vector of length {f_hat.shape[0]} does not cover X_S "
            f"(max index {max(sset.indices)})"
        )
    return BandlimitedFunction(sset, f_hat[sset.indices] if sset.indices else np.zeros(0))


def restrict_band(f: BandlimitedFunction, sset: SpectralSet) -> BandlimitedFunction:
    """Band-limiting projection of an expanded function onto another spectral
    set over the same space (coefficients matched by global index)."""
    have = dict(zip(f.spectral_set.indices, f.coefficients))
    return BandlimitedFunction(sset, np.array([have.get(j, 0.0) for j in sset.indices],
                                              dtype=complex))


def cutoff(f, region: Region, quad: Quadrature) -> np.ndarray:
    """Samples of 1_E f at the quadrature nodes.  Idempotent."""
    vals = sample_values(f, quad)
    return vals * region.contains_mask(quad.nodes)


@dataclass
class GramMatrix:
    """Hermitian matrix G_{jk} = int_E e_j conj(e_k) over the elements of a
    spectral set, assembled by masked quadrature."""

    spectral_set: SpectralSet
    region: Region
    entries: np.ndarray
    nodes_inside: int

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def raw_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues clamped to [0, 1]; excursions beyond 1e-8 raise."""
        vals = self.raw_eigenvalues()
        if vals.size and (vals.min() < -EIG_EXCURSION or vals.max() > 1.0 + EIG_EXCURSION):
            raise CoarseQuadratureError(
                f"Gram eigenvalues escape [0, 1] by more than {EIG_EXCURSION} "
                f"(range [{vals.min()}, {vals.max()}]); refine the quadrature"
            )
        return np.clip(vals, 0.0, 1.0)

    def top_eigenpair(self):
        vals, vecs = np.linalg.eigh(self.entries)
        lam = float(np.clip(vals[-1], 0.0, 1.0))
        vec = vecs[:, -1]
        return lam, vec / np.linalg.norm(vec)

    def to_json_dict(self) -> dict:
        """Row-major entries as [re, im] pairs, for external cross-checking."""
        return {
            "spectrum": self.spectral_set.descriptor,
            "region": self.region.descriptor,
            "size": int(self.entries.shape[0]),
            "nodes_inside": self.nodes_inside,
            "trace": self.trace,
            "entries": [[float(z.real), float(z.imag)] for z in self.entries.ravel()],
        }


def gram_matrix(sset: SpectralSet, region: Region, quad: Quadrature,
                check_exactness: bool = True, exactness_tol: float = 1e-8) -> GramMatrix:
    """Assemble the concentration matrix over E by masked quadrature.

    With ``check_exactness`` the full-space Gram of the same elements is
    verified to be the identity first, which catches a quadrature too coarse
    for the requested band.
    """
    space = sset.space
    v = space.basis_matrix(sset.elements, quad.nodes)
    if check_exactness and sset.size:
        full = (v.conj().T * quad.weights) @ v
        err = float(np.max(np.abs(full - np.eye(sset.size))))
        if err > exactness_tol:
            raise CoarseQuadratureError(
                f"quadrature is not exact on the requested band "
                f"(orthonormality defect {err:.3g} > {exactness_tol:g})"
            )
    mask = region.contains_mask(quad.nodes)
    wm = quad.weights * mask
    g = (v.conj().T * wm) @ v
    g = 0.5 * (g + g.conj().T)
    return GramMatrix(sset, region, g, int(mask.sum()))


def max_concentration(gram: GramMatrix):
    """Top eigenpair of the concentration matrix: the largest achievable
    fraction of L2 mass inside E for a function band-limited to X_S, and the
    coefficient vector achieving it."""
    return gram.top_eigenpair()


def concentration_levels(f, region: Region, sset: SpectralSet, quad: Quadrature,
                         p: int = 2) -> ConcentrationLevels:
    """Tail fractions of ``f``: spatial epsilon = |f - 1_E f|_p / |f|_p by
    quadrature, spectral epsilon' = l2 coefficient fraction outside X_S.

    The spectral tail needs a coefficient representation: a
    BandlimitedFunction, or node samples on a finite group (complete basis).
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    vals = sample_values(f, quad)
    total = quad.norm(vals, p)
    if total < 1e-300:
        raise ValueError("concentration levels are undefined for the zero function")
    outside = quad.norm(vals * ~region.contains_mask(quad.nodes), p)
    eps = min(outside / total, 1.0)

    if isinstance(f, BandlimitedFunction):
        coeffs = f.coefficients
        inside_idx = set(sset.indices)
        have_idx = f.spectral_set.indices
    else:
        space = sset.space
        from .spaces import FiniteGroup

        if not isinstance(space, FiniteGroup):
            raise ValueError(
                "spectral tail needs a BandlimitedFunction on continuum spaces"
            )
        els = space.first_elements(int(space.total_measure))
        v = space.basis_matrix(els, quad.nodes)
        coeffs = (v.conj().T * quad.weights) @ vals
        inside_idx = set(sset.indices)
        have_idx = [el.index for el in els]
    norm2 = float(np.linalg.norm(coeffs))
    tail2 = float(np.linalg.norm([a for j, a in zip(have_idx, coeffs) if j not in inside_idx]))
    eps_prime = min(tail2 / norm2, 1.0) if norm2 > 0 else 0.0
    return ConcentrationLevels(epsilon=eps, epsilon_prime=eps_prime, p=p)


def masked_band_energy(sset: SpectralSet, region: Region, quad: Quadrature) -> float:
    """int_E sum over X_S of |e_j|^2 by masked quadrature (the Gram trace,
    without assembling the matrix)."""
    if not sset.size:
        return 0.0
    v = sset.space.basis_matrix(sset.elements, quad.nodes)
    mask = region.contains_mask(quad.nodes)
    return float(np.sum(quad.weights * mask * np.sum(np.abs(v) ** 2, axis=1)))


def check_projection_bounds(f, region: Region, sset: SpectralSet, quad: Quadrature,
                            seed=None):
    """Sandwich the norm of the cut-off band-limited projection:

    lower:  (1 - eps - eps') |f|  <=  |P_E B_S f|
    upper:  |P_E B_S f|  <=  sqrt(int_E sum_S |e_j|^2) |f|

    Returns the two reports; the lower bound is evaluated even when
    eps + eps' >= 1, where it is vacuously true.
    """
    levels = concentration_levels(f, region, sset, quad, p=2)
    if isinstance(f, BandlimitedFunction):
        bf = restrict_band(f, sset)
        bf_samples = bf.samples(quad)
    else:
        vals = sample_values(f, quad)
        v = sset.space.basis_matrix(sset.elements, quad.nodes)
        coeffs = (v.conj().T * quad.weights) @ vals
        bf_samples = v @ coeffs
    pbf = float(quad.norm(bf_samples * region.contains_mask(quad.nodes), 2))
    fnorm = float(quad.norm(sample_values(f, quad), 2))
    energy = masked_band_energy(sset, region, quad)

    inputs = {
        "space": sset.space.kind,
        "region": region.descriptor,
        "spectrum": sset.descriptor,
        "epsilon": levels.epsilon,
        "epsilon_prime": levels.epsilon_prime,
        "f_norm": fnorm,
        "projected_norm": pbf,
        "nodes_inside": region.nodes_inside(quad),
    }
    lower = InequalityReport(
        name="projection-lower",
        lhs=(1.0 - levels.epsilon - levels.epsilon_prime) * fnorm,
        rhs=pbf,
        inputs=dict(inputs),
        caveats=[] if levels.informative else ["vacuous: epsilon + epsilon_prime >= 1"],
        seed=seed,
    )
    upper = InequalityReport(
        name="projection-upper",
        lhs=pbf,
        rhs=math.sqrt(max(energy, 0.0)) * fnorm,
        inputs=dict(inputs),
        seed=seed,
    )
    return lower, upper
