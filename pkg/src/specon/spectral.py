"""Spectrum-side machinery: spectral sets, Weyl counting, homogeneity checks,
unit-interval coverings, and empirical sup-norm constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DescriptorError
from .spaces import ModelSpace, Sphere2

DEFAULT_MATCH_TOL = 1e-9
DEFAULT_SEED = 12345


class SpectralSet:
    """A finite set S of eigenvalues (scalar frequencies or joint tuples)
    together with the induced index set X_S = {j : lambda_j in S}.

    Matching uses a tolerance (default 1e-9) so that a degeneracy class
    computed in floating point is always captured whole; the index set counts
    multiplicity.
    """

    def __init__(self, space: ModelSpace, values, joint: bool = False,
                 tol: float = DEFAULT_MATCH_TOL, descriptor: str | None = None):
        self.space = space
        self.is_joint = bool(joint)
        self.tol = float(tol)
        if joint:
            vals = sorted({tuple(float(c) for c in v) for v in values})
            for v in vals:
                if len(v) != space.joint_dim:
                    raise ValueError(
                        f"joint value {v} has {len(v)} components, "
                        f"{space.kind} has joint dimension {space.joint_dim}"
                    )
        else:
            vals = sorted({float(v) for v in values})
            if vals and vals[0] < 0:
                raise ValueError("frequencies are nonnegative")
        self.values = tuple(vals)
        if descriptor is None:
            if joint:
                descriptor = "joint:[" + ",".join(
                    "(" + ",".join(f"{c:.12g}" for c in v) + ")" for v in vals) + "]"
            else:
                descriptor = "list:[" + ",".join(f"{v:.12g}" for v in vals) + "]"
        self.descriptor = descriptor
        self.elements = self._match()
        self.indices = [el.index for el in self.elements]

    def _match(self):
        if not self.values:
            return []
        if self.is_joint:
            cutoff = max(self.space.frequency_from_joint(v) for v in self.values) + self.tol
            targets = np.array(self.values)
            els = self.space.enumerate_basis(cutoff)
            out = []
            for el in els:
                j = np.asarray(el.joint)
                if np.any(np.max(np.abs(targets - j), axis=1) <= self.tol):
                    out.append(el)
            return out
        cutoff = max(self.values) + self.tol
        targets = np.array(self.values)
        return [
            el for el in self.space.enumerate_basis(cutoff)
            if np.min(np.abs(targets - el.frequency)) <= self.tol
        ]

    @property
    def size(self) -> int:
        """#X_S, counting multiplicity."""
        return len(self.elements)

    @property
    def max_frequency(self) -> float:
        if not self.values:
            return 0.0
        if self.is_joint:
            return max(self.space.frequency_from_joint(v) for v in self.values)
        return max(self.values)

    def scalar_values(self):
        if self.is_joint:
            raise ValueError("spectral set is joint-valued")
        return self.values

    def __repr__(self):
        return f"SpectralSet({self.descriptor!r}, #X_S={self.size})"


def spectrum_ball(space: ModelSpace, lam: float, tol=DEFAULT_MATCH_TOL) -> SpectralSet:
    """All distinct frequencies <= lam."""
    freqs = sorted({el.frequency for el in space.enumerate_basis(lam)})
    return SpectralSet(space, freqs, tol=tol, descriptor=f"ball:{lam:.12g}")


def spectrum_level(space: Sphere2, degree: int, tol=DEFAULT_MATCH_TOL) -> SpectralSet:
    """The single sphere level l = degree (all 2l+1 orders)."""
    if not isinstance(space, Sphere2):
        raise ValueError("level spectra are defined on the sphere")
    return SpectralSet(space, [math.sqrt(degree * (degree + 1))], tol=tol,
                       descriptor=f"level:l={degree}")


def parse_spectrum(space: ModelSpace, text: str, tol=DEFAULT_MATCH_TOL) -> SpectralSet:
    """Build a spectral set from a descriptor.

    Examples: ``level:l=3`` (sphere degree, ``ℓ`` accepted), ``ball:5``
    (frequencies <= 5, ``ball:λ≤5`` accepted), ``list:[1.0,2.236]``,
    ``joint:[(1,2),(0,0)]``.
    """
    t = text.strip().replace("ℓ", "l").replace("λ≤", "").replace("lambda<=", "")
    try:
        if t.startswith("level:"):
            body = t[len("level:"):]
            if body.startswith("l="):
                body = body[2:]
            return spectrum_level(space, int(body), tol=tol)
        if t.startswith("ball:"):
            return spectrum_ball(space, float(t[len("ball:"):]), tol=tol)
        if t.startswith("list:"):
            body = t[len("list:"):].strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ValueError("list descriptor must look like list:[...]")
            vals = [float(v) for v in body[1:-1].split(",") if v.strip()]
            return SpectralSet(space, vals, tol=tol, descriptor=text.strip())
        if t.startswith("joint:"):
            body = t[len("joint:"):].strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ValueError("joint descriptor must look like joint:[(..),..]")
            body = body[1:-1].strip()
            vals = []
            if body:
                for grp in body.replace("),", ");").split(";"):
                    grp = grp.strip().lstrip("(").rstrip(")")
                    vals.append(tuple(float(c) for c in grp.split(",") if c.strip()))
            return SpectralSet(space, vals, joint=True, tol=tol, descriptor=text.strip())
    except DescriptorError:
        raise
    except (ValueError, TypeError) as exc:
        raise DescriptorError(text, f"bad spectrum descriptor ({exc})") from exc
    raise DescriptorError(text, "unrecognized spectrum descriptor")


# -- counting ------------------------------------------------------------------


def weyl_count(space: ModelSpace, lam: float) -> int:
    """N(lambda): eigenvalues with frequency <= lambda, with multiplicity."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return space.count_upto(lam)


def local_weyl(space: ModelSpace, x, lam: float) -> float:
    """N_x(lambda) = sum over frequencies <= lambda of |e_j(x)|^2."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    els = space.enumerate_basis(lam)
    if not els:
        return 0.0
    v = space.basis_matrix(els, np.atleast_2d(np.asarray(x, float)))
    return float(np.sum(np.abs(v[0]) ** 2))


def check_homogeneity(space: ModelSpace, value, sample_points, tol: float = 1e-9,
                      joint: bool = False, match_tol: float = DEFAULT_MATCH_TOL):
    """Test whether the degeneracy class of ``value`` has a constant summed
    square modulus, equal to multiplicity / |M|, at the sample points.

    Returns (holds, max_deviation).  Sampling cannot certify the identity
    everywhere; it can only refute it, which is what the tolerance check does.
    """
    sset = SpectralSet(space, [value], joint=joint, tol=match_tol)
    if not sset.elements:
        raise ValueError(f"{value!r} is not in the spectrum of {space.kind} "
                         f"(within {match_tol})")
    pts = space._check_points(np.asarray(sample_points, float))
    v = space.basis_matrix(sset.elements, pts)
    sums = np.sum(np.abs(v) ** 2, axis=1)
    target = sset.size / space.total_measure
    dev = float(np.max(np.abs(sums - target)))
    return dev <= tol, dev


@dataclass(frozen=True)
class Covering:
    """Left ends of unit intervals [mu_k, mu_k + 1] covering a scalar set."""

    starts: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.starts)

    def covers(self, x: float) -> bool:
        return any(mu <= x <= mu + 1.0 for mu in self.starts)


def cover_by_unit_intervals(sset: SpectralSet) -> Covering:
    """Greedy left-to-right covering of a scalar spectral set by unit
    intervals; greedy is optimal for points on a line."""
    vals = sorted(sset.scalar_values())
    starts = []
    for v in vals:
        if not starts or v > starts[-1] + 1.0:
            starts.append(v)
    return Covering(tuple(starts))


def sogge_constant_estimate(space: ModelSpace, lam_max: float, x_samples: int = 64,
                            grid_step: float = 0.5, seed: int = DEFAULT_SEED,
                            extra_lambdas=()) -> float:
    """Empirical constant C with sum_{lambda_j in [lambda, lambda+1]}
    |e_j(x)|^2 <= C lambda^{d-1} over a lambda grid in [1, lam_max] and
    sampled x (canonical extreme points are always included).

    This is a maximum over a finite grid, not a bound on the true supremum.
    """
    if lam_max < 1:
        raise ValueError("lam_max must be >= 1")
    grid = sorted(set(np.arange(1.0, lam_max + grid_step, grid_step).tolist())
                  | {float(v) for v in extra_lambdas if 1.0 <= v <= lam_max})
    els = space.enumerate_basis(lam_max + 1.0)
    freqs = np.array([el.frequency for el in els])
    rng = np.random.default_rng(seed)
    pts = np.concatenate([space.extreme_points(), space.sample_points(x_samples, rng)])
    mags = np.abs(space.basis_matrix(els, pts)) ** 2
    best = 0.0
    for lam in grid:
        cols = (freqs >= lam) & (freqs <= lam + 1.0)
        if not cols.any():
            continue
        peak = float(np.max(np.sum(mags[:, cols], axis=1)))
        best = max(best, peak / lam ** (space.dim - 1))
    return best
