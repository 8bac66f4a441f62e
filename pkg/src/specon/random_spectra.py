"""Randomized spectral-subset experiments: generic index subsets, Monte-Carlo
lower estimates of q-orthogonality constants, and random-half splits with
observed L2/L1 norm equivalences.

Randomness is reproducible by construction: every routine takes an integer
seed, and independent trials use the stream-splitting rule

    rng(seed, t) = numpy PCG64 seeded with SeedSequence(seed, spawn_key=(t,))

so serial and parallel executions of the same trial list agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoarseQuadratureError
from .spaces import FiniteGroup, ModelSpace, Quadrature

DEFAULT_SEED = 12345


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """The documented per-trial generator: PCG64 over SeedSequence(seed,
    spawn_key=(trial,))."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


@dataclass(frozen=True)
class RandomSubsetSpec:
    """Parameters of a generic random subset of {0, ..., n-1}: each index is
    kept independently with probability delta = n^{2/q - 1}, so the expected
    size is n^{2/q}."""

    n: int
    q: float
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.q <= 2:
            raise ValueError("generic subsets need q > 2")

    @property
    def delta(self) -> float:
        return float(self.n) ** (2.0 / self.q - 1.0)

    @property
    def expected_size(self) -> float:
        return self.n * self.delta


def generic_subset(spec: RandomSubsetSpec) -> list[int]:
    """Indices kept by independent coin flips of bias delta; deterministic
    given the spec's seed."""
    rng = trial_rng(spec.seed, 0)
    keep = rng.random(spec.n) < spec.delta
    return [int(i) for i in np.flatnonzero(keep)]


def lq_norm(samples, quad: Quadrature, q: float) -> float:
    """Weighted L^q norm of node samples; q = inf returns the node maximum."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return quad.norm(samples, q)


@dataclass
class LambdaQEstimate:
    """Certified lower estimate of a subset's q-orthogonality constant
    C(q) = sup |sum a_i psi_i|_q / |a|_2 under the normalized measure,
    together with the interpolation upper bound (#S)^{1/2 - 1/q}.

    The upper bound applies when the system is uniformly bounded by one,
    which ``measured_sup`` records (characters are; sphere harmonics beyond
    the constant are not).
    """

    subset: list[int]
    q: float
    c_lower: float
    c_interp: float
    trials: int
    ascent_iterations: int
    seed: int
    measured_sup: float
    best_coefficients: np.ndarray = field(repr=False, default=None)

    def to_json_dict(self) -> dict:
        return {
            "subset": list(map(int, self.subset)),
            "q": self.q,
            "c_lower": self.c_lower,
            "c_interp": self.c_interp,
            "trials": self.trials,
            "ascent_iterations": self.ascent_iterations,
            "seed": self.seed,
            "measured_sup": self.measured_sup,
        }


def _qnorm_resolution_check(space, elements, quad, q):
    if isinstance(space, FiniteGroup) or math.isinf(q):
        return
    fmax = max((el.frequency for el in elements), default=0.0)
    needed = int(math.ceil(q * fmax))
    if quad.exactness_degree < needed:
        raise CoarseQuadratureError(
            f"quadrature degree {quad.exactness_degree} is below the q-norm "
            f"resolution heuristic {needed} (q={q}, max frequency {fmax:.3g})"
        )


def estimate_cq(space: ModelSpace, subset, q: float, quad: Quadrature,
                trials: int = 20, ascent_iterations: int = 200,
                seed: int = DEFAULT_SEED, extra_starts=(),
                ratio_tol: float = 1e-8) -> LambdaQEstimate:
    """Monte-Carlo lower estimate of the q-orthogonality constant of a basis
    slice, refined by projected fixed-point ascent on the norm ratio.

    The measure is normalized to total mass one and the basis elements are
    rescaled by sqrt(|M|), so characters have modulus exactly one.  Trials
    start from every coordinate vector, ``trials`` random unit vectors, and
    any ``extra_starts``; the result never falls below the ratio of any
    start, which makes the estimate monotone under subset extension when the
    smaller problem's best vector is passed back in (zero-padded).

    q = 2 is allowed as a diagnostic: the ratio is identically one there.
    """
    if q < 2:
        raise ValueError("q must be >= 2 (q = 2 is the orthogonality diagnostic)")
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    elements = space.elements_by_index(subset)
    _qnorm_resolution_check(space, elements, quad, q)

    scale = math.sqrt(space.total_measure)
    psi = space.basis_matrix(elements, quad.nodes) * scale
    w = quad.weights / space.total_measure
    measured_sup = float(np.abs(psi).max())

    def ratio(a):
        f = psi @ a
        if math.isinf(q):
            num = float(np.abs(f).max())
        else:
            num = float(np.sum(w * np.abs(f) ** q) ** (1.0 / q))
        return num / float(np.linalg.norm(a))

    def ascend(a):
        a = a / np.linalg.norm(a)
        best, best_a = ratio(a), a
        for _ in range(ascent_iterations):
            f = psi @ a
            mag = np.abs(f)
            if math.isinf(q):
                k = int(np.argmax(mag))
                g = np.conj(psi[k]) * (f[k] / mag[k] if mag[k] > 0 else 1.0)
            else:
                phase = np.where(mag > 0, f / np.where(mag > 0, mag, 1.0), 1.0)
                g = psi.conj().T @ (w * mag ** (q - 1.0) * phase)
            gn = np.linalg.norm(g)
            if gn == 0:
                break
            a = g / gn
            r = ratio(a)
            if r > best:
                best, best_a = r, a
            if abs(r - best) <= ratio_tol * max(best, 1.0) and r <= best:
                break
        return best, best_a

    m = len(subset)
    rng = trial_rng(seed, 0)
    starts = [np.eye(m, dtype=complex)[i] for i in range(m)]
    starts += [s for s in (np.asarray(x, dtype=complex) for x in extra_starts)]
    for _ in range(trials):
        v = rng.normal(size=m) + 1j * rng.normal(size=m)
        starts.append(v)

    c_lower, best_a = 0.0, starts[0]
    for s in starts:
        r, a = ascend(s)
        if r > c_lower:
            c_lower, best_a = r, a
    c_interp = m ** (0.5 - (0.0 if math.isinf(q) else 1.0 / q))
    if measured_sup <= 1.0 + 1e-9 and c_lower > c_interp * (1.0 + 1e-9):
        raise CoarseQuadratureError(
            f"lower estimate {c_lower} exceeds the interpolation bound {c_interp} "
            "on a sup-normalized system; the quadrature under-resolves the q-norm"
        )
    return LambdaQEstimate(subset=subset, q=q, c_lower=c_lower, c_interp=c_interp,
                           trials=trials, ascent_iterations=ascent_iterations,
                           seed=seed, measured_sup=measured_sup,
                           best_coefficients=best_a)


@dataclass
class GmptSplit:
    """A near-half index subset I of the first n basis elements together with
    the worst observed L2/L1 norm ratio over trial coefficient vectors, taken
    over both I and its complement.  ``b_sup`` is the sampled uniform bound
    of the system and ``benchmark`` the shape B log(n) loglog(n)^{5/2} the
    observed constant is compared against."""

    indices: list[int]
    n: int
    c_param: float
    k_observed: float
    b_sup: float
    seed: int
    size_deviation: float
    success_fraction: float

    @property
    def complement(self) -> list[int]:
        chosen = set(self.indices)
        return [i for i in range(self.n) if i not in chosen]

    @property
    def benchmark(self) -> float:
        return self.b_sup * math.log(self.n) * math.log(math.log(self.n)) ** 2.5

    def to_json_dict(self) -> dict:
        return {
            "indices": list(map(int, self.indices)),
            "n": self.n,
            "c_param": self.c_param,
            "k_observed": self.k_observed,
            "b_sup": self.b_sup,
            "benchmark": self.benchmark,
            "seed": self.seed,
            "size_deviation": self.size_deviation,
            "success_fraction": self.success_fraction,
        }


def gmpt_split(space: ModelSpace, quad: Quadrature, n: int, c_param: float = 1.0,
               trials: int = 32, subsets: int = 64,
               seed: int = DEFAULT_SEED) -> GmptSplit:
    """Search random near-half subsets I of the first n basis elements for a
    small worst-case L2/L1 ratio of coefficient combinations, on both I and
    its complement.

    The split is chosen as the best of ``subsets`` seeded random draws
    subject to |#I - n/2| <= c_param sqrt(n); the fraction of draws meeting
    the size constraint is recorded.  Norms use the volume measure, so the
    ratio is always at least |M|^{-1/2} (attained by constant-modulus
    functions when they exist).
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"n must be a positive even integer, got {n}")
    elements = space.first_elements(n)
    v = space.basis_matrix(elements, quad.nodes)
    pts = space.extreme_points()
    b_sup = float(max(np.abs(v).max(), np.abs(space.basis_matrix(elements, pts)).max()))

    limit = c_param * math.sqrt(n)
    best = None
    accepted = 0
    for t in range(subsets):
        rng = trial_rng(seed, t)
        keep = rng.random(n) < 0.5
        idx = np.flatnonzero(keep)
        if abs(len(idx) - n / 2) > limit:
            continue
        accepted += 1
        k_worst = 0.0
        for side in (idx, np.flatnonzero(~keep)):
            if len(side) == 0:
                continue
            a = rng.normal(size=(trials, len(side))) + 1j * rng.normal(size=(trials, len(side)))
            f = v[:, side] @ a.T
            n2 = np.sqrt(np.sum(quad.weights[:, None] * np.abs(f) ** 2, axis=0))
            n1 = np.sum(quad.weights[:, None] * np.abs(f), axis=0)
            k_worst = max(k_worst, float(np.max(n2 / n1)))
        if best is None or k_worst < best[0]:
            best = (k_worst, [int(i) for i in idx])
    if best is None:
        raise RuntimeError(
            f"no subset met |#I - n/2| <= {limit:.3g} in {subsets} draws; "
            "increase c_param or the number of draws"
        )
    k_observed, indices = best
    return GmptSplit(indices=indices, n=n, c_param=c_param, k_observed=k_observed,
                     b_sup=b_sup, seed=seed,
                     size_deviation=abs(len(indices) - n / 2),
                     success_fraction=accepted / subsets)
