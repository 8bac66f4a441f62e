"""Uncertainty inequalities evaluated on concrete inputs, with two-sided slack.

Every check returns one or more :class:`InequalityReport` values.  Checks
backed by exact constants are theorems for the quantities they compare, so a
``holds = False`` on valid input signals a defect in this library, not in the
mathematics.  Checks involving empirical constants (sampled sup-norms, grid
maxima, observed norm ratios) always carry a caveat saying so, and cases
where the bound is uninformative (epsilon + epsilon' >= 1, or a degenerate
hypothesis) are reported as vacuous with the raw numbers.
"""

from __future__ import annotations

import math

import numpy as np

from .concentration import (
    BandlimitedFunction,
    concentration_levels,
    masked_band_energy,
    sample_values,
)
from .regions import Region
from .reports import InequalityReport
from .spaces import FiniteGroup, Quadrature
from .spectral import SpectralSet, check_homogeneity, cover_by_unit_intervals

SUPPORT_TOL = 1e-12


def _base_inputs(region: Region, sset: SpectralSet | None, quad: Quadrature | None,
                 levels=None) -> dict:
    inputs = {"space": region.space.kind, "region": region.descriptor,
              "region_measure": region.measure}
    if sset is not None:
        inputs["spectrum"] = sset.descriptor
        inputs["index_count"] = sset.size
    if quad is not None:
        inputs["nodes_inside"] = region.nodes_inside(quad)
    if levels is not None:
        inputs["epsilon"] = levels.epsilon
        inputs["epsilon_prime"] = levels.epsilon_prime
        inputs["p"] = levels.p
    return inputs


def _vacuity(levels) -> list:
    if not levels.informative:
        return ["vacuous: epsilon + epsilon_prime >= 1"]
    return []


def check_group_uncertainty(space: FiniteGroup, samples, seed=None) -> InequalityReport:
    """Support-size uncertainty on a finite abelian group (Donoho-Stark form):
    with counting measure on the group and dual weight 1/N^d per character,
    mu(supp f) * nu(supp f_hat) >= 1 for every nonzero f."""
    if not isinstance(space, FiniteGroup):
        raise ValueError("the support uncertainty check runs on finite groups")
    f = np.asarray(samples, dtype=complex).ravel()
    if f.shape[0] != int(space.total_measure):
        raise ValueError(f"need {int(space.total_measure)} samples, got {f.shape[0]}")
    peak = float(np.abs(f).max())
    if peak <= 0.0:
        raise ValueError("support uncertainty is undefined for the zero function")
    fhat = space.fourier(f)
    supp_f = int(np.count_nonzero(np.abs(f) > SUPPORT_TOL * peak))
    supp_fhat = int(np.count_nonzero(np.abs(fhat) > SUPPORT_TOL * float(np.abs(fhat).max())))
    n_total = space.total_measure
    return InequalityReport(
        name="lca",
        lhs=1.0,
        rhs=supp_f * supp_fhat / n_total,
        inputs={"space": space.kind, "supp_f": supp_f, "supp_fhat": supp_fhat,
                "group_size": int(n_total)},
        seed=seed,
    )


def check_generic_subset_uncertainty(f: BandlimitedFunction, region: Region,
                                     quad: Quadrature, q: float, c_upper: float,
                                     c_upper_provenance: str = "interpolation",
                                     seed=None) -> InequalityReport:
    """Mass lower bound for functions spanned by a generic character subset:
    if f is L2-concentrated on E at level L, and the subset's q-orthogonality
    constant is at most c_upper, then the normalized measure of E is at least
    (L c_upper)^{-1/(1/2 - 1/q)}.

    The measure is renormalized to total mass 1 so that the system's elements
    have modulus at most one (characters on tori and finite groups do).
    """
    if q <= 2:
        raise ValueError("the generic-subset bound needs q > 2")
    sset = f.spectral_set
    levels = concentration_levels(f, region, sset, quad, p=2)
    exponent = 2.0 if math.isinf(q) else 1.0 / (0.5 - 1.0 / q)
    L = levels.L
    lhs = 0.0 if math.isinf(L) else (L * c_upper) ** (-exponent)
    inputs = _base_inputs(region, sset, quad, levels)
    inputs.update({"q": q, "c_upper": c_upper, "level_L": L,
                   "measure_normalized_to_1": True})
    caveats = []
    if c_upper_provenance != "interpolation":
        caveats.append(f"empirical C(q) upper bound ({c_upper_provenance})")
    return InequalityReport(
        name="bourgain",
        lhs=lhs,
        rhs=region.measure / region.space.total_measure,
        inputs=inputs,
        caveats=caveats,
        seed=seed,
    )


def check_eigenfunction_mass_bound(f: BandlimitedFunction, region: Region,
                                   sset: SpectralSet, quad: Quadrature,
                                   seed=None) -> InequalityReport:
    """General orthonormal-system uncertainty: the reciprocal of the average
    E-mass fraction of the selected eigenfunctions is at most
    (1 - eps - eps')^{-2} |E| #X_S."""
    levels = concentration_levels(f, region, sset, quad, p=2)
    energy = masked_band_energy(sset, region, quad)
    inputs = _base_inputs(region, sset, quad, levels)
    inputs["band_energy_in_region"] = energy
    caveats = _vacuity(levels)

    proj = float(quad.norm(
        sample_values(f, quad) * region.contains_mask(quad.nodes), 2))
    if proj <= 0.0:
        caveats.append("vacuous: the cut-off band-limited projection of f is zero")
    if energy <= 0.0 or sset.size == 0:
        caveats.append("vacuous: no band mass inside the region")
        return InequalityReport(name="prop", lhs=math.inf, rhs=math.inf,
                                inputs=inputs, caveats=caveats, seed=seed)
    lhs = sset.size * region.measure / energy
    gap = 1.0 - levels.epsilon - levels.epsilon_prime
    rhs = math.inf if gap <= 0 else gap**-2 * region.measure * sset.size
    return InequalityReport(name="prop", lhs=lhs, rhs=rhs, inputs=inputs,
                            caveats=caveats, seed=seed)


def check_homogeneous_uncertainty(f: BandlimitedFunction, region: Region,
                                  sset: SpectralSet, quad: Quadrature,
                                  homogeneity_samples: int = 64,
                                  homogeneity_tol: float = 1e-9,
                                  rng=None, seed=None) -> InequalityReport:
    """On spaces whose degeneracy classes have constant summed square modulus:
    (1 - eps - eps')^2 <= |E| / |M| * #X_S.  The homogeneity hypothesis is
    verified by sampling first; failure blocks the evaluation."""
    levels = concentration_levels(f, region, sset, quad, p=2)
    space = sset.space
    rng = rng or np.random.default_rng(seed if seed is not None else 0)
    pts = np.concatenate([space.extreme_points(),
                          space.sample_points(homogeneity_samples, rng)])
    worst = 0.0
    ok = True
    for value in sset.values:
        holds, dev = check_homogeneity(space, value, pts, tol=homogeneity_tol,
                                       joint=sset.is_joint, match_tol=sset.tol)
        worst = max(worst, dev)
        ok = ok and holds
    inputs = _base_inputs(region, sset, quad, levels)
    inputs["homogeneity_max_deviation"] = worst
    caveats = _vacuity(levels)
    if not ok:
        caveats.append(f"vacuous: homogeneity fails (max deviation {worst:.3g}); "
                       "bound not applicable")
    gap = 1.0 - levels.epsilon - levels.epsilon_prime
    return InequalityReport(
        name="homogeneous",
        lhs=max(gap, 0.0) ** 2,
        rhs=region.measure / space.total_measure * sset.size,
        inputs=inputs,
        caveats=caveats,
        seed=seed,
    )


def check_supnorm_uncertainty(f: BandlimitedFunction, region: Region,
                              sset: SpectralSet, quad: Quadrature,
                              x_samples: int = 256, rng=None,
                              seed=None) -> InequalityReport:
    """(1 - eps - eps')^2 <= |E| sup_x sum over X_S of |e_j(x)|^2, with the
    sup estimated from samples.  The estimate is a lower bound of the true
    sup, so a reported failure is meaningful while a pass is only as strong
    as the sampling (the sample count is recorded)."""
    levels = concentration_levels(f, region, sset, quad, p=2)
    space = sset.space
    rng = rng or np.random.default_rng(seed if seed is not None else 0)
    pts = np.concatenate([quad.nodes, space.extreme_points(),
                          space.sample_points(x_samples, rng)])
    if sset.size:
        v = space.basis_matrix(sset.elements, pts)
        sup_est = float(np.max(np.sum(np.abs(v) ** 2, axis=1)))
    else:
        sup_est = 0.0
    gap = 1.0 - levels.epsilon - levels.epsilon_prime
    inputs = _base_inputs(region, sset, quad, levels)
    inputs.update({"sup_estimate": sup_est,
                   "sup_sample_count": int(pts.shape[0])})
    caveats = _vacuity(levels)
    caveats.append(f"empirical sup: sampled maximum over {pts.shape[0]} points "
                   "(a lower estimate of the true sup)")
    return InequalityReport(
        name="supnorm",
        lhs=max(gap, 0.0) ** 2,
        rhs=region.measure * sup_est,
        inputs=inputs,
        caveats=caveats,
        seed=seed,
    )


def check_covering_uncertainty(f: BandlimitedFunction, region: Region,
                               sset: SpectralSet, quad: Quadrature,
                               c_m: float, c_m_spec: str = "",
                               seed=None) -> InequalityReport:
    """(1 - eps - eps')^2 <= |E| C_M sum_k mu_k^{d-1}, where the mu_k are the
    greedy unit-interval covering of S and C_M is an empirical unit-band
    sup-norm constant.  Also records the crude comparison
    sum mu_k^{d-1} <= #S (lambda_max + 1)^{d-1}."""
    if sset.is_joint:
        raise ValueError("the covering bound needs a scalar spectral set")
    levels = concentration_levels(f, region, sset, quad, p=2)
    covering = cover_by_unit_intervals(sset)
    d = sset.space.dim
    cover_sum = float(sum(mu ** (d - 1) for mu in covering.starts))
    lam_max = max(sset.values) if sset.values else 0.0
    crude_sum = len(sset.values) * (lam_max + 1.0) ** (d - 1)
    gap = 1.0 - levels.epsilon - levels.epsilon_prime
    inputs = _base_inputs(region, sset, quad, levels)
    inputs.update({
        "covering_starts": list(covering.starts),
        "covering_size": covering.n,
        "covering_sum": cover_sum,
        "crude_sum": crude_sum,
        "c_m": c_m,
    })
    caveats = _vacuity(levels)
    caveats.append("empirical C_M: grid maximum" + (f" ({c_m_spec})" if c_m_spec else ""))
    if covering.starts and min(covering.starts) < 1.0:
        # the unit-band constant is calibrated on [1, inf); a start below 1
        # (e.g. the constant eigenfunction) is outside its range, and for
        # d >= 2 the mu^{d-1} term would degenerate to zero
        caveats.append("vacuous: covering starts below 1, outside the "
                       "calibrated range of the unit-band constant")
    return InequalityReport(
        name="covering",
        lhs=max(gap, 0.0) ** 2,
        rhs=region.measure * c_m * cover_sum,
        inputs=inputs,
        caveats=caveats,
        seed=seed,
    )


def check_joint_uncertainty(f: BandlimitedFunction, region: Region,
                            sset: SpectralSet, quad: Quadrature,
                            homogeneity_samples: int = 64,
                            homogeneity_tol: float = 1e-9,
                            rng=None, seed=None) -> list[InequalityReport]:
    """Joint-spectrum uncertainty: (1 - eps - eps')^2 <= sum over X_S of
    int_E |e_j|^2.  When every selected joint class has constant summed
    square modulus, the homogeneous variant
    (1 - eps - eps')^2 <= #X_S |E| / |M| is emitted as a second report."""
    if not sset.is_joint:
        raise ValueError("check_joint_uncertainty needs a joint spectral set")
    levels = concentration_levels(f, region, sset, quad, p=2)
    energy = masked_band_energy(sset, region, quad)
    gap = 1.0 - levels.epsilon - levels.epsilon_prime
    inputs = _base_inputs(region, sset, quad, levels)
    inputs["band_energy_in_region"] = energy
    reports = [InequalityReport(
        name="joint",
        lhs=max(gap, 0.0) ** 2,
        rhs=energy,
        inputs=inputs,
        caveats=_vacuity(levels),
        seed=seed,
    )]
    space = sset.space
    rng = rng or np.random.default_rng(seed if seed is not None else 0)
    pts = np.concatenate([space.extreme_points(),
                          space.sample_points(homogeneity_samples, rng)])
    homogeneous = True
    for value in sset.values:
        ok, _ = check_homogeneity(space, value, pts, tol=homogeneity_tol,
                                  joint=True, match_tol=sset.tol)
        homogeneous = homogeneous and ok
    if homogeneous:
        reports.append(InequalityReport(
            name="joint-homogeneous",
            lhs=max(gap, 0.0) ** 2,
            rhs=sset.size * region.measure / space.total_measure,
            inputs=dict(inputs),
            caveats=_vacuity(levels),
            seed=seed,
        ))
    return reports


def check_random_half_uncertainty(f: BandlimitedFunction, region: Region,
                                  quad: Quadrature, k_emp: float, n: int,
                                  b_sup: float | None = None,
                                  seed=None) -> InequalityReport:
    """Mass bound through an observed L2/L1 norm equivalence: if f is
    L1-concentrated on E at level A and |f|_2 <= K |f|_1, then
    |E| >= 1 / (K^2 A^2).

    ``k_emp`` is the observed constant from a random-half split (standing in
    for the non-explicit C B log(n) loglog(n)^{5/2} of the generic-split
    theorem); whether it bounds this particular f's ratio is verified
    directly and recorded.
    """
    if n < 4:
        raise ValueError("the random-half bound needs n >= 4 (iterated log)")
    vals = sample_values(f, quad)
    norm1 = quad.norm(vals, 1)
    norm2 = quad.norm(vals, 2)
    if norm1 <= 0.0:
        raise ValueError("the random-half bound is undefined for the zero function")
    inside1 = quad.norm(vals * region.contains_mask(quad.nodes), 1)
    a_level = math.inf if inside1 <= 0 else norm1 / inside1
    ratio_f = norm2 / norm1
    k_bounds_f = k_emp >= ratio_f * (1.0 - 1e-12)
    lhs = 0.0 if math.isinf(a_level) else 1.0 / (k_emp**2 * a_level**2)
    inputs = _base_inputs(region, None, quad)
    inputs.update({
        "n": n,
        "k_emp": k_emp,
        "level_A": a_level,
        "f_l2_over_l1": ratio_f,
        "k_emp_bounds_f": bool(k_bounds_f),
    })
    if b_sup is not None:
        inputs["b_sup"] = b_sup
        inputs["benchmark"] = b_sup * math.log(n) * math.log(math.log(n)) ** 2.5
    caveats = ["empirical K: observed L2/L1 ratio from a random-half split"]
    if not k_bounds_f:
        caveats.append("vacuous: observed K does not bound this trial's L2/L1 ratio")
    return InequalityReport(
        name="random-manifold",
        lhs=lhs,
        rhs=region.measure,
        inputs=inputs,
        caveats=caveats,
        seed=seed,
    )
