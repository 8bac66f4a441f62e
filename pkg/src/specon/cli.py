"""Batch front-end: parse descriptors, run checks, emit deterministic reports.

Exit codes: 0 when every evaluated inequality holds or is vacuous, 2 when any
report fails, 1 on configuration or computation errors.  Same configuration
and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .concentration import BandlimitedFunction, gram_matrix, max_concentration
from .errors import SpeconError
from .random_spectra import (
    DEFAULT_SEED,
    RandomSubsetSpec,
    estimate_cq,
    generic_subset,
    gmpt_split,
    trial_rng,
)
from .regions import parse_region
from .reports import (
    SCHEMA_VERSION,
    InequalityReport,
    dumps_stable,
    format_float,
    reports_to_csv,
    reports_to_json,
)
from .spaces import FiniteGroup, ModelSpace, parse_space
from .spectral import (
    check_homogeneity,
    local_weyl,
    parse_spectrum,
    sogge_constant_estimate,
    weyl_count,
)
from . import uncertainty

OUTPUT_DIR_ENV = "SPECON_OUTPUT_DIR"

INEQUALITIES = ["lca", "bourgain", "prop", "homogeneous", "supnorm", "covering",
                "joint", "random-manifold"]


# -- emission -------------------------------------------------------------------


def _resolve_output(path):
    if path in (None, "-"):
        return None
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return path


def _write(text: str, path):
    path = _resolve_output(path)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def emit_reports(reports, fmt: str, path=None):
    """Serialize inequality reports; stable field order, floats at 17
    significant digits, no computation at emit time."""
    _write(reports_to_json(reports) if fmt == "json" else reports_to_csv(reports), path)


def emit_rows(command: str, header, rows, fmt: str, path=None):
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "rows": [dict(zip(header, row)) for row in rows]}
        _write(dumps_stable(doc) + "\n", path)
        return
    lines = [",".join(["schema_version"] + list(header))]
    for row in rows:
        cells = [str(SCHEMA_VERSION)]
        for cell in row:
            if isinstance(cell, float):
                s = format_float(cell).strip('"')
            elif isinstance(cell, (list, tuple, dict)):
                s = dumps_stable(cell).replace("\n", " ")
                while "  " in s:
                    s = s.replace("  ", " ")
            else:
                s = str(cell)
            if any(ch in s for ch in ',"\n'):
                s = '"' + s.replace('"', '""') + '"'
            cells.append(s)
        lines.append(",".join(cells))
    _write("\n".join(lines) + "\n", path)


# -- shared construction ----------------------------------------------------------


def _space(args) -> ModelSpace:
    return parse_space(args.space)


def _quad_for(space, max_freq, args, factor: float = 1.0):
    cutoff = max(max_freq * factor, 1.0)
    return space.build_quadrature(cutoff, oversample=args.quad_oversample)


def _random_band_function(sset, rng) -> BandlimitedFunction:
    a = rng.normal(size=sset.size) + 1j * rng.normal(size=sset.size)
    return BandlimitedFunction(sset, a)


def _make_trial_f(space, sset, region, quad, rng, mode):
    """Trial functions for the manifold checks: random coefficients over X_S,
    random coefficients with a spectral tail, or the top concentration
    eigenvector for the region."""
    from .spectral import spectrum_ball

    if mode == "bandlimited":
        return _random_band_function(sset, rng)
    if mode == "tails":
        ambient = spectrum_ball(space, sset.max_frequency + 2.0, tol=sset.tol)
        f = _random_band_function(ambient, rng)
        # keep most mass on X_S so the bounds stay informative
        inside = np.isin(ambient.indices, sset.indices)
        coeffs = f.coefficients * np.where(inside, 1.0, 0.15)
        return BandlimitedFunction(ambient, coeffs)
    if mode == "slepian":
        gram = gram_matrix(sset, region, quad)
        _, vec = max_concentration(gram)
        return BandlimitedFunction(sset, vec)
    raise SpeconError(f"unknown f-mode {mode!r}")


# -- subcommand handlers ----------------------------------------------------------


def cmd_basis(args):
    space = _space(args)
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = space.max_frequency()
        if cutoff is None:
            raise SpeconError("--cutoff is required on spaces with unbounded spectrum")
    rows = [
        (el.index, str(el.label), el.frequency, list(el.joint))
        for el in space.enumerate_basis(cutoff)
    ]
    emit_rows("basis", ["index", "label", "frequency", "joint"], rows,
              args.format, args.output)
    return 0


def cmd_weyl(args):
    space = _space(args)
    lams = [args.lam] if args.lam is not None else []
    if args.lam_max is not None:
        lams = np.arange(args.lam_step, args.lam_max + args.lam_step / 2,
                         args.lam_step).tolist()
    if not lams:
        raise SpeconError("weyl needs --lambda or --lambda-max")
    point = (space.extreme_points()[0] if args.point is None
             else np.asarray([float(c) for c in args.point.split(",")]))
    weyl_const = space.total_measure * space.unit_ball_volume / (2 * math.pi) ** space.dim
    rows = []
    for lam in lams:
        n = weyl_count(space, lam)
        nx = local_weyl(space, point, lam)
        pred = weyl_const * lam**space.dim
        rows.append((lam, n, nx, pred, n / pred if pred > 0 else math.inf))
    emit_rows("weyl", ["lambda", "count", "local_count", "weyl_prediction", "ratio"],
              rows, args.format, args.output)
    return 0


def cmd_homogeneity(args):
    space = _space(args)
    sset = parse_spectrum(space, args.spectrum, tol=args.match_tol)
    rng = trial_rng(args.seed, 0)
    pts = np.concatenate([space.extreme_points(), space.sample_points(args.samples, rng)])
    reports = []
    for value in sset.values:
        _, dev = check_homogeneity(space, value, pts, tol=args.tol,
                                   joint=sset.is_joint, match_tol=sset.tol)
        reports.append(InequalityReport(
            name="homogeneity",
            lhs=dev,
            rhs=args.tol,
            inputs={"space": space.kind, "value": list(np.atleast_1d(value).astype(float)),
                    "samples": int(pts.shape[0])},
            seed=args.seed,
        ))
    emit_reports(reports, args.format, args.output)
    return 0 if all(r.passed for r in reports) else 2


def cmd_concentrate(args):
    space = _space(args)
    sset = parse_spectrum(space, args.spectrum, tol=args.match_tol)
    region = parse_region(space, args.region)
    quad = _quad_for(space, sset.max_frequency, args)
    gram = gram_matrix(sset, region, quad)
    vals, vecs = np.linalg.eigh(gram.entries)
    order = np.argsort(vals)[::-1]
    doc = gram.to_json_dict()
    doc["eigenvalues"] = [float(np.clip(vals[i], 0.0, 1.0)) for i in order]
    doc["top_vectors"] = [
        [[float(z.real), float(z.imag)] for z in vecs[:, i]]
        for i in order[: args.top]
    ]
    doc["indices"] = list(map(int, sset.indices))
    if args.format == "json":
        _write(dumps_stable({"schema_version": SCHEMA_VERSION, "command": "concentrate",
                             "result": doc}) + "\n", args.output)
    else:
        rows = [(i, doc["eigenvalues"][i]) for i in range(len(doc["eigenvalues"]))]
        emit_rows("concentrate", ["rank", "eigenvalue"], rows, args.format, args.output)
    return 0


def cmd_lambda_q(args):
    space = _space(args)
    spec = RandomSubsetSpec(args.n, args.q, seed=args.seed)
    subset = generic_subset(spec)
    if not subset:
        raise SpeconError(f"the generic draw kept no indices (delta={spec.delta:.3g})")
    elements = space.elements_by_index(subset)
    fmax = max(el.frequency for el in elements)
    quad = _quad_for(space, fmax, args, factor=max(1.0, args.q / 2.0))
    est = estimate_cq(space, subset, args.q, quad, trials=args.trials,
                      ascent_iterations=args.ascent_iterations, seed=args.seed)
    doc = est.to_json_dict()
    doc["delta"] = spec.delta
    doc["expected_size"] = spec.expected_size
    if args.format == "json":
        _write(dumps_stable({"schema_version": SCHEMA_VERSION, "command": "lambda-q",
                             "result": doc}) + "\n", args.output)
    else:
        emit_rows("lambda-q", list(doc.keys()), [tuple(doc.values())],
                  args.format, args.output)
    return 0


def cmd_gmpt(args):
    space = _space(args)
    elements = space.first_elements(args.n)
    fmax = max(el.frequency for el in elements)
    quad = _quad_for(space, fmax, args)
    split = gmpt_split(space, quad, args.n, c_param=args.c_param,
                       trials=args.trials, subsets=args.subsets, seed=args.seed)
    doc = split.to_json_dict()
    if args.format == "json":
        _write(dumps_stable({"schema_version": SCHEMA_VERSION, "command": "gmpt",
                             "result": doc}) + "\n", args.output)
    else:
        emit_rows("gmpt", list(doc.keys()), [tuple(doc.values())],
                  args.format, args.output)
    return 0


def cmd_donoho_stark(args):
    space = _space(args)
    if not isinstance(space, FiniteGroup):
        raise SpeconError("donoho-stark runs on finite groups (zn:...)")
    size = int(space.total_measure)
    reports = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        support = rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)
        f = np.zeros(size, dtype=complex)
        f[support] = rng.normal(size=len(support)) + 1j * rng.normal(size=len(support))
        rep = uncertainty.check_group_uncertainty(space, f, seed=args.seed)
        rep.inputs["trial"] = t
        reports.append(rep)
    emit_reports(reports, args.format, args.output)
    return 0 if all(r.passed for r in reports) else 2


def _check_lca(args, space):
    if not isinstance(space, FiniteGroup):
        raise SpeconError("--inequality lca runs on finite groups (zn:...)")
    size = int(space.total_measure)
    reports = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        support = rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)
        f = np.zeros(size, dtype=complex)
        f[support] = rng.normal(size=len(support)) + 1j * rng.normal(size=len(support))
        rep = uncertainty.check_group_uncertainty(space, f, seed=args.seed)
        rep.inputs["trial"] = t
        reports.append(rep)
    return reports


def _check_bourgain(args, space):
    if args.q is None:
        raise SpeconError("--inequality bourgain needs --q")
    region = parse_region(space, args.region)
    n = args.n
    if n is None:
        if isinstance(space, FiniteGroup):
            n = int(space.total_measure)
        else:
            raise SpeconError("--inequality bourgain needs --n on continuum spaces")
    elements = space.first_elements(n)
    fmax = max(el.frequency for el in elements)
    quad = _quad_for(space, fmax, args)
    v = space.basis_matrix(elements, quad.nodes)
    indicator = region.contains_mask(quad.nodes).astype(complex)
    full_hat = (v.conj().T * quad.weights) @ indicator
    reports = []
    for t in range(args.trials):
        spec = RandomSubsetSpec(n, args.q, seed=int(trial_rng(args.seed, t).integers(2**63)))
        subset = generic_subset(spec)
        if not subset:
            continue
        coeffs = full_hat[subset]
        norm = np.linalg.norm(coeffs)
        if norm < 1e-12:
            continue
        from .spectral import SpectralSet

        sset = SpectralSet(space, [elements[i].joint for i in subset], joint=True,
                           tol=args.match_tol)
        f = BandlimitedFunction(sset, coeffs / norm) if sset.size == len(subset) else None
        if f is None:
            continue
        c_upper = len(subset) ** (0.5 - 1.0 / args.q)
        rep = uncertainty.check_generic_subset_uncertainty(
            f, region, quad, args.q, c_upper, seed=args.seed)
        rep.inputs["trial"] = t
        rep.inputs["subset_size"] = len(subset)
        reports.append(rep)
    return reports


def _check_manifold(args, space, name):
    region = parse_region(space, args.region)
    sset = parse_spectrum(space, args.spectrum, tol=args.match_tol)
    pad = 2.0 if args.f_mode == "tails" else 0.0
    quad = space.build_quadrature(max(sset.max_frequency + pad, 1.0),
                                  oversample=args.quad_oversample)
    c_m = c_m_spec = None
    if name == "covering":
        from .spectral import cover_by_unit_intervals

        covering = cover_by_unit_intervals(sset)
        lam_top = max(sset.values) if sset.values else 1.0
        c_m = sogge_constant_estimate(space, max(1.0, lam_top + 1.0),
                                      x_samples=args.x_samples, seed=args.seed,
                                      extra_lambdas=covering.starts)
        c_m_spec = (f"grid step 0.5 on [1, {max(1.0, lam_top + 1.0):g}] with covering "
                    f"starts, {args.x_samples} sample points, seed {args.seed}")
    reports = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        f = _make_trial_f(space, sset, region, quad, rng, args.f_mode)
        if name == "prop":
            rep = uncertainty.check_eigenfunction_mass_bound(f, region, sset, quad,
                                                             seed=args.seed)
        elif name == "homogeneous":
            rep = uncertainty.check_homogeneous_uncertainty(f, region, sset, quad,
                                                            rng=rng, seed=args.seed)
        elif name == "supnorm":
            rep = uncertainty.check_supnorm_uncertainty(f, region, sset, quad,
                                                        x_samples=args.x_samples,
                                                        rng=rng, seed=args.seed)
        elif name == "covering":
            rep = uncertainty.check_covering_uncertainty(f, region, sset, quad,
                                                         c_m, c_m_spec, seed=args.seed)
        else:
            raise SpeconError(f"unhandled inequality {name}")
        rep.inputs["trial"] = t
        reports.append(rep)
    return reports


def _check_joint(args, space):
    region = parse_region(space, args.region)
    sset = parse_spectrum(space, args.spectrum, tol=args.match_tol)
    if not sset.is_joint:
        raise SpeconError("--inequality joint needs a joint:[...] spectrum")
    quad = space.build_quadrature(max(sset.max_frequency, 1.0),
                                  oversample=args.quad_oversample)
    reports = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        f = _make_trial_f(space, sset, region, quad, rng,
                          "bandlimited" if args.f_mode == "tails" else args.f_mode)
        for rep in uncertainty.check_joint_uncertainty(f, region, sset, quad,
                                                       rng=rng, seed=args.seed):
            rep.inputs["trial"] = t
            reports.append(rep)
    return reports


def _check_random_manifold(args, space):
    region = parse_region(space, args.region)
    if args.n is None:
        raise SpeconError("--inequality random-manifold needs --n")
    elements = space.first_elements(args.n)
    fmax = max(el.frequency for el in elements)
    quad = _quad_for(space, fmax, args)
    reports = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        split = gmpt_split(space, quad, args.n, c_param=args.c_param,
                           trials=args.gmpt_trials, subsets=args.subsets,
                           seed=int(rng.integers(2**63)))
        side = split.indices or split.complement
        from .spectral import SpectralSet

        sset = SpectralSet(space, [elements[i].joint for i in side], joint=True,
                           tol=args.match_tol)
        a = rng.normal(size=sset.size) + 1j * rng.normal(size=sset.size)
        f = BandlimitedFunction(sset, a)
        rep = uncertainty.check_random_half_uncertainty(
            f, region, quad, k_emp=split.k_observed, n=args.n,
            b_sup=split.b_sup, seed=args.seed)
        rep.inputs["trial"] = t
        rep.inputs["split_size"] = len(split.indices)
        reports.append(rep)
    return reports


def cmd_check(args):
    space = _space(args)
    name = args.inequality
    if name == "lca":
        reports = _check_lca(args, space)
    elif name == "bourgain":
        reports = _check_bourgain(args, space)
    elif name in ("prop", "homogeneous", "supnorm", "covering"):
        reports = _check_manifold(args, space, name)
    elif name == "joint":
        reports = _check_joint(args, space)
    elif name == "random-manifold":
        reports = _check_random_manifold(args, space)
    else:
        raise SpeconError(f"unknown inequality {name!r}")
    emit_reports(reports, args.format, args.output)
    return 0 if all(r.passed for r in reports) else 2


# -- parser ----------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--space", required=True, help="space descriptor, e.g. torus:d=2")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"base seed (default {DEFAULT_SEED}, never time-based)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None,
                   help=f"output path (default stdout; relative paths join ${OUTPUT_DIR_ENV})")
    p.add_argument("--config", default=None,
                   help="key=value file inserted as defaults before the flags")
    p.add_argument("--quad-oversample", type=int, default=4,
                   help="multiply quadrature node counts (region resolution)")
    p.add_argument("--match-tol", type=float, default=1e-9,
                   help="eigenvalue matching tolerance for spectral sets")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="specon",
        description="Concentration operators and uncertainty inequalities on "
                    "model spaces (tori, the 2-sphere, finite abelian groups, products).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="enumerate the eigenbasis below a cutoff")
    _add_common(p)
    p.add_argument("--cutoff", type=float, default=None)
    p.set_defaults(handler=cmd_basis)

    p = sub.add_parser("weyl", help="eigenvalue counting tables N and N_x")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--lambda-max", dest="lam_max", type=float, default=None)
    p.add_argument("--lambda-step", dest="lam_step", type=float, default=1.0)
    p.add_argument("--point", default=None, help="comma-separated coordinates for N_x")
    p.set_defaults(handler=cmd_weyl)

    p = sub.add_parser("homogeneity", help="constant-degeneracy-sum check per eigenvalue")
    _add_common(p)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_homogeneity)

    p = sub.add_parser("concentrate", help="concentration matrix and its eigenpairs")
    _add_common(p)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--top", type=int, default=1, help="eigenvectors to include")
    p.set_defaults(handler=cmd_concentrate)

    p = sub.add_parser("check", help="evaluate one uncertainty inequality")
    _add_common(p)
    p.add_argument("--inequality", required=True, choices=INEQUALITIES)
    p.add_argument("--region", default="full")
    p.add_argument("--spectrum", default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--f-mode", choices=["bandlimited", "tails", "slepian"],
                   default="bandlimited")
    p.add_argument("--x-samples", type=int, default=256)
    p.add_argument("--c-param", type=float, default=1.0)
    p.add_argument("--subsets", type=int, default=16)
    p.add_argument("--gmpt-trials", type=int, default=16)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("lambda-q", help="generic subset and q-orthogonality estimate")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--ascent-iterations", type=int, default=200)
    p.set_defaults(handler=cmd_lambda_q)

    p = sub.add_parser("gmpt", help="random near-half split with observed L2/L1 constant")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c-param", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--subsets", type=int, default=64)
    p.set_defaults(handler=cmd_gmpt)

    p = sub.add_parser("donoho-stark", help="support uncertainty sweep on a finite group")
    _add_common(p)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(handler=cmd_donoho_stark)

    return parser


def _expand_config(argv):
    """Replace ``--config FILE`` with the file's key=value pairs, inserted
    right after the subcommand so explicit flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise SpeconError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    try:
        pairs = []
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise SpeconError(f"config line without '=': {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                pairs += [f"--{key.replace('_', '-')}", value]
    except OSError as exc:
        raise SpeconError(f"cannot read config {path!r}: {exc}") from exc
    return rest[:1] + pairs + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(argv)
        args = parser.parse_args(argv)
        return args.handler(args)
    except SpeconError as exc:
        print(f"specon: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"specon: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
