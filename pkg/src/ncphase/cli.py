"""Command-line surface: entropy queries, spectrum tables, figure data, verification.

Exit codes: 0 success, 1 verification failure, 2 invalid physics parameters,
3 unsupported request. All output is plain text (JSON or CSV); CSV is
deterministic, 9 significant digits, newline-terminated rows.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import moments
from .darboux import build_map, cell_size, omega_canonical, omega_deformed
from .params import ModelParams, derive, load_params
from .starcalc import gaussian_star, star_exp, star_log_gaussian
from .wigner import (
    energy_level,
    genvalue_residual,
    hamiltonians_pm,
    reduce,
    residual_grid,
    wigner_state,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_PARAMS = 2
EXIT_UNSUPPORTED = 3


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None,
                        help="parameter file with key = value lines")
    parser.add_argument("--hbar", type=float, default=None)
    parser.add_argument("--mass", type=float, default=None)
    parser.add_argument("--omega", type=float, default=None)
    parser.add_argument("--mu", type=float, default=None)
    parser.add_argument("--nu", type=float, default=None)


def _params_from_args(args) -> ModelParams:
    if args.config:
        base = load_params(args.config)
        fields = {k: getattr(base, k) for k in ("hbar", "mass", "omega", "mu", "nu")}
    else:
        fields = {"hbar": 1.0, "mass": 1.0, "omega": 1.0, "mu": 0.0, "nu": 0.0}
    for key in fields:
        override = getattr(args, key)
        if override is not None:
            fields[key] = override
    params = ModelParams(**fields)
    if params.near_singular:
        print("warning: mu*nu is within 1e-9 of the hbar^2 singularity",
              file=sys.stderr)
    return params


def _integer_order(raw: str) -> int:
    value = float(raw)
    if not value.is_integer():
        raise ValueError(f"unsupported order {raw}")
    return int(value)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="")


def cmd_entropy(args) -> int:
    try:
        params = _params_from_args(args)
        dq = derive(params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS

    kind = args.kind
    method = args.method
    try:
        if kind == "von-neumann":
            order = 1
            if method == "numeric":
                reduced = reduce(wigner_state(0, 0, params), 1)
                result = ent.von_neumann_numeric(reduced, params)
            else:
                result = ent.von_neumann_entanglement(dq.lam)
        else:
            if args.order is None:
                raise ValueError("--order is required for renyi and tsallis")
            order = _integer_order(args.order)
            if method == "numeric":
                reduced = reduce(wigner_state(0, 0, params), 1)
                fn = ent.renyi_numeric if kind == "renyi" else ent.tsallis_numeric
                result = fn(reduced, order, params)
            else:
                fn = ent.renyi_entanglement if kind == "renyi" else ent.tsallis_entanglement
                result = fn(order, dq.lam)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED

    print(json.dumps({
        "kind": result.kind,
        "order": result.order,
        "lambda": result.lam,
        "value": result.value,
        "method": result.method,
    }))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    try:
        params = _params_from_args(args)
        derive(params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    if args.imax > 12 or args.jmax > 12 or args.imax < 0 or args.jmax < 0:
        print("error: indices must lie in 0..12", file=sys.stderr)
        return EXIT_UNSUPPORTED

    scale = params.hbar * params.omega if args.units == "natural" else 1.0
    rows = []
    for i in range(args.imax + 1):
        for j in range(args.jmax + 1):
            rows.append((i, j, energy_level(i, j, params) / scale))
    if args.sort:
        rows.sort(key=lambda r: (r[2], r[0], r[1]))
    lines = ["i,j,energy"]
    lines += [f"{i},{j},{_fmt(e)}" for i, j, e in rows]
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _e1_of_lambda(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam)
    mask = lam < 1.0
    lm = lam[mask]
    out[mask] = (((1.0 + lm) * np.log1p(lm) - (1.0 - lm) * np.log1p(-lm))
                 / (2.0 * lm) - np.log(2.0 * lm))
    return out


def _renyi_of_lambda(alpha: int, lam: np.ndarray) -> np.ndarray:
    beta = ent.beta_gamma(alpha).beta_at(np.asarray(lam, dtype=float))
    return np.log(beta / (2.0 * np.asarray(lam)) ** (alpha - 1)) / (alpha - 1)


def _tsallis_of_lambda(q: int, lam: np.ndarray) -> np.ndarray:
    beta = ent.beta_gamma(q).beta_at(np.asarray(lam, dtype=float))
    return (1.0 - (2.0 * np.asarray(lam)) ** (q - 1) / beta) / (q - 1)


def _surface_rows(header: str, a_vals, b_vals, lam_of, mask_of) -> str:
    lines = [header]
    for a in a_vals:
        for b in b_vals:
            if mask_of(a, b):
                lam = lam_of(a, b)
                e1 = float(_e1_of_lambda(np.array([lam]))[0])
                lines.append(f"{_fmt(a)},{_fmt(b)},{_fmt(e1)}")
            else:
                lines.append(f"{_fmt(a)},{_fmt(b)},")
    return "\n".join(lines) + "\n"


def figure_csv(figure: int, grid: int | None = None) -> str:
    """Deterministic CSV data behind each published surface or curve."""
    if figure == 1:
        n = grid or 101
        axis = np.linspace(-5.0, 5.0, n)
        return _surface_rows(
            "a,b,E1", axis, axis,
            lam_of=lambda u, v: math.sqrt(
                (4.0 + (u - v) ** 2) / (4.0 + (2.0 - u * v) * (u - v) ** 2)),
            mask_of=lambda u, v: -1.0 < u * v < 1.0,
        )
    if figure == 2:
        n = grid or 101
        d2_axis = np.linspace(0.0, 10.0, n)
        th_axis = np.linspace(-1.0, 1.0, n)
        return _surface_rows(
            "a,b,E1", d2_axis, th_axis,
            lam_of=lambda d2, th: math.sqrt((1.0 + d2) / (1.0 + (2.0 - th) * d2)),
            mask_of=lambda d2, th: -1.0 < th < 1.0,
        )
    if figure in (3, 5):
        n = grid or 401
        lam = np.linspace(0.578, 1.0, n)
        if figure == 3:
            cols = [_e1_of_lambda(lam)] + [_renyi_of_lambda(a, lam) for a in (2, 3, 4)]
            header = "lambda,E1,E2,E3,E4"
        else:
            cols = [_e1_of_lambda(lam)] + [_tsallis_of_lambda(q, lam) for q in (2, 3, 4)]
            header = "lambda,Ep1,Ep2,Ep3,Ep4"
        lines = [header]
        for idx, lv in enumerate(lam):
            vals = ",".join(_fmt(c[idx]) for c in cols)
            lines.append(f"{_fmt(lv)},{vals}")
        return "\n".join(lines) + "\n"
    if figure == 4:
        n = grid or 401
        u_axis = np.linspace(-10.0, 10.0, n)
        lines = ["u,E1"]
        for u in u_axis:
            lines.append(f"{_fmt(u)},{_fmt(ent.e1_nu_zero(float(u)))}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown figure id {figure}")


def cmd_figure(args) -> int:
    try:
        text = figure_csv(args.figure, args.grid)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    out = args.out or f"fig{args.figure}.csv"
    _write_text(out, text)
    return EXIT_OK


def _verify_checks(params: ModelParams, perturb_energy: float) -> list[dict]:
    checks = []

    def record(name: str, error: float, tolerance: float) -> None:
        checks.append({
            "name": name,
            "error": float(error),
            "tolerance": tolerance,
            "passed": bool(error <= tolerance),
        })

    dq = derive(params)

    # derived scalars: identities between equivalent forms
    err = abs(dq.h_plus * dq.h_minus - (params.hbar**2 - params.mu * params.nu))
    err /= params.hbar**2
    record("derived-scalars", err, 1e-12)

    # genvalue equation, indices <= 1, optionally with an injected energy fault
    worst = 0.0
    for i in range(2):
        for j in range(2):
            state = wigner_state(i, j, params)
            e = state.energy * (1.0 + perturb_energy)
            res = genvalue_residual(state, params, energy=e)
            scale = np.abs(state.function.value(residual_grid(state.function))).max()
            worst = max(worst, res / scale)
    record("genvalue-residual", worst, 1e-8)

    # orthogonality and normalization, indices <= 1
    cell = cell_size(params)
    states = {(i, j): wigner_state(i, j, params) for i in range(2) for j in range(2)}
    worst = 0.0
    for (k, l), skl in states.items():
        for (i, j), sij in states.items():
            got = moments.integrate(skl.function.pointwise_mul(sij.function))
            want = (1.0 / cell) if (k, l) == (i, j) else 0.0
            worst = max(worst, abs(got - want) * cell)
    for sij in states.values():
        worst = max(worst, abs(moments.integrate(sij.function) - 1.0))
    record("orthogonality-normalization", worst, 1e-9)

    # reduced state: closed form vs exact partial integration
    ground = states[(0, 0)]
    closed = reduce(ground, 1).function
    marg = moments.marginalize(ground.function, keep=1)
    pts = residual_grid(closed)
    scale = abs(closed.value(pts)).max()
    err = abs(closed.value(pts) - marg.value(pts)).max() / scale
    record("reduced-marginal", err, 1e-10)

    # star-exponential group law on H+
    h_plus, h_minus = hamiltonians_pm(params)
    t1, t2 = 0.125 / abs(h_plus.k), -0.3 / abs(h_plus.k)
    lhs = gaussian_star(star_exp(h_plus, t1), star_exp(h_plus, t2), forms=[h_plus])
    rhs = star_exp(h_plus, t1 + t2)
    err = max(abs(lhs.prefactor - rhs.prefactor),
              abs(lhs.exponent - rhs.exponent).max())
    record("star-exp-group-law", err, 1e-10)

    # star-logarithm round trip: ln_star(exp_star(H t)) = t H with zero constant
    t = -0.4 / abs(h_plus.k)
    g = star_exp(h_plus, t)
    const, quad = star_log_gaussian(g, form=h_plus)
    err = abs(const)
    err = max(err, abs(quad.prefactor * _quad_matrix(quad) - t * h_plus.matrix).max())
    record("star-log-round-trip", err, 1e-10)

    # closed-form entropy vs star-power numeric route
    reduced = reduce(ground, 1)
    worst = 0.0
    for alpha in (2, 3, 4):
        closed_val = ent.renyi_entanglement(alpha, dq.lam).value
        numeric_val = ent.renyi_numeric(reduced, alpha, params).value
        worst = max(worst, abs(closed_val - numeric_val))
    record("entropy-closed-vs-numeric", worst, 1e-9)

    # coordinate-map identities
    m = build_map(params).matrix
    err = abs(m @ omega_canonical(params.hbar) @ m.T - omega_deformed(params)).max()
    det_err = abs(np.linalg.det(m) - (1.0 - params.mu * params.nu / params.hbar**2))
    cell_err = abs(cell - (2.0 * math.pi * params.hbar) ** 2 * np.linalg.det(m))
    record("darboux-identities", max(err, det_err, cell_err / cell), 1e-12)

    # trace property on a two-mode Gaussian pair (full rank, integrable)
    modes = [h_plus, h_minus]
    g1 = star_exp(h_plus, -0.2 / abs(h_plus.k)).pointwise_mul(
        star_exp(h_minus, -0.5 / abs(h_minus.k)))
    g2 = star_exp(h_plus, -0.35 / abs(h_plus.k)).pointwise_mul(
        star_exp(h_minus, -0.15 / abs(h_minus.k)))
    lhs_v = moments.integrate(gaussian_star(g1, g2, forms=modes))
    rhs_v = moments.integrate(g1.pointwise_mul(g2))
    record("trace-property", abs(lhs_v - rhs_v) / abs(rhs_v), 1e-9)

    return checks


def _quad_matrix(quad) -> np.ndarray:
    """Symmetric matrix of a quadratic polynomial GaussPoly (zero exponent)."""
    d = quad.variables.dimension
    S = np.zeros((d, d))
    for mono, coeff in quad.poly.items():
        idx = [axis for axis, p in enumerate(mono) for _ in range(p)]
        if len(idx) != 2:
            raise ValueError("not a homogeneous quadratic")
        i, j = idx
        c = complex(coeff).real
        if i == j:
            S[i, i] += c
        else:
            S[i, j] += c / 2.0
            S[j, i] += c / 2.0
    return S


def cmd_verify(args) -> int:
    try:
        params = _params_from_args(args)
        derive(params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    checks = _verify_checks(params, args.perturb_energy)
    all_passed = all(c["passed"] for c in checks)
    print(json.dumps({
        "params": {k: getattr(params, k) for k in
                   ("hbar", "mass", "omega", "mu", "nu")},
        "checks": checks,
        "all_passed": all_passed,
    }, indent=2))
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncphase",
        description="Entanglement entropy of harmonic oscillators on a "
                    "deformed phase space",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ent = sub.add_parser("entropy", help="single entropy value as JSON")
    _add_param_flags(p_ent)
    p_ent.add_argument("--kind", choices=("renyi", "tsallis", "von-neumann"),
                       default="renyi")
    p_ent.add_argument("--order", type=str, default=None,
                       help="integer order (>= 2) for renyi/tsallis")
    p_ent.add_argument("--method", choices=("closed", "numeric"), default="closed")
    p_ent.set_defaults(func=cmd_entropy)

    p_spec = sub.add_parser("spectrum", help="energy table as CSV")
    _add_param_flags(p_spec)
    p_spec.add_argument("--imax", type=int, default=3)
    p_spec.add_argument("--jmax", type=int, default=3)
    p_spec.add_argument("--units", choices=("natural", "si"), default="natural")
    p_spec.add_argument("--sort", action="store_true")
    p_spec.add_argument("--out", type=str, default=None)
    p_spec.set_defaults(func=cmd_spectrum)

    p_fig = sub.add_parser("figure", help="regenerate figure data as CSV")
    p_fig.add_argument("--figure", type=int, required=True)
    p_fig.add_argument("--out", type=str, default=None)
    p_fig.add_argument("--grid", type=int, default=None,
                       help="points per axis (surfaces) or per curve")
    p_fig.set_defaults(func=cmd_figure)

    p_ver = sub.add_parser("verify", help="run the invariant suite, JSON report")
    _add_param_flags(p_ver)
    p_ver.add_argument("--perturb-energy", type=float, default=0.0,
                       help="test-only fault injection for the genvalue check")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
