"""Command-line interface: spectra, states, observable fields and verification.

Radii are read and written in units of r_B / Z. Exit codes: 0 success,
1 verification failure (the report is still written), 2 invalid input,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .angular import HalfInt
from .bispinor import BoundState, SpinParams, evaluate_field, inner_product, make_grid, special_case
from .observables import observe, to_cylindrical
from .odeoracle import ShootingError, find_spectrum
from .operators import (
    OperatorHandle,
    anticommutator_norm,
    commutator_norm,
    eigen_residual,
    invariant_eigenvalue,
    smooth_random_bispinor,
)
from .radial import FINE_STRUCTURE, PhysicalConfig, QuantumNumbers, energy, fine_structure, gamma_j

COMMANDS = ("spectrum", "state", "field", "verify", "oracle")
FLOAT_FMT = "%.17g"
N_MAX_LIMIT = 20

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(ValueError):
    """Invalid command-line selection; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    Z: float = 1.0
    alpha: float = FINE_STRUCTURE
    n: int | None = None
    n_max: int = 2
    kappa: int | None = None
    two_mj: int = 1
    sigma: int = 1
    theta: float = 0.0
    phi: float = 0.0
    case: str | None = None
    grid: tuple[int, int, int] = (64, 32, 32)
    out: str = "-"
    format: str = "json"
    pauli: bool = False
    slice: bool = False
    slice_points: int = 200
    slice_extent: float = 12.0
    kappa_max: int = 2
    n_r_max: int = 3
    random_fields: int = 1
    oracle: bool = False
    beta_scale: float = 1.0
    seed: int = 20240101

    @property
    def physical(self) -> PhysicalConfig:
        return PhysicalConfig(self.Z, self.alpha)


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    return FLOAT_FMT % v


def _json_text(obj) -> str:
    """Deterministic JSON: fixed key order as given, floats with 17 digits."""
    if obj is None or obj is True or obj is False:
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return _fmt(v) if math.isfinite(v) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{_json_text(str(k))}: {_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _columns_to_rows(columns: dict) -> tuple[list[str], list]:
    header = list(columns)
    arrays = [np.asarray(columns[k]).ravel() for k in header]
    rows = ([a[i].item() for a in arrays] for i in range(arrays[0].size))
    return header, rows


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _render(cfg: RunConfig, payload: dict, columns: dict) -> str:
    if cfg.format == "csv":
        header, rows = _columns_to_rows(columns)
        return _csv_text(header, rows)
    return _json_text(payload) + "\n"


# ------------------------------------------------------------ selectors


def _state_selection(cfg: RunConfig) -> tuple[QuantumNumbers, SpinParams]:
    if cfg.n is None or cfg.kappa is None:
        raise UsageError("--n and --kappa are required")
    try:
        qn = QuantumNumbers.from_n(cfg.n, cfg.kappa, cfg.two_mj, cfg.sigma)
        gamma_j(qn.kappa, cfg.physical.zalpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if qn.n_r > 0 and not cfg.physical.zalpha > 0:
        raise UsageError("Z*alpha must be positive")
    sp = special_case(cfg.case, qn.sigma) if cfg.case else SpinParams(cfg.theta, cfg.phi)
    return qn, sp


def _scaled_beta(qn: QuantumNumbers, sp: SpinParams, cfg: RunConfig):
    if cfg.beta_scale == 1.0:
        return None
    b1, b2 = BoundState(qn, sp, cfg.physical).beta
    return (cfg.beta_scale * b1, cfg.beta_scale * b2)


# -------------------------------------------------------------- commands


def cmd_spectrum(cfg: RunConfig) -> tuple[dict, dict]:
    """Levels (n, kappa) for n <= n_max with energies, splittings and degeneracies."""
    if not 1 <= cfg.n_max <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [1, {N_MAX_LIMIT}]")
    za = cfg.physical.zalpha
    if not za < 1:
        raise UsageError(f"no bound 1s state: Z*alpha = {za} >= 1")
    rows = []
    totals = {}
    for n in range(1, cfg.n_max + 1):
        for kappa in range(1, n + 1):
            delta, eps = fine_structure(n, kappa, za)
            degeneracy = 2 * kappa * (2 if kappa < n else 1)
            rows.append(
                {
                    "n": n,
                    "kappa": kappa,
                    "j": kappa - 0.5,
                    "epsilon": eps,
                    "binding": 1.0 - eps,
                    "delta_j": delta,
                    "degeneracy": degeneracy,
                }
            )
            totals[str(n)] = totals.get(str(n), 0) + degeneracy
    payload = {"meta": {"command": "spectrum", "Z": cfg.Z, "alpha": cfg.alpha, "n_max": cfg.n_max}, "rows": rows, "totals": totals}
    columns = {k: [row[k] for row in rows] for k in rows[0]}
    return payload, columns


def cmd_state(cfg: RunConfig) -> tuple[dict, dict]:
    """Bispinor components on the quadrature grid of the selected state."""
    qn, sp = _state_selection(cfg)
    fld = evaluate_field(qn, sp, cfg.physical, counts=cfg.grid, beta=_scaled_beta(qn, sp, cfg))
    payload = fld.to_json()
    payload["meta"]["epsilon"] = energy(qn.n_r, qn.kappa, cfg.physical.zalpha)[0]
    payload["meta"]["norm"] = fld.norm()
    return payload, payload["data"]


def _slice_points(cfg: RunConfig):
    z = np.linspace(-cfg.slice_extent, cfg.slice_extent, cfg.slice_points)
    rho = np.linspace(0.0, cfg.slice_extent, cfg.slice_points)
    Z, RHO = np.meshgrid(z, rho, indexing="ij")
    r = np.hypot(Z, RHO)
    # r = 0 only occurs for an odd point count; nudge it off the singular origin.
    r = np.where(r == 0, 1e-12, r)
    theta = np.arctan2(RHO, Z)
    return Z.ravel(), RHO.ravel(), r.ravel(), theta.ravel(), np.zeros(r.size)


def cmd_field(cfg: RunConfig) -> tuple[dict, dict]:
    """Density and spin-direction fields, on the quadrature grid or a (z, rho) slice."""
    qn, sp = _state_selection(cfg)
    state = BoundState(qn, sp, cfg.physical, beta=_scaled_beta(qn, sp, cfg))
    if cfg.slice:
        if cfg.slice_points < 2 or not cfg.slice_extent > 0:
            raise UsageError("slice needs at least 2 points and a positive extent")
        z, rho, r, theta, phi = _slice_points(cfg)
        obs = observe(state, r, theta, phi, pauli=cfg.pauli)
        cyl = to_cylindrical(obs.s, phi)
        columns = {
            "z": z,
            "rho": rho,
            "w": obs.w,
            "s_rho": cyl[0],
            "s_phi": cyl[1],
            "s_z": cyl[2],
            "polarization": obs.polarization,
        }
    else:
        grid = make_grid(qn.n_r, qn.kappa, cfg.physical.zalpha, cfg.grid)
        obs = observe(state, grid.r, grid.theta, grid.phi, pauli=cfg.pauli)
        sph = obs.s_spherical
        columns = {
            "r": grid.r,
            "theta": grid.theta,
            "phi": grid.phi,
            "w": obs.w,
            "sx": obs.s[0],
            "sy": obs.s[1],
            "sz": obs.s[2],
            "sr": sph[0],
            "stheta": sph[1],
            "polarization": obs.polarization,
            "weight": grid.weights,
        }
    meta = {
        "command": "field",
        "n_r": qn.n_r,
        "kappa": qn.kappa,
        "two_mj": qn.two_mj,
        "sigma": qn.sigma,
        "theta": sp.theta,
        "phi": sp.phi,
        "Z": cfg.Z,
        "alpha": cfg.alpha,
        "pauli": cfg.pauli,
        "mode": "slice" if cfg.slice else "grid",
    }
    return {"meta": meta, "data": {k: np.asarray(v).tolist() for k, v in columns.items()}}, columns


def _check(report: list, suite: str, name: str, value: float, threshold: float) -> None:
    ok = bool(math.isfinite(value) and value <= threshold)
    report.append({"suite": suite, "name": name, "value": float(value), "threshold": threshold, "passed": ok})


def _verify_normalization(cfg: RunConfig, report: list) -> None:
    pc = cfg.physical
    for n in range(1, cfg.n_max + 1):
        for kappa in range(1, n + 1):
            n_r = n - kappa
            grid = make_grid(n_r, kappa, pc.zalpha, (48, 24, 8))
            cases = ("darwin", "jl", "bel") if n_r > 0 else ("darwin",)
            for case in cases:
                fields = {}
                for sigma in (1, -1) if n_r > 0 else (1,):
                    qn = QuantumNumbers(n_r, kappa, HalfInt(1), sigma)
                    sp = special_case(case, sigma)
                    fields[sigma] = evaluate_field(qn, sp, pc, grid, beta=_scaled_beta(qn, sp, cfg))
                    dev = abs(inner_product(fields[sigma], fields[sigma]).real - 1.0)
                    _check(report, "normalization", f"n={n} kappa={kappa} {case} sigma={sigma:+d}", dev, 1e-8)
                if -1 in fields:
                    ov = abs(inner_product(fields[1], fields[-1]))
                    _check(report, "orthogonality", f"n={n} kappa={kappa} {case}", ov, 1e-8)


def _verify_eigen(cfg: RunConfig, report: list) -> None:
    pc = cfg.physical
    za = pc.zalpha
    for n in range(1, cfg.n_max + 1):
        for kappa in range(1, n + 1):
            n_r = n - kappa
            eps = energy(n_r, kappa, za)[0]
            for case in ("darwin", "jl", "bel") if n_r > 0 else ("darwin",):
                for sigma in (1, -1) if n_r > 0 else (1,):
                    qn = QuantumNumbers(n_r, kappa, HalfInt(1), sigma)
                    state = BoundState(qn, special_case(case, sigma), pc)
                    grid = make_grid(n_r, kappa, za, (48, 24, 1))
                    label = f"n={n} kappa={kappa} {case} sigma={sigma:+d}"
                    expect = {"H": eps, "Jz": 0.5, "Jsq": (kappa - 0.5) * (kappa + 0.5)}
                    kind = {"darwin": "ID", "jl": "IJL", "bel": "IBEL"}[case]
                    expect[kind] = invariant_eigenvalue(kind, n_r, kappa, za, sigma)
                    for op, value in expect.items():
                        res = eigen_residual(OperatorHandle(op, zalpha=za), state, value, grid)
                        _check(report, "eigen", f"{op} {label}", res, 1e-5)


def _verify_algebra(cfg: RunConfig, report: list) -> None:
    za = cfg.physical.zalpha
    rng = np.random.default_rng(cfg.seed)
    pairs = (("ID", "IJL"), ("ID", "IBEL"), ("IJL", "IBEL"))
    for k in range(cfg.random_fields):
        f = smooth_random_bispinor(rng, two_mj=1, l_max=2, zalpha=za)
        for a, b in pairs:
            _check(report, "anticommutator", f"{{{a},{b}}} field {k}", anticommutator_norm(a, b, f), 1e-5)
        for a in ("ID", "IJL", "IBEL"):
            _check(report, "commutator", f"[H,{a}] field {k}", commutator_norm("H", a, f), 1e-5)


def _verify_oracle(cfg: RunConfig, report: list) -> None:
    za = cfg.physical.zalpha
    for kappa in range(1, cfg.kappa_max + 1):
        if za >= kappa:
            raise UsageError(f"no bound states: Z*alpha = {za} >= kappa = {kappa}")
        try:
            shoot = find_spectrum(kappa, za, cfg.n_r_max)
        except ShootingError as exc:
            _check(report, "oracle", f"kappa={kappa} search", math.inf, 1e-8)
            report[-1]["error"] = str(exc)
            continue
        for n_r, eps in enumerate(shoot):
            delta = abs(eps - energy(n_r, kappa, za)[0])
            _check(report, "oracle", f"kappa={kappa} n_r={n_r}", delta, 1e-8)


def _report_payload(cfg: RunConfig, checks: list) -> dict:
    failed = [c["name"] for c in checks if not c["passed"]]
    meta = {"command": cfg.command, "Z": cfg.Z, "alpha": cfg.alpha, "n_max": cfg.n_max, "beta_scale": cfg.beta_scale}
    return {"meta": meta, "passed": not failed, "n_checks": len(checks), "n_failed": len(failed), "checks": checks}


def _report_columns(checks: list) -> dict:
    keys = ("suite", "name", "value", "threshold", "passed")
    return {k: [str(c[k]).lower() if k == "passed" else c[k] for c in checks] for k in keys}


def cmd_verify(cfg: RunConfig) -> tuple[dict, dict]:
    """Normalization, eigen-residual and operator-algebra suites on n <= n_max."""
    if not 1 <= cfg.n_max <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [1, {N_MAX_LIMIT}]")
    za = cfg.physical.zalpha
    if not 0 < za < 1:
        raise UsageError(f"Z*alpha must lie in (0, 1), got {za}")
    checks: list = []
    _verify_normalization(cfg, checks)
    _verify_eigen(cfg, checks)
    _verify_algebra(cfg, checks)
    if cfg.oracle:
        _verify_oracle(cfg, checks)
    return _report_payload(cfg, checks), _report_columns(checks)


def cmd_oracle(cfg: RunConfig) -> tuple[dict, dict]:
    """Shooting spectrum against the closed form for kappa <= kappa_max."""
    za = cfg.physical.zalpha
    if not za > 0:
        raise UsageError("Z*alpha must be positive")
    if cfg.kappa_max < 1 or cfg.n_r_max < 0:
        raise UsageError("need --kappa-max >= 1 and --n-r-max >= 0")
    checks: list = []
    _verify_oracle(cfg, checks)
    return _report_payload(cfg, checks), _report_columns(checks)


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "state": cmd_state,
    "field": cmd_field,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------- parsing


def _grid_spec(text: str) -> tuple[int, int, int]:
    try:
        counts = tuple(int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64:32:32, got {text!r}") from None
    if len(counts) != 3 or min(counts) < 1:
        raise argparse.ArgumentTypeError(f"grid needs three positive counts r:theta:phi, got {text!r}")
    return counts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--Z", type=float, default=1.0, help="nuclear charge number (default 1)")
    common.add_argument("--alpha", type=float, default=FINE_STRUCTURE, help="fine-structure constant")
    common.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--n", type=int, help="principal quantum number")
    state.add_argument("--kappa", type=int, help="kappa = j + 1/2")
    state.add_argument("--two-mj", type=int, default=1, help="2 m_j (odd integer)")
    state.add_argument("--sigma", type=int, choices=(1, -1), default=1)
    state.add_argument("--theta", type=float, default=0.0, help="spin parameter theta")
    state.add_argument("--phi", type=float, default=0.0, help="spin parameter phi")
    state.add_argument("--case", choices=("darwin", "jl", "bel"), help="special-case spin parameters")
    state.add_argument("--grid", type=_grid_spec, default=(64, 32, 32), help="quadrature counts r:theta:phi")
    state.add_argument("--beta-scale", type=float, default=1.0, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="dirac-coulomb",
        description="Bound states of the Dirac equation in a Coulomb field. Radii are in units of r_B/Z.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("spectrum", parents=[common], help="energy levels for n <= n-max")
    p.add_argument("--n-max", type=int, default=2)
    sub.add_parser("state", parents=[common, state], help="bispinor on the quadrature grid")
    p = sub.add_parser("field", parents=[common, state], help="density and spin fields")
    p.add_argument("--pauli", action="store_true", help="use the nonrelativistic upper spinor")
    p.add_argument("--slice", action="store_true", help="sample the (z, rho) half-plane at phi = 0")
    p.add_argument("--slice-points", type=int, default=200, help="points per axis in slice mode")
    p.add_argument("--slice-extent", type=float, default=12.0, help="|z| and rho range in slice mode")
    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--random-fields", type=int, default=1, help="random test fields for the operator algebra")
    p.add_argument("--oracle", action="store_true", help="include the shooting-spectrum suite")
    p.add_argument("--kappa-max", type=int, default=2)
    p.add_argument("--n-r-max", type=int, default=3)
    p.add_argument("--seed", type=int, default=20240101)
    p.add_argument("--beta-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p = sub.add_parser("oracle", parents=[common], help="shooting spectrum against the closed form")
    p.add_argument("--kappa-max", type=int, default=2)
    p.add_argument("--n-r-max", type=int, default=3)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    kwargs = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    return RunConfig(**kwargs)


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        PhysicalConfig(cfg.Z, cfg.alpha)
        payload, columns = _DISPATCH[cfg.command](cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(_render(cfg, payload, columns), cfg.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if cfg.command in ("verify", "oracle") and not payload["passed"]:
        failed = [c["name"] for c in payload["checks"] if not c["passed"]]
        print(f"verification failed: {len(failed)} check(s), first: {failed[0]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
