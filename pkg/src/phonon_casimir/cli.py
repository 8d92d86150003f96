"""Command-line front end: ``phonon-casimir <subcommand> [options]``.

Exit codes: 0 success, 1 domain error, 2 numerical non-convergence,
64 usage error, 65 malformed configuration, 66 missing configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field

from . import boundaries, freefield, parabola, scattering, squeezed
from .core import NATURAL, ConfigError, ConvergenceError, DomainError, FluidSpec, GeometryResult, load_fluid_spec

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2
EXIT_USAGE, EXIT_CONFIG_MALFORMED, EXIT_CONFIG_MISSING = 64, 65, 66
CONFIG_ENV = "PHONON_CASIMIR_CONFIG"

log = logging.getLogger("phonon_casimir")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


@dataclass
class Output:
    """What a subcommand produced: a JSON-able record, or a table for CSV."""

    record: dict | None = None
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)


@dataclass
class RunRequest:
    command: str
    args: argparse.Namespace
    fluid: FluidSpec
    output: str | None
    out_path: str | None


# payload helpers -------------------------------------------------------------

def _record(spec: FluidSpec, value: float, coefficient: float, scale: float, inputs: dict, **extra) -> dict:
    rec = {"value": value, "coefficient": coefficient, "scale": scale, "units": spec.units.value,
           "inputs": inputs}
    rec.update(extra)
    return rec


def _geometry_record(spec: FluidSpec, res: GeometryResult, **extra) -> dict:
    inputs = {k: v for k, v in res.inputs.items() if k != "units"}
    return _record(spec, res.value, res.coefficient, res.scale, inputs, geometry=res.geometry,
                   length=res.length, metadata=res.metadata, **extra)


def _ratio(value: float, oracle: float) -> float | None:
    return value / oracle if oracle != 0.0 else None


# subcommands -----------------------------------------------------------------

def cmd_freespace(spec, a) -> Output:
    sep = freefield.SpacetimeSeparation(a.dx, a.dt)
    coef, ell = freefield.correlation_terms(spec, sep, a.variant)
    scale = spec.hbar * spec.rho0 / (spec.cS * ell**4)
    value = coef * scale
    extra = {"variant": freefield.Variant.parse(a.variant).value,
             "sign_class": freefield.correlation_sign(spec, sep, a.variant).value}
    if a.epsilon is not None:
        oracle = freefield.fourier_oracle(spec, sep, a.epsilon)
        extra["oracle"] = {"method": "regulated", "epsilon": a.epsilon, "value": oracle}
        extra["discrepancy_ratio"] = _ratio(value, oracle)
    elif a.oracle:
        lim = freefield.fourier_oracle_limit(spec, sep)
        extra["oracle"] = {"method": "richardson", "value": lim.value, "error_estimate": lim.error_estimate,
                           "imag": lim.imag}
        extra["discrepancy_ratio"] = _ratio(value, lim.value)
    return Output(_record(spec, value, coef, scale, {"dx": a.dx, "dt": a.dt, "length": ell}, **extra))


def cmd_squeezed(spec, a) -> Output:
    state = squeezed.make_squeeze_state(spec, a.r, a.delta, a.k, a.V, omega=a.omega)
    pref = squeezed.prefactor(spec, state)
    inputs = {"r": state.r, "delta": state.delta, "omega": state.omega, "k": state.k, "V": state.V}
    if a.profile is not None:
        phase, vals = squeezed.squeezed_profile(spec, state, a.profile)
        return Output(columns=["phase_rad", f"rho2_R_{spec.units.value}"],
                      rows=[[float(p), float(v)] for p, v in zip(phase, vals)],
                      record={"inputs": inputs, "units": spec.units.value})
    phase = state.k * a.z - state.omega * a.t
    coef = squeezed.variance_coefficient(state.r, state.delta, phase)
    lo, hi = squeezed.squeezed_extrema(spec, state)
    inputs.update(z=a.z, t=a.t)
    return Output(_record(spec, pref * coef, coef, pref, inputs, average=squeezed.squeezed_average(spec, state),
                          minimum=lo, maximum=hi))


def cmd_plate(spec, a) -> Output:
    return Output(_geometry_record(spec, boundaries.single_plate(spec, a.z)))


def cmd_plates(spec, a) -> Output:
    if a.profile is not None:
        res = boundaries.parallel_plates_profile(spec, a.a, a.profile, image_sum=a.image_sum, n_max=a.nmax)
        return Output(columns=["z_over_a", f"rho2_R_{spec.units.value}"],
                      rows=[[r.inputs["z"] / a.a, r.value] for r in res],
                      record={"inputs": {"a": a.a, "image_sum": a.image_sum}, "units": spec.units.value})
    printed = boundaries.parallel_plates_closed(spec, a.a, a.z)
    if not a.image_sum:
        return Output(_geometry_record(spec, printed))
    img = boundaries.parallel_plates_image_sum(spec, a.a, a.z, a.nmax)
    oracle = {"method": "image_sum", "value": img.value, "coefficient": img.coefficient,
              "n_max": a.nmax, "tail_bound": img.metadata["tail_bound"]}
    if "warning" in img.metadata:
        oracle["warning"] = img.metadata["warning"]
    return Output(_geometry_record(spec, printed, printed_value=printed.value, oracle=oracle,
                                   discrepancy_ratio=_ratio(img.value, printed.value)))


def cmd_torus(spec, a) -> Output:
    res = boundaries.torus(spec, a.L1, a.L2, a.L3, tol=a.tol)
    extra = {}
    if a.oracle:
        sh = boundaries.torus_shell_oracle(spec, a.L1, a.L2, a.L3, radius=a.radius)
        extra = {"oracle": {"method": "shells", "value": sh.value, "error_bound": sh.metadata["error_bound"],
                            "radius": a.radius},
                 "discrepancy_ratio": _ratio(res.value, sh.value)}
    return Output(_geometry_record(spec, res, **extra))


def _point_split_extra(spec, value, geometry, alpha, r, theta=None) -> dict:
    ps = boundaries.point_split_oracle(spec, geometry, alpha, r, theta)
    return {"oracle": {"method": "point_split", "value": ps.value, "error_estimate": ps.error_estimate,
                       "deltas": ps.inputs["deltas"]},
            "discrepancy_ratio": _ratio(value, ps.value)}


def cmd_wedge(spec, a) -> Output:
    res = boundaries.wedge(spec, a.alpha, a.r, a.theta)
    extra = _point_split_extra(spec, res.value, "wedge", a.alpha, a.r, a.theta) if a.oracle else {}
    return Output(_geometry_record(spec, res, **extra))


def cmd_string(spec, a) -> Output:
    res = boundaries.cosmic_string(spec, a.alpha, a.r)
    extra = _point_split_extra(spec, res.value, "string", a.alpha, a.r) if a.oracle else {}
    return Output(_geometry_record(spec, res, **extra))


def cmd_parabola_rho2(spec, a) -> Output:
    cfg = parabola.MirrorConfig(a=a.a, b=a.b, theta0=a.theta0)
    return Output(_geometry_record(spec, parabola.rho2_focus(spec, cfg, cylinder=a.cylinder)))


def cmd_parabola_rays(spec, a) -> Output:
    cfg = parabola.MirrorConfig(a=a.a, b=a.b, gamma=a.gamma, theta0=a.theta0)
    pair = parabola.ray_pair(cfg, a.alpha)
    unit = parabola.path_difference(1.0, cfg.gamma, pair.alpha, pair.beta)[2]
    inputs = {"a": a.a, "b": a.b, "gamma": a.gamma, "alpha": a.alpha, "theta0": a.theta0}
    return Output(_record(spec, unit * a.a, unit, a.a, inputs, alpha=pair.alpha, beta=pair.beta,
                          theta=pair.theta, dl1=pair.dl1, dl2=pair.dl2, dl=pair.dl,
                          conjugacy_residual=pair.residual))


def cmd_parabola_gcurve(spec, a) -> Output:
    th, g = parabola.gcurve(a.n)
    return Output(columns=["theta0_rad", "g"], rows=[[float(t), float(v)] for t, v in zip(th, g)],
                  record={"inputs": {"n": a.n}})


def cmd_scattering(_spec, a) -> Output:
    mat, spec = scattering.load_material(a.material)
    if a.temperature is not None:
        mat = scattering.MaterialOptics(eta=mat.eta, depsdrho=mat.depsdrho, T=a.temperature, name=mat.name)
    omega = scattering.omega_from_wavelength(spec, a.lambda_nm * 1e-9)
    kin = scattering.ScatteringKinematics(omega=omega, theta=a.theta, volume=a.volume, pol_dot=a.pol_dot)
    coef, scale = scattering.zp_cross_section_terms(spec, mat, kin)
    Omega_q = scattering.phonon_frequency(spec, mat, kin)
    inputs = {"material": mat.name, "lambda_nm": a.lambda_nm, "theta": a.theta, "T": mat.T,
              "volume": a.volume, "pol_dot": a.pol_dot}
    extra = {"dsigma_zp": coef * scale, "Omega_q": Omega_q, "R": scattering.thermal_ratio(spec, mat, kin)}
    if Omega_q > 0.0:
        extra["stokes_factor"] = scattering.stokes_factor(spec, Omega_q, mat.T)
        extra["total_factor"] = scattering.total_factor(spec, Omega_q, mat.T)
    else:
        extra["stokes_factor"] = None
    return Output(_record(spec, coef * scale, coef, scale, inputs, material=scattering.material_to_mapping(mat, spec),
                          **extra))


# parser ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=argparse.SUPPRESS, help="fluid spec JSON file")
    p.add_argument("--output", choices=["json", "csv"], default=argparse.SUPPRESS)
    p.add_argument("--out", default=argparse.SUPPRESS, help="write to this file instead of stdout")
    p.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="phonon-casimir", description="Quantum density fluctuations of a phonon fluid.",
                parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True, metavar="SUBCOMMAND")

    def add(name, func, help_text, parent=sub):
        sp = parent.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(func=func)
        return sp

    s = add("freespace", cmd_freespace, "free-space density correlation")
    s.add_argument("--dx", type=float, required=True)
    s.add_argument("--dt", type=float, default=0.0)
    s.add_argument("--variant", choices=["standard", "printed"], default="standard")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--epsilon", type=float, help="evaluate the regulated mode integral at this cutoff")
    g.add_argument("--oracle", action="store_true", help="extrapolate the mode integral to zero cutoff")

    s = add("squeezed", cmd_squeezed, "single-mode squeezed vacuum")
    for name in ("--r", "--k", "--V"):
        s.add_argument(name, type=float, required=True)
    s.add_argument("--delta", type=float, default=0.0)
    s.add_argument("--omega", type=float, help="defaults to cS k")
    s.add_argument("--z", type=float, default=0.0)
    s.add_argument("--t", type=float, default=0.0)
    s.add_argument("--profile", type=int, metavar="N")

    s = add("plate", cmd_plate, "single Neumann plate")
    s.add_argument("--z", type=float, required=True)

    s = add("plates", cmd_plates, "two parallel plates")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--z", type=float)
    s.add_argument("--image-sum", action="store_true")
    s.add_argument("--nmax", type=int, default=2000)
    s.add_argument("--profile", type=int, metavar="N")

    s = add("torus", cmd_torus, "periodic box")
    for name in ("--L1", "--L2", "--L3"):
        s.add_argument(name, type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--oracle", action="store_true", help="also run the brute-force shell sum")
    s.add_argument("--radius", type=float, default=60.0)

    s = add("wedge", cmd_wedge, "wedge of two Neumann planes")
    for name in ("--alpha", "--r", "--theta"):
        s.add_argument(name, type=float, required=True)
    s.add_argument("--oracle", action="store_true", help="run the point-split oracle")

    s = add("string", cmd_string, "cosmic-string cone")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--oracle", action="store_true", help="run the point-split oracle")

    par = sub.add_parser("parabola", help="focus of a parabolic mirror", parents=[common])
    psub = par.add_subparsers(dest="parabola_command", parser_class=_Parser, required=True, metavar="KIND")
    s = add("rho2", cmd_parabola_rho2, "<rho^2>_R at gamma = pi/2", psub)
    for name in ("--a", "--b", "--theta0"):
        s.add_argument(name, type=float, required=True)
    s.add_argument("--cylinder", action="store_true")
    s = add("rays", cmd_parabola_rays, "conjugate ray pair and path difference", psub)
    for name in ("--gamma", "--alpha", "--theta0", "--a"):
        s.add_argument(name, type=float, required=True)
    s.add_argument("--b", type=float, default=1.0)
    s = add("gcurve", cmd_parabola_gcurve, "tabulate g(theta0)", psub)
    s.add_argument("--n", type=int, required=True)

    s = add("scattering", cmd_scattering, "zero-point Brillouin scattering")
    s.add_argument("--material", required=True, help="preset name or materials JSON file")
    s.add_argument("--lambda-nm", type=float, required=True)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--temperature", type=float)
    s.add_argument("--volume", type=float, default=1.0)
    s.add_argument("--pol-dot", type=float, default=1.0)
    return p


# serialization ---------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return "" if x is None else str(x)


def render(out: Output, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if out.columns:
            w.writerow(out.columns)
            w.writerows([[_fmt(v) for v in row] for row in out.rows])
        else:
            flat = {k: v for k, v in out.record.items() if not isinstance(v, (dict, list))}
            w.writerow(list(flat))
            w.writerow([_fmt(v) for v in flat.values()])
        return buf.getvalue()
    if out.columns:
        doc = dict(out.record or {})
        doc.update(columns=out.columns, rows=out.rows)
    else:
        doc = out.record
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _resolve_fluid(config: str | None) -> FluidSpec:
    path = config or os.environ.get(CONFIG_ENV)
    return load_fluid_spec(path) if path else NATURAL


def _validate(a: argparse.Namespace) -> None:
    if a.command == "plates" and a.profile is None and a.z is None:
        raise UsageError("plates: --z is required unless --profile is given")


def dispatch(request: RunRequest) -> str:
    out = request.args.func(request.fluid, request.args)
    fmt = request.output or ("csv" if out.columns else "json")
    return render(out, fmt)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except UsageError as exc:
        sys.stderr.write(str(exc) + ("" if str(exc).endswith("\n") else "\n"))
        return EXIT_USAGE
    verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    start = time.perf_counter()
    try:
        fluid = _resolve_fluid(getattr(args, "config", None))
        req = RunRequest(command=args.command, args=args, fluid=fluid,
                         output=getattr(args, "output", None), out_path=getattr(args, "out", None))
        text = dispatch(req)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG_MISSING if exc.missing else EXIT_CONFIG_MALFORMED
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        sys.stderr.write(f"convergence error: {exc}\n")
        return EXIT_CONVERGENCE
    if req.out_path:
        with open(req.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - start)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
