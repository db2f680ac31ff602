"""Thin command-line client for the cbspair service.

By default the commands run against the service in-process (no network); with
``--server URL`` they target a running instance instead.  Curves land in CSV
files with a JSON sidecar of scalar summaries next to them; ``verify`` writes
the machine-readable oracle report.  Outputs are byte-identical for identical
configuration and seed.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric non-convergence or transport failure.
"""

from __future__ import annotations

import argparse
import asyncio
import hashlib
import json
import sys
from pathlib import Path

import httpx
from pydantic import ValidationError

from .service.schemas import (
    ConeRequest,
    EnhancementRequest,
    SpectrumRequest,
    VerifyRequest,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# Keys accepted in the per-command config sections (strict); the common
# section may carry any of these plus shared extras and is filtered.
_SECTION_KEYS = {
    "spectrum": {"deltas", "s", "n_points", "half_width", "out"},
    "enhancement": {"s0_values", "delta", "out"},
    "cone": {
        "delta", "s", "r12_wavelengths", "r12_in_wavelengths", "r_perp_frac",
        "omega_d_offset", "n_theta", "theta_span_periods", "mode",
        "gamma_over_omega", "tol", "out",
    },
    "verify": {"seed", "zero_tolerance", "out"},
}
_ALIASES = {"r12_in_wavelengths": "r12_wavelengths"}


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config root must be an object of sections")
    return config


def _merge(config: dict, command: str, overrides: dict) -> dict:
    allowed = _SECTION_KEYS[command]
    merged: dict = {}
    common = config.get("common", {})
    if not isinstance(common, dict):
        raise ConfigError("config section 'common' must be an object")
    for key, value in common.items():
        key = _ALIASES.get(key, key)
        if key in allowed:
            merged[key] = value
    section = config.get(command, {})
    if not isinstance(section, dict):
        raise ConfigError(f"config section '{command}' must be an object")
    for key, value in section.items():
        key = _ALIASES.get(key, key)
        if key not in allowed:
            raise ConfigError(f"unknown config key '{key}' in section '{command}'")
        merged[key] = value
    for key, value in overrides.items():
        if value is not None:
            merged[_ALIASES.get(key, key)] = value
    return merged


def _config_hash(command: str, payload: dict) -> str:
    canon = json.dumps({"command": command, "request": payload},
                       sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


async def _post_in_process(path: str, payload: dict) -> httpx.Response:
    from .service.app import app  # deferred: pulls in the physics stack

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport,
                                 base_url="http://cbspair.internal",
                                 timeout=None) as client:
        return await client.post(path, json=payload)


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server is None:
        return asyncio.run(_post_in_process(path, payload))
    with httpx.Client(base_url=server, timeout=600.0) as client:
        return client.post(path, json=payload)


def _fail_from_response(response: httpx.Response) -> int:
    try:
        body = response.json()
    except ValueError:
        body = {"detail": response.text}
    if response.status_code == 422:
        fields = ", ".join(
            ".".join(str(p) for p in err.get("loc", [])) + ": " + err.get("msg", "")
            for err in body.get("detail", [])
        )
        print(f"config error: {fields}", file=sys.stderr)
        return EXIT_CONFIG
    kind = body.get("kind", "numeric" if response.status_code >= 500 else "config")
    print(f"{kind} error: {body.get('detail', response.text)}", file=sys.stderr)
    return EXIT_CONFIG if kind == "config" else EXIT_NUMERIC


def _write_csv(path: Path, comment: str, header: list[str], rows) -> None:
    lines = [f"# {comment}", ",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def _validated(model, merged: dict, out_default: str):
    out = Path(merged.pop("out", out_default))
    try:
        request = model(**merged)
    except ValidationError as exc:
        fields = "; ".join(
            ".".join(str(p) for p in err["loc"]) + ": " + err["msg"] for err in exc.errors()
        )
        raise ConfigError(fields) from exc
    return request, out


def _cmd_spectrum(args, config: dict) -> int:
    merged = _merge(config, "spectrum", {
        "deltas": args.delta, "s": args.s,
        "n_points": args.n_points, "half_width": args.half_width, "out": args.out,
    })
    request, out = _validated(SpectrumRequest, merged, "spectrum.csv")
    payload = request.model_dump()
    response = _post(args.server, "/spectrum", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    data = response.json()
    h = _config_hash("spectrum", payload)
    rows = []
    for curve in data["curves"]:
        rows.extend(
            (curve["delta"], omega, density)
            for omega, density in zip(curve["omega"], curve["density"])
        )
    _write_csv(
        out,
        f"config_hash={h} units=omega_in_gamma,density_per_gamma_in_eta",
        ["delta", "omega_minus_omegaL_in_Gamma", "P_in_per_eta"],
        rows,
    )
    _write_json(_sidecar(out), {
        "command": "spectrum",
        "config_hash": h,
        "s": data["s"],
        "per_delta": [
            {k: curve[k] for k in ("delta", "fwhm", "peaks", "peak_widths", "norm", "captured")}
            for curve in data["curves"]
        ],
    })
    print(f"wrote {out} and {_sidecar(out)}")
    return EXIT_OK


def _cmd_enhancement(args, config: dict) -> int:
    merged = _merge(config, "enhancement", {
        "s0_values": args.s0, "delta": args.delta, "out": args.out,
    })
    request, out = _validated(EnhancementRequest, merged, "enhancement.csv")
    payload = request.model_dump()
    response = _post(args.server, "/enhancement", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    data = response.json()
    h = _config_hash("enhancement", payload)
    _write_csv(
        out,
        f"config_hash={h} units=dimensionless",
        ["s0", "alpha_exact", "alpha_large_detuning", "alpha_linear"],
        [(r["s0"], r["alpha_exact"], r["alpha_large_detuning"], r["alpha_linear"])
         for r in data["rows"]],
    )
    _write_json(_sidecar(out), {
        "command": "enhancement",
        "config_hash": h,
        "delta": data["delta"],
        "slope_at_zero": data["slope_at_zero"],
    })
    print(f"wrote {out} and {_sidecar(out)}")
    return EXIT_OK


def _cmd_cone(args, config: dict) -> int:
    merged = _merge(config, "cone", {
        "delta": args.delta, "s": args.s,
        "r12_in_wavelengths": args.r12_in_wavelengths,
        "r_perp_frac": args.r_perp_frac, "omega_d_offset": args.omega_d_offset,
        "n_theta": args.n_theta, "theta_span_periods": args.theta_span_periods,
        "mode": args.mode, "gamma_over_omega": args.gamma_over_omega,
        "tol": args.tol, "out": args.out,
    })
    request, out = _validated(ConeRequest, merged, "cone.csv")
    payload = request.model_dump()
    response = _post(args.server, "/cone", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    data = response.json()
    h = _config_hash("cone", payload)
    _write_csv(
        out,
        f"config_hash={h} units=theta_rad,fixed_max_normalized_to_1,averaged_in_eta_tilde",
        ["theta", "I_fixed", "I_avg_omega", "I_avg_omega_and_positions"],
        zip(data["theta"], data["i_fixed"], data["i_avg_omega"],
            data["i_avg_omega_and_positions"]),
    )
    meta = {k: data[k] for k in (
        "i_one", "i_two", "gamma", "phase", "l_in", "c_in", "fringe_amplitude",
        "k_r12", "kr_perp", "first_zero", "cone_angle", "fixed_scale",
    )}
    _write_json(_sidecar(out), {"command": "cone", "config_hash": h, **meta})
    print(f"wrote {out} and {_sidecar(out)}")
    return EXIT_OK


def _cmd_verify(args, config: dict) -> int:
    merged = _merge(config, "verify", {
        "seed": args.seed, "zero_tolerance": args.zero_tolerance or None,
        "out": args.out,
    })
    request, out = _validated(VerifyRequest, merged, "verify_report.json")
    payload = request.model_dump()
    response = _post(args.server, "/verify", payload)
    if response.status_code != 200:
        return _fail_from_response(response)
    report = response.json()
    report["config_hash"] = _config_hash("verify", payload)
    _write_json(out, report)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{check['id']} {status} {check['name']}")
    print(f"wrote {out}")
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def _cmd_serve(args, config: dict) -> int:
    import uvicorn

    uvicorn.run("cbspair.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbspair",
        description="Curves and verification for double scattering of a weak "
                    "laser by two distant two-level atoms.",
    )
    parser.add_argument("--config", help="JSON config file with common and per-command sections")
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="inelastic emission spectrum CSV + sidecar")
    p.add_argument("--delta", type=_float_list, help="comma-separated detunings in gamma units")
    p.add_argument("--s", type=float, help="saturation parameter")
    p.add_argument("--n-points", type=int, dest="n_points")
    p.add_argument("--half-width", type=float, dest="half_width")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("enhancement", help="enhancement factor vs incident intensity")
    p.add_argument("--s0", type=_float_list, help="comma-separated on-resonance saturations")
    p.add_argument("--delta", type=float, help="detuning for the exact column")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_enhancement)

    p = sub.add_parser("cone", help="angular interference patterns at the three averaging stages")
    p.add_argument("--delta", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--r12-in-wavelengths", type=float, dest="r12_in_wavelengths")
    p.add_argument("--r-perp-frac", type=float, dest="r_perp_frac")
    p.add_argument("--omega-d-offset", type=float, dest="omega_d_offset")
    p.add_argument("--n-theta", type=int, dest="n_theta")
    p.add_argument("--theta-span-periods", type=float, dest="theta_span_periods")
    p.add_argument("--mode", choices=["phase-neglect", "exact-phase"])
    p.add_argument("--gamma-over-omega", type=float, dest="gamma_over_omega")
    p.add_argument("--tol", type=float, help="quadrature tolerance for the spectrum average")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cone)

    p = sub.add_parser("verify", help="run the oracle suite, write the JSON report")
    p.add_argument("--seed", type=int)
    p.add_argument("--zero-tolerance", action="store_true", dest="zero_tolerance",
                   help="reporter self-test: force all tolerances to zero")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except httpx.HTTPError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
