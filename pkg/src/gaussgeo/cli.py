"""Command-line interface: ``gaussgeo {classify,cj,volumes,regions,overlap}``.

Exit codes: 0 success, 2 usage or validation error, 3 precondition violation.
Tabular output is CSV preceded by one ``#`` comment line naming the tool,
version and schema; ``--json`` emits the same records as JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .channels import GaussianChannel, classify_one_mode, det_invariants, inequality_residuals
from .choi import CJState, ReferenceMarginal, channel_to_cj, cj_to_channel
from .errors import PreconditionError, ValidationError
from .geometry import purity_seralian
from .regions import RegionLabel, region_grid
from .symplectic import GaussianState, hs_overlap
from .volumes import (
    QuadratureConfig,
    montecarlo_volumes,
    v_ebc_analytic,
    v_gc_analytic,
    v_icbc_analytic,
    volume_quadrature,
)

SCHEMA_VERSION = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return None if math.isnan(x) else x


def render(kind: str, columns: list[str], rows: list[list], as_json: bool) -> str:
    if as_json:
        doc = {
            "tool": "gaussgeo",
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "kind": kind,
            "columns": columns,
            "records": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    lines = [f"# gaussgeo {__version__} {kind} schema={SCHEMA_VERSION}", ",".join(columns)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_output(text: str, path: str | None) -> None:
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gaussgeo-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def real_list(count: int):
    def parse(text: str) -> np.ndarray:
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated reals, got {text!r}")
        if len(values) != count or not all(math.isfinite(v) for v in values):
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated finite reals, got {text!r}")
        return np.array(values)

    return parse


def sweep(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like lo:hi:n, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("sweep needs n >= 1")
    return np.linspace(lo, hi, n)


def _channel(args) -> GaussianChannel:
    return GaussianChannel(args.M.reshape(2, 2), args.N.reshape(2, 2), args.c)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_classify(args) -> int:
    ch = _channel(args)
    det_m, det_n = det_invariants(ch)
    res_cp, res_eb, res_icb = (float(r) for r in inequality_residuals(det_m, det_n))
    cls = classify_one_mode(ch)
    cols = ["det_M", "det_N", "class", "residual_CP", "residual_EB", "residual_ICB"]
    row = [det_m, det_n, cls.name, res_cp, res_eb, res_icb]
    if args.json:
        sys.stdout.write(render("classify", cols, [row], True))
    else:
        for c, v in zip(cols, row):
            print(f"{c}: {fmt(v)}")
    return 0


def _ps_fields(sigma) -> dict:
    ps = purity_seralian(sigma)
    return {"mu_A": ps.mu_a, "mu_sigma": ps.mu_sigma, "mu": ps.mu, "Delta": ps.delta}


def cmd_cj(args) -> int:
    if args.direction == "to":
        if args.M is None or args.N is None:
            raise ValidationError("cj to needs --M and --N")
        if args.nu_sigma is None:
            raise ValidationError("cj to needs --nu-sigma")
        if not args.nu_sigma > 1.0:
            raise PreconditionError(
                f"--nu-sigma must exceed 1: the reference marginal needs full symplectic rank, got {args.nu_sigma}"
            )
        cj = channel_to_cj(_channel(args), ReferenceMarginal.thermal(args.nu_sigma))
        out = {"sigma": cj.sigma.ravel(), "ell": cj.ell, **_ps_fields(cj.sigma)}
    else:
        if args.sigma is None:
            raise ValidationError("cj from needs --sigma (16 reals, row-major)")
        ell = np.zeros(4) if args.ell is None else args.ell
        cj = CJState.from_arrays(args.sigma.reshape(4, 4), ell)
        ch = cj_to_channel(cj)
        out = {"M": ch.M.ravel(), "N": ch.N.ravel(), "c": ch.c, **_ps_fields(cj.sigma)}
    if args.json:
        doc = {
            k: ([float(x) for x in v] if isinstance(v, np.ndarray) else float(v)) for k, v in out.items()
        }
        doc = {"tool": "gaussgeo", "version": __version__, "schema": SCHEMA_VERSION, "kind": f"cj-{args.direction}", **doc}
        sys.stdout.write(json.dumps(doc, indent=1) + "\n")
    else:
        for k, v in out.items():
            text = ",".join(fmt(x) for x in v) if isinstance(v, np.ndarray) else fmt(v)
            print(f"{k}: {text}")
    return 0


VOLUME_COLUMNS = ["mu_sigma", "V_GC", "V_EBC", "V_ICBC", "ratio_EB", "ratio_ICB", "method", "err_est"]


def volume_rows(grid, method: str, tol: float, samples: int, seed: int) -> list[list]:
    rows = []
    for ms in grid:
        ms = float(ms)
        if method == "analytic":
            v = [v_gc_analytic(ms), v_ebc_analytic(ms), v_icbc_analytic(ms)]
            err = 0.0
        elif method == "quadrature":
            cfg = QuadratureConfig(rel_tol=tol)
            res = [volume_quadrature(r, ms, cfg) for r in ("CP", "SEP", "NS")]
            v = [r.value for r in res]
            err = max(r.error_estimate for r in res)
        else:
            est = montecarlo_volumes(ms, samples, seed)
            v = list(est.volumes)
            err = float(np.max(est.std_errors))
        rows.append([ms, v[0], v[1], v[2], v[1] / v[0], v[2] / v[0], method, err])
    return rows


def cmd_volumes(args) -> int:
    if (args.mu_sigma is None) == (args.sweep is None):
        raise ValidationError("give exactly one of --mu-sigma or --sweep")
    grid = np.array([args.mu_sigma]) if args.mu_sigma is not None else args.sweep
    if not np.all((grid > 0) & (grid < 1)):
        raise ValidationError("mu_sigma must lie in the open interval (0, 1)")
    if args.samples < 1000:
        raise ValidationError("--samples must be at least 1000")
    rows = volume_rows(grid, args.method, args.tol, args.samples, args.seed)
    write_output(render("volumes", VOLUME_COLUMNS, rows, args.json), args.out)
    return 0


REGION_COLUMNS = ["mu_sigma", "mu", "mu_A", "label", "entangled_fraction", "nonsteerable"]


def region_rows(mu_sigmas, n: int) -> list[list]:
    rows = []
    for ms in mu_sigmas:
        g = region_grid(float(ms), n)
        for mu, ma, lab, frac, ns in zip(g["mu"], g["mu_a"], g["label"], g["entangled_fraction"], g["nonsteerable"]):
            rows.append([float(ms), mu, ma, RegionLabel(int(lab)).name, frac, bool(ns)])
    return rows


def cmd_regions(args) -> int:
    mu_sigmas = args.mu_sigma if args.mu_sigma is not None else [0.2, 0.5, 0.8]
    for ms in mu_sigmas:
        if not 0.0 < ms < 1.0:
            raise ValidationError("mu_sigma must lie in the open interval (0, 1)")
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    rows = region_rows(mu_sigmas, args.grid)
    write_output(render("regions", REGION_COLUMNS, rows, args.json), args.out)
    return 0


def cmd_overlap(args) -> int:
    n = int(round(math.sqrt(args.sigma_a.size)))
    if n * n != args.sigma_a.size or args.sigma_b.size != n * n:
        raise ValidationError("covariance matrices must be square and of equal size")
    ell_a = np.zeros(n) if args.ell_a is None else args.ell_a
    ell_b = np.zeros(n) if args.ell_b is None else args.ell_b
    value = hs_overlap(GaussianState(args.sigma_a.reshape(n, n), ell_a), GaussianState(args.sigma_b.reshape(n, n), ell_b))
    if args.json:
        sys.stdout.write(render("overlap", ["overlap"], [[value]], True))
    else:
        print(f"overlap: {fmt(value)}")
    return 0


def _reals(text: str) -> np.ndarray:
    try:
        values = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    if not np.all(np.isfinite(values)):
        raise argparse.ArgumentTypeError("values must be finite")
    return values


def _mu_list(text: str) -> list[float]:
    return [float(v) for v in _reals(text)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaussgeo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gaussgeo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def channel_args(sp, required: bool):
        sp.add_argument("--M", type=real_list(4), required=required, help="M row-major, 4 reals")
        sp.add_argument("--N", type=real_list(4), required=required, help="N row-major, 4 reals")
        sp.add_argument("--c", type=real_list(2), default=np.zeros(2), help="displacement c, 2 reals")

    sp = sub.add_parser("classify", help="classify a one-mode channel by det M and det N")
    channel_args(sp, True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("cj", help="Choi-Jamiolkowski conversion")
    sp.add_argument("direction", choices=["to", "from"])
    channel_args(sp, False)
    sp.add_argument("--nu-sigma", type=float, help="symplectic eigenvalue of the thermal reference (> 1)")
    sp.add_argument("--sigma", type=real_list(16), help="two-mode CJ covariance, 16 reals row-major")
    sp.add_argument("--ell", type=real_list(4), help="two-mode CJ displacement, 4 reals")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_cj)

    sp = sub.add_parser("volumes", help="channel-class volumes and ratios as a function of mu_sigma")
    sp.add_argument("--mu-sigma", type=float)
    sp.add_argument("--sweep", type=sweep, help="lo:hi:n grid of mu_sigma values")
    sp.add_argument("--method", choices=["analytic", "quadrature", "mc"], default="analytic")
    sp.add_argument("--tol", type=float, default=1e-7, help="relative tolerance for quadrature")
    sp.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample count")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_volumes)

    sp = sub.add_parser("regions", help="labelled (mu, mu_A) grids at fixed mu_sigma")
    sp.add_argument("--mu-sigma", type=_mu_list, help="comma-separated marginal purities (default 0.2,0.5,0.8)")
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--out")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_regions)

    sp = sub.add_parser("overlap", help="Hilbert-Schmidt overlap Tr[rho_a rho_b]")
    sp.add_argument("--sigma-a", type=_reals, required=True)
    sp.add_argument("--ell-a", type=_reals)
    sp.add_argument("--sigma-b", type=_reals, required=True)
    sp.add_argument("--ell-b", type=_reals)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_overlap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"gaussgeo {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"gaussgeo {args.command}: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
