"""Command-line front end: expansions, exact sweeps, band edges, comparisons.

Every command writes CSV.  Lines starting with ``#`` carry run metadata;
the first other line is the header.  Floats use 17 significant digits so
that identical inputs give byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, LowKError
from .config import load_potential
from .expansion import green_coeffs
from .generic import (generic_green_coeffs, schrodinger_band_edges, schrodinger_green,
                      schrodinger_profile, tail_Y)
from .oracle import RAY
from .scattering import BAND_EDGE_TOL, band_edges, bloch, exact_green

COMMANDS = ("expand", "exact", "compare", "bands", "generic")
REAL_AXIS_EPS = 1e-9


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential_path: str
    x: float | None = None
    y: float | None = None
    k_min: float = 0.01
    k_max: float = 3.0
    k_steps: int = 100
    order: int = 2
    output_path: str | None = None
    kind: str = "fp"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.kind not in ("fp", "schrodinger"):
            raise DomainError("kind must be 'fp' or 'schrodinger'")
        if self.command != "bands":
            if self.x is None or self.y is None:
                raise DomainError(f"{self.command} needs --x and --y")
            if self.x < self.y:
                raise DomainError("need x >= y")
        if self.command in ("exact", "compare", "bands"):
            if not self.k_min < self.k_max:
                raise DomainError("need k_min < k_max")
            if self.command != "bands" and self.k_steps < 2:
                raise DomainError("need k_steps >= 2")
        if self.command == "compare" and self.k_min <= 0:
            raise DomainError("compare sweeps |k| geometrically; need k_min > 0")
        lo = 0 if (self.kind == "schrodinger" or self.command == "generic") else -1
        if self.command in ("expand", "compare", "generic") and not lo <= self.order <= 2:
            raise DomainError(f"order must lie in [{lo}, 2]")


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return "%.17g" % v


def _near_edge_fp(profile, k: complex) -> bool:
    tails = {profile.left_tail, profile.right_tail}
    return any(bloch(t, k).near_band_edge for t in tails)


def _near_edge_s(sprof, k: complex) -> bool:
    raw = sprof.raw
    for t in {raw.left_tail, raw.right_tail}:
        Y = tail_Y(t, sprof.energy_offset + k * k)
        if abs(1 - Y * Y) < BAND_EDGE_TOL:
            return True
    return False


class _Writer:
    def __init__(self, meta: list[str], header: list[str]):
        self.buf = io.StringIO()
        self.meta = list(meta)
        self.header = header
        self.rows: list[list[str]] = []

    def row(self, *vals) -> None:
        self.rows.append([fmt(v) for v in vals])

    def text(self) -> str:
        for m in self.meta:
            self.buf.write(f"# {m}\n")
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return self.buf.getvalue()


def _meta(cfg: RunConfig) -> list[str]:
    kind = "schrodinger" if cfg.command == "generic" else cfg.kind
    parts = [f"command={cfg.command}", f"potential={cfg.potential_path}", f"kind={kind}"]
    if cfg.x is not None:
        parts += [f"x={fmt(cfg.x)}", f"y={fmt(cfg.y)}"]
    return [" ".join(parts)]


def _linspace(cfg: RunConfig) -> list[float]:
    return [float(k) for k in np.linspace(cfg.k_min, cfg.k_max, cfg.k_steps)]


def _cmd_expand(cfg: RunConfig, profile) -> _Writer:
    out = _Writer(_meta(cfg), ["order", "g", "warnings"])
    if cfg.kind == "schrodinger":
        res = generic_green_coeffs(schrodinger_profile(profile), cfg.x, cfg.y, max(cfg.order, 0))
    else:
        res = green_coeffs(profile, cfg.x, cfg.y, cfg.order)
    warn = "; ".join(res.warnings)
    for n in sorted(res.g):
        out.row(n, float(res.g[n]), warn)
    return out


def _cmd_exact(cfg: RunConfig, profile) -> _Writer:
    meta = _meta(cfg) + [f"real k evaluated at k + i*{REAL_AXIS_EPS:g} (limit from above)"]
    out = _Writer(meta, ["k", "re_G", "im_G", "warnings"])
    sprof = schrodinger_profile(profile) if cfg.kind == "schrodinger" else None
    if sprof is not None:
        out.meta.append(f"energy_offset={fmt(sprof.energy_offset)}")
    for k in _linspace(cfg):
        kc = complex(k, REAL_AXIS_EPS)
        warns = []
        try:
            if sprof is None:
                G = exact_green(profile, cfg.x, cfg.y, kc)
                edge = _near_edge_fp(profile, complex(k))
            else:
                G = schrodinger_green(sprof, cfg.x, cfg.y, kc)
                edge = _near_edge_s(sprof, complex(k))
            if edge:
                warns.append("near band edge")
        except LowKError as exc:
            G = complex(math.nan, math.nan)
            warns.append(f"{type(exc).__name__}: {exc}")
        out.row(k, G.real, G.imag, "; ".join(warns))
    return out


def remainder_slope(ks, residuals) -> float:
    """Least-squares slope of log residual against log |k|."""
    pts = [(math.log(k), math.log(r)) for k, r in zip(ks, residuals) if r > 0 and math.isfinite(r)]
    if len(pts) < 2:
        return math.nan
    a = np.array(pts)
    return float(np.polyfit(a[:, 0], a[:, 1], 1)[0])


def _cmd_compare(cfg: RunConfig, profile) -> _Writer:
    if cfg.kind == "schrodinger":
        sprof = schrodinger_profile(profile)
        res = generic_green_coeffs(sprof, cfg.x, cfg.y, cfg.order)

        def exact(k):
            return schrodinger_green(sprof, cfg.x, cfg.y, k)
    else:
        res = green_coeffs(profile, cfg.x, cfg.y, cfg.order)

        def exact(k):
            return exact_green(profile, cfg.x, cfg.y, k)
    mags = [float(v) for v in np.geomspace(cfg.k_min, cfg.k_max, cfg.k_steps)]
    rows, resid = [], []
    for m in mags:
        k = m * RAY
        warns = list(res.warnings)
        try:
            G = exact(k)
        except LowKError as exc:
            G = complex(math.nan, math.nan)
            warns.append(f"{type(exc).__name__}: {exc}")
        S = res.partial_sum(k, cfg.order)
        r = abs(G - S)
        resid.append(r)
        rows.append((m, k.real, k.imag, G.real, G.imag, S.real, S.imag, r, "; ".join(warns)))
    slope = remainder_slope(mags, resid)
    meta = _meta(cfg) + [f"k = |k| exp(i pi/4); partial sum through order {cfg.order}",
                         f"loglog_slope={fmt(slope)}"]
    out = _Writer(meta, ["abs_k", "re_k", "im_k", "re_exact", "im_exact",
                         "re_partial", "im_partial", "residual", "warnings"])
    for r in rows:
        out.row(*r)
    return out


def _cmd_bands(cfg: RunConfig, profile) -> _Writer:
    out = _Writer(_meta(cfg), ["tail", "index", "k_edge", "warnings"])
    tails = [("left", profile.left_tail)]
    if not profile.is_symmetric:
        tails.append(("right", profile.right_tail))
    for name, tail in tails:
        if cfg.kind == "schrodinger":
            sprof = schrodinger_profile(profile)
            edges = schrodinger_band_edges(tail, sprof.energy_offset, cfg.k_max)
        else:
            edges = band_edges(tail, cfg.k_max)
        for i, e in enumerate(e for e in edges if e >= cfg.k_min):
            out.row(name, i + 1, e, "")
    return out


def _cmd_generic(cfg: RunConfig, profile) -> _Writer:
    sprof = schrodinger_profile(profile)
    res = generic_green_coeffs(sprof, cfg.x, cfg.y, cfg.order)
    out = _Writer(_meta(cfg), ["quantity", "value", "warnings"])
    warn = "; ".join(res.warnings)
    out.row("E0", sprof.energy_offset, warn)
    for n in sorted(res.g):
        out.row(f"g{n}", float(res.g[n]), warn)
    return out


_DISPATCH = {"expand": _cmd_expand, "exact": _cmd_exact, "compare": _cmd_compare,
             "bands": _cmd_bands, "generic": _cmd_generic}


def run(cfg: RunConfig) -> str:
    """Execute one command and return the CSV text (also written to
    ``cfg.output_path`` when set)."""
    cfg.validate()
    profile = load_potential(cfg.potential_path)
    text = _DISPATCH[cfg.command](cfg, profile).text()
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowkgreen", description=__doc__.splitlines()[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--potential", required=True, help="potential config file")
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--k-min", type=float, default=0.01)
    p.add_argument("--k-max", type=float, default=3.0)
    p.add_argument("--k-steps", type=int, default=100)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--kind", choices=("fp", "schrodinger"), default="fp",
                   help="interpret the potential as Fokker-Planck V or Schroedinger V_S")
    p.add_argument("--out", help="output CSV (default: stdout)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.potential, args.x, args.y, args.k_min, args.k_max,
                    args.k_steps, args.order, args.out,
                    "schrodinger" if args.command == "generic" else args.kind)
    try:
        text = run(cfg)
    except ConfigError as exc:
        print(f"lowkgreen: {cfg.potential_path}: {exc}", file=sys.stderr)
        return 2
    except LowKError as exc:
        print(f"lowkgreen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if not cfg.output_path:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
