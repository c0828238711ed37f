"""Line-oriented potential config files.

Format::

    # comment
    period_left  <L> [phase_origin]
    seg <width> <value>          # one or more, cover the left period
    period_right <L> [phase_origin]
    seg <width> <value>
    core <breakpoint> <value>    # one or more, first must equal x_min
    window <x_min> <x_max>

``period <L> [phase]`` declares one tail used on both sides.  ``seg`` lines
attach to the most recent ``period*`` header.  A profile with no ``core``
lines is taken to be purely periodic over the window.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ConfigError
from .potential import PeriodicPotential, PotentialProfile


def _floats(parts: list[str], n_min: int, n_max: int, lineno: int) -> list[float]:
    if not n_min <= len(parts) <= n_max:
        want = str(n_min) if n_min == n_max else f"{n_min}-{n_max}"
        raise ConfigError(f"expected {want} numeric fields, got {len(parts)}", lineno)
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad number: {exc}", lineno) from None


def _build_tail(spec, name: str) -> PeriodicPotential:
    L, phase, segs, lineno = spec
    if not segs:
        raise ConfigError(f"{name} declares no seg lines", lineno)
    total = sum(w for w, _, _ in segs)
    if abs(total - L) > 1e-12 * L:
        # report the first segment that overruns, or the header if short
        acc = 0.0
        for w, _, ln in segs:
            acc += w
            if acc > L * (1 + 1e-12):
                raise ConfigError(f"segments overlap the next period (sum {acc!r} > {L!r})", ln)
        raise ConfigError(f"segments leave [{total!r}, {L!r}) uncovered", lineno)
    for w, _, ln in segs:
        if w <= 0:
            raise ConfigError("segment width must be positive", ln)
    return PeriodicPotential(L, tuple((w, v) for w, v, _ in segs), phase)


def parse_potential(text: str) -> PotentialProfile:
    tails: dict[str, list] = {}
    current: str | None = None
    core: list[tuple[float, float, int]] = []
    window: tuple[float, float, int] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key in ("period", "period_left", "period_right"):
            L, *ph = _floats(rest, 1, 2, lineno)
            if L <= 0:
                raise ConfigError("period must be positive", lineno)
            if key in tails or (key == "period" and tails) or ("period" in tails):
                raise ConfigError(f"duplicate period declaration {key!r}", lineno)
            tails[key] = [L, ph[0] if ph else 0.0, [], lineno]
            current = key
        elif key == "seg":
            if current is None:
                raise ConfigError("seg line before any period header", lineno)
            w, v = _floats(rest, 2, 2, lineno)
            if w <= 0:
                raise ConfigError("segment width must be positive", lineno)
            tails[current][2].append((w, v, lineno))
        elif key == "core":
            b, v = _floats(rest, 2, 2, lineno)
            if core and b <= core[-1][0]:
                raise ConfigError("core breakpoints must be strictly increasing", lineno)
            core.append((b, v, lineno))
        elif key == "window":
            if window is not None:
                raise ConfigError("duplicate window line", lineno)
            lo, hi = _floats(rest, 2, 2, lineno)
            if not lo < hi:
                raise ConfigError("window needs x_min < x_max", lineno)
            window = (lo, hi, lineno)
        else:
            raise ConfigError(f"unknown directive {key!r}", lineno)

    if "period" in tails:
        left = right = _build_tail(tails["period"], "period")
    else:
        for name in ("period_left", "period_right"):
            if name not in tails:
                raise ConfigError(f"missing {name} header")
        left = _build_tail(tails["period_left"], "period_left")
        right = _build_tail(tails["period_right"], "period_right")

    if window is None:
        if core:
            raise ConfigError("core lines need a window line", core[0][2])
        if left != right:
            raise ConfigError("distinct left and right tails need a window line")
        return PotentialProfile.from_tail(left)

    lo, hi, wline = window
    if not core:
        return PotentialProfile(left, right,
                                tuple((p[0], p[2]) for p in left.pieces(lo, hi)), lo, hi)
    if abs(core[0][0] - lo) > 1e-12 * max(1.0, abs(lo)):
        raise ConfigError(f"core leaves [{lo!r}, {core[0][0]!r}) uncovered", core[0][2])
    for b, _, ln in core:
        if b >= hi:
            raise ConfigError("core breakpoint outside the window", ln)
    return PotentialProfile(left, right, tuple((b, v) for b, v, _ in core), lo, hi)


def load_potential(path: str | Path) -> PotentialProfile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_potential(text)
