import csv
import io
import math
from pathlib import Path

import pytest

from lowkgreen.cli import RunConfig, main, remainder_slope, run
from lowkgreen.errors import DomainError
from lowkgreen.examples import Example1Params
from lowkgreen.scattering import band_edges

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
EX1, EX2, FREE = (str(CONFIGS / n) for n in ("example1.pot", "example2.pot", "free.pot"))


def parse(text):
    meta = [l[2:] for l in text.splitlines() if l.startswith("# ")]
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    return meta, list(csv.DictReader(io.StringIO(body)))


def test_deterministic_output():
    cfg = RunConfig("exact", EX1, 0.4, 0.1, 0.1, 3.0, 25)
    assert run(cfg) == run(cfg)


def test_bands_example1():
    _, rows = parse(run(RunConfig("bands", EX1, k_max=7.0)))
    edges = [float(r["k_edge"]) for r in rows]
    assert edges == pytest.approx([2.21, 4.02, 5.77, 6.88], abs=0.01)


def test_expand_free():
    _, rows = parse(run(RunConfig("expand", FREE, 0.5, 0.1)))
    g = {int(r["order"]): float(r["g"]) for r in rows}
    assert g[-1] == 0.5
    assert g[0] == pytest.approx(0.2, rel=1e-15)
    assert g[2] == pytest.approx(0.4 ** 3 / 12, rel=1e-14)


def test_generic_example2():
    meta, rows = parse(run(RunConfig("generic", EX2, 0.4, 0.1)))
    vals = {r["quantity"]: float(r["value"]) for r in rows}
    assert "kind=schrodinger" in meta[0]
    assert vals["E0"] == pytest.approx(0.3952, abs=5e-5)
    assert vals["g0"] == pytest.approx(-3.28, abs=0.005)
    assert vals["g1"] == pytest.approx(-21.85, abs=0.005)
    assert "g2" in vals


def test_exact_flags_band_edge():
    e = band_edges(Example1Params().tail(), 3.0)[0]
    _, rows = parse(run(RunConfig("exact", EX1, 0.4, 0.1, e - 1e-12, e + 1e-12, 3)))
    assert all(r["warnings"] == "near band edge" for r in rows)
    _, rows = parse(run(RunConfig("exact", EX1, 0.4, 0.1, 0.5, 1.5, 5)))
    assert all(r["warnings"] == "" for r in rows)


def test_exact_schrodinger_gap_is_real():
    _, rows = parse(run(RunConfig("exact", EX2, 0.4, 0.1, 3.10, 3.18, 5, kind="schrodinger")))
    for r in rows:
        assert abs(float(r["im_G"])) < 1e-6


def test_compare_slope():
    meta, rows = parse(run(RunConfig("compare", EX1, 0.4, 0.1, 1e-3, 0.1, 15)))
    slope = float(next(m for m in meta if m.startswith("loglog_slope=")).split("=")[1])
    assert slope == pytest.approx(3.0, abs=0.05)
    assert len(rows) == 15


def test_remainder_slope_helper():
    ks = [0.1, 0.01, 0.001]
    assert remainder_slope(ks, [k ** 2 for k in ks]) == pytest.approx(2.0, rel=1e-12)
    assert math.isnan(remainder_slope([0.1], [1.0]))


@pytest.mark.parametrize("cfg", [
    RunConfig("nope", EX1, 0.1, 0.0),
    RunConfig("expand", EX1),
    RunConfig("expand", EX1, 0.1, 0.4),
    RunConfig("exact", EX1, 0.4, 0.1, 2.0, 1.0),
    RunConfig("exact", EX1, 0.4, 0.1, k_steps=1),
    RunConfig("compare", EX1, 0.4, 0.1, k_min=0.0),
    RunConfig("expand", EX1, 0.4, 0.1, order=3),
    RunConfig("generic", EX2, 0.4, 0.1, order=-1),
    RunConfig("bands", EX1, kind="other"),
])
def test_validation(cfg):
    with pytest.raises(DomainError):
        cfg.validate()


def test_main_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.pot"
    bad.write_text("period 1.0\nseg 0.5 0.0\nseg oops 1.0\n")
    assert main(["--command", "bands", "--potential", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["--command", "expand", "--potential", EX1, "--x", "0.1", "--y", "0.4"]) == 1
    out = tmp_path / "g.csv"
    assert main(["--command", "generic", "--potential", EX2, "--x", "0.4", "--y", "0.1",
                 "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().startswith("# command=generic")
