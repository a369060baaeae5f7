"""Secondary acceptance: figures built from real depref CLI output.

The depref command is driven as a subprocess, so this package touches
the primary only through its documented external interface.
"""
import shutil
import subprocess

import pytest

from depref_plots.render import PlotSpec, render

needs_depref = pytest.mark.skipif(
    shutil.which("depref") is None, reason="depref CLI not installed"
)


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "lambda_sweep.csv"
    subprocess.run(
        ["depref", "lambda", "--alphas", "0.25,0.5,0.75,1",
         "--deltas", "0,0.5,1,5", "--out", str(out)],
        check=True, capture_output=True,
    )
    return str(out)


@pytest.fixture(scope="module")
def degree_csv(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("sim")
    subprocess.run(
        ["depref", "simulate", "--model", "linear", "--theta", "1", "--alpha", "1",
         "--m", "1", "--n", "20000", "--replicas", "5", "--seed", "42",
         "--out", str(outdir)],
        check=True, capture_output=True,
    )
    return str(outdir / "degree_dist.csv")


@needs_depref
def test_lambda_vs_alpha_figure(sweep_csv, tmp_path):
    out = tmp_path / "lambda_alpha.png"
    res = render(PlotSpec("lambda_vs_alpha", (sweep_csv,), str(out)))
    assert out.exists() and out.stat().st_size > 0
    # one curve per delta value of the criterion-2 sweep
    assert len(res.curves) == 4
    for label, (x, y) in res.curves.items():
        assert len(x) == 4, label
        assert all(b < a for a, b in zip(y, y[1:])), f"{label} not decreasing"


@needs_depref
def test_degree_dist_figure_overlays_theory(degree_csv, tmp_path):
    out = tmp_path / "degree.png"
    res = render(PlotSpec("degree_dist", (degree_csv,), str(out)))
    assert out.exists() and out.stat().st_size > 0
    kx, _ = res.curves["empirical"]
    ox, oy = res.overlay["limit"]
    # a theoretical point for every plotted degree
    assert set(ox) == set(kx)
    # and the theory is the 2**-k law
    for k, p in zip(ox, oy):
        assert p == pytest.approx(2.0 ** -k, abs=1e-12)
