import numpy as np
import pytest

from depref_plots.cli import main
from depref_plots.data import SchemaError, load_csv
from depref_plots.render import PlotSpec, render


def _write(path, text):
    path.write_text(text)
    return str(path)


SWEEP = """alpha,delta,lambda_star,residual
0.5,0,0.79048963905913843,9.1e-13
0.5,1,0.60801453777337941,6.3e-13
1,0,0.64192398777231574,6.9e-13
1,1,0.37547836133677737,6.6e-13
"""

DEGREE = """k,N_k,P_k,limit_pk
1,495,0.495,0.5
2,261,0.261,0.25
3,130,0.13,0.125
4,70,0.07,0.0625
5,44,0.044,0.03125
"""


def test_load_csv_roundtrip(tmp_path):
    cols = load_csv(_write(tmp_path / "s.csv", SWEEP))
    assert set(cols) == {"alpha", "delta", "lambda_star", "residual"}
    assert len(cols["alpha"]) == 4


def test_lambda_vs_alpha_curves(tmp_path):
    out = tmp_path / "fig.png"
    spec = PlotSpec("lambda_vs_alpha", (_write(tmp_path / "s.csv", SWEEP),), str(out))
    res = render(spec)
    assert out.exists() and out.stat().st_size > 0
    assert set(res.curves) == {"delta=0", "delta=1"}
    for x, y in res.curves.values():
        assert list(x) == [0.5, 1.0]
        assert y[1] < y[0]  # decreasing in alpha


def test_lambda_vs_delta_curves(tmp_path):
    out = tmp_path / "fig.svg"
    spec = PlotSpec("lambda_vs_delta", (_write(tmp_path / "s.csv", SWEEP),), str(out))
    res = render(spec)
    assert set(res.curves) == {"alpha=0.5", "alpha=1"}
    for _, y in res.curves.values():
        assert y[1] < y[0]  # decreasing in delta


def test_degree_dist_overlay(tmp_path):
    out = tmp_path / "deg.png"
    spec = PlotSpec("degree_dist", (_write(tmp_path / "d.csv", DEGREE),), str(out))
    res = render(spec)
    assert out.exists()
    kx, _ = res.curves["empirical"]
    ox, oy = res.overlay["limit"]
    assert list(ox) == list(kx)  # a theory point at every plotted degree
    np.testing.assert_allclose(oy, [0.5, 0.25, 0.125, 0.0625, 0.03125])


def test_missing_column_schema_error(tmp_path):
    bad = _write(tmp_path / "bad.csv", "alpha,delta\n1,0.5\n")
    with pytest.raises(SchemaError) as exc:
        render(PlotSpec("lambda_vs_alpha", (bad,), str(tmp_path / "x.png")))
    assert "lambda_star" in str(exc.value)  # the error names the column


def test_convergence_multi_input(tmp_path):
    a = _write(tmp_path / "a.csv", "n,ratio\n10,1.5\n100,1.2\n1000,1.05\n")
    b = _write(tmp_path / "b.csv", "n,D_n_over_n\n10,0.7\n100,0.66\n1000,0.65\n")
    out = tmp_path / "conv.png"
    res = render(PlotSpec("convergence", (a, b), str(out)))
    assert set(res.curves) == {"ratio", "D_n_over_n"}
    assert out.exists()


def test_convergence_empty_skipped(tmp_path):
    empty = _write(tmp_path / "e.csv", "n,ratio\n")
    out = tmp_path / "never.png"
    with pytest.warns(UserWarning):
        res = render(PlotSpec("convergence", (empty,), str(out)))
    assert res.skipped
    assert not out.exists()


def test_convergence_needs_n_first(tmp_path):
    bad = _write(tmp_path / "bad.csv", "t,ratio\n1,2\n")
    with pytest.raises(SchemaError):
        render(PlotSpec("convergence", (bad,), str(tmp_path / "x.png")))


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        PlotSpec("pie", ("x.csv",), "y.png")


def test_cli_exit_codes(tmp_path):
    sweep = _write(tmp_path / "s.csv", SWEEP)
    out = tmp_path / "f.png"
    assert main(["lambda_vs_alpha", "--in", sweep, "--out", str(out)]) == 0
    assert out.exists()

    bad = _write(tmp_path / "bad.csv", "alpha,delta\n1,0\n")
    assert main(["lambda_vs_alpha", "--in", bad, "--out", str(tmp_path / "g.png")]) == 2

    empty = _write(tmp_path / "e.csv", "n,ratio\n")
    assert main(["convergence", "--in", empty, "--out", str(tmp_path / "h.png")]) == 0

    missing = str(tmp_path / "nope.csv")
    assert main(["degree_dist", "--in", missing, "--out", str(tmp_path / "i.png")]) == 3


def test_render_deterministic_content(tmp_path):
    sweep = _write(tmp_path / "s.csv", SWEEP)
    r1 = render(PlotSpec("lambda_vs_alpha", (sweep,), str(tmp_path / "one.svg")))
    r2 = render(PlotSpec("lambda_vs_alpha", (sweep,), str(tmp_path / "two.svg")))
    for label in r1.curves:
        np.testing.assert_array_equal(r1.curves[label][1], r2.curves[label][1])
