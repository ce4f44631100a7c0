"""Secondary acceptance: render the checked-in golden CSV.

The golden file was produced by the primary suite's permutation-gain
run (criterion 7 jobs); this package must reproduce its table values
exactly and produce a deterministic FER image from it.
"""

from pathlib import Path


from rmplots import PlotSpec, kb, render_fer, render_tables, sci
from test_render import strip_png_metadata

REPO = Path(__file__).resolve().parents[2]
GOLDEN_CSV = REPO / "data" / "golden_fer.csv"
GOLDEN_TABLE = REPO / "data" / "golden_tables.csv"


def _report(ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[ACCEPTANCE] criterion 12 (plots from golden CSV): {status} {detail}")
    return ok


def test_criterion_12_plots(tmp_path):
    assert GOLDEN_CSV.exists(), "golden CSV missing from the repo"
    png = tmp_path / "fer.png"
    caption = render_fer(PlotSpec(csv_paths=[str(GOLDEN_CSV)],
                                  out_image=str(png), ml_overlay=True))
    image_ok = png.exists() and png.stat().st_size > 0 and bool(caption)

    png2 = tmp_path / "fer2.png"
    render_fer(PlotSpec(csv_paths=[str(GOLDEN_CSV)], out_image=str(png2),
                        ml_overlay=True))
    deterministic = (strip_png_metadata(png.read_bytes())
                     == strip_png_metadata(png2.read_bytes()))

    table_text = render_tables(PlotSpec(csv_paths=[str(GOLDEN_CSV)]))
    table_ok = table_text == GOLDEN_TABLE.read_text()

    # the stated formatting rules, on the published example values
    fmt_ok = kb(86272) == "10.53" and sci(20900) == "2.1E+04"

    ok = _report(image_ok and deterministic and table_ok and fmt_ok,
                 f"image={image_ok}, deterministic={deterministic}, "
                 f"table_exact={table_ok}, formatting={fmt_ok}")
    assert ok
