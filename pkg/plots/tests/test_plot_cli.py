"""Command line behavior: exit codes, messages, and file side effects."""

import pytest

from plot_helpers import DATA_DIR, BANDWIDTH_COLUMNS, bandwidth_row, write_rows
from sdnbench_plots.cli import main


def test_writes_image_and_reports_path(tmp_path, capsys):
    out = tmp_path / "bw.png"
    code = main(
        [
            "--family",
            "bw_vs_t",
            "--csv",
            str(DATA_DIR / "linear_bw.csv"),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.stat().st_size > 0
    assert out.read_bytes()[:4] == b"\x89PNG"
    assert str(out) in capsys.readouterr().out


def test_svg_output(tmp_path):
    out = tmp_path / "bars.svg"
    code = main(
        [
            "--family",
            "rtt_bars",
            "--csv",
            str(DATA_DIR / "star_rtt.csv"),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.read_bytes().lstrip().startswith(b"<?xml")


def test_repeated_csv_flags_combine_files(tmp_path):
    out = tmp_path / "steady.png"
    code = main(
        [
            "--family",
            "rtt_compare",
            "--csv",
            str(DATA_DIR / "fat_tree_rtt.csv"),
            "--csv",
            str(DATA_DIR / "spine_leaf_rtt.csv"),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert out.stat().st_size > 0


def test_empty_selection_exits_nonzero_without_file(tmp_path, capsys):
    out = tmp_path / "none.png"
    code = main(
        [
            "--family",
            "bw_vs_t",
            "--csv",
            str(DATA_DIR / "linear_bw.csv"),
            "--topology",
            "ring",
            "--out",
            str(out),
        ]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err
    assert not out.exists()


def test_missing_column_exits_nonzero_without_file(tmp_path, capsys):
    columns = [c for c in BANDWIDTH_COLUMNS if c != "duration_s"]
    rows = [{c: v for c, v in bandwidth_row().items() if c != "duration_s"}]
    csv_path = write_rows(tmp_path / "short.csv", columns, rows)
    out = tmp_path / "o.png"
    code = main(
        ["--family", "bw_vs_t", "--csv", str(csv_path), "--out", str(out)]
    )
    assert code == 2
    assert "duration_s" in capsys.readouterr().err
    assert not out.exists()


def test_unknown_family_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(
            [
                "--family",
                "pie",
                "--csv",
                str(DATA_DIR / "linear_bw.csv"),
                "--out",
                str(tmp_path / "o.png"),
            ]
        )
    assert excinfo.value.code == 2


def test_csv_and_out_are_required(tmp_path):
    with pytest.raises(SystemExit):
        main(["--family", "bw_vs_t", "--out", str(tmp_path / "o.png")])
    with pytest.raises(SystemExit):
        main(["--family", "bw_vs_t", "--csv", str(DATA_DIR / "linear_bw.csv")])


def test_repeat_run_is_byte_identical(tmp_path):
    args = [
        "--family",
        "topo_compare",
        "--csv",
        str(DATA_DIR / "linear8_bw.csv"),
        "--csv",
        str(DATA_DIR / "star8_bw.csv"),
        "--csv",
        str(DATA_DIR / "tree8_bw.csv"),
        "--hosts",
        "8",
    ]
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
