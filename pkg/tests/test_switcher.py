"""Strategy-switching sweeps, ratio certificates and map serialization."""

import io

import pytest

from dofsim import switcher as sw
from dofsim.channel import MATCHED, UNMATCHED, QualityPair


def test_best_strategy_perfect_csit():
    cell = sw.best_strategy(QualityPair(1.0, 1.0), UNMATCHED)
    assert cell.best == "zfbf"
    assert cell.d_zfbf == 2.0 and cell.d_opt == 2.0
    assert cell.ratio == pytest.approx(1.0)


def test_best_strategy_zero_quality_tie_goes_to_fdma():
    # fdma and s3 tie at sum DoF 1; the fixed order picks fdma.
    cell = sw.best_strategy(QualityPair(0.0, 0.0), UNMATCHED)
    assert (cell.d_fdma, cell.d_zfbf, cell.d_s3) == (1.0, 0.0, 1.0)
    assert cell.best == "fdma"
    assert cell.ratio == pytest.approx(1.0)


def test_best_strategy_matched_has_no_s3():
    cell = sw.best_strategy(QualityPair(0.5, 0.5), MATCHED)
    assert cell.d_s3 is None
    assert cell.best == "fdma"  # fdma and zfbf tie at 1
    assert cell.ratio == pytest.approx(1.0 / 1.5)


def test_best_strategy_worst_case_unmatched():
    cell = sw.best_strategy(QualityPair(2 / 3, 2 / 3), UNMATCHED)
    assert cell.ratio == pytest.approx(0.8, abs=1e-12)


def test_min_ratio_unmatched_certificate():
    value, argmin = sw.min_ratio(UNMATCHED, step=0.005)
    assert value == pytest.approx(0.8, abs=1e-3)
    assert value >= 0.8 - 1e-9, "the 80% guarantee must hold on the grid"
    assert argmin == [(0.665, 0.665)]  # the grid point closest to (2/3, 2/3)


def test_min_ratio_matched_certificate():
    value, argmin = sw.min_ratio(MATCHED, step=0.005)
    assert value == pytest.approx(2 / 3, abs=1e-3)
    assert value >= 2 / 3 - 1e-9
    assert len(argmin) == 201
    assert all(abs(b + a - 1.0) <= 1e-9 for b, a in argmin)


def test_sweep_cell_count_and_coverage():
    m = sw.sweep(UNMATCHED, step=0.1, rho=0.9)
    assert len(m.cells) == 11 * 11
    assert {(c.beta, c.alpha) for c in m.cells} == {
        (i / 10, j / 10) for i in range(11) for j in range(11)
    }


def test_sweep_mirror_symmetry():
    m = sw.sweep(UNMATCHED, step=0.1, rho=0.9)
    table = {(c.beta, c.alpha): c for c in m.cells}
    for (b, a), cell in table.items():
        mirror = table[(a, b)]
        assert cell.ratio == mirror.ratio
        assert cell.best == mirror.best
        assert cell.d_s3 == mirror.d_s3


def test_sweep_fdma_floor_and_ratio_cap():
    for scenario in (UNMATCHED, MATCHED):
        m = sw.sweep(scenario, step=0.05, rho=0.9)
        assert all(c.d_fdma == 1.0 for c in m.cells)
        assert all(c.ratio <= 1.0 + 1e-12 for c in m.cells)


def test_sweep_s3_constant_along_beta_rows():
    m = sw.sweep(UNMATCHED, step=0.05, rho=0.9)
    rows = {}
    for c in m.cells:
        if c.alpha <= c.beta:  # the canonical half (the rest is mirrored)
            rows.setdefault(c.beta, set()).add(c.d_s3)
    assert all(len(values) == 1 for values in rows.values())


def test_sweep_zfbf_wins_exactly_when_it_should():
    m = sw.sweep(UNMATCHED, step=0.05, rho=0.9)
    for c in m.cells:
        if c.alpha > c.beta:
            continue
        s = c.beta + c.alpha
        threshold = max(1.0, 1.0 + c.beta / 2)
        if s > threshold + 1e-9:
            assert c.best == "zfbf", (c.beta, c.alpha)
        elif s < threshold - 1e-9:
            assert c.best != "zfbf", (c.beta, c.alpha)


def test_sweep_label_threshold():
    m = sw.sweep(UNMATCHED, step=0.05, rho=0.9)
    for c in m.cells:
        label = m.label(c)
        if c.ratio < 0.9 - 1e-12:
            assert label == sw.OPTIMAL_NEEDED
        else:
            assert label == c.best


def test_sweep_counts_at_both_thresholds():
    m_low = sw.sweep(UNMATCHED, step=0.01, rho=0.8)
    assert m_low.counts_by_strategy().get(sw.OPTIMAL_NEEDED, 0) == 0
    m_high = sw.sweep(UNMATCHED, step=0.01, rho=0.9)
    counts = m_high.counts_by_strategy()
    needed = counts.get(sw.OPTIMAL_NEEDED, 0)
    assert 0 < needed
    assert 0.3 <= needed / len(m_high.cells) <= 0.6
    assert sum(counts.values()) == len(m_high.cells)


def test_matched_two_thirds_threshold_never_needs_optimal():
    m = sw.sweep(MATCHED, step=0.01, rho=2 / 3)
    assert m.counts_by_strategy().get(sw.OPTIMAL_NEEDED, 0) == 0


def test_sweep_validation():
    with pytest.raises(ValueError):
        sw.sweep(UNMATCHED, step=0.0)
    with pytest.raises(ValueError):
        sw.sweep(UNMATCHED, step=0.3)
    with pytest.raises(ValueError):
        sw.sweep(UNMATCHED, step=0.013)  # does not divide 1
    with pytest.raises(ValueError):
        sw.sweep(UNMATCHED, step=0.1, rho=0.0)
    with pytest.raises(ValueError):
        sw.sweep(UNMATCHED, step=0.1, rho=1.2)


def test_csv_roundtrip_lossless():
    m = sw.sweep(UNMATCHED, step=0.1, rho=0.9)
    buf = io.StringIO()
    sw.write_sweep_csv(m, buf)
    text = buf.getvalue()
    assert text.startswith(",".join(sw.CSV_HEADER) + "\n")
    cells = sw.read_sweep_csv(io.StringIO(text))
    assert tuple(cells) == m.cells


def test_csv_matched_leaves_s3_blank():
    m = sw.sweep(MATCHED, step=0.1, rho=0.9)
    buf = io.StringIO()
    sw.write_sweep_csv(m, buf)
    rows = buf.getvalue().strip().split("\n")[1:]
    assert all(row.split(",")[4] == "" for row in rows)
    cells = sw.read_sweep_csv(io.StringIO(buf.getvalue()))
    assert all(c.d_s3 is None for c in cells)


def test_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        sw.read_sweep_csv(io.StringIO("a,b,c\n1,2,3\n"))


def test_summary_json_fields():
    import json

    m = sw.sweep(MATCHED, step=0.1, rho=0.7)
    buf = io.StringIO()
    sw.write_summary_json(m, buf)
    doc = json.loads(buf.getvalue())
    assert doc["scenario"] == "matched"
    assert doc["step"] == 0.1 and doc["rho"] == 0.7
    assert doc["min_ratio"] == pytest.approx(2 / 3)
    assert all(len(pair) == 2 for pair in doc["argmin"])
    assert sum(doc["counts_by_strategy"].values()) == len(m.cells)
