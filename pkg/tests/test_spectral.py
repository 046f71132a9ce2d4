"""Bigraded tables, the collapsing page, assembly, and serialization."""

import pytest

from stabcoh.errors import UnsupportedPrime, WindowMismatch
from stabcoh.modules import cyclic, local_free, padic, prufer, zero_module
from stabcoh.spectral import (
    BigradedTable,
    SSPage,
    abutment_cell,
    apply_l_functors,
    assemble_abutment,
    compare_tables,
    derived_ss_table,
    golden_table,
    hovey_sadofsky_table,
    table_from_json,
    table_to_csv,
    table_to_json,
)


def test_uncompleted_ext_table_spot_values():
    h = hovey_sadofsky_table()
    assert h.get(0, 0) == local_free(2)
    assert h.get(2, 0) == prufer(2) + cyclic(2, 1)  # t=0 counted even (default)
    assert h.get(1, 8) == cyclic(2, 4)  # t = 2^(k+1) m, k = 2
    assert h.get(1, 6) == cyclic(2, 1)
    assert h.get(0, 2) == zero_module()
    assert h.get(1, 2) == cyclic(2, 1)
    assert h.get(1, 4) == cyclic(2, 3)
    assert h.get(3, 0) == cyclic(2, 1)
    assert h.get(4, 10) == cyclic(2, 1)
    assert h.get(1, 0) == zero_module()


def test_uncompleted_ext_table_flag_false():
    h = hovey_sadofsky_table(t0_even_row=False)
    assert h.get(2, 0) == prufer(2)
    assert h.get(3, 0) == zero_module()
    assert h.get(2, 2) == cyclic(2, 1)  # unaffected away from t = 0


def test_golden_table_spot_values():
    g = golden_table()
    assert g.get(0, 0) == padic(2)
    assert g.get(1, 0) == padic(2)
    assert g.get(1, 8) == cyclic(2, 4)
    assert g.get(1, 16) == cyclic(2, 5)  # t = 2^(k+1) m forces k = 3
    assert g.get(1, 6) == cyclic(2, 1)
    assert g.get(3, 4) == cyclic(2, 1)
    assert g.get(0, 3) == zero_module()
    assert g.get(2, 0) == cyclic(2, 1)
    assert g.get(1, -8) == cyclic(2, 4)


def test_tables_refuse_odd_primes():
    with pytest.raises(UnsupportedPrime):
        hovey_sadofsky_table(p=3)
    with pytest.raises(UnsupportedPrime):
        golden_table(p=5)


def test_apply_l_functors_spot_values():
    t = hovey_sadofsky_table(t_window=(-8, 8), s_max=3)
    page = apply_l_functors(t)
    assert page.get(1, 2, 0) == padic(2)  # L1 of the divisible part
    assert page.get(0, 2, 0) == cyclic(2, 1)  # L0 kills Q/Z, keeps Z/2
    assert page.get(0, 1, 8) == cyclic(2, 4)
    assert page.get(1, 1, 8) == zero_module()
    assert page.get(0, 0, 0) == padic(2)


def test_apply_l_functors_pure_divisible_cell():
    # with t=0 outside the even row, the (2,0) cell is exactly Q/Z_(2):
    # its first derived functor is Z_2 and its completion vanishes
    t = hovey_sadofsky_table(t_window=(0, 0), s_max=3, t0_even_row=False)
    page = apply_l_functors(t)
    assert page.get(1, 2, 0) == padic(2)
    assert page.get(0, 2, 0) == zero_module()


def test_apply_l_functors_empty_table():
    t = BigradedTable(2, (0, 1), (0, 1), "hovey-sadofsky", ())
    page = apply_l_functors(t)
    assert page.cells == ()
    assert assemble_abutment(page).cells == ()


def test_page_rejects_higher_columns():
    with pytest.raises(ValueError):
        SSPage(2, (0, 0), (0, 1), (((2, 0, 0), padic(2)),))


def test_abutment_contributions_are_constrained():
    t = hovey_sadofsky_table(t_window=(-8, 8), s_max=4)
    page = apply_l_functors(t)
    for tt in range(-8, 9):
        for n in range(4):
            cell = abutment_cell(page, n, tt)
            for (i, s), expr in cell.contributions:
                assert (i, s) in ((0, n), (1, n + 1))
                assert not expr.is_zero
    # the t=0 tower: H^1 receives exactly the L1 of Ext^(2,0)
    cell = abutment_cell(page, 1, 0)
    assert cell.assembled == padic(2)
    assert cell.contributions == (((1, 2), padic(2)),)
    assert not cell.collision


def test_assembled_equals_golden_both_conventions():
    for flag in (True, False):
        ss = derived_ss_table(t0_even_row=flag)
        gold = golden_table(t0_even_row=flag)
        assert compare_tables(ss, gold) == []
        assert ss.collisions == frozenset()


def test_assembly_collision_flag():
    # a synthetic page with both contributions nonzero in one abutment cell
    page = SSPage(
        2,
        (0, 0),
        (0, 2),
        (((0, 1, 0), cyclic(2, 1)), ((1, 2, 0), padic(2))),
    )
    out = assemble_abutment(page, s_max=2)
    assert out.get(1, 0) == padic(2) + cyclic(2, 1)
    assert (1, 0) in out.collisions


def test_compare_tables_reports_cells():
    a = golden_table(t_window=(0, 8), s_max=2)
    b = golden_table(t_window=(0, 8), s_max=2)
    assert compare_tables(a, b) == []
    cells = dict(b.cells)
    cells[(1, 8)] = cyclic(2, 3)
    b2 = BigradedTable(2, b.t_window, b.s_window, "golden", tuple(sorted(cells.items())))
    diffs = compare_tables(a, b2)
    assert len(diffs) == 1 and diffs[0][:2] == (1, 8)
    with pytest.raises(WindowMismatch):
        compare_tables(a, golden_table(t_window=(0, 6), s_max=2))


def test_json_round_trip_and_schema():
    import json

    t = derived_ss_table(t_window=(-8, 8), s_max=3)
    doc = json.loads(table_to_json(t))
    assert doc["p"] == 2
    assert doc["window"] == {"t": [-8, 8], "s": [0, 3]}
    assert doc["route"] == "ss"
    assert all(set(c) == {"s", "t", "module", "collision"} for c in doc["cells"])
    assert table_from_json(table_to_json(t)) == t


def test_csv_mirror():
    t = golden_table(t_window=(0, 4), s_max=1)
    lines = table_to_csv(t).strip().splitlines()
    assert lines[0] == "s,t,module,collision"
    assert "1,4,Z/2^3,false" in lines


FROZEN_GOLDEN_0_16_S3 = """\
s,t,module,collision
0,0,Zp,false
1,0,Zp,false
1,2,Z/2,false
1,4,Z/2^3,false
1,6,Z/2,false
1,8,Z/2^4,false
1,10,Z/2,false
1,12,Z/2^3,false
1,14,Z/2,false
1,16,Z/2^5,false
2,0,Z/2,false
2,2,Z/2,false
2,4,Z/2,false
2,6,Z/2,false
2,8,Z/2,false
2,10,Z/2,false
2,12,Z/2,false
2,14,Z/2,false
2,16,Z/2,false
3,0,Z/2,false
3,2,Z/2,false
3,4,Z/2,false
3,6,Z/2,false
3,8,Z/2,false
3,10,Z/2,false
3,12,Z/2,false
3,14,Z/2,false
3,16,Z/2,false
"""


def test_golden_master_csv_regression():
    # frozen literal transcription of the reference table on 0 <= t <= 16,
    # s <= 3; guards against accidental edits to the row rules
    got = table_to_csv(golden_table(t_window=(0, 16), s_max=3))
    assert got == FROZEN_GOLDEN_0_16_S3


def test_zero_cells_are_omitted():
    t = golden_table(t_window=(1, 1), s_max=5)  # odd t: everything zero
    assert t.cells == ()
    with pytest.raises(ValueError):
        BigradedTable(2, (0, 0), (0, 0), "golden", (((0, 0), zero_module()),))
