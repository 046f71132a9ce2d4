"""The two-column derived-completion spectral sequence at p = 2.

Input: the known Ext table over E(1)_*E(1) for the sphere at p = 2
(Hovey--Sadofsky), a bigraded table of Z_(2)-modules.  Applying the
derived completion functors L0, L1 cellwise gives a two-column E_2-page;
every differential d_r (r >= 2) raises the column index by r, so both
endpoints can never be nonzero and the page collapses.  The abutment in
degree (n, t) therefore carries exactly the contributions L0 Ext^(n,t) and
L1 Ext^(n+1,t), reported as an associated graded with a collision flag
instead of guessing extensions.

The target table (continuous cohomology of the height-1 stabilizer group)
is transcribed as ``golden_table``; ``compare_tables`` closes the loop.

Row-overlap convention: both tables have a "t even, s >= 2" line next to
dedicated t = 0 entries, and t = 0 is itself even.  Whether t = 0 belongs
to the even line is controlled by ``t0_even_row``; the default True is the
value the brute-force route certifies (H^s at t = 0 is Z/2 for s >= 2),
and the acceptance suite pins it.

Source caveat, recorded at the data site: in the original filtration-one
statement the cyclic group in the (8k-1)-stem reads Z/16k; its 2-primary
part is what the s = 1 row here means.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import UnsupportedPrime, WindowMismatch
from .modules import (
    ModuleExpr,
    cyclic,
    format_module_expr,
    l0,
    l1,
    local_free,
    padic,
    parse_module_expr,
    prufer,
    zero_module,
)
from .exact_linalg import vp

__all__ = [
    "BigradedTable",
    "SSPage",
    "AbutmentCell",
    "hovey_sadofsky_table",
    "apply_l_functors",
    "assemble_abutment",
    "abutment_cell",
    "derived_ss_table",
    "golden_table",
    "compare_tables",
    "DEFAULT_T0_EVEN_ROW",
    "table_to_json",
    "table_from_json",
    "table_to_csv",
]

DEFAULT_T0_EVEN_ROW = True


@dataclass(frozen=True)
class BigradedTable:
    """Map (s, t) -> module expression on a declared window; zero cells are
    absent and every stored expression is canonical."""

    p: int
    t_window: tuple[int, int]
    s_window: tuple[int, int]
    route: str
    cells: tuple[tuple[tuple[int, int], ModuleExpr], ...]
    collisions: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        for (s, t), expr in self.cells:
            if not (self.s_window[0] <= s <= self.s_window[1]):
                raise ValueError(f"cell s={s} outside window {self.s_window}")
            if not (self.t_window[0] <= t <= self.t_window[1]):
                raise ValueError(f"cell t={t} outside window {self.t_window}")
            if expr.is_zero:
                raise ValueError("zero cells must be omitted")

    def get(self, s: int, t: int) -> ModuleExpr:
        for key, expr in self.cells:
            if key == (s, t):
                return expr
        return zero_module()

    def as_dict(self) -> dict[tuple[int, int], ModuleExpr]:
        return dict(self.cells)

    def same_window(self, other: "BigradedTable") -> bool:
        return (
            self.p == other.p
            and self.t_window == other.t_window
            and self.s_window == other.s_window
        )


def _build_table(p, t_window, s_window, route, cell_fn) -> BigradedTable:
    cells = []
    for t in range(t_window[0], t_window[1] + 1):
        for s in range(s_window[0], s_window[1] + 1):
            expr = cell_fn(s, t)
            if not expr.is_zero:
                cells.append(((s, t), expr))
    cells.sort(key=lambda it: it[0])
    return BigradedTable(p, tuple(t_window), tuple(s_window), route, tuple(cells))


# ---------------------------------------------------------------------------
# the two tables


def _uncompleted_ext_cell(s: int, t: int, t0_even_row: bool) -> ModuleExpr:
    if t % 2 or s < 0:
        return zero_module()
    if t == 0:
        out = zero_module()
        if s == 0:
            return local_free(2)
        if s == 2:
            out = prufer(2)
        if s >= 2 and t0_even_row:
            out = out + cyclic(2, 1)
        return out
    if s == 1:
        v = vp(t, 2)
        # t = 2^(k+1) m with m odd: k = v - 1; Z/2^(k+2) needs k != 0
        return cyclic(2, 1) if v == 1 else cyclic(2, v + 1)
    if s >= 2:
        return cyclic(2, 1)
    return zero_module()


def hovey_sadofsky_table(
    p: int = 2,
    t_window: tuple[int, int] = (-48, 48),
    s_max: int = 5,
    t0_even_row: bool = DEFAULT_T0_EVEN_ROW,
) -> BigradedTable:
    """Ext^(s,t) over E(1)_*E(1) of the sphere at p = 2, transcribed:
    Z_(2) at (0,0); Q/Z_(2) at (2,0); Z/2^(k+2) at s = 1, t = 2^(k+1)m
    with m odd and k nonzero; Z/2 at s = 1, t = 4t'+2; Z/2 for s >= 2 and
    even t; zero elsewhere.  Only tabulated at p = 2."""
    if p != 2:
        raise UnsupportedPrime("the uncompleted Ext table is only known at p = 2")
    return _build_table(
        p, t_window, (0, s_max), "hovey-sadofsky",
        lambda s, t: _uncompleted_ext_cell(s, t, t0_even_row),
    )


def _golden_cell(s: int, t: int, t0_even_row: bool) -> ModuleExpr:
    if t % 2 or s < 0:
        return zero_module()
    if t == 0:
        if s in (0, 1):
            return padic(2)
        return cyclic(2, 1) if t0_even_row else zero_module()
    if s == 1:
        v = vp(t, 2)
        return cyclic(2, 1) if v == 1 else cyclic(2, v + 1)
    if s >= 2:
        return cyclic(2, 1)
    return zero_module()


def golden_table(
    p: int = 2,
    t_window: tuple[int, int] = (-48, 48),
    s_max: int = 5,
    t0_even_row: bool = DEFAULT_T0_EVEN_ROW,
) -> BigradedTable:
    """Continuous cohomology of the height-1 stabilizer group on E_t at
    p = 2: Z_2 at (s, t) = (0, 0) and (1, 0); otherwise the same torsion
    rows as the uncompleted Ext table."""
    if p != 2:
        raise UnsupportedPrime("the reference table is only known at p = 2")
    return _build_table(
        p, t_window, (0, s_max), "golden",
        lambda s, t: _golden_cell(s, t, t0_even_row),
    )


# ---------------------------------------------------------------------------
# the collapsing page


@dataclass(frozen=True)
class SSPage:
    """E_2 = E_infinity page: (i, s, t) -> module, i in {0, 1} only."""

    p: int
    t_window: tuple[int, int]
    s_window: tuple[int, int]
    cells: tuple[tuple[tuple[int, int, int], ModuleExpr], ...]

    def __post_init__(self):
        for (i, _, _), _expr in self.cells:
            if i not in (0, 1):
                raise ValueError("derived index must be 0 or 1")

    def get(self, i: int, s: int, t: int) -> ModuleExpr:
        for key, expr in self.cells:
            if key == (i, s, t):
                return expr
        return zero_module()


@dataclass(frozen=True)
class AbutmentCell:
    degree: tuple[int, int]  # (n, t)
    contributions: tuple[tuple[tuple[int, int], ModuleExpr], ...]  # ((i, s), expr)
    assembled: ModuleExpr
    collision: bool

    def __post_init__(self):
        n, _ = self.degree
        for (i, s), _expr in self.contributions:
            if (i, s) not in ((0, n), (1, n + 1)):
                raise ValueError(f"contribution ({i},{s}) cannot reach degree {n}")


def apply_l_functors(table: BigradedTable) -> SSPage:
    """Cellwise L0 and L1 of the input Ext table."""
    cells = []
    for (s, t), expr in table.cells:
        e0, e1 = l0(expr), l1(expr)
        if not e0.is_zero:
            cells.append(((0, s, t), e0))
        if not e1.is_zero:
            cells.append(((1, s, t), e1))
    cells.sort(key=lambda it: it[0])
    return SSPage(table.p, table.t_window, table.s_window, tuple(cells))


def _collapse_is_structural(page: SSPage) -> None:
    """d_r : (i, s) -> (i + r, s + r - 1) for r >= 2; with entries only in
    columns 0 and 1 no differential can connect two nonzero cells.  The
    assertion is real but can never fire once the page invariant holds."""
    occupied = {key[0] for key in dict(page.cells)}
    span = (max(occupied) - min(occupied) + 1) if occupied else 0
    for i in occupied:
        for r in range(2, span + 3):
            if i + r in occupied:
                raise AssertionError(
                    f"d_{r} would connect nonzero columns {i} and {i + r}"
                )


def assemble_abutment(page: SSPage, s_max: int | None = None) -> BigradedTable:
    """Collapse the two-column page: the abutment at (n, t) is the direct
    sum of the (0, n, t) and (1, n+1, t) entries, with a collision flag
    whenever both are nonzero (extension ambiguity in the associated
    graded)."""
    _collapse_is_structural(page)
    if s_max is None:
        s_max = page.s_window[1]
    cells = []
    collisions = set()
    for t in range(page.t_window[0], page.t_window[1] + 1):
        for n in range(0, s_max + 1):
            cell = abutment_cell(page, n, t)
            if not cell.assembled.is_zero:
                cells.append(((n, t), cell.assembled))
                if cell.collision:
                    collisions.add((n, t))
    cells.sort(key=lambda it: it[0])
    return BigradedTable(
        page.p,
        page.t_window,
        (0, s_max),
        "ss",
        tuple(cells),
        frozenset(collisions),
    )


def abutment_cell(page: SSPage, n: int, t: int) -> AbutmentCell:
    parts = []
    for i, s in ((0, n), (1, n + 1)):
        expr = page.get(i, s, t)
        if not expr.is_zero:
            parts.append(((i, s), expr))
    total = zero_module()
    for _, expr in parts:
        total = total + expr
    return AbutmentCell((n, t), tuple(parts), total, len(parts) > 1)


def derived_ss_table(
    p: int = 2,
    t_window: tuple[int, int] = (-48, 48),
    s_max: int = 5,
    t0_even_row: bool = DEFAULT_T0_EVEN_ROW,
) -> BigradedTable:
    """Full pipeline: Ext input (one extra row of s for the L1 column),
    L functors, collapse, abutment on the requested window."""
    source = hovey_sadofsky_table(p, t_window, s_max + 1, t0_even_row)
    return assemble_abutment(apply_l_functors(source), s_max=s_max)


# ---------------------------------------------------------------------------
# comparison and serialization


def compare_tables(a: BigradedTable, b: BigradedTable) -> list[tuple[int, int, ModuleExpr, ModuleExpr]]:
    """Cells where the two tables differ; empty iff identical on the
    shared window.  Raises WindowMismatch when the windows differ."""
    if not a.same_window(b):
        raise WindowMismatch(
            f"windows differ: {a.t_window}x{a.s_window} vs {b.t_window}x{b.s_window}"
        )
    diffs = []
    keys = sorted(set(dict(a.cells)) | set(dict(b.cells)))
    for s, t in keys:
        ea, eb = a.get(s, t), b.get(s, t)
        if ea != eb:
            diffs.append((s, t, ea, eb))
    return diffs


def table_to_json(table: BigradedTable) -> str:
    doc = {
        "p": table.p,
        "window": {"t": list(table.t_window), "s": list(table.s_window)},
        "route": table.route,
        "cells": [
            {
                "s": s,
                "t": t,
                "module": format_module_expr(expr),
                "collision": (s, t) in table.collisions,
            }
            for (s, t), expr in table.cells
        ],
    }
    return json.dumps(doc, indent=2)


def table_from_json(text: str) -> BigradedTable:
    doc = json.loads(text)
    p = doc["p"]
    cells = []
    collisions = set()
    for cell in doc["cells"]:
        s, t = cell["s"], cell["t"]
        cells.append(((s, t), parse_module_expr(cell["module"], p=p)))
        if cell.get("collision"):
            collisions.add((s, t))
    cells.sort(key=lambda it: it[0])
    return BigradedTable(
        p,
        tuple(doc["window"]["t"]),
        tuple(doc["window"]["s"]),
        doc["route"],
        tuple(cells),
        frozenset(collisions),
    )


def table_to_csv(table: BigradedTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "t", "module", "collision"])
    for (s, t), expr in table.cells:
        writer.writerow([s, t, format_module_expr(expr), str((s, t) in table.collisions).lower()])
    return buf.getvalue()
