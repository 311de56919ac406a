"""Exit criteria, one test per criterion.

Each test appends a PASS/FAIL line to the terminal summary with its runtime.
All comparisons are exact integer/rational equality.
"""

import contextlib
import random
import subprocess
import sys
import time

from conftest import ACCEPTANCE_LINES, TABLE1_CSV
from helpers import exhaustive_min_cover, has_present_perfect_matching, max_zero_matching_size, optimal_perms, perm_costs
from mass_layout import (
    Assignment,
    CostMatrix,
    FloorPlan,
    LoadMatrix,
    ShiftVectors,
    apply_move,
    assignment_cost,
    build_initial_layout,
    craft_improve,
    format_load_matrix,
    hungarian_solve,
    layout_cost,
    min_line_cover,
    parse_load_matrix,
    read_load_matrix,
    shift_costs,
    to_cost_matrix,
)
from mass_layout.oracle import brute_force_assignment, brute_force_optimum

TABLE5 = (1, 0, 3, 2, 5, 4)


@contextlib.contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"[{status}] {number}. {title} ({elapsed:.3f}s, limit {limit}s)")


def paper_instance():
    return read_load_matrix(TABLE1_CSV), FloorPlan(64, 22, 20, 10, 2)


def test_1_paper_pipeline():
    with criterion(1, "paper pipeline: Table 5 assignment, 2580 -> 2360, one move", 1.0):
        lm, fp = paper_instance()
        asg = hungarian_solve(to_cost_matrix(lm))
        assert asg.partner == TABLE5
        initial = build_initial_layout(asg, fp, lm.n)
        assert layout_cost(initial, lm, fp).total == 2580
        final, trace = craft_improve(initial, lm, fp)
        assert trace.initial_cost == 2580
        assert trace.final_cost == 2360
        assert layout_cost(final, lm, fp).total == 2360
        assert trace.initial_cost - trace.final_cost == 220
        assert len(trace.accepted) == 1


def test_2_global_optimum():
    with criterion(2, "brute-force optimum equals CRAFT result (2360)", 1.0):
        lm, fp = paper_instance()
        res = brute_force_optimum(lm, fp)
        assert res.best_cost == 2360
        initial = build_initial_layout(hungarian_solve(to_cost_matrix(lm)), fp, lm.n)
        _, trace = craft_improve(initial, lm, fp)
        assert trace.final_cost == res.best_cost


def test_3_hungarian_oracle_equivalence():
    with criterion(3, "Hungarian cost equals permutation minimum, 200/200", 10.0):
        rng = random.Random(3)
        agree = 0
        for _ in range(200):
            n = rng.randint(2, 7)
            rows = [[rng.randint(0, 100) for _ in range(n)] for _ in range(n)]
            cm = CostMatrix.from_rows(rows)
            got = assignment_cost(cm, hungarian_solve(cm)).cost
            agree += got == brute_force_assignment(cm).best_cost == min(perm_costs(rows).values())
        assert agree == 200


def test_4_shift_invariance():
    with criterion(4, "shift theorem: same optimal set, cost offset sum(A)+sum(B)", 10.0):
        rng = random.Random(4)
        for _ in range(100):
            n = rng.randint(1, 6)
            rows = [[rng.randint(0, 100) for _ in range(n)] for _ in range(n)]
            A = [rng.randint(-10, 50) for _ in range(n)]
            B = [rng.randint(-10, 50) for _ in range(n)]
            lift = max(0, -min(rows[i][j] + A[i] + B[j] for i in range(n) for j in range(n)))
            A = [a + lift for a in A]
            cm = CostMatrix.from_rows(rows)
            shifted = shift_costs(cm, ShiftVectors(tuple(A), tuple(B)))
            assert optimal_perms(cm.entries)[1] == optimal_perms(shifted.entries)[1]
            before, after = perm_costs(cm.entries), perm_costs(shifted.entries)
            assert all(after[p] - before[p] == sum(A) + sum(B) for p in before)


def test_5_koenig_equality():
    with criterion(5, "min line cover k = max zero matching = exhaustive cover", 10.0):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(1, 6)
            # small value range so zeros are plentiful
            rows = [[rng.choice((0, 0, 1, 2, 3)) for _ in range(n)] for _ in range(n)]
            k = min_line_cover(CostMatrix.from_rows(rows)).k
            assert k == max_zero_matching_size(rows) == exhaustive_min_cover(rows)


def test_6_craft_properties():
    with criterion(6, "CRAFT: strict descent, exact deltas, oracle <= final <= initial", 30.0):
        rng = random.Random(6)
        fp = FloorPlan(64, 22)
        names = [f"F{k}" for k in range(6)]
        for _ in range(100):
            cells = [[None if i == j or rng.random() < 0.3 else rng.randint(0, 50) for j in range(6)]
                     for i in range(6)]
            lm = LoadMatrix.from_rows(names, cells)
            initial = build_initial_layout(hungarian_solve(to_cost_matrix(lm)), fp, 6)
            final, trace = craft_improve(initial, lm, fp)
            costs = [trace.initial_cost] + [s.cost_after for s in trace.accepted]
            assert all(b < a for a, b in zip(costs, costs[1:]))
            layout = initial
            for step in trace.accepted:
                after = apply_move(layout, step.move)
                full = layout_cost(after, lm, fp).total - layout_cost(layout, lm, fp).total
                assert step.move.delta == full
                assert layout_cost(after, lm, fp).total == step.cost_after
                layout = after
            assert layout == final
            best = brute_force_optimum(lm, fp).best_cost
            assert best <= trace.final_cost <= trace.initial_cost


def test_7_big_m_robustness():
    with criterion(7, "big-M: same assignment for M=216 and 1e9; no synthetic cell when avoidable", 10.0):
        lm, _ = paper_instance()
        a = hungarian_solve(to_cost_matrix(lm, big_m=216))
        b = hungarian_solve(to_cost_matrix(lm, big_m=10**9))
        assert a == b == Assignment(TABLE5)
        rng = random.Random(7)
        checked = 0
        while checked < 50:
            n = rng.randint(2, 7)
            cells = [[None if i == j or rng.random() < 0.6 else rng.randint(0, 100) for j in range(n)]
                     for i in range(n)]
            sparse = LoadMatrix.from_rows([f"F{k}" for k in range(n)], cells)
            if not has_present_perfect_matching(sparse):
                continue
            cm = to_cost_matrix(sparse)
            assert not assignment_cost(cm, hungarian_solve(cm)).uses_synthetic
            checked += 1


def test_8_format_determinism():
    with criterion(8, "byte-identical JSON across runs; CSV round-trip", 10.0):
        argv = [sys.executable, "-m", "mass_layout", "optimize", "--loads", TABLE1_CSV,
                "--floor", "64x22", "--facility", "20x10", "--aisle", "2", "--format", "json"]
        runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(3)]
        assert runs[0] == runs[1] == runs[2]
        assert b'"final_cost": 2360' in runs[0]
        lm = read_load_matrix(TABLE1_CSV)
        again = parse_load_matrix(format_load_matrix(lm))
        assert again.names == lm.names and again.cells == lm.cells
