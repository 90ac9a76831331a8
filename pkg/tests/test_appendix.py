"""Worked finite-image cases: exact closures, case outcomes, escape traces."""
import math

import pytest

from su2moduli.appendix import (
    GENERATORS,
    GROUP_ORDER,
    WORKED_CASES,
    enumerate_group,
    escape_trace,
    in_group_exact,
    verify_all_worked_cases,
    verify_appendix_case,
)

SQRT2 = math.sqrt(2.0)


def test_group_orders_exact():
    for case, order in GROUP_ORDER.items():
        assert len(enumerate_group(case)) == order


def test_generators_lie_in_their_groups():
    for case, gens in GENERATORS.items():
        for g in gens:
            assert in_group_exact(g, case)


def test_all_worked_cases_pass():
    reports = verify_all_worked_cases()
    assert len(reports) == len(WORKED_CASES)
    for r in reports:
        assert r.passed, f"{r.case_id}: {r.detail}"


EXPECTED_OUTCOMES = {
    "T-pin-allzero": "escape",
    "T-pin-spin": "no_real_solutions",
    "T-T-spin": "in_group",
    "C-pin-spin": "no_real_solutions",
    "C-spin-C": "in_group",
    "C-pin-escape": "escape",
    "D1-spin-pin": "in_group",
    "D1-spin-D": "no_real_solutions",
    "D1-pin-allzero": "in_group",
    "D1-inconsistent": "no_real_solutions",
}


def test_case_outcomes():
    for case_id, outcome in EXPECTED_OUTCOMES.items():
        r = verify_appendix_case(case_id)
        assert r.solver_outcome == outcome, case_id


def test_tetrahedral_escape_traces():
    r = verify_appendix_case("T-pin-allzero")
    assert sorted(r.escape_traces) == pytest.approx([-SQRT2, SQRT2], abs=1e-12)


def test_cubic_escape_traces():
    # traces 3/2 +- sqrt(-11 + 8*sqrt 2)/2
    half_root = math.sqrt(-11.0 + 8.0 * SQRT2) / 2.0
    r = verify_appendix_case("C-pin-escape")
    assert sorted(r.escape_traces) == pytest.approx(
        [1.5 - half_root, 1.5 + half_root], abs=1e-12)


def test_cubic_solution_point():
    r = verify_appendix_case("C-spin-C")
    assert any(
        tuple(round(c, 12) for c in s) == (0.5, -0.5, -0.5, 0.5)
        for s in r.solutions)


def test_escape_handle_generic_aj():
    # a generic fourth generator produces an escaping handle
    import numpy as np
    from su2moduli.su2 import random_su2
    from su2moduli.appendix import escape_handle_ok

    rng = np.random.default_rng(3)
    assert escape_handle_ok("T", random_su2(rng))
