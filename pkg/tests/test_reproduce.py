from __future__ import annotations

import asyncio
import time

import pytest

from app.api.dto import ReproReport
from app.service.reproduce_service import Check


def test_check_names_are_unique(reproduce):
    names = [check.name for check in reproduce.checks()]
    assert len(names) == len(set(names))
    assert "identity.master" in names and "trace.gamma3" in names and "schreier.rb3" in names


def test_selected_checks_run_in_declaration_order(reproduce):
    outcomes = asyncio.run(reproduce.run(["chart.qf3", "sij.m3", "resolvent"]))
    assert [outcome.name for outcome in outcomes] == ["sij.m3", "chart.qf3", "resolvent"]
    assert all(outcome.passed for outcome in outcomes)
    assert all(outcome.elapsed >= 0 for outcome in outcomes)


def test_unknown_check_names_are_rejected(reproduce):
    with pytest.raises(ValueError, match="unknown checks"):
        asyncio.run(reproduce.run(["sij.m3", "no.such.check"]))


def test_raising_check_becomes_a_failure(reproduce):
    outcome = reproduce._execute(Check("boom", "divides by zero", lambda: 1 / 0))
    assert not outcome.passed
    assert outcome.computed.startswith("ZeroDivisionError")


def test_report_counts_and_serializes(reproduce):
    outcomes = asyncio.run(reproduce.run(["sij.m4", "critical.qc3", "realfib.minmax"]))
    report = ReproReport.from_outcomes(outcomes)
    assert (report.passed, report.failed) == (3, 0)
    assert report.ok
    assert ReproReport.model_validate_json(report.model_dump_json()) == report


def test_real_root_oracle_stays_within_budget(reproduce):
    (outcome,) = asyncio.run(reproduce.run(["realfib.oracle"]))
    assert outcome.passed, outcome.computed
    assert outcome.elapsed < 20


def test_membership_agreement_sees_both_sides_of_qf(reproduce):
    (outcome,) = asyncio.run(reproduce.run(["property.membership"]))
    assert outcome.passed, outcome.computed
    assert outcome.computed.startswith("0 disagreements")


@pytest.mark.slow
def test_every_check_passes(reproduce):
    started = time.perf_counter()
    outcomes = asyncio.run(reproduce.run())
    failed = [(outcome.name, outcome.computed) for outcome in outcomes if not outcome.passed]
    assert failed == []
    assert time.perf_counter() - started < 120
