"""Verification, solving and reporting pipelines."""

from pipeline.runs import charge_entry, run_report, solve_entry, verify_entry

__all__ = ["charge_entry", "run_report", "solve_entry", "verify_entry"]
