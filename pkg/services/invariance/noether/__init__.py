"""Conserved quantities along extremals."""

from noether.charge import DRIFT_THRESHOLD, charge, charge_series, conservation_report, report_to_csv

__all__ = ["DRIFT_THRESHOLD", "charge", "charge_series", "conservation_report", "report_to_csv"]
