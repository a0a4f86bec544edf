"""Markdown tables behind the phase diagrams (same output as `smw phase-report --quick`).

Run: python3 demos/04_phase_report.py
"""
from smw.cli import phase_report

print(phase_report(quick=True))
