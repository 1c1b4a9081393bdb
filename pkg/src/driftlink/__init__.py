"""Simulation and bounds toolkit for energy-efficient relaying under clock drift."""

from . import analysis, coding, diamond, harness, idc

__all__ = ["analysis", "coding", "diamond", "harness", "idc"]
__version__ = "0.1.0"
