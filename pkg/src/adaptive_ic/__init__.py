"""Simulator for two-party interactive communication over adversarial channels
whose protocols may adapt their length or their order of speaking."""

from .channel import (
    ABORT, ALICE, BOB, ERASURE, SILENCE, Adversary, Metrics, Party, RunRecord, TermSchedule,
    Terminate, metrics, metrics_adp, metrics_term, noise_rate, run_adp, run_term,
)
from .harness import ExperimentConfig, ReportRow, read_csv, run_experiment, write_csv

__version__ = "0.1.0"
