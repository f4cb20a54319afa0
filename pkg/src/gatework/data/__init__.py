"""Packaged data files: plan templates, calibration config, benchmark, reference fixture."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Filesystem path of a packaged data file."""
    base = resources.files(__package__)
    target = base.joinpath(*parts)
    return Path(str(target))


TEMPLATES_FILE = "templates.json"
CALIBRATION_FILE = "calibration.json"
BENCHMARK_MANIFEST = ("benchmark", "manifest.jsonl")
REFERENCE_LABELS = ("reference", "labels.jsonl")
