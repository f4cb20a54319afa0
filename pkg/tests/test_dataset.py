"""Benchmark manifest loading and distribution validation."""

from __future__ import annotations

import json

import pytest

from gatework.data import BENCHMARK_MANIFEST, data_path
from gatework.errors import DistributionMismatch, ManifestInvalid
from gatework.stats import RELEASED_AREA_TOTALS, RELEASED_TOTAL, load_benchmark

MANIFEST = data_path(*BENCHMARK_MANIFEST)


def test_released_manifest_counts():
    ds = load_benchmark(MANIFEST, strict=True)
    assert ds.total == RELEASED_TOTAL == 94
    assert ds.area_counts == {"Sales": 20, "Operations": 28, "Marketing": 24, "Analysis": 22}
    assert ds.area_counts == RELEASED_AREA_TOTALS
    assert not ds.mismatches
    assert "matches the released benchmark" in ds.validation_report()


def test_brief_files_exist():
    ds = load_benchmark(MANIFEST)
    for task in ds.tasks:
        assert (MANIFEST.parent / task.brief_path).is_file()


def test_missing_manifest():
    with pytest.raises(ManifestInvalid):
        load_benchmark("/nonexistent/manifest.jsonl")


def test_empty_manifest(tmp_path):
    empty = tmp_path / "manifest.jsonl"
    empty.write_text("")
    with pytest.raises(ManifestInvalid):
        load_benchmark(empty)


def test_garbled_manifest(tmp_path):
    bad = tmp_path / "manifest.jsonl"
    bad.write_text('{"task_id": "T1"}\n')  # missing fields
    with pytest.raises(ManifestInvalid):
        load_benchmark(bad)


def test_extra_task_names_mismatched_cell(tmp_path):
    lines = MANIFEST.read_text(encoding="utf-8").strip().splitlines()
    extra = {
        "task_id": "T095",
        "area": "Sales",
        "category": "Collect Business Contact Data",
        "brief_path": "briefs/T001.md",
        "attachments": [],
    }
    perturbed = tmp_path / "manifest.jsonl"
    perturbed.write_text("\n".join(lines + [json.dumps(extra)]) + "\n")

    ds = load_benchmark(perturbed)
    assert any("Sales / Collect Business Contact Data: 15 vs 14" in m for m in ds.mismatches)
    assert any("Sales: 21 vs 20" in m for m in ds.mismatches)
    assert any("total: 95 vs 94" in m for m in ds.mismatches)
    with pytest.raises(DistributionMismatch) as exc:
        load_benchmark(perturbed, strict=True)
    assert "Sales" in str(exc.value)


def test_duplicate_task_id(tmp_path):
    lines = MANIFEST.read_text(encoding="utf-8").strip().splitlines()
    perturbed = tmp_path / "manifest.jsonl"
    perturbed.write_text("\n".join(lines + [lines[0]]) + "\n")
    with pytest.raises(ManifestInvalid):
        load_benchmark(perturbed)
