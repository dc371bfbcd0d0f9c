"""Bundle persistence: canonical serialization, checksum, and versioning."""

import json

import pytest

from skigraph.bundle import FORMAT_VERSION, load_bundle, save_bundle
from skigraph.errors import BundleParseError, ChecksumMismatchError, VersionMismatchError

import fixture_resorts as fr


def test_round_trip_is_byte_identical(tmp_path):
    graph = fr.five_slope_resort()
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    save_bundle(graph, first)
    loaded = load_bundle(first)
    save_bundle(loaded, second)
    assert first.read_bytes() == second.read_bytes()


def test_round_trip_preserves_structure(tmp_path):
    graph = fr.five_slope_resort()
    path = tmp_path / "bundle.json"
    save_bundle(graph, path)
    loaded = load_bundle(path)
    assert loaded.name == graph.name
    assert set(loaded.nodes) == set(graph.nodes)
    assert [e.id for e in loaded.edges] == [e.id for e in graph.edges]
    for orig, back in zip(graph.edges, loaded.edges):
        assert type(orig) is type(back)
        assert back.subsegments == orig.subsegments
        assert back.median_travel_time == orig.median_travel_time
        assert back.geometry == orig.geometry
    s4 = next(e for e in loaded.edges if e.id == "s4")
    assert s4.groomed is False and s4.popularity == 0.75


def test_round_trip_with_helpers_and_repair_report(tmp_path):
    from skigraph.build import build_topology, repair_connectivity

    graph = build_topology(fr.repair_edges(), name="gaps")
    repair_connectivity(graph)
    path = tmp_path / "gaps.json"
    save_bundle(graph, path)
    loaded = load_bundle(path)
    assert len(loaded.helper_edges) == 2
    assert loaded.repair_report is not None
    assert loaded.repair_report.dead_ends_before == 3
    assert loaded.repair_report.dead_ends_after == 1
    save_bundle(loaded, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()


def test_truncated_file_is_parse_error(tmp_path):
    graph = fr.five_slope_resort()
    path = tmp_path / "bundle.json"
    save_bundle(graph, path)
    path.write_bytes(path.read_bytes()[: path.stat().st_size // 2])
    with pytest.raises(BundleParseError):
        load_bundle(path)


def test_version_mismatch(tmp_path):
    graph = fr.five_slope_resort()
    path = tmp_path / "bundle.json"
    save_bundle(graph, path)
    raw = json.loads(path.read_text())
    raw["format_version"] = 999
    path.write_text(json.dumps(raw))
    with pytest.raises(VersionMismatchError):
        load_bundle(path)
    assert FORMAT_VERSION == 1


def test_checksum_mismatch_on_tampering(tmp_path):
    graph = fr.five_slope_resort()
    path = tmp_path / "bundle.json"
    save_bundle(graph, path)
    raw = json.loads(path.read_text())
    raw["edges"][1]["median_travel_time"] = 1.0
    path.write_text(json.dumps(raw))
    with pytest.raises(ChecksumMismatchError):
        load_bundle(path)


def test_parse_error_carries_location(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(BundleParseError) as err:
        load_bundle(path)
    assert "bad.json" in str(err.value)
