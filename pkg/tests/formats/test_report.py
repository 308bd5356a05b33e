"""
Tests for JSON reports and benchmark CSV rows
"""
import json

import pytest

from lloc.core.pipeline import solve
from lloc.formats.report import (
    BENCH_COLUMNS,
    REPORT_KEYS,
    bench_csv,
    model_json,
    parse_bench_csv,
    report_dict,
    report_json,
)
from lloc.models.schemas import BenchRow, PipelineConfig, ZeroReport


@pytest.fixture
def six_point_report(six_points):
    return solve(six_points, PipelineConfig(b=3, pivot_set=[0, 5]))


class TestReportJson:

    @pytest.mark.formats
    @pytest.mark.unit
    def test_key_order(self, six_point_report):
        """Test report keys come in the fixed order"""
        data = json.loads(report_json(six_point_report))
        assert tuple(data) == REPORT_KEYS

    @pytest.mark.formats
    @pytest.mark.unit
    def test_without_timings(self, six_point_report):
        """Test timings can be dropped and the embedding is never included"""
        data = report_dict(six_point_report, include_timings=False)

        assert "timings_ms" not in data
        assert "embedding" not in data
        assert data["config"]["b"] == 3
        assert [c["pivot"] for c in data["candidates"]] == [0, 5]

    @pytest.mark.formats
    @pytest.mark.unit
    def test_deterministic_without_timings(self, six_points):
        """Test equal seeds give byte-identical reports once timings are dropped"""
        cfg = PipelineConfig(b=3, seed=5)
        first = report_json(solve(six_points, cfg), include_timings=False)
        second = report_json(solve(six_points, cfg), include_timings=False)

        assert first == second

    @pytest.mark.formats
    @pytest.mark.unit
    def test_timings_include_total(self, six_point_report):
        """Test per-stage timings and the total are reported"""
        timings = json.loads(report_json(six_point_report))["timings_ms"]

        assert "total" in timings
        assert "recount" in timings
        assert all(value >= 0 for value in timings.values())

    @pytest.mark.formats
    @pytest.mark.unit
    def test_model_json(self):
        """Test plain models dump as indented JSON"""
        text = model_json(ZeroReport(perfect=False, total_constraints=3))

        assert text.endswith("\n")
        assert json.loads(text) == {
            "perfect": False,
            "violated_count": None,
            "total_constraints": 3,
            "embedding": None,
        }


class TestBenchCsv:

    @pytest.fixture
    def rows(self):
        return [
            BenchRow(instance_id="uniform-n6-s0", n=6, b=3, corruption=0.0, seed=0,
                     method="collapse", satisfied_fraction=0.8, wall_ms=1.5),
            BenchRow(instance_id="uniform-n6-s1", n=6, b=3, corruption=0.0, seed=1,
                     method="zero", wall_ms=0.5, failed="NoPerfectEmbedding: none"),
        ]

    @pytest.mark.formats
    @pytest.mark.unit
    def test_columns(self, rows):
        """Test the header lists every row field"""
        header = bench_csv(rows).splitlines()[0]

        assert header.split(",") == BENCH_COLUMNS
        assert BENCH_COLUMNS[0] == "instance_id"

    @pytest.mark.formats
    @pytest.mark.unit
    def test_round_trip(self, rows):
        """Test rows parse back with empty fractions for failures"""
        parsed = parse_bench_csv(bench_csv(rows))

        assert len(parsed) == 2
        assert parsed[0]["satisfied_fraction"] == "0.8"
        assert parsed[1]["satisfied_fraction"] == ""
        assert parsed[1]["failed"] == "NoPerfectEmbedding: none"

    @pytest.mark.formats
    @pytest.mark.unit
    def test_empty(self):
        """Test an empty run list still writes the header"""
        assert bench_csv([]) == ",".join(BENCH_COLUMNS) + "\n"
