"""
CSV/JSON artifact tests.
"""

import json

import numpy as np
import pytest

from anyonwalk.config.models import RunConfig
from anyonwalk.exceptions import FileReadError
from anyonwalk.generators.artifacts import (
    ARTIFACT_NAME,
    format_value,
    header_line,
    moments_document,
    read_csv_artifact,
    read_variance_csv,
    render_csv,
    write_distributions,
    write_json,
    write_sweep_csv,
    write_variance_csv,
)
from anyonwalk.simulation import run_simulation, sweep


@pytest.fixture
def closed_form_run():
    config = RunConfig(mode="closed-form", steps=4)
    return config, run_simulation(config)


class TestFormatting:
    @pytest.mark.parametrize(
        "value, text",
        [(3, "3"), (np.int64(7), "7"), (True, "1"), (0.1 + 0.2, "0.3"), (1 / 3, "0.333333333333")],
    )
    def test_format_value(self, value, text):
        assert format_value(value) == text

    def test_header_is_compact_sorted_json(self):
        line = header_line({"steps": 4, "level": 2}, {"t": 1})
        assert line.startswith("# {")
        header = json.loads(line[2:])
        assert header["artifact"] == ARTIFACT_NAME
        assert header["config"] == {"level": 2, "steps": 4}
        assert header["run"] == {"t": 1}
        assert " " not in line[2:]

    def test_render_csv(self):
        text = render_csv(("a", "b"), [(1, 0.5)], {"x": 1})
        lines = text.splitlines()
        assert lines[1] == "a,b"
        assert lines[2] == "1,0.5"


class TestVarianceArtifact:
    def test_write_and_read(self, tmp_path, closed_form_run):
        config, result = closed_form_run
        path = write_variance_csv(tmp_path / "variance.csv", result.trace, config.to_dict())
        header, columns = read_csv_artifact(path)
        assert header["config"]["mode"] == "closed-form"
        assert header["run"]["mode"] == "closed-form"
        assert "duration_s" not in header["run"]
        np.testing.assert_allclose(columns["t"], [0, 1, 2, 3, 4])
        np.testing.assert_allclose(columns["sigma2_scaled"], columns["t"], atol=1e-10)
        np.testing.assert_allclose(columns["sigma2_raw"], 4 * columns["t"], atol=1e-9)

    def test_identical_configs_give_identical_files(self, tmp_path):
        config = RunConfig(level=3, steps=5)
        first = write_variance_csv(
            tmp_path / "a.csv", run_simulation(config).trace, config.to_dict()
        )
        second = write_variance_csv(
            tmp_path / "b.csv", run_simulation(config).trace, config.to_dict()
        )
        assert first.read_bytes() == second.read_bytes()

    def test_derived_columns(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("t,sigma2_scaled\n0,0\n1,1\n2,2\n")
        columns = read_variance_csv(path)
        np.testing.assert_allclose(columns["steps"], [0, 2, 4])
        np.testing.assert_allclose(columns["sigma2_raw"], [0, 4, 8])

    def test_raw_only(self, tmp_path):
        path = tmp_path / "raw.csv"
        path.write_text("# not json\nt,sigma2_raw\n0,0\n1,8\n")
        columns = read_variance_csv(path)
        np.testing.assert_allclose(columns["sigma2_scaled"], [0, 2])


class TestReadErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileReadError):
            read_csv_artifact(tmp_path / "nope.csv")

    def test_empty_body(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# {}\n")
        with pytest.raises(FileReadError):
            read_csv_artifact(path)

    def test_ragged_row(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("t,sigma2_raw\n0,0\n1\n")
        with pytest.raises(FileReadError):
            read_csv_artifact(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "words.csv"
        path.write_text("t,sigma2_raw\n0,zero\n")
        with pytest.raises(FileReadError):
            read_csv_artifact(path)

    def test_missing_t(self, tmp_path):
        path = tmp_path / "no_t.csv"
        path.write_text("steps,sigma2_raw\n0,0\n")
        with pytest.raises(FileReadError):
            read_variance_csv(path)


class TestDistributions:
    def test_final_distribution_by_default(self, tmp_path, closed_form_run):
        config, result = closed_form_run
        written = write_distributions(tmp_path, result.trace, [], config.to_dict())
        assert [p.name for p in written] == ["dist_t4.csv"]
        header, columns = read_csv_artifact(written[0])
        assert header["run"] == {"t": 4}
        centre = columns["shat"] == 0
        assert columns["p"][centre][0] == pytest.approx(0.375)
        assert columns["p"].sum() == pytest.approx(1.0)

    def test_requested_times(self, tmp_path, closed_form_run, caplog):
        config, result = closed_form_run
        written = write_distributions(tmp_path, result.trace, [1, 3, 9], config.to_dict())
        assert [p.name for p in written] == ["dist_t1.csv", "dist_t3.csv"]
        assert "t=9" in caplog.text


class TestSweepArtifacts:
    def test_files(self, tmp_path):
        config = RunConfig(steps=3, workers=1)
        report = sweep(config, [1, 2])
        written = write_sweep_csv(tmp_path, report, config.to_dict())
        assert [p.name for p in written] == ["sweep.csv", "variance_k1.csv", "variance_k2.csv"]

        header, columns = read_csv_artifact(tmp_path / "sweep.csv")
        assert header["run"] == {"levels": ["1", "2"], "failed": []}
        assert columns["level"].tolist() == [1.0] * 4 + [2.0] * 4

        level_header, _ = read_csv_artifact(tmp_path / "variance_k2.csv")
        assert level_header["config"]["level"] == "2"

    def test_failed_levels_listed(self, tmp_path):
        config = RunConfig(mode="closed-form", steps=2, workers=1)
        report = sweep(config, [2, 3])
        written = write_sweep_csv(tmp_path, report, config.to_dict())
        assert [p.name for p in written] == ["sweep.csv", "variance_k2.csv"]
        header, _ = read_csv_artifact(written[0])
        assert header["run"]["failed"] == ["3"]


class TestJson:
    def test_write_json(self, tmp_path):
        path = write_json(tmp_path / "doc.json", {"value": 1 + 2j})
        document = json.loads(path.read_text())
        assert document["artifact"] == ARTIFACT_NAME
        assert document["value"] == [1.0, 2.0]

    def test_moments_document(self):
        document = moments_document(3, range(-2, 3), n_sites=16)
        assert document["level"] == "3"
        assert document["offsets"] == [-2, -1, 0, 1, 2]
        assert sorted(document["families"]) == [f"F{i}" for i in range(1, 9)]
        f1 = document["families"]["F1"]
        np.testing.assert_allclose(f1["table"], f1["oracle"], atol=1e-10)
        assert set(document["averaged"]["finite"]) == set(document["averaged"]["asymptotic"])
        assert document["kappa"]["finite"]["n_sites"] == 16
        json.dumps(document)
