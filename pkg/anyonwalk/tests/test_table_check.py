"""
Table-versus-oracle verification tests.
"""

from anyonwalk.engine.anyon_model import INFINITY
from anyonwalk.validators.table_check import TableCheckReport, TableCheckRow, verify_table


class TestVerifyTable:
    def test_small_grid_passes(self):
        report = verify_table(levels=[2, 3, INFINITY], offsets=range(-3, 4))
        assert report.passed
        assert len(report.rows) == 3 * 8 * 7
        assert report.max_diff <= 1e-10
        assert str(report).startswith("PASSED")

    def test_negative_tolerance_fails_everything(self, caplog):
        report = verify_table(levels=[2], offsets=[0], tolerance=-1.0)
        assert not report.passed
        assert len(report.failures) == 8
        assert "FAILED" in str(report)
        assert "oracle" in caplog.text

    def test_row_serialization(self):
        row = TableCheckRow(level="3", family="F2", offset=-1, oracle=0.5 + 0.1j, table=0.5 + 0j)
        data = row.to_dict()
        assert data["oracle_im"] == 0.1
        assert abs(data["diff"] - 0.1) < 1e-15

    def test_empty_report(self):
        report = TableCheckReport()
        assert report.passed
        assert report.max_diff == 0.0
        assert report.to_dict()["checked"] == 0
