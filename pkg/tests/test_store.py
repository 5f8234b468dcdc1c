"""Tests for the results database (in-memory SQLite)."""

from types import SimpleNamespace

import pytest

from dehn_volume.dilog import complex_volume
from dehn_volume.peripheral import FillingVector
from dehn_volume.store import ResultsDB, VolumeRun


def _make_result(manifold="fig8", filling="1/5", psi=1.967879974 + 1.918602377j, passed=True):
    return SimpleNamespace(
        manifold=manifold,
        filling=FillingVector.parse(filling),
        selected=SimpleNamespace(
            targets=((0.840595 + 0.007451j, -0.838678 - 0.607067j),), windings=(-2,)
        ),
        peripheral=SimpleNamespace(uv=((4, 0),)),
        report=complex_volume(psi, link_exterior=True),
        passed=passed,
    )


class TestResultsDB:
    def setup_method(self):
        self.db = ResultsDB("sqlite:///:memory:")

    def teardown_method(self):
        self.db.close()

    def test_record_and_retrieve(self):
        run = self.db.record_run(_make_result())
        assert run.id is not None
        stored = self.db.get_run(run.id)
        assert stored is not None
        assert stored.manifold == "fig8"
        assert stored.filling == "1/5"
        assert (stored.u, stored.v, stored.k) == (4, 0, -2)
        assert stored.psi == pytest.approx(1.967879974 + 1.918602377j)
        assert stored.volume == pytest.approx(1.918602377)
        assert stored.modulus == "pi_squared"
        assert stored.checks_passed is True

    def test_missing_run(self):
        assert self.db.get_run(42) is None

    def test_list_runs_newest_first(self):
        first = self.db.record_run(_make_result(filling="1/5"))
        second = self.db.record_run(_make_result(filling="2/5"))
        runs = self.db.list_runs()
        assert [r.id for r in runs] == [second.id, first.id]

    def test_list_runs_by_manifold_and_limit(self):
        self.db.record_run(_make_result(manifold="fig8"))
        self.db.record_run(_make_result(manifold="fig8", filling="2/5"))
        self.db.record_run(_make_result(manifold="m004"))
        assert len(self.db.list_runs(manifold="fig8")) == 2
        assert len(self.db.list_runs(limit=1)) == 1

    def test_delete_run(self):
        run = self.db.record_run(_make_result())
        assert self.db.delete_run(run.id) is True
        assert self.db.get_run(run.id) is None
        assert self.db.delete_run(run.id) is False

    def test_failed_checks_are_stored(self):
        run = self.db.record_run(_make_result(passed=False))
        assert self.db.get_run(run.id).checks_passed is False

    def test_to_dict_and_repr(self):
        run = self.db.record_run(_make_result())
        data = run.to_dict()
        assert data["uv"] == [4, 0]
        assert data["psi"] == pytest.approx([1.967879974, 1.918602377])
        assert data["created_at"] is not None
        assert "fig8" in repr(run)
        assert isinstance(run, VolumeRun)
