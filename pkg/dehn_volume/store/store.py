"""
SQLAlchemy model and CRUD operations for computed volumes.

Every saved run keeps the filling, the selected holonomy and branch data of
its first cusp, Psi with the derived volume and Chern-Simons value, and
whether all checks passed.
"""

from __future__ import annotations

import logging
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Any, Optional

from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, create_engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker

if TYPE_CHECKING:
    from dehn_volume.pipeline import VolumeResult

logger = logging.getLogger(__name__)


class Base(DeclarativeBase):
    pass


def _utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(tzinfo=None)


class VolumeRun(Base):
    """One stored volume computation."""

    __tablename__ = "volume_runs"

    id = Column(Integer, primary_key=True, autoincrement=True)
    # --- input ---
    manifold = Column(String(128), nullable=False, index=True)
    filling = Column(String(128), nullable=False)
    # --- selected holonomy ---
    meridian_re = Column(Float, nullable=False)
    meridian_im = Column(Float, nullable=False)
    longitude_re = Column(Float, nullable=False)
    longitude_im = Column(Float, nullable=False)
    u = Column(Integer, nullable=False)
    v = Column(Integer, nullable=False)
    k = Column(Integer, nullable=True)
    # --- result ---
    psi_re = Column(Float, nullable=False)
    psi_im = Column(Float, nullable=False)
    volume = Column(Float, nullable=False)
    cs = Column(Float, nullable=False)
    modulus = Column(String(16), nullable=False)
    checks_passed = Column(Boolean, default=False, nullable=False)
    created_at = Column(DateTime, default=_utcnow, nullable=False)

    def __repr__(self) -> str:
        return (
            f"<VolumeRun(id={self.id}, manifold='{self.manifold}', "
            f"filling='{self.filling}', volume={self.volume:.9f})>"
        )

    @property
    def psi(self) -> complex:
        return complex(self.psi_re, self.psi_im)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "manifold": self.manifold,
            "filling": self.filling,
            "M": [self.meridian_re, self.meridian_im],
            "L": [self.longitude_re, self.longitude_im],
            "uv": [self.u, self.v],
            "k": self.k,
            "psi": [self.psi_re, self.psi_im],
            "volume": self.volume,
            "cs": self.cs,
            "modulus": self.modulus,
            "checks_passed": self.checks_passed,
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


class ResultsDB:
    """
    CRUD interface for the results database.

    Usage:
        db = ResultsDB("sqlite:///dehn_volume.db")
        run = db.record_run(run_volume(config))
        db.list_runs(manifold="fig8")
    """

    def __init__(self, db_url: str = "sqlite:///dehn_volume.db") -> None:
        self.engine = create_engine(db_url, echo=False)
        Base.metadata.create_all(self.engine)
        self.SessionFactory = sessionmaker(bind=self.engine)

    def _session(self) -> Session:
        return self.SessionFactory()

    # ---- Create ----

    def record_run(self, result: VolumeResult) -> VolumeRun:
        meridian, longitude = result.selected.targets[0]
        u, v = result.peripheral.uv[0]
        report = result.report
        with self._session() as session:
            run = VolumeRun(
                manifold=result.manifold,
                filling=str(result.filling),
                meridian_re=meridian.real,
                meridian_im=meridian.imag,
                longitude_re=longitude.real,
                longitude_im=longitude.imag,
                u=u,
                v=v,
                k=result.selected.windings[0],
                psi_re=report.psi.real,
                psi_im=report.psi.imag,
                volume=report.volume,
                cs=report.cs,
                modulus=report.modulus.value,
                checks_passed=result.passed,
            )
            session.add(run)
            session.commit()
            session.refresh(run)
            logger.info("Stored run %d (%s %s)", run.id, run.manifold, run.filling)
            return run

    # ---- Read ----

    def get_run(self, run_id: int) -> Optional[VolumeRun]:
        with self._session() as session:
            return session.get(VolumeRun, run_id)

    def list_runs(self, manifold: Optional[str] = None, limit: int = 50) -> list[VolumeRun]:
        with self._session() as session:
            q = session.query(VolumeRun)
            if manifold:
                q = q.filter(VolumeRun.manifold == manifold)
            q = q.order_by(VolumeRun.created_at.desc(), VolumeRun.id.desc())
            return q.limit(limit).all()

    # ---- Delete ----

    def delete_run(self, run_id: int) -> bool:
        with self._session() as session:
            run = session.get(VolumeRun, run_id)
            if run is None:
                return False
            session.delete(run)
            session.commit()
            return True

    def close(self) -> None:
        self.engine.dispose()
