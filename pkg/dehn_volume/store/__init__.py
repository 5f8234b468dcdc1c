"""Results database of volume runs."""

from dehn_volume.store.store import Base, ResultsDB, VolumeRun

__all__ = ["Base", "ResultsDB", "VolumeRun"]
