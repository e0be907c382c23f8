"""Gaze-map metrics, training objectives and frame-pair curation."""

from ._gazekit import *  # noqa: F401,F403
from ._gazekit import GazekitError

__all__ = [name for name in dir() if not name.startswith("_")]
