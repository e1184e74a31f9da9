"""Optimal-design datasets for learning job shop schedules."""

from oddata._core import *  # noqa: F401,F403
from oddata._core import __doc__  # noqa: F401

__version__ = "0.1.0"
