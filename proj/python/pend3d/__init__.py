"""Rigid-body pendulum dynamics, reduction, and reconstruction toolkit."""

from ._pend3d import *  # noqa: F401,F403
