"""Indirect shooting for constrained Pontryagin extremals."""

from solver.config import ResolveConfig, ShootConfig
from solver.extremal import Extremal
from solver.shooting import default_seeds, integrate, refine, shoot

__all__ = ["Extremal", "ResolveConfig", "ShootConfig", "default_seeds", "integrate", "refine", "shoot"]
