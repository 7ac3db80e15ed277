"""Independent reference solution of the exhaustible-resource problem.

Eliminating ``u1`` through the constraint and ``u2 = -x'`` leaves the
scalar variational problem ``max int x^a (-x')^b dt`` with ``a = alpha*gamma``,
``b = beta*gamma``. Its Euler-Lagrange equation ``x'' = -a x'^2 / (b x)`` is
shot on ``x'(0)`` with an adaptive integrator and bracketed root finding;
``psi`` and ``lambda`` are recovered from stationarity.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from core.errors import NoConvergence
from schemas.models import OracleComparison

RTOL = 1e-12
ATOL = 1e-14


@dataclass
class OracleSolution:
    t: np.ndarray
    x: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    psi: np.ndarray
    lam: np.ndarray
    psi0: float = -1.0

    @property
    def psi_a(self) -> float:
        return float(self.psi[0])


def _euler_lagrange(a: float, b: float):
    def rhs(_t: float, y: np.ndarray) -> list[float]:
        x, v = y
        return [v, -a * v * v / (b * x)]

    return rhs


def _exhausted(_t: float, y: np.ndarray) -> float:
    return y[0] - 1e-12


_exhausted.terminal = True  # type: ignore[attr-defined]
_exhausted.direction = -1  # type: ignore[attr-defined]


def resource_oracle(
    gamma: float,
    alpha: float,
    beta: float,
    x0: float,
    xT: float,
    T: float,
    t_eval: Sequence[float] | None = None,
) -> OracleSolution:
    if not 0.0 < xT < x0:
        raise ValueError("the reduction needs 0 < xT < x0")
    a, b = alpha * gamma, beta * gamma
    rhs = _euler_lagrange(a, b)

    def end_state(w0: float) -> float:
        sol = solve_ivp(rhs, (0.0, T), [x0, -w0], method="DOP853", rtol=RTOL, atol=ATOL, events=_exhausted)
        if sol.status != 0:
            return -xT
        return float(sol.y[0, -1]) - xT

    lo = 1e-12
    hi = (x0 - xT) / T
    for _ in range(80):
        if end_state(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise NoConvergence("could not bracket the initial extraction rate", 80, float(end_state(hi)))
    w0 = brentq(end_state, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

    grid = np.linspace(0.0, T, 1001) if t_eval is None else np.asarray(t_eval, dtype=float)
    sol = solve_ivp(rhs, (0.0, T), [x0, -w0], method="DOP853", rtol=RTOL, atol=ATOL, t_eval=grid)
    x = sol.y[0]
    u2 = -sol.y[1]
    u1 = (x**a * u2**b) ** (1.0 / gamma)
    lam = np.full_like(x, -1.0)
    psi = lam * b * x**a * u2 ** (b - 1.0)
    return OracleSolution(t=grid, x=x, u1=u1, u2=u2, psi=psi, lam=lam)


def compare(
    x: np.ndarray,
    psi: np.ndarray,
    lam: np.ndarray,
    oracle: OracleSolution,
    x_tol: float = 1e-4,
    psi_tol: float = 1e-3,
    lam_tol: float = 1e-10,
) -> OracleComparison:
    """Relative sup-norm deviations of a computed arc from the oracle on the same grid."""
    x = np.asarray(x, dtype=float).reshape(len(oracle.t), -1)[:, 0]
    psi = np.asarray(psi, dtype=float).reshape(len(oracle.t), -1)[:, 0]
    lam = np.asarray(lam, dtype=float).reshape(len(oracle.t), -1)[:, 0]
    x_rel = float(np.max(np.abs(x - oracle.x)) / np.max(np.abs(oracle.x)))
    psi_rel = float(np.max(np.abs(psi - oracle.psi)) / np.max(np.abs(oracle.psi)))
    lam_dev = float(np.max(np.abs(lam - oracle.lam)))
    return OracleComparison(
        x_rel_sup=x_rel,
        psi_rel_sup=psi_rel,
        lambda_max_dev=lam_dev,
        passed=x_rel <= x_tol and psi_rel <= psi_tol and lam_dev <= lam_tol,
    )
