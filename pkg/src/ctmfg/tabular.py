"""Coefficient form for games with affine rates and affine-plus-log rewards.

Rates:   lam(x, x', u, nu)  = lam0[x, x', u] + sum_j nu[j] * lam1[j, x, x', u]
Rewards: r(x, u, nu)        = r0[x, u] + sum_j nu[j] * r1[j, x, u]
                              + c_log[x] * log(max(nu[x], eps_log))

All bundled benchmark games fit this family exactly; the compiled solver
kernels consume these arrays directly. Diagonals of the rate tables are
ignored (zeroed at construction) and re-derived wherever a generator is built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TabularGame:
    lam0: np.ndarray  # (n, n, a) base off-diagonal jump rates
    lam1: np.ndarray  # (n, n, n, a) rate sensitivity to nu[j]
    r0: np.ndarray  # (n, a) base rewards
    r1: np.ndarray  # (n, n, a) reward sensitivity to nu[j]
    c_log: np.ndarray  # (n,) weight on log(max(nu[x], eps_log))
    eps_log: float = 1e-10

    def __post_init__(self):
        lam0 = np.array(self.lam0, dtype=float)
        lam1 = np.array(self.lam1, dtype=float)
        r0 = np.array(self.r0, dtype=float)
        r1 = np.array(self.r1, dtype=float)
        c_log = np.array(self.c_log, dtype=float)
        n, n2, a = lam0.shape
        if n != n2:
            raise ValueError("lam0 must be square in its first two axes")
        if lam1.shape != (n, n, n, a) or r0.shape != (n, a) or r1.shape != (n, n, a) or c_log.shape != (n,):
            raise ValueError("inconsistent coefficient shapes")
        if self.eps_log <= 0:
            raise ValueError("eps_log must be positive")
        idx = np.arange(n)
        lam0[idx, idx, :] = 0.0
        lam1[:, idx, idx, :] = 0.0
        object.__setattr__(self, "lam0", _frozen(lam0))
        object.__setattr__(self, "lam1", _frozen(lam1))
        object.__setattr__(self, "r0", _frozen(r0))
        object.__setattr__(self, "r1", _frozen(r1))
        object.__setattr__(self, "c_log", _frozen(c_log))

    @property
    def n_states(self) -> int:
        return self.lam0.shape[0]

    @property
    def n_actions(self) -> int:
        return self.lam0.shape[2]

    def off_diagonal_rate(self, x: int, x2: int, u: int, nu) -> float:
        nu = np.asarray(nu, dtype=float)
        return float(self.lam0[x, x2, u] + nu @ self.lam1[:, x, x2, u])

    def reward_entry(self, x: int, u: int, nu) -> float:
        nu = np.asarray(nu, dtype=float)
        value = self.r0[x, u] + nu @ self.r1[:, x, u]
        if self.c_log[x] != 0.0:
            value += self.c_log[x] * np.log(max(nu[x], self.eps_log))
        return float(value)

    def generator(self, nu) -> np.ndarray:
        """(n, n, a) rate tensor at nu with the diagonal derived from the rest."""
        nu = np.asarray(nu, dtype=float)
        lam = self.lam0 + np.einsum("j,jxyu->xyu", nu, self.lam1)
        n = self.n_states
        idx = np.arange(n)
        lam[idx, idx, :] = 0.0
        lam[idx, idx, :] = -lam.sum(axis=1)
        return lam

    def rewards(self, nu) -> np.ndarray:
        nu = np.asarray(nu, dtype=float)
        r = self.r0 + np.einsum("j,jxu->xu", nu, self.r1)
        active = self.c_log != 0.0
        if active.any():
            r = r + (self.c_log * np.log(np.maximum(nu, self.eps_log)))[:, None]
        return r
