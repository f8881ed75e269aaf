"""Compiled inner loops for games in tabular coefficient form.

These mirror the generic numpy solver passes step for step (same RK4 stages,
same half-step interpolation of the mean field, same cleanup) and exist purely
for speed: the per-iteration cost of the benchmark experiments is thousands of
small RK4 stages, which is Python-overhead-bound without compilation.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _rates_at(lam0, lam1, nu, out):
    """Rate tensor at nu; the diagonal is derived so rows sum to zero."""
    n = lam0.shape[0]
    a = lam0.shape[2]
    for x in range(n):
        for y in range(n):
            for u in range(a):
                s = lam0[x, y, u]
                for j in range(n):
                    s += nu[j] * lam1[j, x, y, u]
                out[x, y, u] = s
    for x in range(n):
        for u in range(a):
            s = 0.0
            for y in range(n):
                if y != x:
                    s += out[x, y, u]
            out[x, x, u] = -s


@njit(cache=True, nogil=True)
def _rewards_at(r0, r1, c_log, eps_log, nu, out):
    n, a = r0.shape
    for x in range(n):
        congestion = 0.0
        if c_log[x] != 0.0:
            m = nu[x]
            if m < eps_log:
                m = eps_log
            congestion = c_log[x] * np.log(m)
        for u in range(a):
            s = r0[x, u] + congestion
            for j in range(n):
                s += nu[j] * r1[j, x, u]
            out[x, u] = s


@njit(cache=True, nogil=True)
def _master_rhs(lam, mu, pi, out):
    """d mu(x)/dt = sum_u sum_y lam(y, x, u) mu(y) pi(u | y)."""
    n, a = pi.shape
    for x in range(n):
        s = 0.0
        for y in range(n):
            for u in range(a):
                s += lam[y, x, u] * mu[y] * pi[y, u]
        out[x] = s


@njit(cache=True, nogil=True)
def _q_at(lam, r, v, out):
    """Q(x, u) = r(x, u) + sum_y lam(x, y, u) v(y)."""
    n, a = r.shape
    for x in range(n):
        for u in range(a):
            s = r[x, u]
            for y in range(n):
                s += lam[x, y, u] * v[y]
            out[x, u] = s


@njit(cache=True, nogil=True)
def _soft_rhs(q, alpha, out):
    """dV/dt = -alpha * logsumexp(Q/alpha), computed with max subtraction."""
    n, a = q.shape
    for x in range(n):
        m = q[x, 0]
        for u in range(1, a):
            if q[x, u] > m:
                m = q[x, u]
        s = 0.0
        for u in range(a):
            s += np.exp((q[x, u] - m) / alpha)
        out[x] = -(m + alpha * np.log(s))


@njit(cache=True, nogil=True)
def _hard_rhs(q, out):
    n, a = q.shape
    for x in range(n):
        m = q[x, 0]
        for u in range(1, a):
            if q[x, u] > m:
                m = q[x, u]
        out[x] = -m


@njit(cache=True, nogil=True)
def _eval_rhs(q, pi, bonus, out):
    n, a = q.shape
    for x in range(n):
        s = bonus[x]
        for u in range(a):
            s += pi[x, u] * q[x, u]
        out[x] = -s


@njit(cache=True, nogil=True)
def forward_master(lam0, lam1, policy, mu0, dt, n_steps):
    """RK4 on the master equation with per-step simplex cleanup.

    Returns (mu_nodes, worst) where worst is the most negative entry seen
    before any cleanup; the caller decides whether it is a violation.
    """
    n = mu0.shape[0]
    a = lam0.shape[2]
    out = np.empty((n_steps + 1, n))
    out[0] = mu0
    lam = np.empty((n, n, a))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    mu = mu0.copy()
    worst = 0.0
    for k in range(n_steps):
        pi = policy[k]
        _rates_at(lam0, lam1, mu, lam)
        _master_rhs(lam, mu, pi, k1)
        for x in range(n):
            tmp[x] = mu[x] + 0.5 * dt * k1[x]
        _rates_at(lam0, lam1, tmp, lam)
        _master_rhs(lam, tmp, pi, k2)
        for x in range(n):
            tmp[x] = mu[x] + 0.5 * dt * k2[x]
        _rates_at(lam0, lam1, tmp, lam)
        _master_rhs(lam, tmp, pi, k3)
        for x in range(n):
            tmp[x] = mu[x] + dt * k3[x]
        _rates_at(lam0, lam1, tmp, lam)
        _master_rhs(lam, tmp, pi, k4)
        s = 0.0
        for x in range(n):
            mu[x] = mu[x] + (dt / 6.0) * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x])
            if mu[x] < worst:
                worst = mu[x]
            if mu[x] < 0.0:
                mu[x] = 0.0
            s += mu[x]
        for x in range(n):
            mu[x] /= s
        out[k + 1] = mu
    return out, worst


@njit(cache=True, nogil=True)
def backward_soft(lam0, lam1, r0, r1, c_log, eps_log, mu_nodes, q_term, alpha, dt):
    """RK4 on the log-sum-exp value ODE, terminal condition at the last node."""
    n_nodes = mu_nodes.shape[0]
    n = mu_nodes.shape[1]
    a = r0.shape[1]
    v_nodes = np.empty((n_nodes, n))
    v_nodes[n_nodes - 1] = q_term
    lam = np.empty((n, n, a))
    r = np.empty((n, a))
    q = np.empty((n, a))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    mu_half = np.empty(n)
    v = q_term.copy()
    h = -dt
    for k in range(n_nodes - 2, -1, -1):
        mu_hi = mu_nodes[k + 1]
        mu_lo = mu_nodes[k]
        for x in range(n):
            mu_half[x] = 0.5 * (mu_hi[x] + mu_lo[x])
        _rates_at(lam0, lam1, mu_hi, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_hi, r)
        _q_at(lam, r, v, q)
        _soft_rhs(q, alpha, k1)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k1[x]
        _rates_at(lam0, lam1, mu_half, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_half, r)
        _q_at(lam, r, tmp, q)
        _soft_rhs(q, alpha, k2)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k2[x]
        _q_at(lam, r, tmp, q)
        _soft_rhs(q, alpha, k3)
        for x in range(n):
            tmp[x] = v[x] + h * k3[x]
        _rates_at(lam0, lam1, mu_lo, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_lo, r)
        _q_at(lam, r, tmp, q)
        _soft_rhs(q, alpha, k4)
        for x in range(n):
            v[x] = v[x] + (h / 6.0) * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x])
        v_nodes[k] = v
    return v_nodes


@njit(cache=True, nogil=True)
def backward_hard(lam0, lam1, r0, r1, c_log, eps_log, mu_nodes, q_term, dt):
    """RK4 on the max-Bellman value ODE."""
    n_nodes = mu_nodes.shape[0]
    n = mu_nodes.shape[1]
    a = r0.shape[1]
    v_nodes = np.empty((n_nodes, n))
    v_nodes[n_nodes - 1] = q_term
    lam = np.empty((n, n, a))
    r = np.empty((n, a))
    q = np.empty((n, a))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    mu_half = np.empty(n)
    v = q_term.copy()
    h = -dt
    for k in range(n_nodes - 2, -1, -1):
        mu_hi = mu_nodes[k + 1]
        mu_lo = mu_nodes[k]
        for x in range(n):
            mu_half[x] = 0.5 * (mu_hi[x] + mu_lo[x])
        _rates_at(lam0, lam1, mu_hi, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_hi, r)
        _q_at(lam, r, v, q)
        _hard_rhs(q, k1)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k1[x]
        _rates_at(lam0, lam1, mu_half, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_half, r)
        _q_at(lam, r, tmp, q)
        _hard_rhs(q, k2)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k2[x]
        _q_at(lam, r, tmp, q)
        _hard_rhs(q, k3)
        for x in range(n):
            tmp[x] = v[x] + h * k3[x]
        _rates_at(lam0, lam1, mu_lo, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_lo, r)
        _q_at(lam, r, tmp, q)
        _hard_rhs(q, k4)
        for x in range(n):
            v[x] = v[x] + (h / 6.0) * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x])
        v_nodes[k] = v
    return v_nodes


@njit(cache=True, nogil=True)
def backward_eval(lam0, lam1, r0, r1, c_log, eps_log, mu_nodes, policy, bonus, q_term, dt):
    """RK4 on the linear policy-evaluation ODE with a per-interval entropy bonus."""
    n_nodes = mu_nodes.shape[0]
    n = mu_nodes.shape[1]
    a = r0.shape[1]
    v_nodes = np.empty((n_nodes, n))
    v_nodes[n_nodes - 1] = q_term
    lam = np.empty((n, n, a))
    r = np.empty((n, a))
    q = np.empty((n, a))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    mu_half = np.empty(n)
    v = q_term.copy()
    h = -dt
    for k in range(n_nodes - 2, -1, -1):
        mu_hi = mu_nodes[k + 1]
        mu_lo = mu_nodes[k]
        pi = policy[k]
        b = bonus[k]
        for x in range(n):
            mu_half[x] = 0.5 * (mu_hi[x] + mu_lo[x])
        _rates_at(lam0, lam1, mu_hi, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_hi, r)
        _q_at(lam, r, v, q)
        _eval_rhs(q, pi, b, k1)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k1[x]
        _rates_at(lam0, lam1, mu_half, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_half, r)
        _q_at(lam, r, tmp, q)
        _eval_rhs(q, pi, b, k2)
        for x in range(n):
            tmp[x] = v[x] + 0.5 * h * k2[x]
        _q_at(lam, r, tmp, q)
        _eval_rhs(q, pi, b, k3)
        for x in range(n):
            tmp[x] = v[x] + h * k3[x]
        _rates_at(lam0, lam1, mu_lo, lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_lo, r)
        _q_at(lam, r, tmp, q)
        _eval_rhs(q, pi, b, k4)
        for x in range(n):
            v[x] = v[x] + (h / 6.0) * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x])
        v_nodes[k] = v
    return v_nodes


@njit(cache=True, nogil=True)
def q_tables(lam0, lam1, r0, r1, c_log, eps_log, mu_nodes, v_nodes):
    """Q(x, u) at every node from the value table and the mean field."""
    n_nodes, n = v_nodes.shape
    a = r0.shape[1]
    q_nodes = np.empty((n_nodes, n, a))
    lam = np.empty((n, n, a))
    r = np.empty((n, a))
    for k in range(n_nodes):
        _rates_at(lam0, lam1, mu_nodes[k], lam)
        _rewards_at(r0, r1, c_log, eps_log, mu_nodes[k], r)
        _q_at(lam, r, v_nodes[k], q_nodes[k])
    return q_nodes
