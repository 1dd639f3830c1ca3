"""Numba kernels for covariance-update coordinate descent."""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def kkt_violation(r, beta, lam):
    worst = 0.0
    for j in range(beta.shape[0]):
        if beta[j] > 0.0:
            v = abs(r[j] - lam)
        elif beta[j] < 0.0:
            v = abs(r[j] + lam)
        else:
            v = abs(r[j]) - lam
        if v > worst:
            worst = v
    return worst


@njit(cache=True, nogil=True)
def _update(G, r, beta, j, lam):
    gjj = G[j, j]
    old = beta[j]
    z = r[j] + gjj * old
    if z > lam:
        new = (z - lam) / gjj
    elif z < -lam:
        new = (z + lam) / gjj
    else:
        new = 0.0
    d = new - old
    if d != 0.0:
        beta[j] = new
        for k in range(r.shape[0]):
            r[k] -= G[k, j] * d
    return abs(d)


@njit(cache=True, nogil=True)
def _refresh(G, c, beta, r):
    p = beta.shape[0]
    for k in range(p):
        r[k] = c[k]
    for j in range(p):
        b = beta[j]
        if b != 0.0:
            for k in range(p):
                r[k] -= G[k, j] * b


@njit(cache=True, nogil=True)
def _objective(yy, c, r, beta, lam):
    # 0.5*yy - c.b + 0.5*b'Gb with Gb = c - r
    s = 0.5 * yy
    l1 = 0.0
    for j in range(beta.shape[0]):
        s -= 0.5 * beta[j] * (c[j] + r[j])
        l1 += abs(beta[j])
    return s + lam * l1


@njit(cache=True, nogil=True)
def cd_solve(G, c, yy, lam, beta, tol, max_iter, trace):
    """Cyclic coordinate descent on 0.5*b'Gb - c'b + lam*|b|_1 (+ 0.5*yy).

    ``beta`` is the warm start and is updated in place.  Full sweeps alternate
    with sweeps over the current active set.  Returns (kkt, sweeps, converged);
    when ``trace`` has room the objective after each sweep is written to it.
    """
    p = beta.shape[0]
    r = np.empty(p)
    _refresh(G, c, beta, r)
    sweeps = 0
    kkt = kkt_violation(r, beta, lam)
    if kkt <= tol:
        return kkt, sweeps, True
    active = np.empty(p, dtype=np.int64)
    while sweeps < max_iter:
        for j in range(p):
            _update(G, r, beta, j, lam)
        if sweeps < trace.shape[0]:
            trace[sweeps] = _objective(yy, c, r, beta, lam)
        sweeps += 1
        _refresh(G, c, beta, r)
        kkt = kkt_violation(r, beta, lam)
        if kkt <= tol:
            return kkt, sweeps, True
        m = 0
        for j in range(p):
            if beta[j] != 0.0:
                active[m] = j
                m += 1
        while sweeps < max_iter:
            moved = 0.0
            for a in range(m):
                moved = max(moved, _update(G, r, beta, active[a], lam))
            if sweeps < trace.shape[0]:
                trace[sweeps] = _objective(yy, c, r, beta, lam)
            sweeps += 1
            worst = 0.0
            for a in range(m):
                j = active[a]
                if beta[j] > 0.0:
                    v = abs(r[j] - lam)
                elif beta[j] < 0.0:
                    v = abs(r[j] + lam)
                else:
                    v = abs(r[j]) - lam
                if v > worst:
                    worst = v
            if worst <= 0.1 * tol or moved == 0.0:
                break
    _refresh(G, c, beta, r)
    kkt = kkt_violation(r, beta, lam)
    return kkt, sweeps, kkt <= tol
