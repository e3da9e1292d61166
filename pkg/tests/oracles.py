"""Independent reference computations used by the test-suite.

None of these call into the routines they are used to check.
"""
import functools

import cvxpy as cp
import numpy as np


CLARABEL_OPTS = dict(tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11,
                     tol_ktratio=1e-9, max_iter=500)


@functools.lru_cache(maxsize=None)
def _d_problem(n, k):
    U = cp.Parameter((n, k))
    v = cp.Parameter(n)
    W = cp.Variable((n, k))
    t = cp.Variable(n)
    cons = [cp.norm(W[i, :], 2) <= t[i] for i in range(n)]
    obj = 0.5 * cp.sum_squares(W - U) + 0.5 * cp.sum_squares(t - v)
    return cp.Problem(cp.Minimize(obj), cons), U, v, W, t


@functools.lru_cache(maxsize=None)
def _z_problem(n, k):
    U = cp.Parameter((n, k))
    z = cp.Parameter(nonneg=True)
    W = cp.Variable((n, k))
    cons = [cp.sum(cp.norm(W, 2, axis=1)) <= z]
    return cp.Problem(cp.Minimize(0.5 * cp.sum_squares(W - U)), cons), U, z, W


def conic_project_D(v, U):
    """Projection onto the cone product by an interior-point conic solver."""
    prob, Up, vp, W, t = _d_problem(*U.shape)
    Up.value, vp.value = U, v
    prob.solve(solver=cp.CLARABEL, **CLARABEL_OPTS)
    return t.value, W.value


def conic_project_Z(U, z):
    prob, Up, zp, W = _z_problem(*U.shape)
    Up.value, zp.value = U, z
    prob.solve(solver=cp.CLARABEL, **CLARABEL_OPTS)
    return W.value


def constrained_lsq_optimum(A, b, shape, z):
    """min 1/2 ||A vec(X) - b||^2 over the l2,1-ball, via the conic solver."""
    X = cp.Variable(shape)
    obj = 0.5 * cp.sum_squares(A @ cp.vec(X, order="C") - b)
    prob = cp.Problem(cp.Minimize(obj), [cp.sum(cp.norm(X, 2, axis=1)) <= z])
    prob.solve(solver=cp.CLARABEL, **CLARABEL_OPTS)
    return X.value, prob.value


def central_difference(f, X, h=1e-5):
    X = np.array(X, dtype=float)
    G = np.zeros_like(X)
    for idx in np.ndindex(X.shape):
        E = np.zeros_like(X)
        E[idx] = h
        G[idx] = (f(X + E) - f(X - E)) / (2 * h)
    return G


def bisect_root(fun, lo, hi, tol=1e-12):
    flo = fun(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (fun(mid) > 0) == (flo > 0):
            lo, flo = mid, fun(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lasso_cd(A, y, rho, tol=1e-14, max_sweeps=100000):
    """Cyclic coordinate descent for 1/2 ||y - A w||^2 + rho ||w||_1."""
    n = A.shape[1]
    w = np.zeros(n)
    col_sq = np.einsum("ij,ij->j", A, A)
    r = y.copy()
    for _ in range(max_sweeps):
        delta = 0.0
        for i in range(n):
            if col_sq[i] == 0:
                continue
            old = w[i]
            rho_i = A[:, i] @ r + col_sq[i] * old
            new = np.sign(rho_i) * max(abs(rho_i) - rho, 0.0) / col_sq[i]
            if new != old:
                r -= A[:, i] * (new - old)
                w[i] = new
                delta = max(delta, abs(new - old))
        if delta < tol:
            break
    return w


def lasso_objective(A, y, w, rho):
    r = y - A @ w
    return 0.5 * r @ r + rho * np.abs(w).sum()


def group_shrink_rows(Y, rho):
    """Closed-form optimum of 1/2 ||W - Y||_F^2 + rho ||W||_{2,1}, written row by row."""
    out = np.zeros_like(Y)
    for i, row in enumerate(Y):
        nrm = np.sqrt(np.sum(row ** 2))
        if nrm > rho:
            out[i] = (1 - rho / nrm) * row
    return out


def grid_project_cone(v, u, half_width=6.0, rounds=40, pts=21):
    """Brute-force nearest point of {(t, w): ||w|| <= t} in 2-D w, by zooming grids.

    Feasible points are parametrised as t >= 0, w = r (cos a, sin a), 0 <= r <= t.
    """
    best = None
    t_lo, t_hi = 0.0, half_width
    f_lo, f_hi = 0.0, 1.0
    a_lo, a_hi = -np.pi, np.pi
    for _ in range(rounds):
        T, F, Ang = np.meshgrid(np.linspace(t_lo, t_hi, pts), np.linspace(f_lo, f_hi, pts),
                                np.linspace(a_lo, a_hi, pts), indexing="ij")
        R = F * T
        W0, W1 = R * np.cos(Ang), R * np.sin(Ang)
        cost = (W0 - u[0]) ** 2 + (W1 - u[1]) ** 2 + (T - v) ** 2
        i = np.unravel_index(np.argmin(cost), cost.shape)
        best = (T[i], np.array([W0[i], W1[i]]))
        dt, df, da = (t_hi - t_lo) / 4, (f_hi - f_lo) / 4, (a_hi - a_lo) / 4
        t_lo, t_hi = max(0.0, T[i] - dt), T[i] + dt
        f_lo, f_hi = max(0.0, F[i] - df), min(1.0, F[i] + df)
        a_lo, a_hi = Ang[i] - da, Ang[i] + da
    return best
