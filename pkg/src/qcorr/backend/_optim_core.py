"""Derivative-free local minimizers shared by both backends.

Written in the numpy subset that numba can compile: the numba backend
wraps these functions with @njit and passes jitted objectives, the numpy
backend runs the very same source interpreted with vectorized objectives.
`payload` is an opaque tuple forwarded to the objective.
"""

import numpy as np


def nelder_mead(f, payload, x0, max_iters, value_tol, step_tol, init_step):
    """Nelder-Mead simplex with dimension-adaptive coefficients.

    Returns (best value, best point, iterations, converged).  The best
    vertex is monotone nonincreasing, so the result never exceeds f(x0).
    """
    n = x0.size
    alpha = 1.0
    gamma = 1.0 + 2.0 / n
    beta = 0.75 - 1.0 / (2.0 * n)
    delta = 1.0 - 1.0 / n
    m = n + 1

    xs = np.empty((m, n))
    fs = np.empty(m)
    xs[0] = x0
    fs[0] = f(x0, payload)
    for i in range(n):
        xi = x0.copy()
        xi[i] += init_step
        xs[i + 1] = xi
        fs[i + 1] = f(xi, payload)

    converged = False
    it = 0
    while it < max_iters:
        it += 1
        order = np.argsort(fs)
        xs = xs[order]
        fs = fs[order]

        if fs[m - 1] - fs[0] <= value_tol:
            size = 0.0
            for i in range(1, m):
                diff = np.abs(xs[i] - xs[0]).max()
                if diff > size:
                    size = diff
            if size <= step_tol or fs[m - 1] - fs[0] <= value_tol * 1e-2:
                converged = True
                break

        centroid = np.sum(xs[: m - 1], axis=0) / n
        xr = centroid + alpha * (centroid - xs[m - 1])
        fr = f(xr, payload)

        if fr < fs[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe, payload)
            if fe < fr:
                xs[m - 1] = xe
                fs[m - 1] = fe
            else:
                xs[m - 1] = xr
                fs[m - 1] = fr
        elif fr < fs[m - 2]:
            xs[m - 1] = xr
            fs[m - 1] = fr
        else:
            shrink = False
            if fr < fs[m - 1]:
                xc = centroid + beta * (xr - centroid)
                fc = f(xc, payload)
                if fc <= fr:
                    xs[m - 1] = xc
                    fs[m - 1] = fc
                else:
                    shrink = True
            else:
                xc = centroid - beta * (centroid - xs[m - 1])
                fc = f(xc, payload)
                if fc < fs[m - 1]:
                    xs[m - 1] = xc
                    fs[m - 1] = fc
                else:
                    shrink = True
            if shrink:
                for i in range(1, m):
                    xs[i] = xs[0] + delta * (xs[i] - xs[0])
                    fs[i] = f(xs[i], payload)

    best = int(np.argmin(fs))
    return fs[best], xs[best].copy(), it, converged


def direct_search(f, payload, x0, max_iters, value_tol, step_tol, init_step):
    """Compass search with step expansion on success, halving on failure."""
    x = x0.copy()
    fx = f(x, payload)
    step = init_step
    converged = False
    it = 0
    signs = np.array([1.0, -1.0])
    while it < max_iters:
        it += 1
        best_i = -1
        best_sign = 0.0
        best_f = fx
        for i in range(x.size):
            for k in range(2):
                trial = x.copy()
                trial[i] += signs[k] * step
                ft = f(trial, payload)
                if ft < best_f:
                    best_f = ft
                    best_i = i
                    best_sign = signs[k]
        if best_i >= 0:
            x[best_i] += best_sign * step
            fx = best_f
            step = min(step * 2.0, init_step * 4.0)
        else:
            step *= 0.5
            if step < step_tol:
                converged = True
                break
    return fx, x, it, converged
