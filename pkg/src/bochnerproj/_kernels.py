"""Hot numeric kernels, compiled with numba when available.

Backend selection: set ``BOCHNERPROJ_BACKEND=numpy`` to force the pure-NumPy
path; ``numba`` (or unset / ``auto``) uses the JIT path when numba imports.
Both backends run the same source, so results agree apart from summation-order
rounding inside NumPy reductions.

``benchmarks/bench_kernels.py`` times the two paths against each other on
oracle-sized workloads.
"""

from __future__ import annotations

import os

import numpy as np

ENV_VAR = "BOCHNERPROJ_BACKEND"


def _resolve_backend() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("numpy", "np"):
        return "numpy"
    if choice in ("", "auto", "numba"):
        try:
            import numba  # noqa: F401

            return "numba"
        except ImportError:
            if choice == "numba":
                raise RuntimeError(
                    f"{ENV_VAR}=numba requested but numba is not importable"
                )
            return "numpy"
    raise ValueError(f"unrecognized {ENV_VAR} value: {choice!r}")


BACKEND = _resolve_backend()


# ---------------------------------------------------------------------------
# kernel sources (written to run both as plain NumPy and under numba.njit)
# ---------------------------------------------------------------------------

def _row_norms(values, rho):
    # l_rho norm of each row of a (n, d) array
    return np.sum(np.abs(values) ** rho, axis=1) ** (1.0 / rho)


def _lp_norm(weights, values, rho, p):
    rn = np.sum(np.abs(values) ** rho, axis=1) ** (1.0 / rho)
    return np.sum(weights * rn ** p) ** (1.0 / p)


def _batch_penalty(weights, diffs, rho, p):
    # sum_i w_i ||row_i||_rho^p for every sample of a (m, n, d) batch
    rn = np.sum(np.abs(diffs) ** rho, axis=2) ** (1.0 / rho)
    return np.sum(weights * rn ** p, axis=1)


def _barrier_solve(gact, cact, wact, cons, rho, p, rad_pow,
                   bweights, grad_tol, dec_tol, max_iters):
    """Minimize sum_i w_i ||z_i - g_i||_rho^p over the active rows, subject to
    the optional constraint sum_{cons_i} w_i ||z_i - c_i||_rho^p <= rad_pow.

    Log-barrier continuation over ``bweights`` with Levenberg-damped Newton
    steps on each subproblem.  A stage ends when the gradient drops below
    grad_tol or the Newton decrement (predicted decrease -g.step) of an
    accepted, lightly-damped step falls below dec_tol; near a stiff barrier
    the raw gradient stays large while no improvement is left, and for
    rho < 2 the clamped Hessian makes steps small long before convergence,
    so neither gradient nor step size alone is a safe stop.
    Returns (z, final_grad_max, last_decrement, iters).
    """
    k, d = gact.shape
    m = k * d
    free = np.ones(k)

    def value_grad(z, anchor, mask):
        # value and gradient of sum_i w_i ||z_i - anchor_i||_rho^p
        val = 0.0
        grad = np.zeros((k, d))
        for i in range(k):
            if mask[i] < 0.5:
                continue
            rn = 0.0
            for a in range(d):
                rn += abs(z[i, a] - anchor[i, a]) ** rho
            rn = rn ** (1.0 / rho)
            if rn <= 0.0:
                continue
            val += wact[i] * rn ** p
            coef = wact[i] * p * rn ** (p - 1.0)
            for a in range(d):
                t = (z[i, a] - anchor[i, a]) / rn
                if t > 0.0:
                    grad[i, a] = coef * t ** (rho - 1.0)
                elif t < 0.0:
                    grad[i, a] = -coef * (-t) ** (rho - 1.0)
        return val, grad

    def hess_matrix(z, anchor, mask):
        # Hessian of the same penalty; row norms and coordinates clamped away
        # from zero so the rho < 2 singularity stays finite (damping absorbs it)
        eps = 1e-10
        hess = np.zeros((m, m))
        for i in range(k):
            if mask[i] < 0.5:
                continue
            rn = 0.0
            for a in range(d):
                rn += abs(z[i, a] - anchor[i, a]) ** rho
            rn = rn ** (1.0 / rho)
            if rn < eps:
                rn = eps
            base = wact[i] * p * rn ** (p - 2.0)
            for a in range(d):
                ta = (z[i, a] - anchor[i, a]) / rn
                if ta > 0.0:
                    sa = ta ** (rho - 1.0)
                elif ta < 0.0:
                    sa = -((-ta) ** (rho - 1.0))
                else:
                    sa = 0.0
                taa = abs(ta)
                if taa < eps:
                    taa = eps
                hess[i * d + a, i * d + a] += \
                    base * (rho - 1.0) * taa ** (rho - 2.0)
                for b in range(d):
                    tb = (z[i, b] - anchor[i, b]) / rn
                    if tb > 0.0:
                        sb = tb ** (rho - 1.0)
                    elif tb < 0.0:
                        sb = -((-tb) ** (rho - 1.0))
                    else:
                        sb = 0.0
                    hess[i * d + a, i * d + b] += base * (p - rho) * sa * sb
        return hess

    has_cons = False
    for i in range(k):
        if cons[i] > 0.5:
            has_cons = True
    z = gact.copy()
    if has_cons:
        for i in range(k):
            if cons[i] > 0.5:
                for a in range(d):
                    z[i, a] = cact[i, a]
    n_stages = bweights.shape[0] if has_cons else 1
    iters = 0
    gmax = 1e300
    last_dec = 1e300
    for stage in range(n_stages):
        w = bweights[stage] if has_cons else 0.0
        fval, fgrad = value_grad(z, gact, free)
        if has_cons:
            tval, tgrad = value_grad(z, cact, cons)
            cval = rad_pow - tval
            phi = fval - w * np.log(cval)
            grad = fgrad + (w / cval) * tgrad
        else:
            tgrad = fgrad
            cval = 1.0
            phi = fval
            grad = fgrad
        lam = 1e-8
        stage_dec = 1e300
        while iters < max_iters:
            iters += 1
            gmax = 0.0
            for i in range(k):
                for a in range(d):
                    if abs(grad[i, a]) > gmax:
                        gmax = abs(grad[i, a])
            if gmax <= grad_tol:
                break
            hess = hess_matrix(z, gact, free)
            if has_cons:
                thess = hess_matrix(z, cact, cons)
                gt = tgrad.reshape(m)
                for r in range(m):
                    for c in range(m):
                        hess[r, c] += (w / cval) * thess[r, c] \
                            + (w / (cval * cval)) * gt[r] * gt[c]
            gflat = grad.reshape(m)
            accepted = False
            while lam < 1e13:
                amat = hess.copy()
                for r in range(m):
                    amat[r, r] += lam + 1e-12
                step = np.linalg.solve(amat, -gflat)
                ztry = z + step.reshape((k, d))
                feasible = True
                tv2 = 0.0
                tg2 = tgrad
                if has_cons:
                    tv2, tg2 = value_grad(ztry, cact, cons)
                    if rad_pow - tv2 <= 0.0:
                        feasible = False
                if feasible:
                    fv2, fg2 = value_grad(ztry, gact, free)
                    if has_cons:
                        phi2 = fv2 - w * np.log(rad_pow - tv2)
                    else:
                        phi2 = fv2
                    if phi2 < phi:
                        z = ztry
                        phi = phi2
                        fgrad = fg2
                        if has_cons:
                            tgrad = tg2
                            cval = rad_pow - tv2
                            grad = fgrad + (w / cval) * tgrad
                        else:
                            grad = fgrad
                        dec = 0.0
                        for r in range(m):
                            dec -= gflat[r] * step[r]
                        if lam <= 1.0:
                            stage_dec = dec
                            last_dec = dec
                        if lam > 1e-12:
                            lam = lam / 3.0
                        accepted = True
                        break
                lam *= 10.0
            if not accepted:
                break
            if stage_dec <= dec_tol:
                break
    return z, gmax, last_dec, iters


NUMPY_IMPL = {
    "row_norms": _row_norms,
    "lp_norm": _lp_norm,
    "batch_penalty": _batch_penalty,
    "barrier_solve": _barrier_solve,
}

NUMBA_IMPL = None
if BACKEND == "numba":
    from numba import njit

    NUMBA_IMPL = {name: njit(cache=True)(fn) for name, fn in NUMPY_IMPL.items()}

_ACTIVE = NUMBA_IMPL if NUMBA_IMPL is not None else NUMPY_IMPL

row_norms = _ACTIVE["row_norms"]
lp_norm = _ACTIVE["lp_norm"]
batch_penalty = _ACTIVE["batch_penalty"]
barrier_solve = _ACTIVE["barrier_solve"]


def implementations():
    """Both backends keyed by kernel name; ``numba`` is None when unavailable."""
    return {"numpy": NUMPY_IMPL, "numba": NUMBA_IMPL}
