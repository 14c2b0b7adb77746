"""Self-contained nonlinear least-squares engine.

A compact Levenberg-Marquardt implementation with a numerically differenced
Jacobian (central differences, cube-root-of-eps steps) and multiplicative
damping adaptation.  When the Jacobian is rank-deficient at the starting
point the engine drops to a Nelder-Mead simplex search on the same objective
and says so in the result's convention notes.

The engine never raises on mere non-convergence: hitting the iteration cap
returns the best parameters seen with ``converged=False`` and lets the caller
decide how bad that is.  Pipelines are expected to feed residuals in natural
units of order one so the fixed step/gradient tolerances are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadInput

_EPS_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)
_XTOL = 1e-10
_GTOL = 1e-12
_MAX_ITER = 500
_RANK_RTOL = 1e-10


@dataclass
class FitResult:
    """Outcome of one fit: named parameters, their errors, and bookkeeping.

    ``stderr`` comes from the Jacobian at the optimum (scaled by the reduced
    residual); entries are non-negative, and huge values flag directions the
    data did not constrain.  ``convention_notes`` records any non-default
    route taken (simplex fallback, auto-selected conventions, ...).
    """

    params: dict[str, float]
    stderr: dict[str, float]
    residual_norm: float
    iterations: int
    converged: bool
    convention_notes: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, err in self.stderr.items():
            if err < 0.0:  # pragma: no cover - construction guard
                raise BadInput(f"stderr[{name!r}] must be non-negative")


def _jacobian(residual, p: np.ndarray, r0: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of the residual vector at p."""
    m, n = r0.size, p.size
    jac = np.empty((m, n))
    for i in range(n):
        h = _EPS_STEP * max(abs(p[i]), 1.0)
        pp = p.copy()
        pm = p.copy()
        pp[i] += h
        pm[i] -= h
        jac[:, i] = (residual(pp) - residual(pm)) / (2.0 * h)
    return jac


def _nelder_mead(cost, p0: np.ndarray, max_fev: int = 4000):
    """Plain Nelder-Mead on ``cost``; returns (best_p, best_cost, fevals)."""
    n = p0.size
    simplex = [p0.copy()]
    for i in range(n):
        q = p0.copy()
        step = 0.05 * max(abs(q[i]), 1.0)
        q[i] += step
        simplex.append(q)
    values = [cost(q) for q in simplex]
    fev = n + 1
    while fev < max_fev:
        order = np.argsort(values)
        simplex = [simplex[k] for k in order]
        values = [values[k] for k in order]
        spread = max(
            float(np.max(np.abs(q - simplex[0]))) for q in simplex[1:]
        )
        scale = max(1.0, float(np.max(np.abs(simplex[0]))))
        if spread < 1e-12 * scale or values[-1] - values[0] < 1e-24 * max(1.0, values[0]):
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        refl = centroid + (centroid - worst)
        f_refl = cost(refl)
        fev += 1
        if f_refl < values[0]:
            expa = centroid + 2.0 * (centroid - worst)
            f_expa = cost(expa)
            fev += 1
            if f_expa < f_refl:
                simplex[-1], values[-1] = expa, f_expa
            else:
                simplex[-1], values[-1] = refl, f_refl
        elif f_refl < values[-2]:
            simplex[-1], values[-1] = refl, f_refl
        else:
            contr = centroid + 0.5 * (worst - centroid)
            f_contr = cost(contr)
            fev += 1
            if f_contr < values[-1]:
                simplex[-1], values[-1] = contr, f_contr
            else:
                best = simplex[0]
                for k in range(1, n + 1):
                    simplex[k] = best + 0.5 * (simplex[k] - best)
                    values[k] = cost(simplex[k])
                fev += n
    order = np.argsort(values)
    return simplex[order[0]].copy(), float(values[order[0]]), fev


def _stderr_from_jacobian(jac: np.ndarray, residual_norm: float) -> np.ndarray:
    """Per-parameter standard errors s^2 * pinv(J^T J), clipped non-negative."""
    m, n = jac.shape
    dof = max(m - n, 1)
    s2 = residual_norm / dof
    cov = s2 * np.linalg.pinv(jac.T @ jac)
    return np.sqrt(np.clip(np.diag(cov), 0.0, None))


def least_squares(
    model,
    p0,
    x,
    y,
    sigma=None,
    names: tuple[str, ...] | None = None,
    max_iter: int = _MAX_ITER,
) -> FitResult:
    """Fit ``model(x, p)`` to ``y`` in the (weighted) least-squares sense.

    Parameters
    ----------
    model : callable(x, p) -> ndarray of predictions.
    p0 : initial parameter vector (finite).
    x, y : the data; ``len(y)`` must be at least ``len(p0)``.
    sigma : optional per-point standard deviations (weights 1/sigma).
    names : parameter names for the result dictionaries; defaults to p0..pN.
    max_iter : Levenberg-Marquardt iteration cap.

    Returns
    -------
    FitResult -- with ``converged=False`` (never an exception) when the cap
    is hit; the simplex fallback is engaged and noted when the starting
    Jacobian is rank-deficient.
    """
    p = np.asarray(p0, dtype=float).ravel().copy()
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise BadInput("initial parameters must be a non-empty finite vector")
    y = np.asarray(y, dtype=float).ravel()
    if y.size < p.size:
        raise BadInput(
            f"need at least as many data points ({y.size}) as parameters ({p.size})"
        )
    if sigma is not None:
        sigma = np.asarray(sigma, dtype=float).ravel()
        if sigma.shape != y.shape or np.any(sigma <= 0.0):
            raise BadInput("sigma must be positive and match y in length")
    if names is None:
        names = tuple(f"p{i}" for i in range(p.size))
    elif len(names) != p.size:
        raise BadInput("names must match the parameter count")

    def residual(q):
        pred = np.asarray(model(x, q), dtype=float).ravel()
        if pred.shape != y.shape:
            raise BadInput("model output shape does not match y")
        r = pred - y
        if sigma is not None:
            r = r / sigma
        return np.where(np.isfinite(r), r, 1e150)

    r = residual(p)
    cost = float(r @ r)
    if not math.isfinite(cost):
        raise BadInput("model is non-finite at the initial parameters")

    notes = []
    jac = _jacobian(residual, p, r)
    sv = np.linalg.svd(jac, compute_uv=False)
    rank = int(np.sum(sv > _RANK_RTOL * max(sv[0], 1e-300)))
    if rank < p.size:
        p_best, cost_best, fev = _nelder_mead(lambda q: float(residual(q) @ residual(q)), p)
        notes.append(
            f"simplex fallback: Jacobian rank {rank}/{p.size} at start ({fev} evaluations)"
        )
        r_best = residual(p_best)
        jac_best = _jacobian(residual, p_best, r_best)
        stderr = _stderr_from_jacobian(jac_best, cost_best)
        return FitResult(
            params=dict(zip(names, p_best.tolist())),
            stderr=dict(zip(names, stderr.tolist())),
            residual_norm=cost_best,
            iterations=fev,
            converged=True,
            convention_notes="; ".join(notes),
        )

    lam = 1e-3
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        g = jac.T @ r
        if float(np.max(np.abs(g))) < _GTOL:
            converged = True
            break
        jtj = jac.T @ jac
        damped = jtj + lam * np.diag(np.clip(np.diag(jtj), 1e-300, None))
        try:
            step = np.linalg.solve(damped, -g)
        except np.linalg.LinAlgError:  # pragma: no cover - damping guards this
            lam *= 10.0
            continue
        p_try = p + step
        r_try = residual(p_try)
        cost_try = float(r_try @ r_try)
        if cost_try < cost:
            rel_step = float(np.linalg.norm(step)) / (float(np.linalg.norm(p)) + 1e-300)
            p, r, cost = p_try, r_try, cost_try
            lam = max(lam / 3.0, 1e-12)
            jac = _jacobian(residual, p, r)
            if rel_step < _XTOL:
                converged = True
                break
        else:
            lam *= 10.0
            if lam > 1e12:
                # Damping exhausted: the step has effectively collapsed.
                converged = True
                break

    if not converged:
        notes.append(f"iteration cap {max_iter} reached without convergence")
    stderr = _stderr_from_jacobian(jac, cost)
    return FitResult(
        params=dict(zip(names, p.tolist())),
        stderr=dict(zip(names, stderr.tolist())),
        residual_norm=cost,
        iterations=iterations,
        converged=converged,
        convention_notes="; ".join(notes),
    )
