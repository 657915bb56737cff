"""
Deficiency probes
=================

Numerical evidence about ``ker(H_max -+ i nu)`` on ``l^2``.  Two routes:

* **shooting** (path families only).  ``H`` is pentadiagonal on a path, so
  the vertex equation ``(H u)(k) = s u(k)``, ``s = +-i nu``, determines
  ``u(k+2)`` from ``u(k-2..k+1)``.  The equations at ``k = 0, 1`` leave
  ``u(0), u(1)`` free, so the solution space is two dimensional.  Each basis
  solution, and the slowest growing combination found by periodic
  re-orthogonalisation, is classified by the growth of its partial norms.
* **rectangular residual** (any family).  For each horizon ``N`` the exact
  rows ``B(x0, N-2)`` of ``H - s`` acting on ``B(x0, N)`` are stacked with
  identity rows on the shell ``N-1 <= r <= N``; ``s_N`` is the smallest
  singular value of that square matrix.  A normalised ``l^2`` solution
  restricted to ``B(x0, N)`` has residual equal to its shell mass, which
  tends to zero, so a defect element forces ``s_N -> 0``.

Both are heuristics.  Conclusions are limited to the three labels in
:data:`CONCLUSIONS`; neither route proves anything.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, MagbilapError
from .operators import Potential, assemble_truncation
from .svd import min_singular_value

__all__ = [
    "CONCLUSIONS",
    "CAVEAT",
    "ShootingConfig",
    "ShootingSolution",
    "ProbeReport",
    "ConsistencyReport",
    "shoot",
    "shoot_from",
    "shooting_probe",
    "rectangular_residual",
    "dirichlet_floor",
    "consistency_probe",
]

CONCLUSIONS = ("consistent_with_delta_zero", "defect_suspected", "inconclusive")
CAVEAT = ("heuristic numerical evidence on finite truncations; it neither proves nor "
          "disproves essential self-adjointness")

_BIG = 1e100


@dataclass(frozen=True)
class ShootingConfig:
    """Thresholds of the growth classification.

    ``divergent_factor``: partial norms growing at least this much over the
    last quarter mean divergence.  ``decay_ratio``: a geometric mean ratio of
    the tail increments at most this value marks a square-summable candidate.
    """

    divergent_factor: float = 10.0
    decay_ratio: float = 0.99
    tail_fraction: float = 0.25
    reorth_every: int = 4
    residual_tol: float = 1e-8

    def __post_init__(self):
        if not self.divergent_factor > 1:
            raise InputError("divergent_factor must exceed 1")
        if not 0 < self.decay_ratio <= 1:
            raise InputError("decay_ratio must lie in (0, 1]")
        if not 0 < self.tail_fraction < 1:
            raise InputError("tail_fraction must lie in (0, 1)")
        if self.reorth_every < 1:
            raise InputError("reorth_every must be positive")


@dataclass
class ShootingSolution:
    """A solution of ``(H u)(k) = s u(k)`` on the path, stored with a log scale.

    ``u(k) = mantissa[k] * exp(log_scale[k])``.
    """

    nu: float
    sign: int
    basis_index: str
    initial: tuple
    mantissa: np.ndarray
    log_scale: np.ndarray
    mu: np.ndarray
    growth_class: str = "undetermined"
    residual: float = float("nan")

    @property
    def horizon(self):
        return self.mantissa.size - 1

    @property
    def log_abs(self):
        """``log |u(k)|`` (``-inf`` where ``u(k) = 0``)."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.mantissa)) + self.log_scale

    @property
    def log_partial_norms(self):
        """``log P_N`` with ``P_N = sum_{k <= N} mu(k) |u(k)|^2``."""
        with np.errstate(divide="ignore"):
            terms = np.log(self.mu) + 2.0 * self.log_abs
        return np.logaddexp.accumulate(terms)

    def values_at(self, log_ref=0.0):
        """``u(k) * exp(-log_ref)``; entries below the float range become 0."""
        with np.errstate(over="ignore", under="ignore"):
            return self.mantissa * np.exp(self.log_scale - log_ref)

    @property
    def values(self):
        """Plain values; overflow to ``inf`` for fast growing solutions."""
        with np.errstate(over="ignore", invalid="ignore"):
            return self.values_at(0.0)

    @property
    def partial_norms(self):
        with np.errstate(over="ignore"):
            return np.exp(self.log_partial_norms)

    def summary(self):
        lp = self.log_partial_norms
        return {"basis_index": self.basis_index, "growth_class": self.growth_class,
                "initial": [[float(c.real), float(c.imag)] for c in self.initial],
                "log10_partial_norm_end": float(lp[-1] / math.log(10)),
                "residual": float(self.residual)}

    def to_csv(self):
        """``k, |u(k)|, P_k`` plus base-10 logs (the plain columns may overflow)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "abs_u", "partial_norm", "log10_abs_u", "log10_partial_norm"])
        la, lp = self.log_abs, self.log_partial_norms
        with np.errstate(over="ignore"):
            au, pn = np.exp(la), np.exp(lp)
        for k in range(la.size):
            w.writerow([k, repr(float(au[k])), repr(float(pn[k])),
                        repr(float(la[k] / math.log(10))), repr(float(lp[k] / math.log(10)))])
        return buf.getvalue()


def _path_band(f, W, horizon):
    """Diagonals ``h[o][k] = H[k, k+o]`` (``o = -2..2``) for rows ``0..horizon-2``."""
    # a path has one vertex per level, so the size test avoids generating a
    # large ball of some other family
    if f.size is not None and f.size(horizon) != horizon + 1:
        raise InputError(f"shooting needs a path family; {f.name} is not one")
    g = f.generate(horizon)
    n = g.n_vertices
    if not (np.array_equal(g.level, np.arange(n))
            and np.all(np.abs(g.src - g.dst) == 1)):
        raise InputError(f"shooting needs a path family; {f.name} is not one")
    L = g.laplacian_matrix(True)
    H = (L @ L).tocsr()
    w = W.on(g) if isinstance(W, Potential) else np.asarray(W, dtype=float)
    rows = n - 2
    band = {}
    for o in range(-2, 3):
        diag = np.zeros(rows, dtype=complex)
        d = H.diagonal(o)
        start = max(0, -o)
        take = d[:rows - start]
        diag[start:start + take.size] = take
        band[o] = diag
    band[0] = band[0] + w[:rows]
    if np.any(band[2] == 0):
        k = int(np.flatnonzero(band[2] == 0)[0])
        raise MagbilapError(f"zero leading coefficient in the recurrence at k={k}")
    return g, band


def _propagate(band, s, X, horizon, reorth_every=0):
    """Run the recurrence for the columns of ``X`` (initial ``u(0), u(1)``).

    Returns mantissas ``(horizon+1, m)``, log scales and, when
    ``reorth_every`` is positive, the coefficient matrix ``C`` whose last
    column is the slowest growing combination.
    """
    m = X.shape[1]
    U = np.zeros((horizon + 1, m), dtype=complex)
    logs = np.zeros((horizon + 1, m))
    U[:2] = X
    scale = np.zeros(m)
    C = np.eye(m, dtype=complex)
    for k in range(horizon - 1):
        lo = max(0, k - 2)
        acc = s * U[k]
        for j in range(lo, k + 2):
            acc = acc - band[j - k][k] * U[j]
        U[k + 2] = acc / band[2][k]
        logs[k + 2] = scale
        win = slice(max(0, k - 1), k + 3)
        peak = np.abs(U[win]).max(axis=0)
        resc = (peak > _BIG) | ((peak < 1 / _BIG) & (peak > 0))
        if np.any(resc):
            fac = np.where(resc, peak, 1.0)
            U[win] = U[win] / fac
            scale = scale + np.log(fac)
            logs[win] = logs[win] + np.log(fac)
        if reorth_every and m > 1 and (k + 1) % reorth_every == 0:
            # all columns must share one scale before mixing them
            win = slice(k - 1, k + 3)
            ref = scale.max()
            Wn = U[win] * np.exp(scale - ref)
            Q, R = np.linalg.qr(Wn)
            if np.all(np.abs(np.diagonal(R)) > 0):
                # columns of U are now (basis solutions) @ C up to one common factor
                C = np.linalg.solve(R.T, C.T).T
                C /= np.abs(C).max()
                U[win] = Q
                scale = np.zeros(m)
                logs[win] = 0.0
    return U, logs, C


def _classify(sol, cfg):
    lp = sol.log_partial_norms
    n = lp.size
    q = max(2, int(math.ceil(n * cfg.tail_fraction)))
    a = n - q
    if lp[-1] - lp[a] >= math.log(cfg.divergent_factor):
        return "divergent"
    with np.errstate(divide="ignore"):
        terms = np.log(sol.mu) + 2.0 * sol.log_abs
    tail = terms[a:]
    if np.all(np.isfinite(tail)):
        mean_log_ratio = (tail[-1] - tail[0]) / (tail.size - 1)
        if mean_log_ratio <= math.log(cfg.decay_ratio):
            return "square_summable_candidate"
    elif np.all(tail[-1:] == -np.inf) and np.isfinite(lp[-1]):
        return "square_summable_candidate"
    return "undetermined"


def _residual(band, s, sol):
    """Largest ``|(H u)(k) - s u(k)|`` over ``k = 0..horizon-2``, each measured
    relative to ``max |u|`` on the stencil of ``k``."""
    la = sol.log_abs
    worst = 0.0
    for k in range(sol.horizon - 1):
        lo = max(0, k - 2)
        ref = la[lo:k + 3].max()
        if not np.isfinite(ref):
            continue
        v = sol.values_at(ref)
        r = -s * v[k]
        for j in range(lo, k + 3):
            r = r + band[j - k][k] * v[j]
        worst = max(worst, abs(r))
    return worst


def _check(nu, sign, horizon):
    nu = float(nu)
    if nu == 0 or not math.isfinite(nu):
        raise InputError("nu must be a nonzero real number")
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    horizon = int(horizon)
    if horizon < 10:
        raise InputError("shooting horizon must be at least 10")
    return nu, sign, horizon


def _solution(band, s, g, U, logs, col, nu, sign, label, initial, cfg):
    sol = ShootingSolution(nu=nu, sign=sign, basis_index=label,
                           initial=tuple(complex(c) for c in initial),
                           mantissa=U[:, col].copy(), log_scale=logs[:, col].copy(),
                           mu=g.mu.copy())
    sol.growth_class = _classify(sol, cfg)
    sol.residual = _residual(band, s, sol)
    return sol


def shoot_from(f, W, nu, sign, horizon, initial, config=None):
    """Solution with initial data ``(u(0), u(1)) = initial``."""
    cfg = config or ShootingConfig()
    nu, sign, horizon = _check(nu, sign, horizon)
    g, band = _path_band(f, W, horizon)
    s = sign * 1j * nu
    X = np.asarray(initial, dtype=complex).reshape(2, 1)
    U, logs, _ = _propagate(band, s, X, horizon)
    return _solution(band, s, g, U, logs, 0, nu, sign, "custom", X[:, 0], cfg)


def shoot(f, W, nu=1.0, sign=1, horizon=200, config=None):
    """Basis solutions ``e1``, ``e2`` and the slowest growing combination.

    Returns three :class:`ShootingSolution` objects with ``basis_index``
    ``"e1"``, ``"e2"`` and ``"min_growth"``.
    """
    cfg = config or ShootingConfig()
    nu, sign, horizon = _check(nu, sign, horizon)
    g, band = _path_band(f, W, horizon)
    s = sign * 1j * nu
    X = np.eye(2, dtype=complex)
    U, logs, _ = _propagate(band, s, X, horizon)
    out = [_solution(band, s, g, U, logs, j, nu, sign, f"e{j + 1}", X[:, j], cfg)
           for j in range(2)]
    _, _, C = _propagate(band, s, X, horizon, reorth_every=cfg.reorth_every)
    c = C[:, -1]
    # fix the global phase so the combination is reproducible
    c = c / np.linalg.norm(c)
    piv = np.flatnonzero(np.abs(c) > 1e-14)[0]
    c = c * (abs(c[piv]) / c[piv])
    Um, logm, _ = _propagate(band, s, c.reshape(2, 1), horizon)
    out.append(_solution(band, s, g, Um, logm, 0, nu, sign, "min_growth", c, cfg))
    return out


@dataclass
class ProbeReport:
    method: str
    nu: float
    horizons: list
    diagnostics: list
    conclusion: str
    caveat: str = CAVEAT
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.conclusion not in CONCLUSIONS:
            raise ValueError(f"unknown conclusion {self.conclusion!r}")

    def to_json(self):
        return {"method": self.method, "nu": self.nu, "horizons": self.horizons,
                "diagnostics": self.diagnostics, "conclusion": self.conclusion,
                "caveat": self.caveat, "settings": self.settings}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def shooting_probe(f, W, nu=1.0, horizon=200, signs=(1, -1), config=None):
    """Shoot for each sign and combine the growth classes into a conclusion."""
    cfg = config or ShootingConfig()
    diags, classes = [], []
    for sign in signs:
        sols = shoot(f, W, nu, sign, horizon, cfg)
        for sol in sols:
            if sol.residual > cfg.residual_tol:
                raise MagbilapError(f"shooting residual {sol.residual:.3g} above "
                                    f"{cfg.residual_tol:g}; recurrence is unreliable")
        classes += [s.growth_class for s in sols]
        diags.append({"sign": "+" if sign > 0 else "-",
                      "solutions": [s.summary() for s in sols]})
    if "square_summable_candidate" in classes:
        conclusion = "defect_suspected"
    elif all(c == "divergent" for c in classes):
        conclusion = "consistent_with_delta_zero"
    else:
        conclusion = "inconclusive"
    settings = {"family": f.description(), "potential": getattr(W, "text", ""),
                "divergent_factor": cfg.divergent_factor, "decay_ratio": cfg.decay_ratio,
                "tail_fraction": cfg.tail_fraction, "reorth_every": cfg.reorth_every}
    return ProbeReport(method="shooting", nu=float(nu), horizons=[int(horizon)],
                       diagnostics=diags, conclusion=conclusion, settings=settings)


def _augmented(f, W, nu, sign, N, max_columns):
    op = assemble_truncation(f, W, N, boundary="interior_rows")
    m, n = op.shape
    if n > max_columns:
        raise InputError(f"B(x0, {N}) has {n} vertices, above the dense SVD cap "
                         f"{max_columns}; use a smaller horizon")
    A = op.toarray()
    col = {v: j for j, v in enumerate(op.col_ids)}
    rows = np.array([col[v] for v in op.row_ids])
    A[np.arange(m), rows] -= sign * 1j * nu
    shell = np.setdiff1d(np.arange(n), rows)
    E = np.zeros((shell.size, n), dtype=complex)
    E[np.arange(shell.size), shell] = 1.0
    return A, np.vstack([A, E])


def _decreasing_collapse(s, min_run, collapse_ratio):
    run = 1
    for i in range(1, len(s)):
        run = run + 1 if s[i] < s[i - 1] else 1
        if run >= min_run and s[i] <= collapse_ratio * s[i - run + 1]:
            return True
    return False


def rectangular_residual(f, W, nu=1.0, sign=1, horizons=(20, 40, 60, 80), max_columns=4000,
                         min_run=3, collapse_ratio=0.5, floor=1e-6):
    """Smallest singular values ``s_N`` of the shell-augmented interior-rows operator.

    ``defect_suspected`` needs ``s_N`` strictly decreasing over at least
    ``min_run`` successive horizons and dropping to ``collapse_ratio`` of the
    run's first value; ``consistent_with_delta_zero`` needs no such run and
    every ``s_N >= floor * |nu|``.  The plain smallest singular value of the
    rectangular operator is reported alongside (it is at least ``|nu|``-like
    by construction and carries no kernel information).
    """
    horizons = [int(h) for h in horizons]
    if not horizons or any(h < 6 for h in horizons):
        raise InputError("horizons must be at least 6")
    if any(b <= a for a, b in zip(horizons, horizons[1:])):
        raise InputError("horizons must be strictly increasing")
    nu = float(nu)
    if nu == 0 or not math.isfinite(nu):
        raise InputError("nu must be a nonzero real number")
    diags, svals = [], []
    for N in horizons:
        A, Aug = _augmented(f, W, nu, sign, N, max_columns)
        sN = min_singular_value(Aug)
        svals.append(sN)
        diags.append({"N": N, "rows": int(A.shape[0]), "columns": int(A.shape[1]),
                      "s_N": sN, "sigma_min_interior_rows": min_singular_value(A)})
    if _decreasing_collapse(svals, min_run, collapse_ratio):
        conclusion = "defect_suspected"
    elif min(svals) >= floor * abs(nu):
        conclusion = "consistent_with_delta_zero"
    else:
        conclusion = "inconclusive"
    settings = {"family": f.description(), "potential": getattr(W, "text", ""),
                "sign": "+" if sign > 0 else "-", "min_run": min_run,
                "collapse_ratio": collapse_ratio, "floor": floor,
                "observed_floor": min(svals)}
    return ProbeReport(method="rectangular_residual", nu=nu, horizons=horizons,
                       diagnostics=diags, conclusion=conclusion, settings=settings)


def dirichlet_floor(f, W, nu, N):
    """Smallest singular value of ``A_N - i nu`` for the Hermitian Dirichlet truncation.

    Always at least ``|nu|``.
    """
    A = assemble_truncation(f, W, N, boundary="dirichlet").toarray()
    return min_singular_value(A - 1j * float(nu) * np.eye(A.shape[0]))


@dataclass
class ConsistencyReport:
    nus: list
    reports: list
    conclusion: str
    agreed: bool

    def to_json(self):
        return {"nus": self.nus, "agreed": self.agreed, "conclusion": self.conclusion,
                "caveat": CAVEAT, "reports": [r.to_json() for r in self.reports]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def consistency_probe(f, W, nus=(0.5, 1.0, 2.0), shooting_horizon=200,
                      horizons=(20, 40, 60, 80), methods=None, max_columns=4000):
    """Run the probes at several ``nu``; the answer must not depend on ``nu``.

    ``methods`` defaults to both routes for path families and the
    rectangular route otherwise.  The combined conclusion is the common one
    when all runs agree, else ``"inconclusive"``.
    """
    if methods is None:
        try:
            _path_band(f, W, 10)
            methods = ("shooting", "rectangular_residual")
        except InputError:
            methods = ("rectangular_residual",)
    reports = []
    for nu in nus:
        for meth in methods:
            if meth == "shooting":
                reports.append(shooting_probe(f, W, nu, shooting_horizon))
            elif meth == "rectangular_residual":
                for sign in (1, -1):
                    reports.append(rectangular_residual(f, W, nu, sign, horizons,
                                                        max_columns=max_columns))
            else:
                raise InputError(f"unknown probe method {meth!r}")
    found = {r.conclusion for r in reports}
    agreed = len(found) == 1
    return ConsistencyReport(nus=[float(v) for v in nus], reports=reports,
                             conclusion=found.pop() if agreed else "inconclusive",
                             agreed=agreed)
