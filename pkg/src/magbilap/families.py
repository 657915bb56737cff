"""
Graph families
==============

An infinite graph is represented by a :class:`GraphFamily`: a pure generator
that returns the induced graph on ``B(x0, N)`` for any horizon ``N``.  The
three example families (unit half-line, half-line with square-root weights,
radial tree) are available through :func:`build_example`.

Anything stated as a supremum over the whole vertex set takes an explicit
horizon here and raises :class:`~magbilap.errors.HorizonError` instead of
quietly truncating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import HorizonError, InputError
from .graph import MagneticGraph
from .operators import Potential

__all__ = [
    "GraphFamily",
    "GrowthModel",
    "GrowthStats",
    "growth_arrays",
    "growth_stats",
    "growth_table",
    "build_example",
    "family_from_description",
    "tree_branching",
    "tree_level_sizes",
    "EXAMPLE_BUILDERS",
]

DEFAULT_MAX_VERTICES = 500_000


@dataclass(frozen=True)
class GrowthModel:
    """Closed forms for ``d_n`` and ``p_n`` plus their power-law asymptotics.

    ``d_n ~ d_coef * n**d_exponent`` and ``p_n ~ p_coef * n**p_exponent``.
    """

    d: Callable[[int], float]
    p: Callable[[int], float]
    d_exponent: float
    p_exponent: float
    d_coef: float
    p_coef: float
    text: str = ""

    @property
    def dp_exponent(self):
        return self.d_exponent + self.p_exponent

    @property
    def dp_coef(self):
        return self.d_coef * self.p_coef

    def dp(self, n):
        return self.d(n) * self.p(n)


@dataclass(frozen=True)
class GrowthStats:
    n: int
    d_n: int
    p_n: float
    beta_n: float

    def as_dict(self):
        return {"n": self.n, "d_n": self.d_n, "p_n": self.p_n, "beta_n": self.beta_n}


@dataclass(eq=False)
class GraphFamily:
    """Lazily generated infinite rooted graph.

    Parameters
    ----------
    name : str
        Builder name.
    params : dict
        Builder parameters (JSON-serialisable); together with ``name`` they
        reproduce the family via :func:`family_from_description`.
    build : callable
        ``build(N) -> MagneticGraph`` returning the induced graph on
        ``B(x0, N)`` with its radius-``N`` layer marked as frontier.
    size : callable, optional
        ``size(N) -> int`` vertex count of ``build(N)``, used to refuse
        infeasible horizons before allocating anything.
    """

    name: str
    params: dict
    build: Callable[[int], MagneticGraph]
    size: Optional[Callable[[int], int]] = None
    growth_model: Optional[GrowthModel] = None
    potential_model: Optional[Potential] = None
    mu_floor: float = 1.0
    max_vertices: int = DEFAULT_MAX_VERTICES
    _cache: dict = field(default_factory=dict, repr=False)

    def generate(self, horizon):
        """The induced graph on ``B(x0, horizon)`` (cached; graphs are immutable)."""
        horizon = int(horizon)
        if horizon < 0:
            raise InputError("horizon must be non-negative")
        if horizon not in self._cache:
            if self.size is not None and self.size(horizon) > self.max_vertices:
                raise HorizonError(
                    f"insufficient horizon: B(x0, {horizon}) of {self.name} has "
                    f"{self.size(horizon)} vertices, above max_vertices={self.max_vertices}")
            self._cache[horizon] = self.build(horizon)
        return self._cache[horizon]

    def max_horizon(self, limit=4096):
        """Largest horizon whose ball fits in ``max_vertices`` (capped at ``limit``)."""
        if self.size is None:
            return limit
        h = 0
        while h < limit and self.size(h + 1) <= self.max_vertices:
            h += 1
        return h

    def description(self):
        return {"builder": self.name, **self.params}


# -- growth statistics --------------------------------------------------------

def growth_arrays(f, n_max):
    """``d_n`` and ``p_n`` for ``n = 0..n_max`` (index ``n``).

    Needs the ball of radius ``n_max + 1`` so that every edge leaving
    ``B(x0, n_max)`` is visible.
    """
    n_max = int(n_max)
    g = f.generate(n_max + 1)
    lv = g.level
    keep = lv <= n_max
    d_lev = np.zeros(n_max + 1, dtype=np.int64)
    p_lev = np.zeros(n_max + 1)
    np.maximum.at(d_lev, lv[keep], g.degree[keep])
    np.maximum.at(p_lev, lv[keep], g.max_weight[keep])
    return np.maximum.accumulate(d_lev), np.maximum.accumulate(p_lev)


def growth_table(f, n_max, mu_floor=None):
    """:class:`GrowthStats` for ``n = 1..n_max``; needs horizon ``2 n_max + 1``."""
    n_max = int(n_max)
    if n_max < 1:
        raise InputError("n must be a positive integer")
    mu0 = f.mu_floor if mu_floor is None else float(mu_floor)
    if not mu0 > 0:
        raise InputError("mu_floor must be positive")
    try:
        d, p = growth_arrays(f, 2 * n_max)
    except HorizonError as exc:
        raise HorizonError(f"insufficient horizon for growth statistics up to n={n_max} "
                           f"(needs {2 * n_max + 1}): {exc}") from None
    return [GrowthStats(n=k, d_n=int(d[k]), p_n=float(p[k]),
                        beta_n=float(d[2 * k] * p[2 * k] / (mu0 * k)))
            for k in range(1, n_max + 1)]


def growth_stats(f, n, mu_floor=None):
    """``(d_n, p_n, beta_n)`` with ``beta_n = d_{2n} p_{2n} / (mu0 n)``."""
    return growth_table(f, n, mu_floor)[-1]


# -- phases -------------------------------------------------------------------

def _phases(phase, phase_seed, n_edges):
    # edge j joins child vertex j+1 to its parent; a prefix of one random
    # stream keeps phases identical across horizons
    if phase is None:
        return np.zeros(n_edges)
    if phase == "random":
        rng = np.random.default_rng(int(phase_seed))
        return rng.uniform(-np.pi, np.pi, n_edges)
    t = float(phase)
    if not abs(t) <= np.pi:
        raise InputError(f"phase must lie in [-pi, pi], got {t!r}")
    return np.full(n_edges, math.pi if t == -math.pi else t)


# -- half-line families -----------------------------------------------------

def _half_line(name, weight, params, phase, phase_seed, growth_model, potential_model,
               max_vertices):
    def build(N):
        k = np.arange(N)
        ids = [str(i) for i in range(N + 1)]
        frontier = np.zeros(N + 1, dtype=bool)
        frontier[N] = True
        return MagneticGraph(ids, np.ones(N + 1), k, k + 1, weight(k),
                             _phases(phase, phase_seed, N), root=0, mu_floor=1.0,
                             frontier=frontier)

    return GraphFamily(name=name, params=params, build=build, size=lambda N: N + 1,
                       growth_model=growth_model, potential_model=potential_model,
                       mu_floor=1.0, max_vertices=max_vertices)


# -- radial tree --------------------------------------------------------------

def tree_branching(j, kappa):
    """Forward degree ``floor(j**kappa) + 1`` of a level-``j`` vertex.

    Powers within 1e-9 of an integer are snapped so that e.g. ``8**(1/3)``
    counts as 2.
    """
    v = float(j) ** kappa
    r = round(v)
    if abs(v - r) <= 1e-9 * max(1.0, v):
        v = r
    return int(math.floor(v)) + 1


def tree_level_sizes(kappa, horizon):
    """``|S_0|, ..., |S_horizon|`` for the radial tree."""
    sizes = [1]
    for j in range(horizon):
        sizes.append(sizes[-1] * tree_branching(j, kappa))
    return sizes


def _radial_tree(kappa, params, phase, phase_seed, growth_model, potential_model,
                 max_vertices):
    def size(N):
        total, s = 1, 1
        for j in range(N):
            s *= tree_branching(j, kappa)
            total += s
            if total > 10 * max_vertices:
                break
        return total

    def build(N):
        sizes = tree_level_sizes(kappa, N)
        offsets = np.concatenate(([0], np.cumsum(sizes)))
        n = int(offsets[-1])
        parents = []
        for j in range(N):
            m = tree_branching(j, kappa)
            child_local = np.arange(sizes[j + 1])
            parents.append(offsets[j] + child_local // m)
        parent = np.concatenate(parents) if parents else np.empty(0, dtype=np.int64)
        child = np.arange(1, n)
        frontier = np.zeros(n, dtype=bool)
        frontier[offsets[N]:] = True
        return MagneticGraph([str(i) for i in range(n)], np.ones(n), parent, child,
                             np.ones(n - 1), _phases(phase, phase_seed, n - 1), root=0,
                             mu_floor=1.0, frontier=frontier)

    return GraphFamily(name="radial_tree", params=params, build=build, size=size,
                       growth_model=growth_model, potential_model=potential_model,
                       mu_floor=1.0, max_vertices=max_vertices)


def _pos_int(n):
    return max(int(n), 1)


def build_example(which, kappa=None, alpha=None, phase=None, phase_seed=0,
                  max_vertices=DEFAULT_MAX_VERTICES):
    """Build one of the three example families.

    Parameters
    ----------
    which : {"half_line_unit", "half_line_sqrt", "radial_tree"}
        ``half_line_unit``: path ``0-1-2-...`` with ``b = mu = 1`` and
        potential ``W(k) = -k``.  ``half_line_sqrt``: same path with
        ``b(k, k+1) = sqrt(k+1)`` and ``W(k) = -sqrt(k)``.  ``radial_tree``:
        every level-``j`` vertex has ``floor(j**kappa) + 1`` children,
        ``b = mu = 1`` and ``W = -j**alpha`` on level ``j``.
    kappa : float
        Tree branching exponent (``>= 0``); required for ``radial_tree``.
    alpha : float, optional
        Exponent of the tree potential.  Defaults to ``1 - kappa`` clipped to
        ``[0, 1]``.
    phase : float or "random", optional
        Magnetic phase ``theta(parent, child)``; a constant, or independent
        uniform values in ``[-pi, pi]`` drawn from ``phase_seed``.
    """
    params = {}
    if phase is not None:
        params["phase"] = phase
        if phase == "random":
            params["phase_seed"] = int(phase_seed)
    if which == "half_line_unit":
        model = GrowthModel(d=lambda n: 2, p=lambda n: 1.0, d_exponent=0.0, p_exponent=0.0,
                            d_coef=2.0, p_coef=1.0, text="d_n = 2, p_n = 1")
        pot = Potential.radial(lambda r: -r, "W(k) = -k")
        return _half_line(which, lambda k: np.ones(len(k)), params, phase, phase_seed,
                          model, pot, max_vertices)
    if which == "half_line_sqrt":
        model = GrowthModel(d=lambda n: 2, p=lambda n: math.sqrt(n + 1), d_exponent=0.0,
                            p_exponent=0.5, d_coef=2.0, p_coef=1.0,
                            text="d_n = 2, p_n = sqrt(n+1)")
        pot = Potential.radial(lambda r: -np.sqrt(r), "W(k) = -sqrt(k)")
        return _half_line(which, lambda k: np.sqrt(k + 1.0), params, phase, phase_seed,
                          model, pot, max_vertices)
    if which == "radial_tree":
        if kappa is None:
            raise InputError("radial_tree needs kappa")
        kappa = float(kappa)
        if not (kappa >= 0 and math.isfinite(kappa)):
            raise InputError(f"kappa must be >= 0, got {kappa!r}")
        if alpha is None:
            alpha = min(1.0, max(0.0, 1.0 - kappa))
        alpha = float(alpha)
        if not 0 <= alpha <= 1:
            raise InputError(f"alpha must lie in [0, 1], got {alpha!r}")
        params = {"kappa": kappa, "alpha": alpha, **params}
        if kappa == 0:
            model = GrowthModel(d=lambda n: 3, p=lambda n: 1.0, d_exponent=0.0,
                                p_exponent=0.0, d_coef=3.0, p_coef=1.0,
                                text="d_n = floor(n^0) + 2 = 3, p_n = 1")
        else:
            model = GrowthModel(d=lambda n: tree_branching(n, kappa) + 1, p=lambda n: 1.0,
                                d_exponent=kappa, p_exponent=0.0, d_coef=1.0, p_coef=1.0,
                                text=f"d_n = floor(n^{kappa:g}) + 2, p_n = 1")
        pot = Potential.radial(lambda r: -np.power(np.asarray(r, dtype=float), alpha),
                               f"W = -r^{alpha:g}")
        return _radial_tree(kappa, params, phase, phase_seed, model, pot, max_vertices)
    raise InputError(f"unknown builder {which!r}")


EXAMPLE_BUILDERS = ("half_line_unit", "half_line_sqrt", "radial_tree")


def family_from_description(doc, max_vertices=DEFAULT_MAX_VERTICES):
    """Family from ``{"builder": ..., "kappa": ..., ...}``."""
    if not isinstance(doc, dict) or "builder" not in doc:
        raise InputError("family description needs a 'builder' key")
    extra = set(doc) - {"builder", "kappa", "alpha", "phase", "phase_seed"}
    if extra:
        raise InputError(f"unknown family keys: {sorted(extra)}")
    return build_example(doc["builder"], kappa=doc.get("kappa"), alpha=doc.get("alpha"),
                         phase=doc.get("phase"), phase_seed=doc.get("phase_seed", 0),
                         max_vertices=max_vertices)
