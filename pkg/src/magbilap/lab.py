"""
Inequality lab
==============

Randomised verification of the identities and inequalities behind the
localisation argument.  Every check draws finitely supported complex
``u`` on a family, evaluates both sides independently and records the
worst relative residual (identities) or the worst ratio LHS/RHS
(inequalities).

Notation: ``L`` is the magnetic Laplacian, ``D`` the Laplacian with zero
phase, ``chi = chi_n``, ``beta = beta_n = d_{2n} p_{2n} / (mu0 n)`` and
``P = P_chi[u]``.

Trials are deterministic: the generator for trial ``t`` of check ``c`` on
family ``f`` is seeded with ``[seed, c, f]`` and consumed in trial order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .cutoff import chi_values
from .errors import InputError
from .families import build_example, growth_stats
from .operators import Amplitudes, apply_laplacian, apply_P, inner, norm
from .theorem import q_constant, q_linear, q_sqrt_plus_one

__all__ = [
    "LAB_FAMILIES",
    "SUITES",
    "TrialConfig",
    "CheckResult",
    "LabReport",
    "lab_family",
    "random_amplitudes",
    "ramp_amplitudes",
    "gauge_constant_amplitudes",
    "boundary_dipole_amplitudes",
    "verify_product_rule",
    "verify_expansion_identity",
    "verify_commutator_bounds",
    "verify_localized_laplacian_bound",
    "verify_squared_cutoff_bounds",
    "verify_q_bound",
    "verify_scalar_lemmas",
    "verify_green_identities",
    "run_suite",
]

LAB_FAMILIES = ("half_line_unit", "half_line_sqrt", "tree_k0", "tree_k0.5")
EPS_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)


def lab_family(name, phase_seed=0):
    """A lab family with independent uniform random phases."""
    kw = {"phase": "random", "phase_seed": phase_seed}
    if name in ("half_line_unit", "half_line_sqrt"):
        return build_example(name, **kw)
    if name.startswith("tree_k"):
        return build_example("radial_tree", kappa=float(name[len("tree_k"):]), **kw)
    raise InputError(f"unknown lab family {name!r}")


@dataclass(frozen=True)
class TrialConfig:
    """Trial regime shared by the checks.

    ``support_radius`` of ``None`` samples ``u`` on ``B(x0, 2n+1)``, which
    covers the whole ramp ``n < r < 2n``; the generated ball then has radius
    two more so that every operator is evaluated exactly.  Trees are limited
    to balls of at most ``max_ball`` vertices, which caps their ``n``.
    """

    trials: int = 500
    n_range: tuple = tuple(range(1, 11))
    support_radius: int | None = None
    seed: int = 0
    tolerance: float = 1e-10
    families: tuple = LAB_FAMILIES
    max_ball: int = 20000
    adversarial_fraction: float = 0.5
    eps_grid: tuple = EPS_GRID

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be positive")
        if not self.n_range or min(self.n_range) < 1:
            raise InputError("n_range must hold positive integers")
        if self.support_radius is not None and self.support_radius < 0:
            raise InputError("support_radius must be non-negative")
        if not all(0 < e < 1 for e in self.eps_grid):
            raise InputError("eps values must lie in (0, 1)")

    def to_json(self):
        d = asdict(self)
        d["n_range"] = list(self.n_range)
        d["families"] = list(self.families)
        d["eps_grid"] = list(self.eps_grid)
        return d


def _finite(v):
    # JSON has no infinity; a zero right-hand side with a positive left-hand side
    # is reported as the string "inf"
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else str(v)
    return v


@dataclass
class CheckResult:
    name: str
    statement: str
    kind: str
    trials: int
    tolerance: float
    worst: float = 0.0
    witness: dict = field(default_factory=dict)

    @property
    def passed(self):
        if self.kind == "identity":
            return bool(self.worst <= self.tolerance)
        return bool(self.worst <= 1.0 + self.tolerance)

    def to_json(self):
        key = "max_residual" if self.kind == "identity" else "max_ratio"
        witness = {k: _finite(v) for k, v in self.witness.items()}
        return {"name": self.name, "statement": self.statement, "kind": self.kind,
                "trials": self.trials, key: _finite(self.worst), "tolerance": self.tolerance,
                "pass": self.passed, "witness": witness}


@dataclass
class LabReport:
    config: dict
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        return {"config": self.config, "pass": self.passed,
                "checks": [c.to_json() for c in self.checks]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def table(self):
        w = max(len(c.name) for c in self.checks)
        lines = [f"{'check':<{w}}  {'trials':>6}  {'worst':>12}  result"]
        for c in self.checks:
            tag = "residual" if c.kind == "identity" else "ratio"
            lines.append(f"{c.name:<{w}}  {c.trials:>6}  {c.worst:12.4e}  "
                         f"{'PASS' if c.passed else 'FAIL'} ({tag})")
        return "\n".join(lines)


# -- random functions ---------------------------------------------------------

def _uniform_complex(rng, size):
    return rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size)


def random_amplitudes(rng, g, radius):
    """Complex values with components uniform in ``[-1, 1]`` on a random
    subset of ``B(x0, radius)``."""
    density = rng.uniform(0.3, 1.0)
    mask = (g.level <= radius) & (rng.random(g.n_vertices) < density)
    u = np.zeros(g.n_vertices, dtype=complex)
    u[mask] = _uniform_complex(rng, int(mask.sum()))
    return u


def _parents(g):
    par = np.full(g.n_vertices, -1)
    inward = g.level[g.dst] == g.level[g.src] - 1
    # first inward edge of each vertex (edges are sorted by source)
    src, dst = g.src[inward], g.dst[inward]
    first = np.unique(src, return_index=True)[1]
    par[src[first]] = dst[first]
    return par


def _parent_phases(g):
    """Parent of every vertex and ``exp(i theta(parent, x))`` (root: -1, 1)."""
    par = _parents(g)
    ph = np.ones(g.n_vertices, dtype=complex)
    xs = np.flatnonzero(par >= 0)
    key = g.src.astype(np.int64) * g.n_vertices + g.dst
    pos = np.searchsorted(key, par[xs].astype(np.int64) * g.n_vertices + xs)
    ph[xs] = g.phase[pos]
    return par, ph


def ramp_amplitudes(rng, g, n, radius):
    """Mass concentrated on the ramp ``n <= r <= 2n`` (clipped to ``radius``).

    With probability 1/2 the values are random; otherwise they are built
    outward from random values on level ``n`` so that in every edge term
    ``u(y) - exp(i theta(y, x)) u(x)`` toward a parent ``y`` the two parts
    add in phase, which makes the edge differences large.
    """
    top = min(2 * n, radius)
    zone = (g.level >= n) & (g.level <= top)
    u = np.zeros(g.n_vertices, dtype=complex)
    if rng.random() < 0.5:
        u[zone] = _uniform_complex(rng, int(zone.sum()))
        return u
    mag = rng.uniform(0.5, 1.0, g.n_vertices)
    start = zone & (g.level == n)
    u[start] = mag[start] * np.exp(1j * rng.uniform(-np.pi, np.pi, int(start.sum())))
    par, ph = _parent_phases(g)
    for r in range(n + 1, top + 1):
        xs = np.flatnonzero(g.level == r)
        up = u[par[xs]]
        u[xs] = -np.conj(ph[xs]) * up / np.abs(np.where(up == 0, 1, up)) * mag[xs]
    return u


def gauge_constant_amplitudes(rng, g, top):
    """``u`` on ``B(x0, top)`` with every inner edge term
    ``u(p) - exp(i theta(p, x)) u(x)`` equal to zero (parent ``p``).

    On a tree this makes ``L u`` vanish on ``B(x0, top - 1)``: ``L u`` lives on
    the boundary layer ``top <= r <= top + 1`` only.
    """
    par, ph = _parent_phases(g)
    u = np.zeros(g.n_vertices, dtype=complex)
    u[g.root] = _uniform_complex(rng, 1)[0]
    for r in range(1, top + 1):
        xs = np.flatnonzero(g.level == r)
        u[xs] = np.conj(ph[xs]) * u[par[xs]]
    return u


def boundary_dipole_amplitudes(rng, g, level):
    """Two siblings on ``level`` with ``sum exp(i theta(p, c)) u(c) = 0`` over
    the children ``c`` of their parent ``p``; ``None`` if no parent on
    ``level - 1`` has two children.

    ``L u`` then vanishes on ``B(x0, level - 1)``.
    """
    par, ph = _parent_phases(g)
    kids = np.flatnonzero((g.level == level) & (par >= 0))
    if kids.size < 2:
        return None
    parents, counts = np.unique(par[kids], return_counts=True)
    rich = parents[counts >= 2]
    if not rich.size:
        return None
    p = rich[int(rng.integers(rich.size))]
    c1, c2 = kids[par[kids] == p][:2]
    z = _uniform_complex(rng, 1)[0]
    u = np.zeros(g.n_vertices, dtype=complex)
    u[c1] = z * np.conj(ph[c1])
    u[c2] = -z * np.conj(ph[c2])
    return u


# -- harness ------------------------------------------------------------------

_CHECK_IDS = {"product_rule": 1, "expansion_identity": 2, "commutator": 3, "localized": 4,
              "squared_cutoff": 5, "q_bound": 6, "scalar": 7, "green": 8}


@dataclass
class _Trial:
    family: str
    f: object
    g: object
    n: int
    radius: int
    u: np.ndarray
    generator: str
    index: int
    rng: np.random.Generator

    def witness(self, value):
        w = {"family": self.family, "n": self.n, "trial": self.index,
             "generator": self.generator, "support_radius": self.radius,
             "support_size": int(np.count_nonzero(self.u)), "value": value}
        if w["support_size"] <= 32:
            w["u"] = Amplitudes(self.g, self.u).to_json()
        return w


def _feasible(cfg, f):
    out = []
    for n in cfg.n_range:
        radius = 2 * n + 1 if cfg.support_radius is None else cfg.support_radius
        h = max(radius, 2 * n + 1) + 2
        if f.size(h) <= cfg.max_ball:
            out.append((n, radius, h))
    return out


def _trials(cfg, check, adversarial=True, trials=None):
    """Yield one :class:`_Trial` per family and trial index."""
    trials = cfg.trials if trials is None else trials
    for fi, name in enumerate(cfg.families):
        f = lab_family(name, phase_seed=cfg.seed)
        choices = _feasible(cfg, f)
        if not choices:
            continue
        rng = np.random.default_rng([cfg.seed, _CHECK_IDS[check], fi])
        for t in range(trials):
            n, radius, h = choices[int(rng.integers(len(choices)))]
            g = f.generate(h)
            if adversarial and rng.random() < cfg.adversarial_fraction:
                pick = rng.random()
                u = None
                if pick < 0.25:
                    u = gauge_constant_amplitudes(rng, g, min(2 * n, radius))
                    gen = "gauge_constant"
                elif pick < 0.5 and radius >= 2 * n:
                    u = boundary_dipole_amplitudes(rng, g, 2 * n)
                    gen = "boundary_dipole"
                if u is None:
                    u, gen = ramp_amplitudes(rng, g, n, radius), "ramp"
            else:
                u, gen = random_amplitudes(rng, g, radius), "uniform"
            yield _Trial(name, f, g, n, radius, u, gen, t, rng)


def _new(cfg, name, statement, kind):
    return CheckResult(name=name, statement=statement, kind=kind, trials=0,
                       tolerance=cfg.tolerance)


def _update(res, value, witness):
    res.trials += 1
    if value > res.worst or not res.witness:
        if value > res.worst:
            res.worst = float(value)
        res.witness = witness(float(value))


def _rel(diff, *terms):
    scale = max(float(np.max(np.abs(t))) if np.size(t) else 0.0 for t in terms)
    d = float(np.max(np.abs(diff))) if np.size(diff) else 0.0
    if scale == 0.0:
        return 0.0 if d == 0.0 else math.inf
    return d / scale


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs <= 0 else math.inf


def _chi(g, n):
    return chi_values(g.level, n)


# -- checks -------------------------------------------------------------------

def verify_product_rule(cfg):
    """``L(psi u) = psi L u - P_psi[u] + u D psi`` for ``psi = chi_n`` or a
    random real ``psi``."""
    res = _new(cfg, "product_rule", "L(psi u) = psi L u - P_psi[u] + u D psi", "identity")
    for tr in _trials(cfg, "product_rule"):
        g, u = tr.g, tr.u
        if tr.rng.random() < 0.5:
            psi = _chi(g, tr.n)
        else:
            psi = np.where(g.level <= tr.radius, tr.rng.uniform(-1, 1, g.n_vertices), 0.0)
        lhs = apply_laplacian(g, psi * u)
        t1 = psi * apply_laplacian(g, u)
        t2 = apply_P(g, psi, u)
        t3 = u * apply_laplacian(g, psi, magnetic=False)
        _update(res, _rel(lhs - (t1 - t2 + t3), lhs, t1, t2, t3), tr.witness)
    return [res]


def _expansion_terms(g, u, n):
    chi = _chi(g, n)
    Lu = apply_laplacian(g, u)
    a = chi * Lu
    b = apply_laplacian(g, chi * u)
    P = apply_P(g, chi, u)
    c = u * apply_laplacian(g, chi, magnetic=False)
    return a, b, P, c


def verify_expansion_identity(cfg):
    """``||chi L u||^2`` expanded through the product rule, six terms evaluated
    separately."""
    res = _new(cfg, "expansion_identity",
               "||chi L u||^2 = ||L(chi u)||^2 + 2Re(chi L u, P) - 2Re(chi L u, u D chi) "
               "+ 2Re(P, u D chi) - ||P||^2 - ||u D chi||^2", "identity")
    for tr in _trials(cfg, "expansion_identity"):
        g = tr.g
        a, b, P, c = _expansion_terms(g, tr.u, tr.n)
        lhs = inner(g, a, a).real
        terms = np.array([inner(g, b, b).real, 2 * inner(g, a, P).real,
                          -2 * inner(g, a, c).real, 2 * inner(g, P, c).real,
                          -inner(g, P, P).real, -inner(g, c, c).real])
        _update(res, _rel(lhs - terms.sum(), lhs, terms), tr.witness)
    return [res]


def _beta(tr, cache):
    key = (tr.family, tr.n)
    if key not in cache:
        cache[key] = growth_stats(tr.f, tr.n).beta_n
    return cache[key]


def verify_commutator_bounds(cfg, trials=None):
    """``||P_chi[u]|| <= 2 beta ||u||`` and ``||u D chi|| <= beta ||u||``."""
    rp = _new(cfg, "commutator_bound_P", "||P_chi[u]|| <= 2 beta ||u||", "inequality")
    rd = _new(cfg, "commutator_bound_D_chi", "||u D chi|| <= beta ||u||", "inequality")
    cache = {}
    for tr in _trials(cfg, "commutator", trials=trials):
        g, u = tr.g, tr.u
        beta = _beta(tr, cache)
        chi = _chi(g, tr.n)
        nu = norm(g, u)
        _update(rp, _ratio(norm(g, apply_P(g, chi, u)), 2 * beta * nu), tr.witness)
        _update(rd, _ratio(norm(g, u * apply_laplacian(g, chi, magnetic=False)), beta * nu),
                tr.witness)
    return [rp, rd]


def localized_constants(eps):
    """``(A, B)`` with ``||chi L u||^2 <= A ||L(chi u)||^2 + B beta^2 ||u||^2``."""
    return 1.0 / (1.0 - eps), (9.0 + 4.0 * eps) / ((1.0 - eps) * eps)


def verify_localized_laplacian_bound(cfg, trials=None):
    """``||chi L u||^2 <= (1-eps)^{-1} ||L(chi u)||^2 + (9+4eps)/((1-eps)eps) beta^2 ||u||^2``
    on ``cfg.eps_grid``, plus the ``eps = 1/2`` form with constants 2 and 44."""
    out = {e: _new(cfg, f"localized_bound[eps={e:g}]",
                   f"||chi L u||^2 <= (1-eps)^-1 ||L(chi u)||^2 + (9+4eps)/((1-eps)eps) "
                   f"beta^2 ||u||^2, eps={e:g}", "inequality") for e in cfg.eps_grid}
    half = _new(cfg, "localized_bound[2,44]",
                "||chi L u||^2 <= 2 ||L(chi u)||^2 + 44 beta^2 ||u||^2", "inequality")
    cache = {}
    for tr in _trials(cfg, "localized", trials=trials):
        g, u = tr.g, tr.u
        beta = _beta(tr, cache)
        a, b, _, _ = _expansion_terms(g, u, tr.n)
        lhs = norm(g, a) ** 2
        nb, nu2 = norm(g, b) ** 2, norm(g, u) ** 2
        for e, res in out.items():
            A, B = localized_constants(e)
            _update(res, _ratio(lhs, A * nb + B * beta ** 2 * nu2), tr.witness)
        _update(half, _ratio(lhs, 2.0 * nb + 44.0 * beta ** 2 * nu2), tr.witness)
    return [*out.values(), half]


def verify_squared_cutoff_bounds(cfg, trials=None):
    """``|(L u, P_{chi^2}[u])| <= 6 beta ||chi L u|| ||u||`` and
    ``|(L u, u D chi^2)| <= 3 beta ||chi L u|| ||u||``.

    Also reported: the same bounds with ``chi`` in the right-hand norm
    replaced by the indicator of ``B(x0, 2n)``.  The ``chi`` form fails for
    ``u`` whose Laplacian lives on the level ``2n`` where ``chi`` vanishes
    (see :func:`gauge_constant_amplitudes`); the indicator form does not.
    """
    rp = _new(cfg, "squared_cutoff_bound_P",
              "|(L u, P_{chi^2}[u])| <= 6 beta ||chi L u|| ||u||", "inequality")
    rd = _new(cfg, "squared_cutoff_bound_D_chi2",
              "|(L u, u D chi^2)| <= 3 beta ||chi L u|| ||u||", "inequality")
    bp = _new(cfg, "squared_cutoff_bound_P[ball]",
              "|(L u, P_{chi^2}[u])| <= 6 beta ||1_B(2n) L u|| ||u||", "inequality")
    bd = _new(cfg, "squared_cutoff_bound_D_chi2[ball]",
              "|(L u, u D chi^2)| <= 3 beta ||1_B(2n) L u|| ||u||", "inequality")
    cache = {}
    for tr in _trials(cfg, "squared_cutoff", trials=trials):
        g, u = tr.g, tr.u
        beta = _beta(tr, cache)
        chi = _chi(g, tr.n)
        chi2 = chi * chi
        Lu = apply_laplacian(g, u)
        nu = norm(g, u)
        scale = beta * norm(g, chi * Lu) * nu
        ball = beta * norm(g, np.where(g.level <= 2 * tr.n, Lu, 0)) * nu
        lp = abs(inner(g, Lu, apply_P(g, chi2, u)))
        ld = abs(inner(g, Lu, u * apply_laplacian(g, chi2, magnetic=False)))
        _update(rp, _ratio(lp, 6 * scale), tr.witness)
        _update(rd, _ratio(ld, 3 * scale), tr.witness)
        _update(bp, _ratio(lp, 6 * ball), tr.witness)
        _update(bd, _ratio(ld, 3 * ball), tr.witness)
    return [rp, rd, bp, bd]


DEFAULT_Q = (("q=s+1", q_linear(1.0, 1.0)), ("q=sqrt(s)+1", q_sqrt_plus_one()),
             ("q=1", q_constant(1.0)))


def verify_q_bound(cfg, certificates=DEFAULT_Q):
    """``|((q o r) chi u, chi u)| <= q(2n) ||u||^2 <= c_q 2^alpha n^alpha ||u||^2``,
    the second for ``2n >= s0``."""
    out = []
    for label, qc in certificates:
        r1 = _new(cfg, f"q_bound[{label}]", "|((q o r) chi u, chi u)| <= q(2n) ||u||^2",
                  "inequality")
        r2 = _new(cfg, f"q_certificate[{label}]",
                  "q(2n) ||u||^2 <= c_q 2^alpha n^alpha ||u||^2 for 2n >= s0", "inequality")
        for tr in _trials(cfg, "q_bound"):
            g, u = tr.g, tr.u
            cu = _chi(g, tr.n) * u
            lhs = abs(inner(g, qc(g.level) * cu, cu))
            nu2 = norm(g, u) ** 2
            q2n = float(qc(2.0 * tr.n))
            _update(r1, _ratio(lhs, q2n * nu2), tr.witness)
            if 2 * tr.n >= qc.s0:
                _update(r2, _ratio(q2n * nu2, qc.c_q * 2 ** qc.alpha * tr.n ** qc.alpha * nu2),
                        tr.witness)
        out += [r1, r2]
    return out


def verify_scalar_lemmas(cfg):
    """``(sum a_i)^2 <= N sum a_i^2`` and ``ab <= eps a^2 + b^2 / (4 eps)``."""
    r1 = _new(cfg, "sum_square", "(a_1 + ... + a_N)^2 <= N (a_1^2 + ... + a_N^2)",
              "inequality")
    r2 = _new(cfg, "weighted_young", "ab <= eps a^2 + b^2 / (4 eps)", "inequality")
    rng = np.random.default_rng([cfg.seed, _CHECK_IDS["scalar"]])
    for t in range(cfg.trials):
        N = int(rng.integers(1, 51))
        # every fourth trial is an equality case
        a = np.full(N, rng.normal()) if t % 4 == 0 else rng.normal(size=N)
        _update(r1, _ratio(a.sum() ** 2, N * np.dot(a, a)),
                lambda v, t=t, N=N: {"trial": t, "N": N, "value": v})
        eps = float(rng.uniform(0.01, 10.0))
        x = float(rng.normal())
        y = 2 * eps * x if t % 4 == 0 else float(rng.normal())
        _update(r2, _ratio(x * y, eps * x * x + y * y / (4 * eps)),
                lambda v, t=t, e=eps, x=x, y=y: {"trial": t, "eps": e, "a": x, "b": y,
                                                 "value": v})
    return [r1, r2]


def verify_green_identities(cfg):
    """``(L u, v) = (u, L v)``, ``(L^2 u, v) = (L u, L v)`` and ``(L u, u) >= 0``."""
    r1 = _new(cfg, "green_L", "(L u, v) = (u, L v)", "identity")
    r2 = _new(cfg, "green_L2", "(L^2 u, v) = (L u, L v)", "identity")
    r3 = _new(cfg, "form_positivity", "(L u, u) >= -1e-12 ||u||^2", "identity")
    r3.tolerance = 1e-12
    for tr in _trials(cfg, "green"):
        g, u = tr.g, tr.u
        v = random_amplitudes(tr.rng, g, tr.radius)
        Lu, Lv = apply_laplacian(g, u), apply_laplacian(g, v)
        L2u = apply_laplacian(g, Lu)
        nu, nv, nLu, nLv = norm(g, u), norm(g, v), norm(g, Lu), norm(g, Lv)
        a, b = inner(g, Lu, v), inner(g, u, Lv)
        s1 = max(nLu * nv, nu * nLv)
        _update(r1, abs(a - b) / s1 if s1 else abs(a - b), tr.witness)
        c, d = inner(g, L2u, v), inner(g, Lu, Lv)
        s2 = max(norm(g, L2u) * nv, nLu * nLv)
        _update(r2, abs(c - d) / s2 if s2 else abs(c - d), tr.witness)
        # negative part of the form, relative to ||u||^2
        q = inner(g, Lu, u).real
        _update(r3, max(0.0, -q) / (nu * nu) if nu else 0.0, tr.witness)
    return [r1, r2, r3]


SUITES = {
    "identities": (verify_product_rule, verify_expansion_identity),
    "commutator": (verify_commutator_bounds,),
    "localized": (verify_localized_laplacian_bound,),
    "squared_cutoff": (verify_squared_cutoff_bounds,),
    "q_bound": (verify_q_bound,),
    "scalar": (verify_scalar_lemmas,),
    "green": (verify_green_identities,),
}


def run_suite(cfg, suite="all"):
    """Run one suite (or ``"all"``) and collect a :class:`LabReport`."""
    if suite == "all":
        funcs = [fn for fs in SUITES.values() for fn in fs]
    elif suite in SUITES:
        funcs = list(SUITES[suite])
    else:
        raise InputError(f"unknown suite {suite!r}; choose from {['all', *SUITES]}")
    checks = []
    for fn in funcs:
        checks += fn(cfg)
    return LabReport(config={"suite": suite, **cfg.to_json()}, checks=checks)
