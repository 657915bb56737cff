"""
Hypothesis checker for the essential self-adjointness criterion
===============================================================

For an instance ``(family, W, q, alpha)`` the checker verifies

* ``mu(x) >= mu0`` on the generated ball,
* ``q >= 0`` non-decreasing with ``q(s) <= c_q s**alpha`` for ``s >= s0``,
* the minorant ``W(x) >= -q(r(x))``,
* the growth condition: ``{n**(alpha-1) d_n p_n}`` bounded when
  ``alpha > 0``; ``d_n p_n / n <= K < mu0/2`` for ``n >= N`` when
  ``alpha = 0``.

A ``"satisfied"`` verdict means the criterion applies, hence ``H`` is
essentially self-adjoint on finitely supported functions.  ``"not_satisfied"``
and ``"inconclusive"`` only mean the criterion says nothing.

Boundedness of an infinite sequence cannot be decided from finitely many
terms.  When the family carries a closed-form growth model the growth
check is decided by exponent arithmetic (basis ``"growth_model"``);
otherwise it is judged on the generated prefix (basis
``"empirical-to-horizon"``) and reported inconclusive unless the tail of the
prefix is non-increasing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InputError
from .families import family_from_description, growth_arrays
from .operators import Potential

__all__ = [
    "QCertificate",
    "q_linear",
    "q_sqrt_plus_one",
    "q_power",
    "q_constant",
    "q_tabulated",
    "q_from_json",
    "potential_from_json",
    "check_q",
    "check_minorant",
    "check_growth",
    "check_theorem",
    "HypothesisReport",
    "Instance",
    "load_instance",
    "EXAMPLE_INSTANCES",
]

K_TOL = 1e-9
EXP_TOL = 1e-12
MODEL_RANGE = 4096


@dataclass(frozen=True)
class QCertificate:
    """A majorant ``q`` with its growth certificate ``q(s) <= c_q s**alpha`` for ``s >= s0``."""

    q: Callable
    alpha: float
    c_q: float
    s0: float
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.alpha <= 1:
            raise InputError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not self.c_q > 0:
            raise InputError("c_q must be positive")
        if not self.s0 >= 0:
            raise InputError("s0 must be non-negative")

    def __call__(self, s):
        return np.asarray(self.q(np.asarray(s, dtype=float)), dtype=float)

    def to_json(self):
        return {"kind": self.name, **self.params, "alpha": self.alpha, "c_q": self.c_q,
                "s0": self.s0}


def q_linear(slope=1.0, intercept=1.0):
    """``q(s) = slope*s + intercept`` (alpha = 1, c_q = slope + intercept, s0 = 1)."""
    slope, intercept = float(slope), float(intercept)
    return QCertificate(lambda s: slope * s + intercept, 1.0, slope + intercept, 1.0,
                        "linear", {"slope": slope, "intercept": intercept})


def q_sqrt_plus_one():
    return QCertificate(lambda s: np.sqrt(s) + 1.0, 0.5, 2.0, 1.0, "sqrt_plus_one")


def q_power(alpha, coef=1.0):
    """``q(s) = coef * s**alpha``, with ``0**0 = 1``."""
    alpha, coef = float(alpha), float(coef)
    return QCertificate(lambda s: coef * np.power(s, alpha), alpha, coef, 0.0, "power",
                        {"coef": coef})


def q_constant(value):
    value = float(value)
    return QCertificate(lambda s: np.full(np.shape(s), value), 0.0, value, 0.0, "constant",
                        {"value": value})


def q_tabulated(values, alpha, c_q, s0):
    """``q`` tabulated on the integers ``0, 1, ..., len(values) - 1``."""
    table = np.asarray(values, dtype=float)

    def q(s):
        s = np.asarray(s, dtype=float)
        if np.any(s != np.floor(s)) or np.any(s < 0) or np.any(s >= table.size):
            raise InputError("tabulated q is only defined on the integers of its table")
        return table[s.astype(np.int64)]

    return QCertificate(q, float(alpha), float(c_q), float(s0), "tabulated",
                        {"values": table.tolist()})


def _num(doc, key, default=None):
    val = doc.get(key, default)
    if val is None or isinstance(val, bool) or not isinstance(val, (int, float)):
        raise InputError(f"{key!r} must be a number")
    return float(val)


def q_from_json(doc):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("q must be an object with a 'kind'")
    kind = doc["kind"]
    if kind == "linear":
        return q_linear(_num(doc, "slope", 1.0), _num(doc, "intercept", 1.0))
    if kind == "sqrt_plus_one":
        return q_sqrt_plus_one()
    if kind == "power":
        return q_power(_num(doc, "alpha"), _num(doc, "coef", 1.0))
    if kind == "constant":
        return q_constant(_num(doc, "value"))
    if kind == "tabulated":
        if not isinstance(doc.get("values"), list):
            raise InputError("tabulated q needs a 'values' list")
        return q_tabulated(doc["values"], _num(doc, "alpha"), _num(doc, "c_q"), _num(doc, "s0"))
    raise InputError(f"unknown q kind {kind!r}")


def potential_from_json(doc, family):
    """``"model"`` (the family's own potential), a radial power law, or a table."""
    if doc == "model":
        if family.potential_model is None:
            raise InputError("family has no potential model")
        return family.potential_model
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("potential must be 'model' or an object with a 'kind'")
    if doc["kind"] == "radial_power":
        coef, power = _num(doc, "coef"), _num(doc, "power")
        return Potential.radial(lambda r: coef * np.power(np.asarray(r, dtype=float), power),
                                f"W = {coef:g} r^{power:g}")
    if doc["kind"] == "table":
        if not isinstance(doc.get("values"), dict):
            raise InputError("table potential needs a 'values' object {id: W}")
        return Potential.from_table(doc["values"])
    raise InputError(f"unknown potential kind {doc['kind']!r}")


# -- sub-checks ---------------------------------------------------------------

def check_q(qc, horizon):
    """Non-negativity, monotonicity and the certificate on the integers ``0..2*horizon``."""
    s = np.arange(0, 2 * int(horizon) + 1, dtype=float)
    qs = qc(s)
    out = {"grid": [0, int(2 * horizon)], "status": "pass"}
    neg = np.flatnonzero(~(qs >= 0))
    if neg.size:
        out.update(status="fail", reason="q negative", witness={"s": float(s[neg[0]]),
                                                                 "q": float(qs[neg[0]])})
        return out
    dec = np.flatnonzero(np.diff(qs) < 0)
    if dec.size:
        k = int(dec[0])
        out.update(status="fail", reason="q decreasing",
                   witness={"s": float(s[k + 1]), "q(s-1)": float(qs[k]), "q(s)": float(qs[k + 1])})
        return out
    grid = s[s >= qc.s0]
    if qc.s0 not in grid and qc.s0 <= s[-1]:
        grid = np.concatenate(([qc.s0], grid))
    bound = qc.c_q * np.power(grid, qc.alpha)
    qv = qc(grid) if qc.name != "tabulated" else qc(np.ceil(grid))
    bad = np.flatnonzero(qv > bound * (1 + EXP_TOL))
    if bad.size:
        k = int(bad[0])
        out.update(status="fail", reason="certificate q(s) <= c_q s^alpha violated",
                   witness={"s": float(grid[k]), "q": float(qv[k]), "bound": float(bound[k])})
    out["monotone_certified"] = True
    return out


def check_minorant(f, W, qc, horizon):
    """``W(x) >= -q(r(x))`` for every vertex with ``r(x) <= horizon``."""
    g = f.generate(int(horizon))
    w = W.on(g)
    qv = qc(g.level.astype(float))
    bad = np.flatnonzero(w < -qv - EXP_TOL * np.maximum(1.0, np.abs(qv)))
    out = {"status": "pass", "checked_to": int(horizon), "basis": "empirical-to-horizon",
           "checked_vertices": g.n_vertices}
    if bad.size:
        k = int(bad[np.argmin(g.level[bad])])
        out.update(status="fail", witness={"vertex": g.ids[k], "r": int(g.level[k]),
                                           "W": float(w[k]), "-q(r)": float(-qv[k])})
    return out


def _tail_nonincreasing(v, frac=0.25):
    m = max(2, int(math.ceil(len(v) * frac)))
    tail = np.asarray(v[-m:], dtype=float)
    return bool(np.all(np.diff(tail) <= EXP_TOL * np.maximum(1.0, np.abs(tail[:-1]))))


def _first_tail_below(values, limit):
    """Smallest index N with ``max(values[N:]) < limit`` and that maximum."""
    v = np.asarray(values, dtype=float)
    suffix_max = np.maximum.accumulate(v[::-1])[::-1]
    ok = np.flatnonzero(suffix_max < limit)
    if not ok.size:
        return None, None
    return int(ok[0]), float(suffix_max[ok[0]])


@dataclass
class GrowthCheck:
    alpha_case: str
    status: str
    basis: str
    evidence: list
    K: Optional[float] = None
    N: Optional[int] = None
    C1: Optional[float] = None
    N1: Optional[int] = None
    C1_basis: str = ""
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"alpha_case": self.alpha_case, "status": self.status, "basis": self.basis,
                "K": self.K, "N": self.N, "C1": self.C1, "N1": self.N1,
                "C1_basis": self.C1_basis, "notes": self.notes, "evidence": self.evidence}


def check_growth(f, qc, horizon, mu_floor=None):
    """Growth condition of the criterion, with ``n`` up to ``horizon - 1``.

    Also derives ``C1 < 1`` and ``N1`` with ``beta_n <= C1`` for ``n >= N1``
    (the tightest value seen on the available range).
    """
    mu0 = f.mu_floor if mu_floor is None else mu_floor
    if mu0 is None or not mu0 > 0:
        raise InputError("a positive mu_floor is required")
    horizon = int(horizon)
    if horizon < 2:
        raise InputError("growth check needs horizon >= 2")
    alpha = qc.alpha
    n_max = horizon - 1
    d, p = growth_arrays(f, n_max)
    ns = np.arange(1, n_max + 1)
    dp = d[1:] * p[1:]
    positive = alpha > 0
    values = np.power(ns, alpha - 1.0) * dp if positive else dp / ns
    label = "n^(alpha-1) d_n p_n" if positive else "d_n p_n / n"
    evidence = [{"n": int(k), "d_n": int(dk), "p_n": float(pk), label: float(v)}
                for k, dk, pk, v in zip(ns, d[1:], p[1:], values)]
    res = GrowthCheck(alpha_case="positive" if positive else "zero", status="inconclusive",
                      basis="empirical-to-horizon", evidence=evidence)

    model = f.growth_model
    if model is not None:
        md = np.array([model.d(int(k)) for k in ns], dtype=float)
        mp = np.array([model.p(int(k)) for k in ns], dtype=float)
        if not (np.array_equal(md, d[1:]) and np.allclose(mp, p[1:], rtol=1e-12, atol=0)):
            res.notes.append("growth_model disagrees with the generated graph; ignored")
            model = None

    limit = mu0 / 2 - K_TOL
    if model is not None:
        res.basis = "growth_model"
        e = model.dp_exponent
        if positive:
            res.status = "pass" if alpha - 1 + e <= EXP_TOL else "fail"
            res.notes.append(f"exponent of n^(alpha-1) d_n p_n: {alpha - 1 + e:g}")
        elif e < 1 - EXP_TOL:
            res.status = "pass"
        elif abs(e - 1) <= EXP_TOL:
            res.status = "pass" if model.dp_coef < limit else "fail"
            res.notes.append(f"d_n p_n / n -> {model.dp_coef:g}")
        else:
            res.status = "fail"
            res.notes.append(f"d_n p_n / n grows like n^{e - 1:g}")
        mn = np.arange(1, max(MODEL_RANGE, n_max) + 1)
        w = np.array([model.dp(int(k)) / k for k in mn])
        if res.status == "pass":
            N, K = _first_tail_below(w, limit)
            if N is not None:
                res.N, res.K = int(mn[N]), K
        beta = np.array([model.dp(2 * int(k)) / (mu0 * k) for k in mn])
        N1, C1 = _first_tail_below(beta, 1.0)
        if N1 is not None:
            res.N1, res.C1, res.C1_basis = int(mn[N1]), C1, "growth_model, tightest on n <= %d" % mn[-1]
    else:
        if positive:
            res.status = "pass" if _tail_nonincreasing(values) else "inconclusive"
            w = dp / ns
        else:
            w = values
        N, K = _first_tail_below(w, limit)
        if N is not None and _tail_nonincreasing(w):
            res.N, res.K = int(ns[N]), K
            if not positive:
                res.status = "pass"
        elif not positive:
            res.status = "inconclusive"
        half = n_max // 2
        if half >= 1:
            beta = d[2:2 * half + 1:2] * p[2:2 * half + 1:2] / (mu0 * np.arange(1, half + 1))
            N1, C1 = _first_tail_below(beta, 1.0)
            if N1 is not None:
                res.N1, res.C1 = N1 + 1, C1
                res.C1_basis = f"empirical-to-horizon, tightest on n <= {half}"
    return res


# -- full check ---------------------------------------------------------------

@dataclass
class HypothesisReport:
    verdict: str
    alpha_case: str
    evidence: list
    w_minorant_checked_to: int
    mu_floor_used: float
    derived: dict
    checks: dict

    MEANING = {
        "satisfied": "criterion applies: H is essentially self-adjoint on C_c(V)",
        "not_satisfied": "a hypothesis fails; the criterion is silent (not a proof of failure)",
        "inconclusive": "finite evidence cannot settle a hypothesis; the criterion is silent",
    }

    def to_json(self):
        return {"verdict": self.verdict, "meaning": self.MEANING[self.verdict],
                "alpha_case": self.alpha_case, "mu_floor_used": self.mu_floor_used,
                "w_minorant_checked_to": self.w_minorant_checked_to, "derived": self.derived,
                "checks": self.checks, "evidence": self.evidence}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def check_theorem(f, W, qc, horizon, mu_floor=None):
    """Run every sub-check and combine them into a :class:`HypothesisReport`."""
    mu0 = f.mu_floor if mu_floor is None else float(mu_floor)
    if mu0 is None or not mu0 > 0:
        raise InputError("a positive mu_floor is required")
    horizon = int(horizon)
    g = f.generate(horizon)
    mu_ok = bool(np.all(g.mu >= mu0))
    checks = {"mu_floor": {"status": "pass" if mu_ok else "fail", "min_mu": float(g.mu.min()),
                           "basis": "empirical-to-horizon"},
              "q": check_q(qc, horizon),
              "minorant": check_minorant(f, W, qc, horizon)}
    growth = check_growth(f, qc, horizon, mu0)
    checks["growth"] = {k: v for k, v in growth.to_json().items() if k != "evidence"}
    states = [c["status"] for c in checks.values()]
    if all(s == "pass" for s in states):
        verdict = "satisfied"
    elif "fail" in states:
        verdict = "not_satisfied"
    else:
        verdict = "inconclusive"
    derived = {"C1": growth.C1, "N1": growth.N1, "C1_basis": growth.C1_basis,
               "K": growth.K, "N": growth.N}
    return HypothesisReport(verdict=verdict, alpha_case=growth.alpha_case,
                            evidence=growth.evidence, w_minorant_checked_to=horizon,
                            mu_floor_used=mu0, derived=derived, checks=checks)


@dataclass
class Instance:
    family: object
    potential: Potential
    q: QCertificate
    horizon: int
    mu_floor: Optional[float] = None
    doc: dict = field(default_factory=dict)

    def check(self):
        return check_theorem(self.family, self.potential, self.q, self.horizon, self.mu_floor)


def load_instance(doc):
    """Instance from ``{"family": {...}, "potential": ..., "q": {...}, "horizon": N}``."""
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    missing = [k for k in ("family", "potential", "q", "horizon") if k not in doc]
    if missing:
        raise InputError(f"instance is missing {missing}")
    extra = set(doc) - {"family", "potential", "q", "horizon", "mu_floor", "name"}
    if extra:
        raise InputError(f"unknown instance keys {sorted(extra)}")
    horizon = doc["horizon"]
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 2:
        raise InputError("horizon must be an integer >= 2")
    fam = family_from_description(doc["family"])
    mu_floor = doc.get("mu_floor")
    if mu_floor is not None:
        mu_floor = _num(doc, "mu_floor")
    return Instance(fam, potential_from_json(doc["potential"], fam), q_from_json(doc["q"]),
                    horizon, mu_floor, doc)


def _tree(kappa, alpha, horizon):
    return {"name": f"radial_tree kappa={kappa} alpha={alpha}",
            "family": {"builder": "radial_tree", "kappa": kappa, "alpha": alpha},
            "potential": "model", "q": {"kind": "power", "alpha": alpha}, "horizon": horizon}


EXAMPLE_INSTANCES = {
    "half_line_unit": {"name": "half_line_unit", "family": {"builder": "half_line_unit"},
                       "potential": "model", "q": {"kind": "linear", "slope": 1, "intercept": 1},
                       "horizon": 200},
    "half_line_sqrt": {"name": "half_line_sqrt", "family": {"builder": "half_line_sqrt"},
                       "potential": "model", "q": {"kind": "sqrt_plus_one"}, "horizon": 200},
    "tree_k0.5_a0.5": _tree(0.5, 0.5, 11),
    "tree_k0_a1": _tree(0.0, 1.0, 16),
    "tree_k1.5_a0": _tree(1.5, 0.0, 7),
    "tree_k0.5_a0.8": _tree(0.5, 0.8, 11),
}
