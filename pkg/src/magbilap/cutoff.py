"""
Cut-off functions
=================

``chi_n(x) = min(max((2n - r(x)) / n, 0), 1)`` with ``r(x)`` the distance to
the root.  Since ``r`` is an integer, ``chi_n = c_n / n`` with the integer
numerator ``c_n = clip(2n - r, 0, n)``; the property checker works with
those numerators so every comparison is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import HorizonError, InputError
from .operators import Amplitudes

__all__ = ["CutoffFamily", "chi_values", "cutoff_numerators", "check_cutoff_properties",
           "PropertyReport"]


def _check_n(n):
    if int(n) != n or n < 1:
        raise InputError(f"cut-off index must be a positive integer, got {n!r}")
    return int(n)


def cutoff_numerators(levels, n):
    return np.clip(2 * n - np.asarray(levels, dtype=np.int64), 0, n)


def chi_values(levels, n):
    """``chi_n`` evaluated at distances ``levels``."""
    n = _check_n(n)
    r = np.asarray(levels, dtype=float)
    return np.minimum(np.maximum((2 * n - r) / n, 0.0), 1.0)


class CutoffFamily:
    """The sequence ``chi_n`` on a :class:`~magbilap.families.GraphFamily`."""

    def __init__(self, host):
        self.host = host

    def chi(self, n, x, horizon=None):
        """``chi_n(x)`` for vertex id ``x``.

        ``x`` is looked up in the ball of radius ``horizon`` (default ``2n``,
        beyond which ``chi_n`` vanishes anyway).
        """
        n = _check_n(n)
        g = self.host.generate(2 * n if horizon is None else horizon)
        return float(chi_values(g.level[g.vertex(x)], n))

    def as_amplitudes(self, n, horizon=None):
        """``chi_n`` as a finitely supported function on ``B(x0, horizon)``."""
        n = _check_n(n)
        horizon = 2 * n if horizon is None else int(horizon)
        if horizon < 2 * n:
            raise HorizonError(f"chi_{n} is supported in B(x0, {2 * n - 1}); "
                               f"horizon {horizon} < {2 * n}")
        g = self.host.generate(horizon)
        return Amplitudes(g, chi_values(g.level, n))

    def check(self, n):
        return check_cutoff_properties(self.host, n)


@dataclass
class PropertyReport:
    n: int
    checked_vertices: int
    checked_edges: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"n": self.n, "violations": self.violations,
                "checked_vertices": self.checked_vertices, "checked_edges": self.checked_edges}


def _record(violations, prop, idx, detail, limit=20):
    for k in idx[:limit]:
        violations.append({"property": prop, **detail(int(k))})


def check_cutoff_properties(f, n):
    """Check properties (i)-(vii) of ``chi_n`` on ``B(x0, 2n+1)``.

    (i) ``0 <= chi_n <= 1``; (ii) ``chi_n = 1`` on ``B(x0, n)``; (iii)
    ``chi_n = 0`` off ``B(x0, 2n)``; (iv) finite support; (v) finitised as
    ``chi_m(x) = 1`` for every ``m`` in ``[max(r(x), 1), 2n+1]``; (vi)
    ``|chi_n(x) - chi_n(y)| <= 1/n`` on edges; (vii) ``chi_n(y) <= 2 chi_n(x)``
    and ``chi_n(x) + chi_n(y) <= 3 chi_n(x)`` whenever ``chi_n(x) != 0``,
    ``y ~ x``.  Every vertex and oriented edge of the generated ball is
    visited.
    """
    n = _check_n(n)
    g = f.generate(2 * n + 1)
    r = g.level
    c = cutoff_numerators(r, n)
    chi = chi_values(r, n)
    ids = g.ids
    viol = []

    def vdetail(k):
        return {"vertex": ids[k], "r": int(r[k]), "value": float(chi[k])}

    # the float formula must agree with the exact numerator
    _record(viol, "formula", np.flatnonzero(chi != c / n), vdetail)
    _record(viol, "(i) 0 <= chi <= 1",
            np.flatnonzero((c < 0) | (c > n) | (chi < 0) | (chi > 1)), vdetail)
    _record(viol, "(ii) chi = 1 on B(x0,n)", np.flatnonzero((r <= n) & (c != n)), vdetail)
    _record(viol, "(iii) chi = 0 off B(x0,2n)", np.flatnonzero((r > 2 * n) & (c != 0)), vdetail)
    support = np.flatnonzero(c != 0)
    # (iv): the support lies in the ball of radius 2n, which is finite because
    # the ball of radius 2n+1 was generated
    if support.size and r[support].max() > 2 * n:
        _record(viol, "(iv) finite support", support[r[support] > 2 * n], vdetail)
    for m in range(1, 2 * n + 2):
        bad = np.flatnonzero((np.maximum(r, 1) <= m) & (cutoff_numerators(r, m) != m))
        _record(viol, "(v) chi_m(x) = 1 for m >= r(x)", bad,
                lambda k, m=m: {**vdetail(k), "m": m})

    x, y = g.src, g.dst
    # (vi) and (vii) are only checked where both endpoints are exact, i.e. the
    # edge is inside the generated ball (always true here)
    cx, cy = c[x], c[y]

    def edetail(k):
        return {"x": ids[x[k]], "y": ids[y[k]], "chi_x": float(chi[x[k]]),
                "chi_y": float(chi[y[k]])}

    _record(viol, "(vi) |chi(x) - chi(y)| <= 1/n", np.flatnonzero(np.abs(cx - cy) > 1), edetail)
    active = cx != 0
    _record(viol, "(vii) chi(y)/chi(x) <= 2", np.flatnonzero(active & (cy > 2 * cx)), edetail)
    _record(viol, "(vii) chi(x) + chi(y) <= 3 chi(x)",
            np.flatnonzero(active & (cx + cy > 3 * cx)), edetail)
    return PropertyReport(n=n, checked_vertices=g.n_vertices, checked_edges=int(x.size),
                          violations=viol)
