"""
Operators on finitely supported functions
=========================================

The formal magnetic Laplacian

    (L_theta u)(x) = 1/mu(x) * sum_y b(x, y) (u(x) - exp(i theta(x, y)) u(y)),

its square, the perturbed square ``H = L_theta^2 + W`` and the bilinear
commutator term

    P_psi[u](x) = 1/mu(x) * sum_y b(x, y) (psi(x) - psi(y)) (u(x) - exp(i theta(x, y)) u(y)).

Functions are numpy arrays indexed like the vertices of the host graph and
are understood to vanish outside it.  An operator is only evaluated when its
whole stencil has been generated: the argument must vanish on the frontier
of a generated ball, otherwise :class:`~magbilap.errors.MarginError` is
raised.  Under that rule the returned array is the exact value of the
operator on the infinite graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import InputError, MarginError

__all__ = [
    "Amplitudes",
    "Potential",
    "SparseOperator",
    "apply_laplacian",
    "apply_bilaplacian",
    "apply_H",
    "apply_P",
    "inner",
    "norm",
    "assemble_truncation",
    "write_matrix_market",
]


class Amplitudes:
    """A finitely supported complex function on the vertices of ``graph``."""

    def __init__(self, graph, values=None):
        self.graph = graph
        if values is None:
            values = np.zeros(graph.n_vertices, dtype=complex)
        values = np.array(values, dtype=complex)
        if values.shape != (graph.n_vertices,):
            raise InputError(f"expected {graph.n_vertices} values, got shape {values.shape}")
        values.setflags(write=False)
        self.values = values

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __repr__(self):
        return f"Amplitudes(support={len(self.support())} of {self.graph.n_vertices})"

    @classmethod
    def delta(cls, graph, x, value=1.0):
        v = np.zeros(graph.n_vertices, dtype=complex)
        v[graph.vertex(x)] = value
        return cls(graph, v)

    def support(self):
        return [self.graph.ids[k] for k in np.flatnonzero(self.values)]

    def to_json(self):
        """``{id: [re, im]}`` over the support."""
        return {self.graph.ids[k]: [float(self.values[k].real), float(self.values[k].imag)]
                for k in np.flatnonzero(self.values)}

    @classmethod
    def from_json(cls, graph, doc):
        if not isinstance(doc, dict):
            raise InputError("amplitudes document must be a JSON object {id: [re, im]}")
        v = np.zeros(graph.n_vertices, dtype=complex)
        for key, val in doc.items():
            if isinstance(val, (int, float)) and not isinstance(val, bool):
                val = [val, 0.0]
            if not (isinstance(val, list) and len(val) == 2):
                raise InputError(f"amplitude for {key!r} must be [re, im]")
            v[graph.vertex(key)] = complex(float(val[0]), float(val[1]))
        return cls(graph, v)

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


class Potential:
    """Real potential ``W`` given as a function of the distance to the root or by table."""

    def __init__(self, func=None, table=None, text=""):
        self._func = func
        self._table = table
        self.text = text

    @classmethod
    def radial(cls, func, text=""):
        """``W(x) = func(r(x))``, ``func`` vectorised over integer arrays."""
        return cls(func=func, text=text)

    @classmethod
    def from_table(cls, table, text="tabulated"):
        return cls(table={str(k): float(v) for k, v in table.items()}, text=text)

    @classmethod
    def zero(cls):
        return cls.radial(lambda r: np.zeros(np.shape(r)), "W = 0")

    def on(self, g):
        """Values of ``W`` on the vertices of ``g``."""
        if self._table is not None:
            missing = [i for i in g.ids if i not in self._table]
            if missing:
                raise InputError(f"potential undefined at vertex {missing[0]!r}")
            return np.array([self._table[i] for i in g.ids], dtype=float)
        w = np.asarray(self._func(g.level), dtype=float)
        w = np.broadcast_to(w, (g.n_vertices,)).copy()
        if not np.all(np.isfinite(w)):
            raise InputError("potential must be finite and real")
        return w

    def __repr__(self):
        return f"Potential({self.text!r})"


def _vector(g, u, name="u"):
    u = np.asarray(u)
    if u.shape != (g.n_vertices,):
        raise InputError(f"{name} must have one entry per vertex ({g.n_vertices}), got {u.shape}")
    return u


def _check_margin(g, u, what):
    if g.frontier.any():
        bad = np.flatnonzero(g.frontier & (u != 0))
        if bad.size:
            raise MarginError(
                f"margin violation: {what} is nonzero at frontier vertex {g.ids[bad[0]]!r}; "
                "generate a larger horizon")


def apply_laplacian(g, u, magnetic=True):
    """``L_theta u`` (or the plain Laplacian when ``magnetic=False``)."""
    u = _vector(g, u)
    _check_margin(g, u, "the argument of the Laplacian")
    L = g.laplacian_matrix(magnetic)
    if not magnetic and not np.iscomplexobj(u):
        return L @ u.astype(float)
    return L @ u.astype(complex)


def apply_bilaplacian(g, u, magnetic=True):
    """``L_theta (L_theta u)`` by double application."""
    return apply_laplacian(g, apply_laplacian(g, u, magnetic), magnetic)


def apply_H(g, W, u):
    """``H u = L_theta^2 u + W u``; ``W`` is a :class:`Potential` or an array."""
    u = _vector(g, u)
    w = W.on(g) if isinstance(W, Potential) else _vector(g, W, "W")
    if np.iscomplexobj(w):
        raise InputError("the potential must be real")
    return apply_bilaplacian(g, u) + w * u


def apply_P(g, psi, u):
    """The commutator term ``P_psi[u]``, summed edge by edge.

    ``psi`` must be real.  The result is exact provided ``psi * u`` vanishes on
    the frontier.
    """
    psi = _vector(g, psi, "psi")
    if np.iscomplexobj(psi):
        if np.any(np.imag(psi) != 0):
            raise InputError("P_psi takes a real psi")
        psi = np.real(psi)
    psi = psi.astype(float)
    u = _vector(g, u).astype(complex)
    _check_margin(g, psi * u, "psi * u")
    x, y = g.src, g.dst
    term = g.b * (psi[x] - psi[y]) * (u[x] - g.phase * u[y])
    n = g.n_vertices
    out = (np.bincount(x, weights=term.real, minlength=n)
           + 1j * np.bincount(x, weights=term.imag, minlength=n))
    return out / g.mu


def inner(g, u, v):
    """``(u, v) = sum_x mu(x) u(x) conj(v(x))``."""
    u, v = _vector(g, u), _vector(g, v, "v")
    return complex(np.sum(g.mu * u * np.conj(v)))


def norm(g, u):
    u = _vector(g, u)
    return float(np.sqrt(np.sum(g.mu * np.abs(u) ** 2)))


# -- truncated matrices --------------------------------------------------------

@dataclass(frozen=True)
class SparseOperator:
    """Finite matrix realisation of ``H`` on a ball.

    The matrix is written in the orthonormal basis ``delta_x / sqrt(mu(x))``
    of the weighted space, i.e. ``matrix = D_r^{1/2} M D_c^{-1/2}`` where
    ``M[x, y] = (H delta_y)(x)``.  For ``mu = 1`` the two coincide.
    """

    matrix: sparse.csr_matrix
    row_ids: tuple
    col_ids: tuple
    row_mu: np.ndarray
    col_mu: np.ndarray
    hermitian: bool
    boundary: str
    horizon: int

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def dimension(self):
        return self.matrix.shape[1]

    def entries(self):
        """Coordinate list ``(row id, column id, value)`` in row-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(self.row_ids[i], self.col_ids[j], complex(v))
                for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order])]

    def apply(self, u):
        """Plain vertex values of ``H u`` on the rows, for ``u`` given on the columns."""
        u = np.asarray(u, dtype=complex)
        return (self.matrix @ (np.sqrt(self.col_mu) * u)) / np.sqrt(self.row_mu)

    def toarray(self):
        return self.matrix.toarray()

    def sidecar(self):
        return {"rows": list(self.row_ids), "cols": list(self.col_ids),
                "basis": "delta_x / sqrt(mu(x))", "boundary": self.boundary,
                "horizon": self.horizon, "hermitian": self.hermitian}


def assemble_truncation(f, W, N, boundary="dirichlet"):
    """Matrix of ``H`` on the ball of radius ``N`` of family ``f``.

    ``boundary="dirichlet"`` gives the square Hermitian matrix of ``H``
    compressed to ``B(x0, N)`` (functions vanish outside).  ``"interior_rows"``
    gives the rectangular operator whose columns are ``B(x0, N)`` and whose
    rows are ``B(x0, N-2)``; each retained row is the exact equation of the
    infinite graph.
    """
    N = int(N)
    if N < 4:
        raise InputError("truncation horizon must be at least 4")
    if boundary == "dirichlet":
        g = f.generate(N + 1)
        rows = cols = np.flatnonzero(g.level <= N)
    elif boundary == "interior_rows":
        g = f.generate(N)
        rows = np.flatnonzero(g.level <= N - 2)
        cols = np.flatnonzero(g.level <= N)
    else:
        raise InputError(f"unknown boundary {boundary!r}")
    L = g.laplacian_matrix(True)
    w = W.on(g) if isinstance(W, Potential) else np.asarray(W, dtype=float)
    diag = sparse.csr_matrix((w[rows], (np.arange(rows.size), np.searchsorted(cols, rows))),
                             shape=(rows.size, cols.size))
    M = (L[rows, :] @ L[:, cols] + diag).tocsr()
    sr, sc = np.sqrt(g.mu[rows]), np.sqrt(g.mu[cols])
    A = (sparse.diags(sr) @ M @ sparse.diags(1.0 / sc)).tocsr()
    hermitian = boundary == "dirichlet"
    if hermitian:
        A = ((A + A.conj().T) * 0.5).tocsr()
    A.sort_indices()
    A.eliminate_zeros()
    return SparseOperator(matrix=A, row_ids=tuple(g.ids[k] for k in rows),
                          col_ids=tuple(g.ids[k] for k in cols), row_mu=g.mu[rows],
                          col_mu=g.mu[cols], hermitian=hermitian, boundary=boundary,
                          horizon=N)


def write_matrix_market(op, path, sidecar_path=None):
    """Write ``op`` as a complex general coordinate Matrix Market file.

    Indices are 1-based.  A JSON sidecar mapping indices to vertex ids is
    written next to it (``<path>.ids.json`` unless given).
    """
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    m, n = op.shape
    lines = ["%%MatrixMarket matrix coordinate complex general",
             f"{m} {n} {coo.nnz}"]
    for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order]):
        lines.append(f"{i + 1} {j + 1} {float(v.real)!r} {float(v.imag)!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    sidecar_path = sidecar_path or f"{path}.ids.json"
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(op.sidecar(), fh, indent=1, sort_keys=True)
    return sidecar_path
