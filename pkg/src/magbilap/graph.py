"""
Weighted magnetic graphs
========================

A :class:`MagneticGraph` is a finite, connected, locally finite weighted graph
``(V, b, mu)`` with a root vertex and an antisymmetric phase ``theta`` on the
oriented edges.  Infinite graphs are handled by generating finite balls (see
:mod:`magbilap.families`); such balls mark their outermost layer as
*frontier*, meaning those vertices may have neighbours that were not
generated.

Vertex ids are opaque strings externally and dense integers internally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from .errors import GraphValidationError, HorizonError, InputError

__all__ = [
    "MagneticGraph",
    "Ball",
    "bfs_levels",
    "distance",
    "ball",
    "load_graph",
    "save_graph",
    "loads_graph",
    "dumps_graph",
]


def _readonly(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _gather_neighbors(indptr, indices, rows):
    """Concatenate the CSR neighbour lists of ``rows``."""
    starts = indptr[rows]
    lens = indptr[rows + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(lens)[:-1])), lens)
    return indices[offsets + np.arange(total)]


def bfs_levels(indptr, indices, source):
    """Level-synchronous breadth-first search on a CSR pattern.

    Returns an integer array of hop counts from ``source``; unreachable
    vertices get ``-1``.
    """
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    front = np.array([source], dtype=np.int64)
    d = 0
    while front.size:
        d += 1
        nb = _gather_neighbors(indptr, indices, front)
        nb = np.unique(nb)
        nb = nb[dist[nb] < 0]
        dist[nb] = d
        front = nb
    return dist


class MagneticGraph:
    """Finite rooted weighted graph with a magnetic phase.

    Parameters
    ----------
    ids : sequence of str
        External vertex ids, in internal index order.
    mu : array_like
        Vertex measure, one positive value per vertex.
    edge_u, edge_v : array_like of int
        Endpoints (internal indices) of each undirected edge.
    weight : array_like
        Edge weights ``b(u, v) > 0``.
    theta : array_like, optional
        Phase ``theta(u, v)`` for the orientation ``u -> v``; the reverse
        orientation carries ``-theta``.  Defaults to zero.
    root : int
        Internal index of the root ``x0``.
    mu_floor : float, optional
        Declared lower bound on ``mu``; defaults to ``min(mu)``.
    frontier : array_like of bool, optional
        Vertices whose neighbourhood may be incomplete (outer layer of a
        generated ball).  Empty for standalone graphs.
    """

    def __init__(self, ids, mu, edge_u, edge_v, weight, theta=None, root=0,
                 mu_floor=None, frontier=None, *, _records=None):
        ids = tuple(str(i) for i in ids)
        n = len(ids)
        if n == 0:
            raise GraphValidationError("empty graph", "at least one vertex is required")
        index = {}
        for k, i in enumerate(ids):
            if i in index:
                raise GraphValidationError("duplicate vertex", repr(i))
            index[i] = k
        mu = np.asarray(mu, dtype=float)
        eu = np.asarray(edge_u, dtype=np.int64).reshape(-1)
        ev = np.asarray(edge_v, dtype=np.int64).reshape(-1)
        eb = np.asarray(weight, dtype=float).reshape(-1)
        et = np.zeros(eu.shape) if theta is None else np.asarray(theta, dtype=float).reshape(-1)
        if mu.shape != (n,):
            raise InputError(f"mu must have one entry per vertex ({n}), got shape {mu.shape}")
        if not (eu.shape == ev.shape == eb.shape == et.shape):
            raise InputError("edge arrays must have equal length")
        if mu_floor is None:
            mu_floor = float(mu.min())
        mu_floor = float(mu_floor)
        if not (mu_floor > 0 and math.isfinite(mu_floor)):
            raise GraphValidationError("nonpositive measure", f"mu_floor={mu_floor!r}")
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
            bad = int(np.flatnonzero(~(mu > 0))[0])
            raise GraphValidationError("nonpositive measure", f"mu({ids[bad]})={mu[bad]!r}")
        if np.any(mu < mu_floor):
            bad = int(np.argmin(mu))
            raise GraphValidationError(
                "measure below floor", f"mu({ids[bad]})={mu[bad]!r} < mu_floor={mu_floor!r}")
        if eu.size:
            if eu.min() < 0 or ev.min() < 0 or max(eu.max(), ev.max()) >= n:
                raise GraphValidationError("unknown vertex", "edge endpoint index out of range")
            loops = np.flatnonzero(eu == ev)
            if loops.size:
                raise GraphValidationError("self-loop", f"at vertex {ids[eu[loops[0]]]}")
            if not np.all(np.isfinite(eb)) or np.any(eb <= 0):
                k = int(np.flatnonzero(~(eb > 0))[0])
                raise GraphValidationError(
                    "nonpositive weight", f"b({ids[eu[k]]},{ids[ev[k]]})={eb[k]!r}")
            if not np.all(np.isfinite(et)) or np.any(np.abs(et) > np.pi):
                k = int(np.flatnonzero(~(np.abs(et) <= np.pi))[0])
                raise GraphValidationError(
                    "phase out of range", f"theta({ids[eu[k]]},{ids[ev[k]]})={et[k]!r}")
            lo, hi = np.minimum(eu, ev), np.maximum(eu, ev)
            key = lo * n + hi
            uniq, counts = np.unique(key, return_counts=True)
            if np.any(counts > 1):
                k = int(uniq[counts > 1][0])
                raise GraphValidationError("duplicate edge", f"{{{ids[k // n]},{ids[k % n]}}}")
        root = int(root)
        if not 0 <= root < n:
            raise GraphValidationError("unknown vertex", f"root index {root}")

        self.ids = ids
        self.index = index
        self.mu = _readonly(mu)
        self.mu_floor = mu_floor
        self.root = root
        self.edge_u = _readonly(eu)
        self.edge_v = _readonly(ev)
        self.edge_b = _readonly(eb)
        self.edge_theta = _readonly(et)
        fr = np.zeros(n, dtype=bool) if frontier is None else np.asarray(frontier, dtype=bool)
        if fr.shape != (n,):
            raise InputError("frontier mask must have one entry per vertex")
        self.frontier = _readonly(fr)
        self._records = _records

        level = bfs_levels(self.indptr, self.indices, root)
        if np.any(level < 0):
            k = int(np.flatnonzero(level < 0)[0])
            raise GraphValidationError("disconnected", f"vertex {ids[k]} is not reachable from the root")
        self.level = _readonly(level)

    # -- sizes -----------------------------------------------------------
    @property
    def n_vertices(self):
        return len(self.ids)

    @property
    def n_edges(self):
        return int(self.edge_u.size)

    def __len__(self):
        return len(self.ids)

    def __repr__(self):
        return (f"MagneticGraph(n_vertices={self.n_vertices}, n_edges={self.n_edges}, "
                f"root={self.ids[self.root]!r}, mu_floor={self.mu_floor!r})")

    def vertex(self, x):
        """Internal index of vertex id ``x`` (ints are read as ids)."""
        try:
            return self.index[str(x)]
        except KeyError:
            raise InputError(f"unknown vertex id {x!r}") from None

    # -- oriented edge tables ---------------------------------------------
    @cached_property
    def _oriented(self):
        src = np.concatenate((self.edge_u, self.edge_v))
        dst = np.concatenate((self.edge_v, self.edge_u))
        b = np.concatenate((self.edge_b, self.edge_b))
        th = np.concatenate((self.edge_theta, -self.edge_theta))
        order = np.lexsort((dst, src))
        out = {k: _readonly(a[order]) for k, a in
               dict(src=src, dst=dst, b=b, theta=th).items()}
        out["phase"] = _readonly(np.exp(1j * out["theta"]))
        return out

    @property
    def src(self):
        """Source vertex of every oriented edge (sorted by source)."""
        return self._oriented["src"]

    @property
    def dst(self):
        return self._oriented["dst"]

    @property
    def b(self):
        """Weight of every oriented edge."""
        return self._oriented["b"]

    @property
    def theta(self):
        return self._oriented["theta"]

    @property
    def phase(self):
        """Cached phase factors ``exp(i theta(x, y))`` per oriented edge."""
        return self._oriented["phase"]

    @cached_property
    def indptr(self):
        counts = np.bincount(np.concatenate((self.edge_u, self.edge_v)),
                             minlength=self.n_vertices)
        return _readonly(np.concatenate(([0], np.cumsum(counts))).astype(np.int64))

    @property
    def indices(self):
        return self.dst

    @cached_property
    def degree(self):
        """Combinatorial degree ``deg(x)`` (number of neighbours)."""
        return _readonly(np.diff(self.indptr))

    @cached_property
    def weighted_degree(self):
        """``sum_y b(x, y)`` over the generated neighbours."""
        return _readonly(np.bincount(self.src, weights=self.b, minlength=self.n_vertices))

    @cached_property
    def max_weight(self):
        """``max_y b(x, y)`` over the generated neighbours (0 if isolated)."""
        out = np.zeros(self.n_vertices)
        np.maximum.at(out, self.src, self.b)
        return _readonly(out)

    def neighbors(self, x):
        """Neighbour ids of vertex id ``x``."""
        k = self.vertex(x)
        return [self.ids[j] for j in self.dst[self.indptr[k]:self.indptr[k + 1]]]

    @cached_property
    def weight_matrix(self):
        """Symmetric sparse matrix of edge weights ``b``."""
        n = self.n_vertices
        return sparse.csr_matrix((self.b, (self.src, self.dst)), shape=(n, n))

    @cached_property
    def magnetic_adjacency(self):
        """Hermitian sparse matrix with entries ``b(x, y) exp(i theta(x, y))``."""
        n = self.n_vertices
        return sparse.csr_matrix((self.b * self.phase, (self.src, self.dst)), shape=(n, n))

    def laplacian_matrix(self, magnetic=True):
        """Sparse matrix of the formal (magnetic) Laplacian on this vertex set.

        Rows of frontier vertices use only the generated edges and are
        therefore not trustworthy; :mod:`magbilap.operators` guards them.
        """
        return self._laplacians[bool(magnetic)]

    @cached_property
    def _laplacians(self):
        inv_mu = sparse.diags(1.0 / self.mu)
        deg = sparse.diags(self.weighted_degree)
        mag = (inv_mu @ (deg.astype(complex) - self.magnetic_adjacency)).tocsr()
        plain = (inv_mu @ (deg - self.weight_matrix)).tocsr()
        return {True: mag, False: plain}

    @property
    def max_level(self):
        return int(self.level.max())

    @property
    def complete(self):
        """True when no vertex can have ungenerated neighbours."""
        return not bool(self.frontier.any())


@dataclass(frozen=True)
class Ball:
    """The ball ``B(x0, n)``: vertices with ``r(x) <= n`` and the edges between them."""

    n: int
    vertices: tuple
    edges: tuple
    vertex_index: np.ndarray

    def __len__(self):
        return len(self.vertices)


def distance(g, x, y):
    """Combinatorial distance between vertex ids ``x`` and ``y`` inside ``g``."""
    i, j = g.vertex(x), g.vertex(y)
    if i == j:
        return 0
    if i == g.root:
        return int(g.level[j])
    if j == g.root:
        return int(g.level[i])
    return int(bfs_levels(g.indptr, g.indices, i)[j])


def ball(g, n):
    """Return ``B(x0, n)`` of ``g`` as a :class:`Ball`.

    Raises :class:`HorizonError` when ``g`` is a generated ball whose frontier
    lies inside radius ``n``, since the answer would then depend on
    vertices that were never generated.
    """
    n = int(n)
    if n < 0:
        raise InputError("ball radius must be non-negative")
    if not g.complete and n > int(g.level[g.frontier].min()):
        raise HorizonError(f"ball of radius {n} exceeds the generated horizon "
                           f"{int(g.level[g.frontier].min())}")
    idx = np.flatnonzero(g.level <= n)
    inside = g.level <= n
    mask = inside[g.edge_u] & inside[g.edge_v]
    edges = tuple((g.ids[a], g.ids[b]) for a, b in zip(g.edge_u[mask], g.edge_v[mask]))
    return Ball(n=n, vertices=tuple(g.ids[k] for k in idx), edges=edges,
                vertex_index=_readonly(idx))


# -- JSON documents -----------------------------------------------------------

def _canonical_phase(t):
    return math.pi if t == -math.pi else t


def _same_phase_reversed(t1, t2):
    # theta(y, x) = -theta(x, y), with pi and -pi identified
    if t2 == -t1:
        return True
    return abs(t1) == math.pi and abs(t2) == math.pi


def loads_graph(text):
    """Parse a graph document (JSON string) into a :class:`MagneticGraph`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphValidationError("schema", f"invalid JSON: {exc}") from None
    return load_graph(doc)


def load_graph(doc):
    """Build a :class:`MagneticGraph` from a parsed graph document.

    The document has keys ``root``, ``mu_floor``, ``vertices`` (list of
    ``{"id", "mu"}``) and ``edges`` (list of ``{"u", "v", "b", "theta"}``, the
    phase being for the orientation ``u -> v``).  An edge may be listed in
    both orientations as long as the two records agree.
    """
    if not isinstance(doc, dict):
        raise GraphValidationError("schema", "document must be a JSON object")
    for key in ("root", "mu_floor", "vertices", "edges"):
        if key not in doc:
            raise GraphValidationError("schema", f"missing key {key!r}")
    if not isinstance(doc["vertices"], list) or not isinstance(doc["edges"], list):
        raise GraphValidationError("schema", "'vertices' and 'edges' must be lists")

    ids, mus = [], []
    for rec in doc["vertices"]:
        if not isinstance(rec, dict) or "id" not in rec or "mu" not in rec:
            raise GraphValidationError("schema", f"bad vertex record {rec!r}")
        if not isinstance(rec["id"], str):
            raise GraphValidationError("schema", f"vertex id must be a string: {rec['id']!r}")
        if not isinstance(rec["mu"], (int, float)) or isinstance(rec["mu"], bool):
            raise GraphValidationError("schema", f"mu must be a number: {rec!r}")
        ids.append(rec["id"])
        mus.append(float(rec["mu"]))
    index = {}
    for k, i in enumerate(ids):
        if i in index:
            raise GraphValidationError("duplicate vertex", repr(i))
        index[i] = k

    records = []
    pairs = {}
    for rec in doc["edges"]:
        if not isinstance(rec, dict) or not {"u", "v", "b"} <= rec.keys():
            raise GraphValidationError("schema", f"bad edge record {rec!r}")
        u, v = rec["u"], rec["v"]
        if u not in index or v not in index:
            raise GraphValidationError("unknown vertex", f"edge ({u!r},{v!r})")
        for key in ("b", "theta"):
            val = rec.get(key, 0.0)
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise GraphValidationError("schema", f"{key} must be a number: {rec!r}")
        bval, tval = float(rec["b"]), float(rec.get("theta", 0.0))
        if u == v:
            raise GraphValidationError("self-loop", f"at vertex {u}")
        if not bval > 0:
            raise GraphValidationError("nonpositive weight", f"b({u},{v})={bval!r}")
        if not abs(tval) <= math.pi:
            raise GraphValidationError("phase out of range", f"theta({u},{v})={tval!r}")
        tval = _canonical_phase(tval)
        i, j = index[u], index[v]
        records.append((i, j, bval, tval))
        key = (min(i, j), max(i, j))
        pairs.setdefault(key, []).append((i, j, bval, tval))

    eu, ev, eb, et = [], [], [], []
    for key, recs in pairs.items():
        if len(recs) > 2 or (len(recs) == 2 and recs[0][0] == recs[1][0]):
            raise GraphValidationError("duplicate edge", f"{{{ids[key[0]]},{ids[key[1]]}}}")
        i, j, bval, tval = recs[0]
        if len(recs) == 2:
            _, _, b2, t2 = recs[1]
            if b2 != bval:
                raise GraphValidationError(
                    "asymmetric weight", f"b({ids[i]},{ids[j]})={bval!r} but b({ids[j]},{ids[i]})={b2!r}")
            if not _same_phase_reversed(tval, t2):
                raise GraphValidationError(
                    "phase not antisymmetric",
                    f"theta({ids[i]},{ids[j]})={tval!r}, theta({ids[j]},{ids[i]})={t2!r}")
        eu.append(i)
        ev.append(j)
        eb.append(bval)
        et.append(tval)

    root = doc["root"]
    if root not in index:
        raise GraphValidationError("unknown vertex", f"root {root!r}")
    mu_floor = doc["mu_floor"]
    if not isinstance(mu_floor, (int, float)) or isinstance(mu_floor, bool):
        raise GraphValidationError("schema", "mu_floor must be a number")
    return MagneticGraph(ids, mus, eu, ev, eb, et, root=index[root],
                         mu_floor=float(mu_floor), _records=records)


def save_graph(g):
    """Graph document (a dict) for ``g``; inverse of :func:`load_graph`."""
    records = g._records
    if records is None:
        records = zip(g.edge_u.tolist(), g.edge_v.tolist(),
                      g.edge_b.tolist(), g.edge_theta.tolist())
    return {
        "root": g.ids[g.root],
        "mu_floor": g.mu_floor,
        "vertices": [{"id": i, "mu": float(m)} for i, m in zip(g.ids, g.mu.tolist())],
        "edges": [{"u": g.ids[i], "v": g.ids[j], "b": float(bv), "theta": float(tv)}
                  for i, j, bv, tv in records],
    }


def dumps_graph(g, **kwargs):
    kwargs.setdefault("indent", 1)
    return json.dumps(save_graph(g), **kwargs)
