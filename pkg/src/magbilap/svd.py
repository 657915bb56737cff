"""
Dense singular values
=====================

Golub-Kahan route: Householder reduction of a complex matrix to a real
upper bidiagonal matrix, then bisection with Sturm counts on the
symmetric tridiagonal Golub-Kahan matrix

    T = tridiag(0; d1, e1, d2, e2, ..., dk; 0)

whose eigenvalues are ``+-sigma_i``.  Only singular values are computed.
"""

import numpy as np

__all__ = ["bidiagonalize", "bidiagonal_singular_values", "singular_values",
           "min_singular_value"]


def _householder(x):
    """Vector ``v`` and ``beta`` with ``(I - beta v v^H) x = alpha e1``."""
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return None, 0.0, 0.0
    x0 = x[0]
    ph = x0 / abs(x0) if x0 != 0 else 1.0
    alpha = -ph * nx
    v = x.copy()
    v[0] -= alpha
    vv = np.vdot(v, v).real
    if vv == 0.0:
        return None, 0.0, x0
    return v, 2.0 / vv, alpha


def bidiagonalize(A):
    """Real non-negative ``(d, e)`` of an upper bidiagonal matrix with the
    singular values of ``A``.

    Works on ``A^H`` when ``A`` is wide.  The moduli of the complex bidiagonal
    entries are returned; a bidiagonal matrix and its entrywise modulus are
    related by diagonal unitary scalings, so the singular values agree.
    """
    A = np.array(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError("expected a 2-D array")
    if A.shape[0] < A.shape[1]:
        A = A.conj().T.copy()
    m, n = A.shape
    for k in range(n):
        v, beta, _ = _householder(A[k:, k])
        if v is not None:
            A[k:, k:] -= beta * np.outer(v, v.conj() @ A[k:, k:])
        if k < n - 1:
            w, beta, _ = _householder(A[k, k + 1:].conj())
            if w is not None:
                A[k:, k + 1:] -= beta * np.outer(A[k:, k + 1:] @ w, w.conj())
    d = np.abs(np.diagonal(A)[:n]).copy()
    e = np.abs(np.diagonal(A, 1)[:n - 1]).copy()
    return d, e


def _tgk_offdiag(d, e):
    t = np.empty(2 * d.size - 1)
    t[0::2] = d
    t[1::2] = e
    return t


def _count_below(t2, x, pivmin):
    """Number of eigenvalues of the zero-diagonal tridiagonal matrix below ``x``.

    ``t2`` holds the squared off-diagonal; ``x`` may be an array of shifts.
    """
    q = -x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    for tt in t2:
        q = -x - tt / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def bidiagonal_singular_values(d, e, iters=None):
    """All singular values (descending) of the upper bidiagonal ``(d, e)``."""
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    k = d.size
    if k == 0:
        return np.empty(0)
    scale = max(np.abs(d).max(), np.abs(e).max() if e.size else 0.0)
    if scale == 0.0:
        return np.zeros(k)
    t = _tgk_offdiag(np.abs(d) / scale, np.abs(e) / scale)
    t2 = t * t
    pivmin = np.finfo(float).tiny * max(1.0, t2.max())
    upper = 2.0 * np.abs(t).max() + 1e-300
    # sigma_(j) (ascending, j = 0..k-1) is the eigenvalue with k + j eigenvalues below it
    target = k + np.arange(k)
    lo = np.zeros(k)
    hi = np.full(k, upper)
    eps = np.finfo(float).eps
    for _ in range(iters or 1100):
        mid = 0.5 * (lo + hi)
        if np.all((hi - lo <= 4 * eps * lo) | (hi < 1e-290)):
            break
        c = _count_below(t2, mid, pivmin)
        go_up = c <= target
        lo = np.where(go_up, mid, lo)
        hi = np.where(go_up, hi, mid)
    return (0.5 * (lo + hi))[::-1] * scale


def singular_values(A):
    """Singular values of a dense matrix, descending."""
    return bidiagonal_singular_values(*bidiagonalize(A))


def min_singular_value(A):
    """Smallest of the ``min(m, n)`` singular values of ``A``."""
    d, e = bidiagonalize(A)
    k = d.size
    if k == 0:
        return 0.0
    scale = max(d.max(), e.max() if e.size else 0.0)
    if scale == 0.0:
        return 0.0
    t = _tgk_offdiag(d / scale, e / scale)
    t2 = (t * t).tolist()
    pivmin = float(np.finfo(float).tiny) * max(1.0, max(t2))
    lo, hi = 0.0, 2.0 * float(np.abs(t).max())
    eps = np.finfo(float).eps
    while hi - lo > 4 * eps * lo and hi >= 1e-290:
        mid = 0.5 * (lo + hi)
        # scalar Sturm count; k eigenvalues are <= 0, so sigma_min < mid iff count > k
        q = -mid
        if abs(q) < pivmin:
            q = -pivmin
        c = int(q < 0)
        for tt in t2:
            q = -mid - tt / q
            if abs(q) < pivmin:
                q = -pivmin
            c += q < 0
        if c > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi) * scale
