"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable or when
``ORTHOREAL_PURE=1``.  Signatures match the compiled module exactly.
"""

from __future__ import annotations

import numpy as np

BATCH = 1 << 15


def _coeff_block(p: int, d: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic enumeration of F_p^d."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, d), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out


def scan_quadratic(p: int, d: int, forms: np.ndarray, targets: np.ndarray, limit: int) -> np.ndarray:
    """Coefficient vectors c in F_p^d with c^T forms[k] c == targets[k] mod p for every k.

    Enumerates F_p^d in lexicographic order and returns at most ``limit``
    survivors as an (m, d) int64 array.
    """
    forms = np.ascontiguousarray(forms, dtype=np.int64)
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    total = p**d
    found = []
    nfound = 0
    for start in range(0, total, BATCH):
        stop = min(total, start + BATCH)
        C = _coeff_block(p, d, start, stop)
        ok = np.ones(stop - start, dtype=bool)
        for k in range(forms.shape[0]):
            sel = np.nonzero(ok)[0]
            if sel.size == 0:
                break
            Cs = C[sel]
            vals = np.einsum("nd,nd->n", Cs @ forms[k] % p, Cs) % p
            ok[sel[vals != targets[k]]] = False
        hit = C[ok]
        if hit.shape[0]:
            found.append(hit)
            nfound += hit.shape[0]
            if nfound >= limit:
                break
    if not found:
        return np.zeros((0, d), dtype=np.int64)
    return np.concatenate(found)[:limit]


def filter_bilinear(p: int, left: np.ndarray, right: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Mask over rows r of ``right`` with left[k] . r == targets[k] mod p for every k.

    ``left`` has shape (K, d) and ``right`` (m, d).
    """
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    if left.shape[0] == 0:
        return np.ones(right.shape[0], dtype=bool)
    vals = (right @ left.T) % p
    return np.all(vals == np.asarray(targets, dtype=np.int64)[None, :], axis=1)


def batch_rank(p: int, mats: np.ndarray) -> np.ndarray:
    """Rank of every matrix in an (N, r, c) stack over F_p."""
    A = np.array(mats, dtype=np.int64, copy=True) % p
    N, rows, cols = A.shape
    r = np.zeros(N, dtype=np.int64)
    ridx = np.arange(rows)
    allb = np.arange(N)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    for c in range(cols):
        mask = (A[:, :, c] != 0) & (ridx[None, :] >= r[:, None])
        has = mask.any(axis=1) & (r < rows)
        if not has.any():
            continue
        b = allb[has]
        piv = np.argmax(mask[b], axis=1)
        rb = r[b]
        prow = A[b, piv].copy()
        A[b, piv] = A[b, rb]
        A[b, rb] = prow
        prow = (prow * inv[prow[:, c]][:, None]) % p
        A[b, rb] = prow
        fac = A[b, :, c].copy()
        fac[np.arange(b.size), rb] = 0
        A[b] = (A[b] - fac[:, :, None] * prow[:, None, :]) % p
        r[b] += 1
    return r
