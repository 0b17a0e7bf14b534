"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; setting
``ORTHOREAL_PURE=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("ORTHOREAL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

scan_quadratic = _impl.scan_quadratic
filter_bilinear = _impl.filter_bilinear
batch_rank = _impl.batch_rank

__all__ = ["BACKEND", "scan_quadratic", "scan_quadratic_field", "filter_bilinear", "batch_rank"]


def scan_quadratic_field(F, forms, targets, limit: int):
    """``scan_quadratic`` over any F_q; extension fields use table arithmetic."""
    forms = np.asarray(forms, dtype=np.int64)
    d = forms.shape[-1]
    if F.k == 1:
        return scan_quadratic(F.p, d, forms % F.p, np.asarray(targets, dtype=np.int64) % F.p, limit)
    total = F.q**d
    found = []
    nfound = 0
    for start in range(0, total, _kernels_py.BATCH):
        stop = min(total, start + _kernels_py.BATCH)
        C = _kernels_py._coeff_block(F.q, d, start, stop)
        ok = np.ones(C.shape[0], dtype=bool)
        for M, t in zip(forms, targets):
            sel = np.nonzero(ok)[0]
            if not sel.size:
                break
            Cs = C[sel]
            vals = F.vsum(F.vmul(F.matmul(Cs, M), Cs), axis=-1)
            ok[sel[vals != t]] = False
        if ok.any():
            found.append(C[ok])
            nfound += int(ok.sum())
            if nfound >= limit:
                break
    if not found:
        return np.zeros((0, d), dtype=np.int64)
    return np.concatenate(found)[:limit]
