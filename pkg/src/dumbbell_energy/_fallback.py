"""Pure numpy implementation of the batched log-kernel sum."""

import numpy as np

_CHUNK = 256


def batch_log_sum(case, z, w, x, y, weight, alpha, beta, floor):
    """Return ``(sum_i weight_i * log K_i(alpha_p, beta_p) for each p, n_clamped)``."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    out = np.empty(alpha.shape[0])
    clamped = 0
    for start in range(0, alpha.shape[0], _CHUNK):
        a = alpha[start:start + _CHUNK, None]
        b = beta[start:start + _CHUNK, None]
        if case == 0:
            p = z - 2 * a * x - 2 * b * y + 4 * a * b * w
            k = p * p
        elif case == 1:
            p = z - (a * b) * w
            q = a * x + b * y
            k = p * p + q * q
        else:
            p = z - 2 * a * x
            q = y - 2 * a * w
            k = p * p + 4 * (b * b) * (q * q)
        low = k < floor
        if low.any():
            clamped += int(low.sum())
            k = np.where(low, floor, k)
        # row-wise reduction so a point's sum does not depend on its batch
        out[start:start + _CHUNK] = (np.log(k) * weight).sum(axis=1)
    return out, clamped
