"""Pure numpy implementations of the hot loops.

These are the fallback when the compiled ``_ckernels`` extension is not
available, and the reference the compiled versions are tested against.
Both implementations must stay step-for-step identical.
"""
import numpy as np

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    pass


def _wilkinson_shift(a, b, c, d):
    half = 0.5 * (a - d)
    root = np.sqrt(half * half + b * c)
    mu1 = 0.5 * (a + d) + root
    mu2 = 0.5 * (a + d) - root
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def hessenberg_qr(h, z, max_sweeps):
    """Shifted QR iteration driving upper Hessenberg ``h`` to triangular form.

    Works in place: ``h`` becomes the Schur factor and the column rotations
    are accumulated into ``z``. Returns the number of QR sweeps performed.
    """
    n = h.shape[0]
    hi = n - 1
    its = 0
    sweeps = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = 1.0
            if abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"QR iteration did not converge in {max_sweeps} sweeps")
        its += 1
        sweeps += 1
        if its % 10 == 0:
            # exceptional shift breaks cycles of the Wilkinson shift
            shift = h[hi, hi] + abs(h[hi, hi - 1]) * complex(0.6, 0.8)
        else:
            shift = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])

        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= shift
        rots = []
        for k in range(lo, hi):
            a = h[k, k]
            b = h[k + 1, k]
            r = np.hypot(abs(a), abs(b))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = a / r, b / r
            rows = h[k:k + 2, k:].copy()
            h[k, k:] = c.conjugate() * rows[0] + s.conjugate() * rows[1]
            h[k + 1, k:] = -s * rows[0] + c * rows[1]
            h[k + 1, k] = 0.0
            rots.append((c, s))
        for k, (c, s) in zip(range(lo, hi), rots):
            cols = h[:k + 2, k:k + 2].copy()
            h[:k + 2, k] = c * cols[:, 0] + s * cols[:, 1]
            h[:k + 2, k + 1] = -s.conjugate() * cols[:, 0] + c.conjugate() * cols[:, 1]
            zc = z[:, k:k + 2].copy()
            z[:, k] = c * zc[:, 0] + s * zc[:, 1]
            z[:, k + 1] = -s.conjugate() * zc[:, 0] + c.conjugate() * zc[:, 1]
        h[idx, idx] += shift
    return sweeps


def apply_pair_rotations(m, tails, heads, cos_d, isin_d):
    """Left-multiply ``m`` in place by a matching factor.

    On each pair (tail, head) the factor acts as [[cos, i sin], [i sin, cos]];
    rows outside the pairs are untouched.
    """
    if len(tails) == 0:
        return
    top = m[tails].copy()
    bottom = m[heads]
    m[tails] = cos_d * top + isin_d * bottom
    m[heads] = isin_d * top + cos_d * bottom
