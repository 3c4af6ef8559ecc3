"""Independent reference implementations shared by unit and acceptance tests.

These deliberately avoid the library's code paths: explicit Python loops,
no shared kernels, so they can serve as oracles for the vectorized
implementations.
"""

import math

import numpy as np


def brute_force_dilate(labels, window, max_iters):
    """Per-pixel re-implementation of the iterated max-label dilation."""
    out = labels.copy()
    h, w = out.shape
    r = window // 2
    for _ in range(max_iters):
        if not (out == 0).any():
            break
        nxt = out.copy()
        for y in range(h):
            for x in range(w):
                if out[y, x] != 0:
                    continue
                best = 0
                for dy in range(-r, r + 1):
                    for dx in range(-r, r + 1):
                        yy, xx = y + dy, x + dx
                        if 0 <= yy < h and 0 <= xx < w and out[yy, xx] > best:
                            best = out[yy, xx]
                if best > 0:
                    nxt[y, x] = best
        out = nxt
    return out


def straight_line_ssim(a, b):
    """Windowed SSIM with explicit loops (11x11 Gaussian, sigma 1.5)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 3:
        a = a[:, :, 0] if a.shape[2] == 1 else a.mean(axis=2)
        b = b[:, :, 0] if b.shape[2] == 1 else b.mean(axis=2)
    size, sigma = 11, 1.5
    half = size // 2
    kern = np.empty((size, size))
    for i in range(size):
        for j in range(size):
            kern[i, j] = math.exp(-((i - half) ** 2 + (j - half) ** 2) / (2 * sigma * sigma))
    kern /= kern.sum()
    c1, c2 = 0.01 ** 2, 0.03 ** 2
    h, w = a.shape
    vals = []
    for y in range(h - size + 1):
        for x in range(w - size + 1):
            wa = a[y:y + size, x:x + size]
            wb = b[y:y + size, x:x + size]
            mu_a = (kern * wa).sum()
            mu_b = (kern * wb).sum()
            va = (kern * wa * wa).sum() - mu_a * mu_a
            vb = (kern * wb * wb).sum() - mu_b * mu_b
            cov = (kern * wa * wb).sum() - mu_a * mu_b
            vals.append(((2 * mu_a * mu_b + c1) * (2 * cov + c2))
                        / ((mu_a ** 2 + mu_b ** 2 + c1) * (va + vb + c2)))
    return float(np.mean(vals))
