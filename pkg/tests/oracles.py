"""Slow, direct reference implementations used only by the tests.

Each one is written from the defining formula and shares no code with the
package under test.
"""

import math

import numpy as np


def circular_convolve_naive(img, kernel):
    """Spatial circular convolution, one kernel tap at a time.

    out[y, x] = sum_{r,c} k[r, c] * img[(y - (r - h)) % H, (x - (c - h)) % W]
    with h = K // 2, i.e. the kernel centered on each output pixel.
    """
    img = np.asarray(img, dtype=float)
    kernel = np.asarray(kernel, dtype=complex)
    H, W = img.shape
    K = kernel.shape[0]
    h = K // 2
    rows = np.arange(H)
    cols = np.arange(W)
    out = np.zeros((H, W), dtype=complex)
    for r in range(K):
        src_rows = (rows - (r - h)) % H
        for c in range(K):
            src_cols = (cols - (c - h)) % W
            out += kernel[r, c] * img[np.ix_(src_rows, src_cols)]
    return out


def neighbor_sum_naive(tones, d):
    """Window sums (center excluded) at every interior pixel, pure Python ints."""
    tones = [[int(v) for v in row] for row in np.asarray(tones)]
    H, W = len(tones), len(tones[0])
    out = []
    for k in range(d, H - d):
        row = []
        for l in range(d, W - d):
            total = 0
            for m in range(-d, d + 1):
                for n in range(-d, d + 1):
                    if (m, n) != (0, 0):
                        total += tones[k + m][l + n]
            row.append(total)
        out.append(row)
    return out


def ngtdm_naive(tones, d):
    """s(i) and p_i straight from their definitions."""
    tones = np.asarray(tones)
    sums = neighbor_sum_naive(tones, d)
    n_neighbors = (2 * d + 1) ** 2 - 1
    s = [0.0] * 256
    counts = [0] * 256
    for a, k in enumerate(range(d, tones.shape[0] - d)):
        for b, l in enumerate(range(d, tones.shape[1] - d)):
            i = int(tones[k, l])
            counts[i] += 1
            s[i] += abs(i - sums[a][b] / n_neighbors)
    n = sum(counts)
    return np.array(s), np.array(counts) / n, n


def dct2_ortho_naive(block):
    """Orthonormal 2-D DCT-II from the cosine sum."""
    block = np.asarray(block, dtype=float)
    N = block.shape[0]

    def alpha(k):
        return math.sqrt(1.0 / N) if k == 0 else math.sqrt(2.0 / N)

    out = np.zeros((N, N))
    for u in range(N):
        for v in range(N):
            total = 0.0
            for x in range(N):
                for y in range(N):
                    total += (block[x, y]
                              * math.cos(math.pi * (2 * x + 1) * u / (2 * N))
                              * math.cos(math.pi * (2 * y + 1) * v / (2 * N)))
            out[u, v] = alpha(u) * alpha(v) * total
    return out


def block_means_naive(channel, grid=8):
    """Block means when the side is a multiple of ``grid``."""
    channel = np.asarray(channel, dtype=float)
    H, W = channel.shape
    bh, bw = H // grid, W // grid
    return channel.reshape(grid, bh, grid, bw).mean(axis=(1, 3))


def color_structure_naive(bins, n_bins, window=8):
    """Per-window color presence, counted window by window."""
    bins = np.asarray(bins)
    H, W = bins.shape
    hist = np.zeros(n_bins)
    positions = 0
    for r in range(H - window + 1):
        for c in range(W - window + 1):
            for color in set(bins[r:r + window, c:c + window].ravel().tolist()):
                hist[color] += 1
            positions += 1
    return hist / positions


def _project_box_hyperplane(v, y, C):
    """Euclidean projection of v onto {0 <= a <= C, sum(a*y) = 0} by bisection."""
    def clipped(mu):
        return np.clip(v - mu * y, 0.0, C)

    lo, hi = -1.0, 1.0
    while np.dot(clipped(lo), y) < 0:
        lo *= 2
    while np.dot(clipped(hi), y) > 0:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.dot(clipped(mid), y) > 0:
            lo = mid
        else:
            hi = mid
    return clipped(0.5 * (lo + hi))


def dual_optimum_projected_gradient(K, y, C, tol=1e-8, max_iter=200_000):
    """Maximize sum(a) - 1/2 a'Qa, Q = (yy') * K, over the box and the hyperplane.

    Accelerated projected gradient with step 1/L; stops once an iteration
    moves ``a`` by less than ``tol``.
    """
    y = np.asarray(y, dtype=float)
    Q = np.outer(y, y) * K
    L = max(float(np.linalg.eigvalsh(Q).max()), 1e-12)
    a = np.zeros(len(y))
    z = a.copy()
    t = 1.0
    for _ in range(max_iter):
        grad = 1.0 - Q @ z
        a_next = _project_box_hyperplane(z + grad / L, y, C)
        t_next = 0.5 * (1 + math.sqrt(1 + 4 * t * t))
        z = a_next + ((t - 1) / t_next) * (a_next - a)
        moved = np.max(np.abs(a_next - a))
        a, t = a_next, t_next
        if moved < tol:
            break
    return a, float(a.sum() - 0.5 * a @ Q @ a)


def splitmix64_reference(seed, count):
    """First ``count`` outputs of SplitMix64 as published by Vigna."""
    mask = (1 << 64) - 1
    x = seed & mask
    out = []
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & mask
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append(z ^ (z >> 31))
    return out
