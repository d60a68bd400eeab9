"""Independent reference calculations used to freeze expected test values.

Nothing here imports the package under test. The alternate walk is evaluated
by summing amplitudes over every coin-outcome path; the Grover walk is
propagated on a dense, zero-padded grid with array rolls.
"""

import itertools
import math

import numpy as np

SQ2 = math.sqrt(2.0)
HAD = ((1 / SQ2, 1 / SQ2), (1 / SQ2, -1 / SQ2))


def alternate_path_sum(coin, n):
    """Site probabilities of the Hadamard alternate walk by path enumeration.

    Each of the 2n moves (x, y, x, y, ...) is preceded by a Hadamard; a path
    is the tuple of coin indices chosen at every move. The amplitude of a
    path is the product of the Hadamard entries along it times the initial
    coin amplitude it starts from.
    """
    amp = {}
    for c0 in (0, 1):
        if coin[c0] == 0:
            continue
        for path in itertools.product((0, 1), repeat=2 * n):
            a = complex(coin[c0])
            prev = c0
            x = y = 0
            for k, c in enumerate(path):
                a *= HAD[c][prev]
                step = 1 if c == 1 else -1
                if k % 2 == 0:
                    x += step
                else:
                    y += step
                prev = c
            key = (x, y, prev)
            amp[key] = amp.get(key, 0j) + a
    probs = {}
    for (x, y, _), a in amp.items():
        probs[(x, y)] = probs.get((x, y), 0.0) + abs(a) ** 2
    return {k: v for k, v in probs.items() if v > 1e-28}


GROVER = 0.5 * np.array(
    [[-1, 1, 1, 1], [1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]], dtype=complex
)
# coin index -> (dx, dy)
GROVER_MOVES = ((-1, -1), (-1, 1), (1, -1), (1, 1))


def grover_dense(coin, n):
    """Grover walk on a dense (2n+3)^2 grid; returns array P[x+R, y+R] and R."""
    r = n + 1
    size = 2 * r + 1
    psi = np.zeros((size, size, 4), dtype=complex)
    psi[r, r, :] = np.asarray(coin, dtype=complex)
    for _ in range(n):
        psi = psi @ GROVER.T
        out = np.zeros_like(psi)
        for c, (dx, dy) in enumerate(GROVER_MOVES):
            out[:, :, c] = np.roll(np.roll(psi[:, :, c], dx, axis=0), dy, axis=1)
        psi = out
    return (np.abs(psi) ** 2).sum(axis=2), r


def grover_dense_dict(coin, n):
    p, r = grover_dense(coin, n)
    idx = np.argwhere(p > 1e-28)
    return {(int(i) - r, int(j) - r): float(p[i, j]) for i, j in idx}


def mean_var(probs):
    mx = sum(p * x for (x, _), p in probs.items())
    my = sum(p * y for (_, y), p in probs.items())
    v = sum(p * ((x - mx) ** 2 + (y - my) ** 2) for (x, y), p in probs.items())
    return (mx, my), v


def classical(n):
    out = {}
    for kx in range(n + 1):
        for ky in range(n + 1):
            out[(2 * kx - n, 2 * ky - n)] = math.comb(n, kx) * math.comb(n, ky) / 4**n
    return out


def bhattacharyya_sq(p, q):
    keys = set(p) | set(q)
    return sum(math.sqrt(p.get(k, 0.0) * q.get(k, 0.0)) for k in keys) ** 2


def concurrence_werner(p):
    return max(0.0, (3 * p - 1) / 2)


def alternate_dense(coin, n):
    """Hadamard alternate walk on a dense grid; returns array P[x+R, y+R] and R."""
    r = n + 1
    size = 2 * r + 1
    h = np.array(HAD, dtype=complex)
    psi = np.zeros((size, size, 2), dtype=complex)
    psi[r, r, :] = np.asarray(coin, dtype=complex)
    for _ in range(n):
        for axis in (0, 1):
            psi = psi @ h.T
            out = np.empty_like(psi)
            out[:, :, 0] = np.roll(psi[:, :, 0], -1, axis=axis)
            out[:, :, 1] = np.roll(psi[:, :, 1], 1, axis=axis)
            psi = out
    return (np.abs(psi) ** 2).sum(axis=2), r


def alternate_dense_dict(coin, n):
    p, r = alternate_dense(coin, n)
    idx = np.argwhere(p > 1e-28)
    return {(int(i) - r, int(j) - r): float(p[i, j]) for i, j in idx}
