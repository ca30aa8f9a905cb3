import numpy as np


def cgauss(rng, m, n):
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def low_rank(rng, d, r):
    return cgauss(rng, d, r) @ cgauss(rng, r, d)


def e(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def parallel(u, v, tol=1e-10):
    """``u`` and ``v`` are nonzero multiples of each other."""
    u = np.asarray(u).ravel()
    v = np.asarray(v).ravel()
    return abs(abs(np.vdot(u, v)) - np.linalg.norm(u) * np.linalg.norm(v)) <= tol * np.linalg.norm(u) * np.linalg.norm(v)
