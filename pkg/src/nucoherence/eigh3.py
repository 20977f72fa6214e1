"""Closed-form eigen-decomposition of 3x3 Hermitian matrices.

The best-isolated eigenvalue comes from the trigonometric Cardano solution of
the characteristic polynomial, polished by one Newton step; its eigenvector is
a cross product of two rows of ``A - lambda I``. The remaining pair is taken
from the 2x2 Hermitian block on the orthogonal complement, which keeps close
pairs accurate (the cubic alone only resolves them to ~sqrt(eps)).
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["cardano_roots", "eigvalsh3", "eigh3"]


def _char_coeffs(a):
    """c2, c1, c0 of lambda^3 - c2 lambda^2 + c1 lambda - c0."""
    c2 = (a[0, 0] + a[1, 1] + a[2, 2]).real
    c1 = (
        (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
        + (a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0])
        + (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
    ).real
    c0 = np.linalg.det(a).real
    return c2, c1, c0


def _newton(lam, c2, c1, c0):
    f = ((lam - c2) * lam + c1) * lam - c0
    df = (3.0 * lam - 2.0 * c2) * lam + c1
    if df == 0.0:
        return lam
    cand = lam - f / df
    fc = ((cand - c2) * cand + c1) * cand - c0
    return cand if abs(fc) < abs(f) else lam


def cardano_roots(a) -> np.ndarray:
    """Ascending roots of det(A - lambda I) for Hermitian A, Newton-polished."""
    a = np.asarray(a, dtype=complex)
    q = (a[0, 0] + a[1, 1] + a[2, 2]).real / 3.0
    b = a - q * np.eye(3)
    p2 = float(np.sum(np.abs(b) ** 2))
    if p2 == 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2 / 6.0)
    r = np.linalg.det(b / p).real / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    hi = q + 2.0 * p * math.cos(phi)
    lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    mid = 3.0 * q - hi - lo
    c2, c1, c0 = _char_coeffs(a)
    return np.sort([_newton(x, c2, c1, c0) for x in (lo, mid, hi)])


def _null_vector(m):
    """Unit v with m v = 0 for a rank-2 matrix m (largest row cross product)."""
    best, best_norm = None, -1.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.cross(m[i], m[j])
        n = np.linalg.norm(v)
        if n > best_norm:
            best, best_norm = v, n
    if best_norm == 0.0:
        return None
    return best / best_norm


def _complement(v):
    """Orthonormal 3x2 basis of the complement of unit vector v."""
    e = np.zeros(3, dtype=complex)
    e[int(np.argmin(np.abs(v)))] = 1.0
    u1 = e - np.vdot(v, e) * v
    u1 /= np.linalg.norm(u1)
    u2 = np.conj(np.cross(v, u1))
    u2 /= np.linalg.norm(u2)
    return np.column_stack([u1, u2])


def _eigh2(b):
    a, d, off = b[0, 0].real, b[1, 1].real, b[0, 1]
    mean = 0.5 * (a + d)
    h = math.hypot(0.5 * (a - d), abs(off))
    lam = np.array([mean - h, mean + h])
    x = np.array([off, lam[0] - a])
    y = np.array([lam[0] - d, np.conj(off)])
    v = x if np.linalg.norm(x) >= np.linalg.norm(y) else y
    n = np.linalg.norm(v)
    # a (near-)scalar block: any basis diagonalizes it to within h
    v = v / n if n > 0.0 else np.array([1.0, 0.0], dtype=complex)
    # the second eigenvector of a 2x2 Hermitian matrix is the orthogonal one
    return lam, np.column_stack([v, [-np.conj(v[1]), np.conj(v[0])]])


def eigh3(a):
    """Ascending eigenvalues and unitary eigenvector matrix (columns) of a 3x3 Hermitian matrix."""
    a = np.asarray(a, dtype=complex)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return np.zeros(3), np.eye(3, dtype=complex)
    s = 0.5 * (a + a.conj().T) / scale
    roots = cardano_roots(s)
    gaps = [min(abs(roots[k] - roots[m]) for m in range(3) if m != k) for k in range(3)]
    k = int(np.argmax(gaps))
    v = _null_vector(s - roots[k] * np.eye(3))
    if v is None:
        # all three eigenvalues coincide
        return roots * scale, np.eye(3, dtype=complex)
    q = _complement(v)
    lam2, x2 = _eigh2(q.conj().T @ s @ q)
    lam = np.concatenate([[roots[k]], lam2])
    w = np.column_stack([v, q @ x2])
    order = np.argsort(lam, kind="stable")
    return lam[order] * scale, w[:, order]


def eigvalsh3(a) -> np.ndarray:
    """Ascending eigenvalues of a 3x3 Hermitian matrix."""
    return eigh3(a)[0]
