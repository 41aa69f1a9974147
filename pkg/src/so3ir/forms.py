"""Componentwise exterior algebra over an orthonormal frame.

Alternating k-forms and symmetric tensors are stored as full numpy arrays
indexed by frame labels, e.g. a 3-form T has T[i, j, k] = T(e_i, e_j, e_k).
All index arithmetic below assumes the frame is orthonormal, so vectors and
covectors share components and skew matrices act on every tensor slot alike.
"""

import itertools
from math import factorial

import numpy as np


def E(i: int, j: int, n: int = 5) -> np.ndarray:
    """Skew endomorphism sending e_i to e_j and e_j to -e_i (1-based labels).

    The sign convention matches the two-form e_i ^ e_j under
    :func:`skew_to_form`.
    """
    a = np.zeros((n, n))
    a[j - 1, i - 1] = 1.0
    a[i - 1, j - 1] = -1.0
    return a


def max_abs(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(x))) if x.size else 0.0


def alternate(t: np.ndarray) -> np.ndarray:
    """Full antisymmetrization of a tensor (projection onto alternating part)."""
    k = t.ndim
    out = np.zeros_like(t)
    for perm in itertools.permutations(range(k)):
        out += _perm_sign(perm) * np.transpose(t, perm)
    return out / factorial(k)


def symmetrize(t: np.ndarray) -> np.ndarray:
    """Full symmetrization of a tensor."""
    k = t.ndim
    out = np.zeros_like(t)
    for perm in itertools.permutations(range(k)):
        out += np.transpose(t, perm)
    return out / factorial(k)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Wedge product of alternating forms given as component arrays."""
    k, l = a.ndim, b.ndim
    prod = np.multiply.outer(a, b)
    return alternate(prod) * (factorial(k + l) / (factorial(k) * factorial(l)))


def interior(v: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Interior product v -| t (contraction into the first slot)."""
    return np.tensordot(v, t, axes=(0, 0))


def derivation_action(a: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Slotwise action of a skew matrix on a covariant tensor.

    For skew `a` in an orthonormal frame this is simultaneously the natural
    so(n)-action on k-forms and on symmetric tensors; it is the derivative of
    the pullback along exp(-s a).
    """
    if t.ndim == 0:
        return np.zeros_like(t)
    out = np.zeros_like(t)
    for slot in range(t.ndim):
        out += np.moveaxis(np.tensordot(a, t, axes=(1, slot)), 0, slot)
    return out


def basis_form(indices: tuple[int, ...], n: int = 5) -> np.ndarray:
    """Elementary wedge e_{i1} ^ ... ^ e_{ik} for strictly increasing 0-based indices."""
    k = len(indices)
    t = np.zeros((n,) * k)
    for perm in itertools.permutations(range(k)):
        t[tuple(indices[p] for p in perm)] = _perm_sign(perm)
    return t


def lex_combos(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def form_to_vec(t: np.ndarray) -> np.ndarray:
    """Independent components of an alternating form, in lexicographic order."""
    n, k = t.shape[0], t.ndim
    return np.array([t[c] for c in lex_combos(n, k)]) if k else np.array([float(t)])


def vec_to_form(vec: np.ndarray, n: int, k: int) -> np.ndarray:
    if k == 0:
        return np.array(float(vec[0]))
    out = np.zeros((n,) * k)
    for value, combo in zip(vec, lex_combos(n, k)):
        out += value * basis_form(combo, n)
    return out


_EPS5 = None


def _eps5() -> np.ndarray:
    global _EPS5
    if _EPS5 is None:
        eps = np.zeros((5,) * 5)
        for perm in itertools.permutations(range(5)):
            eps[perm] = _perm_sign(perm)
        _EPS5 = eps
    return _EPS5


def hodge3(t: np.ndarray) -> np.ndarray:
    """Hodge dual of a 3-form on R^5, yielding a 2-form (orientation e1^...^e5)."""
    return np.einsum("ijk,ijkab->ab", t, _eps5()) / 6.0


def hodge2(f: np.ndarray) -> np.ndarray:
    """Hodge dual of a 2-form on R^5, yielding a 3-form; inverse of :func:`hodge3`."""
    return np.einsum("ab,abijk->ijk", f, _eps5()) / 2.0


def skew_to_form(a: np.ndarray) -> np.ndarray:
    """Two-form omega(X, Y) = <A X, Y> attached to a skew matrix; E(i,j) maps to e_i ^ e_j."""
    return a.T.copy()


def form_to_skew(f: np.ndarray) -> np.ndarray:
    return f.T.copy()


def frob(a: np.ndarray, b: np.ndarray) -> float:
    """Inner product <A, B> = tr(A^T B) / 2 on skew matrices; E(i,j) has norm 1."""
    return float(np.trace(a.T @ b)) / 2.0


def nullspace(m: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal null-space basis (rows) of a matrix, by SVD thresholding."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] == 0:
        return np.eye(m.shape[1])
    u, s, vt = np.linalg.svd(m)
    cutoff = rtol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vt[rank:]


def matrix_rank(vectors: np.ndarray, rtol: float = 1e-8) -> int:
    """Rank of a stack of row vectors under the same SVD cutoff as :func:`nullspace`."""
    v = np.atleast_2d(vectors)
    if v.size == 0:
        return 0
    s = np.linalg.svd(v, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s.size else 0
