"""Lie algebras as structure constants, reductive splits, isotropy representations.

A Lie algebra is a labeled basis plus the rank-3 array c with
[b_i, b_j] = sum_k c[i, j, k] b_k.  A reductive space fixes a subalgebra h,
an adapted complement m split into metric summands, and carries the derived
orthonormal frame together with the isotropy matrices of h acting on m.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, SpaceInputError
from .forms import basis_form, derivation_action, form_to_vec, lex_combos, max_abs, nullspace, vec_to_form

DEFAULT_TOL = 1e-9
NULLSPACE_RTOL = 1e-8


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    basis_labels: tuple[str, ...]
    c: np.ndarray  # shape (dim, dim, dim)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.dim,) * 3:
            raise SpaceInputError(f"structure constants must have shape {(self.dim,) * 3}, got {c.shape}")
        if len(self.basis_labels) != self.dim:
            raise SpaceInputError("one basis label per dimension required")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    def antisymmetry_residual(self) -> float:
        return max_abs(self.c + np.swapaxes(self.c, 0, 1))


def bracket(g: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bracket of two coordinate vectors: sum_ij x_i y_j c[i, j, :]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (g.dim,) or y.shape != (g.dim,):
        raise SpaceInputError(f"bracket arguments must be vectors of length {g.dim}")
    return np.einsum("i,j,ijk->k", x, y, g.c)


def jacobi_residual(g: LieAlgebra) -> float:
    """Largest violation of the Jacobi identity over all index triples."""
    cc = np.einsum("ijm,mkl->ijkl", g.c, g.c)
    jac = cc + np.transpose(cc, (1, 2, 0, 3)) + np.transpose(cc, (2, 0, 1, 3))
    return max_abs(jac)


def algebra_from_matrix_basis(mats, labels, tol: float = DEFAULT_TOL) -> LieAlgebra:
    """Structure constants of a matrix Lie algebra in the given basis.

    Accepts real or complex matrices; the constants must come out real and the
    basis must be closed under commutators (residual checked against `tol`).
    """
    mats = [np.asarray(m) for m in mats]
    n = len(mats)
    flat = np.stack([m.reshape(-1) for m in mats], axis=1)
    basis = np.concatenate([flat.real, flat.imag], axis=0)
    c = np.zeros((n, n, n))
    worst = 0.0
    for i in range(n):
        for j in range(n):
            w = mats[i] @ mats[j] - mats[j] @ mats[i]
            rhs = np.concatenate([w.reshape(-1).real, w.reshape(-1).imag])
            coef, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
            worst = max(worst, max_abs(basis @ coef - rhs))
            c[i, j] = coef
    if worst > tol:
        raise SpaceInputError(f"matrix basis is not closed under commutators (residual {worst:.3e})")
    return LieAlgebra(n, tuple(labels), c)


def change_of_basis(g: LieAlgebra, new_basis: np.ndarray, labels) -> LieAlgebra:
    """Re-express structure constants in a new basis given by rows in old coordinates."""
    b = np.asarray(new_basis, dtype=float)
    if b.shape != (g.dim, g.dim):
        raise SpaceInputError("new basis must be a square matrix of row vectors")
    if abs(np.linalg.det(b)) < 1e-12:
        raise SpaceInputError("new basis is singular")
    old = np.einsum("ip,jq,pqr->ijr", b, b, g.c)
    c_new = np.linalg.solve(b.T, old.reshape(-1, g.dim).T).T.reshape(g.dim, g.dim, g.dim)
    return LieAlgebra(g.dim, tuple(labels), c_new)


def direct_sum(a: LieAlgebra, b: LieAlgebra, labels=None) -> LieAlgebra:
    n = a.dim + b.dim
    c = np.zeros((n, n, n))
    c[: a.dim, : a.dim, : a.dim] = a.c
    c[a.dim :, a.dim :, a.dim :] = b.c
    if labels is None:
        labels = tuple(a.basis_labels) + tuple(b.basis_labels)
    return LieAlgebra(n, tuple(labels), c)


@dataclass(frozen=True)
class Representation:
    """Images of abstract generators as skew matrices, with the constants they must satisfy."""

    matrices: tuple[np.ndarray, ...]
    generator_brackets: np.ndarray  # abstract structure constants, shape (k, k, k)

    def homomorphism_residual(self) -> float:
        mats = self.matrices
        worst = 0.0
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                expected = sum(self.generator_brackets[i, j, k] * mats[k] for k in range(len(mats)))
                worst = max(worst, max_abs(a @ b - b @ a - expected))
        return worst


def commutant_dimension(rep: Representation, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the space of matrices commuting with every generator image."""
    if rep.homomorphism_residual() > tol:
        raise SpaceInputError("representation fails the homomorphism property")
    n = rep.matrices[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, a.T) - np.kron(a, eye) for a in rep.matrices]
    return nullspace(np.vstack(rows), NULLSPACE_RTOL).shape[0]


@dataclass(frozen=True)
class ReductiveSpace:
    """Adapted reductive split g = h + m with block-diagonal metric on m.

    `frame` holds the orthonormal frame of m as rows in g coordinates; the
    isotropy matrices are the ad-action of each h generator on m in that frame.
    `brackets_m`/`brackets_h` cache the frame brackets: [e_i, e_j] =
    sum_k brackets_m[i,j,k] e_k + sum_a brackets_h[i,j,a] h_a.
    """

    algebra: LieAlgebra
    h_basis: np.ndarray  # (dim_h, N) rows
    m_summands: tuple[tuple[int, ...], ...]
    metric_scales: tuple[float, ...]
    frame: np.ndarray = field(repr=False)  # (dim_m, N) rows
    isotropy: tuple[np.ndarray, ...] = field(repr=False)
    brackets_m: np.ndarray = field(repr=False)
    brackets_h: np.ndarray = field(repr=False)

    @property
    def dim_m(self) -> int:
        return self.frame.shape[0]

    @property
    def dim_h(self) -> int:
        return self.h_basis.shape[0]

    def h_structure_constants(self) -> np.ndarray:
        g = self.algebra
        k = self.dim_h
        c_h = np.zeros((k, k, k))
        for i in range(k):
            for j in range(k):
                w = bracket(g, self.h_basis[i], self.h_basis[j])
                c_h[i, j], *_ = np.linalg.lstsq(self.h_basis.T, w, rcond=None)
        return c_h

    def isotropy_homomorphism_residual(self) -> float:
        rep = Representation(tuple(self.isotropy), self.h_structure_constants())
        return rep.homomorphism_residual()

    def project_m(self, w: np.ndarray) -> np.ndarray:
        """Frame components of the m-part of a g-coordinate vector."""
        coef = np.linalg.solve(self._adapted().T, w)
        return coef[: self.dim_m]

    def _adapted(self) -> np.ndarray:
        return np.vstack([self.frame, self.h_basis])


def build_reductive_space(
    g: LieAlgebra,
    h_basis,
    m_summands,
    metric_scales,
    tol: float = DEFAULT_TOL,
) -> ReductiveSpace:
    """Construct the frame, isotropy and cached brackets of a reductive split.

    Raises `SpaceInputError` for malformed input (overlapping or non-spanning
    bases, non-positive scales) and `InvariantViolation` when h fails to be a
    subalgebra, [h, m] is not contained in m, or an isotropy matrix is not
    skew / does not preserve the metric summands.
    """
    h = np.atleast_2d(np.asarray(h_basis, dtype=float))
    summands = tuple(tuple(int(i) for i in s) for s in m_summands)
    scales = tuple(float(s) for s in metric_scales)
    if len(scales) != len(summands):
        raise SpaceInputError("one metric scale per summand required")
    if any(s <= 0 for s in scales):
        raise SpaceInputError(f"metric scales must be positive, got {scales}")
    m_idx = [i for s in summands for i in s]
    if len(set(m_idx)) != len(m_idx):
        raise SpaceInputError("m summands must be disjoint index lists")
    if len(m_idx) + h.shape[0] != g.dim:
        raise SpaceInputError("h basis and m indices must complement each other in g")

    raw_m = np.eye(g.dim)[m_idx]
    adapted = np.vstack([raw_m, h])
    if np.linalg.matrix_rank(adapted) < g.dim:
        raise SpaceInputError("h basis and m indices do not span the algebra (overlap or deficiency)")

    # h is a subalgebra: [h, h] must decompose over h alone.
    for i in range(h.shape[0]):
        for j in range(h.shape[0]):
            w = bracket(g, h[i], h[j])
            coef, *_ = np.linalg.lstsq(h.T, w, rcond=None)
            res = max_abs(h.T @ coef - w)
            if res > tol:
                raise InvariantViolation(
                    f"h is not a subalgebra: [{i},{j}] leaves h", residual=res
                )

    scale_of = np.concatenate([np.full(len(s), sc) for s, sc in zip(summands, scales)])
    frame = raw_m / np.sqrt(scale_of)[:, None]
    n = frame.shape[0]
    basis_t = np.vstack([frame, h]).T
    basis_inv = np.linalg.inv(basis_t)

    # Reductivity and isotropy in one pass: [h_a, e_j] must have no h-component.
    isotropy = []
    for a in range(h.shape[0]):
        w = np.einsum("p,jq,pqr->rj", h[a], frame, g.c)
        coef = basis_inv @ w
        res = max_abs(coef[n:])
        if res > tol:
            raise InvariantViolation(
                f"not reductive: [h_{a}, m] has an h-component", residual=res
            )
        mat = coef[:n]
        skew_res = max_abs(mat + mat.T)
        if skew_res > tol:
            raise InvariantViolation(
                f"isotropy matrix of h_{a} is not skew (metric is not ad(h)-invariant)",
                residual=skew_res,
            )
        pos = 0
        for s in summands:
            block = slice(pos, pos + len(s))
            off = mat[:, block].copy()
            off[block, :] = 0.0
            if max_abs(off) > tol:
                raise InvariantViolation(
                    f"isotropy matrix of h_{a} does not preserve metric summand {s}",
                    residual=max_abs(off),
                )
            pos += len(s)
        isotropy.append(mat)

    pairs = np.einsum("ip,jq,pqr->rij", frame, frame, g.c)
    coef = np.einsum("sr,rij->ijs", basis_inv, pairs)
    brackets_m = coef[:, :, :n]
    brackets_h = coef[:, :, n:]

    return ReductiveSpace(
        algebra=g,
        h_basis=h,
        m_summands=summands,
        metric_scales=scales,
        frame=frame,
        isotropy=tuple(isotropy),
        brackets_m=brackets_m,
        brackets_h=brackets_h,
    )


def invariant_forms(space: ReductiveSpace, k: int, rtol: float = NULLSPACE_RTOL) -> list[np.ndarray]:
    """Basis of isotropy-invariant alternating k-forms on m, as component arrays."""
    n = space.dim_m
    if not 0 <= k <= n:
        raise SpaceInputError(f"form degree must lie in [0, {n}]")
    if k == 0:
        return [np.array(1.0)]
    combos = lex_combos(n, k)
    rows = []
    for a in space.isotropy:
        act = np.zeros((len(combos), len(combos)))
        for col, combo in enumerate(combos):
            act[:, col] = form_to_vec(derivation_action(a, basis_form(combo, n)))
        rows.append(act)
    null = nullspace(np.vstack(rows), rtol)
    return [vec_to_form(v, n, k) for v in null]


def so_matrix_basis(n: int) -> list[np.ndarray]:
    """Standard basis E(i, j), i < j, of so(n) in the package sign convention."""
    from .forms import E

    return [E(i + 1, j + 1, n) for i in range(n) for j in range(i + 1, n)]
