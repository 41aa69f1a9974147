"""The invariant symmetric cubic and almost contact / Sasaki analysis.

The cubic tensor is the algebraic heart of the irreducible SO(3) geometry:
it is totally symmetric, trace-free, and reconstructs the metric through
(Y_v)^2 v = g(v, v) v.  Its stabilizer inside SO(5) is the irreducible copy
of SO(3), which is how structures are recovered from subalgebras here.
"""

import itertools
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .algebra import DEFAULT_TOL, NULLSPACE_RTOL, ReductiveSpace, invariant_forms
from .connections import subalgebra_closure_residual, exterior_derivative
from .errors import SpaceInputError
from .forms import derivation_action, max_abs, nullspace, symmetrize, wedge
from .riemannian import levi_civita


@dataclass(frozen=True)
class UpsilonTensor:
    """Totally symmetric cubic with the metric-reconstruction property."""

    components: np.ndarray = field(repr=False)  # (5, 5, 5), symmetric by storage

    def operator(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,k->ij", self.components, np.asarray(v, dtype=float))

    def cubic(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.einsum("ijk,i,j,k->", self.components, v, v, v))

    def symmetry_residual(self) -> float:
        import itertools as it

        return max(
            max_abs(self.components - np.transpose(self.components, perm))
            for perm in it.permutations(range(3))
        )

    def trace_residual(self) -> float:
        return max_abs(np.einsum("iik->k", self.components))

    def reconstruction_residual(self, samples: int = 100, seed: int = 7) -> float:
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            v = rng.standard_normal(5)
            op = self.operator(v)
            worst = max(worst, max_abs(op @ (op @ v) - float(v @ v) * v))
        return worst


def standard_upsilon() -> UpsilonTensor:
    """Polarization of the reference cubic

    x1^3 + (3/2) x1 (x2^2 + x3^2 - 2 x4^2 - 2 x5^2)
        + (3 sqrt3 / 2)(x2^2 - x3^2) x5 - 3 sqrt3 x2 x3 x4,

    each monomial coefficient divided by its multinomial multiplicity.
    """
    s3 = sqrt(3.0)
    entries = {
        (0, 0, 0): 1.0,
        (0, 1, 1): 0.5,
        (0, 2, 2): 0.5,
        (0, 3, 3): -1.0,
        (0, 4, 4): -1.0,
        (1, 1, 4): s3 / 2.0,
        (2, 2, 4): -s3 / 2.0,
        (1, 2, 3): -s3 / 2.0,
    }
    comp = np.zeros((5, 5, 5))
    for idx, val in entries.items():
        for perm in set(itertools.permutations(idx)):
            comp[perm] = val
    return UpsilonTensor(comp)


def _sym_combos():
    return list(itertools.combinations_with_replacement(range(5), 3))


def _sym_tensor_from_vec(vec: np.ndarray) -> np.ndarray:
    comp = np.zeros((5, 5, 5))
    for val, idx in zip(vec, _sym_combos()):
        for perm in set(itertools.permutations(idx)):
            comp[perm] = val
    return comp


def upsilon_from_subalgebra(subalg, tol: float = DEFAULT_TOL) -> UpsilonTensor:
    """The invariant cubic of a 3-dimensional subalgebra of so(5).

    Computes the kernel of the derivation action on symmetric 3-tensors.
    A one-dimensional kernel is required; the generator is rescaled so the
    reconstruction axiom holds with coefficient one and oriented so the first
    frame direction with nonzero cubic value is positive.
    """
    mats = [np.asarray(m, dtype=float) for m in subalg]
    if len(mats) != 3:
        raise SpaceInputError("expected a 3-dimensional subalgebra")
    res = subalgebra_closure_residual(mats)
    if res > tol:
        raise SpaceInputError(f"input is not a subalgebra (residual {res:.3e})")
    combos = _sym_combos()
    rows = []
    for a in mats:
        act = np.zeros((len(combos), len(combos)))
        for col, idx in enumerate(combos):
            basis = _sym_tensor_from_vec(np.eye(len(combos))[col])
            moved = derivation_action(a, basis)
            act[:, col] = [moved[c] for c in combos]
        rows.append(act)
    null = nullspace(np.vstack(rows), NULLSPACE_RTOL)
    if null.shape[0] != 1:
        raise SpaceInputError(
            f"no unique invariant cubic: kernel dimension {null.shape[0]} (subalgebra is not an irreducible so(3))"
        )
    comp = _sym_tensor_from_vec(null[0])
    cand = UpsilonTensor(comp)
    rng = np.random.default_rng(3)
    v = rng.standard_normal(5)
    op = cand.operator(v)
    ratio = float((op @ (op @ v)) @ v) / float(v @ v) ** 2
    if ratio <= 0:
        raise SpaceInputError("invariant cubic cannot be normalized to reconstruct the metric")
    comp = comp / sqrt(ratio)
    cand = UpsilonTensor(comp)
    for i in range(5):
        c = cand.cubic(np.eye(5)[i])
        if abs(c) > tol:
            if c < 0:
                cand = UpsilonTensor(-comp)
            break
    bad = max(cand.trace_residual(), cand.reconstruction_residual(samples=25))
    if bad > 1e-8:
        raise SpaceInputError(f"invariant cubic fails the axioms (residual {bad:.3e})")
    return cand


def nearly_integrable_defect(space: ReductiveSpace, ups: UpsilonTensor, tol: float = DEFAULT_TOL) -> float:
    """Largest component of the full symmetrization of the Riemannian derivative of the cubic.

    Zero exactly when (grad_v Y)(v, v, v) = 0 for every direction v, the
    condition for a compatible connection with skew torsion to exist.
    """
    inv_res = max((max_abs(derivation_action(a, ups.components)) for a in space.isotropy), default=0.0)
    if inv_res > tol:
        raise SpaceInputError(f"cubic is not isotropy-invariant on this space (residual {inv_res:.3e})")
    lc = levi_civita(space, cross_check=False)
    n = space.dim_m
    grad = np.stack([derivation_action(lc.lambdas[i], ups.components) for i in range(n)])
    return max_abs(symmetrize(grad))


@dataclass(frozen=True)
class AlmostContactStructure:
    """Invariant almost contact metric structure (xi, eta, phi) with fundamental form F."""

    xi: np.ndarray
    eta: np.ndarray
    phi: np.ndarray = field(repr=False)
    fundamental: np.ndarray = field(repr=False)  # F(X, Y) = g(X, phi Y)
    label: str = ""

    def phi_square_residual(self) -> float:
        n = self.phi.shape[0]
        return max_abs(self.phi @ self.phi + np.eye(n) - np.outer(self.xi, self.eta))

    def compatibility_residual(self) -> float:
        n = self.phi.shape[0]
        return max_abs(self.phi.T @ self.phi - (np.eye(n) - np.outer(self.eta, self.eta)))


def invariant_almost_contact(space: ReductiveSpace, tol: float = DEFAULT_TOL) -> list[AlmostContactStructure]:
    """All invariant almost contact metric structures with invariant Reeb direction.

    Requires a unique invariant line (its unit generator becomes xi) and an
    isotropy action rotating the complement with distinct nonzero speeds, so
    that the commuting complex structures form a finite sign family.
    """
    lines = invariant_forms(space, 1)
    if len(lines) == 0:
        return []
    if len(lines) > 1:
        raise SpaceInputError("invariant direction is not unique; contact enumeration is not finite")
    xi = np.asarray(lines[0], dtype=float)
    first = np.nonzero(np.abs(xi) > tol)[0][0]
    xi = xi / np.linalg.norm(xi)
    if xi[first] < 0:
        xi = -xi
    n = space.dim_m
    comp = nullspace(xi[None, :], NULLSPACE_RTOL).T  # (n, n-1), orthonormal columns
    gen = sum((p + 1.0) * a for p, a in enumerate(space.isotropy))
    k = comp.T @ gen @ comp
    eig, vec = np.linalg.eig(k)
    planes = []
    used = np.zeros(len(eig), dtype=bool)
    for idx in range(len(eig)):
        if used[idx] or eig[idx].imag <= tol:
            continue
        theta = eig[idx].imag
        conj = np.argmin(np.abs(eig + eig[idx].conj()))
        used[idx] = used[conj] = True
        w = vec[:, idx]
        u, v = np.real(w), np.imag(w)
        basis = np.linalg.qr(np.stack([u, v], axis=1))[0]
        proj = basis @ basis.T
        planes.append((theta, k @ proj / theta))
    if 2 * len(planes) != n - 1:
        raise SpaceInputError("isotropy has kernel on the contact distribution; enumeration is not finite")
    thetas = sorted(abs(t) for t, _ in planes)
    if any(abs(a - b) < tol for a, b in zip(thetas, thetas[1:])):
        raise SpaceInputError("degenerate rotation speeds; contact enumeration is not finite")
    fast = max(planes, key=lambda p: abs(p[0]))[1]
    structures = {}
    for signs in itertools.product((1.0, -1.0), repeat=len(planes)):
        phi_c = sum(s * j for s, j in zip(signs, (j for _, j in planes)))
        if max_abs(phi_c @ phi_c + np.eye(n - 1)) > 1e-9:
            continue
        if max((max_abs(phi_c @ (comp.T @ a @ comp) - (comp.T @ a @ comp) @ phi_c) for a in space.isotropy), default=0.0) > 1e-9:
            continue
        phi = comp @ phi_c @ comp.T
        flat = phi.reshape(-1)
        lead = flat[np.nonzero(np.abs(flat) > tol)[0][0]]
        if lead < 0:
            phi, phi_c = -phi, -phi_c
        key = tuple(np.round(phi, 9).reshape(-1))
        if key in structures:
            continue
        orient = float(np.trace(fast.T @ phi_c))
        label = "+" if orient > 0 else "-"
        structures[key] = AlmostContactStructure(
            xi=xi, eta=xi.copy(), phi=phi, fundamental=phi.copy(), label=label
        )
    return sorted(structures.values(), key=lambda s: s.label)


@dataclass(frozen=True)
class NijenhuisResult:
    components: np.ndarray = field(repr=False)  # lowered, (n, n, n)
    zero: bool = False
    totally_antisymmetric: bool = False


def nijenhuis(space: ReductiveSpace, acs: AlmostContactStructure, tol: float = 1e-10) -> NijenhuisResult:
    """Nijenhuis tensor of an invariant almost contact structure.

    N(X, Y) = [phiX, phiY] - phi[X, phiY] - phi[phiX, Y] + phi^2 [X, Y]
              + d eta(X, Y) xi, with all brackets projected to m.
    """
    bm = space.brackets_m
    phi = acs.phi
    n = np.einsum("pi,qj,pqk->ijk", phi, phi, bm)
    n -= np.einsum("qj,iqm,km->ijk", phi, bm, phi)
    n -= np.einsum("pi,pjm,km->ijk", phi, bm, phi)
    n += np.einsum("ijm,rm,kr->ijk", bm, phi, phi)
    deta = exterior_derivative(space, acs.eta)
    n += np.einsum("ij,k->ijk", deta, acs.xi)
    alt_res = max_abs(n - _alternate3(n))
    return NijenhuisResult(
        components=n,
        zero=max_abs(n) < tol,
        totally_antisymmetric=alt_res < tol,
    )


def _alternate3(t: np.ndarray) -> np.ndarray:
    from .forms import alternate

    return alternate(t)


def sasaki_defect(space: ReductiveSpace, acs: AlmostContactStructure) -> float:
    """Largest component of 2F - d eta; zero characterizes Sasaki structures."""
    return max_abs(2.0 * acs.fundamental - exterior_derivative(space, acs.eta))


def contact_characteristic_torsion(
    space: ReductiveSpace, acs: AlmostContactStructure, tol: float = DEFAULT_TOL
) -> np.ndarray | None:
    """Torsion eta ^ d eta of the contact connection, when one exists.

    Requires the Nijenhuis tensor to vanish (or at least be totally
    antisymmetric) and dF = 0; otherwise there is no invariant metric
    connection with skew torsion compatible with the structure.
    """
    nj = nijenhuis(space, acs)
    if not (nj.zero or nj.totally_antisymmetric):
        return None
    if max_abs(exterior_derivative(space, acs.fundamental)) > tol:
        return None
    return wedge(acs.eta, exterior_derivative(space, acs.eta))
