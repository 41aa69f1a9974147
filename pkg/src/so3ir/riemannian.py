"""Levi-Civita connection map, Ricci curvature, and Einstein parameter solving."""

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, ReductiveSpace
from .connections import ConnectionMap, curvature, torsion
from .errors import InvariantViolation, SpaceInputError
from .forms import max_abs


@dataclass(frozen=True)
class RicciForm:
    matrix: np.ndarray
    scalar: float

    def symmetry_residual(self) -> float:
        return max_abs(self.matrix - self.matrix.T)


@dataclass(frozen=True)
class EinsteinSolution:
    kappa: float
    beta: float
    gamma: float
    branch: str  # "++", "+-", "-+", "--" for the closed-form branches, "generic" otherwise
    residual: float

    @property
    def scal(self) -> float:
        return 5.0 * self.kappa


def levi_civita(space: ReductiveSpace, cross_check: bool = True) -> ConnectionMap:
    """The unique metric torsion-free connection map.

    Primary route is the Koszul-type formula
    g(L(x)y, z) = (g([x,y]_m, z) + g([z,x]_m, y) + g(x, [z,y]_m)) / 2;
    with `cross_check` the same map is re-derived by solving the linear
    system {torsion = 0, values skew} and the two must agree entrywise.
    """
    bm = space.brackets_m
    n = space.dim_m
    lam = 0.5 * (np.einsum("ijk->ikj", bm) + np.einsum("kij->ikj", bm) + np.einsum("kji->ikj", bm))
    conn = ConnectionMap(space, lam)
    if cross_check:
        other = _levi_civita_linear(space)
        res = max_abs(conn.lambdas - other)
        if res > 1e-10:
            raise InvariantViolation("Koszul and linear-system Levi-Civita maps disagree", residual=res)
    tres = torsion(space, conn).pair_antisymmetry_residual()
    if max_abs(torsion(space, conn).components) > 1e-9 or tres > 1e-9:
        raise InvariantViolation("Levi-Civita map has torsion", residual=max_abs(torsion(space, conn).components))
    return conn


def _levi_civita_linear(space: ReductiveSpace) -> np.ndarray:
    """Solve torsion(L) = 0 over all skew-valued maps; the solution is unique."""
    n = space.dim_m
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    cols = len(pairs)
    m = np.zeros((n, n, n, n, cols))
    for i in range(n):
        for c, (p, q) in enumerate(pairs):
            # L(e_i) = sum_c coeff[i,c] * E(p+1, q+1): entry [q,p] = +1, [p,q] = -1
            m[i, :, q, i, c] += np.eye(n)[p]
            m[i, :, p, i, c] -= np.eye(n)[q]
            m[:, i, q, i, c] -= np.eye(n)[p]
            m[:, i, p, i, c] += np.eye(n)[q]
    rhs = space.brackets_m.copy()
    sol, *_ = np.linalg.lstsq(m.reshape(n * n * n, n * cols), rhs.reshape(-1), rcond=None)
    coeff = sol.reshape(n, cols)
    lam = np.zeros((n, n, n))
    for c, (p, q) in enumerate(pairs):
        lam[:, q, p] += coeff[:, c]
        lam[:, p, q] -= coeff[:, c]
    return lam


def ricci(space: ReductiveSpace) -> RicciForm:
    """Ricci tensor Ric(x, y) = sum_i g(R(e_i, x)y, e_i) of the Levi-Civita connection.

    Route agreement of the Levi-Civita map is an invariant tested separately;
    the hot path here uses the Koszul formula alone.
    """
    r = curvature(space, levi_civita(space, cross_check=False)).components
    mat = np.einsum("iaib->ab", r)
    return RicciForm(mat, float(np.trace(mat)))


def _branch_params(sign_beta: float, sign_gamma: float, kappa: float, alpha: float):
    disc_b = 25.0 - 8.0 * alpha * kappa
    disc_g = 25.0 - 2.0 * alpha * kappa
    if disc_b < 0 or disc_g < 0 or kappa <= 0:
        return None
    beta = (5.0 + sign_beta * np.sqrt(disc_b)) / (10.0 * kappa)
    gamma = (5.0 + sign_gamma * np.sqrt(disc_g)) / (10.0 * kappa)
    if beta <= 0 or gamma <= 0:
        return None
    return beta, gamma


def _branch_residual(sign_beta, sign_gamma, kappa, alpha):
    p = _branch_params(sign_beta, sign_gamma, kappa, alpha)
    if p is None:
        return np.nan
    beta, gamma = p
    return 2.0 * alpha / (25.0 * beta**2) + alpha / (50.0 * gamma**2) - kappa


def _refine_root(f, lo, hi, tol=1e-14, iters=200):
    flo, fhi = f(lo), f(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if not np.isfinite(fmid):
            return None
        if abs(fmid) < tol or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if flo * fmid <= 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def einstein_solve(family: str, alpha: float, tol: float = DEFAULT_TOL, samples: int = 10_000) -> list[EinsteinSolution]:
    """All Einstein metrics of a catalog family at fixed first scale.

    The twisted Stiefel family reduces to two quadratics in (beta, gamma) per
    Einstein constant; the four sign branches are scanned for roots of the
    remaining scalar equation on kappa in (0, 25/(8*alpha)], refined, and
    validated against the actual Ricci tensor.  Families without that closed
    form fall back to a damped Newton search from deterministic multistarts
    and are labelled "generic".
    """
    if alpha <= 0:
        raise SpaceInputError("alpha must be positive")
    if family == "vir24":
        return _einstein_vir24(alpha, tol, samples)
    if family in ("vtilde24", "wir"):
        return _einstein_generic(family, alpha, tol)
    raise SpaceInputError(f"einstein_solve supports vir24, vtilde24, wir; got {family!r}")


def _validated_solution(family: str, alpha, beta, gamma, kappa, branch, tol) -> EinsteinSolution | None:
    from .catalog import make_space, wir_admissible_mu

    if beta <= 0 or gamma <= 0 or kappa <= 0:
        return None
    if family == "wir":
        try:
            mu = wir_admissible_mu(alpha, gamma)[0]
        except SpaceInputError:
            return None
        space = make_space(family, alpha, beta, gamma, mu=mu)
    else:
        space = make_space(family, alpha, beta, gamma)
    ric = ricci(space)
    res = max_abs(ric.matrix - kappa * np.eye(space.dim_m))
    if res > tol:
        return None
    return EinsteinSolution(float(kappa), float(beta), float(gamma), branch, float(res))


def _einstein_vir24(alpha, tol, samples) -> list[EinsteinSolution]:
    kap_max = 25.0 / (8.0 * alpha)
    grid = np.linspace(kap_max / samples, kap_max, samples)
    out = []
    for sb, sign_b in (("+", 1.0), ("-", -1.0)):
        for sg, sign_g in (("+", 1.0), ("-", -1.0)):
            vals = np.array([_branch_residual(sign_b, sign_g, k, alpha) for k in grid])
            for i in range(len(grid) - 1):
                a, b = vals[i], vals[i + 1]
                if not (np.isfinite(a) and np.isfinite(b)) or a * b > 0:
                    continue
                root = _refine_root(lambda k: _branch_residual(sign_b, sign_g, k, alpha), grid[i], grid[i + 1])
                if root is None:
                    continue
                params = _branch_params(sign_b, sign_g, root, alpha)
                if params is None:
                    continue
                sol = _validated_solution("vir24", alpha, params[0], params[1], root, sb + sg, tol)
                if sol is not None and all(abs(sol.kappa - s.kappa) > 1e-8 for s in out):
                    out.append(sol)
    return sorted(out, key=lambda s: s.kappa)


def _einstein_generic(family: str, alpha, tol) -> list[EinsteinSolution]:
    from .catalog import make_space, wir_admissible_mu

    def diag_residual(beta, gamma, kappa):
        if beta <= 0 or gamma <= 0:
            return None
        try:
            if family == "wir":
                mu = wir_admissible_mu(alpha, gamma)[0]
                space = make_space(family, alpha, beta, gamma, mu=mu)
            else:
                space = make_space(family, alpha, beta, gamma)
        except SpaceInputError:
            return None
        d = np.diag(ricci(space).matrix)
        return np.array([d[0] - kappa, d[1] - kappa, d[3] - kappa])

    rng = np.random.default_rng(12345)
    starts = [(b, g) for b in (0.1, 0.3, 1.0, 3.0) for g in (0.1, 0.3, 1.0, 3.0)]
    starts += [tuple(np.exp(rng.uniform(np.log(0.05), np.log(5.0), size=2))) for _ in range(8)]
    out = []
    for b0, g0 in starts:
        x = np.array([b0, g0, 1.0])
        ok = False
        for _ in range(60):
            if not (1e-6 < x[0] < 1e4 and 1e-6 < x[1] < 1e4 and abs(x[2]) < 1e6):
                break
            f = diag_residual(*x)
            if f is None:
                break
            if max_abs(f) < 1e-11:
                ok = True
                break
            jac = np.zeros((3, 3))
            for c in range(3):
                h = 1e-7 * max(1.0, abs(x[c]))
                xp = x.copy()
                xp[c] += h
                fp = diag_residual(*xp)
                if fp is None:
                    jac = None
                    break
                jac[:, c] = (fp - f) / h
            if jac is None or not np.all(np.isfinite(jac)):
                break
            try:
                step = np.linalg.solve(jac, f)
            except np.linalg.LinAlgError:
                break
            limit = 0.5 * max(1.0, float(np.max(np.abs(x))))
            norm = float(np.max(np.abs(step)))
            if norm > limit:
                step *= limit / norm
            x = x - step
        if not ok:
            continue
        sol = _validated_solution(family, alpha, x[0], x[1], x[2], "generic", tol)
        if sol is not None and all(abs(sol.kappa - s.kappa) > 1e-8 or abs(sol.beta - s.beta) > 1e-8 for s in out):
            out.append(sol)
    return sorted(out, key=lambda s: s.kappa)
