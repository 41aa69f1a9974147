"""Full-pipeline analysis of a space and batch parameter sweeps.

`analyze` chains the characteristic-connection search, curvature/holonomy,
Ricci/Einstein analysis and the cubic/contact checks into one structured
report whose numeric fields all carry the tolerances they were asserted
under.  Reports are deterministic: identical inputs produce identical bytes.
"""

import io
import os
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .algebra import DEFAULT_TOL, ReductiveSpace, invariant_forms
from .connections import (
    characteristic_connection,
    covariant_derivative,
    holonomy_algebra,
    is_naturally_reductive,
    torsion_divergence,
)
from .errors import SpaceInputError
from .forms import lex_combos, max_abs
from .gstructures import (
    contact_characteristic_torsion,
    invariant_almost_contact,
    nearly_integrable_defect,
    nijenhuis,
    sasaki_defect,
    upsilon_from_subalgebra,
)
from .riemannian import einstein_solve, levi_civita, ricci
from .spacefile import build_from_file

EXISTS_TOL = 1e-7


def form_to_sparse(t: np.ndarray, tol: float = 1e-12) -> dict[str, float]:
    """Sparse {"e1^e2^e3": value} encoding of an alternating component array."""
    n, k = t.shape[0], t.ndim
    out = {}
    for combo in lex_combos(n, k):
        v = float(t[combo])
        if abs(v) > tol:
            out["^".join(f"e{i + 1}" for i in combo)] = v
    return out


@dataclass
class AnalysisReport:
    space: dict
    tolerances: dict
    characteristic: dict
    riemannian: dict
    g_structure: dict
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "tolerances": self.tolerances,
            "characteristic_connection": self.characteristic,
            "riemannian": self.riemannian,
            "g_structure": self.g_structure,
            "notes": self.notes,
        }

    def to_text(self) -> str:
        buf = io.StringIO()

        def fmt(v):
            if isinstance(v, float):
                return f"{v:.12g}"
            if isinstance(v, dict):
                return "{" + ", ".join(f"{k}: {fmt(x)}" for k, x in v.items()) + "}"
            if isinstance(v, (list, tuple)):
                return "[" + ", ".join(fmt(x) for x in v) + "]"
            return str(v)

        def emit(title, block, skip=()):
            buf.write(f"[{title}]\n")
            for k, v in block.items():
                if k in skip:
                    continue
                buf.write(f"  {k} = {fmt(v)}\n")

        emit("space", self.space)
        emit("tolerances", self.tolerances)
        emit("characteristic_connection", self.characteristic, skip=("holonomy_basis",))
        emit("riemannian", self.riemannian)
        emit("g_structure", self.g_structure)
        if self.notes:
            buf.write("[notes]\n")
            for n in self.notes:
                buf.write(f"  - {n}\n")
        return buf.getvalue()


def _resolve_space(source: str, alpha, beta, gamma, mu):
    """Return (space, space_header_dict, family_or_None, mu_info)."""
    if source in catalog.CATALOG_IDS:
        mu_used = None
        mu_roots = None
        if source == "wir":
            if mu in (None, "auto"):
                mu_roots = catalog.wir_admissible_mu(alpha, gamma)
                mu_used = mu_roots[0]
            else:
                mu_used = float(mu)
            space = catalog.make_space(source, alpha, beta, gamma, mu=mu_used)
        elif source == "su3_so3_isotropy":
            space = catalog.make_space(source, alpha)
        else:
            space = catalog.make_space(source, alpha, beta, gamma)
        header = {"id": source, "alpha": alpha}
        if source != "su3_so3_isotropy":
            header.update({"beta": beta, "gamma": gamma})
        if mu_used is not None:
            header["mu"] = mu_used
            if mu_roots is not None:
                header["mu_roots"] = list(mu_roots)
        return space, header, source, mu_used
    if os.path.exists(source):
        space = build_from_file(source)
        return space, {"id": source, "source": "file"}, None, None
    raise SpaceInputError(f"unknown space source {source!r}: not a catalog id and not a file")


def _characteristic_block(space: ReductiveSpace, tol: float) -> tuple[dict, object, str | None]:
    bases = catalog.so3ir_bases()
    result = None
    used = None
    residuals = {}
    for label in ("X", "Y"):
        cand = characteristic_connection(space, bases[label], exists_tol=EXISTS_TOL)
        residuals[label] = cand.residual
        if cand.exists:
            result, used = cand, label
            break
    block = {
        "target_basis": used,
        "exists": result is not None,
        "search_residuals": residuals,
    }
    if result is None:
        return block, None, None
    grads = covariant_derivative(space, result.connection, result.torsion.components, tol=tol)
    nabla_max = max(max_abs(g) for g in grads)
    hol = holonomy_algebra(space, result.connection)
    block.update(
        {
            "unique": result.unique,
            "residual": result.residual,
            "connection_norm": max_abs(result.connection.lambdas),
            "torsion": form_to_sparse(result.torsion.components),
            "torsion_totally_antisymmetric": bool(result.torsion.totally_antisymmetric),
            "parallel_torsion": bool(nabla_max < tol),
            "max_nabla_torsion": nabla_max,
            "holonomy_dim": len(hol),
            "holonomy_basis": [h.tolist() for h in hol],
            "naturally_reductive": bool(is_naturally_reductive(space, result.torsion, tol=tol)),
        }
    )
    return block, result, used


def _riemannian_block(space: ReductiveSpace, family, alpha, tol: float) -> dict:
    ric = ricci(space)
    block = {
        "ricci_diagonal": [float(x) for x in np.diag(ric.matrix)],
        "ricci_offdiagonal_max": max_abs(ric.matrix - np.diag(np.diag(ric.matrix))),
        "scalar": ric.scalar,
    }
    if family in ("vir24", "vtilde24", "wir"):
        sols = einstein_solve(family, alpha, tol=tol)
        block["einstein_solutions"] = [
            {
                "branch": s.branch,
                "kappa": s.kappa,
                "beta": s.beta,
                "gamma": s.gamma,
                "scal": s.scal,
                "residual": s.residual,
            }
            for s in sols
        ]
    else:
        block["einstein_solutions"] = None
    return block


def _gstructure_block(space: ReductiveSpace, char_result, char_basis, tol: float) -> dict:
    bases = catalog.so3ir_bases()
    candidates: list[tuple[str, list]] = []
    if char_basis is not None:
        candidates.append((char_basis, bases[char_basis]))
    if space.dim_h == 3:
        candidates.append(("isotropy", list(space.isotropy)))
    candidates += [(lbl, bases[lbl]) for lbl in ("X", "Y")]
    ups = None
    ups_source = None
    defect = None
    for label, mats in candidates:
        try:
            cand = upsilon_from_subalgebra(mats)
            defect = nearly_integrable_defect(space, cand, tol=tol)
        except SpaceInputError:
            continue
        ups, ups_source = cand, label
        break
    block = {
        "upsilon_source": ups_source,
        "nearly_integrable_defect": defect,
        "nearly_integrable": None if defect is None else bool(defect < EXISTS_TOL),
    }
    try:
        structures = invariant_almost_contact(space, tol=tol)
    except SpaceInputError as exc:
        block["contact_structures"] = None
        block["contact_note"] = str(exc)
        return block
    from .connections import exterior_derivative

    entries = []
    for acs in structures:
        nj = nijenhuis(space, acs)
        tc = contact_characteristic_torsion(space, acs, tol=tol)
        entry = {
            "label": acs.label,
            "nijenhuis_zero": bool(nj.zero),
            "nijenhuis_totally_antisymmetric": bool(nj.totally_antisymmetric),
            "dF_max": max_abs(exterior_derivative(space, acs.fundamental)),
            "sasaki_defect": sasaki_defect(space, acs),
            "contact_torsion": None if tc is None else form_to_sparse(tc),
        }
        if tc is not None and char_result is not None:
            entry["contact_torsion_equals_characteristic"] = bool(
                max_abs(tc - char_result.torsion.components) < tol
            )
        else:
            entry["contact_torsion_equals_characteristic"] = None
        entries.append(entry)
    block["contact_structures"] = entries
    return block


def analyze(
    source: str,
    alpha: float = 1.0,
    beta: float = 1.0,
    gamma: float = 1.0,
    mu=None,
    tol: float = DEFAULT_TOL,
) -> AnalysisReport:
    """Run the full pipeline on a catalog id or a space-definition file."""
    space, header, family, _ = _resolve_space(source, alpha, beta, gamma, mu)
    tolerances = {"tol": tol, "exists_tol": EXISTS_TOL, "nullspace_rtol": 1e-8}
    char_block, char_result, char_basis = _characteristic_block(space, tol)
    riem_block = _riemannian_block(space, family, alpha, tol)
    gs_block = _gstructure_block(space, char_result, char_basis, tol)
    notes = []
    if char_result is not None:
        delta = torsion_divergence(space, levi_civita(space, cross_check=False), char_result.torsion.components)
        char_block["torsion_divergence_max"] = max_abs(delta)
    if not invariant_forms(space, 1):
        notes.append("no invariant direction: contact analysis is empty")
    return AnalysisReport(
        space=header,
        tolerances=tolerances,
        characteristic=char_block,
        riemannian=riem_block,
        g_structure=gs_block,
        notes=notes,
    )


def sweep(family: str, grid: list[tuple[float, float, int]], query: str, max_points: int = 1_000_000) -> str:
    """CSV table of a defect/flag over a parameter grid, deterministic row order.

    `grid` gives (start, stop, count) per metric parameter (alpha, beta,
    gamma).  Queries: "existence" (characteristic-connection flag and
    residual), "sasaki" (defect of the orientation-compatible structure),
    "einstein" (max deviation of Ricci from its average eigenvalue).
    """
    if query not in ("existence", "sasaki", "einstein"):
        raise SpaceInputError(f"unknown sweep query {query!r}")
    if family not in ("vir24", "vtilde24", "wir"):
        raise SpaceInputError(f"sweep supports the three-parameter families, got {family!r}")
    if len(grid) != 3:
        raise SpaceInputError("grid must specify (start, stop, count) for alpha, beta, gamma")
    axes = [np.linspace(lo, hi, int(n)) for lo, hi, n in grid]
    total = int(np.prod([len(a) for a in axes]))
    if total > max_points:
        raise SpaceInputError(f"grid of {total} points exceeds the {max_points} limit")
    bases = catalog.so3ir_bases()
    target = bases["Y"] if family == "wir" else bases["X"]
    rows = []
    header = "alpha,beta,gamma," + {
        "existence": "exists,residual",
        "sasaki": "sasaki_defect",
        "einstein": "einstein_defect",
    }[query]
    if family == "wir":
        header = header.replace("gamma,", "gamma,mu,")
    for a in axes[0]:
        for b in axes[1]:
            for g in axes[2]:
                prefix = f"{a:.12g},{b:.12g},{g:.12g}"
                if family == "wir":
                    try:
                        mu = catalog.wir_admissible_mu(a, g)[0]
                    except SpaceInputError:
                        rows.append(f"{prefix},nan," + ("False,nan" if query == "existence" else "nan"))
                        continue
                    prefix = f"{prefix},{mu:.12g}"
                    space = catalog.make_space(family, a, b, g, mu=mu)
                else:
                    space = catalog.make_space(family, a, b, g)
                if query == "existence":
                    res = characteristic_connection(space, target, exists_tol=EXISTS_TOL)
                    rows.append(f"{prefix},{res.exists},{res.residual:.12g}")
                elif query == "sasaki":
                    structures = invariant_almost_contact(space)
                    plus = [s for s in structures if s.label == "+"]
                    val = sasaki_defect(space, plus[0]) if plus else float("nan")
                    rows.append(f"{prefix},{val:.12g}")
                else:
                    ric = ricci(space)
                    kappa = ric.scalar / space.dim_m
                    val = max_abs(ric.matrix - kappa * np.eye(space.dim_m))
                    rows.append(f"{prefix},{val:.12g}")
    return header + "\n" + "\n".join(rows) + ("\n" if rows else "")
