"""Space-definition files: JSON descriptions of an algebra plus a reductive split.

Structure constants are stored sparsely as (i, j, k, value) with i < j; values
may be exact strings like "1/2", "sqrt(3)", "-2*sqrt(5)/5" or plain numbers.
Saving always emits shortest round-trip decimals, so load -> save -> load
reproduces constants bit for bit.
"""

import json
import re
from fractions import Fraction
from math import sqrt

import numpy as np

from .algebra import LieAlgebra, ReductiveSpace, build_reductive_space, jacobi_residual
from .errors import InvariantViolation, SpaceInputError

_RAT = r"\d+(?:/\d+)?"
_PLAIN_RE = re.compile(rf"^(?P<sign>[+-]?)(?P<rat>{_RAT})$")
_SQRT_RE = re.compile(
    rf"^(?P<sign>[+-]?)(?:(?P<coef>{_RAT})\*)?sqrt\((?P<root>{_RAT})\)(?:/(?P<den>\d+))?$"
)


def parse_value(raw) -> float:
    """Parse a rational / sqrt literal or plain number into a float."""
    if isinstance(raw, (int, float)):
        return float(raw)
    s = str(raw).strip().replace(" ", "")
    if not s:
        raise SpaceInputError("empty value string")
    m = _PLAIN_RE.match(s)
    if m:
        sign = -1.0 if m.group("sign") == "-" else 1.0
        return sign * float(Fraction(m.group("rat")))
    m = _SQRT_RE.match(s)
    if m:
        sign = -1.0 if m.group("sign") == "-" else 1.0
        coef = float(Fraction(m.group("coef"))) if m.group("coef") else 1.0
        root = sqrt(float(Fraction(m.group("root"))))
        den = float(m.group("den")) if m.group("den") else 1.0
        return sign * coef * root / den
    try:
        return float(s)
    except ValueError:
        raise SpaceInputError(f"cannot parse value {raw!r}") from None


def format_value(x: float) -> str:
    return repr(float(x))


def space_to_dict(
    algebra: LieAlgebra,
    h_basis: np.ndarray,
    m_summands,
    metric_scales,
) -> dict:
    triplets = []
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            for k in range(algebra.dim):
                v = algebra.c[i, j, k]
                if v != 0.0:
                    triplets.append([i, j, k, format_value(v)])
    return {
        "dim": algebra.dim,
        "basis_labels": list(algebra.basis_labels),
        "structure_constants": triplets,
        "h_basis": [[format_value(x) for x in row] for row in np.atleast_2d(h_basis)],
        "m_summands": [list(map(int, s)) for s in m_summands],
        "metric_scales": [format_value(s) for s in metric_scales],
    }


def dict_to_space_parts(data: dict):
    """Parse a definition dict into (algebra, h_basis, m_summands, scales)."""
    for key in ("dim", "basis_labels", "structure_constants", "h_basis", "m_summands", "metric_scales"):
        if key not in data:
            raise SpaceInputError(f"space definition is missing field {key!r}")
    dim = int(data["dim"])
    labels = [str(x) for x in data["basis_labels"]]
    c = np.zeros((dim, dim, dim))
    for pos, entry in enumerate(data["structure_constants"]):
        try:
            i, j, k = (int(entry[t]) for t in range(3))
            v = parse_value(entry[3])
        except (IndexError, TypeError, ValueError, SpaceInputError) as exc:
            raise SpaceInputError(f"structure_constants[{pos}]: {exc}") from None
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise SpaceInputError(f"structure_constants[{pos}]: index out of range for dim {dim}")
        c[i, j, k] += v
        c[j, i, k] -= v
    try:
        h = np.array([[parse_value(x) for x in row] for row in data["h_basis"]], dtype=float)
        scales = [parse_value(s) for s in data["metric_scales"]]
    except SpaceInputError as exc:
        raise SpaceInputError(f"h_basis/metric_scales: {exc}") from None
    summands = [[int(i) for i in s] for s in data["m_summands"]]
    return LieAlgebra(dim, tuple(labels), c), h, summands, scales


def save_space_file(path, algebra: LieAlgebra, h_basis, m_summands, metric_scales) -> None:
    data = space_to_dict(algebra, np.asarray(h_basis, dtype=float), m_summands, metric_scales)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def load_space_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpaceInputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    except OSError as exc:
        raise SpaceInputError(f"{path}: {exc}") from None
    return dict_to_space_parts(data)


def build_from_file(path, tol: float = 1e-9) -> ReductiveSpace:
    """Load a definition file, validate algebra invariants, and build the space."""
    algebra, h, summands, scales = load_space_file(path)
    jac = jacobi_residual(algebra)
    if jac > tol:
        raise InvariantViolation(f"{path}: structure constants violate the Jacobi identity", residual=jac)
    return build_reductive_space(algebra, h, summands, scales, tol=tol)
