"""Computational geometry and topology of irreducible SO(3) structures on 5-manifolds."""

from .algebra import (
    LieAlgebra,
    ReductiveSpace,
    Representation,
    bracket,
    build_reductive_space,
    commutant_dimension,
    invariant_forms,
    jacobi_residual,
)
from .catalog import make_space, so3ir_bases, su3_isotropy, wir_admissible_mu
from .connections import (
    CharacteristicConnection,
    ConnectionMap,
    CurvatureTensor,
    TorsionTensor,
    characteristic_connection,
    covariant_derivative,
    curvature,
    equivariant_wang_maps,
    exterior_derivative,
    holonomy_algebra,
    is_naturally_reductive,
    torsion,
    torsion_divergence,
    torsion_type_decomposition,
)
from .errors import InvariantViolation, SpaceInputError
from .gstructures import (
    AlmostContactStructure,
    UpsilonTensor,
    contact_characteristic_torsion,
    invariant_almost_contact,
    nearly_integrable_defect,
    nijenhuis,
    sasaki_defect,
    standard_upsilon,
    upsilon_from_subalgebra,
)
from .report import AnalysisReport, analyze, sweep
from .riemannian import EinsteinSolution, RicciForm, einstein_solve, levi_civita, ricci
from .topology import (
    IntersectionSolution,
    Mod2ClassExpr,
    pontrjagin_relation,
    semicharacteristics,
    spin_split_obstruction,
    split_conditions,
    sw_classes_s20,
    uniform_intersection_solutions,
    wu_consistency,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostContactStructure",
    "AnalysisReport",
    "CharacteristicConnection",
    "ConnectionMap",
    "CurvatureTensor",
    "EinsteinSolution",
    "IntersectionSolution",
    "InvariantViolation",
    "LieAlgebra",
    "Mod2ClassExpr",
    "ReductiveSpace",
    "Representation",
    "RicciForm",
    "SpaceInputError",
    "TorsionTensor",
    "UpsilonTensor",
    "analyze",
    "bracket",
    "build_reductive_space",
    "characteristic_connection",
    "commutant_dimension",
    "contact_characteristic_torsion",
    "covariant_derivative",
    "curvature",
    "einstein_solve",
    "equivariant_wang_maps",
    "exterior_derivative",
    "holonomy_algebra",
    "invariant_almost_contact",
    "invariant_forms",
    "is_naturally_reductive",
    "jacobi_residual",
    "levi_civita",
    "make_space",
    "nearly_integrable_defect",
    "nijenhuis",
    "pontrjagin_relation",
    "ricci",
    "sasaki_defect",
    "semicharacteristics",
    "so3ir_bases",
    "spin_split_obstruction",
    "split_conditions",
    "standard_upsilon",
    "su3_isotropy",
    "sw_classes_s20",
    "sweep",
    "torsion",
    "torsion_divergence",
    "torsion_type_decomposition",
    "uniform_intersection_solutions",
    "upsilon_from_subalgebra",
    "wir_admissible_mu",
    "wu_consistency",
]
