"""crystal-forge: exact invariants of Frobenius-semilinear crystals.

Exact arithmetic in truncated unramified Witt rings, Hodge and Newton
polygons, root-system combinatorics, classification tuples with their
orbit invariants, mod-p stable-image invariants, and a catalog of worked
fixtures.
"""

from .polygons import NewtonPolygon, PolygonError
from .witt import (
    InvalidDegree,
    NewtonPrecisionExceeded,
    NonPrime,
    PrecisionExhausted,
    SemilinearMap,
    WittElement,
    WittRingParams,
    charpoly,
    frobenius,
    hodge_polygon,
    newton_polygon,
    semilinear_from_json,
    semilinear_to_json,
    smith_exponents,
    verschiebung,
    witt_ring,
)
from .roots import (
    DiagramAutomorphism,
    EnumerationBoundExceeded,
    NodeOutOfRange,
    RootSystem,
    UnsupportedType,
    WeylElement,
    build_root_system,
    intersect_nilradicals,
    killing_pairing,
    minuscule_nodes,
    nilradical_roots,
    projection_dim,
    weyl_elements,
    weyl_order,
)
from .crystals import (
    EmptyI1,
    IllegalAutomorphismOrder,
    IllegalEtaNode,
    IncompatibleSteps,
    MonomialCrystal,
    OrbitDecomposition,
    PDivTypeMultiset,
    ShimuraTypeSpec,
    adjoint_crystal,
    adjoint_newton_polygon,
    adjoint_of_module_crystal,
    canonical_rotation,
    circular_decomposition,
    count_nu,
    delta,
    duality_exponents,
    epsilon_sets,
    fshw_invariant,
    minimal_decomposition,
    minimal_period,
    negative_pdiv_type,
    nilpotency_classes,
    positive_crystal,
    positive_pdiv_type,
    sign_twist_crystal,
    slope_zero_multiplicity,
    tensor_crystal,
    validate,
)
from .modp import (
    FSHWMapGL,
    MissingVerschiebung,
    ModpCrystal,
    NotMonomial,
    classify_cyclic,
    crystal_dimension,
    fshw_map_gl,
    gl_fshw_invariant,
    hasse_witt,
    hasse_witt_dual,
    is_ordinary,
    monomial_from_semilinear,
)
from . import catalog

__version__ = "0.1.0"
