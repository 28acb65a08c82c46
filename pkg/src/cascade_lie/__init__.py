"""Kostant cascades, layered nilradicals and their Plancherel data, in exact arithmetic."""

from __future__ import annotations

from .appendix import GoldenFixture, compare_fixture, fixture
from .cascade import (
    Cascade,
    CascadeError,
    LayerDecomposition,
    compute_layers,
    kostant_cascade,
    sigma,
    verify_layer_lemmas,
)
from .liealg import (
    ConstantsTable,
    NilpotentAlgebra,
    bracket,
    build_restricted_nilradical,
    build_split_nilradical,
    build_upper_triangular,
    chevalley_constants,
    verify_jacobi,
    verify_setup,
)
from .plancherel import (
    LatticeSpec,
    MultiplicityReport,
    PfaffianPolynomial,
    b_matrix,
    dual_lattice,
    find_nondegenerate_lambda,
    formal_degree,
    is_stepwise_si,
    layer_pfaffian,
    multiplicity,
    multiplicity_table,
    pfaffian,
    plancherel_constant,
    plancherel_polynomial,
)
from .report import Check, VerificationReport
from .rootsys import (
    RestrictedSystem,
    RootSystem,
    bilinear,
    build_root_system,
    is_root,
    reflect,
    restrict,
    strongly_orthogonal,
)
from .verify import verify_all

__all__ = [
    "b_matrix",
    "bilinear",
    "bracket",
    "build_restricted_nilradical",
    "build_root_system",
    "build_split_nilradical",
    "build_upper_triangular",
    "Cascade",
    "CascadeError",
    "chevalley_constants",
    "compare_fixture",
    "compute_layers",
    "ConstantsTable",
    "dual_lattice",
    "find_nondegenerate_lambda",
    "fixture",
    "formal_degree",
    "GoldenFixture",
    "is_root",
    "is_stepwise_si",
    "kostant_cascade",
    "LatticeSpec",
    "layer_pfaffian",
    "LayerDecomposition",
    "multiplicity",
    "multiplicity_table",
    "MultiplicityReport",
    "NilpotentAlgebra",
    "pfaffian",
    "PfaffianPolynomial",
    "plancherel_constant",
    "plancherel_polynomial",
    "reflect",
    "restrict",
    "RestrictedSystem",
    "RootSystem",
    "sigma",
    "strongly_orthogonal",
    "verify_all",
    "verify_jacobi",
    "verify_layer_lemmas",
    "verify_setup",
]
