"""Resilient Boolean functions built by concatenating disjoint-spectra components."""

from .core import (
    AnfForm,
    FunctionProfile,
    TruthTable,
    WalshSpectrum,
    anf,
    degree,
    fast_walsh,
    naive_walsh,
    nonlinearity,
    profile,
    resiliency_order,
)
from .constructor import (
    CertifiedProfile,
    ConstructionPlan,
    ConstructionResult,
    build,
    certify,
    construct,
    construct1,
    construct2,
    construct3,
    solve_feasibility,
)
from .errors import (
    CapacityError,
    InfeasibleError,
    ParseError,
    ResboolError,
    ShapeError,
    VerificationError,
)

__version__ = "0.1.0"
