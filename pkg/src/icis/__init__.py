"""Invariants and Gauss-Manin saturation for smoothings of ICIS germs."""

__version__ = "0.1.0"

from .polyforms import DiffForm, Monomial, Poly, PolyMatrix, d_function, ext_d, jacobian, minors, wedge
from .localalg import INFINITE, Ideal, LocalOrder, contains, kbase, krull_dim, mora_nf, std_basis, vdim
from .invariants import (GermSpec, InvariantReport, NotICISError, SmoothingSpec,
                         critical_ring_length, invariant_report, is_icis, le_greuel_check,
                         milnor, tjurina)
from .deformations import (MuMinimalResult, SemiuniversalSpec, line_smoothing, mu_minimal,
                           semiuniversal, t1_basis)
from .gaussmanin import (BFunction, GLClass, JetLattice, MonodromySpectrum, SaturatedLattice,
                         bhat, build_lattice, compute, dt_inverse, monodromy_spectrum, saturate,
                         t_action)
from .parser import ParseError, parse_poly, parse_problem

__all__ = [
    "DiffForm",
    "Monomial",
    "Poly",
    "PolyMatrix",
    "d_function",
    "ext_d",
    "jacobian",
    "minors",
    "wedge",
    "INFINITE",
    "Ideal",
    "LocalOrder",
    "contains",
    "kbase",
    "krull_dim",
    "mora_nf",
    "std_basis",
    "vdim",
    "GermSpec",
    "InvariantReport",
    "NotICISError",
    "SmoothingSpec",
    "critical_ring_length",
    "invariant_report",
    "is_icis",
    "le_greuel_check",
    "milnor",
    "tjurina",
    "MuMinimalResult",
    "SemiuniversalSpec",
    "line_smoothing",
    "mu_minimal",
    "semiuniversal",
    "t1_basis",
    "BFunction",
    "GLClass",
    "JetLattice",
    "MonodromySpectrum",
    "SaturatedLattice",
    "bhat",
    "build_lattice",
    "compute",
    "dt_inverse",
    "monodromy_spectrum",
    "saturate",
    "t_action",
    "ParseError",
    "parse_poly",
    "parse_problem",
]
