"""Exact computations with Z2-graded A-infinity structures on exterior algebras.

Structures are Maurer-Cartan pairs (W, eta) of polyvector fields over Q or
Q(i), truncated at a total degree D.  The package computes their Hochschild
cohomology through windowed Koszul-type complexes, reduces cyclic-invariant
potentials to a normal form by explicit gauge transformations, and splits
finite-dimensional quantum cohomology rings into generalised eigenspaces.
"""
from .cyclic import CyclicAction, build_semidirect, invariant_monomials_up_to, project_invariant
from .errors import AinftyError, InputError, MathFailure
from .exparse import parse_poly, parse_polyvector, parse_problem
from .fdalg import (FiniteDimAlgebra, RingPresentation, builtin, eigen_split,
                    from_presentation, zero_eigenspace_rank)
from .koszul import (classes_span, hh_ranks, invariant_hh, jacobian_ring, koszul_exactness,
                     twisted_sector_ranks)
from .mcgauge import MCPair, classify_cubic, mc_check, normal_form, solve_eta_coboundary
from .polyvec import Polyvector, contract_dW, schouten, wedge
from .scalars import GaussianRational, Q, QI
from .series import SeriesContext, TruncatedSeries, substitute

__version__ = "0.1.0"

__all__ = [
    "AinftyError", "InputError", "MathFailure",
    "SeriesContext", "TruncatedSeries", "substitute", "GaussianRational", "Q", "QI",
    "Polyvector", "wedge", "schouten", "contract_dW",
    "MCPair", "mc_check", "solve_eta_coboundary", "classify_cubic", "normal_form",
    "jacobian_ring", "hh_ranks", "invariant_hh", "classes_span", "twisted_sector_ranks",
    "koszul_exactness",
    "CyclicAction", "project_invariant", "invariant_monomials_up_to", "build_semidirect",
    "FiniteDimAlgebra", "RingPresentation", "from_presentation", "builtin", "eigen_split",
    "zero_eigenspace_rank",
    "parse_poly", "parse_polyvector", "parse_problem",
]
