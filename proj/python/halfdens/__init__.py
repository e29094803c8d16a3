"""Hilbert half-densities over spaces of scalar products."""

from ._core import (
    Diffeo1D,
    HalfDensityState,
    InvariantMeasure,
    PointSet,
    SignatureSpec,
    SparseSection,
    convergence_study,
    counterexample_profile,
    gl_action,
    inner,
    inner_joint,
    k_inner,
    k_pullback,
    natural_density,
    norm,
    pullback,
    rescale_iso,
    run_suite,
    signature,
    suite_names,
    symmetrize,
    verify_invariance,
)

__all__ = [
    "Diffeo1D",
    "HalfDensityState",
    "InvariantMeasure",
    "PointSet",
    "SignatureSpec",
    "SparseSection",
    "convergence_study",
    "counterexample_profile",
    "gl_action",
    "inner",
    "inner_joint",
    "k_inner",
    "k_pullback",
    "natural_density",
    "norm",
    "pullback",
    "rescale_iso",
    "run_suite",
    "signature",
    "suite_names",
    "symmetrize",
    "verify_invariance",
]
