"""Finite-dimensional double operator integrals and the f(A) - f(B) identity.

In finite dimensions the double operator integral with the divided-difference
symbol is a Schur multiplier in the eigenbases:

    doi(f, D1, D2, T) = U (L o (U^T T V)) V^T,

where U, V are the eigenvector frames, L the Loewner matrix of f at the two
spectra, and o the entrywise product.  With T = A - B this reproduces
f(A) - f(B) exactly; check_birman_solomyak measures the residual.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .functions import LipschitzFunction, apply_function, loewner_matrix
from .linalg import SpectralDecomposition, as_matrix, as_symmetric, eigh_symmetric, frobenius

# Residual contract for the Birman-Solomyak identity, relative to
# (1 + ||A||_F + ||B||_F) * lip.
BS_RESIDUAL_TOL = 1e-8


def doi_apply(f: LipschitzFunction, d1: SpectralDecomposition, d2: SpectralDecomposition,
              t) -> np.ndarray:
    """Double operator integral of T against the divided-difference symbol of f."""
    mat = as_matrix(t)
    if mat.shape != (d1.dim, d2.dim):
        raise ValidationError(
            f"T has shape {mat.shape}, expected ({d1.dim}, {d2.dim}) from the decompositions"
        )
    symbol = loewner_matrix(f, d1.eigenvalues, d2.eigenvalues)
    return d1.frame @ (symbol * (d1.frame.T @ mat @ d2.frame)) @ d2.frame.T


def f_delta(f: LipschitzFunction, a, b) -> np.ndarray:
    """f(A) - f(B) by spectral calculus on each operator."""
    ma = as_symmetric(a)
    mb = as_symmetric(b)
    if ma.shape != mb.shape:
        raise ValidationError(f"A and B must share a dimension, got {ma.shape} and {mb.shape}")
    return apply_function(f, eigh_symmetric(ma)) - apply_function(f, eigh_symmetric(mb))


def bs_residual_bound(a, b, lip: float) -> float:
    """Contract threshold for the identity residual at the given operator scales."""
    return BS_RESIDUAL_TOL * (1.0 + frobenius(a) + frobenius(b)) * float(lip)


def check_birman_solomyak(f: LipschitzFunction, a, b, *,
                          dec_a: SpectralDecomposition | None = None,
                          dec_b: SpectralDecomposition | None = None) -> float:
    """Frobenius residual of f(A) - f(B) against the double operator integral.

    The identity is exact in exact arithmetic, so the residual measures only
    rounding; it must stay below bs_residual_bound(a, b, f.lip).  Precomputed
    decompositions may be passed to avoid repeated eigendecompositions.
    """
    ma = as_symmetric(a)
    mb = as_symmetric(b)
    if ma.shape != mb.shape:
        raise ValidationError(f"A and B must share a dimension, got {ma.shape} and {mb.shape}")
    da = dec_a if dec_a is not None else eigh_symmetric(ma)
    db = dec_b if dec_b is not None else eigh_symmetric(mb)
    delta = apply_function(f, da) - apply_function(f, db)
    integral = doi_apply(f, da, db, ma - mb)
    return frobenius(delta - integral)


def rank_one_perturb(a, u, c: float) -> np.ndarray:
    """A + c * u u^T; the perturbation has rank one whenever c != 0."""
    ma = as_symmetric(a)
    vec = np.atleast_1d(np.asarray(u, dtype=float))
    if vec.shape != (ma.shape[0],):
        raise ValidationError(f"u must have length {ma.shape[0]}, got shape {vec.shape}")
    if not np.any(vec != 0.0):
        raise ValidationError("u must be nonzero")
    return as_symmetric(ma + float(c) * np.outer(vec, vec))
