"""Dense real matrix kernels: symmetric eigendecomposition, SVD, projectors.

Everything here is a pure function of float64 arrays.  Results are
deterministic for identical inputs (same LAPACK build), eigenvector signs are
canonicalized, and every decomposition is checked against an explicit residual
contract before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError

# Frame orthonormality tolerance, per unit of dimension.
ORTHONORMALITY_TOL = 1e-12
# Reconstruction residual tolerance for eigendecompositions, relative to 1 + ||A||_F.
EIG_RESIDUAL_TOL = 1e-10
# Reconstruction residual tolerance for SVD, relative to 1 + ||M||_F.
SVD_RESIDUAL_TOL = 1e-9

DEFAULT_TOL = 1e-12
_TOL_RANGE = (1e-15, 1e-6)


def as_matrix(a) -> np.ndarray:
    """Validate and return a 2-D float64 matrix with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValidationError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains non-finite entries")
    return m


def as_symmetric(a) -> np.ndarray:
    """Validate a square matrix and enforce exact symmetry by averaging."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return 0.5 * (m + m.T)


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float), "fro"))


def _canonical_signs(frame: np.ndarray) -> np.ndarray:
    """Flip column signs so the largest-magnitude entry of each column is positive."""
    idx = np.argmax(np.abs(frame), axis=0)
    signs = np.sign(frame[idx, np.arange(frame.shape[1])])
    signs[signs == 0] = 1.0
    return frame * signs


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) plus an orthonormal eigenvector frame.

    Finite-dimensional stand-in for a spectral measure: column i of ``frame``
    is the unit eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    frame: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        frame = np.asarray(self.frame, dtype=float)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "frame", frame)
        d = frame.shape[0]
        if frame.ndim != 2 or frame.shape != (d, d) or vals.shape != (d,):
            raise ValidationError("decomposition shapes are inconsistent")
        if np.any(np.diff(vals) < 0):
            raise ValidationError("eigenvalues must be ascending")
        gram = frame.T @ frame
        defect = np.abs(gram - np.eye(d)).max()
        if defect > ORTHONORMALITY_TOL * d:
            raise ValidationError(
                f"frame is not orthonormal: defect {defect:.3e} exceeds {ORTHONORMALITY_TOL * d:.3e}"
            )

    @property
    def dim(self) -> int:
        return self.frame.shape[0]


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not (_TOL_RANGE[0] <= tol <= _TOL_RANGE[1]):
        raise ValidationError(f"tol must lie in [{_TOL_RANGE[0]}, {_TOL_RANGE[1]}], got {tol}")
    return tol


def eigh_symmetric(a, tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    The returned frame satisfies frame^T frame = I to ORTHONORMALITY_TOL * dim
    and reconstructs the input to max(tol, floor) * (1 + ||A||_F), where the
    floor accounts for the attainable rounding level at the given dimension.
    Raises ConvergenceError if the contract cannot be met.
    """
    m = as_symmetric(a)
    tol = _check_tol(tol)
    vals, frame = np.linalg.eigh(m)
    frame = _canonical_signs(frame)
    dec = SpectralDecomposition(vals, frame)
    scale = 1.0 + frobenius(m)
    floor = 16 * m.shape[0] * np.finfo(float).eps
    residual = frobenius(m - (frame * vals) @ frame.T)
    if residual > max(tol, floor) * scale or residual > EIG_RESIDUAL_TOL * scale:
        raise ConvergenceError(
            f"eigendecomposition residual {residual:.3e} exceeds contract at dim {m.shape[0]}"
        )
    return dec


def svd(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition M = U diag(s) V^T.

    Returns (s, U, V) with s nonincreasing and nonnegative.  The reconstruction
    residual contract is SVD_RESIDUAL_TOL * (1 + ||M||_F).
    """
    mat = as_matrix(m)
    tol = _check_tol(tol)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    # Sign canonicalization must flip U columns and V columns together so the
    # product U diag(s) V^T is unchanged.
    colsign = np.sign(u[np.argmax(np.abs(u), axis=0), np.arange(u.shape[1])])
    colsign[colsign == 0] = 1.0
    u = u * colsign
    v = vh.T * colsign
    scale = 1.0 + frobenius(mat)
    residual = frobenius(mat - (u * s) @ v.T)
    if residual > SVD_RESIDUAL_TOL * scale:
        raise ConvergenceError(f"svd residual {residual:.3e} exceeds contract")
    if np.any(np.diff(s) > 0) or np.any(s < 0):
        raise ConvergenceError("singular values are not nonincreasing and nonnegative")
    return s, u, v


def complement_projector(vectors, dim: int) -> np.ndarray:
    """Orthogonal projector onto the complement of span(vectors) in R^dim.

    Zero vectors are skipped; near-parallel vectors collapse to a single
    direction.  P satisfies P^2 = P = P^T and rank(P) = dim - rank(span).
    """
    basis = orthonormal_columns(vectors, dim)
    return np.eye(dim) - basis @ basis.T


def orthonormal_columns(vectors, dim: int, rel_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as columns) of the span of the given vectors.

    rel_tol is the relative singular-value cutoff separating independent
    directions from near-parallel duplicates.
    """
    rows = [np.asarray(v, dtype=float) for v in vectors]
    rows = [v for v in rows if v.size and np.linalg.norm(v) > 0.0]
    if not rows:
        return np.zeros((dim, 0))
    stack = np.column_stack(rows)
    if stack.shape[0] != dim:
        raise ValidationError(f"vectors must have length {dim}, got {stack.shape[0]}")
    u, s, _ = np.linalg.svd(stack, full_matrices=False)
    rank = int(np.sum(s > rel_tol * s[0])) if s.size else 0
    return u[:, :rank]


def write_matrix(path, m) -> None:
    """Write a matrix in the text format: 'rows cols' header, one row per line."""
    mat = as_matrix(m)
    lines = [f"{mat.shape[0]} {mat.shape[1]}"]
    for row in mat:
        lines.append(" ".join(repr(float(x)) for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix(path) -> np.ndarray:
    """Read a matrix from the text format; accepts scientific notation."""
    try:
        with open(path) as fh:
            raw = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc}") from exc
    if not raw:
        raise ValidationError(f"matrix file {path} is empty")
    head = raw[0].split()
    if len(head) != 2:
        raise ValidationError(f"matrix file {path}: first line must be 'rows cols'")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ValidationError(f"matrix file {path}: bad header {raw[0]!r}") from exc
    if len(raw) - 1 != rows:
        raise ValidationError(f"matrix file {path}: expected {rows} rows, got {len(raw) - 1}")
    out = np.empty((rows, cols))
    for i, line in enumerate(raw[1:]):
        parts = line.split()
        if len(parts) != cols:
            raise ValidationError(f"matrix file {path}: row {i} has {len(parts)} entries, expected {cols}")
        try:
            out[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise ValidationError(f"matrix file {path}: bad number in row {i}") from exc
    return as_matrix(out)
