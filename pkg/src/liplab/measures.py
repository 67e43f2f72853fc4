"""Finite atomic measures and weighted divided-difference kernel operators.

A WeightedKernelOperator realizes the kernel

    k(x, y) = phi(x) * (f(x) - f(y)) / (x - y) * psi(y)

between L2(nu) and L2(mu) for discrete measures mu, nu.  In the orthonormal
atom bases the operator is the matrix

    M[i, j] = sqrt(mu_i) phi(x_i) dd_f(x_i, y_j) psi(y_j) sqrt(nu_j).

File format (read/write_kernel_operator): a MU section with "x mass phi"
lines, a NU section with "y mass psi" lines, and a FUNCTION section holding a
one-line JSON function spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .functions import LipschitzFunction, function_from_spec, loewner_matrix


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely many point masses; positions strictly increasing, masses > 0."""

    positions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positions, dtype=float))
        mass = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if pos.shape != mass.shape or pos.ndim != 1:
            raise ValidationError("positions and masses must be 1-D arrays of equal length")
        if pos.size and not (np.all(np.isfinite(pos)) and np.all(np.isfinite(mass))):
            raise ValidationError("measure has non-finite atoms")
        if np.any(mass <= 0):
            raise ValidationError("all masses must be positive")
        if np.any(np.diff(pos) <= 0):
            raise ValidationError("positions must be strictly increasing after canonical sort")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", mass)

    @property
    def size(self) -> int:
        return self.positions.size

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    @property
    def support_radius(self) -> float:
        return float(np.max(np.abs(self.positions))) if self.size else 0.0


def discrete_measure(positions, masses) -> DiscreteMeasure:
    """Canonicalize (sort by position) and validate a discrete measure."""
    pos = np.atleast_1d(np.asarray(positions, dtype=float))
    mass = np.atleast_1d(np.asarray(masses, dtype=float))
    order = np.argsort(pos, kind="stable")
    return DiscreteMeasure(pos[order], mass[order])


def weighted_l2_norm(values, masses) -> float:
    """L2(measure) norm of a function given by its values on the atoms."""
    v = np.asarray(values, dtype=float)
    m = np.asarray(masses, dtype=float)
    return float(np.sqrt(np.sum(v * v * m)))


@dataclass(frozen=True, eq=False)
class WeightedKernelOperator:
    mu: DiscreteMeasure
    nu: DiscreteMeasure
    phi: np.ndarray
    psi: np.ndarray
    f: LipschitzFunction

    def __post_init__(self):
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        psi = np.atleast_1d(np.asarray(self.psi, dtype=float))
        if phi.shape != self.mu.positions.shape:
            raise ValidationError("phi must have one value per mu atom")
        if psi.shape != self.nu.positions.shape:
            raise ValidationError("psi must have one value per nu atom")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(psi))):
            raise ValidationError("weights contain non-finite values")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    @property
    def phi_norm(self) -> float:
        return weighted_l2_norm(self.phi, self.mu.masses)

    @property
    def psi_norm(self) -> float:
        return weighted_l2_norm(self.psi, self.nu.masses)

    @property
    def norm_product(self) -> float:
        """||phi|| * ||psi|| * lip(f), the scale all certified bounds carry."""
        return self.phi_norm * self.psi_norm * self.f.lip

    @property
    def support_radius(self) -> float:
        return max(self.mu.support_radius, self.nu.support_radius)

    def with_weights(self, phi, psi) -> "WeightedKernelOperator":
        return WeightedKernelOperator(self.mu, self.nu, phi, psi, self.f)


def kernel_operator(x_positions, x_masses, phi, y_positions, y_masses, psi,
                    f: LipschitzFunction) -> WeightedKernelOperator:
    """Build an operator from parallel atom arrays; sorts each side by position."""
    xp = np.atleast_1d(np.asarray(x_positions, dtype=float))
    yp = np.atleast_1d(np.asarray(y_positions, dtype=float))
    xo = np.argsort(xp, kind="stable")
    yo = np.argsort(yp, kind="stable")
    mu = DiscreteMeasure(xp[xo], np.atleast_1d(np.asarray(x_masses, dtype=float))[xo])
    nu = DiscreteMeasure(yp[yo], np.atleast_1d(np.asarray(y_masses, dtype=float))[yo])
    return WeightedKernelOperator(
        mu, nu,
        np.atleast_1d(np.asarray(phi, dtype=float))[xo],
        np.atleast_1d(np.asarray(psi, dtype=float))[yo],
        f,
    )


def materialize(kop: WeightedKernelOperator) -> np.ndarray:
    """Matrix of the operator between the orthonormal atom bases."""
    left = np.sqrt(kop.mu.masses) * kop.phi
    right = kop.psi * np.sqrt(kop.nu.masses)
    dd = loewner_matrix(kop.f, kop.mu.positions, kop.nu.positions)
    return left[:, None] * dd * right[None, :]


def write_kernel_operator(path, kop: WeightedKernelOperator) -> None:
    lines = ["MU"]
    for x, m, p in zip(kop.mu.positions, kop.mu.masses, kop.phi):
        lines.append(f"{float(x)!r} {float(m)!r} {float(p)!r}")
    lines.append("NU")
    for y, m, p in zip(kop.nu.positions, kop.nu.masses, kop.psi):
        lines.append(f"{float(y)!r} {float(m)!r} {float(p)!r}")
    lines.append("FUNCTION")
    if not kop.f.spec:
        raise ValidationError(f"function {kop.f.name} has no serializable spec")
    lines.append(json.dumps(kop.f.spec, sort_keys=True))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_kernel_operator(path) -> WeightedKernelOperator:
    try:
        with open(path) as fh:
            raw = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise ValidationError(f"cannot read operator file {path}: {exc}") from exc
    sections: dict[str, list[str]] = {}
    current = None
    for line in raw:
        if line in ("MU", "NU", "FUNCTION"):
            current = line
            sections[current] = []
            continue
        if current is None:
            raise ValidationError(f"operator file {path}: data before any section header")
        sections[current].append(line)
    for needed in ("MU", "NU", "FUNCTION"):
        if needed not in sections:
            raise ValidationError(f"operator file {path}: missing {needed} section")

    def parse_atoms(lines, label):
        if not lines:
            raise ValidationError(f"operator file {path}: empty {label} section")
        try:
            rows = [[float(v) for v in line.split()] for line in lines]
        except ValueError as exc:
            raise ValidationError(f"operator file {path}: bad number in {label}") from exc
        if any(len(r) != 3 for r in rows):
            raise ValidationError(f"operator file {path}: {label} lines must be 'pos mass weight'")
        arr = np.asarray(rows)
        return arr[:, 0], arr[:, 1], arr[:, 2]

    xp, xm, phi = parse_atoms(sections["MU"], "MU")
    yp, ym, psi = parse_atoms(sections["NU"], "NU")
    if len(sections["FUNCTION"]) != 1:
        raise ValidationError(f"operator file {path}: FUNCTION section must be one JSON line")
    try:
        fspec = json.loads(sections["FUNCTION"][0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"operator file {path}: bad function JSON: {exc}") from exc
    return kernel_operator(xp, xm, phi, yp, ym, psi, function_from_spec(fspec))
