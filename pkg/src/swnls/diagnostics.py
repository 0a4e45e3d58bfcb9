"""Conserved-quantity monitors and error measurement.

Energy is evaluated on the wave-function side (gradient form), which stays
well defined in vacuum; the hydrodynamic split reports the height-gradient
(Fisher) part from |psi| and attributes the remainder of the gradient term
to kinetic energy.  Error norms are restricted to whole elements inside the
requested window so that weighted norms equal the restricted quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .madelung import HydroState, WaveField
from .mesh import element_derivatives

L1 = "L1"
L2 = "L2"
LINF = "Linf"

HEIGHT = "height"
DISCHARGE = "discharge"
SURFACE = "surface"


@dataclass(frozen=True)
class EnergyReport:
    """Energy decomposition and total discrete mass of a wave field."""

    kinetic: float
    potential: float
    fisher: float
    total: float
    mass: float


@dataclass(frozen=True)
class ErrorReport:
    """A windowed norm of (numerical - reference) for one field."""

    kind: str
    window: tuple[float, float]
    field: str
    value: float
    measure: float  # total length of the elements included in the window
    tag: str = "reference"


def energy(wave: WaveField, b: np.ndarray, g: float) -> EnergyReport:
    """Total energy (eps^2/2)|psi_x|^2 + (g/2)|psi|^4 + g*b*|psi|^2 and its split.

    The gradient and Fisher terms are summed elementwise as nonnegative
    quadrature contributions; kinetic = total - potential - fisher.
    """
    mesh = wave.mesh
    eps = wave.eps
    h = np.abs(wave.psi) ** 2
    wq = 0.5 * mesh.element_length * mesh.rule.weights  # per-element quadrature weights

    dpsi = element_derivatives(mesh, wave.psi)
    gradient = 0.5 * eps * eps * float(np.sum(wq * np.abs(dpsi) ** 2))
    droot = element_derivatives(mesh, np.abs(wave.psi))
    fisher = 0.5 * eps * eps * float(np.sum(wq * droot ** 2))

    potential = float(np.sum(mesh.mass * (0.5 * g * h * h + g * np.asarray(b) * h)))
    total = gradient + potential
    kinetic = total - potential - fisher
    mass = float(np.sum(mesh.mass * h))
    return EnergyReport(kinetic=kinetic, potential=potential, fisher=fisher,
                        total=total, mass=mass)


def _window_elements(mesh, lo: float, hi: float) -> np.ndarray:
    """Indices of elements fully contained in [lo, hi]."""
    if not hi > lo:
        raise ValueError(f"empty window [{lo}, {hi}]")
    tol = 1e-9 * mesh.element_length
    xe = mesh.coords[mesh.conn]
    left = np.minimum(xe[:, 0], xe[:, -1])
    right = np.maximum(xe[:, 0], xe[:, -1])
    inside = np.flatnonzero((left >= lo - tol) & (right <= hi + tol))
    if inside.size == 0:
        raise ValueError(f"window [{lo}, {hi}] contains no whole element")
    return inside


def windowed_norm(mesh, diff: np.ndarray, window: tuple[float, float],
                  kind: str = L1) -> tuple[float, float]:
    """Quadrature-weighted norm of a nodal field over the window.

    Returns (value, measure) where measure is the covered length.  L1 and L2
    weight nodal values with the element quadrature (the restricted mass
    diagonal); Linf is a nodal max.
    """
    lo, hi = window
    elems = _window_elements(mesh, lo, hi)
    vals = diff[mesh.conn[elems]]
    measure = elems.size * mesh.element_length
    wq = 0.5 * mesh.element_length * mesh.rule.weights
    if kind == L1:
        return float(np.sum(wq * np.abs(vals))), measure
    if kind == L2:
        return float(np.sqrt(np.sum(wq * np.abs(vals) ** 2))), measure
    if kind == LINF:
        return float(np.max(np.abs(vals))), measure
    raise ValueError(f"unknown norm kind {kind!r}")


def error_norm(state: HydroState, ref: Callable, window: tuple[float, float],
               kind: str = L1, field: str = HEIGHT,
               bathymetry: np.ndarray | None = None,
               tag: str = "reference") -> ErrorReport:
    """Windowed norm of (numerical - reference) for one hydrodynamic field.

    ``ref(x, t)`` must return the reference values of the chosen field at the
    node coordinates x and time t.  The surface field requires the nodal
    bathymetry to form eta = h + b.
    """
    mesh = state.mesh
    lo, hi = window
    pad = 1e-9 * max(1.0, mesh.b - mesh.a)
    if lo < mesh.a - pad or hi > mesh.b + pad:
        raise ValueError(f"window [{lo}, {hi}] outside domain [{mesh.a}, {mesh.b}]")
    if field == HEIGHT:
        num = state.h
    elif field == DISCHARGE:
        num = state.q
    elif field == SURFACE:
        if bathymetry is None:
            raise ValueError("surface errors need the nodal bathymetry")
        num = state.h + np.asarray(bathymetry)
    else:
        raise ValueError(f"unknown field {field!r}")
    ref_vals = np.asarray(ref(mesh.coords, state.time), dtype=float)
    if ref_vals.shape != num.shape:
        raise ValueError(f"reference shape {ref_vals.shape} does not match "
                         f"node count {num.shape}")
    value, measure = windowed_norm(mesh, num - ref_vals, window, kind)
    return ErrorReport(kind=kind, window=(float(lo), float(hi)), field=field,
                       value=value, measure=measure, tag=tag)


def convergence_order(errors: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(error) against log(eps)."""
    if len(errors) < 2:
        raise ValueError("need at least two (eps, error) pairs")
    eps = np.array([e for e, _ in errors], dtype=float)
    vals = np.array([v for _, v in errors], dtype=float)
    if np.any(eps <= 0.0) or np.unique(eps).size != eps.size:
        raise ValueError("eps values must be positive and distinct")
    if np.any(vals <= 0.0):
        raise ValueError("error values must be positive to fit a convergence order")
    slope = np.polyfit(np.log(eps), np.log(vals), 1)[0]
    return float(slope)
