"""Self-dual phase-space grid, sample containers, and basic pairings.

The spatial line is discretized with N points t_j = (j - N/2) h, spacing
h = 1/sqrt(N) and period L = N h = sqrt(N).  With this choice the FFT-dual
grid has spacing 1/(N h) = h, i.e. it coincides with the grid itself, so
every Fourier-type transform below maps grid data to grid data without
interpolation.  Phase space is the cartesian square of this line.

Functions on the line are stored with the unitary embedding v_j =
sqrt(h) * phi(t_j); then the euclidean inner product of vectors
approximates the L2 inner product of functions, and matrix singular
values approximate operator singular values with no extra weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "PhaseGrid",
    "SpatialVector",
    "GridFunction",
    "OperatorMatrix",
    "Box",
    "Atom",
    "AtomicSum",
    "Density",
    "CompactDistribution",
    "make_phase_grid",
    "build_distribution",
    "circle_distribution",
    "fractional_shift",
    "pair_bilinear",
    "lp_norm",
    "unitary_dft",
    "parity_flip",
]


@dataclass(frozen=True)
class PhaseGrid:
    """Discretization of the line (and, squared, of phase space)."""

    n: int

    @property
    def length(self) -> float:
        return float(np.sqrt(self.n))

    @property
    def spacing(self) -> float:
        return 1.0 / float(np.sqrt(self.n))

    @property
    def nodes(self) -> np.ndarray:
        """Sample points t_j = (j - N/2) h; also the dual (frequency) nodes."""
        return (np.arange(self.n) - self.n // 2) * self.spacing


def make_phase_grid(n: int) -> PhaseGrid:
    """Build the self-dual grid.  n must be a power of two, at least 64."""
    if n < 64:
        raise ValueError(f"grid size must be >= 64, got {n}")
    if n & (n - 1) != 0:
        raise ValueError(f"grid size must be a power of two, got {n}")
    return PhaseGrid(n)


@dataclass(frozen=True)
class SpatialVector:
    """Samples of a function on the line, unitary embedding sqrt(h)*phi(t_j)."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected shape ({self.grid.n},), got {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: PhaseGrid, f: Callable[[np.ndarray], np.ndarray]) -> "SpatialVector":
        return cls(grid, np.sqrt(grid.spacing) * np.asarray(f(grid.nodes), dtype=complex))

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class GridFunction:
    """Complex samples F(x_m, y_k) on the phase grid; axis 0 is x, axis 1 is y."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = self.grid.n
        if v.shape != (n, n):
            raise ValueError(f"expected shape ({n}, {n}), got {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: PhaseGrid, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "GridFunction":
        t = grid.nodes
        x = t[:, None]
        y = t[None, :]
        return cls(grid, np.broadcast_to(np.asarray(f(x, y), dtype=complex), (grid.n, grid.n)).copy())


@dataclass
class OperatorMatrix:
    """N x N matrix of an operator on the embedded L2 space.

    For an integral-kernel operator, entries[i, j] ~ h * K(t_i, t_j).
    Singular values are cached on first request (single assignment).
    """

    grid: PhaseGrid
    entries: np.ndarray
    _singular_values: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        n = self.grid.n
        if a.shape != (n, n):
            raise ValueError(f"expected shape ({n}, {n}), got {a.shape}")
        self.entries = a

    def apply(self, v: SpatialVector) -> SpatialVector:
        _same_grid(self, v)
        return SpatialVector(self.grid, self.entries @ v.values)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [x0, x1] x [y0, y1] in phase space."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError(f"degenerate box {self}")

    def contains(self, other: "Box") -> bool:
        return (self.x0 <= other.x0 and other.x1 <= self.x1
                and self.y0 <= other.y0 and other.y1 <= self.y1)

    def expand(self, margin: float) -> "Box":
        return Box(self.x0 - margin, self.x1 + margin, self.y0 - margin, self.y1 + margin)

    def distance(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Euclidean distance from (x, y) to the box (0 inside)."""
        dx = np.maximum(np.maximum(self.x0 - x, x - self.x1), 0.0)
        dy = np.maximum(np.maximum(self.y0 - y, y - self.y1), 0.0)
        return np.hypot(dx, dy)

    def as_list(self) -> list:
        return [self.x0, self.x1, self.y0, self.y1]


#: minimum gap between a support box and the grid boundary (the unit-ball
#: Minkowski sum used by mollification must stay inside the domain)
SUPPORT_MARGIN = 1.0

MAX_DERIVATIVE_ORDER = 4  # cap on d_x + d_y for derivative point masses


@dataclass(frozen=True)
class Atom:
    """Weighted derivative point mass w * d^(dx,dy) delta_(a,b)."""

    location: tuple[float, float]
    orders: tuple[int, int] = (0, 0)
    weight: complex = 1.0

    def __post_init__(self):
        dx, dy = self.orders
        if dx < 0 or dy < 0:
            raise ValueError(f"negative derivative order {self.orders}")
        if dx + dy > MAX_DERIVATIVE_ORDER:
            raise ValueError(
                f"derivative order {dx + dy} exceeds cap {MAX_DERIVATIVE_ORDER}")
        if not np.isfinite(self.weight):
            raise ValueError("non-finite atom weight")
        if not np.all(np.isfinite(self.location)):
            raise ValueError("non-finite atom location")


def _check_support(grid: PhaseGrid, box: Box) -> None:
    half = grid.length / 2.0
    lim = half - SUPPORT_MARGIN
    if not Box(-lim, lim, -lim, lim).contains(box):
        raise ValueError(
            f"support box {box} does not fit the grid domain "
            f"(-{half}, {half})^2 with margin {SUPPORT_MARGIN}")


@dataclass(frozen=True)
class AtomicSum:
    """Finite sum of (derivative) point masses."""

    grid: PhaseGrid
    atoms: tuple[Atom, ...]
    support_box: Box = field(init=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if not atoms:
            raise ValueError("empty atom list")
        xs = [a.location[0] for a in atoms]
        ys = [a.location[1] for a in atoms]
        box = Box(min(xs), max(xs), min(ys), max(ys))
        _check_support(self.grid, box)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "support_box", box)


@dataclass(frozen=True)
class Density:
    """Distribution given by samples on the phase grid, vanishing off its box."""

    values: GridFunction
    support_box: Box

    def __post_init__(self):
        _check_support(self.values.grid, self.support_box)

    @property
    def grid(self) -> PhaseGrid:
        return self.values.grid

    @classmethod
    def truncated(cls, values: GridFunction, box: Box) -> "Density":
        """Zero the samples outside the box and wrap them up."""
        grid = values.grid
        t = grid.nodes
        inside = ((t[:, None] >= box.x0) & (t[:, None] <= box.x1)
                  & (t[None, :] >= box.y0) & (t[None, :] <= box.y1))
        return cls(GridFunction(grid, np.where(inside, values.values, 0.0)), box)


CompactDistribution = Density | AtomicSum


def circle_distribution(grid: PhaseGrid, radius: float, nodes: int = 256) -> AtomicSum:
    """Quadrature of the arc-length measure on a centered circle.

    Returns ``nodes`` equal point masses of weight 2*pi*R/nodes, so the
    total weight is the circumference.
    """
    if nodes < 64:
        raise ValueError(f"need at least 64 quadrature nodes, got {nodes}")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if radius >= grid.length / 2.0 - SUPPORT_MARGIN:
        raise ValueError("circle radius too large for the grid")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    w = 2.0 * np.pi * radius / nodes
    atoms = tuple(Atom((radius * np.cos(a), radius * np.sin(a)), (0, 0), w) for a in theta)
    return AtomicSum(grid, atoms)


def build_distribution(grid: PhaseGrid, spec: dict) -> CompactDistribution:
    """Build a distribution from a plain-dict description.

    Recognized kinds:
      {"kind": "atoms", "atoms": [{"location": [a, b],
                                   "orders": [dx, dy], "weight": w}, ...]}
      {"kind": "circle", "radius": R, "nodes": M}
      {"kind": "density", "box": [x0, x1, y0, y1],
       "bumps": [{"center": [x, y], "radius": R, "amplitude": w,
                  "modulation": [mu, nu]}, ...]}

    Weights/amplitudes may be numbers or [re, im] pairs.
    """
    kind = spec.get("kind")
    if kind == "atoms":
        atoms = []
        for a in spec["atoms"]:
            loc = tuple(float(c) for c in a["location"])
            orders = tuple(int(d) for d in a.get("orders", (0, 0)))
            atoms.append(Atom(loc, orders, _as_complex(a.get("weight", 1.0))))
        return AtomicSum(grid, tuple(atoms))
    if kind == "circle":
        return circle_distribution(grid, float(spec["radius"]), int(spec.get("nodes", 256)))
    if kind == "density":
        box = Box(*[float(c) for c in spec["box"]])
        t = grid.nodes
        x, y = t[:, None], t[None, :]
        total = np.zeros((grid.n, grid.n), dtype=complex)
        for b in spec["bumps"]:
            cx, cy = (float(c) for c in b["center"])
            term = _as_complex(b.get("amplitude", 1.0)) * bump(x - cx, y - cy, float(b["radius"]))
            mu, nu = (float(c) for c in b.get("modulation", (0.0, 0.0)))
            if mu or nu:
                term = term * np.exp(2j * np.pi * (mu * x + nu * y))
            total += term
        return Density.truncated(GridFunction(grid, total), box)
    raise ValueError(f"unknown distribution kind {kind!r}")


def _as_complex(w) -> complex:
    if isinstance(w, (list, tuple)):
        return complex(float(w[0]), float(w[1]))
    return complex(w)


def bump(x: np.ndarray, y: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Smooth compactly supported bump exp(-1/(1 - |z|^2/R^2)) on |z| < R."""
    s = (np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2) / radius**2
    out = np.zeros(s.shape)
    inside = s < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside]))
    return out


# ---------------------------------------------------------------------------
# centered discrete Fourier machinery
# ---------------------------------------------------------------------------

def cdft(grid: PhaseGrid, a: np.ndarray, axis: int = -1) -> np.ndarray:
    """h * sum_j exp(-2 pi i xi_k t_j) a_j along one axis (centered nodes)."""
    return grid.spacing * np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def icdft(grid: PhaseGrid, a: np.ndarray, axis: int = -1) -> np.ndarray:
    """h * sum_k exp(+2 pi i t_j xi_k) a_k along one axis; inverse of cdft."""
    return grid.spacing * grid.n * np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(a, axes=axis), axis=axis), axes=axis)


def unitary_dft(v: SpatialVector) -> SpatialVector:
    """Unitary centered DFT of a spatial vector."""
    return SpatialVector(v.grid, cdft(v.grid, v.values) / np.sqrt(v.grid.spacing**2 * v.grid.n))


def parity_flip(v: SpatialVector) -> SpatialVector:
    """Reverse the samples about the origin node (periodic reflection)."""
    idx = (-np.arange(v.grid.n)) % v.grid.n
    return SpatialVector(v.grid, v.values[idx])


def fractional_shift(v: SpatialVector, a: float) -> SpatialVector:
    """Band-limited periodic shift: samples of phi(t + a).

    Conjugates by the centered DFT and multiplies by exp(+2 pi i a xi) on
    the dual nodes; exact circular index shift when a is a grid multiple.
    """
    grid = v.grid
    if abs(a) >= grid.length / 2.0:
        raise ValueError(f"|shift| must be < L/2 = {grid.length / 2.0}, got {a}")
    spectrum = cdft(grid, v.values)
    spectrum *= np.exp(2j * np.pi * a * grid.nodes)
    return SpatialVector(grid, icdft(grid, spectrum))


def _same_grid(a, b) -> None:
    if a.grid.n != b.grid.n:
        raise ValueError(f"grid mismatch: {a.grid.n} vs {b.grid.n}")


def pair_bilinear(u, v) -> complex:
    """Bilinear pairing (no conjugation).

    Vectors: sum u_j v_j (quadrature weight absorbed by the sqrt(h)
    embedding).  Grid functions: h^2 * sum F G.
    """
    _same_grid(u, v)
    if isinstance(u, SpatialVector) and isinstance(v, SpatialVector):
        return complex(np.sum(u.values * v.values))
    if isinstance(u, GridFunction) and isinstance(v, GridFunction):
        return complex(u.grid.spacing**2 * np.sum(u.values * v.values))
    raise TypeError("pair_bilinear expects two SpatialVectors or two GridFunctions")


def lp_norm(f: GridFunction, p: float) -> float:
    """Grid L^p norm: (h^2 sum |F|^p)^(1/p); max |F| at p = inf."""
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float((f.grid.spacing**2 * np.sum(a**p)) ** (1.0 / p))
