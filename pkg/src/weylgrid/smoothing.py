"""Window pairs, mollification, and conjugation smoothing.

The window pair (f, h) realizes the norm-equivalence constant: f is a
smooth cutoff identically one on a box K, h = e^{pi/2 |z|^2} f cancels
the standard gaussian exactly on K, and C_K is the grid L1 norm of the
symplectic FT of h.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    AtomicSum,
    Box,
    CompactDistribution,
    Density,
    GridFunction,
    OperatorMatrix,
    PhaseGrid,
    bump,
    lp_norm,
)
from .transforms import fourier_wigner, symplectic_ft, _weyl_of_samples

__all__ = [
    "WindowPair",
    "window_and_ck",
    "smooth_step",
    "mollifier_samples",
    "mollify",
    "conjugation_smoothing",
]


@dataclass(frozen=True)
class WindowPair:
    """Cutoff f_win (= 1 on K), window h_win = e^{pi/2 |z|^2} f_win, and C_K."""

    box: Box
    f_win: GridFunction
    h_win: GridFunction
    h_check: GridFunction
    c_k: float

    @property
    def grid(self) -> PhaseGrid:
        return self.f_win.grid


def smooth_step(s: np.ndarray) -> np.ndarray:
    """C-infinity step: 1 for s <= 0, 0 for s >= 1, strictly monotone between."""
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape)
    out[s <= 0.0] = 1.0
    mid = (s > 0.0) & (s < 1.0)
    sm = s[mid]
    b1 = np.exp(-1.0 / (1.0 - sm))
    b0 = np.exp(-1.0 / sm)
    out[mid] = b1 / (b1 + b0)
    return out


def window_and_ck(box: Box, grid: PhaseGrid, transition_width: float = 0.5) -> WindowPair:
    """Build the window pair for a box K.

    f_win(z) = step(dist(z, K)/w) is 1 on K and supported in K fattened
    by w; h_win * gaussian = f_win holds entrywise by construction.
    """
    half = grid.length / 2.0
    fat = box.expand(transition_width + 1.0)
    if not Box(-half, half, -half, half).contains(fat):
        raise ValueError(f"box {box} plus transition width plus unit margin "
                         f"does not fit the grid domain (+-{half})")
    t = grid.nodes
    x, y = t[:, None], t[None, :]
    f_vals = smooth_step(box.distance(x, y) / transition_width)
    h_vals = np.exp(0.5 * np.pi * (x**2 + y**2)) * f_vals
    f_win = GridFunction(grid, f_vals.astype(complex))
    h_win = GridFunction(grid, h_vals.astype(complex))
    h_check = symplectic_ft(h_win)
    return WindowPair(box, f_win, h_win, h_check, lp_norm(h_check, 1))


# ---------------------------------------------------------------------------
# mollification
# ---------------------------------------------------------------------------

def _bump_derivative_terms(dx: int, dy: int) -> dict[tuple[int, int, int], float]:
    """Monomial expansion of d^(dx,dy) exp(-w), w = 1/(1 - x^2 - y^2).

    Terms (a, b, c) -> coef stand for coef * x^a y^b w^c multiplying
    exp(-w) inside the unit disk.
    """
    terms: dict[tuple[int, int, int], float] = {(0, 0, 0): 1.0}

    def step(ts, first: bool):
        out: dict[tuple[int, int, int], float] = {}

        def add(key, v):
            out[key] = out.get(key, 0.0) + v

        for (a, b, c), v in ts.items():
            if first:
                if a:
                    add((a - 1, b, c), a * v)
                if c:
                    add((a + 1, b, c + 1), 2.0 * c * v)
                add((a + 1, b, c + 2), -2.0 * v)
            else:
                if b:
                    add((a, b - 1, c), b * v)
                if c:
                    add((a, b + 1, c + 1), 2.0 * c * v)
                add((a, b + 1, c + 2), -2.0 * v)
        return out

    for _ in range(dx):
        terms = step(terms, True)
    for _ in range(dy):
        terms = step(terms, False)
    return terms


def bump_derivative(x: np.ndarray, y: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """Analytic partial derivative of the unit bump exp(-1/(1-|z|^2))."""
    if dx == 0 and dy == 0:
        return bump(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = x**2 + y**2
    out = np.zeros(s.shape)
    inside = s < 1.0
    xi, yi = np.broadcast_to(x, s.shape)[inside], np.broadcast_to(y, s.shape)[inside]
    w = 1.0 / (1.0 - s[inside])
    acc = np.zeros(w.shape)
    for (a, b, c), coef in _bump_derivative_terms(dx, dy).items():
        acc += coef * xi**a * yi**b * w**c
    out[inside] = acc * np.exp(-w)
    return out


def mollifier_samples(grid: PhaseGrid, r: float, oversample: int = 32) -> np.ndarray:
    """Cell-averaged samples of the rescaled bump r^2 rho(r x, r y),
    normalized to exact unit grid mass (so its symplectic FT is 1 at the
    origin and has grid sup norm exactly 1).

    Cell averages rather than point values: at large r the bump support
    covers only a few grid cells, and point sampling would misrepresent
    (at r = h^-1, degenerate to a grid delta) the mollifier's spectrum.
    """
    h = grid.spacing
    t = grid.nodes
    vals = np.zeros((grid.n, grid.n))
    m = oversample
    off = (np.arange(m) + 0.5) / m * h - h / 2.0
    idx = np.where(np.abs(t) <= 1.0 / r + h)[0]
    if idx.size == 0:
        raise ValueError(f"mollifier unresolved at r = {r}")
    sub = (t[idx][:, None] + off[None, :]).ravel()
    fine = r**2 * bump(r * sub[:, None], r * sub[None, :])
    vals[np.ix_(idx, idx)] = fine.reshape(idx.size, m, idx.size, m).mean(axis=(1, 3))
    mass = h**2 * vals.sum()
    if mass <= 0:
        raise ValueError(f"mollifier unresolved at r = {r}")
    return (vals / mass).astype(complex)


def mollify(t: CompactDistribution, r: float) -> tuple[Density, GridFunction]:
    """Convolve T with the rescaled unit-mass bump supported in |z| < 1/r.

    Returns the smoothed distribution as a density together with the
    symplectic FT of the mollifier.  Convolution is spectral in both
    cases (multiply symplectic FTs, transform back), which keeps the
    discrete convolution theorem exact.  For atoms the convolved samples
    are those of the band-limited representative of T (the Fourier-Wigner
    transform of its Weyl operator), so the smoothing error measured on
    operators matches the spectral perturbation exactly; band-limited
    translates of point masses have grid-wide tails, hence the support
    box of the result is the full admissible domain in that case.
    """
    if r <= 1.0:
        raise ValueError(f"scale must exceed 1, got {r}")
    grid = t.grid
    half = grid.length / 2.0
    if not Box(-half + 1e-12, half - 1e-12, -half + 1e-12, half - 1e-12).contains(
            t.support_box.expand(1.0)):
        raise ValueError("support plus unit ball does not fit the grid")

    mol = mollifier_samples(grid, r)
    rho_check = symplectic_ft(GridFunction(grid, mol))

    if isinstance(t, Density):
        t_check = symplectic_ft(t.values)
        conv = symplectic_ft(GridFunction(grid, rho_check.values * t_check.values))
        return Density.truncated(conv, t.support_box.expand(1.0 / r)), rho_check
    if isinstance(t, AtomicSum):
        from .transforms import weyl
        band_limited = fourier_wigner(weyl(t))
        t_check = symplectic_ft(band_limited)
        conv = symplectic_ft(GridFunction(grid, rho_check.values * t_check.values))
        lim = half - 1.0
        return Density(conv, Box(-lim, lim, -lim, lim)), rho_check
    raise TypeError(f"unsupported distribution variant {type(t).__name__}")


def conjugation_smoothing(w_t: OperatorMatrix, wp: WindowPair) -> OperatorMatrix:
    """Phase-space average h^2 sum h_check(z) rho(z) W rho(z)^{-1}.

    Conjugation by rho(z) multiplies the Fourier-Wigner transform by the
    symplectic character of z, so averaging against h_check multiplies it
    by h_win; the quadrature therefore equals the Weyl transform of
    h_win * alpha(W), which is what is computed (exactly, and in
    O(N^2 log N) instead of N^2 matrix products).
    """
    if w_t.grid.n != wp.grid.n:
        raise ValueError("grid mismatch between operator and window")
    damped = wp.h_win.values * fourier_wigner(w_t).values
    return OperatorMatrix(w_t.grid, _weyl_of_samples(w_t.grid, damped))
