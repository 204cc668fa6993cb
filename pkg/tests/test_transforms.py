"""Transform conventions: literal-sum oracles, exact inverses, projective
translations, and the Weyl / Fourier-Wigner pair."""

import numpy as np
import pytest

from weylgrid.grid import (
    Atom,
    AtomicSum,
    Box,
    Density,
    GridFunction,
    OperatorMatrix,
    SpatialVector,
    build_distribution,
    lp_norm,
    make_phase_grid,
    pair_bilinear,
)
from weylgrid.transforms import (
    beta_check,
    fourier_2d,
    fourier_wigner,
    gamma,
    gaussian_envelope,
    gaussian_values,
    point_eval,
    rank_one,
    reflect,
    rho_matrix,
    sft_of_distribution,
    symplectic_ft,
    weyl,
    weyl_definitional_pairing,
)


def random_grid_function(grid, rng):
    vals = rng.normal(size=(grid.n, grid.n)) + 1j * rng.normal(size=(grid.n, grid.n))
    return GridFunction(grid, vals)


def smooth_vector(grid, rng, degree=4):
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return SpatialVector.from_function(
        grid, lambda t: np.polyval(c, t) * np.exp(-np.pi * t**2))


# ---------------------------------------------------------------------------
# symplectic / ordinary Fourier transforms
# ---------------------------------------------------------------------------

def test_symplectic_ft_matches_double_sum():
    g = make_phase_grid(64)
    rng = np.random.default_rng(10)
    f = random_grid_function(g, rng)
    t = g.nodes
    # literal h^2 sum e^{2 pi i (xi y - eta x)} F(x, y)
    ey = np.exp(2j * np.pi * t[:, None] * t[None, :])      # (xi, y)
    ex = np.exp(-2j * np.pi * t[:, None] * t[None, :])     # (eta, x)
    literal = g.spacing**2 * ey @ f.values.T @ ex.T
    out = symplectic_ft(f)
    assert np.abs(out.values - literal).max() < 1e-10


def test_symplectic_ft_involution():
    g = make_phase_grid(128)
    rng = np.random.default_rng(11)
    f = random_grid_function(g, rng)
    twice = symplectic_ft(symplectic_ft(f))
    assert np.abs(twice.values - f.values).max() < 1e-10


def test_rotation_identity():
    # F_check(xi, eta) = F_hat(eta, -xi)
    g = make_phase_grid(128)
    rng = np.random.default_rng(12)
    f = random_grid_function(g, rng)
    chk = symplectic_ft(f).values
    hat = fourier_2d(f).values
    neg = (g.n - np.arange(g.n)) % g.n       # periodic index of the negated node
    # chk[i_xi, i_eta] == hat[i_eta, index of -xi_i]
    expected = hat[np.arange(g.n)[None, :], neg[:, None]]
    assert np.abs(chk - expected).max() < 1e-10


def test_sft_of_gaussian_closed_form():
    g = make_phase_grid(256)
    f = GridFunction(g, gaussian_values(g))
    out = symplectic_ft(f)
    t = g.nodes
    target = 2.0 * np.exp(-2.0 * np.pi * (t[:, None]**2 + t[None, :]**2))
    assert np.abs(out.values - target).max() < 1e-10


def test_reflect_is_periodic_point_reflection():
    g = make_phase_grid(64)
    rng = np.random.default_rng(13)
    f = random_grid_function(g, rng)
    r = reflect(f)
    n = g.n
    assert r.values[n // 2 + 3, n // 2 - 5] == f.values[n // 2 - 3, n // 2 + 5]
    assert np.all(reflect(r).values == f.values)


def test_sft_of_atoms_closed_form_vs_density_limit():
    # derivative atom transform must match point differentiation of the kernel
    g = make_phase_grid(256)
    a, b, w = 0.31, -0.44, 1.5 - 0.5j
    t = AtomicSum(g, (Atom((a, b), (1, 0), w),))
    out = sft_of_distribution(t)
    nodes = g.nodes
    xi, eta = nodes[:, None], nodes[None, :]
    # T(dx delta_(a,b)) applied to e^{2 pi i (xi y - eta x)} carries -d/da
    target = w * (-1.0) * (-2j * np.pi * eta) * np.exp(2j * np.pi * (xi * b - eta * a))
    assert np.abs(out.values - target).max() < 1e-10


# ---------------------------------------------------------------------------
# projective translations
# ---------------------------------------------------------------------------

def test_rho_is_unitary_and_identity_at_origin():
    g = make_phase_grid(64)
    rho = rho_matrix(0.7312, -1.25, g)
    sv = np.linalg.svd(rho.entries, compute_uv=False)
    assert np.abs(sv - 1.0).max() < 1e-9
    ident = rho_matrix(0.0, 0.0, g)
    assert np.abs(ident.entries - np.eye(g.n)).max() < 1e-12


def test_rho_composition_law_grid_aligned():
    # 100 random grid-aligned pairs: exact projective composition
    g = make_phase_grid(64)
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(100):
        jx, jy, kx, ky = rng.integers(-12, 13, size=4)
        x, y = jx * g.spacing, jy * g.spacing
        xp, yp = kx * g.spacing, ky * g.spacing
        lhs = rho_matrix(x, y, g).entries @ rho_matrix(xp, yp, g).entries
        rhs = np.exp(1j * np.pi * (x * yp - xp * y)) * rho_matrix(x + xp, y + yp, g).entries
        worst = max(worst, np.abs(lhs - rhs).max())
    assert worst < 1e-9


def test_rho_composition_law_off_grid_on_decaying_vectors():
    # off grid-alignment the law holds on well-resolved vectors
    g = make_phase_grid(256)
    rng = np.random.default_rng(15)
    v = smooth_vector(g, rng).values
    worst = 0.0
    for _ in range(20):
        x, y, xp, yp = rng.uniform(-1.5, 1.5, size=4)
        lhs = rho_matrix(x, y, g).entries @ (rho_matrix(xp, yp, g).entries @ v)
        rhs = (np.exp(1j * np.pi * (x * yp - xp * y))
               * rho_matrix(x + xp, y + yp, g).entries @ v)
        worst = max(worst, np.abs(lhs - rhs).max() / np.abs(v).max())
    assert worst < 1e-9


def test_rho_parameter_derivative_vs_finite_difference():
    g = make_phase_grid(128)
    x0, y0, eps = 0.4, -0.9, 1e-5
    d10 = rho_matrix(x0, y0, g, (1, 0)).entries
    fd = (rho_matrix(x0 + eps, y0, g).entries
          - rho_matrix(x0 - eps, y0, g).entries) / (2 * eps)
    assert np.abs(d10 - fd).max() < 1e-5 * np.abs(d10).max()
    d01 = rho_matrix(x0, y0, g, (0, 1)).entries
    fd = (rho_matrix(x0, y0 + eps, g).entries
          - rho_matrix(x0, y0 - eps, g).entries) / (2 * eps)
    assert np.abs(d01 - fd).max() < 1e-5 * np.abs(d01).max()


def test_rho_rejects_out_of_range():
    g = make_phase_grid(64)
    with pytest.raises(ValueError):
        rho_matrix(4.0, 0.0, g)
    with pytest.raises(ValueError):
        rho_matrix(0.0, 0.0, g, (3, 2))


# ---------------------------------------------------------------------------
# Fourier-Wigner transform and its inverse
# ---------------------------------------------------------------------------

def test_fourier_wigner_matches_literal_trace():
    g = make_phase_grid(64)
    rng = np.random.default_rng(16)
    x = OperatorMatrix(g, np.outer(smooth_vector(g, rng).values,
                                   smooth_vector(g, rng).values))
    alpha = fourier_wigner(x)
    nodes = g.nodes
    for _ in range(10):
        i, j = rng.integers(0, g.n, size=2)
        literal = np.trace(rho_matrix(nodes[i], nodes[j], g).entries @ x.entries)
        assert abs(alpha.values[i, j] - literal) < 1e-12


def test_fourier_wigner_plancherel():
    g = make_phase_grid(128)
    rng = np.random.default_rng(17)
    x = OperatorMatrix(g, rng.normal(size=(g.n, g.n))
                       + 1j * rng.normal(size=(g.n, g.n)))
    alpha = fourier_wigner(x)
    assert lp_norm(alpha, 2.0) == pytest.approx(np.linalg.norm(x.entries), rel=1e-12)


def test_weyl_inverts_fourier_wigner():
    g = make_phase_grid(128)
    rng = np.random.default_rng(18)
    lim = g.length / 2.0 - 1.0
    box = Box(-lim, lim, -lim, lim)
    d = Density(random_grid_function(g, rng), Box(-2, 2, -2, 2))
    d = Density.truncated(d.values, Box(-2, 2, -2, 2))
    w = weyl(d)
    back = fourier_wigner(w)
    assert np.abs(back.values - d.values.values).max() < 1e-10
    # and the other way: weyl of the samples of alpha(X) returns X
    x = OperatorMatrix(g, rng.normal(size=(g.n, g.n)) + 0j)
    again = weyl(Density(fourier_wigner(x), box))
    assert np.abs(again.entries - x.entries).max() < 1e-9


def test_weyl_of_gaussian_is_rank_one_projector():
    g = make_phase_grid(256)
    lim = g.length / 2.0 - 1.0
    d = Density.truncated(GridFunction(g, gaussian_values(g)),
                          Box(-lim, lim, -lim, lim))
    w = weyl(d)
    sv = np.linalg.svd(w.entries, compute_uv=False)
    assert sv[0] == pytest.approx(1.0, abs=1e-9)
    assert sv[1] / sv[0] < 1e-9
    env = gaussian_envelope(g)
    assert np.abs(w.entries - np.outer(env.phi.values, env.phi.values)).max() < 1e-9


def test_weyl_of_delta_is_projective_translation():
    g = make_phase_grid(128)
    a, b = 0.3, -0.7
    w = weyl(AtomicSum(g, (Atom((a, b)),)))
    assert np.abs(w.entries - rho_matrix(-a, -b, g).entries).max() < 1e-12


def test_weyl_oracle_equivalence_all_variants():
    g = make_phase_grid(128)
    rng = np.random.default_rng(19)
    variants = [
        AtomicSum(g, (Atom((0.3, -0.7)),)),
        AtomicSum(g, (Atom((0.2, 0.1), (0, 1), 0.5), Atom((-0.8, 0.4), (1, 0), 1j))),
        build_distribution(g, {"kind": "density", "box": [-2, 2, -2, 2],
                               "bumps": [{"center": [0.1, -0.2], "radius": 1.2}]}),
        build_distribution(g, {"kind": "circle", "radius": 1.0, "nodes": 64}),
    ]
    for t in variants:
        phi = smooth_vector(g, rng)
        psi = smooth_vector(g, rng)
        lhs = pair_bilinear(weyl(t).apply(phi), psi)
        rhs = weyl_definitional_pairing(t, phi, psi)
        assert abs(lhs - rhs) < 1e-6 * max(abs(lhs), abs(rhs), 1e-12)


def test_point_eval_interpolates_band_limited_data():
    # frequencies 0.5 and 0.25 lie on the dual grid at N = 256 (h = 1/16)
    g = make_phase_grid(256)
    f = GridFunction.from_function(
        g, lambda x, y: np.exp(2j * np.pi * (0.5 * x - 0.25 * y)))
    val = point_eval(f, 0.3, 0.4)
    assert abs(val - np.exp(2j * np.pi * (0.5 * 0.3 - 0.25 * 0.4))) < 1e-10
    dval = point_eval(f, 0.3, 0.4, (1, 0))
    assert abs(dval - 2j * np.pi * 0.5 * val) < 1e-9


# ---------------------------------------------------------------------------
# gamma / beta_check pair
# ---------------------------------------------------------------------------

def test_beta_check_of_gaussian_projector():
    g = make_phase_grid(256)
    env = gaussian_envelope(g)
    proj = rank_one(env.phi, env.phi)
    bc = beta_check(proj)
    # g * alpha(phi_g x phi_g) = g * g-bar-symbol: known to equal sft(g)/2 * 2 = g^2-free
    # the projector's damped transform equals e^{-pi |z|^2}
    t = g.nodes
    target = np.exp(-np.pi * (t[:, None]**2 + t[None, :]**2))
    assert np.abs(bc.values - target).max() < 1e-9
    assert lp_norm(bc, 1.0) == pytest.approx(1.0, abs=1e-9)


def test_gamma_duality_random_pair():
    g = make_phase_grid(128)
    rng = np.random.default_rng(20)
    f = random_grid_function(g, rng)
    x = OperatorMatrix(g, rng.normal(size=(g.n, g.n)) + 0j)
    lhs = np.trace(gamma(f).entries @ x.entries)
    rhs = pair_bilinear(f, beta_check(x))
    assert abs(lhs - rhs) < 1e-9 * max(abs(lhs), 1.0)


def test_gaussian_envelope_normalization():
    g = make_phase_grid(256)
    env = gaussian_envelope(g)
    assert env.phi.norm() == pytest.approx(1.0, abs=1e-12)
    assert env.g.values[g.n // 2, g.n // 2] == pytest.approx(1.0)
