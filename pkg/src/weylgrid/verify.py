"""Inequality suites, the norm-equivalence sweep, and the compactness
experiment, driven by built-in test families of compactly supported
distributions.

Every check collects violations into a report instead of raising, so a
single run surfaces all failures; random samples are drawn from a seeded
generator and the seed is embedded in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    Atom,
    AtomicSum,
    Box,
    CompactDistribution,
    Density,
    GridFunction,
    OperatorMatrix,
    PhaseGrid,
    SpatialVector,
    build_distribution,
    circle_distribution,
    lp_norm,
    pair_bilinear,
)
from .schatten import schatten_norm, singular_values
from .smoothing import WindowPair, conjugation_smoothing, mollify, window_and_ck
from .transforms import (
    beta_check,
    fourier_wigner,
    gamma,
    gaussian_envelope,
    rank_one,
    sft_of_distribution,
    symplectic_ft,
    weyl,
    weyl_definitional_pairing,
)

__all__ = [
    "TestFamily",
    "SweepResult",
    "CheckReport",
    "builtin_families",
    "family_by_name",
    "random_smooth_vector",
    "random_trace_class",
    "random_grid_function",
    "check_eq1",
    "check_eq2",
    "check_adjointness",
    "theorem_sweep",
    "mollifier_convergence",
    "converse_check",
    "oracle_check",
]

DEFAULT_SLACK = 0.05
DEFAULT_P_LIST = (1.0, 4.0 / 3.0, 2.0, 4.0, np.inf)


@dataclass(frozen=True)
class TestFamily:
    """Named list of distributions sharing a support box."""

    name: str
    members: tuple[CompactDistribution, ...]
    kinds: tuple[str, ...]            # per member: smooth | atomic | circle
    box: Box
    description: str = ""

    def __post_init__(self):
        if len(self.members) != len(self.kinds):
            raise ValueError("one kind per member required")
        for m in self.members:
            if not self.box.contains(m.support_box):
                raise ValueError(f"member support {m.support_box} escapes {self.box}")


def builtin_families(grid: PhaseGrid) -> list[TestFamily]:
    """F1 smooth bumps, F2 atom sums, F3 circle measures."""
    if grid.n < 256:
        raise ValueError("builtin families need a grid of at least 256 points")
    box = Box(-2.0, 2.0, -2.0, 2.0)

    bump_specs = [
        {"center": [0.0, 0.0], "radius": 1.8},
        {"center": [0.5, -0.3], "radius": 1.2},
        {"center": [-0.4, 0.4], "radius": 1.5, "modulation": [0.5, -0.25]},
        None,  # two-bump member assembled below
        {"center": [0.2, 0.1], "radius": 1.6, "modulation": [0.5, 0.3]},
        {"center": [-0.3, -0.5], "radius": 1.4, "amplitude": [1.0, 0.5]},
    ]
    f1 = []
    for spec in bump_specs:
        if spec is None:
            f1.append(build_distribution(grid, {
                "kind": "density", "box": box.as_list(),
                "bumps": [{"center": [0.9, -0.6], "radius": 1.0},
                          {"center": [-0.9, 0.6], "radius": 1.0,
                           "amplitude": [0.0, 1.0]}]}))
        else:
            f1.append(build_distribution(grid, {
                "kind": "density", "box": box.as_list(), "bumps": [spec]}))

    f2 = [
        AtomicSum(grid, (Atom((0.3, -0.7)),)),
        AtomicSum(grid, (Atom((-1.0, 0.5)), Atom((0.75, 0.25), (0, 0), 0.5 - 0.5j))),
        AtomicSum(grid, (Atom((0.31, -0.77), (0, 0), 1.0),
                         Atom((-1.13, 0.29), (0, 0), -0.7),
                         Atom((0.57, 1.21), (0, 0), 0.4 + 0.3j),
                         Atom((-0.41, -0.93), (0, 0), 0.9j))),
        AtomicSum(grid, (
            Atom((0.3753, 1.1916), (0, 0), -0.2741 - 0.8906j),
            Atom((-0.5995, 1.1207), (0, 0), 0.0601 + 1.3402j),
            Atom((0.8912, -0.0962), (0, 0), 0.4898 + 0.3569j),
            Atom((-0.7354, -0.1648), (0, 0), -0.0293 + 0.6953j),
            Atom((1.4865, 0.8780), (0, 0), -1.9012 - 1.2895j),
            Atom((-0.8541, -1.0194), (0, 0), -1.2674 + 0.2713j),
            Atom((-1.3930, 0.0447), (0, 0), -2.5168 - 0.5387j),
            Atom((0.3877, 0.0424), (0, 0), -1.5301 - 0.4778j))),
        AtomicSum(grid, (Atom((1.1, 0.7)), Atom((-0.5, -1.0), (0, 0), 0.6),
                         Atom((-0.25, 0.3), (0, 1), 0.005))),
    ]

    f3 = [circle_distribution(grid, r, 256) for r in (1.0, 1.5, 2.0)]

    return [
        TestFamily("F1", tuple(f1), ("smooth",) * 6, box, "smooth bumps"),
        TestFamily("F2", tuple(f2), ("atomic",) * 5, box, "atom sums"),
        TestFamily("F3", tuple(f3), ("circle",) * 3, box, "circle measures"),
    ]


def family_by_name(grid: PhaseGrid, name: str) -> TestFamily:
    for fam in builtin_families(grid):
        if fam.name == name:
            return fam
    raise ValueError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# random sample builders (seeded)
# ---------------------------------------------------------------------------

def random_smooth_vector(grid: PhaseGrid, rng: np.random.Generator,
                         degree: int = 5) -> SpatialVector:
    """Gaussian-enveloped random polynomial, so grid truncation is negligible."""
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    t = grid.nodes
    vals = np.polyval(c, t) * np.exp(-np.pi * t**2)
    v = SpatialVector(grid, np.sqrt(grid.spacing) * vals)
    return SpatialVector(grid, v.values / max(v.norm(), 1e-300))


def random_trace_class(grid: PhaseGrid, rng: np.random.Generator,
                       max_rank: int = 8) -> OperatorMatrix:
    """Random operator of rank <= max_rank built from smooth vectors."""
    rank = int(rng.integers(1, max_rank + 1))
    acc = np.zeros((grid.n, grid.n), dtype=complex)
    for _ in range(rank):
        u = random_smooth_vector(grid, rng)
        v = random_smooth_vector(grid, rng)
        acc += (rng.normal() + 1j * rng.normal()) * np.outer(u.values, v.values)
    return OperatorMatrix(grid, acc)


def random_grid_function(grid: PhaseGrid, rng: np.random.Generator,
                         degree: int = 2) -> GridFunction:
    """Gaussian-enveloped random polynomial on phase space."""
    t = grid.nodes
    x, y = t[:, None], t[None, :]
    env = np.exp(-0.5 * np.pi * (x**2 + y**2))
    acc = np.zeros((grid.n, grid.n), dtype=complex)
    for a in range(degree + 1):
        for b in range(degree + 1):
            acc += (rng.normal() + 1j * rng.normal()) * x**a * y**b
    return GridFunction(grid, acc * env)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one verification suite."""

    name: str
    grid_n: int
    seed: int | None
    n_samples: int
    slack: float
    records: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def check(self, ok: bool, record: dict) -> None:
        self.records.append(record)
        if not ok:
            self.violations.append(record)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "grid_n": self.grid_n,
            "seed": self.seed,
            "n_samples": self.n_samples,
            "slack": self.slack,
            "passed": self.passed,
            "n_violations": len(self.violations),
            "violations": self.violations,
            "records": self.records,
            "extras": self.extras,
        }


def _pkey(p: float) -> str:
    return "inf" if np.isinf(p) else f"{float(p):g}"


# ---------------------------------------------------------------------------
# inequality suites
# ---------------------------------------------------------------------------

def check_eq1(grid: PhaseGrid, n_samples: int = 200,
              p_list=DEFAULT_P_LIST, seed: int = 0,
              slack: float = DEFAULT_SLACK) -> CheckReport:
    """L^p norm of the damped-transform image never exceeds the Schatten
    p-norm of the operator (plus slack), including the rank-one gaussian
    equality case at p = 1."""
    rng = np.random.default_rng(seed)
    report = CheckReport("eq1", grid.n, seed, n_samples, slack)
    for i in range(n_samples):
        x = random_trace_class(grid, rng)
        bc = beta_check(x)
        for p in p_list:
            lhs = lp_norm(bc, p)
            rhs = schatten_norm(x, p)
            report.check(lhs <= (1.0 + slack) * rhs, {
                "sample": i, "p": _pkey(p), "lhs": lhs, "rhs": rhs})
    env = gaussian_envelope(grid)
    proj = rank_one(env.phi, env.phi)
    lhs = lp_norm(beta_check(proj), 1.0)
    rhs = schatten_norm(proj, 1.0)
    report.extras["equality_witness"] = {"lhs": lhs, "rhs": rhs,
                                         "gap": abs(lhs - rhs)}
    report.check(abs(lhs - rhs) < 1e-6, report.extras["equality_witness"])
    return report


def check_eq2(grid: PhaseGrid, n_samples: int = 200,
              p_list=DEFAULT_P_LIST, seed: int = 0,
              slack: float = DEFAULT_SLACK) -> CheckReport:
    """Schatten p-norm of gamma(f) never exceeds the grid L^p norm of f."""
    rng = np.random.default_rng(seed)
    report = CheckReport("eq2", grid.n, seed, n_samples, slack)
    for i in range(n_samples):
        f = random_grid_function(grid, rng)
        gm = gamma(f)
        for p in p_list:
            lhs = schatten_norm(gm, p)
            rhs = lp_norm(f, p)
            report.check(lhs <= (1.0 + slack) * rhs, {
                "sample": i, "p": _pkey(p), "lhs": lhs, "rhs": rhs})
    env = gaussian_envelope(grid)
    f = symplectic_ft(env.g)
    lhs = schatten_norm(gamma(f), 1.0)
    rhs = lp_norm(f, 1.0)
    report.extras["gaussian_case"] = {"lhs": lhs, "rhs": rhs}
    report.check(lhs <= (1.0 + slack) * rhs, report.extras["gaussian_case"])
    return report


def check_adjointness(grid: PhaseGrid, n_samples: int = 100, seed: int = 0,
                      rel_tol: float = 1e-5,
                      chain_tol: float = 1e-4) -> CheckReport:
    """Duality tr(gamma(f) X) = <f, beta_check(X)> on random pairs, plus the
    windowed pairing chain <sft(h_win T), beta_check(phi (x) psi)> =
    (W(T) phi)(psi) on the smooth family."""
    rng = np.random.default_rng(seed)
    report = CheckReport("adjoint", grid.n, seed, n_samples, rel_tol)
    for i in range(n_samples):
        f = random_grid_function(grid, rng)
        x = random_trace_class(grid, rng)
        lhs = complex(np.trace(gamma(f).entries @ x.entries))
        rhs = pair_bilinear(f, beta_check(x))
        scale = max(abs(lhs), abs(rhs), 1e-30)
        report.check(abs(lhs - rhs) <= rel_tol * scale, {
            "sample": i, "lhs": [lhs.real, lhs.imag],
            "rhs": [rhs.real, rhs.imag], "rel_err": abs(lhs - rhs) / scale})

    fam = family_by_name(grid, "F1")
    wp = window_and_ck(fam.box.expand(0.5), grid)
    for j, t in enumerate(fam.members):
        phi = random_smooth_vector(grid, rng)
        psi = random_smooth_vector(grid, rng)
        t1 = GridFunction(grid, wp.h_win.values * t.values.values)
        lhs = pair_bilinear(symplectic_ft(t1), beta_check(rank_one(phi, psi)))
        rhs = pair_bilinear(weyl(t).apply(phi), psi)
        scale = max(abs(lhs), abs(rhs), 1e-30)
        report.check(abs(lhs - rhs) <= chain_tol * scale, {
            "chain_member": j, "lhs": [lhs.real, lhs.imag],
            "rhs": [rhs.real, rhs.imag], "rel_err": abs(lhs - rhs) / scale})
    return report


def oracle_check(grid: PhaseGrid, n_samples: int = 30, seed: int = 0,
                 rel_tol: float = 1e-4) -> CheckReport:
    """Kernel-route Weyl transform against the definitional pairing, over
    all distribution variants."""
    rng = np.random.default_rng(seed)
    report = CheckReport("oracle", grid.n, seed, n_samples, rel_tol)
    fams = builtin_families(grid)
    pool = [(m, f.name) for f in fams for m in f.members]
    for i in range(n_samples):
        t, fam_name = pool[int(rng.integers(len(pool)))]
        phi = random_smooth_vector(grid, rng)
        psi = random_smooth_vector(grid, rng)
        lhs = pair_bilinear(weyl(t).apply(phi), psi)
        rhs = weyl_definitional_pairing(t, phi, psi)
        scale = max(abs(lhs), abs(rhs), 1e-30)
        report.check(abs(lhs - rhs) <= rel_tol * scale, {
            "sample": i, "family": fam_name, "rel_err": abs(lhs - rhs) / scale})
    return report


# ---------------------------------------------------------------------------
# the norm-equivalence sweep
# ---------------------------------------------------------------------------

def _p_included(kind: str, p: float) -> bool:
    """Whether the continuum L^p norm of the transform is finite."""
    if kind == "smooth":
        return True
    if kind == "atomic":
        return bool(np.isinf(p))
    if kind == "circle":
        return bool(np.isinf(p)) or p > 4.0
    raise ValueError(f"unknown member kind {kind!r}")


@dataclass
class SweepResult:
    """Two-sided norm-equivalence ratios for one family."""

    family: str
    grid_n: int
    c_k: float
    slack: float
    records: list = field(default_factory=list)

    @property
    def included_ratios(self) -> list[float]:
        return [r["ratio"] for r in self.records if r["included"]]

    @property
    def passed(self) -> bool:
        lo = (1.0 / self.c_k) / (1.0 + self.slack)
        hi = self.c_k * (1.0 + self.slack)
        return all(lo <= r <= hi for r in self.included_ratios)

    def to_dict(self) -> dict:
        ratios = self.included_ratios
        return {
            "family": self.family,
            "grid_n": self.grid_n,
            "c_k": self.c_k,
            "slack": self.slack,
            "passed": self.passed,
            "min_ratio": min(ratios) if ratios else None,
            "max_ratio": max(ratios) if ratios else None,
            "records": self.records,
        }


def theorem_sweep(family: TestFamily, p_list=(1.0, 2.0, 4.5, np.inf),
                  slack: float = DEFAULT_SLACK,
                  window_box: Box | None = None,
                  transition_width: float = 0.5,
                  max_workers: int = 1) -> SweepResult:
    """Compute the ratio (Schatten p-norm of the Weyl transform) /
    (grid L^p norm of the transformed distribution) for every member and
    p, and test the two-sided bound with constant C_K.

    The L^p norms of the ordinary and symplectic transforms agree exactly
    on the grid, so only the symplectic transform is evaluated.  Ratios at
    p where the continuum norm diverges are recorded but not asserted.
    """
    grid = family.members[0].grid
    box = window_box if window_box is not None else family.box
    wp = window_and_ck(box, grid, transition_width)
    result = SweepResult(family.name, grid.n, wp.c_k, slack)

    def member_records(idx: int) -> list[dict]:
        member, kind = family.members[idx], family.kinds[idx]
        t_check = sft_of_distribution(member)
        w = weyl(member)
        singular_values(w)
        recs = []
        for p in p_list:
            that = lp_norm(t_check, p)
            sp = schatten_norm(w, p)
            ratio = sp / that if that > 0 else np.inf
            recs.append({
                "member": idx, "kind": kind, "p": _pkey(p),
                "transform_norm": that, "schatten_norm": sp,
                "ratio": ratio, "included": _p_included(kind, p)})
        return recs

    indices = range(len(family.members))
    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            chunks = list(pool.map(member_records, indices))
    else:
        chunks = [member_records(i) for i in indices]
    for chunk in chunks:
        result.records.extend(chunk)
    result.records.sort(key=lambda r: (r["member"], r["p"]))
    return result


# ---------------------------------------------------------------------------
# compactness / mollifier experiment
# ---------------------------------------------------------------------------

def mollifier_convergence(t: CompactDistribution, r_list=(2.0, 4.0, 8.0, 16.0),
                          slack: float = DEFAULT_SLACK,
                          transition_width: float = 0.5) -> CheckReport:
    """Smoothing error bound and decay.

    For each scale r, the operator-norm distance between the Weyl
    transforms of the mollified and original distribution must stay below
    (1 + slack) * C_K * grid-max of the transform perturbation, the
    distance must be nonincreasing in r (up to the same slack factor,
    which absorbs grid-sampling wiggle of the mollifier spectrum), and
    the mollified transform is trace class (finite S^1 norm).
    """
    grid = t.grid
    report = CheckReport("mollifier", grid.n, None, len(r_list), slack)
    wp = window_and_ck(t.support_box.expand(1.0), grid, transition_width)
    report.extras["c_k"] = wp.c_k
    w_t = weyl(t)
    t_check = sft_of_distribution(t)
    w_norm = schatten_norm(w_t, np.inf)
    report.extras["w_op_norm"] = w_norm
    atol = 1e-9 * max(1.0, w_norm)
    prev = np.inf
    for r in r_list:
        smoothed, rho_check = mollify(t, r)
        w_s = weyl(smoothed)
        diff = OperatorMatrix(grid, w_s.entries - w_t.entries)
        lhs = schatten_norm(diff, np.inf)
        rhs = wp.c_k * float(np.abs(rho_check.values * t_check.values
                                    - t_check.values).max())
        s1 = schatten_norm(w_s, 1.0)
        rec = {"r": r, "lhs": lhs, "bound": rhs, "prev_lhs": prev,
               "smoothed_trace_norm": s1}
        report.check(lhs <= (1.0 + slack) * rhs + atol
                     and lhs <= (1.0 + slack) * prev + atol
                     and np.isfinite(s1), rec)
        prev = lhs
    report.extras["final_relative_error"] = prev / w_norm if w_norm else 0.0
    return report


def converse_check(t: Density, n_probes: int = 20, seed: int = 0,
                   rel_tol: float = 1e-3, slack: float = DEFAULT_SLACK,
                   window_box: Box | None = None) -> CheckReport:
    """Conjugation-smoothing construction.

    Z averages rho-conjugates of W(T) against the transformed window;
    tracing gamma(phi) against Z must reproduce the pairing of phi with
    the transformed distribution, and the lower norm-equivalence bound
    must hold for q in {1, 2, inf}.
    """
    grid = t.grid
    rng = np.random.default_rng(seed)
    report = CheckReport("converse", grid.n, seed, n_probes, rel_tol)
    box = window_box if window_box is not None else t.support_box.expand(0.5)
    wp = window_and_ck(box, grid)
    report.extras["c_k"] = wp.c_k
    w_t = weyl(t)
    z = conjugation_smoothing(w_t, wp)
    t_check = sft_of_distribution(t)
    for q in (1.0, 2.0, np.inf):
        zn = schatten_norm(z, q)
        wn = schatten_norm(w_t, q)
        tn = lp_norm(t_check, q)
        report.check(zn <= (1.0 + slack) * wp.c_k * wn, {
            "q": _pkey(q), "z_norm": zn, "ck_times_w": wp.c_k * wn})
        report.check(tn <= (1.0 + slack) * wp.c_k * wn, {
            "q": _pkey(q), "transform_norm": tn, "ck_times_w": wp.c_k * wn,
            "which": "lower_bound"})
    for i in range(n_probes):
        phi = random_grid_function(grid, rng)
        lhs = complex(np.trace(gamma(phi).entries @ z.entries))
        rhs = pair_bilinear(phi, t_check)
        scale = max(abs(lhs), abs(rhs), 1e-30)
        report.check(abs(lhs - rhs) <= rel_tol * scale, {
            "probe": i, "rel_err": abs(lhs - rhs) / scale})
    return report
