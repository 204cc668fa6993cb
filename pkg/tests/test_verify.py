"""Test families and the verification suites at reduced sample counts."""

import numpy as np
import pytest

from weylgrid.grid import AtomicSum, Box, Density, lp_norm, make_phase_grid
from weylgrid.transforms import sft_of_distribution
from weylgrid.verify import (
    builtin_families,
    check_adjointness,
    check_eq1,
    check_eq2,
    converse_check,
    family_by_name,
    mollifier_convergence,
    oracle_check,
    random_smooth_vector,
    random_trace_class,
    theorem_sweep,
)


@pytest.fixture(scope="module")
def grid():
    return make_phase_grid(256)


@pytest.fixture(scope="module")
def families(grid):
    return {f.name: f for f in builtin_families(grid)}


def test_builtin_family_structure(grid, families):
    assert set(families) == {"F1", "F2", "F3"}
    f1, f2, f3 = families["F1"], families["F2"], families["F3"]
    assert len(f1.members) == 6 and all(isinstance(m, Density) for m in f1.members)
    assert len(f2.members) == 5 and all(isinstance(m, AtomicSum) for m in f2.members)
    assert len(f3.members) == 3
    box = Box(-2.0, 2.0, -2.0, 2.0)
    for fam in (f1, f2, f3):
        for m in fam.members:
            assert box.contains(m.support_box)
    # the single off-grid atom member with unimodular transform
    single = f2.members[0]
    assert len(single.atoms) == 1 and single.atoms[0].location == (0.3, -0.7)
    assert lp_norm(sft_of_distribution(single), np.inf) == pytest.approx(1.0, abs=1e-12)
    # one derivative atom somewhere in F2
    orders = [a.orders for m in f2.members for a in m.atoms]
    assert (0, 1) in orders
    with pytest.raises(ValueError):
        builtin_families(make_phase_grid(128))
    with pytest.raises(ValueError):
        family_by_name(grid, "F9")


def test_f1_dc_identity(grid, families):
    # density mass equals its transform at the origin
    for m in families["F1"].members:
        mass = grid.spacing**2 * m.values.values.sum()
        tc = sft_of_distribution(m)
        assert tc.values[grid.n // 2, grid.n // 2] == pytest.approx(mass, rel=1e-10)


def test_f3_circle_mass(grid, families):
    tc = sft_of_distribution(families["F3"].members[2])
    assert tc.values[grid.n // 2, grid.n // 2] == pytest.approx(4 * np.pi, abs=1e-6)


def test_random_builders_are_seeded(grid):
    a = random_smooth_vector(grid, np.random.default_rng(5))
    b = random_smooth_vector(grid, np.random.default_rng(5))
    assert np.all(a.values == b.values)
    assert a.norm() == pytest.approx(1.0, abs=1e-12)
    x = random_trace_class(grid, np.random.default_rng(5))
    assert np.linalg.matrix_rank(x.entries, tol=1e-10) <= 8


def test_check_eq1_small(grid):
    rep = check_eq1(grid, n_samples=20, seed=100)
    assert rep.passed
    assert rep.extras["equality_witness"]["gap"] < 1e-6


def test_check_eq2_small(grid):
    rep = check_eq2(grid, n_samples=20, seed=101)
    assert rep.passed
    d = rep.to_dict()
    assert d["n_violations"] == 0 and d["seed"] == 101


def test_check_adjointness_small(grid):
    rep = check_adjointness(grid, n_samples=20, seed=102)
    assert rep.passed
    assert max(r["rel_err"] for r in rep.records) < 1e-10


def test_oracle_small(grid):
    rep = oracle_check(grid, n_samples=10, seed=103)
    assert rep.passed


def test_theorem_sweep_f1(grid, families):
    res = theorem_sweep(families["F1"], window_box=Box(-2.5, 2.5, -2.5, 2.5))
    assert res.passed
    d = res.to_dict()
    assert len(res.records) == 6 * 4
    # Plancherel pins every p = 2 ratio to 1
    for rec in res.records:
        if rec["p"] == "2":
            assert rec["ratio"] == pytest.approx(1.0, rel=1e-10)
    assert d["min_ratio"] > 1.0 / res.c_k and d["max_ratio"] < res.c_k


def test_theorem_sweep_skips_divergent_p(grid, families):
    res = theorem_sweep(families["F2"], p_list=(1.0, np.inf))
    by_p = {}
    for rec in res.records:
        by_p.setdefault(rec["p"], []).append(rec["included"])
    assert not any(by_p["1"])          # atoms: finite-p continuum norms diverge
    assert all(by_p["inf"])
    res3 = theorem_sweep(families["F3"], p_list=(2.0, 4.5, np.inf))
    for rec in res3.records:
        assert rec["included"] == (rec["p"] in ("4.5", "inf"))


def test_theorem_sweep_threaded_matches_serial(grid, families):
    serial = theorem_sweep(families["F2"], p_list=(2.0, np.inf))
    threaded = theorem_sweep(families["F2"], p_list=(2.0, np.inf), max_workers=4)
    assert serial.records == threaded.records


def test_mollifier_convergence_single_member(grid, families):
    rep = mollifier_convergence(families["F1"].members[1])
    assert rep.passed
    lhs = [rec["lhs"] for rec in rep.records]
    assert lhs == sorted(lhs, reverse=True)
    assert rep.extras["final_relative_error"] < 1e-2


def test_mollifier_convergence_delta_at_origin(grid):
    from weylgrid.grid import Atom
    rep = mollifier_convergence(AtomicSum(grid, (Atom((0.0, 0.0)),)))
    assert rep.passed


def test_converse_single_member(grid, families):
    rep = converse_check(families["F1"].members[0], n_probes=5, seed=104)
    assert rep.passed
    assert rep.extras["c_k"] > 1.0
