"""Singular values, Schatten p-norms, and compactness diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import OperatorMatrix

__all__ = [
    "SchattenReport",
    "singular_values",
    "schatten_norm",
    "compactness_profile",
    "schatten_report",
]

RANK_THRESHOLD = 1e-10  # relative cutoff sigma_k > sigma_1 * threshold


def singular_values(a: OperatorMatrix) -> np.ndarray:
    """Descending singular values; cached on the matrix after first call."""
    if a._singular_values is None:
        if not np.all(np.isfinite(a.entries)):
            raise ValueError("matrix has non-finite entries")
        a._singular_values = np.linalg.svd(a.entries, compute_uv=False)
    return a._singular_values


def schatten_norm(a: OperatorMatrix, p: float) -> float:
    """(sum sigma_k^p)^(1/p); the operator norm sigma_1 at p = inf."""
    sv = singular_values(a)
    if np.isinf(p):
        return float(sv[0]) if sv.size else 0.0
    if p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return float(np.sum(sv**p) ** (1.0 / p))


def compactness_profile(a: OperatorMatrix, k_list) -> list[float]:
    """Tail ratios sigma_k / sigma_1 (1-based k); rapid decay under grid
    refinement is the discrete proxy for compactness."""
    sv = singular_values(a)
    out = []
    for k in k_list:
        if not 1 <= k <= sv.size:
            raise ValueError(f"k = {k} out of range 1..{sv.size}")
        out.append(float(sv[k - 1] / sv[0]) if sv[0] > 0 else 0.0)
    return out


@dataclass(frozen=True)
class SchattenReport:
    """Spectrum summary: singular values, requested p-norms, numerical rank."""

    singular_values: np.ndarray
    norms: dict[float, float]
    numerical_rank: int

    def to_dict(self) -> dict:
        return {
            "singular_values": [float(s) for s in self.singular_values],
            "norms": {("inf" if np.isinf(p) else repr(float(p))): v
                      for p, v in self.norms.items()},
            "numerical_rank": self.numerical_rank,
        }


def schatten_report(a: OperatorMatrix, p_list) -> SchattenReport:
    sv = singular_values(a)
    norms = {float(p): schatten_norm(a, p) for p in p_list}
    rank = int(np.sum(sv > sv[0] * RANK_THRESHOLD)) if sv.size and sv[0] > 0 else 0
    return SchattenReport(sv, norms, rank)
