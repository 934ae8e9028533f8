"""Discrete Littlewood-Paley decomposition and Besov norms.

The low-pass cutoff chi and the annulus cutoff phi_ring are built from the
classical smooth step h(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}):

    chi(k)      = 1 - h((|k| - 3/4) / (4/3 - 3/4)),
    phi_ring(k) = chi(k/2) - chi(k),

so chi == 1 on |k| <= 3/4 and vanishes beyond 4/3, phi_ring is supported in
[3/4, 8/3] and equals 1 on [4/3, 3/2], and the dyadic family telescopes to an
exact partition of unity.  Block j >= 0 applies phi_ring(2^{-j} k); block -1
applies chi; blocks below -2 vanish.

The Besov norm B^s_{p,r} is the ell^r sum over blocks of 2^{js} ||block||_p,
truncated at the largest j whose annulus fits under the grid's k_max.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import Field, Grid, lp_norm

__all__ = [
    "smooth_step",
    "smooth_cutoff",
    "DyadicPartition",
    "BesovParams",
    "SpectralLeakageWarning",
    "build_partition",
    "lp_block",
    "besov_norm",
    "pair_norm",
    "verify_product_estimates",
    "ProductEstimateReport",
]


class SpectralLeakageWarning(UserWarning):
    """Field carries energy above the range the dyadic blocks cover."""


def smooth_step(t) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, monotone in between."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    lo = t <= 0.0
    hi = t >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def smooth_cutoff(abs_k, inner: float, outer: float) -> np.ndarray:
    """Even cutoff equal to 1 on |k| <= inner and 0 on |k| >= outer."""
    abs_k = np.abs(np.asarray(abs_k, dtype=np.float64))
    return 1.0 - smooth_step((abs_k - inner) / (outer - inner))


def _chi(abs_k) -> np.ndarray:
    return smooth_cutoff(abs_k, 0.75, 4.0 / 3.0)


@dataclass(frozen=True)
class BesovParams:
    """Indices (s, p, r) of B^s_{p,r}; p, r in [1, inf).

    The main experiments require s > max(1 + 1/p, 3/2); pass
    allow_low_smoothness=True to evaluate norms outside that range for
    diagnostics.
    """

    s: float
    p: float
    r: float
    allow_low_smoothness: bool = False

    def __post_init__(self):
        if not (1.0 <= self.p < np.inf):
            raise ValueError(f"p must lie in [1, inf), got {self.p}")
        if not (1.0 <= self.r < np.inf):
            raise ValueError(f"r must lie in [1, inf), got {self.r}")
        if not self.allow_low_smoothness:
            floor = max(1.0 + 1.0 / self.p, 1.5)
            if not self.s > floor:
                raise ValueError(
                    f"s = {self.s} must exceed max(1 + 1/p, 3/2) = {floor}; "
                    "set allow_low_smoothness=True for diagnostic use"
                )

    def at(self, s: float) -> "BesovParams":
        """Same (p, r) at a different smoothness index, range check waived."""
        return BesovParams(s, self.p, self.r, allow_low_smoothness=True)


@dataclass(frozen=True)
class DyadicPartition:
    """Low-pass and annulus multipliers sampled on a grid's wavenumber lattice."""

    grid: Grid
    chi: np.ndarray
    rings: tuple  # rings[j] is the multiplier of block j, j = 0..j_max
    j_min: int
    j_max: int

    @property
    def covered_top(self) -> float:
        """|k| up to which the block sum equals 1 exactly."""
        return 0.75 * 2.0 ** (self.j_max + 1)


def build_partition(grid: Grid) -> DyadicPartition:
    """Sample the dyadic cutoffs on the lattice and verify their identities.

    j_max is the largest j with (8/3) 2^j <= k_max, so every retained annulus
    fits on the lattice.  Raises if the grid is too coarse for j_max >= 2.
    """
    k_max = grid.k_max
    j_max = int(np.floor(np.log2(3.0 * k_max / 8.0)))
    if j_max < 2:
        raise ValueError(
            f"grid too coarse: k_max = {k_max:.3f} supports j_max = {j_max} < 2"
        )
    abs_k = np.abs(grid.wavenumbers)
    chi = _chi(abs_k)
    rings = []
    for j in range(j_max + 1):
        scaled = abs_k / 2.0**j
        rings.append(_chi(scaled / 2.0) - _chi(scaled))

    _check_partition(grid, chi, rings, j_max)

    chi.flags.writeable = False
    for r in rings:
        r.flags.writeable = False
    return DyadicPartition(grid=grid, chi=chi, rings=tuple(rings),
                           j_min=-1, j_max=j_max)


def _check_partition(grid: Grid, chi: np.ndarray, rings: list, j_max: int) -> None:
    abs_k = np.abs(grid.wavenumbers)

    # support constraints, exact up to the smooth step's underflow plateau
    if np.any(np.abs(chi[abs_k > 4.0 / 3.0]) > 1e-14):
        raise AssertionError("chi support leaks beyond |k| = 4/3")
    for j, ring in enumerate(rings):
        scaled = abs_k / 2.0**j
        outside = (scaled < 0.75) | (scaled > 8.0 / 3.0)
        if np.any(np.abs(ring[outside]) > 1e-14):
            raise AssertionError(f"ring {j} support leaks outside [3/4, 8/3]")

    # partition of unity within the certified range
    total = chi.copy()
    for ring in rings:
        total += ring
    certified = abs_k <= (4.0 / 3.0) * 2.0**j_max
    dev = float(np.max(np.abs(total[certified] - 1.0)))
    if dev > 1e-10:
        raise AssertionError(f"partition of unity fails by {dev:.3e}")

    # annuli two or more apart are disjoint on the lattice
    for j in range(len(rings)):
        for jp in range(j + 2, len(rings)):
            if float(np.max(np.abs(rings[j] * rings[jp]))) != 0.0:
                raise AssertionError(f"rings {j} and {jp} overlap")


def lp_block(f: Field, j: int, partition: DyadicPartition) -> Field:
    """Dyadic block of f: zero for j = -2, chi for j = -1, annulus for j >= 0."""
    if j < -2 or j > partition.j_max:
        raise ValueError(f"block index {j} outside [-2, {partition.j_max}]")
    if j == -2:
        return Field.from_physical(f.grid, np.zeros(f.grid.n_points))
    mask = partition.chi if j == -1 else partition.rings[j]
    return Field(f.grid, spectral=f.spectral * mask)


def _leakage_fraction(f: Field, partition: DyadicPartition) -> float:
    coeffs = np.abs(f.spectral) ** 2
    total = float(coeffs.sum())
    if total == 0.0:
        return 0.0
    outside = np.abs(f.grid.wavenumbers) > partition.covered_top
    return float(coeffs[outside].sum()) / total


def besov_norm(f: Field, params: BesovParams, partition: DyadicPartition) -> float:
    """ell^r over blocks of 2^{js} ||Delta_j f||_p, j = -1 .. j_max.

    Warns if more than 1e-12 of the field's energy lies above the covered
    range, where the truncated sum under-weights the field.
    """
    if f.grid != partition.grid:
        raise ValueError("field and partition live on different grids")
    leak = _leakage_fraction(f, partition)
    if leak > 1e-12:
        warnings.warn(
            f"{leak:.2e} of the spectral energy lies above the covered range "
            f"|k| <= {partition.covered_top:.1f}; the Besov norm is truncated",
            SpectralLeakageWarning,
            stacklevel=2,
        )
    total = 0.0
    for j in range(-1, partition.j_max + 1):
        a = 2.0 ** (j * params.s) * lp_norm(lp_block(f, j, partition), params.p)
        total += a**params.r
    return float(total ** (1.0 / params.r))


def pair_norm(state, params: BesovParams, partition: DyadicPartition) -> float:
    """sqrt(||rho||_{B^{s-1}}^2 + ||u||_{B^s}^2) for a (rho, u) state."""
    nr = besov_norm(state.rho, params.at(params.s - 1.0), partition)
    nu = besov_norm(state.u, params, partition)
    return float(np.hypot(nr, nu))


@dataclass(frozen=True)
class ProductEstimateReport:
    """Empirical LHS/RHS ratios for the product inequalities over a corpus."""

    algebra_ratios: tuple      # ||uv||_s vs ||u||_s ||v||_s
    moser_ratios: tuple        # ||uv||_s vs ||u||_inf ||v||_s + ||v||_inf ||u||_s
    low_product_ratios: tuple  # ||uv||_{s-2} vs ||u||_{s-2} ||v||_{s-1}

    @property
    def max_algebra(self) -> float:
        return max(self.algebra_ratios, default=0.0)

    @property
    def max_moser(self) -> float:
        return max(self.moser_ratios, default=0.0)

    @property
    def max_low_product(self) -> float:
        return max(self.low_product_ratios, default=0.0)


def _ratio(num: float, den: float) -> float:
    if num == 0.0:
        return 0.0
    return num / den


def verify_product_estimates(corpus, params: BesovParams,
                             partition: DyadicPartition) -> ProductEstimateReport:
    """Evaluate the three product inequalities on a corpus of field pairs.

    Ratios are LHS divided by the constant-free RHS; 0/0 counts as 0.  The
    testable content is that the maxima stay bounded and stable as the corpus
    frequencies grow.
    """
    from .spectral import multiply

    s = params
    sm1 = params.at(params.s - 1.0)
    sm2 = params.at(params.s - 2.0)
    algebra, moser, low = [], [], []
    for u, v in corpus:
        uv = multiply(u, v)
        u_s = besov_norm(u, s, partition)
        v_s = besov_norm(v, s, partition)
        uv_s = besov_norm(uv, s, partition)
        u_inf = lp_norm(u, np.inf)
        v_inf = lp_norm(v, np.inf)
        algebra.append(_ratio(uv_s, u_s * v_s))
        moser.append(_ratio(uv_s, u_inf * v_s + v_inf * u_s))
        low.append(_ratio(besov_norm(uv, sm2, partition),
                          besov_norm(u, sm2, partition) * besov_norm(v, sm1, partition)))
    return ProductEstimateReport(tuple(algebra), tuple(moser), tuple(low))
