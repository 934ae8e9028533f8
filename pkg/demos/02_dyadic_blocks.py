"""Littlewood-Paley blocks and Besov norms on the lattice.

Shows the partition of unity, how a snapped carrier wave lands in exactly one
dyadic block, and how the Besov norm weights the blocks.
"""

import numpy as np

from novikov2c import (
    BesovParams,
    Field,
    besov_norm,
    build_partition,
    lp_block,
    lp_norm,
    make_grid,
    snapped_frequency,
)

grid = make_grid(2**13, 50.0)
partition = build_partition(grid)
print(f"grid k_max={grid.k_max:.1f}; blocks j = -1 .. {partition.j_max}; "
      f"sum of blocks == 1 up to |k| = {partition.covered_top:.0f}")

# --- partition of unity at a sample wavenumber ----------------------------
idx = int(np.argmin(np.abs(grid.wavenumbers - 5.0)))
total = partition.chi[idx] + sum(r[idx] for r in partition.rings)
print(f"\nblock sum at k = {grid.wavenumbers[idx]:.3f}: {total:.15f}")

# --- a carrier at ~ (17/12) 2^n occupies exactly block n -------------------
n = 4
wave = snapped_frequency(grid, n)
carrier = Field.from_physical(grid, np.cos(wave * grid.x))
print(f"\ncarrier at k = {wave:.3f} (~ 17/12 * 2^{n}):")
for j in range(-1, partition.j_max + 1):
    size = lp_norm(lp_block(carrier, j, partition), 2)
    marker = "  <-- all of it" if size > 1e-6 else ""
    print(f"  block {j:+d}: L2 = {size:.3e}{marker}")

# --- Besov norms: single-block fields are weighted L^p norms ---------------
params = BesovParams(2.0, 2.0, 2.0)
for s in (0.5, 1.0, 2.0):
    val = besov_norm(carrier, params.at(s), partition)
    print(f"||carrier||_B^{s:.1f} = {val:.6f} "
          f"(= 2^({n}*{s:.1f}) * L2 = {2**(n*s) * lp_norm(carrier, 2):.6f})")

# --- Bernstein: differentiation costs at most 8/3 * 2^j per block ----------
rng = np.random.default_rng(11)
coeffs = np.zeros(grid.n_points, dtype=complex)
band = np.abs(grid.wavenumbers) <= 0.9 * partition.covered_top
coeffs[band] = rng.standard_normal(band.sum()) + 1j * rng.standard_normal(band.sum())
half = np.arange(1, grid.n_points // 2)
coeffs[grid.n_points - half] = np.conj(coeffs[half])
coeffs[0] = coeffs[0].real
coeffs[grid.nyquist] = coeffs[grid.nyquist].real
f = Field(grid, spectral=coeffs)

from novikov2c import derivative  # noqa: E402

print("\nBernstein ratios ||d block||_2 / ||block||_2 vs bound 8/3 * 2^j:")
for j in range(0, partition.j_max + 1):
    blk = lp_block(f, j, partition)
    ratio = lp_norm(derivative(blk), 2) / lp_norm(blk, 2)
    print(f"  j={j}: {ratio:9.3f}  bound {8 / 3 * 2**j:9.3f}")
