"""The initial-data families behind the non-uniform-dependence experiment.

For each frequency index n the family pairs a high-frequency wave (amplitude
2^{-ns}, carrier ~ (17/12) 2^n) with a small low-frequency bump (2^{-n/2}).
The two initial pairs merge in B^{s-1} x B^s as n grows, yet the drift field
of the perturbed pair keeps an order-one Besov norm -- the seed of the
linear-in-time solution separation.
"""


from novikov2c import (
    BesovParams,
    besov_norm,
    build_family,
    build_partition,
    derivative,
    make_grid,
    multiply,
    pair_norm,
    riemann_constant,
)

grid = make_grid(2**14, 50.0)
partition = build_partition(grid)
params = BesovParams(2.0, 2.0, 2.0)
sm1 = params.at(1.0)

print(f"{'n':>2} {'pair gap':>12} {'pair plain':>12} {'pair pert':>12} "
      f"{'drift_rho':>12} {'drift_u':>12}")
for n in (4, 5, 6):
    fam = build_family(grid, n, 2.0)
    gap = (besov_norm(fam.low, sm1, partition)
           + besov_norm(fam.low, params, partition))
    print(f"{n:>2} {gap:12.3e} {pair_norm(fam.plain, params, partition):12.4f} "
          f"{pair_norm(fam.perturbed, params, partition):12.4f} "
          f"{besov_norm(fam.drift_rho, sm1, partition):12.3e} "
          f"{besov_norm(fam.drift_u, sm1, partition):12.3e}")

print("\nthe gap halves in norm per two steps of n (slope -1/2), while the")
print("rho drift norm is n-independent, pinned near the oscillation constant")
print("below -- that mismatch is what keeps the solutions apart.")

# --- the main term of the drift approaches the oscillation constant --------
fam6 = build_family(grid, 6, 2.0)
rc = riemann_constant(2.0, fam6.profile)
print(f"\noscillation constant (p=2): {rc:.6e}")
for n in (4, 5, 6):
    fam = build_family(grid, n, 2.0)
    main = multiply(multiply(fam.low, fam.low), derivative(2.0**n * fam.high))
    val = besov_norm(main, sm1, partition)
    print(f"  ||low^2 d(2^{n} high)||_B1 = {val:.6e}  "
          f"(dev {abs(val - rc) / rc:.2%})")
