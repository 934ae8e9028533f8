"""A reduced end-to-end run of the divergence experiment.

Integrates both initial pairs for three frequency indices on a mid-size grid
and prints the story told by the theorem run: initial distances shrink with
n, solution distances grow linearly in t, and the ratio distance/t stays
above the drift constant's scale.  Writes the same CSV/JSON files the CLI
produces (see <out>/theorem.csv afterwards).

Runs in about half a minute; the full-resolution version is
`novikov2c all --out results`.
"""

import tempfile

from novikov2c import ExperimentConfig, run_theorem, write_outputs

config = ExperimentConfig(
    n_points=2**13,
    half_width=50.0,
    n_min=3,
    n_max=5,
    sample_times=(0.0, 0.02, 0.05, 0.1),
    horizon=0.1,
    dt_max=2e-3,
)

result = run_theorem(config)

print("rows of theorem.csv (distance of the two solutions per n, t):\n")
cols = result.table.columns
i_n, i_t = cols.index("n"), cols.index("t")
i_d, i_r = cols.index("dist_rho"), cols.index("ratio_rho")
i_d0 = cols.index("dist0_rho")
print(f"{'n':>2} {'t':>6} {'initial gap':>12} {'dist_rho':>12} {'dist/t':>10}")
for row in result.table.sorted_rows():
    t = row[i_t]
    ratio = f"{row[i_r]:10.4f}" if t > 0 else " " * 10
    print(f"{row[i_n]:>2} {t:6.2f} {row[i_d0]:12.3e} {row[i_d]:12.3e} {ratio}")

print(f"\nRiemann-type constant: {result.fits['riemann_constant']:.4e}")
print("criteria:")
for c in result.criteria:
    print(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: value={c.value:.4g} "
          f"threshold={c.threshold:.4g}")

out = tempfile.mkdtemp(prefix="novikov2c-demo-")
write_outputs(result, config, out)
print(f"\nwrote {out}/theorem.csv and {out}/theorem.json")
