"""Initial-data families exhibiting non-uniform dependence.

Everything is derived from a band-limited even profile whose transform equals
1 on |k| <= 1/4 and vanishes beyond 1/2.  For a frequency index n the family
consists of

    high_n = 2^{-ns} profile(x) sin(freq_n x),   freq_n ~ (17/12) 2^n,
    low_n  = 2^{-n/2} profile(x),

the plain pair (2^n high_n, high_n), the perturbed pair
(2^n high_n + low_n, high_n + low_n), and the drift fields

    drift_rho = v0^2 d/dx rho0~,   drift_u = v0^2 d/dx v0,

where (rho0~, v0) is the perturbed pair.  The carrier frequency is snapped to
the nearest lattice wavenumber so the spectral support claims (single dyadic
block for n >= 3, single block of low^2 d(2^n high) for n >= 5) hold exactly
on the grid rather than up to window leakage.

The profile transform is specified directly on the lattice and inverted; the
high-frequency wave is built by exact index shifts of that transform, which
agrees with the pointwise formula to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .besov import smooth_step
from .novikov import StatePair
from .spectral import Field, Grid, cube, derivative, lp_norm, make_grid, multiply

__all__ = [
    "DataFamily",
    "build_profile",
    "snapped_frequency",
    "build_high",
    "build_low",
    "build_family",
    "check_index",
    "riemann_constant",
    "save_family",
    "load_family",
]


@dataclass(frozen=True)
class DataFamily:
    """All fields of one frequency index n at smoothness s."""

    n: int
    s: float
    freq: float          # snapped carrier wavenumber, ~ (17/12) 2^n
    profile: Field
    high: Field          # 2^{-ns} profile sin(freq x)
    low: Field           # 2^{-n/2} profile
    plain: StatePair     # (2^n high, high)
    perturbed: StatePair  # (2^n high + low, high + low)
    drift_rho: Field     # v0^2 d/dx rho0~
    drift_u: Field       # v0^2 d/dx v0

    @property
    def grid(self) -> Grid:
        return self.profile.grid


def build_profile(grid: Grid) -> Field:
    """Band-limited even profile: transform 1 on |k| <= 1/4, 0 beyond 1/2.

    Requires the lattice to resolve the transition band (1/4, 1/2), i.e.
    spacing pi/L <= 1/8.
    """
    spacing = np.pi / grid.half_width
    if spacing > 0.125:
        raise ValueError(
            f"wavenumber spacing {spacing:.4f} > 1/8: the transition band "
            "(1/4, 1/2) of the profile transform is unresolved; "
            "use half_width >= 8*pi"
        )
    abs_k = np.abs(grid.wavenumbers)
    hat = 1.0 - smooth_step((abs_k - 0.25) / 0.25)
    return Field(grid, spectral=hat.astype(np.complex128))


def snapped_frequency(grid: Grid, n: int) -> float:
    """Nearest lattice wavenumber to (17/12) 2^n."""
    nominal = (17.0 / 12.0) * 2.0**n
    m = int(np.rint(nominal * grid.half_width / np.pi))
    return m * np.pi / grid.half_width


def check_index(grid: Grid, n: int) -> float:
    """Validate the frequency index against the grid; return the snapped freq.

    n >= 3 guarantees the modulated wave occupies a single dyadic block;
    freq + 1/2 <= k_max/3 leaves cubic dealiasing headroom.
    """
    if int(n) != n or n < 3:
        raise ValueError(f"frequency index must be an integer >= 3, got {n!r}")
    freq = snapped_frequency(grid, n)
    if freq + 0.5 > grid.k_max / 3.0:
        raise ValueError(
            f"index n = {n} puts the carrier at {freq:.1f}, beyond the cubic "
            f"dealiasing headroom k_max/3 = {grid.k_max / 3.0:.1f}"
        )
    return freq


def build_high(grid: Grid, n: int, s: float, profile: Field | None = None) -> Field:
    """High-frequency wave 2^{-ns} profile(x) sin(freq_n x).

    Built by exact index shifts of the profile transform so the spectral
    support is lattice-exact: supp ^ {| |k| - freq_n | <= 1/2}.
    """
    freq = check_index(grid, n)
    if profile is None:
        profile = build_profile(grid)
    m = int(np.rint(freq * grid.half_width / np.pi))
    hat = profile.spectral
    shifted = (np.roll(hat, m) - np.roll(hat, -m)) * (-0.5j)
    return Field(grid, spectral=2.0 ** (-n * s) * shifted)


def build_low(grid: Grid, n: int, profile: Field | None = None) -> Field:
    """Low-frequency bump 2^{-n/2} profile(x)."""
    check_index(grid, n)
    if profile is None:
        profile = build_profile(grid)
    return 2.0 ** (-n / 2.0) * profile


def build_family(grid: Grid, n: int, s: float) -> DataFamily:
    """Assemble profile, waves, both initial pairs, and the drift fields."""
    freq = check_index(grid, n)
    profile = build_profile(grid)
    high = build_high(grid, n, s, profile)
    low = build_low(grid, n, profile)

    rho_plain = 2.0**n * high
    plain = StatePair(rho=rho_plain, u=high)
    rho_pert = rho_plain + low
    v0 = high + low
    perturbed = StatePair(rho=rho_pert, u=v0)

    v0_sq = multiply(v0, v0)
    drift_rho = multiply(v0_sq, derivative(rho_pert))
    drift_u = multiply(v0_sq, derivative(v0))
    return DataFamily(n=int(n), s=float(s), freq=freq, profile=profile,
                      high=high, low=low, plain=plain, perturbed=perturbed,
                      drift_rho=drift_rho, drift_u=drift_u)


def riemann_constant(p: float, profile: Field) -> float:
    """(17/12) (mean of |cos|^p over a period)^{1/p} * ||profile^3||_p.

    The mean is evaluated with adaptive quadrature; the profile cube with the
    grid's dealiased product.  This constant is the n -> infinity limit of
    ||low_n^2 d(2^n high_n)||_{B^{s-1}} and sets the divergence rate.
    """
    p = float(p)
    if not (1.0 <= p < np.inf):
        raise ValueError(f"p must lie in [1, inf), got {p}")
    integral, _ = quad(lambda t: np.abs(np.cos(t)) ** p, 0.0, 2.0 * np.pi,
                       limit=200)
    cos_mean = (integral / (2.0 * np.pi)) ** (1.0 / p)
    return (17.0 / 12.0) * cos_mean * lp_norm(cube(profile), p)


def save_family(family: DataFamily, path) -> None:
    """Binary snapshot: grid header plus raw physical samples (.npz)."""
    grid = family.grid
    np.savez(
        path,
        n=family.n,
        s=family.s,
        freq=family.freq,
        n_points=grid.n_points,
        half_width=grid.half_width,
        profile=family.profile.physical,
        high=family.high.physical,
        low=family.low.physical,
        rho_plain=family.plain.rho.physical,
        u_plain=family.plain.u.physical,
        rho_pert=family.perturbed.rho.physical,
        u_pert=family.perturbed.u.physical,
        drift_rho=family.drift_rho.physical,
        drift_u=family.drift_u.physical,
    )


def load_family(path) -> DataFamily:
    """Rebuild a DataFamily from a snapshot written by :func:`save_family`."""
    with np.load(path, allow_pickle=False) as data:
        grid = make_grid(int(data["n_points"]), float(data["half_width"]))

        def f(key):
            return Field.from_physical(grid, data[key])

        return DataFamily(
            n=int(data["n"]),
            s=float(data["s"]),
            freq=float(data["freq"]),
            profile=f("profile"),
            high=f("high"),
            low=f("low"),
            plain=StatePair(rho=f("rho_plain"), u=f("u_plain")),
            perturbed=StatePair(rho=f("rho_pert"), u=f("u_pert")),
            drift_rho=f("drift_rho"),
            drift_u=f("drift_u"),
        )
