"""Periodic pseudospectral substrate.

Grids on [-L, L), real fields with cached physical/spectral views, Fourier
multipliers, spectral derivatives, Helmholtz inverses, and dealiased pointwise
products.  The transform convention is

    u_hat(k) = sum_x u(x) exp(-i k x) dx,      k = (pi/L) m,  m = -N/2..N/2-1,

so that Parseval reads  sum |u(x)|^2 dx = (1/2L) sum_k |u_hat(k)|^2 and a pure
mode cos(k0 x) has coefficients u_hat(+-k0) = L.  Coefficients are stored in
FFT order.

All fields are immutable values; every operation returns a new Field.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "BandwidthWarning",
    "make_grid",
    "apply_multiplier",
    "derivative",
    "helmholtz_inverse",
    "helmholtz_dx",
    "multiply",
    "cube",
    "lp_norm",
]

_HERMITIAN_TOL = 1e-10


class BandwidthWarning(UserWarning):
    """Factor spectra wide enough that a product can alias into kept modes."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L, L) with its wavenumber lattice."""

    n_points: int
    half_width: float
    dx: float
    x: np.ndarray = field(compare=False, repr=False)
    wavenumbers: np.ndarray = field(compare=False, repr=False)  # FFT order
    mode: np.ndarray = field(compare=False, repr=False)  # integer m per entry
    k_max: float = 0.0

    @property
    def phase(self) -> np.ndarray:
        """(-1)^m per coefficient, mapping FFT indexing to x-centred indexing."""
        return self._phase

    @property
    def dealias_mask(self) -> np.ndarray:
        """Boolean keep-mask of the 1/2 dealiasing rule (|k| <= k_max/2)."""
        return self._dealias_mask

    @property
    def nyquist(self) -> np.ndarray:
        """Boolean mask selecting the unpaired m = -N/2 mode."""
        return self._nyquist


def make_grid(n_points: int, half_width: float) -> Grid:
    """Build a Grid with n_points samples on [-half_width, half_width).

    n_points must be a power of two >= 16; half_width must be positive.
    """
    n = int(n_points)
    if n != n_points or n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"n_points must be a power of two >= 16, got {n_points!r}")
    length = float(half_width)
    if not np.isfinite(length) or length <= 0:
        raise ValueError(f"half_width must be positive and finite, got {half_width!r}")

    dx = 2.0 * length / n
    x = -length + dx * np.arange(n)
    mode = np.rint(np.fft.fftfreq(n) * n).astype(np.int64)
    wavenumbers = mode * (np.pi / length)
    k_max = np.pi * n / (2.0 * length)

    for arr in (x, wavenumbers, mode):
        arr.flags.writeable = False
    grid = Grid(n_points=n, half_width=length, dx=dx, x=x,
                wavenumbers=wavenumbers, mode=mode, k_max=k_max)
    phase = np.where(mode % 2 == 0, 1.0, -1.0)
    dealias = np.abs(wavenumbers) <= k_max / 2.0
    nyquist = mode == -(n // 2)
    for arr in (phase, dealias, nyquist):
        arr.flags.writeable = False
    object.__setattr__(grid, "_phase", phase)
    object.__setattr__(grid, "_dealias_mask", dealias)
    object.__setattr__(grid, "_nyquist", nyquist)
    return grid


class Field:
    """Real-valued function on a Grid with lazily linked physical/spectral views.

    Instances are immutable; combine with +, -, unary -, or scalar *.
    Pointwise products must go through :func:`multiply` so the dealiasing rule
    is always applied.
    """

    __slots__ = ("grid", "_physical", "_spectral", "_check_imag")

    def __init__(self, grid: Grid, physical=None, spectral=None, check=False):
        if physical is None and spectral is None:
            raise ValueError("Field needs a physical or a spectral view")
        for arr in (physical, spectral):
            if arr is not None and arr.flags.writeable:
                arr.flags.writeable = False
        self.grid = grid
        self._physical = physical
        self._spectral = spectral
        self._check_imag = check

    @classmethod
    def from_physical(cls, grid: Grid, values) -> "Field":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n_points,):
            raise ValueError(f"expected shape ({grid.n_points},), got {values.shape}")
        values = values.copy()
        values.flags.writeable = False
        return cls(grid, physical=values)

    @classmethod
    def from_spectral(cls, grid: Grid, coeffs) -> "Field":
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.n_points,):
            raise ValueError(f"expected shape ({grid.n_points},), got {coeffs.shape}")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        return cls(grid, spectral=coeffs, check=True)

    @property
    def physical(self) -> np.ndarray:
        if self._physical is None:
            g = self.grid
            w = np.fft.ifft(self._spectral * g.phase) / g.dx
            if self._check_imag:
                res = float(np.max(np.abs(w.imag)))
                scale = float(np.max(np.abs(w.real)))
                if res > _HERMITIAN_TOL * max(scale, res):
                    raise ValueError(
                        "spectral coefficients are not Hermitian-symmetric "
                        f"(imaginary residue {res:.3e} vs field scale {scale:.3e})"
                    )
            out = np.ascontiguousarray(w.real)
            out.flags.writeable = False
            self._physical = out
        return self._physical

    @property
    def spectral(self) -> np.ndarray:
        if self._spectral is None:
            g = self.grid
            out = g.dx * g.phase * np.fft.fft(self._physical)
            out.flags.writeable = False
            self._spectral = out
        return self._spectral

    def _binary(self, other: "Field", op) -> "Field":
        if not isinstance(other, Field):
            return NotImplemented
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")
        if self._spectral is not None and other._spectral is not None:
            return Field(self.grid, spectral=op(self._spectral, other._spectral))
        return Field(self.grid, physical=op(self.physical, other.physical))

    # combinations of valid fields stay Hermitian by construction, so the
    # imaginary-residue check is only armed by from_spectral

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, c):
        if isinstance(c, Field):
            raise TypeError("use multiply(f, g) for pointwise products")
        c = float(c)
        phys = None if self._physical is None else c * self._physical
        spec = None if self._spectral is None else c * self._spectral
        return Field(self.grid, physical=phys, spectral=spec)

    __rmul__ = __mul__

    def bandwidth(self, rel_floor: float = 1e-13) -> float:
        """Largest |k| carrying a coefficient above rel_floor * max coefficient."""
        coeffs = np.abs(self.spectral)
        top = float(coeffs.max())
        if top == 0.0:
            return 0.0
        if not np.isfinite(top):
            return self.grid.k_max
        live = coeffs > rel_floor * top
        return float(np.max(np.abs(self.grid.wavenumbers[live])))


def apply_multiplier(f: Field, symbol) -> Field:
    """Apply a Fourier multiplier given as callable k -> value or as an array.

    The symbol must be finite on the lattice and Hermitian
    (symbol(-k) == conj(symbol(k))) so the output is real.  The unpaired
    Nyquist mode keeps only the real part of the symbol; odd symbols are
    ill-defined there.
    """
    g = f.grid
    sym = np.asarray(symbol(g.wavenumbers) if callable(symbol) else symbol,
                     dtype=np.complex128)
    if sym.shape != (g.n_points,):
        raise ValueError(f"symbol must have shape ({g.n_points},), got {sym.shape}")
    if not np.all(np.isfinite(sym)):
        raise ValueError("symbol is not finite at every lattice wavenumber")

    scale = float(np.max(np.abs(sym))) + 1e-300
    n = g.n_points
    idx = np.arange(1, n // 2)
    mirror = sym[n - idx]  # coefficients at -k for k = wavenumbers[idx]
    dev = float(np.max(np.abs(mirror - np.conj(sym[idx])))) if idx.size else 0.0
    dev = max(dev, abs(float(sym[0].imag)))
    if dev > _HERMITIAN_TOL * scale:
        raise ValueError(
            f"symbol is not Hermitian (deviation {dev:.3e} vs scale {scale:.3e}); "
            "output would not be real"
        )
    sym = sym.copy()
    sym[g.nyquist] = sym[g.nyquist].real
    return Field(g, spectral=f.spectral * sym)


def derivative(f: Field) -> Field:
    """Spectral d/dx with the Nyquist mode zeroed."""
    g = f.grid
    out = f.spectral * (1j * g.wavenumbers)
    out[g.nyquist] = 0.0
    return Field(g, spectral=out)


def helmholtz_inverse(f: Field) -> Field:
    """(1 - d^2/dx^2)^{-1} f, realized by the symbol 1/(1+k^2)."""
    g = f.grid
    return Field(g, spectral=f.spectral / (1.0 + g.wavenumbers**2))


def helmholtz_dx(f: Field) -> Field:
    """d/dx (1 - d^2/dx^2)^{-1} f, symbol ik/(1+k^2), Nyquist zeroed."""
    g = f.grid
    out = f.spectral * (1j * g.wavenumbers / (1.0 + g.wavenumbers**2))
    out[g.nyquist] = 0.0
    return Field(g, spectral=out)


def multiply(f: Field, g: Field) -> Field:
    """Dealiased pointwise product.

    The product is formed in physical space and then truncated by the 1/2
    rule (all modes with |k| > k_max/2 zeroed), which removes cubic aliasing
    for factors within the safe band |k| <= k_max/3.  A BandwidthWarning is
    issued when the combined factor bandwidth exceeds (3/2) k_max, the point
    at which aliases can reach the kept modes.
    """
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    grid = f.grid
    if f.bandwidth() + g.bandwidth() > 1.5 * grid.k_max:
        warnings.warn(
            "combined factor bandwidth exceeds (3/2) k_max; product aliases "
            "can contaminate modes kept by the 1/2 dealiasing rule",
            BandwidthWarning,
            stacklevel=2,
        )
    prod = f.physical * g.physical
    coeffs = grid.dx * grid.phase * np.fft.fft(prod)
    coeffs[~grid.dealias_mask] = 0.0
    return Field(grid, spectral=coeffs)


def cube(f: Field) -> Field:
    """f^3 via two dealiased products."""
    return multiply(multiply(f, f), f)


def lp_norm(f: Field, p: float) -> float:
    """Rectangle-rule L^p norm; p = inf gives the max of |samples|."""
    if p == np.inf:
        return float(np.max(np.abs(f.physical)))
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    vals = np.abs(f.physical)
    return float(np.sum(vals**p) * f.grid.dx) ** (1.0 / p)
