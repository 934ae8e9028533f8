"""Right-hand side of the two-component Novikov system in nonlocal form.

The system integrated is

    rho_t = u^2 rho_x + rho u u_x,
    u_t   = u^2 u_x + P1(u) + P2(u) + P3(u) + R1(u, rho) + R2(u, rho),

with the nonlocal operators (H = (1 - d^2/dx^2)^{-1})

    P1(u) = d/dx H(u^3)              P2(u) = (3/2) d/dx H(u u_x^2)
    P3(u) = (1/2) H(u_x^3)           R1(u, rho) = -(1/2) d/dx H(u rho^2)
    R2(u, rho) = -(1/2) H(u_x rho^2).

Setting rho = 0 reduces the system to the scalar Novikov equation for the
momentum m = u - u_xx:  m_t = 3 u_x u m + u^2 m_x.  The momentum-form
residual below measures the discrete consistency of the two formulations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .spectral import (
    Field,
    cube,
    derivative,
    helmholtz_dx,
    helmholtz_inverse,
    lp_norm,
    multiply,
)

__all__ = [
    "StatePair",
    "StateDerivative",
    "p1",
    "p2",
    "p3",
    "r1",
    "r2",
    "rhs",
    "momentum",
    "mform_residual",
]


@dataclass(frozen=True)
class StatePair:
    """The pair (rho, u) evolved by the system; both live on one grid."""

    rho: Field
    u: Field

    def __post_init__(self):
        if self.rho.grid != self.u.grid:
            raise ValueError("rho and u live on different grids")

    @property
    def grid(self):
        return self.u.grid


@dataclass(frozen=True)
class StateDerivative:
    """Time derivative (rho_t, u_t) of a StatePair."""

    rho_dot: Field
    u_dot: Field

    @property
    def grid(self):
        return self.u_dot.grid


def p1(u: Field) -> Field:
    """d/dx (1-d^2)^{-1} (u^3)."""
    return helmholtz_dx(cube(u))


def p2(u: Field) -> Field:
    """(3/2) d/dx (1-d^2)^{-1} (u u_x^2)."""
    ux = derivative(u)
    return 1.5 * helmholtz_dx(multiply(u, multiply(ux, ux)))


def p3(u: Field) -> Field:
    """(1/2) (1-d^2)^{-1} (u_x^3)."""
    ux = derivative(u)
    return 0.5 * helmholtz_inverse(cube(ux))


def r1(u: Field, rho: Field) -> Field:
    """-(1/2) d/dx (1-d^2)^{-1} (u rho^2)."""
    return -0.5 * helmholtz_dx(multiply(u, multiply(rho, rho)))


def r2(u: Field, rho: Field) -> Field:
    """-(1/2) (1-d^2)^{-1} (u_x rho^2)."""
    return -0.5 * helmholtz_inverse(multiply(derivative(u), multiply(rho, rho)))


def rhs(state: StatePair) -> StateDerivative:
    """Evaluate the nonlocal-form right-hand side.

    Shares the derivatives and squares across the five nonlocal terms; each
    term equals its standalone p1/p2/p3/r1/r2 evaluation.
    """
    rho, u = state.rho, state.u
    u_x = derivative(u)
    rho_x = derivative(rho)
    u2 = multiply(u, u)
    ux2 = multiply(u_x, u_x)
    rho2 = multiply(rho, rho)

    rho_dot = multiply(u2, rho_x) + multiply(multiply(rho, u), u_x)

    u_dot = (
        multiply(u2, u_x)
        + helmholtz_dx(multiply(u2, u))                       # P1
        + 1.5 * helmholtz_dx(multiply(u, ux2))                # P2
        + 0.5 * helmholtz_inverse(multiply(ux2, u_x))         # P3
        - 0.5 * helmholtz_dx(multiply(u, rho2))               # R1
        - 0.5 * helmholtz_inverse(multiply(u_x, rho2))        # R2
    )
    return StateDerivative(rho_dot=rho_dot, u_dot=u_dot)


def momentum(u: Field) -> Field:
    """m = u - u_xx, realized by the symbol 1 + k^2."""
    g = u.grid
    return Field(g, spectral=u.spectral * (1.0 + g.wavenumbers**2))


def mform_residual(state: StatePair, state_dot: StateDerivative) -> float:
    """Relative L^2 defect between the nonlocal form and the momentum form.

    Compares momentum(u_t) against 3 u_x u m + u^2 m_x - rho (u rho)_x and
    rho_t against rho_x u^2 + rho u u_x, each normalized by the L^2 size of
    its own left side plus 1e-30; returns the larger of the two defects.
    """
    rho, u = state.rho, state.u
    u_x = derivative(u)
    rho_x = derivative(rho)
    m = momentum(u)
    m_x = derivative(m)

    m_t = momentum(state_dot.u_dot)
    m_rhs = (
        3.0 * multiply(multiply(u_x, u), m)
        + multiply(multiply(u, u), m_x)
        - multiply(rho, derivative(multiply(u, rho)))
    )
    res_u = lp_norm(m_t - m_rhs, 2) / (lp_norm(m_t, 2) + 1e-30)

    rho_rhs = multiply(multiply(rho_x, u), u) + multiply(multiply(rho, u), u_x)
    res_rho = lp_norm(state_dot.rho_dot - rho_rhs, 2) / (
        lp_norm(state_dot.rho_dot, 2) + 1e-30
    )
    return max(res_u, res_rho)
