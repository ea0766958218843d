"""Green kernels of a channel and the rank-one shell correction.

The free kernel of ``h - E`` is

.. math:: g_0(r, r') = -\\frac{F(r_<)\\, G(r_>)}{W(E)},

normalised so that ``(h - E) g_0 = delta(r - r')`` (derivative jump ``-1`` at
``r = r'``).  With the Krein vector ``chi = -P / W`` built from
:func:`~landau_shell.channel.psi_vector` the shell resolvent is

.. math:: g(r, r') = g_0(r, r') + \\mu(E)\\, \\chi(r) \\chi(r'),

with ``mu = -c W / S`` for the delta shell and ``mu = c W / S`` for the
delta-prime shell, ``S`` the secular function.  The poles of ``mu`` are the
eigenvalues; the up and down components never mix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .channel import (
    ChannelParams,
    InteractionKind,
    SpinBranch,
    boundary_data,
    eval_f,
    eval_g,
    psi_vector,
    wronskian,
)
from .spectral import InteractionSpec

__all__ = [
    "SingularEnergyError",
    "GridTooCoarseWarning",
    "GreenEvaluation",
    "KreinCoefficients",
    "green_free",
    "channel_mu",
    "mu_coeffs",
    "krein_vector",
    "green_perturbed",
    "green_samples",
    "apply_resolvent",
]


class SingularEnergyError(ArithmeticError):
    """``E`` is a pole of the requested kernel (Landau level or secular root)."""


class GridTooCoarseWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class GreenEvaluation:
    energy: float
    r: float
    r_prime: float
    value: float
    component: SpinBranch


@dataclass(frozen=True)
class KreinCoefficients:
    """Diagonal Krein coefficients; the off-diagonal ones vanish identically."""

    mu_11: float
    mu_22: float

    @property
    def mu_12(self) -> float:
        return 0.0

    @property
    def mu_21(self) -> float:
        return 0.0

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.mu_11, 0.0], [0.0, self.mu_22]])


def _free_wronskian(E, ch):
    W = wronskian(E, ch)
    if W == 0.0:
        raise SingularEnergyError(f"E={E!r} is a Landau level of channel {ch}")
    return W


def green_free(E: float, r: float, r_prime: float, ch: ChannelParams) -> float:
    """``-F(min(r, r')) G(max(r, r')) / W(E)``."""
    W = _free_wronskian(E, ch)
    lo, hi = (r, r_prime) if r <= r_prime else (r_prime, r)
    return -eval_f(E, lo, ch).value * eval_g(E, hi, ch).value / W


def channel_mu(E: float, ch: ChannelParams, spec: InteractionSpec) -> float:
    """Krein coefficient of one channel; zero when its coupling vanishes.

    Computed from the ratio ``W / S`` of boundary data, so it stays finite
    below the lowest Landau level where ``W`` and ``S`` both underflow.
    """
    c = spec.coupling(ch)
    if c == 0.0:
        return 0.0
    bd = boundary_data(E, spec.radius, ch)
    if spec.kind is InteractionKind.DELTA:
        S = bd.wronskian - c * bd.fg
        sign = -1.0
    else:
        S = bd.wronskian + c * bd.fpgp
        sign = 1.0
    if S == 0.0:
        raise SingularEnergyError(f"E={E!r} is a secular root of channel {ch}")
    return sign * c * bd.wronskian / S


def mu_coeffs(E: float, ch_up: ChannelParams, ch_down: ChannelParams,
              spec: InteractionSpec) -> KreinCoefficients:
    """``mu_11`` from the up channel (coupling ``alpha_m``), ``mu_22`` from the down one."""
    if ch_up.spin_branch is not SpinBranch.UP or ch_down.spin_branch is not SpinBranch.DOWN:
        raise ValueError("mu_coeffs expects an (up, down) channel pair")
    return KreinCoefficients(channel_mu(E, ch_up, spec), channel_mu(E, ch_down, spec))


def krein_vector(E: float, r: float, ch: ChannelParams, spec: InteractionSpec) -> float:
    """``chi(r) = -P(r) / W``: the free kernel (or its source derivative) pinned at ``R``."""
    W = _free_wronskian(E, ch)
    return -psi_vector(E, r, spec.radius, ch, spec.kind) / W


def green_perturbed(E: float, r: float, r_prime: float, ch: ChannelParams,
                    spec: InteractionSpec, other_ch: ChannelParams | None = None) -> float:
    """Kernel of the shell resolvent in the component of ``ch``.

    ``other_ch`` is the partner channel of the opposite spin.  It is accepted
    for symmetry with :func:`mu_coeffs` and validated, but cannot change
    the value because the coefficient matrix is diagonal.
    """
    if other_ch is not None and other_ch.spin_branch is ch.spin_branch:
        raise ValueError("other_ch must belong to the opposite spin component")
    g0 = green_free(E, r, r_prime, ch)
    mu = channel_mu(E, ch, spec)
    if mu == 0.0:
        return g0
    return g0 + mu * krein_vector(E, r, ch, spec) * krein_vector(E, r_prime, ch, spec)


def green_samples(E: float, r_values, r_prime_values, ch: ChannelParams,
                  spec: InteractionSpec) -> list[GreenEvaluation]:
    """Perturbed kernel on the tensor grid, ``r`` varying slowest."""
    out = []
    for r in r_values:
        for rp in r_prime_values:
            value = green_perturbed(E, float(r), float(rp), ch, spec)
            out.append(GreenEvaluation(E, float(r), float(rp), value, ch.spin_branch))
    return out


def _resolvent_on_grid(r, phi, Fv, Gv, chi, mu, W, jump=None):
    # -[G(r) int_0^r F phi + F(r) int_r^inf G phi] / W  +  mu chi(r) <chi, phi>
    h = r[1] - r[0]
    inner = cumulative_trapezoid(Fv * phi, dx=h, initial=0.0)
    outer = cumulative_trapezoid((Gv * phi)[::-1], dx=h, initial=0.0)[::-1]
    u = -(Gv * inner + Fv * outer) / W
    if mu != 0.0:
        weights = chi
        if jump is not None:
            # chi jumps at R; on a node the trapezoid rule wants the mean value
            R, mean = jump
            on_node = np.abs(r - R) <= 1e-9 * R
            if on_node.any():
                weights = np.where(on_node, mean, chi)
        u = u + mu * chi * trapezoid(weights * phi, dx=h)
    return u


def apply_resolvent(E: float, r_grid, samples, ch: ChannelParams, spec: InteractionSpec,
                    tol: float = 1e-4) -> np.ndarray:
    """Image of ``samples`` under the shell resolvent, by composite trapezoid quadrature.

    Parameters
    ----------
    E : float
        Energy in the resolvent set.
    r_grid : array_like
        Uniform grid in ``(0, inf)`` covering the support of the input.
    samples : array_like
        Function values on ``r_grid``.
    tol : float
        Threshold for the Richardson self-estimate (grid ``h`` against
        ``2h``, relative to the sup-norm of the result); exceeding it raises
        a :class:`GridTooCoarseWarning`.

    Returns
    -------
    numpy.ndarray
        The resolvent image on ``r_grid``.

    Notes
    -----
    Splitting the free kernel at ``r = r'`` turns the quadrature into two
    cumulative integrals, so the cost is linear in the grid size.  The
    trapezoid rule is used rather than Simpson because functions in the
    operator domain (and their images) have a kink or a jump at ``R``;
    Simpson's parabolas straddling it drop to first order, while the
    trapezoid rule with the mean value at the node stays second order.
    """
    r = np.asarray(r_grid, dtype=float)
    phi = np.asarray(samples, dtype=float)
    if r.ndim != 1 or r.shape != phi.shape or r.size < 5:
        raise ValueError("r_grid and samples must be 1-D of equal length >= 5")
    if r[0] <= 0.0:
        raise ValueError("r_grid must lie in (0, inf)")
    steps = np.diff(r)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0) or steps[0] <= 0:
        raise ValueError("r_grid must be uniform and increasing")
    W = _free_wronskian(E, ch)
    mu = channel_mu(E, ch, spec)
    Fv = np.array([eval_f(E, x, ch).value for x in r])
    Gv = np.array([eval_g(E, x, ch).value for x in r])
    chi = jump = None
    if mu != 0.0:
        # same as krein_vector pointwise, reusing the samples of F and G
        R = spec.radius
        fR, gR = eval_f(E, R, ch), eval_g(E, R, ch)
        if spec.kind is InteractionKind.DELTA:
            cf, cg = fR.value, gR.value
        else:
            cf, cg = fR.derivative, gR.derivative
        chi = -np.where(r <= R, cg * Fv, cf * Gv) / W
        if spec.kind is InteractionKind.DELTA_PRIME:
            jump = (R, -0.5 * (cg * fR.value + cf * gR.value) / W)

    u = _resolvent_on_grid(r, phi, Fv, Gv, chi, mu, W, jump)
    if not np.all(np.isfinite(u)):
        raise FloatingPointError(f"non-finite resolvent image in channel {ch}")

    coarse = _resolvent_on_grid(r[::2], phi[::2], Fv[::2], Gv[::2],
                                None if chi is None else chi[::2], mu, W, jump)
    scale = max(float(np.max(np.abs(u))), math.ldexp(1.0, -1000))
    estimate = float(np.max(np.abs(u[::2] - coarse))) / 3.0 / scale
    if estimate > tol:
        warnings.warn(f"resolvent quadrature self-estimate {estimate:.3g} exceeds {tol:.3g}; "
                      "refine the grid", GridTooCoarseWarning, stacklevel=2)
    return u
