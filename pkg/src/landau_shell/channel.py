"""One radial spin channel of the Landau operator.

After separating angles and removing the weight ``r`` from the measure, each
angular momentum ``m`` and spin branch gives a half-line operator

.. math:: h = -\\frac{d^2}{dr^2} + \\left(\\frac{m}{r} + \\frac{B r}{2}\\right)^2
          - \\frac{1}{4 r^2} + s, \\qquad s = \\pm B,

with ``s = +B`` for spin up and ``s = -B`` for spin down.  Its solutions at
energy ``E`` are built from confluent hypergeometric functions of
``x = B r^2 / 2``:

* ``F = r^(1/2+|m|) e^(-B r^2/4) M(a, |m|+1, x)``, regular at the origin,
* ``G = r^(1/2+|m|) e^(-B r^2/4) U(a, |m|+1, x)``, decaying at infinity,

with ``a = (|m| + m + 1 - (E - s)/B) / 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import hyperfun as hf

_EPS = 2.0**-52

__all__ = [
    "SpinBranch",
    "InteractionKind",
    "ChannelParams",
    "SolutionSample",
    "BoundaryData",
    "kummer_a",
    "radial_potential",
    "eval_f",
    "eval_g",
    "second_derivatives",
    "wronskian",
    "wronskian_numeric",
    "landau_levels",
    "psi_vector",
    "boundary_data",
]


class SpinBranch(str, enum.Enum):
    UP = "up"
    DOWN = "down"


class InteractionKind(str, enum.Enum):
    DELTA = "delta"
    DELTA_PRIME = "delta_prime"


@dataclass(frozen=True)
class ChannelParams:
    """Field strength, angular quantum number and spin branch of a channel."""

    field_strength: float
    angular: int
    spin_branch: SpinBranch = SpinBranch.UP

    def __post_init__(self):
        B = self.field_strength
        if not (isinstance(B, (int, float)) and math.isfinite(B) and B > 0):
            raise ValueError(f"field_strength must be finite and > 0, got {B!r}")
        if int(self.angular) != self.angular:
            raise ValueError(f"angular must be an integer, got {self.angular!r}")
        object.__setattr__(self, "field_strength", float(B))
        object.__setattr__(self, "angular", int(self.angular))
        object.__setattr__(self, "spin_branch", SpinBranch(self.spin_branch))

    @property
    def spin_shift(self) -> float:
        return self.field_strength if self.spin_branch is SpinBranch.UP else -self.field_strength

    @property
    def kummer_b(self) -> int:
        return abs(self.angular) + 1

    @property
    def power(self) -> float:
        return 0.5 + abs(self.angular)

    def __str__(self):
        return f"(B={self.field_strength:g}, m={self.angular}, {self.spin_branch.value})"


@dataclass(frozen=True)
class SolutionSample:
    """Value and ``d/dr`` derivative of a radial solution at ``r``."""

    r: float
    value: float
    derivative: float


def kummer_a(E: float, ch: ChannelParams) -> float:
    """First Kummer parameter ``a = (|m| + m + 1 - (E - s)/B) / 2``.

    Values within a few rounding errors of an integer are snapped to it, so
    that the Landau levels produced by :func:`landau_levels` give ``a = -n``
    (and ``W = 0``) exactly for any ``B``.
    """
    m = ch.angular
    q = (E - ch.spin_shift) / ch.field_strength
    a = 0.5 * (abs(m) + m + 1 - q)
    k = round(a)
    if abs(a - k) <= 8.0 * _EPS * max(1.0, abs(q), abs(E / ch.field_strength)):
        return float(k)
    return a


def radial_potential(r, ch: ChannelParams):
    """``(m/r + B r/2)^2 - 1/(4 r^2) + s``; works on scalars and arrays."""
    m, B = ch.angular, ch.field_strength
    return (m / r + 0.5 * B * r) ** 2 - 0.25 / r**2 + ch.spin_shift


def _prefactor(r: float, ch: ChannelParams):
    # phi = r^p e^{-B r^2/4}, log-derivative phi'/phi, and x = B r^2/2
    B, p = ch.field_strength, ch.power
    phi = r**p * math.exp(-0.25 * B * r * r)
    dlog = p / r - 0.5 * B * r
    return phi, dlog, 0.5 * B * r * r


def _check_r(r):
    if not (math.isfinite(r) and r > 0):
        raise ValueError(f"radius must be finite and > 0, got {r!r}")


def eval_f(E: float, r: float, ch: ChannelParams) -> SolutionSample:
    """Regular solution ``F`` and its derivative at ``r``."""
    _check_r(r)
    a, b = kummer_a(E, ch), ch.kummer_b
    phi, dlog, x = _prefactor(r, ch)
    M = hf.kummer_m(a, b, x)
    dM = hf.kummer_m_dx(a, b, x)
    value = phi * M
    return SolutionSample(r, value, phi * (dlog * M + ch.field_strength * r * dM))


def eval_g(E: float, r: float, ch: ChannelParams) -> SolutionSample:
    """Decaying solution ``G`` and its derivative at ``r``."""
    _check_r(r)
    a, b = kummer_a(E, ch), ch.kummer_b
    phi, dlog, x = _prefactor(r, ch)
    U = hf.tricomi_u(a, b, x)
    dU = hf.tricomi_u_dx(a, b, x)
    return SolutionSample(r, phi * U, phi * (dlog * U + ch.field_strength * r * dU))


def second_derivatives(E: float, r: float, ch: ChannelParams) -> tuple[float, float]:
    """``(F'', G'')`` at ``r`` from the contiguous derivative identities.

    The ODE is not used here, so these can be fed back into it as a check.
    """
    _check_r(r)
    a, b = kummer_a(E, ch), ch.kummer_b
    B, p = ch.field_strength, ch.power
    phi, dlog, x = _prefactor(r, ch)
    # (phi'' / phi) for phi = r^p exp(-B r^2 / 4)
    d2log = dlog * dlog - p / r**2 - 0.5 * B
    dx, d2x = B * r, B

    def combine(y, dy, d2y):
        return phi * (d2log * y + 2.0 * dlog * dx * dy + dx * dx * d2y + d2x * dy)

    f2 = combine(hf.kummer_m(a, b, x), hf.kummer_m_dx(a, b, x), hf.kummer_m_dxx(a, b, x))
    g2 = combine(hf.tricomi_u(a, b, x), hf.tricomi_u_dx(a, b, x), hf.tricomi_u_dxx(a, b, x))
    return f2, g2


def wronskian(E: float, ch: ChannelParams) -> float:
    """``W(E) = F G' - F' G``, independent of ``r``.

    Closed form ``W = -2 (B/2)^(-|m|) |m|! / Gamma(a)``, which follows from
    ``W{M, U}(x) = -Gamma(b) / Gamma(a) x^(-b) e^x``.  It vanishes exactly at
    the Landau levels.
    """
    mabs = abs(ch.angular)
    return -2.0 * (0.5 * ch.field_strength) ** (-mabs) * math.factorial(mabs) * hf.reciprocal_gamma(
        kummer_a(E, ch)
    )


def wronskian_numeric(E: float, r: float, ch: ChannelParams) -> float:
    """``F G' - F' G`` evaluated from the solutions at a given ``r``."""
    f, g = eval_f(E, r, ch), eval_g(E, r, ch)
    return f.value * g.derivative - f.derivative * g.value


def landau_levels(ch: ChannelParams, e_max: float) -> list[float]:
    """Unperturbed eigenvalues ``B (2n + |m| + m + 1) + s <= e_max``, ascending."""
    if not math.isfinite(e_max):
        raise ValueError("e_max must be finite")
    B, m = ch.field_strength, ch.angular
    base = B * (abs(m) + m + 1) + ch.spin_shift
    levels = []
    n = 0
    while base + 2.0 * B * n <= e_max:
        levels.append(base + 2.0 * B * n)
        n += 1
    return levels


def psi_vector(E: float, r: float, radius: float, ch: ChannelParams,
               kind: InteractionKind = InteractionKind.DELTA) -> float:
    """Unnormalised Krein vector of the shell at ``radius``.

    ``delta``: ``G(R) F(r)`` for ``r <= R`` and ``F(R) G(r)`` for ``r >= R``.
    ``delta_prime``: the same with ``G'(R)``, ``F'(R)`` as the coefficients.
    Both are the (scaled) Green kernel, resp. its source derivative, with one
    leg pinned at ``R``.
    """
    _check_r(r)
    _check_r(radius)
    kind = InteractionKind(kind)
    if r <= radius:
        coeff = eval_g(E, radius, ch)
        part = eval_f(E, r, ch)
    else:
        coeff = eval_f(E, radius, ch)
        part = eval_g(E, r, ch)
    c = coeff.value if kind is InteractionKind.DELTA else coeff.derivative
    return c * part.value


@dataclass(frozen=True)
class BoundaryData:
    """Wronskian and shell products at ``r = R``, up to a common positive factor.

    ``scaled`` is True when all three fields carry the factor ``Gamma(a)``
    (used for ``a >= 1``, i.e. below the lowest Landau level, where ``W`` and
    the products underflow together).  Signs are unaffected either way.
    """

    wronskian: float
    fg: float
    fpgp: float
    scaled: bool


def boundary_data(E: float, radius: float, ch: ChannelParams) -> BoundaryData:
    """``W``, ``F(R) G(R)`` and ``F'(R) G'(R)`` in an overflow-safe form."""
    _check_r(radius)
    a = kummer_a(E, ch)
    if a < 1.0:
        f, g = eval_f(E, radius, ch), eval_g(E, radius, ch)
        return BoundaryData(wronskian(E, ch), f.value * g.value, f.derivative * g.derivative, False)

    # everything times Gamma(a); assembled in logs since M ~ exp(2 sqrt(a x))
    # and Gamma(a) U ~ exp(-2 sqrt(a x)) cancel
    b, B, mabs = ch.kummer_b, ch.field_strength, abs(ch.angular)
    r = radius
    _, dlog, x = _prefactor(r, ch)
    log_phi2 = 2.0 * ch.power * math.log(r) - 0.5 * B * r * r
    lm0 = hf.log_kummer_m(a, b, x)
    lm1 = hf.log_kummer_m(a + 1.0, b + 1, x)
    lu0 = hf.log_gamma_tricomi_u(a, b, x)
    lu1 = hf.log_gamma_tricomi_u(a + 1.0, b + 1, x)
    base = math.exp(log_phi2 + lm0 + lu0)
    # F'/(phi M) and (Gamma(a) G)'/(phi Gamma(a) U)
    f_ratio = dlog + B * r * (a / b) * math.exp(lm1 - lm0)
    g_ratio = dlog - B * r * math.exp(lu1 - lu0)
    w_scaled = -2.0 * (0.5 * B) ** (-mabs) * math.factorial(mabs)
    return BoundaryData(w_scaled, base, base * f_ratio * g_ratio, True)
