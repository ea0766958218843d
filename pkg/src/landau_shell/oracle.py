"""Reference eigenvalues that do not touch the special functions.

Two independent routes:

* shooting: integrate the radial ODE outward from the Frobenius behaviour at
  the origin and inward from a decaying seed far out, then test the shell
  interface conditions at ``R`` through a 2x2 matching determinant;
* finite differences (delta shell only): a symmetric tridiagonal matrix on a
  cell-centred grid, shell folded into one diagonal entry.

Nothing here imports :mod:`landau_shell.hyperfun`, so agreement with
:mod:`landau_shell.spectral` is evidence rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .channel import ChannelParams, InteractionKind, SolutionSample, radial_potential
from .spectral import InteractionSpec

__all__ = [
    "OracleConfig",
    "OracleError",
    "outward_seed",
    "inward_seed",
    "integrate_radial",
    "oracle_mismatch",
    "oracle_mismatch_batch",
    "oracle_eigenvalues",
    "oracle_green_free",
    "fd_eigenvalues_delta",
]


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    """Numerical settings of the reference solvers.

    ``r_max=None`` picks the smallest radius with ``B r_max^2 / 4 >= 40``
    (Gaussian tail below ``e^-40``), pushed out past the shell if needed.
    """

    r_min: float = 1e-6
    r_max: float | None = None
    rtol: float = 1e-11
    fd_points: int = 4000

    def outer_radius(self, ch: ChannelParams, radius: float) -> float:
        if self.r_max is not None:
            return self.r_max
        return max(math.sqrt(160.0 / ch.field_strength), radius + 4.0 / math.sqrt(ch.field_strength))


def outward_seed(E: float, ch: ChannelParams, r: float) -> SolutionSample:
    """Frobenius start ``u = r^p (1 + c1 r^2)``, ``p = 1/2 + |m|``.

    ``c1 = (m B + s - E) / (4 p + 2)`` from matching the ``r^p`` order.
    """
    m, B = ch.angular, ch.field_strength
    p = 0.5 + abs(m)
    c1 = (m * B + ch.spin_shift - E) / (4.0 * p + 2.0)
    value = r**p * (1.0 + c1 * r * r)
    deriv = p * r ** (p - 1.0) + c1 * (p + 2.0) * r ** (p + 1.0)
    return SolutionSample(r, value, deriv)


def inward_seed(E: float, ch: ChannelParams, r: float) -> SolutionSample:
    """Decaying start ``u ~ r^k e^(-B r^2/4)`` with ``k = (E - s)/B - m - 1/2``."""
    B = ch.field_strength
    k = (E - ch.spin_shift) / B - ch.angular - 0.5
    return SolutionSample(r, 1.0, k / r - 0.5 * B * r)


def _rhs(ch: ChannelParams, E: float):
    def rhs(r, y):
        return [y[1], (radial_potential(r, ch) - E) * y[0]]
    return rhs


def integrate_radial(E: float, ch: ChannelParams, span: tuple[float, float],
                     init: SolutionSample, rtol: float = 1e-11) -> SolutionSample:
    """Integrate ``-u'' + V u = E u`` across ``span`` starting from ``init``.

    The direction follows the order of ``span``.  Raises :class:`OracleError`
    if the integrator gives up (step underflow near ``r = 0`` usually means
    ``r_min`` is too small).
    """
    r0, r1 = map(float, span)
    if r0 <= 0 or r1 <= 0:
        raise ValueError("span must lie in (0, inf)")
    y0 = [init.value, init.derivative]
    scale = max(abs(init.value), abs(init.derivative), 1e-300)
    sol = solve_ivp(_rhs(ch, E), (r0, r1), y0, method="DOP853", rtol=rtol,
                    atol=1e-30 * scale)
    if sol.status != 0:
        raise OracleError(f"integration failed for {ch} at E={E!r}: {sol.message}")
    return SolutionSample(r1, float(sol.y[0, -1]), float(sol.y[1, -1]))


def _matching_pair(E, ch, spec, cfg):
    R = spec.radius
    r_out = cfg.outer_radius(ch, R)
    if not cfg.r_min < R < r_out:
        raise ValueError(f"need r_min < R < r_max, got {cfg.r_min}, {R}, {r_out}")
    left = integrate_radial(E, ch, (cfg.r_min, R), outward_seed(E, ch, cfg.r_min), cfg.rtol)
    right = integrate_radial(E, ch, (r_out, R), inward_seed(E, ch, r_out), cfg.rtol)
    return left, right


def oracle_mismatch(E: float, ch: ChannelParams, spec: InteractionSpec,
                    cfg: OracleConfig | None = None) -> float:
    """Matching determinant at ``R``, normalised to be scale-free.

    With ``uL`` (regular) and ``uR`` (decaying) at ``R`` and coupling ``c``:

    * delta: ``uL uR' - uL' uR - c uL uR``
    * delta-prime: ``uL uR' - uL' uR + c uL' uR'``

    Zero iff a combination satisfies the interface condition.  Both seeds are
    positive multiples of the analytic ``F`` and ``G``, so the sign matches
    the secular function's.
    """
    cfg = cfg or OracleConfig()
    left, right = _matching_pair(E, ch, spec, cfg)
    c = spec.coupling(ch)
    det = left.value * right.derivative - left.derivative * right.value
    if spec.kind is InteractionKind.DELTA:
        det -= c * left.value * right.value
    else:
        det += c * left.derivative * right.derivative
    norm = math.hypot(left.value, left.derivative) * math.hypot(right.value, right.derivative)
    return det / norm


def _integrate_batch(energies, ch, span, seeds, rtol):
    # all energies in one system; the grid scan only needs signs, the polish
    # goes through the scalar path
    r0, r1 = span
    n = len(energies)
    y0 = np.concatenate([[s.value for s in seeds], [s.derivative for s in seeds]])

    def rhs(r, y):
        return np.concatenate([y[n:], (radial_potential(r, ch) - energies) * y[:n]])

    sol = solve_ivp(rhs, (r0, r1), y0, method="DOP853", rtol=rtol, atol=1e-300)
    if sol.status != 0:
        raise OracleError(f"batch integration failed for {ch}: {sol.message}")
    return sol.y[:n, -1], sol.y[n:, -1]


def oracle_mismatch_batch(energies, ch: ChannelParams, spec: InteractionSpec,
                          cfg: OracleConfig | None = None) -> np.ndarray:
    """:func:`oracle_mismatch` for many energies in one vectorised integration."""
    cfg = cfg or OracleConfig()
    energies = np.asarray(energies, dtype=float)
    R = spec.radius
    r_out = cfg.outer_radius(ch, R)
    uL, dL = _integrate_batch(energies, ch, (cfg.r_min, R),
                              [outward_seed(E, ch, cfg.r_min) for E in energies], cfg.rtol)
    uR, dR = _integrate_batch(energies, ch, (r_out, R),
                              [inward_seed(E, ch, r_out) for E in energies], cfg.rtol)
    c = spec.coupling(ch)
    det = uL * dR - dL * uR
    if spec.kind is InteractionKind.DELTA:
        det = det - c * uL * uR
    else:
        det = det + c * dL * dR
    return det / (np.hypot(uL, dL) * np.hypot(uR, dR))


def oracle_eigenvalues(ch: ChannelParams, spec: InteractionSpec, window: tuple[float, float],
                       cfg: OracleConfig | None = None, step: float | None = None,
                       xtol: float = 1e-10) -> list[float]:
    """Sign changes of the matching determinant on a uniform grid, polished by Brent."""
    cfg = cfg or OracleConfig()
    lo, hi = map(float, window)
    if not lo < hi:
        raise ValueError(f"window must satisfy lo < hi, got {window!r}")
    step = step or 0.05 * ch.field_strength
    n = max(2, int(math.ceil((hi - lo) / step)))
    grid = np.linspace(lo, hi, n + 1)

    def f(E):
        return oracle_mismatch(E, ch, spec, cfg)

    values = oracle_mismatch_batch(grid, ch, spec, cfg)
    roots = []
    for i in range(n + 1):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif i < n and values[i + 1] != 0.0 and (values[i] > 0) != (values[i + 1] > 0):
            roots.append(float(brentq(f, grid[i], grid[i + 1], xtol=xtol)))
    return roots


def oracle_green_free(E: float, r: float, r_prime: float, ch: ChannelParams,
                      cfg: OracleConfig | None = None) -> float:
    """Free Green kernel from two-sided integration with a unit derivative jump.

    The regular solution is shot out to ``r_<``, the decaying one in to ``r_<``
    and ``r_>``; ``g = -uL(r_<) uR(r_>) / (uL uR' - uL' uR)``.
    """
    cfg = cfg or OracleConfig()
    lo, hi = sorted((float(r), float(r_prime)))
    r_out = cfg.outer_radius(ch, hi)
    if not cfg.r_min < lo:
        raise ValueError("r and r_prime must exceed r_min")
    left = integrate_radial(E, ch, (cfg.r_min, lo), outward_seed(E, ch, cfg.r_min), cfg.rtol)
    seed = inward_seed(E, ch, r_out)
    right_hi = integrate_radial(E, ch, (r_out, hi), seed, cfg.rtol)
    right_lo = integrate_radial(E, ch, (r_out, lo), seed, cfg.rtol) if lo < hi else right_hi
    det = left.value * right_lo.derivative - left.derivative * right_lo.value
    if det == 0.0:
        raise OracleError(f"vanishing Wronskian at E={E!r} in {ch}")
    return -left.value * right_hi.value / det


def fd_eigenvalues_delta(ch: ChannelParams, spec: InteractionSpec,
                         cfg: OracleConfig | None = None, count: int = 3) -> list[float]:
    """Lowest ``count`` eigenvalues from a finite-difference matrix (delta shell).

    Discretises the unweighted form ``-(1/r)(r f')' + [(m/r + B r/2)^2 + s] f``
    on the cell centres ``r_j = (j - 1/2) h`` with ``f = 0`` beyond ``r_max``,
    symmetrised through ``u = sqrt(r) f`` (the same eigenvalues as the radial
    ``h``).  The origin needs no boundary row since the face at ``r = 0`` has
    zero flux.  ``h`` is chosen so that ``R`` is a node; the shell adds
    ``c / h`` to that diagonal entry.  Error is ``O(h^2)``.
    """
    if spec.kind is not InteractionKind.DELTA:
        raise ValueError("the finite-difference oracle handles the delta shell only")
    cfg = cfg or OracleConfig()
    R = spec.radius
    r_out = cfg.outer_radius(ch, R)
    h0 = r_out / cfg.fd_points
    j_shell = max(1, round(R / h0 + 0.5))
    h = R / (j_shell - 0.5)
    n = int(round(r_out / h))
    r = (np.arange(1, n + 1) - 0.5) * h
    faces = np.arange(1, n) * h  # r_{j+1/2}
    m, B = ch.angular, ch.field_strength
    diag = 2.0 / h**2 + (m / r + 0.5 * B * r) ** 2 + ch.spin_shift
    diag[j_shell - 1] += spec.coupling(ch) / h
    off = -faces / (h**2 * np.sqrt(r[:-1] * r[1:]))
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                            select_range=(0, count - 1))
    return [float(v) for v in vals]
