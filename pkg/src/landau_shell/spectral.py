"""Secular functions and eigenvalue search for the shell interactions.

In a channel with coupling ``c`` at radius ``R`` the perturbed point
spectrum is the zero set of

* delta shell, ``f'(R+) - f'(R-) = c f(R)``:
  ``S(E) = W(E) - c F(E,R) G(E,R)``
* delta-prime shell, ``f(R+) - f(R-) = c f'(R)``:
  ``S(E) = W(E) + c F'(E,R) G'(E,R)``

where ``W = F G' - F' G``.  Both reduce to ``W`` at zero coupling, whose
zeros are the Landau levels.  Roots are bracketed on a uniform energy grid
and polished with Brent's method.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import brentq

from .channel import (
    ChannelParams,
    InteractionKind,
    SpinBranch,
    boundary_data,
    eval_f,
    eval_g,
    kummer_a,
    landau_levels,
    wronskian,
)

__all__ = [
    "InteractionSpec",
    "SolverOptions",
    "SecularRoot",
    "SpectrumReport",
    "RootPolishWarning",
    "TangentRootWarning",
    "secular_delta",
    "secular_delta_prime",
    "secular",
    "default_grid_step",
    "find_eigenvalues",
    "spectrum",
    "default_floor",
    "count_negative",
    "landau_report",
]


class RootPolishWarning(RuntimeWarning):
    """A bracketed sign change could not be polished within the budget."""


class TangentRootWarning(RuntimeWarning):
    """``|S|`` dips below tolerance on the grid without changing sign."""


@dataclass(frozen=True)
class InteractionSpec:
    """Shell interaction: kind, radius and per-channel couplings.

    ``coupling_up`` maps ``m`` to ``alpha_m`` (spin up), ``coupling_down``
    maps ``m'`` to ``beta_m'`` (spin down); unmapped channels fall back to
    the defaults.
    """

    kind: InteractionKind
    radius: float
    coupling_up: Mapping[int, float] = field(default_factory=dict)
    coupling_down: Mapping[int, float] = field(default_factory=dict)
    default_up: float = 0.0
    default_down: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", InteractionKind(self.kind))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be finite and > 0, got {self.radius!r}")
        up = {int(k): float(v) for k, v in dict(self.coupling_up).items()}
        down = {int(k): float(v) for k, v in dict(self.coupling_down).items()}
        for value in [*up.values(), *down.values(), self.default_up, self.default_down]:
            if not math.isfinite(value):
                raise ValueError("couplings must be finite")
        object.__setattr__(self, "coupling_up", up)
        object.__setattr__(self, "coupling_down", down)
        object.__setattr__(self, "default_up", float(self.default_up))
        object.__setattr__(self, "default_down", float(self.default_down))

    @classmethod
    def uniform(cls, kind, radius, alpha=0.0, beta=0.0):
        return cls(kind, radius, default_up=alpha, default_down=beta)

    def coupling(self, ch: ChannelParams) -> float:
        if ch.spin_branch is SpinBranch.UP:
            return self.coupling_up.get(ch.angular, self.default_up)
        return self.coupling_down.get(ch.angular, self.default_down)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "radius": self.radius,
            "alpha": self.default_up,
            "beta": self.default_down,
            "alpha_map": {str(k): v for k, v in sorted(self.coupling_up.items())},
            "beta_map": {str(k): v for k, v in sorted(self.coupling_down.items())},
        }


@dataclass(frozen=True)
class SolverOptions:
    grid_step: float | None = None
    root_tol: float = 1e-10
    max_iter: int = 200


@dataclass(frozen=True)
class SecularRoot:
    energy: float
    residual: float
    bracket: tuple[float, float]
    channel: ChannelParams
    converged: bool = True

    @property
    def component(self) -> SpinBranch:
        return self.channel.spin_branch


@dataclass
class SpectrumReport:
    window: tuple[float, float]
    roots: list[SecularRoot]
    channels_scanned: list[ChannelParams]
    interaction: InteractionSpec
    grid_step: float
    root_tol: float
    failures: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def energies(self) -> list[float]:
        return [root.energy for root in self.roots]


# ------------------------------------------------------------- secular maps


def secular_delta(E: float, ch: ChannelParams, coupling: float, radius: float) -> float:
    """``W(E) - coupling F(E,R) G(E,R)``."""
    W = wronskian(E, ch)
    if coupling == 0.0:
        return W
    return W - coupling * eval_f(E, radius, ch).value * eval_g(E, radius, ch).value


def secular_delta_prime(E: float, ch: ChannelParams, coupling: float, radius: float) -> float:
    """``W(E) + coupling F'(E,R) G'(E,R)``.

    The sign of the coupling term is the one forced by the jump condition
    ``f(R+) - f(R-) = coupling f'(R)``: the eigenfunction ``F`` inside,
    ``(F'(R)/G'(R)) G`` outside has value jump ``-W / G'(R)``.
    """
    W = wronskian(E, ch)
    if coupling == 0.0:
        return W
    return W + coupling * eval_f(E, radius, ch).derivative * eval_g(E, radius, ch).derivative


def secular(E: float, ch: ChannelParams, spec: InteractionSpec) -> float:
    """Secular function of ``ch`` with the coupling and kind taken from ``spec``."""
    c = spec.coupling(ch)
    if spec.kind is InteractionKind.DELTA:
        return secular_delta(E, ch, c, spec.radius)
    return secular_delta_prime(E, ch, c, spec.radius)


def _signed_secular(E: float, ch: ChannelParams, coupling: float, spec: InteractionSpec) -> float:
    # same sign as the secular function, but finite for very negative E
    bd = boundary_data(E, spec.radius, ch)
    if coupling == 0.0:
        return bd.wronskian
    if spec.kind is InteractionKind.DELTA:
        return bd.wronskian - coupling * bd.fg
    return bd.wronskian + coupling * bd.fpgp


def _residual(E: float, ch: ChannelParams, coupling: float, spec: InteractionSpec) -> float:
    # |S(E)| without forming F and G separately, which overflow deep down
    value = abs(_signed_secular(E, ch, coupling, spec))
    a = kummer_a(E, ch)
    if a < 1.0 or value == 0.0:
        return value
    return math.exp(math.log(value) - math.lgamma(a))


# ---------------------------------------------------------------- root search


def default_grid_step(ch: ChannelParams) -> float:
    """``min(0.05 B, half the Landau spacing 2B)``."""
    B = ch.field_strength
    return min(0.05 * B, B)


def find_eigenvalues(ch: ChannelParams, spec: InteractionSpec, window: tuple[float, float],
                     opts: SolverOptions | None = None, *,
                     report: SpectrumReport | None = None) -> list[SecularRoot]:
    """All sign-change roots of the channel's secular function in ``window``.

    Brackets whose polish fails are still returned, with
    ``converged=False``, and a :class:`RootPolishWarning` is emitted.
    Grid points where ``|S|`` falls below ``root_tol`` without a sign change
    (possible tangent roots) only produce a :class:`TangentRootWarning`.
    """
    opts = opts or SolverOptions()
    lo, hi = map(float, window)
    if not lo < hi:
        raise ValueError(f"window must satisfy lo < hi, got {window!r}")
    c = spec.coupling(ch)
    step = opts.grid_step or default_grid_step(ch)
    n = max(2, int(math.ceil((hi - lo) / step)))
    grid = np.linspace(lo, hi, n + 1)

    def f(E):
        return _signed_secular(E, ch, c, spec)

    values = np.array([f(E) for E in grid])
    roots: list[SecularRoot] = []

    def residual(E):
        return _residual(E, ch, c, spec)

    for i in range(n + 1):
        if values[i] == 0.0:
            E = float(grid[i])
            roots.append(SecularRoot(E, residual(E), (E, E), ch))
            continue
        if i == n or values[i + 1] == 0.0 or (values[i] > 0) == (values[i + 1] > 0):
            continue
        a, b = float(grid[i]), float(grid[i + 1])
        try:
            E = brentq(f, a, b, xtol=opts.root_tol, rtol=4 * np.finfo(float).eps,
                       maxiter=opts.max_iter)
        except RuntimeError as exc:
            msg = f"channel {ch}: polish failed on [{a!r}, {b!r}]: {exc}"
            warnings.warn(msg, RootPolishWarning, stacklevel=2)
            if report is not None:
                report.failures.append(msg)
            mid = 0.5 * (a + b)
            roots.append(SecularRoot(mid, residual(mid), (a, b), ch, converged=False))
            continue
        roots.append(SecularRoot(E, residual(E), (a, b), ch))

    mags = np.abs(values)
    for i in range(1, n):
        if mags[i] < opts.root_tol and mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            if values[i] != 0.0 and (values[i - 1] > 0) == (values[i] > 0) == (values[i + 1] > 0):
                msg = f"channel {ch}: |S| = {mags[i]:.3g} at E = {grid[i]!r} without sign change"
                warnings.warn(msg, TangentRootWarning, stacklevel=2)
                if report is not None:
                    report.warnings.append(msg)
    return roots


def spectrum(spec: InteractionSpec, B: float, m_range: tuple[int, int], window: tuple[float, float],
             opts: SolverOptions | None = None) -> SpectrumReport:
    """Eigenvalues of every channel ``m`` in ``m_range`` (inclusive), both spins.

    A failing channel is recorded in ``report.failures``; the sweep carries on.
    """
    opts = opts or SolverOptions()
    m_lo, m_hi = m_range
    if m_lo > m_hi:
        raise ValueError(f"empty m_range {m_range!r}")
    channels = [ChannelParams(B, m, branch) for m in range(m_lo, m_hi + 1)
                for branch in (SpinBranch.UP, SpinBranch.DOWN)]
    report = SpectrumReport((float(window[0]), float(window[1])), [], channels, spec,
                            opts.grid_step or default_grid_step(channels[0]), opts.root_tol)
    for ch in channels:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RootPolishWarning)
                warnings.simplefilter("ignore", TangentRootWarning)
                report.roots.extend(find_eigenvalues(ch, spec, window, opts, report=report))
        except (ArithmeticError, ValueError) as exc:
            report.failures.append(f"channel {ch}: {type(exc).__name__}: {exc}")
    report.roots.sort(key=lambda root: (root.energy, root.channel.angular,
                                        root.channel.spin_branch.value))
    return report


# --------------------------------------------------------- negative spectrum


# special functions stay accurate for a up to ~1e8, i.e. E down to about -1e8 B
DEEPEST_ENERGY = -1.0e8


def default_floor(spec: InteractionSpec, ch: ChannelParams) -> float:
    """Energy below which the channel has no eigenvalue.

    The potential is bounded below by ``-1/(4 r^2) - B`` and ``-d^2 - 1/(4 r^2)``
    is non-negative, so a delta shell of strength ``c < 0`` binds no deeper
    than about ``c^2/4 + B``; a delta-prime shell binds like the 1D
    ``-4/c^2`` state.  Margins are generous because the scan is cheap.
    """
    B = ch.field_strength
    c = spec.coupling(ch)
    if spec.kind is InteractionKind.DELTA:
        depth = 0.25 * c * c
    else:
        c2 = c * c
        depth = 0.0 if c == 0.0 else (4.0 / c2 if c2 > 0.0 else math.inf)
    floor = -max(50.0, 1.5 * (depth + B) + 10.0)
    if floor < DEEPEST_ENERGY * B:
        raise ValueError(
            f"channel {ch}: coupling {c!r} can bind near {-depth:.3g}, below the supported "
            f"energy range ({DEEPEST_ENERGY * B:.3g})")
    return floor


def count_negative(ch_pair: tuple[ChannelParams, ChannelParams], spec: InteractionSpec,
                   floor: float | None = None, opts: SolverOptions | None = None) -> int:
    """Number of eigenvalues in ``(floor, 0)`` over the up and down channels.

    The coarse grid step is widened with depth (``|E|/400``) because deep
    states sit far from any other root.  A floor below ``DEEPEST_ENERGY * B``
    raises ``ValueError``; this happens by default only for delta-prime
    couplings with ``|c| < ~3e-4``, whose bound state sits near ``-4/c^2``.
    """
    total = 0
    for ch in ch_pair:
        lo = default_floor(spec, ch) if floor is None else floor
        if not lo < 0:
            raise ValueError("floor must be negative")
        if lo < DEEPEST_ENERGY * ch.field_strength:
            raise ValueError(f"floor {lo!r} is below the supported energy range")
        base = (opts.grid_step if opts and opts.grid_step else default_grid_step(ch))
        step = max(base, -lo / 400.0)
        o = SolverOptions(step, (opts or SolverOptions()).root_tol)
        roots = find_eigenvalues(ch, spec, (lo, 0.0), o)
        total += sum(1 for root in roots if lo < root.energy < 0.0)
    return total


def landau_report(B: float, m_range: tuple[int, int], window: tuple[float, float]) -> list[tuple[int, str, float]]:
    """Closed-form Landau levels of every channel in ``window`` as ``(m, branch, E)``."""
    out = []
    for m in range(m_range[0], m_range[1] + 1):
        for branch in (SpinBranch.UP, SpinBranch.DOWN):
            ch = ChannelParams(B, m, branch)
            out.extend((m, branch.value, E) for E in landau_levels(ch, window[1]) if E >= window[0])
    return sorted(out, key=lambda t: (t[2], t[0], t[1]))
