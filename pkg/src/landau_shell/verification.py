"""Acceptance checks, one function per criterion.

Each check returns a :class:`CheckResult` with the measured worst-case error
next to its tolerance.  The CLI ``verify`` command and the acceptance tests
both run these.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelParams,
    InteractionKind,
    eval_f,
    eval_g,
    landau_levels,
    radial_potential,
    second_derivatives,
    wronskian,
    wronskian_numeric,
)
from .greens import apply_resolvent, channel_mu
from .oracle import oracle_eigenvalues
from .spectral import (
    InteractionSpec,
    SecularRoot,
    count_negative,
    find_eigenvalues,
    spectrum,
)

__all__ = ["CheckResult", "CROSS_CONFIGS", "ALL_CHECKS", "run_all"] + [
    f"check_{i}" for i in range(1, 11)
]

SEED = 20240601


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    elapsed: float
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.name}: measured={self.measured:.3e} "
                f"tol={self.tolerance:.1e} time={self.elapsed:.2f}s {self.detail}").rstrip()


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# (B, R, m, spin, coupling); covers every listed value of each parameter
CROSS_CONFIGS = [
    (0.5, 0.5, -1, "up", -8.0),
    (0.5, 1.0, 0, "down", -1.0),
    (0.5, 0.5, 1, "down", 1.0),
    (0.5, 1.0, 2, "up", 5.0),
    (1.0, 0.5, 0, "up", 5.0),
    (1.0, 1.0, 0, "down", -8.0),
    (1.0, 0.5, 2, "down", -1.0),
    (1.0, 1.0, -1, "up", 1.0),
    (2.0, 0.5, 1, "up", -8.0),
    (2.0, 1.0, -1, "down", 5.0),
    (2.0, 0.5, 0, "down", 1.0),
    (2.0, 1.0, 2, "up", -1.0),
]

CROSS_WINDOW = (-10.0, 8.0)


@_timed
def check_1() -> CheckResult:
    """Landau levels at zero coupling, m in [-3, 3], both spins, B = 1."""
    window = (-0.5, 8.0)
    spec = InteractionSpec.uniform("delta", 1.0, 0.0, 0.0)
    t0 = time.perf_counter()
    report = spectrum(spec, 1.0, (-3, 3), window)
    runtime = time.perf_counter() - t0
    expected = sorted(E for ch in report.channels_scanned
                      for E in landau_levels(ch, window[1]) if E > window[0])
    found = report.energies
    worst = math.inf
    if len(found) == len(expected):
        worst = max((abs(a - b) for a, b in zip(found, expected)), default=0.0)
    zero_modes = sum(1 for E in found if abs(E) < 1e-8)
    passed = (worst <= 1e-8 and runtime < 10.0 and not report.failures
              and zero_modes == len([E for E in expected if E == 0.0]) > 0)
    return CheckResult(1, "Landau reproduction", passed, worst, 1e-8, 0.0,
                       f"roots={len(found)} expected={len(expected)} zero_modes={zero_modes} "
                       f"runtime={runtime:.2f}s")


def _cross(kind: str, number: int, name: str) -> CheckResult:
    worst = 0.0
    problems = []
    roots_by_config = []
    t0 = time.perf_counter()
    for B, R, m, spin, c in CROSS_CONFIGS:
        ch = ChannelParams(B, m, spin)
        spec = InteractionSpec.uniform(kind, R, c, c)
        ours = find_eigenvalues(ch, spec, CROSS_WINDOW)
        ref = oracle_eigenvalues(ch, spec, CROSS_WINDOW)
        roots_by_config.append((ch, spec, ours))
        if len(ours) != len(ref):
            problems.append(f"{ch} c={c:g}: {len(ours)} vs {len(ref)} roots")
            worst = math.inf
            continue
        for a, b in zip(ours, ref):
            worst = max(worst, abs(a.energy - b))
    runtime = time.perf_counter() - t0
    passed = not problems and worst <= 1e-6 and runtime < 60.0
    detail = f"configs={len(CROSS_CONFIGS)} runtime={runtime:.2f}s"
    if problems:
        detail += " " + "; ".join(problems)
    return CheckResult(number, name, passed, worst, 1e-6, 0.0, detail,
                       extra={"roots": roots_by_config})


@_timed
def check_2() -> CheckResult:
    """Delta shell: secular roots against the shooting oracle."""
    return _cross("delta", 2, "oracle cross-validation (delta)")


@_timed
def check_3() -> CheckResult:
    """Delta-prime shell: secular roots against the shooting oracle."""
    return _cross("delta_prime", 3, "oracle cross-validation (delta-prime)")


@_timed
def check_4() -> CheckResult:
    """Free Green kernel: ODE away from the source and unit derivative jump."""
    rng = np.random.default_rng(SEED + 4)
    channels = [ChannelParams(1.0, 0, "up"), ChannelParams(1.0, 0, "down"),
                ChannelParams(0.5, 1, "up"), ChannelParams(2.0, -1, "down"),
                ChannelParams(1.0, 2, "down"), ChannelParams(0.7, -2, "up")]
    worst_ode = worst_jump = 0.0
    for ch in channels:
        for _ in range(5):
            E = float(rng.uniform(-3.0, 9.0))
            rp = float(rng.uniform(0.3, 2.5))
            W = wronskian(E, ch)
            f0, g0 = eval_f(E, rp, ch), eval_g(E, rp, ch)
            jump = -(f0.value * g0.derivative - f0.derivative * g0.value) / W
            worst_jump = max(worst_jump, abs(jump + 1.0))
            for r in (0.5 * rp, 0.8 * rp, 1.3 * rp, 2.0 * rp):
                # g(., r') is a multiple of F below r' and of G above
                f2, g2 = second_derivatives(E, r, ch)
                sol = eval_f(E, r, ch) if r < rp else eval_g(E, r, ch)
                d2 = f2 if r < rp else g2
                pot = radial_potential(r, ch) - E
                res = -d2 + pot * sol.value
                scale = max(abs(d2), abs(pot * sol.value))
                worst_ode = max(worst_ode, abs(res) / scale)
    passed = worst_ode <= 1e-6 and worst_jump <= 1e-8
    return CheckResult(4, "Green defining equation", passed, max(worst_ode, worst_jump), 1e-8, 0.0,
                       f"ode_rel={worst_ode:.2e} (tol 1e-6) jump_err={worst_jump:.2e} (tol 1e-8)")


def boundary_residual(root: SecularRoot, spec: InteractionSpec) -> float:
    """Relative violation of the shell interface condition by the assembled eigenfunction."""
    E, ch, R = root.energy, root.channel, spec.radius
    c = spec.coupling(ch)
    f, g = eval_f(E, R, ch), eval_g(E, R, ch)
    if spec.kind is InteractionKind.DELTA:
        k = f.value / g.value
        jump = k * g.derivative - f.derivative
        target = c * f.value
        scale = max(abs(k * g.derivative), abs(f.derivative), abs(target))
    else:
        if g.derivative != 0.0:
            k = f.derivative / g.derivative
        else:
            # only at a Landau level with F'(R) = 0, where G is a multiple of F
            k = f.value / g.value
        jump = k * g.value - f.value
        target = c * f.derivative
        scale = max(abs(k * g.value), abs(f.value), abs(target))
    return abs(jump - target) / scale


@_timed
def check_5(roots_delta=None, roots_prime=None) -> CheckResult:
    """Interface conditions of the eigenfunctions at every cross-validation root."""
    groups = []
    for kind, given in (("delta", roots_delta), ("delta_prime", roots_prime)):
        if given is None:
            given = []
            for B, R, m, spin, c in CROSS_CONFIGS:
                ch = ChannelParams(B, m, spin)
                spec = InteractionSpec.uniform(kind, R, c, c)
                given.append((ch, spec, find_eigenvalues(ch, spec, CROSS_WINDOW)))
        groups.extend(given)
    worst, count = 0.0, 0
    for _, spec, roots in groups:
        for root in roots:
            worst = max(worst, boundary_residual(root, spec))
            count += 1
    return CheckResult(5, "eigenfunction boundary conditions", worst <= 1e-8 and count > 0,
                       worst, 1e-8, 0.0, f"roots={count}")


@_timed
def check_6(samples: int = 100) -> CheckResult:
    """At most two negative eigenvalues per (up, down) channel pair."""
    rng = np.random.default_rng(SEED + 6)
    pairs = rng.uniform(-50.0, 50.0, size=(samples, 2))
    pair = (ChannelParams(1.0, 0, "up"), ChannelParams(1.0, 0, "down"))
    worst = 0
    histogram: dict[str, dict[int, int]] = {}
    for kind in ("delta", "delta_prime"):
        hist: dict[int, int] = {}
        for alpha, beta in pairs:
            spec = InteractionSpec.uniform(kind, 1.0, float(alpha), float(beta))
            n = count_negative(pair, spec)
            hist[n] = hist.get(n, 0) + 1
            worst = max(worst, n)
        histogram[kind] = dict(sorted(hist.items()))
    return CheckResult(6, "negative-eigenvalue bound", worst <= 2, float(worst), 2.0, 0.0,
                       f"counts={histogram}")


POLE_CONFIGS = [
    (ChannelParams(1.0, 0, "up"), InteractionSpec.uniform("delta", 1.0, 1.0, 0.0), (0.5, 7.5)),
    (ChannelParams(1.0, 0, "down"), InteractionSpec.uniform("delta", 1.0, 0.0, -8.0), (-20.0, 4.0)),
    (ChannelParams(0.5, 1, "up"), InteractionSpec.uniform("delta_prime", 0.5, 2.0, 0.0), (-5.0, 5.0)),
]


def mu_poles(ch: ChannelParams, spec: InteractionSpec, window, threshold: float = 1e6,
             step: float = 0.01, width: float = 1e-9) -> list[float]:
    """Locations where ``mu`` changes sign through ``|mu| > threshold``.

    Each sign change of ``mu`` on a grid is bisected down to ``width``; it is
    a pole if ``|mu|`` exceeds ``threshold`` at both ends of the final
    bracket, and the bracket midpoint is returned.  Sign changes through
    zero (``mu`` vanishes at the Landau levels) fail that test.
    """
    lo, hi = window
    grid = np.arange(lo, hi + 0.5 * step, step)
    vals = [channel_mu(float(E), ch, spec) for E in grid]
    out = []
    for i in range(len(grid) - 1):
        a, b, fa, fb = float(grid[i]), float(grid[i + 1]), vals[i], vals[i + 1]
        if fa == 0.0 or fb == 0.0 or (fa > 0) == (fb > 0):
            continue
        while b - a > width:
            mid = 0.5 * (a + b)
            fm = channel_mu(mid, ch, spec)
            if fm == 0.0:
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b, fb = mid, fm
        if abs(fa) > threshold and abs(fb) > threshold:
            out.append(0.5 * (a + b))
    return out


@_timed
def check_7() -> CheckResult:
    """Energies with ``|mu| > 1e6`` bracket the secular roots."""
    worst = 0.0
    problems = []
    for ch, spec, window in POLE_CONFIGS:
        roots = [r.energy for r in find_eigenvalues(ch, spec, window)]
        poles = mu_poles(ch, spec, window)
        if len(poles) != len(roots):
            problems.append(f"{ch}: {len(poles)} poles vs {len(roots)} roots")
            worst = math.inf
            continue
        for pole, E in zip(poles, roots):
            worst = max(worst, abs(pole - E))
    return CheckResult(7, "pole-root correspondence", not problems and worst <= 1e-6, worst, 1e-6,
                       0.0, "; ".join(problems))


@_timed
def check_8() -> CheckResult:
    """Closed-form Wronskian against ``F G' - F' G`` at three radii."""
    rng = np.random.default_rng(SEED + 8)
    worst_closed = worst_const = 0.0
    for _ in range(50):
        B = float(rng.uniform(0.3, 3.0))
        m = int(rng.integers(-3, 4))
        ch = ChannelParams(B, m, "up" if rng.random() < 0.5 else "down")
        E = float(rng.uniform(-5.0, 12.0))
        W = wronskian(E, ch)
        radii = [float(x) / math.sqrt(B) for x in (0.4, 1.1, 2.3)]
        nums = [wronskian_numeric(E, r, ch) for r in radii]
        worst_closed = max(worst_closed, max(abs(n - W) for n in nums) / abs(W))
        worst_const = max(worst_const, (max(nums) - min(nums)) / max(abs(n) for n in nums))
    passed = worst_closed <= 1e-8 and worst_const <= 1e-9
    return CheckResult(8, "Wronskian closed form", passed, worst_closed, 1e-8, 0.0,
                       f"r-constancy={worst_const:.2e} (tol 1e-9)")


@_timed
def check_9() -> CheckResult:
    """Lowest eigenvalue approaches the Landau level 2 as the shell shrinks."""
    ch = ChannelParams(1.0, 0, "up")
    dists = []
    for R in (0.5, 0.25, 0.125):
        spec = InteractionSpec.uniform("delta", R, 2.0, 0.0)
        roots = find_eigenvalues(ch, spec, (-5.0, 3.9))
        dists.append(abs(roots[0].energy - 2.0) if roots else math.inf)
    passed = all(b < a for a, b in zip(dists, dists[1:]))
    return CheckResult(9, "small-radius limit", passed, dists[-1], 0.0, 0.0,
                       "distances=" + ", ".join(f"{d:.6g}" for d in dists))


def _domain_test_function(r, R, c, lo=0.2, hi=3.0):
    # smooth bump times (1 + c|r - R|/2): derivative jump c f(R) at R
    out = np.zeros_like(r)
    inside = (r > lo) & (r < hi)
    x = r[inside]
    out[inside] = np.exp(-1.0 / ((x - lo) * (hi - x)))
    return out * (1.0 + 0.5 * c * np.abs(r - R))


def resolvent_roundtrip(E: float, ch: ChannelParams, spec: InteractionSpec,
                        points: int = 4000, r_max: float = 10.0) -> float:
    """Sup-norm of ``phi - R(E) (h + shell - E) phi`` with the operator applied by finite differences."""
    if spec.kind is not InteractionKind.DELTA:
        raise ValueError("round-trip test function is built for the delta shell")
    r = np.linspace(0.0, r_max, points + 1)[1:]
    h = r[1] - r[0]
    R = spec.radius
    j = int(round(R / h)) - 1
    if abs(r[j] - R) > 1e-9 * R:
        raise ValueError("grid must contain the shell radius")
    c = spec.coupling(ch)
    phi = _domain_test_function(r, R, c)
    lap = np.zeros_like(r)
    lap[1:-1] = (phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / h**2
    image = -lap + (radial_potential(r, ch) - E) * phi
    image[j] += c / h * phi[j]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        back = apply_resolvent(E, r, image, ch, spec)
    return float(np.max(np.abs(back - phi)))


@_timed
def check_10() -> CheckResult:
    """Resolvent applied to the finite-difference image returns the test function."""
    cases = [(1.3, ChannelParams(1.0, 0, "up"), InteractionSpec.uniform("delta", 1.0, 2.0, 0.0)),
             (1.0, ChannelParams(1.0, 1, "down"), InteractionSpec.uniform("delta", 1.0, 0.0, -3.0))]
    worst = max(resolvent_roundtrip(E, ch, spec) for E, ch, spec in cases)
    return CheckResult(10, "resolvent identity", worst <= 1e-4, worst, 1e-4, 0.0,
                       f"cases={len(cases)} grid=4000")


ALL_CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9,
              check_10]


def run_all(selected=None) -> list[CheckResult]:
    """Run the selected criteria (all by default), reusing roots from 2 and 3 in 5."""
    wanted = set(selected or range(1, 11))
    results = {}
    for i in sorted(wanted):
        if i == 5:
            continue
        results[i] = ALL_CHECKS[i - 1]()
    if 5 in wanted:
        rd = results[2].extra.get("roots") if 2 in results else None
        rp = results[3].extra.get("roots") if 3 in results else None
        results[5] = check_5(rd, rp)
    return [results[i] for i in sorted(results)]
