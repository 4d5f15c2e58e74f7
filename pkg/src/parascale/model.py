"""Closed-form performance model for parallelized sequential systems.

The classic rule adds processor performances linearly:

    perf_total(N) = N * perf_single

The saturation-corrected ("modern") rule divides that by the overhead of
organizing the joint work, controlled by the parallel fraction ``alpha``:

    perf_total(N) = N * perf_single / (N*(1-alpha) + alpha)

The denominator equals ``1 + (N-1)*(1-alpha)``, which is the numerically
stable form used throughout: it never cancels, even for non-parallelizable
fractions down to 1e-8 combined with core counts up to 1e8.

The same correction pattern appears in kinematics: a body under constant
acceleration follows ``v = t*a`` classically, but saturates at ``c/n`` when
the relativistic correction ``1/sqrt(1 + (t*a/(c/n))^2)`` is applied.  Both
families are provided here because their curves are generated side by side.

All functions are pure; all quantities are SI (flop/s, seconds, m/s).
Unit prefixes (Gflop/s, Eflop/s, ...) exist only at I/O boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

#: Speed of light in vacuum, m/s.
LIGHT_SPEED = 299_792_458.0


@dataclass(frozen=True)
class ParallelSystem:
    """A machine described by PU count, per-PU performance and parallel fraction.

    ``nonparallel`` is stored explicitly alongside ``alpha`` because measured
    systems are characterised by their serial remainder (values like 3.3e-8),
    and reconstructing it as ``1 - alpha`` would lose precision.  Use
    :meth:`from_nonparallel` when that is the quantity you have.
    """

    n_proc: float
    perf_single: float
    alpha: float
    nonparallel: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if self.n_proc < 1:
            raise ValueError(f"n_proc must be >= 1, got {self.n_proc}")
        if self.perf_single <= 0:
            raise ValueError(f"perf_single must be > 0, got {self.perf_single}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if math.isnan(self.nonparallel):
            object.__setattr__(self, "nonparallel", 1.0 - self.alpha)
        elif not 0.0 <= self.nonparallel <= 1.0:
            raise ValueError(
                f"nonparallel must be in [0, 1], got {self.nonparallel}")

    @classmethod
    def from_nonparallel(cls, n_proc: float, perf_single: float,
                         nonparallel: float) -> "ParallelSystem":
        """Build a system from the serial fraction (1 - alpha), kept exact."""
        return cls(n_proc, perf_single, alpha=1.0 - nonparallel,
                   nonparallel=nonparallel)


@dataclass(frozen=True)
class RelativisticParams:
    """Constant acceleration, limiting speed and optical density."""

    accel: float = 9.81
    light_speed: float = LIGHT_SPEED
    density: float = 1.0

    def __post_init__(self) -> None:
        if self.accel <= 0:
            raise ValueError(f"accel must be > 0, got {self.accel}")
        if self.light_speed <= 0:
            raise ValueError(f"light_speed must be > 0, got {self.light_speed}")
        if self.density < 1:
            raise ValueError(f"density must be >= 1, got {self.density}")

    @property
    def limit_speed(self) -> float:
        """Asymptotic speed c/n."""
        return self.light_speed / self.density


@dataclass(frozen=True)
class PerformancePoint:
    """One (nominal, payload) performance pair with its efficiency."""

    r_peak: float
    r_max: float
    efficiency: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if math.isnan(self.efficiency):
            object.__setattr__(self, "efficiency", self.r_max / self.r_peak)
        if not 0.0 < self.r_max <= self.r_peak:
            raise ValueError(
                f"need 0 < r_max <= r_peak, got r_max={self.r_max}, "
                f"r_peak={self.r_peak}")


def classic_total_perf(sys: ParallelSystem) -> float:
    """Linear performance addition: N * perf_single."""
    return sys.n_proc * sys.perf_single


def efficiency_from_nonparallel(n_proc: float, nonparallel: float) -> float:
    """Efficiency 1 / (1 + (N-1)*(1-alpha)) given the serial fraction directly.

    This is the precision-preserving primitive behind :func:`efficiency`;
    it accepts serial fractions above 1 so that algebraic inversions of
    inconsistent measurements still round-trip.
    """
    if n_proc < 1:
        raise ValueError(f"n_proc must be >= 1, got {n_proc}")
    if nonparallel < 0:
        raise ValueError(f"nonparallel must be >= 0, got {nonparallel}")
    return 1.0 / (1.0 + (n_proc - 1.0) * nonparallel)


def efficiency(n_proc: float, alpha: float) -> float:
    """Parallelization efficiency 1 / (N*(1-alpha) + alpha).

    Equals 1 at N=1 for any alpha, and decreases strictly with N when
    alpha < 1.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return efficiency_from_nonparallel(n_proc, 1.0 - alpha)


def modern_total_perf(sys: ParallelSystem) -> float:
    """Saturation-corrected performance: classic value times efficiency."""
    return classic_total_perf(sys) * efficiency_from_nonparallel(
        sys.n_proc, sys.nonparallel)


def alpha_from_measurement(n_proc: float, eff: float) -> float:
    """Invert a measured efficiency into the serial fraction (1 - alpha_eff).

    Solves eff = 1 / (1 + (N-1)*x) for x, i.e. returns (1/eff - 1) / (N - 1).
    The returned value is the non-parallelizable fraction; the parallel
    fraction itself is 1 minus the result.  A measurement with eff < 1/N is
    inconsistent with any alpha in [0, 1] and yields a value above 1.
    """
    if n_proc < 2:
        raise ValueError(
            f"inversion degenerate: need n_proc >= 2, got {n_proc}")
    if not 0.0 < eff <= 1.0:
        raise ValueError(f"efficiency must be in (0, 1], got {eff}")
    return (1.0 / eff - 1.0) / (n_proc - 1.0)


def saturation_limit(perf_single: float, nonparallel: float) -> float:
    """Large-N limit of the corrected performance: perf_single / (1-alpha)."""
    if not 0.0 < nonparallel <= 1.0:
        raise ValueError(
            f"nonparallel must be in (0, 1] for a finite limit, "
            f"got {nonparallel}")
    return perf_single / nonparallel


def classic_speed(t: float, accel: float) -> float:
    """Speed of a uniformly accelerated body without correction: t * accel."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return t * accel


def relativistic_speed(t: float, p: RelativisticParams) -> float:
    """Speed with relativistic correction, bounded above by c/n.

    v(t) = t*a / sqrt(1 + (t*a / (c/n))^2); monotone increasing in t and
    indistinguishable from ``classic_speed`` while t*a << c/n.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    v = t * p.accel
    return v / math.sqrt(1.0 + (v / p.limit_speed) ** 2)
