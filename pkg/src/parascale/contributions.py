"""Decomposition of the non-parallelizable fraction into measurable parts.

The serial remainder of a parallelized run is not one number: it grows with
the machine.  This module models it as

    (1-alpha_total)(N) = alpha_sw                      software component
                       + ctx_switch_clocks / total_clocks
                       + bio_factor * loop_clocks_per_pu * N / total_clocks

i.e. an affine function of the PU count N.  The constant part collects the
software serial fraction and the context-switching cost; the linear part is
the orchestration ("looping") cost the coordinating PU pays once per fellow
PU, optionally scaled by ``bio_factor`` for workloads synchronized on a much
slower period than the hardware clock (processor-based neural simulation).

Because the serial fraction grows with N while nominal performance grows
linearly, the payload performance curve R_Max(R_Peak) has an interior
maximum: past it, adding processors reduces delivered performance.
:func:`peak_point` locates it both numerically and analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import PerformancePoint, efficiency_from_nonparallel


class ModelDomainError(ValueError):
    """Raised when an evaluation leaves the model's validity region."""

    def __init__(self, message: str, n_proc: float):
        super().__init__(message)
        self.n_proc = n_proc


@dataclass(frozen=True)
class AlphaDecomposition:
    """Constants generating the serial fraction (1-alpha_total)(N)."""

    alpha_sw: float
    ctx_switch_clocks: float
    total_clocks: float
    loop_clocks_per_pu: float = 1.0
    bio_factor: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha_sw", "ctx_switch_clocks", "loop_clocks_per_pu"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.total_clocks <= 0:
            raise ValueError("total_clocks must be > 0")
        if self.bio_factor < 1:
            raise ValueError("bio_factor must be >= 1")

    @property
    def constant_part(self) -> float:
        """N-independent serial fraction: alpha_sw + ctx/total."""
        return self.alpha_sw + self.ctx_switch_clocks / self.total_clocks

    @property
    def slope(self) -> float:
        """Serial fraction added per PU: bio * loop / total."""
        return self.bio_factor * self.loop_clocks_per_pu / self.total_clocks


@dataclass(frozen=True)
class MachineModel:
    """Per-PU payload performance and clock frequency of the modeled machine."""

    perf_per_pu: float = 100e9
    clock_freq: float = 1e9

    def __post_init__(self) -> None:
        if self.perf_per_pu <= 0 or self.clock_freq <= 0:
            raise ValueError("perf_per_pu and clock_freq must be > 0")


@dataclass(frozen=True)
class BenchmarkPreset:
    """A named workload with its overhead decomposition."""

    name: str
    decomposition: AlphaDecomposition


#: Machine the built-in presets are calibrated for: 100 Gflop/s per PU at 1 GHz.
DEFAULT_MACHINE = MachineModel(perf_per_pu=100e9, clock_freq=1e9)

_CTX_SWITCH_CLOCKS = 1e4   # clock cycles burned per context change
_TOTAL_CLOCKS = 2e13       # clock cycles in the full benchmark run
_BIO_CLOCK_FACTOR = 5000.0  # grid-time sync period vs hardware clock period

_PRESETS = {
    "HPL": BenchmarkPreset("HPL", AlphaDecomposition(
        alpha_sw=2e-8, ctx_switch_clocks=_CTX_SWITCH_CLOCKS,
        total_clocks=_TOTAL_CLOCKS, loop_clocks_per_pu=1.0, bio_factor=1.0)),
    "HPCG": BenchmarkPreset("HPCG", AlphaDecomposition(
        alpha_sw=2e-6, ctx_switch_clocks=_CTX_SWITCH_CLOCKS,
        total_clocks=_TOTAL_CLOCKS, loop_clocks_per_pu=1.0, bio_factor=1.0)),
    "NN": BenchmarkPreset("NN", AlphaDecomposition(
        alpha_sw=2e-6, ctx_switch_clocks=_CTX_SWITCH_CLOCKS,
        total_clocks=_TOTAL_CLOCKS, loop_clocks_per_pu=1.0,
        bio_factor=_BIO_CLOCK_FACTOR)),
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> BenchmarkPreset:
    """Look up a built-in benchmark preset (HPL, HPCG or NN)."""
    try:
        return _PRESETS[name.upper()]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; expected one of "
            f"{', '.join(_PRESETS)}") from None


def with_overrides(d: AlphaDecomposition, **changes: float) -> AlphaDecomposition:
    """Return a copy of the decomposition with selected constants replaced."""
    return replace(d, **changes)


def alpha_os(n_proc: float, d: AlphaDecomposition) -> float:
    """System-side serial fraction: context switching plus per-PU looping."""
    return (d.ctx_switch_clocks / d.total_clocks
            + d.bio_factor * d.loop_clocks_per_pu * n_proc / d.total_clocks)


def alpha_total(n_proc: float, d: AlphaDecomposition) -> float:
    """Total serial fraction alpha_sw + alpha_os(N).

    Raises :class:`ModelDomainError` when the result reaches 1: a serial
    fraction of one or more means the model no longer describes anything,
    and clamping would silently fabricate curves.
    """
    total = d.alpha_sw + alpha_os(n_proc, d)
    if total >= 1.0:
        raise ModelDomainError(
            f"serial fraction {total:.6g} >= 1 at N={n_proc:.6g}: "
            f"outside model validity", n_proc)
    return total


def rmax_of_rpeak(r_peak: float, m: MachineModel,
                  d: AlphaDecomposition) -> PerformancePoint:
    """Payload performance delivered at a given nominal performance.

    The PU count N = r_peak / perf_per_pu is treated as continuous, as the
    swept curves require.
    """
    if r_peak < m.perf_per_pu:
        raise ValueError(
            f"r_peak {r_peak:.6g} below one PU ({m.perf_per_pu:.6g} flop/s)")
    n_proc = r_peak / m.perf_per_pu
    eff = efficiency_from_nonparallel(n_proc, alpha_total(n_proc, d))
    return PerformancePoint(r_peak=r_peak, r_max=r_peak * eff, efficiency=eff)


@dataclass(frozen=True)
class PeakPoint:
    """Interior maximum of the R_Max(R_Peak) curve.

    ``n_star`` is the continuous maximizer; ``n_star_int`` is whichever of
    its two neighbouring integers delivers the higher payload performance.
    """

    n_star: float
    r_peak_star: float
    r_max_star: float
    n_star_int: int
    r_max_star_int: float


def _rmax_at(n_proc: float, m: MachineModel, d: AlphaDecomposition) -> float:
    # Bare curve evaluation for the search; domain errors cannot occur below
    # the validity bound checked by the caller.
    beta = d.alpha_sw + alpha_os(n_proc, d)
    return n_proc * m.perf_per_pu / (1.0 + (n_proc - 1.0) * beta)


def _golden_section_log_max(f, lo: float, hi: float, rel_tol: float) -> float:
    """Maximize a unimodal f over [lo, hi] by golden-section on log x."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = f(math.exp(c)), f(math.exp(e))
    while b - a > rel_tol:
        if fc > fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(math.exp(e))
    return math.exp(0.5 * (a + b))


def peak_point(m: MachineModel, d: AlphaDecomposition,
               rel_tol: float = 1e-6) -> PeakPoint:
    """Locate the PU count where payload performance turns over.

    A golden-section search over log N finds the maximum numerically; the
    exact maximizer of N / (1 + (N-1)*(a + b*N)) is sqrt((1-a)/b), and the
    two must agree, which calling code uses as a cross-check.  With a zero
    slope (no looping cost) the curve saturates monotonically and there is
    no interior maximum to report.
    """
    if d.slope <= 0.0:
        raise ValueError(
            "no interior maximum: serial fraction does not grow with N")

    def f(n: float) -> float:
        return _rmax_at(n, m, d)

    # Bracket the turnover by doubling, independent of the analytic form.
    hi = 4.0
    while f(hi) >= f(hi / 2.0):
        hi *= 2.0
        if hi > 1e15:
            raise ValueError("no interior maximum found below N=1e15")
    n_star = _golden_section_log_max(f, 1.0, hi, rel_tol)

    lo_int = max(1, math.floor(n_star))
    hi_int = lo_int + 1
    n_int = lo_int if f(lo_int) >= f(hi_int) else hi_int
    return PeakPoint(
        n_star=n_star,
        r_peak_star=n_star * m.perf_per_pu,
        r_max_star=f(n_star),
        n_star_int=n_int,
        r_max_star_int=f(n_int),
    )


def analytic_peak_n(d: AlphaDecomposition) -> float:
    """Closed-form maximizer sqrt((1-a)/b) of the payload curve."""
    if d.slope <= 0.0:
        raise ValueError(
            "no interior maximum: serial fraction does not grow with N")
    return math.sqrt((1.0 - d.constant_part) / d.slope)
