"""Recursive least squares prediction for extending segments past their borders.

Cutting a signal into segments starves the border samples of analysis
windows.  Each segment is therefore continued on both sides with samples
forecast from its own interior: an RLS one-step predictor is trained over
the segment, its terminal weights frozen, and the forecast fed back on
itself.  The past side reuses the same machinery on the time-reversed
segment.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

# Forecast samples far outside the plausible signal range indicate the
# feedback loop has gone unstable; they are pinned here instead.
_CLAMP = 4.0


@dataclass(frozen=True)
class RlsConfig:
    """Exponentially-weighted RLS settings.

    ``order`` is the number of filter taps minus one: the regressor holds
    the ``order + 1`` most recent past samples.  ``forgetting`` is the
    exponential weight on old errors and ``init_reg`` the inverse of the
    initial covariance scale (P(0) = I / init_reg).
    """

    order: int = 52
    forgetting: float = 0.97
    init_reg: float = 0.01

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        if not 0.0 < self.forgetting <= 1.0:
            raise ValueError("forgetting must lie in (0, 1]")
        if self.init_reg <= 0:
            raise ValueError("init_reg must be positive")


def rls_run(signal, cfg: RlsConfig = RlsConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Adapt a one-step-ahead RLS predictor over a signal.

    At step n the regressor is [x(n-1), ..., x(n-order-1)] and the desired
    response is x(n) itself.  Weights start at zero, P at I / init_reg.

    Returns
    -------
    weights : terminal tap vector, length order + 1
    errors : a-priori prediction errors, one per adapted sample
    """
    x = np.asarray(signal, dtype=np.float64)
    taps = cfg.order + 1
    if x.ndim != 1 or x.size < taps + 1:
        raise ValueError(f"need a 1-d signal longer than {taps} samples")
    lam = cfg.forgetting
    P = np.eye(taps) / cfg.init_reg
    w = np.zeros(taps)
    errors = np.empty(x.size - taps)
    for n in range(taps, x.size):
        u = x[n - taps : n][::-1]
        Pu = P @ u
        gain = Pu / (lam + u @ Pu)
        err = x[n] - w @ u
        w = w + gain * err
        P = (P - np.outer(gain, Pu)) / lam
        P = 0.5 * (P + P.T)
        errors[n - taps] = err
    return w, errors


@dataclass(frozen=True)
class ExtendedSegment:
    """A segment flanked by ``length`` forecast samples on each side.

    ``samples[core_start : core_start + original length]`` is the original
    segment, bit for bit.
    """

    samples: np.ndarray
    core_start: int
    length: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        if self.core_start != self.length:
            raise ValueError("core must start right after the past-side extension")


def _forecast(x: np.ndarray, length: int, cfg: RlsConfig) -> np.ndarray:
    """Freeze terminal RLS weights on x, then roll the predictor forward."""
    w, _ = rls_run(x, cfg)
    taps = cfg.order + 1
    work = np.empty(taps + length)
    work[:taps] = x[-taps:]
    clamped = 0
    for i in range(length):
        pred = w @ work[i : i + taps][::-1]
        if abs(pred) > _CLAMP:
            pred = _CLAMP if pred > 0 else -_CLAMP
            clamped += 1
        work[taps + i] = pred
    if clamped:
        logger.warning("clamped %d of %d forecast samples to +/-%g", clamped, length, _CLAMP)
    return work[taps:]


def extend_segment(segment, length: int, cfg: RlsConfig = RlsConfig()) -> ExtendedSegment:
    """Continue a segment ``length`` samples into the past and the future.

    The future side feeds back one-step predictions from weights trained
    forward over the segment; the past side does the same on the reversed
    segment.  Forecast magnitudes are clamped to +/-4 (with a log warning)
    so a runaway predictor cannot corrupt the spectrogram scale.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    x = np.asarray(segment, dtype=np.float64)
    if length == 0:
        return ExtendedSegment(x.copy(), 0, 0)
    future = _forecast(x, length, cfg)
    past = _forecast(x[::-1], length, cfg)[::-1]
    return ExtendedSegment(np.concatenate([past, x, future]), length, length)
