"""Multi-run aggregation and the two-tailed Welch t-test.

The t distribution is evaluated through a from-scratch regularized
incomplete beta function (continued fraction, modified Lentz method), so
library statistics packages stay available as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import RunTrace


@dataclass(frozen=True)
class ExperimentSummary:
    """Table-style summary of one method's independent runs."""

    method: str
    best_fitnesses: list[float]
    average_best: float
    global_best: float
    averaged_trace: list[tuple[int, float]]  # (evaluations, mean of per-run averages)


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float


def summarize(traces: list[RunTrace], method: str = "") -> ExperimentSummary:
    """Per-run bests, their mean and max, and the across-run mean trace."""
    if not traces:
        raise ValueError("summarize needs at least one run trace")
    schedules = {tuple(evals for evals, _, _ in t.checkpoints) for t in traces}
    if len(schedules) != 1:
        raise ValueError("run traces do not share a checkpoint schedule")

    bests = [t.best_fitness for t in traces]
    evals = [e for e, _, _ in traces[0].checkpoints]
    avg_matrix = np.array([[avg for _, avg, _ in t.checkpoints] for t in traces])
    averaged = list(zip(evals, [float(v) for v in avg_matrix.mean(axis=0)]))
    return ExperimentSummary(
        method=method,
        best_fitnesses=bests,
        average_best=float(np.mean(bests)),
        global_best=float(np.max(bests)),
        averaged_trace=averaged,
    )


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz method."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # use the symmetry transform where the continued fraction converges fast
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_cdf(x: float, df: float) -> float:
    """CDF of Student's t with df degrees of freedom."""
    if df <= 0.0:
        raise ValueError("degrees of freedom must be positive")
    if x == 0.0:
        return 0.5
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x * x))
    return tail if x < 0.0 else 1.0 - tail


def t_test_two_tailed(sample_a, sample_b) -> TTestResult:
    """Welch's unequal-variance t-test with a two-tailed p-value.

    p is computed directly as I_{df/(df+t^2)}(df/2, 1/2), which is exactly
    symmetric in the sample order and exactly 1 for identical means.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least 2 values")
    va, vb = float(a.var(ddof=1)), float(b.var(ddof=1))
    na, nb = len(a), len(b)
    if va == 0.0 and vb == 0.0:
        raise ValueError("both samples have zero variance: t statistic undefined")

    se2 = va / na + vb / nb
    t = (float(a.mean()) - float(b.mean())) / math.sqrt(se2)
    df = se2 * se2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    if t == 0.0:
        p = 1.0
    else:
        p = regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t))
    return TTestResult(t_statistic=t, degrees_of_freedom=df, p_value=p)
