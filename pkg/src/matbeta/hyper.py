"""Truncated pFq of one matrix argument, summed degree by degree.

The argument enters only through its eigenvalues. Each degree-k contribution
is a sum over partitions of k of

    prod_i [a_i]_kappa / prod_j [b_j]_kappa * C_kappa(x) / k!

and both the per-degree sums and the running total are kept as signed
logarithms, so values far below 1e-300 or above 1e300 survive.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadLowerParameter
from .jack import jack_table
from .specfun import PochhammerTable, check_beta, log_factorial

EPS = np.finfo(float).eps
BOUNDARY = 1e-9
INT_TOL = 1e-12
LOWER_TOL = 1e-9
# Jack-table cost grows roughly like K^(m+3); beyond m = 3 the default depth is
# trimmed so one series stays in the ten-second range. ctrl.dim_caps=False lifts it.
DIM_DEGREE_CAPS = {4: 120, 5: 80, 6: 55, 7: 45, 8: 40}
LARGE_DIM_CAP = 30


class Convergence(enum.Enum):
    ALWAYS = "AlwaysConverges"
    UNIT_BALL = "ConvergesInUnitBall"
    DIVERGES_UNLESS_TERMINATING = "DivergesUnlessTerminating"


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    TERMINATED = "Terminated"
    TRUNCATED = "Truncated"
    DIVERGED = "Diverged"


@dataclass(frozen=True)
class HyperParams:
    upper: tuple
    lower: tuple
    beta: float = 1

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        object.__setattr__(self, "beta", check_beta(self.beta))

    def check_lower(self, m):
        for b in self.lower:
            for j in range(m):
                v = -b + j * self.beta / 2
                if v > -LOWER_TOL and abs(v - round(v)) <= LOWER_TOL:
                    raise BadLowerParameter(
                        f"lower parameter {b}: -b + {j}*beta/2 = {v:g} is a non-negative integer"
                    )


@dataclass(frozen=True)
class SeriesControl:
    max_degree: int = 200
    rel_tol: float = 1e-12
    stall_window: int = 3
    divergence_window: int = 10
    dim_caps: bool = True

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be >= 1")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    def degree_limit(self, m):
        """max_degree, trimmed for large m unless ``dim_caps`` is off."""
        if not self.dim_caps or m <= 3:
            return self.max_degree
        return min(self.max_degree, DIM_DEGREE_CAPS.get(m, LARGE_DIM_CAP))


@dataclass
class SeriesResult:
    """Outcome of a truncated series.

    ``rounding_error`` bounds the relative error from cancellation, i.e.
    eps times the sum of absolute term values over the result. ``tail_estimate``
    is the magnitude of the last degree contribution, a heuristic not a bound.
    """

    log_abs: float
    sign: float
    status: Status
    degree_used: int
    tail_estimate: float
    rounding_error: float = 0.0
    radius: float = 0.0
    note: str = ""
    contributions: list = field(default_factory=list, repr=False)

    @property
    def value(self):
        if self.status is Status.DIVERGED or self.sign == 0:
            return math.nan if self.status is Status.DIVERGED else 0.0
        return self.sign * math.exp(self.log_abs)

    @property
    def trusted(self):
        return self.status is not Status.DIVERGED


def classify(p, q, spectral_radius=0.0):
    if p <= q:
        return Convergence.ALWAYS
    if p == q + 1:
        return Convergence.UNIT_BALL
    return Convergence.DIVERGES_UNLESS_TERMINATING


def detect_termination(params, m):
    """Degree beyond which every term vanishes, or None.

    An upper parameter equal to 0 gives degree 0 (the series is exactly 1); a
    negative integer -n gives a polynomial of degree n*m.
    """
    best = None
    for a in params.upper:
        n = round(-a)
        if n >= 0 and abs(a + n) <= INT_TOL:
            degree = n * m
            best = degree if best is None else min(best, degree)
    return best


def _log_add(la, sa, lb, sb):
    """(log|A+B|, sign) from signed logs."""
    if sb == 0:
        return la, sa
    if sa == 0:
        return lb, sb
    hi, lo = (la, lb) if la >= lb else (lb, la)
    shi, slo = (sa, sb) if la >= lb else (sb, sa)
    v = shi + slo * math.exp(lo - hi)
    if v == 0:
        return -math.inf, 0.0
    return hi + math.log(abs(v)), math.copysign(1.0, v)


def hyp_pfq(params, x, ctrl=None, table=None):
    """Sum the series at eigenvalues ``x``; see :class:`SeriesResult`."""
    ctrl = ctrl or SeriesControl()
    x = np.asarray(x, dtype=float).ravel()
    m = x.size
    params.check_lower(m)
    p, q = len(params.upper), len(params.lower)
    radius = float(np.max(np.abs(x))) if m else 0.0
    kind = classify(p, q, radius)
    stop = detect_termination(params, m)

    def diverged(note):
        return SeriesResult(math.nan, 0.0, Status.DIVERGED, 0, math.inf, math.inf, radius, note)

    if stop is None:
        if kind is Convergence.DIVERGES_UNLESS_TERMINATING:
            return diverged(f"p={p} > q+1 and the series does not terminate")
        if kind is Convergence.UNIT_BALL and radius > 1 + BOUNDARY:
            return diverged(f"p=q+1 and ||X|| = {radius:.10g} > 1")
    boundary = stop is None and kind is Convergence.UNIT_BALL and abs(radius - 1) <= BOUNDARY

    limit = ctrl.degree_limit(m)
    last = limit if stop is None else min(stop, limit)
    if table is None:
        table = jack_table(x, params.beta, 0)
    rows = m
    upper = [PochhammerTable(a, params.beta, rows, last) for a in params.upper]
    lower = [PochhammerTable(b, params.beta, rows, last) for b in params.lower]

    total_l, total_s = -math.inf, 0.0
    abs_l = -math.inf
    contributions = []
    small_run = 0
    growth_run = 0
    status = None
    k = 0
    for k in range(last + 1):
        table.extend(k)
        parts = table.partitions(k)
        cvals = table.scaled(k)
        lc = np.full(parts.shape[0], -log_factorial(k) + k * table.log_scale)
        sg = np.ones(parts.shape[0])
        alive = np.ones(parts.shape[0], dtype=bool)
        for t in upper:
            la, sa, za = t.evaluate(parts)
            lc += la
            sg *= sa
            alive &= ~za
        for t in lower:
            lb, sb, _ = t.evaluate(parts)
            lc -= lb
            sg *= sb
        alive &= cvals != 0
        if alive.any():
            lc_a = lc[alive]
            top = lc_a.max()
            w = np.exp(lc_a - top) * cvals[alive]
            s = float(np.sum(sg[alive] * w))
            sabs = float(np.sum(np.abs(w)))
            contrib_l = top + math.log(abs(s)) if s != 0 else -math.inf
            contrib_s = math.copysign(1.0, s) if s != 0 else 0.0
            abs_l = np.logaddexp(abs_l, top + math.log(sabs)) if sabs > 0 else abs_l
        else:
            contrib_l, contrib_s = -math.inf, 0.0
        total_l, total_s = _log_add(total_l, total_s, contrib_l, contrib_s)
        contributions.append(contrib_l)
        if not math.isfinite(total_l) and total_s != 0:
            return diverged(f"partial sum overflowed at degree {k}")

        if stop is not None:
            continue
        small = total_s != 0 and contrib_l < math.log(ctrl.rel_tol) + total_l
        small_run = small_run + 1 if small else 0
        if k > 0 and contributions[k - 1] > -math.inf and contrib_l > contributions[k - 1]:
            growth_run += 1
        else:
            growth_run = 0
        if boundary and growth_run >= ctrl.divergence_window:
            return diverged(f"||X|| = 1 and contributions grew for {growth_run} degrees")
        if small_run >= ctrl.stall_window and not boundary:
            status = Status.CONVERGED
            break

    if status is None:
        if stop is not None and k >= stop:
            status = Status.TERMINATED
        else:
            status = Status.TRUNCATED
    tail = 0.0 if status is Status.TERMINATED else math.exp(contributions[k]) if contributions else 0.0
    if total_s == 0:
        rounding = 0.0 if abs_l == -math.inf else math.inf
    else:
        rounding = float(EPS * math.exp(min(abs_l - total_l, 700.0)))
    note = ""
    if stop is not None and status is Status.TERMINATED:
        note = "series sums 1" if stop == 0 else f"terminating polynomial of degree {stop}"
    elif boundary:
        note = "||X|| = 1: convergence not guaranteed"
    elif status is Status.TRUNCATED and limit < ctrl.max_degree:
        note = f"depth capped at {limit} for m={m}"
    elif stop is not None and status is Status.TRUNCATED:
        note = f"terminating polynomial of degree {stop} cut at {k}"
    return SeriesResult(total_l, total_s, status, k, tail, rounding, radius, note, contributions)


def hyp_value(upper, lower, x, beta=1, ctrl=None):
    """Convenience: float value of pFq, NaN when diverged."""
    return hyp_pfq(HyperParams(tuple(upper), tuple(lower), beta), x, ctrl).value
