"""Matricvariate beta type I and II: densities, lower and upper probabilities.

Notation: ``U ~ BetaI_m(a, b)`` lives on 0 < U < I, ``F ~ BetaII_m(a, b)``
on the positive definite cone, and ``d = (m-1) beta/2 + 1`` is the shift that
appears in every formula below. All probability expressions depend on the
matrix argument only through its eigenvalues.

Each probability has three algebraically equivalent series forms (related by
Euler transformations of 2F1) which converge on different regions:

=========  ======================================================
lower I    |W|^a 2F1(a, d-b; a+d; W) and two Euler rewrites
upper I    pvBI1..3, the lower forms applied to I - W with a <-> b
lower II   |L|^a 2F1(a+b, a; a+d; -L) and two Euler rewrites
upper II   pvBII1..3, the lower forms applied to L^{-1} with a <-> b
=========  ======================================================
"""
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from . import symmat
from .errors import AllDiverged, InvalidInput, NotPD, OutsideSupport
from .hyper import HyperParams, SeriesControl, SeriesResult, Status, hyp_pfq
from .specfun import check_beta, ln_mv_beta

CLAMP_TOL = 1e-6
ROUNDING_TOL = 1e-6
UPPER_I = ("pvBI1", "pvBI2", "pvBI3")
UPPER_II = ("pvBII1", "pvBII2", "pvBII3")
EXPRESSIONS = UPPER_I + UPPER_II


@dataclass(frozen=True)
class BetaParams:
    m: int
    beta: float
    a: float
    b: float
    extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "beta", check_beta(self.beta, self.extended))
        if self.m < 1:
            raise InvalidInput(f"m must be >= 1, got {self.m}")
        low = (self.m - 1) * self.beta / 2
        if not (self.a > low and self.b > low):
            raise InvalidInput(f"need a, b > (m-1) beta/2 = {low}, got a={self.a}, b={self.b}")

    @property
    def shift(self):
        """(m-1) beta/2 + 1."""
        return (self.m - 1) * self.beta / 2 + 1

    def swapped(self):
        return BetaParams(self.m, self.beta, self.b, self.a, self.extended)


def df_to_params(m, nu_h, nu_e, beta=1):
    """Degrees of freedom (nu_H, nu_E) to (a, b) = (beta nu_H / 2, beta nu_E / 2)."""
    return BetaParams(m, beta, beta * nu_h / 2, beta * nu_e / 2)


# ---------------------------------------------------------------- spectra


def _unit_spectrum(omega, m):
    """Eigenvalues of 0 < Omega < I and of I - Omega."""
    w = symmat.eigenvalues(omega)
    _check_dim(w, m)
    if not (w[-1] > 0 and w[0] < 1):
        raise OutsideSupport(f"need 0 < Omega < I, eigenvalues span [{w[-1]:.6g}, {w[0]:.6g}]")
    return w, 1.0 - w


def _pd_spectrum(nabla, m):
    lam = symmat.eigenvalues(nabla)
    _check_dim(lam, m)
    if not lam[-1] > 0:
        raise NotPD(f"argument must be positive definite (min eigenvalue {lam[-1]:.6g})")
    return lam


def _check_dim(w, m):
    if w.size != m:
        raise InvalidInput(f"matrix is {w.size}x{w.size} but the distribution has m={m}")


# ---------------------------------------------------------------- densities


def log_density_beta1(U, p):
    w, wc = _unit_spectrum(U, p.m)
    e = p.shift
    return -ln_mv_beta(p.m, p.beta, p.a, p.b) + (p.a - e) * np.log(w).sum() + (p.b - e) * np.log(wc).sum()


def log_density_beta2(F, p):
    lam = _pd_spectrum(F, p.m)
    return -ln_mv_beta(p.m, p.beta, p.a, p.b) + (p.a - p.shift) * np.log(lam).sum() - (p.a + p.b) * np.log1p(lam).sum()


# ---------------------------------------------------------------- series


def _scaled(log_pref, params, x, ctrl):
    """log_pref + log 2F1; the status and diagnostics come from the series."""
    r = hyp_pfq(params, x, ctrl)
    if r.status is Status.DIVERGED:
        return r
    return SeriesResult(
        log_pref + r.log_abs, r.sign, r.status, r.degree_used, r.tail_estimate,
        r.rounding_error, r.radius, r.note, r.contributions,
    )


def _variant(variant):
    if variant not in (1, 2, 3):
        raise InvalidInput(f"variant must be 1, 2 or 3, got {variant}")
    return variant


def _lower_i(w, wc, p, variant, ctrl):
    a, b, d, m, beta = p.a, p.b, p.shift, p.m, p.beta
    c = ln_mv_beta(m, beta, a, d) - ln_mv_beta(m, beta, a, b)
    lw, lwc = np.log(w).sum(), np.log(wc).sum()
    if variant == 1:
        return _scaled(c + a * lw, HyperParams((a, d - b), (a + d,), beta), w, ctrl)
    if variant == 2:
        return _scaled(c + a * lw + b * lwc, HyperParams((d, a + b), (a + d,), beta), w, ctrl)
    return _scaled(c + a * lw + (b - d) * lwc, HyperParams((d, d - b), (a + d,), beta), -w / wc, ctrl)


def _upper_i(w, wc, p, variant, ctrl):
    a, b, d, m, beta = p.a, p.b, p.shift, p.m, p.beta
    c = ln_mv_beta(m, beta, b, d) - ln_mv_beta(m, beta, a, b)
    lw, lwc = np.log(w).sum(), np.log(wc).sum()
    if variant == 1:
        return _scaled(c + b * lwc, HyperParams((b, d - a), (b + d,), beta), wc, ctrl)
    if variant == 2:
        return _scaled(c + b * lwc + a * lw, HyperParams((d, a + b), (b + d,), beta), wc, ctrl)
    return _scaled(c + b * lwc + (a - d) * lw, HyperParams((d, d - a), (b + d,), beta), -wc / w, ctrl)


def _lower_ii(lam, p, variant, ctrl):
    a, b, d, m, beta = p.a, p.b, p.shift, p.m, p.beta
    c = ln_mv_beta(m, beta, a, d) - ln_mv_beta(m, beta, a, b)
    ll, l1 = np.log(lam).sum(), np.log1p(lam).sum()
    if variant == 1:
        return _scaled(c + a * ll, HyperParams((a + b, a), (a + d,), beta), -lam, ctrl)
    if variant == 2:
        return _scaled(c + a * ll - (a + b - d) * l1, HyperParams((d - b, d), (a + d,), beta), -lam, ctrl)
    # |I + L^{-1}|^{-a} = |L|^a |I + L|^{-a}
    return _scaled(c + a * (ll - l1), HyperParams((d - b, a), (a + d,), beta), lam / (1 + lam), ctrl)


def _upper_ii(lam, p, variant, ctrl):
    a, b, d, m, beta = p.a, p.b, p.shift, p.m, p.beta
    c = ln_mv_beta(m, beta, b, d) - ln_mv_beta(m, beta, a, b)
    ll, l1 = np.log(lam).sum(), np.log1p(lam).sum()
    inv = 1.0 / lam
    if variant == 1:
        return _scaled(c - b * ll, HyperParams((a + b, b), (b + d,), beta), -inv, ctrl)
    if variant == 2:
        # |I + L^{-1}| = |I + L| / |L|
        return _scaled(c - b * ll - (a + b - d) * (l1 - ll), HyperParams((d - a, d), (b + d,), beta), -inv, ctrl)
    return _scaled(c - b * l1, HyperParams((d - a, b), (b + d,), beta), 1.0 / (1 + lam), ctrl)


def lower_prob_beta1(omega, p, variant=1, ctrl=None):
    """P(U < Omega) for U ~ BetaI_m(a, b)."""
    w, wc = _unit_spectrum(omega, p.m)
    return _lower_i(w, wc, p, _variant(variant), ctrl)


def upper_prob_beta1(omega, p, variant=1, ctrl=None):
    """P(U > Omega) for U ~ BetaI_m(a, b), expressions pvBI1..3."""
    w, wc = _unit_spectrum(omega, p.m)
    return _upper_i(w, wc, p, _variant(variant), ctrl)


def lower_prob_beta2(nabla, p, variant=1, ctrl=None):
    """P(F < nabla) for F ~ BetaII_m(a, b)."""
    return _lower_ii(_pd_spectrum(nabla, p.m), p, _variant(variant), ctrl)


def upper_prob_beta2(nabla, p, variant=1, ctrl=None):
    """P(F > nabla) for F ~ BetaII_m(a, b), expressions pvBII1..3."""
    return _upper_ii(_pd_spectrum(nabla, p.m), p, _variant(variant), ctrl)


# ---------------------------------------------------------------- consensus


@dataclass
class ExpressionOutcome:
    """One expression's probability.

    ``status`` is the series status, except that a finished series whose value
    is swamped by cancellation or lands outside [0, 1] is reported as
    Diverged (numerically); the underlying status stays in ``series_status``.
    """

    name: str
    status: Status
    raw: float
    value: float
    degree_used: int
    tail_estimate: float
    rounding_error: float
    radius: float
    series_status: Status
    note: str = ""

    @property
    def usable(self):
        return self.status is not Status.DIVERGED

    @property
    def finished(self):
        return self.status in (Status.CONVERGED, Status.TERMINATED)


@dataclass
class ProbResult:
    outcomes: dict
    consensus: float
    raw_consensus: float
    agreement_spread: float
    chosen_expressions: list = field(default_factory=list)
    truncated_only: bool = False

    def __getitem__(self, name):
        return self.outcomes[name]


def _outcome(name, r):
    if r.status is Status.DIVERGED:
        return ExpressionOutcome(name, r.status, math.nan, math.nan, r.degree_used, r.tail_estimate,
                                 r.rounding_error, r.radius, r.status, r.note)
    raw = r.value
    notes = [r.note] if r.note else []
    status = r.status
    if not math.isfinite(raw) or not (-CLAMP_TOL <= raw <= 1 + CLAMP_TOL):
        status = Status.DIVERGED
        notes.append(f"value {raw:.6g} outside [0, 1]")
    if r.rounding_error > ROUNDING_TOL:
        status = Status.DIVERGED
        notes.append(f"cancellation: relative rounding error up to {r.rounding_error:.2g}")
    value = min(max(raw, 0.0), 1.0) if math.isfinite(raw) else math.nan
    return ExpressionOutcome(name, status, raw, value, r.degree_used, r.tail_estimate,
                             r.rounding_error, r.radius, r.status, "; ".join(notes))


def _spectra_for(arg, p, kind):
    """(w, 1-w, lam) for either a beta-I point Omega or a beta-II point nabla."""
    if kind in ("II", 2):
        lam = _pd_spectrum(arg, p.m)
        return lam / (1 + lam), 1.0 / (1 + lam), lam
    if kind in ("I", 1):
        w, wc = _unit_spectrum(arg, p.m)
        return w, wc, w / wc
    raise InvalidInput(f"kind must be 'I' or 'II', got {kind!r}")


def upper_prob_spectrum(lam, p, ctrl=None):
    """All six expressions of P(F > L) from the eigenvalues ``lam`` of L."""
    lam = np.asarray(lam, dtype=float)
    return _combine(lam / (1 + lam), 1.0 / (1 + lam), lam, p, ctrl)


def upper_prob_auto(arg, p, kind="II", ctrl=None):
    """Evaluate pvBI1..3 and pvBII1..3 and combine them.

    For kind II the argument is nabla and the beta-I forms use Omega =
    nabla (I + nabla)^{-1}; for kind I the argument is Omega and nabla =
    Omega (I - Omega)^{-1}. Both describe the same event, so all six target
    one number. Diverged expressions are dropped; the consensus is the median
    of the converged or terminated ones, falling back to truncated ones
    (``truncated_only``) when nothing finished.
    """
    w, wc, lam = _spectra_for(arg, p, kind)
    return _combine(w, wc, lam, p, ctrl)


def _combine(w, wc, lam, p, ctrl):
    results = {}
    for v, name in enumerate(UPPER_I, start=1):
        results[name] = _upper_i(w, wc, p, v, ctrl)
    for v, name in enumerate(UPPER_II, start=1):
        results[name] = _upper_ii(lam, p, v, ctrl)
    outcomes = {name: _outcome(name, r) for name, r in results.items()}
    usable = [name for name, o in outcomes.items() if o.usable]
    if not usable:
        raise AllDiverged("no expression produced a usable value", outcomes)
    chosen = [name for name in usable if outcomes[name].finished]
    truncated_only = not chosen
    if truncated_only:
        chosen = usable
    raw = statistics.median(outcomes[n].raw for n in chosen)
    spread_pool = [outcomes[n].raw for n in usable]
    spread = max(spread_pool) - min(spread_pool)
    return ProbResult(outcomes, min(max(raw, 0.0), 1.0), raw, spread, chosen, truncated_only)
