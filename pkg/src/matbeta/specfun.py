"""Multivariate gamma/beta functions and the generalised Pochhammer symbol.

Everything is parameterised by the algebra dimension ``beta`` (1, 2, 4, 8 for
the reals, complexes, quaternions and octonions); the Jack parameter is
``alpha = 2 / beta``.
"""
import math

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidInput

ALGEBRAS = (1, 2, 4, 8)
ZERO_TOL = 1e-12


def check_beta(beta, extended=False):
    if extended:
        if not (beta > 0 and math.isfinite(beta)):
            raise InvalidInput(f"beta must be positive, got {beta}")
        return float(beta)
    if beta not in ALGEBRAS:
        raise InvalidInput(f"beta must be one of {ALGEBRAS}, got {beta} (pass extended=True for other values)")
    return float(beta)


def ln_mv_gamma(m, beta, a):
    """log of pi^{m(m-1)beta/4} prod_i Gamma(a - (i-1) beta/2)."""
    total = m * (m - 1) * beta / 4 * math.log(math.pi)
    for i in range(m):
        arg = a - i * beta / 2
        if arg <= 0:
            raise DomainError(
                f"multivariate gamma needs a > {(m - 1) * beta / 2}, got a={a} (factor {i + 1})",
                index=i + 1,
            )
        total += math.lgamma(arg)
    return total


def ln_mv_beta(m, beta, a, b):
    return ln_mv_gamma(m, beta, a) + ln_mv_gamma(m, beta, b) - ln_mv_gamma(m, beta, a + b)


def pochhammer(a, k):
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def gen_pochhammer(a, kappa, beta):
    """[a]_kappa = prod_i (a - (i-1) beta/2)_{kappa_i}, computed as a plain product."""
    out = 1.0
    for i, part in enumerate(kappa):
        out *= pochhammer(a - i * beta / 2, part)
    return out


def pochhammer_is_zero(a, kappa, beta, tol=ZERO_TOL):
    """True when some factor a - (i-1) beta/2 + j (j < kappa_i) is an exact zero."""
    for i, part in enumerate(kappa):
        shift = a - i * beta / 2
        n = round(-shift)
        if abs(shift + n) <= tol and 0 <= n < part:
            return True
    return False


class PochhammerTable:
    """Row-wise log tables for fast ``log|[a]_kappa|`` over many partitions.

    ``log_abs[i, k]`` is ``log|(a - i beta/2)_k|`` with zero factors skipped,
    ``neg[i, k]`` counts negative factors and ``zero[i, k]`` flags an exact
    zero factor among the first ``k``.
    """

    def __init__(self, a, beta, rows, max_part):
        self.a = a
        self.log_abs = np.zeros((rows, max_part + 1))
        self.neg = np.zeros((rows, max_part + 1), dtype=np.int64)
        self.zero = np.zeros((rows, max_part + 1), dtype=bool)
        j = np.arange(max_part)
        for i in range(rows):
            f = a - i * beta / 2 + j
            is_zero = np.abs(f) <= ZERO_TOL
            safe = np.where(is_zero, 1.0, np.abs(f))
            self.log_abs[i, 1:] = np.cumsum(np.log(safe))
            self.neg[i, 1:] = np.cumsum(f < -ZERO_TOL)
            self.zero[i, 1:] = np.cumsum(is_zero) > 0

    def evaluate(self, parts):
        """(log|value|, sign, is_zero) for an int array of padded partitions."""
        rows = np.arange(parts.shape[1])
        log_abs = self.log_abs[rows, parts].sum(axis=1)
        neg = self.neg[rows, parts].sum(axis=1)
        zero = self.zero[rows, parts].any(axis=1)
        sign = np.where(neg % 2 == 0, 1.0, -1.0)
        return log_abs, sign, zero


def log_factorial(k):
    return float(gammaln(k + 1))
