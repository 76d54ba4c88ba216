"""Jack polynomials C_kappa evaluated at a vector of eigenvalues.

Normalisation is the "C" one: for every degree k the values over all
partitions of k add up to ``(sum(x))**k``. Internally the code works with the
monic ``P`` normalisation and ``alpha = 2 / beta``.

Evaluation uses the one-variable branching rule

    P_kappa(x_1..x_n) = sum_mu psi_{kappa/mu} x_n^{|kappa|-|mu|} P_mu(x_1..x_{n-1})

over all ``mu`` interlacing ``kappa``. The branching coefficient is the
product, over boxes in rows touched by the strip but in untouched columns, of
``b_mu(s) / b_kappa(s)`` with ``b(s) = (alpha*arm + leg + 1) / (alpha*arm +
leg + alpha)``. Grouping those boxes by (row, column-height) turns each group
into a ratio of cumulative products, so one coefficient costs O(n^2) table
lookups instead of O(|kappa|).

The eigenvalues are divided by ``scale = max|x_i|`` before evaluation; by
homogeneity the degree-k values are the stored ones times ``scale**k``. This
keeps everything finite for high degrees on large arguments.
"""
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.special import gammaln

from .errors import InvalidInput, TruncationCapExceeded
from .partitions import partition_array
from .specfun import check_beta

HARD_CAP = 300


@njit(cache=True)
def _branch(kappas, n, tpow, prev, prev_strides, cum, out):
    """Branching sum for every row of ``kappas`` (all of one degree, length <= n).

    Depth-first walk over mu_0..mu_{n-2}, mu_r in [kappa_{r+1}, kappa_r]. The
    coefficient factors over row pairs (i <= r); level r multiplies in the
    factors of the pairs ending at r, so a leaf costs O(n) not O(n^2).
    """
    nfree = n - 1
    if nfree == 0:
        for row in range(kappas.shape[0]):
            k = 0
            for i in range(n):
                k += kappas[row, i]
            out[row] = tpow[k] * prev[0]
        return
    mu = np.zeros(nfree, dtype=np.int64)
    prod = np.ones(nfree + 1)
    size = np.zeros(nfree + 1, dtype=np.int64)
    idx = np.zeros(nfree + 1, dtype=np.int64)
    head = np.ones((nfree, nfree))  # head[i, r] = cum[r-i, mu_i - kappa_{r+1}]
    width = 0
    for row in range(kappas.shape[0]):
        kap = kappas[row]
        width = 0
        for i in range(n):
            if kap[i] > width:
                width = kap[i]
        # inv_den[r, v]: 1 / prod_{i<=r} den(i, r) at mu_r = kappa_{r+1} + v, times the i = r numerator
        inv_den = np.ones((nfree, width + 1))
        for r in range(nfree):
            lo = kap[r + 1]
            for v in range(kap[r] - lo + 1):
                mr = lo + v
                acc = cum[0, mr - lo]
                for i in range(r + 1):
                    d = r - i
                    acc *= cum[d, kap[i] - mr] / cum[d, kap[i] - lo]
                inv_den[r, v] = acc
        k = 0
        for i in range(n):
            k += kap[i]
        total = 0.0
        level = 0
        mu[0] = kap[1] - 1
        while level >= 0:
            mu[level] += 1
            mr = mu[level]
            lo = kap[level + 1]
            if mr > kap[level]:
                level -= 1
                continue
            f = prod[level] * inv_den[level, mr - lo]
            for i in range(level):
                f *= head[i, level] / cum[level - i, mu[i] - mr]
            sz = size[level] + mr
            ix = idx[level] + mr * prev_strides[level]
            if level == nfree - 1:
                total += f * tpow[k - sz] * prev[ix]
            else:
                for r in range(level + 1, nfree):
                    head[level, r] = cum[r - level, mr - kap[r + 1]]
                prod[level + 1] = f
                size[level + 1] = sz
                idx[level + 1] = ix
                level += 1
                mu[level] = kap[level + 1] - 1
        out[row] = total


def _cum_tables(alpha, rows, cap):
    """cum[d, a] = prod_{a' < a} (alpha a' + d + 1) / (alpha a' + d + alpha)."""
    a = np.arange(cap, dtype=float)
    cum = np.ones((max(rows, 1), cap + 1))
    for d in range(rows):
        cum[d, 1:] = np.cumprod((alpha * a + d + 1) / (alpha * a + d + alpha))
    return cum


def log_c_over_p(parts, alpha):
    """log(C_kappa / P_kappa) = log(k! alpha^k) - sum_s log(leg + alpha (arm + 1))."""
    parts = np.asarray(parts, dtype=np.int64)
    m = parts.shape[1]
    k = parts.sum(axis=1)
    padded = np.concatenate([parts, np.zeros((parts.shape[0], 1), dtype=np.int64)], axis=1)
    log_hook = np.zeros(parts.shape[0])
    for r in range(m):
        width = padded[:, r] - padded[:, r + 1]
        for i in range(r + 1):
            leg = (r - i) / alpha
            lo = padded[:, i] - padded[:, r] + 1
            hi = padded[:, i] - padded[:, r + 1]
            seg = gammaln(hi + 1 + leg) - gammaln(lo + leg)
            log_hook += np.where(width > 0, width * np.log(alpha) + seg, 0.0)
    return gammaln(k + 1) + k * np.log(alpha) - log_hook


class JackTable:
    """All C_kappa(x) with |kappa| <= max_degree and at most m parts.

    Degrees are computed on demand with :meth:`extend`. ``scaled(k)`` gives
    the values for ``x / scale``; multiply by ``scale**k`` (or add
    ``k * log(scale)``) to get C_kappa(x) itself.
    """

    def __init__(self, x, beta, max_degree=0, cap=HARD_CAP, extended=False):
        x = np.asarray(x, dtype=float).ravel()
        if x.size < 1 or not np.all(np.isfinite(x)):
            raise InvalidInput("eigenvalues must be a non-empty finite vector")
        self.beta = check_beta(beta, extended)
        self.alpha = 2.0 / self.beta
        self.eigenvalues = x
        self.m = x.size
        self.cap = cap
        top = float(np.max(np.abs(x)))
        self.scale = top if top > 0 else 1.0
        self.log_scale = float(np.log(self.scale))
        self._y = x / self.scale
        self._parts = []
        self._scaled = []
        self._alloc(16)
        self.extend(max_degree)

    @property
    def max_degree(self):
        return len(self._parts) - 1

    def _alloc(self, capacity):
        self._capacity = capacity
        self._cum = _cum_tables(self.alpha, self.m - 1, capacity)
        # dense stores for P^{(n)}, n = 0..m-1 (stage m is only kept per degree)
        self._strides = []
        self._store = []
        for n in range(self.m):
            dims = [capacity // (i + 1) + 1 for i in range(n)]
            strides = np.ones(max(n, 1), dtype=np.int64)
            for i in range(n - 2, -1, -1):
                strides[i] = strides[i + 1] * dims[i + 1]
            size = int(np.prod(dims)) if dims else 1
            store = np.zeros(size)
            if n == 0:
                store[0] = 1.0
            self._strides.append(strides)
            self._store.append(store)

    def extend(self, max_degree):
        if max_degree > self.cap:
            raise TruncationCapExceeded(f"degree {max_degree} exceeds the hard cap {self.cap}")
        if max_degree <= self.max_degree:
            return self
        if max_degree > self._capacity:
            capacity = self._capacity
            while capacity < max_degree:
                capacity *= 2
            self._alloc(min(capacity, max(self.cap, max_degree)))
            done = self.max_degree
            self._parts, self._scaled = [], []
            for k in range(done + 1):
                self._add_degree(k)
        for k in range(self.max_degree + 1, max_degree + 1):
            self._add_degree(k)
        return self

    def _add_degree(self, k):
        m = self.m
        parts = partition_array(k, m)
        lengths = (parts > 0).sum(axis=1)
        tpow_cache = {}
        values = None
        for n in range(1, m + 1):
            sel = np.nonzero(lengths <= n)[0]
            sub = np.ascontiguousarray(parts[sel])
            out = np.zeros(sub.shape[0])
            t = self._y[n - 1]
            tpow = tpow_cache.setdefault(n, t ** np.arange(k + 1, dtype=float))
            _branch(sub, n, tpow, self._store[n - 1], self._strides[n - 1], self._cum, out)
            if n < m:
                idx = sub[:, :n] @ self._strides[n][:n] if n > 0 else np.zeros(len(sub), dtype=np.int64)
                self._store[n][idx] = out
            else:
                values = out
        if m == 0:
            values = np.ones(1)
        scaled = values * np.exp(log_c_over_p(parts, self.alpha))
        self._parts.append(parts)
        self._scaled.append(scaled)

    def partitions(self, k):
        return self._parts[k]

    def scaled(self, k):
        return self._scaled[k]

    def degree_values(self, k):
        """C_kappa(x) for |kappa| = k (may overflow to inf for huge arguments)."""
        with np.errstate(over="ignore"):
            return self._scaled[k] * self.scale**k

    @property
    def values(self):
        out = {}
        for k in range(self.max_degree + 1):
            for kappa, v in zip(self._parts[k], self.degree_values(k)):
                out[tuple(int(p) for p in kappa if p > 0)] = float(v)
        return out

    def __getitem__(self, kappa):
        kappa = tuple(int(p) for p in kappa if p > 0)
        if len(kappa) > self.m:
            return 0.0
        k = sum(kappa)
        self.extend(k)
        padded = np.array(kappa + (0,) * (self.m - len(kappa)))
        row = np.nonzero((self._parts[k] == padded).all(axis=1))[0]
        return float(self.degree_values(k)[row[0]])


@lru_cache(maxsize=64)
def _cached_table(x, beta):
    return JackTable(np.array(x), beta)


def jack_table(x, beta, max_degree, cache=True):
    """Build (or fetch from a small cache and extend) the table for ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    if not cache:
        return JackTable(x, beta, max_degree)
    table = _cached_table(tuple(float(v) for v in x), float(check_beta(beta)))
    return table.extend(max_degree)


def jack_single(kappa, x, beta):
    kappa = tuple(int(p) for p in kappa if p > 0)
    x = np.asarray(x, dtype=float).ravel()
    if len(kappa) > x.size:
        return 0.0
    return jack_table(x, beta, sum(kappa))[kappa]
