"""Monte Carlo check of P(F > nabla) by Wishart sampling (real case, Sigma = I).

Random numbers come from numpy's PCG64 bit generator. A run is split into
fixed-size blocks whose seeds are spawned from one ``SeedSequence``, so the
result depends only on (seed, samples) and not on how blocks are scheduled.
Chi variates are square roots of gamma deviates from numpy's ``standard_gamma``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import symmat
from .errors import InvalidInput, NotPD

RNG_ALGORITHM = "PCG64"
BLOCK = 20000


@dataclass(frozen=True)
class McConfig:
    m: int
    nu_h: int
    nu_e: int
    samples: int = 200000
    seed: int = 20240501

    def __post_init__(self):
        if self.samples < 1000:
            raise InvalidInput(f"need at least 1000 samples, got {self.samples}")
        if self.m < 1 or self.nu_h < 1:
            raise InvalidInput("m and nu_h must be positive")
        if self.nu_e < self.m:
            raise InvalidInput(f"need nu_e >= m for a nonsingular S_E, got nu_e={self.nu_e}, m={self.m}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInput("seed must be a 64-bit unsigned integer")


def sample_wishart(m, nu, rng, size=None):
    """W_m(nu, I) draws via the Bartlett factor T T'.

    T is lower triangular with T_ii ~ chi(nu - i) (0-based i) and N(0, 1)
    below the diagonal. For nu < m the Bartlett chi degrees would run out, so
    the draw is Z'Z with Z a nu x m normal matrix (rank nu).
    """
    if nu < 1:
        raise InvalidInput(f"nu must be >= 1, got {nu}")
    shape = () if size is None else (size,)
    if nu < m:
        Z = rng.standard_normal(shape + (nu, m))
        return np.swapaxes(Z, -1, -2) @ Z
    T = np.zeros(shape + (m, m))
    dfs = nu - np.arange(m)
    T[..., np.arange(m), np.arange(m)] = np.sqrt(2.0 * rng.standard_gamma(dfs / 2.0, size=shape + (m,)))
    rows, cols = np.tril_indices(m, -1)
    T[..., rows, cols] = rng.standard_normal(shape + (rows.size,))
    return T @ np.swapaxes(T, -1, -2)


def _inv_sqrt_batch(S):
    w, Q = np.linalg.eigh(S)
    return (Q / np.sqrt(w)[..., None, :]) @ np.swapaxes(Q, -1, -2)


def _counts(cfg, nabla, rng, n):
    S_H = sample_wishart(cfg.m, cfg.nu_h, rng, n)
    S_E = sample_wishart(cfg.m, cfg.nu_e, rng, n)
    R = _inv_sqrt_batch(S_E)
    F = R @ S_H @ R
    F = (F + np.swapaxes(F, -1, -2)) / 2
    D = np.linalg.eigvalsh(F - nabla)
    return int(np.sum(D[:, 0] > 0)), int(np.sum(D[:, -1] < 0))


def estimate_probs(cfg, nabla):
    """((p_upper, se_upper), (p_lower, se_lower)) for P(F > nabla) and P(F < nabla)."""
    nabla = symmat.symmetrize(nabla)
    if nabla.shape[0] != cfg.m:
        raise InvalidInput(f"nabla is {nabla.shape[0]}x{nabla.shape[0]}, config has m={cfg.m}")
    if not symmat.eigenvalues(nabla)[-1] > 0:
        raise NotPD("nabla must be positive definite")
    sizes = [BLOCK] * (cfg.samples // BLOCK)
    if cfg.samples % BLOCK:
        sizes.append(cfg.samples % BLOCK)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    upper = lower = 0
    for child, n in zip(children, sizes):
        u, l = _counts(cfg, nabla, np.random.Generator(np.random.PCG64(child)), n)
        upper += u
        lower += l
    out = []
    for hits in (upper, lower):
        p = hits / cfg.samples
        out.append((p, math.sqrt(p * (1 - p) / cfg.samples)))
    return tuple(out)


def estimate_upper_prob(cfg, nabla):
    """(estimate, standard error) of P(F > nabla), F = S_E^{-1/2} S_H S_E^{-1/2}."""
    return estimate_probs(cfg, nabla)[0]
