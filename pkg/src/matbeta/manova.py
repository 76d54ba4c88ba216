"""Multivariate linear model, classical MANOVA criteria and the matrix p-value.

Model ``Y = X B + E`` with hypothesis ``C B M = H``. Generalised inverses are
Moore-Penrose throughout; the projections they produce do not depend on that
choice, so neither do S_H and S_E.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import symmat
from .errors import DegenerateDesign, InvalidInput, NotEstimable, NotPD, ShapeError
from .hyper import SeriesControl
from .matvbeta import ProbResult, df_to_params, upper_prob_auto

RANK_TOL = 1e-10
LEVELS = (0.05, 0.01)


def _matrix(A, name):
    A = np.array(A, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.size == 0:
        raise ShapeError(f"{name} must be a non-empty 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


@dataclass
class LinearModel:
    Y: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        self.Y = _matrix(self.Y, "Y")
        self.X = _matrix(self.X, "X")
        if self.Y.shape[0] != self.X.shape[0]:
            raise ShapeError(f"Y has {self.Y.shape[0]} rows but X has {self.X.shape[0]}")
        if self.n < self.m + self.r:
            raise DegenerateDesign(f"need n >= m + rank(X): n={self.n}, m={self.m}, r={self.r}")

    @property
    def n(self):
        return self.Y.shape[0]

    @property
    def m(self):
        return self.Y.shape[1]

    @property
    def p(self):
        return self.X.shape[1]

    @property
    def r(self):
        return symmat.rank(self.X, RANK_TOL)


@dataclass
class HypothesisSpec:
    C: np.ndarray
    M: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None

    def resolve(self, model):
        """Fill defaults (M = I, H = 0) and check shapes and ranks against ``model``."""
        C = _matrix(self.C, "C")
        if C.shape[1] != model.p:
            raise ShapeError(f"C has {C.shape[1]} columns, X has {model.p}")
        M = np.eye(model.m) if self.M is None else _matrix(self.M, "M")
        if M.shape[0] != model.m:
            raise ShapeError(f"M has {M.shape[0]} rows, Y has {model.m} columns")
        q, g = C.shape[0], M.shape[1]
        H = np.zeros((q, g)) if self.H is None else _matrix(self.H, "H")
        if H.shape != (q, g):
            raise ShapeError(f"H must be {q}x{g}, got {H.shape}")
        if symmat.rank(C, RANK_TOL) != q:
            raise DegenerateDesign(f"C must have full row rank {q}")
        if symmat.rank(M, RANK_TOL) != g:
            raise DegenerateDesign(f"M must have full column rank {g}")
        return C, M, H


@dataclass
class SSMatrices:
    S_H: np.ndarray
    S_E: np.ndarray
    nu_h: int
    nu_e: int

    def __post_init__(self):
        self.S_H = symmat.symmetrize(self.S_H)
        self.S_E = symmat.symmetrize(self.S_E)
        if self.S_H.shape != self.S_E.shape:
            raise ShapeError(f"S_H is {self.S_H.shape}, S_E is {self.S_E.shape}")
        if int(self.nu_h) != self.nu_h or int(self.nu_e) != self.nu_e or self.nu_h < 1 or self.nu_e < 1:
            raise InvalidInput(f"degrees of freedom must be positive integers, got {self.nu_h}, {self.nu_e}")
        self.nu_h, self.nu_e = int(self.nu_h), int(self.nu_e)

    @property
    def g(self):
        return self.S_H.shape[0]


def fit(model):
    """Least-squares B = X^+ Y."""
    return symmat.pinv(model.X) @ model.Y


def sums_of_squares(model, hyp):
    C, M, H = hyp.resolve(model)
    X, Y = model.X, model.Y
    X_pinv = symmat.pinv(X)
    # C beta is estimable iff C lies in the row space of X
    if np.max(np.abs(C @ X_pinv @ X - C)) > 1e-8 * max(1.0, symmat.maxabs(C)):
        raise NotEstimable("C B is not estimable: rows of C are outside the row space of X")
    W = C @ symmat.pinv(X.T @ X) @ C.T
    if symmat.rank(W, RANK_TOL) < W.shape[0]:
        raise NotEstimable("C (X'X)^- C' is singular")
    D = C @ fit(model) @ M - H
    S_H = D.T @ np.linalg.solve(W, D)
    resid = Y - X @ (X_pinv @ Y)
    S_E = M.T @ resid.T @ resid @ M
    return SSMatrices(S_H, S_E, C.shape[0], model.n - model.r)


def f_statistic(ss):
    """F_c = S_E^{-1/2} S_H S_E^{-1/2}."""
    root = symmat.inv_sqrt_pd(ss.S_E)
    return symmat.symmetrize(root @ ss.S_H @ root)


def u_statistic(ss):
    """U_c = S_H^{1/2} (S_H + S_E)^{-1} S_H^{1/2}."""
    total = ss.S_H + ss.S_E
    try:
        inv_total = symmat.inv(total)
    except ValueError as exc:
        raise NotPD(f"S_H + S_E is not positive definite: {exc}") from None
    root = symmat.sqrt_psd(ss.S_H)
    return symmat.symmetrize(root @ inv_total @ root)


def swap_parameters(m, nu_h, nu_e):
    """(m, nu_H, nu_E) -> (nu_H, m, nu_E + nu_H - m) when m > nu_H."""
    if min(m, nu_h, nu_e) < 1:
        raise InvalidInput(f"parameters must be positive, got {(m, nu_h, nu_e)}")
    if m <= nu_h:
        return m, nu_h, nu_e
    new_e = nu_e + nu_h - m
    if new_e <= 0:
        raise DegenerateDesign(f"swapped error df nu_E + nu_H - m = {new_e} <= 0")
    return nu_h, m, new_e


def spectrum(fc):
    """Eigenvalues of F_c, descending, with values below 1e-10 * max set to 0."""
    lam = symmat.eigenvalues(fc)
    top = max(abs(lam[0]), abs(lam[-1]))
    lam = np.where(np.abs(lam) <= RANK_TOL * top, 0.0, lam)
    if lam[-1] < 0:
        raise NotPD(f"F_c has a negative eigenvalue {lam[-1]:.6g}")
    return lam


@dataclass
class CriteriaReport:
    eigenvalues: list
    thetas: list
    s: int
    statistics: dict
    m: int = 0
    nu_h: int = 0
    nu_e: int = 0
    beta: float = 1.0
    reduced: tuple = ()
    p_value: Optional[float] = None
    prob: Optional[ProbResult] = None
    decisions: dict = field(default_factory=dict)
    kind_i_check: Optional[float] = None

    @property
    def reject(self):
        return self.decisions.get(0.05)


def criteria_from_spectrum(lam, nu_h, S_H=None, S_E=None):
    """Tables of classical statistics from the F_c spectrum ``lam``.

    Only the s = min(g, nu_H) leading eigenvalues enter the eigenvalue forms.
    V and lambda_min need a nonsingular S_H and are None otherwise; T_D needs
    the raw S_H and S_E.
    """
    lam = np.asarray(lam, dtype=float)
    g = lam.size
    s = min(g, nu_h)
    ls = lam[:s]
    th = ls / (1 + ls)
    full_rank = bool(np.all(lam > 0))
    stats = {}
    stats["Wilks_Lambda"] = float(np.prod(1 / (1 + lam)))
    stats["U"] = float(np.prod(lam / (1 + lam)))
    stats["V"] = float(np.prod(lam)) if full_rank else None
    stats["U_s"] = float(ls.sum())
    stats["V_s"] = float(th.sum())
    stats["W_s"] = float(np.sum(1 - th))
    stats["H_s"] = float(s / np.sum(1 + ls))
    if np.all(ls > 0):
        stats["R_s"] = float(s / np.sum(1 / th))
        stats["T_s"] = float(s / np.sum(1 / ls))
    else:
        stats["R_s"] = 0.0
        stats["T_s"] = 0.0
    stats["lambda_max"] = float(lam[0])
    stats["theta_max"] = float(lam[0] / (1 + lam[0]))
    stats["lambda_min"] = float(lam[-1]) if full_rank else None
    stats["theta_min"] = float(lam[-1] / (1 + lam[-1])) if full_rank else None
    if S_H is not None and S_E is not None:
        stats["T_D"] = float(np.trace(S_H) / np.trace(S_E))
    else:
        stats["T_D"] = None
    return CriteriaReport(
        eigenvalues=[float(v) for v in lam],
        thetas=[float(v / (1 + v)) for v in lam],
        s=s,
        statistics=stats,
    )


def classical_criteria(ss):
    report = criteria_from_spectrum(spectrum(f_statistic(ss)), ss.nu_h, ss.S_H, ss.S_E)
    if np.all(np.asarray(report.eigenvalues) > 0):
        # determinant forms, as a cross-check on the eigenvalue products
        total = ss.S_H + ss.S_E
        report.statistics["Wilks_Lambda_det"] = math.exp(symmat.logdet(ss.S_E) - symmat.logdet(total))
    return report


def _p_value(report, lam, m, nu_h, nu_e, beta, ctrl, kind_i_check=None):
    m2, nh2, ne2 = swap_parameters(m, nu_h, nu_e)
    report.m, report.nu_h, report.nu_e, report.beta = m, nu_h, nu_e, float(beta)
    report.reduced = (m2, nh2, ne2)
    # after a swap the argument lives in dimension nu_H; keep the leading eigenvalues
    lead = np.asarray(lam[:m2], dtype=float)
    if np.all(lead == 0):
        # F > 0 almost surely
        report.p_value = 1.0
    elif np.any(lead == 0):
        raise NotPD(f"F_c has {int(np.sum(lead == 0))} zero eigenvalue(s) among the {m2} used; "
                    "P(F > F_c) needs a positive definite argument")
    else:
        params = df_to_params(m2, nh2, ne2, beta)
        report.prob = upper_prob_auto(np.diag(lead), params, "II", ctrl or SeriesControl())
        report.p_value = report.prob.consensus
    report.decisions = {level: report.p_value < level for level in LEVELS}
    report.kind_i_check = kind_i_check
    return report


def matrix_p_value(ss, beta=1, ctrl=None):
    """Classical criteria plus P(F > F_c) with F ~ BetaII(nu_H, nu_E) and decisions."""
    report = classical_criteria(ss)
    fc = f_statistic(ss)
    lam = np.asarray(report.eigenvalues)
    # the beta-I forms are evaluated at the spectrum of U_c; compare it to theta
    check = float(np.max(np.abs(symmat.eigenvalues(u_statistic(ss)) - lam / (1 + lam))))
    return _p_value(report, spectrum(fc), ss.g, ss.nu_h, ss.nu_e, beta, ctrl, check)


def fc_p_value(fc, nu_h, nu_e, beta=1, ctrl=None):
    """Same as :func:`matrix_p_value` but starting from F_c itself."""
    fc = symmat.symmetrize(fc)
    lam = spectrum(fc)
    report = criteria_from_spectrum(lam, nu_h)
    return _p_value(report, lam, fc.shape[0], nu_h, nu_e, beta, ctrl)


def cov_equality_test(S1, S2, nu1, nu2, beta=1, ctrl=None):
    """H0: Sigma_1 = Sigma_2 via F_c = S_2^{-1/2} S_1 S_2^{-1/2}."""
    S1 = symmat.symmetrize(S1)
    S2 = symmat.symmetrize(S2)
    symmat.sqrt_psd(S1)  # raises NotPSD on a bad S_1
    return matrix_p_value(SSMatrices(S1, S2, nu1, nu2), beta, ctrl)
