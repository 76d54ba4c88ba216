"""Worked examples: published F_c matrices, degrees of freedom and targets.

The degrees of freedom of examples 1 and 3 are not printed next to the
matrices; they are inferred from the designs the matrices come from
(6 rootstocks x 8 trees, and two samples of 32), i.e. nu_H = 5, nu_E = 42 and
nu_1 = nu_2 = 31.
"""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Example:
    key: str
    title: str
    fc: np.ndarray
    nu_h: int
    nu_e: int
    target: float
    eigenvalues: tuple
    radius: float = None  # published ||-F_c^{-1}||
    expected_diverged: tuple = ()
    cov_equality: bool = False
    notes: tuple = field(default_factory=tuple)


EXAMPLES = {
    "1": Example(
        key="1",
        title="one-way MANOVA, apple rootstocks (m=4)",
        fc=np.array([
            [0.05322776, -0.01487401, 0.1982486, 0.07238464],
            [-0.01487401, 0.38103449, -0.3317237, 0.09765930],
            [0.19824861, -0.33172370, 1.6121905, 0.42164487],
            [0.07238464, 0.09765930, 0.4216449, 0.87498679],
        ]),
        nu_h=5,
        nu_e=42,
        target=8.679157e-18,
        eigenvalues=(1.875848, 0.7906445, 0.2289795, 0.02596715),
        radius=38.5102,
        expected_diverged=("pvBII1",),
        notes=("nu_H = 5, nu_E = 42 assumed from the 6 x 8 design",),
    ),
    "2A": Example(
        key="2A",
        title="2x4 factorial, factor A (rank 1, swapped parameters)",
        fc=np.array([[0.273464, 0.478255], [0.478255, 0.836411]]),
        nu_h=1,
        nu_e=24,
        target=2.765e-05,
        eigenvalues=(1.109875, 0.0),
        notes=(
            "published 2.765e-05 is not reproduced; a = nu_H/2, b = nu_E/2 after the swap "
            "gives (1 + 1.109875)^-11.5 = 1.866e-4, the exact rank-1 Roy tail",
        ),
    ),
    "2B": Example(
        key="2B",
        title="2x4 factorial, factor B",
        fc=np.array([[0.336837, -0.160550], [-0.160550, 0.100913]]),
        nu_h=3,
        nu_e=24,
        target=0.0119703,
        eigenvalues=(0.418102, 0.019648),
        radius=50.894747,
        expected_diverged=("pvBII1",),
    ),
    "2AB": Example(
        key="2AB",
        title="2x4 factorial, interaction AB",
        fc=np.array([[0.028637, 0.027744], [0.027744, 0.043918]]),
        nu_h=3,
        nu_e=24,
        target=0.4291338,
        eigenvalues=(0.065054, 0.007501),
        radius=133.31874,
        expected_diverged=("pvBII1",),
    ),
    "3": Example(
        key="3",
        title="equality of two covariance matrices (m=4)",
        fc=np.array([
            [0.5164511, -0.1089194, 0.2211275, 0.1108078],
            [-0.1089194, 0.7934331, -0.1813041, 0.0948122],
            [0.2211275, -0.1813041, 0.9451825, 0.1474816],
            [0.1108078, 0.0948122, 0.1474816, 0.4676369],
        ]),
        nu_h=31,
        nu_e=31,
        target=0.0585654,
        eigenvalues=(1.1773492, 0.7635739, 0.4493134, 0.3324671),
        expected_diverged=("pvBI1", "pvBII1", "pvBII3"),
        cov_equality=True,
        notes=("nu_1 = nu_2 = 31 assumed from two samples of 32",),
    ),
}

# published Roy largest roots for the factorial example
ROY_TABLE = {"2A": 1.10988, "2B": 0.41810, "2AB": 0.06505}
ROY_TAIL_2A = 0.0001867


def toy_oneway():
    """Three groups of four, two responses. Returns (Y, X, C) for H0: equal means."""
    Y = np.array([
        [2.1, 3.0], [2.5, 3.4], [1.9, 2.7], [2.3, 3.3],
        [3.0, 3.1], [3.4, 3.6], [2.8, 2.9], [3.2, 3.8],
        [2.2, 4.1], [2.6, 4.4], [2.0, 3.9], [2.4, 4.6],
    ])
    groups = np.repeat(np.arange(3), 4)
    X = np.column_stack([np.ones(12), groups == 0, groups == 1, groups == 2]).astype(float)
    C = np.array([[0.0, 1.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]])
    return Y, X, C
