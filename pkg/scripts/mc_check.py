"""Compare the series consensus with Wishart Monte Carlo on the examples.

    python scripts/mc_check.py [--samples N] [--seed S]
"""
import argparse

import numpy as np

from matbeta import manova
from matbeta.fixtures import EXAMPLES
from matbeta.mc import McConfig, estimate_upper_prob


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200000)
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args()
    for key in ("2B", "2AB", "3"):
        ex = EXAMPLES[key]
        rep = manova.fc_p_value(ex.fc, ex.nu_h, ex.nu_e)
        m2, nh2, ne2 = rep.reduced
        nabla = np.diag(rep.eigenvalues[:m2])
        est, se = estimate_upper_prob(McConfig(m2, nh2, ne2, args.samples, args.seed), nabla)
        z = (rep.p_value - est) / se if se > 0 else float("nan")
        print(f"{key:4s} series {rep.p_value:.6f}  mc {est:.6f} +- {se:.6f}  z {z:+.2f}")


if __name__ == "__main__":
    main()
