"""Monte Carlo phase-average error against the exact propagator versus sample count.

    python scripts/mc_convergence.py --seeds 32
"""
import argparse

import numpy as np

from gcdephasing import DEFAULT_ORIENTATIONS, evolve_exact, rho_alpha_beta, stochastic_unfold
from gcdephasing.linalg import trace_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=16)
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--orientation", default="xyz", choices=sorted(DEFAULT_ORIENTATIONS))
    args = ap.parse_args()
    rho0 = rho_alpha_beta(0.4, 0.7)
    n = DEFAULT_ORIENTATIONS[args.orientation]
    exact = evolve_exact(rho0, n, args.tau)
    print("trajectories,mean_trace_distance,times_sqrtN")
    for k in range(8, 17):
        N = 2**k
        err = np.mean([trace_distance(stochastic_unfold(rho0, n, args.tau, N, seed=s), exact)
                       for s in range(args.seeds)])
        print(f"{N},{err:.4e},{err * np.sqrt(N):.3f}")


if __name__ == "__main__":
    main()
