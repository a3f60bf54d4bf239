"""Scan field directions over the sphere.

For each direction, report the asymptotic negativity of the alpha-beta
state (0.4, 0.7) and of the maximally entangled Schmidt kinds 1 and 5.
This is the scan behind the choice of default orientations.

    python scripts/orientation_scan.py --grid 60 > scan.csv
"""
import argparse
import sys

import numpy as np

from gcdephasing.analysis import asymptotic_correlations
from gcdephasing.dynamics import Orientation
from gcdephasing.states import pure_density, rho_alpha_beta, schmidt_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=40, help="polar samples; azimuth uses twice as many")
    args = ap.parse_args()
    states = {
        "alpha_beta": rho_alpha_beta(0.4, 0.7),
        "kind1": pure_density(schmidt_state(1, 2**-0.5)),
        "kind5": pure_density(schmidt_state(5, 2**-0.5)),
    }
    out = sys.stdout
    out.write("theta,phi,nx,ny,nz," + ",".join(f"neg_{k}" for k in states) + "\n")
    both = 0
    for theta in np.linspace(0, np.pi, args.grid + 1):
        for phi in np.linspace(0, 2 * np.pi, 2 * args.grid, endpoint=False):
            n = Orientation.normalized(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
            negs = [asymptotic_correlations(rho, n)[0] for rho in states.values()]
            both += negs[0] > 1e-8 and negs[1] > 1e-8
            out.write(",".join(f"{v:.6g}" for v in (theta, phi, *n.as_tuple(), *negs)) + "\n")
    print(f"# directions where alpha_beta freezes and kind1 survives: {both}", file=sys.stderr)


if __name__ == "__main__":
    main()
