"""Write negativity/LQU trajectories for the four presets to CSV.

    python scripts/reproduce_presets.py --out results/
"""
import argparse
import os

from gcdephasing import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--steps", type=int, default=401)
    ap.add_argument("--tau-max", type=float, default=20.0)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for preset in ("fig1", "fig2", "fig3", "fig4"):
        path = os.path.join(args.out, f"{preset}.csv")
        code = cli.main(["simulate", "--preset", preset, "--steps", str(args.steps),
                         "--tau-max", str(args.tau_max), "--out", path])
        if code:
            raise SystemExit(code)
        print("wrote", path)
    path = os.path.join(args.out, "alpha_beta_labels.json")
    cli.main(["classify", "--preset", "fig3", "--measure", "negativity", "--measure", "lqu", "--out", path])
    print("wrote", path)


if __name__ == "__main__":
    main()
