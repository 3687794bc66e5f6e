"""Inverse-square potential: what a boundary condition at r=0 decides.

For V = g/r^2 with 0 < P < 1/2 the operator is not essentially self-adjoint:
the u(0) = 0 criterion alone admits both Frobenius branches, and each mixing
angle theta defines a different self-adjoint operator.  The pure plus-branch
start (theta = 0, scale invariant) binds nothing; every theta in (0, pi)
binds exactly one level whose energy follows the K_P small-argument oracle.

Usage: python3 scripts/sae_pathology.py [--g -0.08] [--thetas 8]
"""
import argparse
import math

from radialbc.errors import BracketError
from radialbc.potentials import InverseSquare
from radialbc.solver import (
    RadialProblem,
    find_level,
    sae_bound_state,
    sae_oracle_energy,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g", type=float, default=-0.08,
                    help="inverse-square strength (default -0.08, P = 0.3)")
    ap.add_argument("--thetas", type=int, default=8, help="number of mixing angles")
    ap.add_argument("--L", type=float, default=1.0, help="boundary length scale")
    args = ap.parse_args()

    P2 = 0.25 + 2.0 * args.g
    if P2 < 0:
        ap.error(f"g = {args.g} falls to the center ((l+1/2)^2 + 2g < 0)")
    P = math.sqrt(P2)
    if not P < 0.5:
        ap.error(f"g = {args.g} gives P = {P:.3f} >= 1/2: no ambiguity to demonstrate")
    print(f"V = g/r^2, g = {args.g}  ->  P = {P:.6f} (both branches admissible)\n")

    p = RadialProblem(mass=1.0, l=0, potential=InverseSquare(g=args.g),
                      energy_window=(-1e6, -1e-6))
    try:
        find_level(p, 0)
        print("Dirichlet start: found a level (unexpected for a scale-free potential)")
    except BracketError:
        print("Dirichlet start: no level over E in [-1e6, -1e-6]  (scale invariance"
              " leaves nothing to bind)")

    print(f"\n{'theta/pi':>10} {'E (solver)':>18} {'E (K_P oracle)':>18} {'rel diff':>10}")
    for k in range(1, args.thetas + 1):
        theta = math.pi * k / (args.thetas + 1)
        lv = sae_bound_state(args.g, l=0, mass=1.0, theta=theta, L=args.L)
        e_ref = sae_oracle_energy(P, theta, L=args.L)
        rel = abs(lv.E - e_ref) / abs(e_ref)
        print(f"{theta / math.pi:>10.4f} {lv.E:>18.10g} {e_ref:>18.10g} {rel:>10.2e}")
    print("\nEvery mixing angle is a different operator; the spectrum is an")
    print("input choice, not a prediction, until theta is fixed by physics.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
