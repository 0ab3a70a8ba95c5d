#!/usr/bin/env python3
"""Print the so(3)* gauge moment-map data on the two-edge interval.

Shows the gauge field, the moment map, and the residual i_xi Omega - dH
under both readings of the anchor-Jacobian term.  The source reading is
identically exact for constant frames; the target reading leaves the
regression-locked residual.
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from polycartan.aksz import gauge_residual
from polycartan.parser import format_derivation, format_poly, format_tuple
from polycartan.simplicial import interval

from conftest import so3


def main():
    beta = {"v1": (Fraction(1), Fraction(0), Fraction(0))}
    structure = so3()
    for reading in ("source", "target"):
        rep = gauge_residual(beta, structure, interval(2), jacobian_at=reading)
        print(f"jacobian at {reading}:")
        print("  xi =", format_derivation(rep.xi))
        print("  H  =", format_tuple(rep.hamiltonian))
        print(
            "  residual =",
            " | ".join(format_poly(c) for c in rep.residual.components),
        )
        print()


if __name__ == "__main__":
    main()
