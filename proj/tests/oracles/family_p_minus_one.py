"""Symbolic check of the p = -1 family phi = a cos(theta - theta0) + b.

Substitutes the family into phi (phi'' - phi'^2/(2 phi) + (phi - 1/phi)/2) = gamma,
solves for gamma and reports which relation b^2 = 1 + 2 gamma +- a^2 holds.
With --header PATH it writes the constraint as a C++ constant for the acceptance suite.
"""

import argparse
import sys

import sympy as sp


def family_gamma():
    theta, theta0 = sp.symbols("theta theta0", real=True)
    a, b = sp.symbols("a b", positive=True)
    phi = a * sp.cos(theta - theta0) + b
    d1 = sp.diff(phi, theta)
    d2 = sp.diff(phi, theta, 2)
    lhs = phi * (d2 - d1**2 / (2 * phi) + (phi - 1 / phi) / 2)
    lhs = sp.simplify(sp.expand(lhs))
    if sp.simplify(sp.diff(lhs, theta)) != 0:
        raise SystemExit(f"family is not a solution: lhs = {lhs}")
    return a, b, sp.simplify(lhs)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--header", help="write the constraint sign as a C++ header")
    args = parser.parse_args()

    a, b, gamma = family_gamma()
    g = sp.symbols("gamma", positive=True)
    plus = sp.simplify(gamma.subs(b, sp.sqrt(1 + 2 * g + a**2)) - g) == 0
    minus = sp.simplify(gamma.subs(b, sp.sqrt(1 + 2 * g - a**2)) - g) == 0
    print(f"lhs = {gamma}")
    print(f"b^2 = 1 + 2 gamma + a^2 solves: {plus}")
    print(f"b^2 = 1 + 2 gamma - a^2 solves: {minus}")
    if plus == minus:
        print("constraint is not determined", file=sys.stderr)
        return 1
    sign = 1 if plus else -1
    if args.header:
        with open(args.header, "w", newline="\n") as out:
            out.write("#pragma once\n\n")
            out.write("// written by tests/oracles/family_p_minus_one.py\n")
            relation = f"b^2 = 1 + 2 gamma {'+' if plus else '-'} a^2"
            out.write(f"// phi = a cos(theta - theta0) + b solves the p = -1 equation iff {relation}\n")
            out.write(f"inline constexpr double kFamilyASquaredSign = {sign}.0;\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
