"""Degree detection and the annihilating polynomial for a group character.

The standard 2-dimensional character of S3 is fed to the degree search,
which finds d = 2 by checking that all antisymmetrized traces of 3-tuples
vanish while some 2-tuple trace does not.  The extracted degree-2
polynomial then annihilates every representing matrix, and the degree is
additive over a disjoint union with the regular character of Z/2.
"""

import random

from loopcat.fincat import TableCategory, cyclic_group, symmetric_group
from loopcat.linalg import Matrix, format_poly
from loopcat.pseudochar import (
    PseudoCharacter,
    RepData,
    alpha_charpoly,
    char_of_rep,
    degree,
    degree_additivity_check,
)
from loopcat.statespaces import Evaluation

S3_STD = {
    (0, 1, 2): [[1, 0], [0, 1]],
    (0, 2, 1): [[1, 1], [0, -1]],
    (1, 0, 2): [[-1, 0], [1, 1]],
    (1, 2, 0): [[0, 1], [-1, -1]],
    (2, 0, 1): [[-1, -1], [1, 0]],
    (2, 1, 0): [[0, -1], [-1, 0]],
}


def direct_sum_category(m1, m2):
    morphisms = {}
    for e in range(m1.size):
        morphisms[("a", e)] = ("X1", "X1")
    for e in range(m2.size):
        morphisms[("b", e)] = ("X2", "X2")
    rule = {}
    for u in range(m1.size):
        for w in range(m1.size):
            rule[(("a", w), ("a", u))] = ("a", m1.mul(u, w))
    for u in range(m2.size):
        for w in range(m2.size):
            rule[(("b", w), ("b", u))] = ("b", m2.mul(u, w))
    return TableCategory(("X1", "X2"), morphisms,
                         {"X1": ("a", m1.identity), "X2": ("b", m2.identity)},
                         lambda g, f: rule[(g, f)])


def main() -> None:
    s3 = symmetric_group(3)
    rep = RepData(s3, [Matrix(S3_STD[p]) for p in sorted(S3_STD)])
    chi = char_of_rep(rep)
    print("character values:", [str(chi(g)) for g in range(6)])

    res = degree(chi, 4)
    print(f"degree: {res.d} (witness tuple {res.witness}, "
          f"{res.tuples_checked} tuples checked)")

    rng = random.Random(0)
    x = rng.randrange(6)
    p = alpha_charpoly(chi, x, res.d)
    print(f"annihilating polynomial at element {x}: {format_poly(p, 't')}")
    m = rep.matrices[x]
    acc = Matrix([[0, 0], [0, 0]])
    for k, c in enumerate(p.coeffs):
        acc = acc + (m ** k).scale(c)
    print("annihilates the matrix:", acc == Matrix([[0, 0], [0, 0]]))

    z2 = cyclic_group(2)
    cat = direct_sum_category(s3, z2)
    regular = PseudoCharacter(z2, [2, 0])
    loops = {}
    for e in range(6):
        loops[cat.loop_class("X1", [("a", e)])] = chi(e)
    for e in range(2):
        loops[cat.loop_class("X2", [("b", e)])] = regular(e)
    report = degree_additivity_check(cat, Evaluation(loops), max_d=5)
    print(f"additivity over S3 + Z/2: degrees {report.degrees}, "
          f"joint degree {report.sum_degree}, additive: {report.additive}")


if __name__ == "__main__":
    main()
