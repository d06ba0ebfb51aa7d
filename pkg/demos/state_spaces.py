"""State spaces cut out by evaluations: field-valued, Boolean, and surface.

Three quick builds: the rank of the regular character of Z/2 at a strand
pair, the minimal automaton of the language "words ending in a", and the
stable dimensions of the circle-count state spaces of two surface theories.
"""

from fractions import Fraction

from loopcat.fincat import FreeBoundary, FreeMonoidCategory, IntervalClass, cyclic_group, MonoidCategory
from loopcat.frobenius import product_algebra, surface_eval, truncated_poly_algebra
from loopcat.statespaces import (
    Evaluation,
    cob2_state_space,
    evaluation_from_monoid,
    state_space_boolean,
    state_space_field,
)

PLUS, MINUS = 1, -1


def main() -> None:
    cat = MonoidCategory(cyclic_group(2))
    alpha = evaluation_from_monoid(cat, [2, 0])  # regular character
    ss = state_space_field(cat, ((0, PLUS), (0, MINUS)), alpha)
    print(f"Z/2 regular at (+,-): dimension {ss.dimension} "
          f"from {len(ss.spanning)} spanning kets")

    fm = FreeMonoidCategory("ab")
    fb = FreeBoundary(fm)
    cap = 3
    table = {IntervalClass(0, (), w): Fraction(1 if w and w[-1] == 0 else 0)
             for w in fm.words_up_to(2 * cap)}
    bss = state_space_boolean(fm, ((0, PLUS),), Evaluation({}, table), fb, cap)
    print(f"language 'ends in a': {bss.n_states} residuals, "
          f"{bss.n_join_irreducible} join-irreducible states")

    ones = [Fraction(1)] * 12
    print("constant surface theory:", cob2_state_space(1, ones, 4))

    split = product_algebra(truncated_poly_algebra(1, [1]),
                            truncated_poly_algebra(1, [Fraction(1, 2)]))
    seq = [surface_eval(split, g) for g in range(12)]
    print("two-eigenvalue theory:  ", cob2_state_space(1, seq, 4))


if __name__ == "__main__":
    main()
