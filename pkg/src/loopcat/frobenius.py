"""Commutative Frobenius algebras and genus generating functions.

A commutative Frobenius algebra over the rationals is presented by
structure constants, a unit vector, and a counit functional whose induced
bilinear form is nondegenerate.  Closed surfaces evaluate through the
handle element h (sum of basis times dual basis): genus g gives eps(h^g).
The sequence of surface values has a rational generating function; this
module computes it, classifies which rational functions arise this way,
synthesizes a witness algebra from classification data, and checks the
related (p, h, iota) systems and confluent Vandermonde solves that appear
when recovering a direct-sum decomposition from the values alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb

from .errors import DomainError
from .linalg import (
    Matrix,
    NonSplitDenominator,
    Polynomial,
    RationalFunction,
    det,
    inverse,
    partial_fractions,
    rat,
    rat_str,
)
from .pseudochar import _signed_cycle_decompositions
from .statespaces import SequenceTooShort


class NotCommutative(DomainError):
    """Structure constants are not symmetric in the first two slots."""


class NotAssociative(DomainError):
    """Triple products disagree."""


class NotUnital(DomainError):
    """The declared unit does not act as identity."""


class NondegeneracyFailure(DomainError):
    """The counit pairing eps(ab) is singular."""


class InternalInconsistency(DomainError):
    """A cross-check that must hold for valid data failed."""


class Reject(DomainError):
    """Classification rejection; `reason` names the failed condition."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class SingularT(DomainError):
    """Confluent Vandermonde system is singular (duplicate eigenvalues)."""


class DimensionMismatch(DomainError):
    """(p, h, iota) shapes are inconsistent."""


# ---------------------------------------------------------------------------
# the algebra


class FrobeniusAlgebra:
    """Structure constants c[i][j][k] (e_i e_j = sum_k c[i][j][k] e_k),
    a unit vector, and a counit covector.  Shapes are checked here;
    the axioms are checked by `validate`."""

    def __init__(self, dim: int, structure, unit, counit):
        self.dim = int(dim)
        if self.dim <= 0:
            raise ValueError("dimension must be positive")
        self.structure = tuple(
            tuple(tuple(rat(x) for x in row) for row in plane)
            for plane in structure)
        self.unit = tuple(rat(x) for x in unit)
        self.counit = tuple(rat(x) for x in counit)
        n = self.dim
        if len(self.structure) != n or any(
                len(p) != n or any(len(r) != n for r in p)
                for p in self.structure):
            raise ValueError("structure constants must be dim^3")
        if len(self.unit) != n or len(self.counit) != n:
            raise ValueError("unit and counit must have length dim")

    def multiply(self, a, b) -> tuple:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if a[i] == 0:
                continue
            for j in range(n):
                if b[j] == 0:
                    continue
                coeff = a[i] * b[j]
                row = self.structure[i][j]
                for k in range(n):
                    out[k] += coeff * row[k]
        return tuple(out)

    def mult_matrix(self, a) -> Matrix:
        """Row-convention matrix of multiplication by a: e_i -> a*e_i."""
        n = self.dim
        rows = []
        for i in range(n):
            row = [Fraction(0)] * n
            for j in range(n):
                if a[j] == 0:
                    continue
                for k in range(n):
                    row[k] += a[j] * self.structure[j][i][k]
            rows.append(row)
        return Matrix(rows)

    def eps(self, a) -> Fraction:
        return sum((x * e for x, e in zip(a, self.counit)), Fraction(0))

    def gram(self) -> Matrix:
        basis = [tuple(Fraction(i == k) for i in range(self.dim))
                 for k in range(self.dim)]
        return Matrix([[self.eps(self.multiply(bi, bj)) for bj in basis]
                       for bi in basis])


def validate(fa: FrobeniusAlgebra) -> None:
    """Check each axiom, raising the matching error for the first failure."""
    n = fa.dim
    basis = [tuple(Fraction(i == k) for i in range(n)) for k in range(n)]
    for i in range(n):
        if fa.multiply(fa.unit, basis[i]) != basis[i]:
            raise NotUnital(f"unit * e_{i} != e_{i}")
        if fa.multiply(basis[i], fa.unit) != basis[i]:
            raise NotUnital(f"e_{i} * unit != e_{i}")
    for i in range(n):
        for j in range(i + 1, n):
            if fa.structure[i][j] != fa.structure[j][i]:
                raise NotCommutative(f"e_{i} e_{j} != e_{j} e_{i}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = fa.multiply(fa.multiply(basis[i], basis[j]), basis[k])
                rhs = fa.multiply(basis[i], fa.multiply(basis[j], basis[k]))
                if lhs != rhs:
                    raise NotAssociative(f"(e_{i} e_{j}) e_{k} differs")
    if det(fa.gram()) == 0:
        raise NondegeneracyFailure("the pairing eps(ab) is singular")


def dual_basis(fa: FrobeniusAlgebra) -> list[tuple]:
    """Vectors u_i with eps(u_i e_j) = delta_ij."""
    g = fa.gram()
    if det(g) == 0:
        raise NondegeneracyFailure("the pairing eps(ab) is singular")
    return [inverse(g).row(i) for i in range(fa.dim)]


@dataclass(frozen=True)
class HandleData:
    element: tuple
    matrix: Matrix  # multiplication by the element


def handle_element(fa: FrobeniusAlgebra) -> HandleData:
    """h = sum_i e_i u_i over a dual-basis pair; independent of the choice."""
    duals = dual_basis(fa)
    n = fa.dim
    h = [Fraction(0)] * n
    for i in range(n):
        basis_i = tuple(Fraction(i == k) for k in range(n))
        prod = fa.multiply(basis_i, duals[i])
        for k in range(n):
            h[k] += prod[k]
    h = tuple(h)
    return HandleData(h, fa.mult_matrix(h))


def surface_eval(fa: FrobeniusAlgebra, genus: int) -> Fraction:
    """Value of the closed genus-g surface: eps(h^g).

    For g >= 1 this must equal tr(M_h^(g-1)) (trace of multiplication by a
    is eps(h a)); the routes are compared and disagreement — possible only
    for inputs that are not honest Frobenius data — is an
    InternalInconsistency.
    """
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    hd = handle_element(fa)
    power = fa.unit
    for _ in range(genus):
        power = fa.multiply(power, hd.element)
    value = fa.eps(power)
    if genus >= 1:
        if value != (hd.matrix ** (genus - 1)).trace():
            raise InternalInconsistency(
                f"eps(h^{genus}) disagrees with tr(M_h^{genus - 1})")
    return value


def generating_function(fa: FrobeniusAlgebra) -> RationalFunction:
    """Rational function with Taylor coefficients eps(h^g), g = 0, 1, ...

    The tail alpha_{n+1} = tr(M_h^n) satisfies the recurrence of M_h's
    characteristic polynomial, so an order <= dim fit on the traces plus
    the constant term eps(1) determines the function; the expansion is
    re-verified out to g = 2 dim + 2.
    """
    from .linalg import fit_linear_recurrence, series_to_rational_function

    hd = handle_element(fa)
    n = fa.dim
    length = 2 * n + 3
    traces = []
    power = Matrix.identity(n)
    for _ in range(length - 1):
        traces.append(power.trace())
        power = power * hd.matrix
    element = fa.unit
    want = [fa.eps(fa.unit)]
    for g in range(1, length):
        element = fa.multiply(element, hd.element)
        value = fa.eps(element)
        if value != traces[g - 1]:
            raise InternalInconsistency(
                f"eps(h^{g}) disagrees with tr(M_h^{g - 1})")
        want.append(value)
    rec = fit_linear_recurrence(traces[:2 * n], n)
    prefix = [want[0]] + traces[:2 * n]
    rf = series_to_rational_function(prefix, rec)
    if rf.taylor(length) != want:
        raise InternalInconsistency("generating function fails to re-expand")
    return rf


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassificationData:
    """mu + m T + sum_i m_i lam_i^-1 / (1 - lam_i T), with m = 0 or m >= 2,
    lam_i distinct nonzero rationals, m_i positive integers; mu is free for
    m >= 2 and forced to 0 when m = 0."""

    mu: Fraction
    m: int
    poles: tuple  # ((lam_i, m_i), ...) sorted by lam

    def __post_init__(self):
        object.__setattr__(self, "mu", rat(self.mu))
        object.__setattr__(self, "poles", tuple(
            (rat(lam), int(mult)) for lam, mult in self.poles))
        if self.m == 1:
            raise Reject("M1Forbidden", "no algebra has a 1-dim nilpotent block")
        if self.m < 0:
            raise ValueError("m must be 0 or >= 2")
        if self.m == 0 and self.mu != 0:
            raise ValueError("mu must vanish when m = 0")
        lams = [lam for lam, _ in self.poles]
        if any(lam == 0 for lam in lams) or len(set(lams)) != len(lams):
            raise ValueError("pole locations must be distinct and nonzero")
        if any(mult < 1 for _, mult in self.poles):
            raise ValueError("pole multiplicities must be positive")
        if lams != sorted(lams, key=lambda l: (l.numerator, l.denominator)):
            raise ValueError("poles must be sorted")

    def genfun(self) -> RationalFunction:
        out = RationalFunction(Polynomial([self.mu, self.m]), Polynomial([1]))
        for lam, mult in self.poles:
            out = out + RationalFunction(
                Polynomial([Fraction(mult) / lam]), Polynomial([1, -lam]))
        return out


def classify_genfun(rf: RationalFunction) -> ClassificationData:
    """Decide whether rf is the generating function of some algebra.

    Accepts exactly: polynomial part of degree <= 1 with T-coefficient
    m in {0, 2, 3, ...} (vanishing entirely when m = 0), plus simple poles
    whose residue data lam_i, m_i = coeff * lam_i has m_i a positive
    integer.  Rejections carry the name of the first failed condition.
    """
    try:
        poly, terms = partial_fractions(rf)
    except NonSplitDenominator as exc:
        raise Reject("NonSplitDenominator", str(exc)) from exc
    for lam, mult, _coeffs in terms:
        if mult > 1:
            raise Reject("MultiplePole", f"pole at 1/{lam} has order {mult}")
    if poly.degree > 1:
        raise Reject("PolynomialDegreeTooHigh",
                     f"polynomial part has degree {poly.degree}")
    m = poly[1]
    if m.denominator != 1 or m < 0 or m == 1:
        raise Reject("M1Forbidden",
                     f"T-coefficient {m} is not 0 or an integer >= 2")
    m = int(m)
    poles = []
    for lam, _mult, coeffs in terms:
        mi = coeffs[0] * lam
        if mi.denominator != 1 or mi <= 0:
            raise Reject("NonIntegerMultiplicity",
                         f"pole at eigenvalue {lam} has multiplicity {mi}")
        poles.append((lam, int(mi)))
    if m == 0 and poly[0] != 0:
        raise Reject("ConstantTermMismatch",
                     f"constant term {poly[0]} without a nilpotent block")
    return ClassificationData(poly[0], m, tuple(poles))


# ---------------------------------------------------------------------------
# witnesses


def truncated_poly_algebra(m: int, counit) -> FrobeniusAlgebra:
    """Q[x]/x^m with basis 1, x, ..., x^(m-1) and the given counit values."""
    structure = [[[Fraction(i + j == k) for k in range(m)]
                  for j in range(m)] for i in range(m)]
    unit = [Fraction(k == 0) for k in range(m)]
    return FrobeniusAlgebra(m, structure, unit, counit)


def product_algebra(a: FrobeniusAlgebra, b: FrobeniusAlgebra) -> FrobeniusAlgebra:
    na, nb = a.dim, b.dim
    n = na + nb
    structure = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(na):
        for j in range(na):
            for k in range(na):
                structure[i][j][k] = a.structure[i][j][k]
    for i in range(nb):
        for j in range(nb):
            for k in range(nb):
                structure[na + i][na + j][na + k] = b.structure[i][j][k]
    return FrobeniusAlgebra(n, structure, a.unit + b.unit,
                            a.counit + b.counit)


def witness_synthesis(cd: ClassificationData) -> FrobeniusAlgebra:
    """An algebra whose generating function classifies back to cd.

    Take Q[x]/x^m with eps(1) = mu, eps(x^(m-1)) = 1 (contributing
    mu + m T) when m >= 2, and m_i one-dimensional factors with
    eps(1) = 1/lam_i for each pole.  The round trip is asserted.
    """
    parts = []
    if cd.m >= 2:
        counit = [Fraction(0)] * cd.m
        counit[0] = cd.mu
        counit[cd.m - 1] = Fraction(1)
        parts.append(truncated_poly_algebra(cd.m, counit))
    for lam, mult in cd.poles:
        for _ in range(mult):
            parts.append(truncated_poly_algebra(1, [1 / lam]))
    if not parts:
        raise ValueError("empty classification has no witness algebra")
    out = parts[0]
    for p in parts[1:]:
        out = product_algebra(out, p)
    if classify_genfun(generating_function(out)) != cd:
        raise InternalInconsistency("witness fails to classify back")
    return out


# ---------------------------------------------------------------------------
# (p, h, iota) systems


@dataclass(frozen=True)
class PIHSystem:
    p: tuple
    h: Matrix
    iota: tuple


@dataclass(frozen=True)
class FirstViolation:
    n: int
    which: str  # "phi" or "trace"


@dataclass(frozen=True)
class PIHReport:
    dim: int
    ok: bool
    first_violation: FirstViolation | None


def pih_check(pih: PIHSystem, alpha_seq) -> PIHReport:
    """Verify p h^n iota = alpha_n and tr(h^n) = alpha_{n+1}, n <= 2 dim + 1."""
    h = pih.h
    if h.rows != h.cols:
        raise DimensionMismatch("h must be square")
    dim = h.rows
    if len(pih.p) != dim or len(pih.iota) != dim:
        raise DimensionMismatch("p and iota must have length dim")
    seq = [rat(x) for x in alpha_seq]
    need = 2 * dim + 3
    if len(seq) < need:
        raise SequenceTooShort(f"need alpha_0..alpha_{need - 1}")
    p = tuple(rat(x) for x in pih.p)
    iota = tuple(rat(x) for x in pih.iota)
    power = Matrix.identity(dim)
    for n in range(2 * dim + 2):
        phi = sum((p[i] * power[i, j] * iota[j]
                   for i in range(dim) for j in range(dim)), Fraction(0))
        if phi != seq[n]:
            return PIHReport(dim, False, FirstViolation(n, "phi"))
        if power.trace() != seq[n + 1]:
            return PIHReport(dim, False, FirstViolation(n, "trace"))
        power = power * h
    return PIHReport(dim, True, None)


# ---------------------------------------------------------------------------
# confluent Vandermonde solves


@dataclass(frozen=True)
class ConfluentSystem:
    blocks: tuple  # ((lam_i, n_i, mult_i), ...)
    t: Matrix
    r: tuple
    gamma: tuple
    verdict: str | None  # "consistent" / "inconsistent" when alpha1 given


def _confluent_matrix(blocks) -> Matrix:
    """Columns: j-th scaled derivative in lam of (lam^2, ..., lam^(N+1))."""
    total = sum(n for _lam, n, *_ in blocks)
    rows = []
    for n in range(1, total + 1):
        row = []
        for lam, size, *_ in blocks:
            for j in range(size):
                row.append(comb(n + 1, j) * lam ** (n + 1 - j))
        rows.append(row)
    return Matrix(rows)


def pih_solve(blocks, alpha1=None) -> ConfluentSystem:
    """Recover the expansion coefficients of alpha_n = sum M_i lam_i^n.

    blocks are (lam_i, N_i, M_i) with distinct nonzero lam_i; the system
    T Gamma = R uses rows n = 1..N (N = sum N_i) and derivative columns,
    so the exact solution is gamma_{i,0} = M_i / lam_i with every
    higher-derivative coefficient zero — asserted after solving.  When
    alpha1 is supplied it is compared against sum M_i: equality or an
    excess >= 2 (a nilpotent block) is consistent, an excess of exactly 1
    is not.
    """
    from .linalg import solve

    blocks = tuple((rat(lam), int(n), rat(mult)) for lam, n, mult in blocks)
    if any(lam == 0 for lam, _n, _m in blocks):
        raise ValueError("eigenvalues must be nonzero")
    if any(n < 1 for _lam, n, _m in blocks):
        raise ValueError("block sizes must be positive")
    t = _confluent_matrix(blocks)
    total = t.rows
    r = tuple(
        sum((mult * lam ** n for lam, _size, mult in blocks), Fraction(0))
        for n in range(1, total + 1))
    if det(t) == 0:
        raise SingularT("confluent system is singular; eigenvalues repeat?")
    gamma = solve(t, r)
    expected = []
    for lam, size, mult in blocks:
        expected.append(mult / lam)
        expected.extend([Fraction(0)] * (size - 1))
    if list(gamma) != expected:
        raise InternalInconsistency("solved coefficients break the pattern")
    verdict = None
    if alpha1 is not None:
        semisimple_dim = sum((mult for _lam, _size, mult in blocks),
                             Fraction(0))
        excess = rat(alpha1) - semisimple_dim
        verdict = ("consistent"
                   if excess == 0 or (excess.denominator == 1 and excess >= 2)
                   else "inconsistent")
    return ConfluentSystem(blocks, t, r, tuple(gamma), verdict)


def confluent_vandermonde_det(blocks):
    """det T against the closed form u * prod lam_i^(2 N_i)
    * prod_{i<j} (lam_i - lam_j)^(N_i N_j); returns (det, u).

    u is a sign depending only on the block sizes; it is reported, not
    asserted."""
    blocks = tuple((rat(lam), int(n)) for lam, n, *_ in blocks)
    lams = [lam for lam, _n in blocks]
    if any(lam == 0 for lam in lams) or len(set(lams)) != len(lams):
        raise ValueError("eigenvalues must be distinct and nonzero")
    d = det(_confluent_matrix(blocks))
    magnitude = Fraction(1)
    for lam, n in blocks:
        magnitude *= lam ** (2 * n)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            magnitude *= (blocks[i][0] - blocks[j][0]) ** (
                blocks[i][1] * blocks[j][1])
    return d, d / magnitude


# ---------------------------------------------------------------------------
# pullbacks along the circle/interval functor


def f1_pullback(alpha_seq, components) -> Fraction:
    """Value of a disjoint union of dotted circles and dotted intervals.

    A circle with n dots is alpha_{n+1} (a trace of the n-th handle
    power); an interval with n dots is alpha_n.  The value is the product
    over components."""
    seq = [rat(x) for x in alpha_seq]
    out = Fraction(1)
    for kind, dots in components:
        if dots < 0:
            raise ValueError("dot counts must be nonnegative")
        if kind == "circle":
            index = dots + 1
        elif kind == "interval":
            index = dots
        else:
            raise ValueError(f"unknown component kind {kind!r}")
        if index >= len(seq):
            raise SequenceTooShort(
                f"{kind} with {dots} dots needs alpha_{index}")
        out *= seq[index]
    return out


@dataclass(frozen=True)
class Cob2PseudoReport:
    d: int
    cap_dots: int
    ok: bool
    witness: tuple | None  # (family, dot tuple)


def cob2_pseudochar_check(alpha_seq, d: int, cap_dots=None) -> Cob2PseudoReport:
    """Degree-d vanishing for a surface-value sequence.

    Antisymmetrize d+1 dotted strands and close up; each permutation cycle
    becomes a circle carrying the cycle's dots.  In the interval family
    one strand is left open, so its cycle closes into a dotted interval
    instead.  Both families must vanish identically when alpha comes from
    an algebra of dimension <= d; dot counts run up to cap_dots per
    strand (default d + 1).
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    cap = d + 1 if cap_dots is None else int(cap_dots)
    seq = [rat(x) for x in alpha_seq]
    need = (d + 1) * cap + 2
    if len(seq) < need:
        raise SequenceTooShort(f"need alpha_0..alpha_{need - 1}")

    def closure(dots, open_slot):
        total = Fraction(0)
        for sign, cycles in _signed_cycle_decompositions(len(dots)):
            parts = []
            for cyc in cycles:
                kind = "interval" if open_slot in cyc else "circle"
                parts.append((kind, sum(dots[i] for i in cyc)))
            total += sign * f1_pullback(seq, parts)
        return total

    for head in range(cap + 1):
        for rest in combinations_with_replacement(range(cap + 1), d):
            dots = (head,) + rest
            if closure(dots, open_slot=0) != 0:
                return Cob2PseudoReport(d, cap, False, ("interval", dots))
    for dots in combinations_with_replacement(range(cap + 1), d + 1):
        if closure(dots, open_slot=None) != 0:
            return Cob2PseudoReport(d, cap, False, ("circle", dots))
    return Cob2PseudoReport(d, cap, True, None)


# ---------------------------------------------------------------------------
# JSON


def frobenius_to_json(fa: FrobeniusAlgebra) -> dict:
    return {"frobenius": {
        "dim": fa.dim,
        "structure": [[[rat_str(x) for x in row] for row in plane]
                      for plane in fa.structure],
        "unit": [rat_str(x) for x in fa.unit],
        "counit": [rat_str(x) for x in fa.counit],
    }}


def frobenius_from_json(doc: dict) -> FrobeniusAlgebra:
    body = doc["frobenius"]
    return FrobeniusAlgebra(body["dim"], body["structure"], body["unit"],
                            body["counit"])


def genfun_to_json(rf: RationalFunction) -> dict:
    return {"genfun": {"num": [rat_str(c) for c in rf.num.coeffs],
                       "den": [rat_str(c) for c in rf.den.coeffs]}}


def genfun_from_json(doc: dict) -> RationalFunction:
    body = doc["genfun"]
    return RationalFunction(Polynomial([rat(c) for c in body["num"]]),
                            Polynomial([rat(c) for c in body["den"]]))


def classification_to_json(cd: ClassificationData) -> dict:
    return {"classification": {
        "mu": rat_str(cd.mu),
        "m": cd.m,
        "poles": [[rat_str(lam), mult] for lam, mult in cd.poles],
    }}


def classification_from_json(doc: dict) -> ClassificationData:
    body = doc["classification"]
    return ClassificationData(
        rat(body["mu"]), int(body["m"]),
        tuple((rat(lam), int(mult)) for lam, mult in body["poles"]))
