"""Exact linear and polynomial algebra over the rationals.

Everything here is built on fractions.Fraction; no floats ever enter.
Polynomials are stored lowest-degree-first, rational functions are kept
normalized with denominator constant term 1, and the matrix routines do
plain fraction-free-enough Gaussian elimination (pivot scaling is cheap
with Fraction, so we don't bother with Bareiss).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError


class NoRecurrence(DomainError):
    """No linear recurrence of the allowed order fits the sequence."""


class NonSplitDenominator(DomainError):
    """Denominator does not factor into linear factors over Q."""


def rat(x) -> Fraction:
    """Coerce ints, Fractions and 'a/b' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rat_str(x: Fraction) -> str:
    """Canonical 'a/b' form, '/1' omitted.  str(Fraction) already does this."""
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Univariate polynomial over Q, coefficients lowest-first, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[k] + other[k] for k in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scale(self, c) -> "Polynomial":
        c = rat(c)
        return Polynomial([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        for k in range(len(rem) - 1, other.degree - 1, -1):
            if rem[k] == 0:
                continue
            f = rem[k] / lead
            q[k - other.degree] = f
            for j, b in enumerate(other.coeffs):
                rem[k - other.degree + j] -= f * b
        return Polynomial(q), Polynomial(rem)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __call__(self, x) -> Fraction:
        x = rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.coeffs[-1])

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def format_poly(p: Polynomial, var: str = "T") -> str:
    """Render '7 + 3T - T^2' style, ascending powers, exact coefficients."""
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(rat_str(c))
            continue
        pw = var if k == 1 else f"{var}^{k}"
        mag = abs(c)
        body = pw if mag == 1 else f"{rat_str(mag)}{pw}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


class RationalFunction:
    """Quotient of polynomials, reduced, denominator normalized to den(0) = 1.

    The normalization means every RationalFunction has a power-series
    expansion at 0; construction fails if T divides the denominator after
    reduction.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        c0 = den[0]
        if c0 == 0:
            raise DomainError("rational function has a pole at 0")
        self.num = num.scale(1 / c0)
        self.den = den.scale(1 / c0)

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial([1]))

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def taylor(self, n: int) -> list[Fraction]:
        """First n power-series coefficients at 0."""
        out: list[Fraction] = []
        d = self.den.coeffs
        for k in range(n):
            a = self.num[k]
            for j in range(1, min(k, len(d) - 1) + 1):
                a -= d[j] * out[k - j]
            out.append(a)
        return out

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den.degree <= 0:
            return format_poly(self.num)
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        self.entries = tuple(tuple(rat(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        assert all(len(r) == self.cols for r in self.entries), "ragged matrix"

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, Matrix):
            return self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "Matrix") -> "Matrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return Matrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix([[c * x for x in r] for r in self.entries])

    def __mul__(self, other: "Matrix") -> "Matrix":
        assert self.cols == other.rows, "shape mismatch"
        cols = list(zip(*other.entries))
        return Matrix(
            [[_dot(r, c) for c in cols] for r in self.entries]
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector."""
        assert len(v) == self.cols
        vv = [rat(x) for x in v]
        return tuple(_dot(r, vv) for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.entries))) if self.entries else Matrix([])

    def trace(self) -> Fraction:
        assert self.rows == self.cols
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    def __pow__(self, n: int) -> "Matrix":
        assert self.rows == self.cols and n >= 0
        out = Matrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self) -> str:
        return f"Matrix({[list(r) for r in self.entries]!r})"


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _echelon(rows: list[list[Fraction]]):
    """In-place reduced row echelon; returns (pivot column list, sign of row ops)."""
    pivots: list[int] = []
    sign = 1
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        inv = 1 / rows[r][c]
        if inv != 1:
            sign_scale = rows[r][c]
            rows[r] = [x * inv for x in rows[r]]
        else:
            sign_scale = Fraction(1)
        # keep track of scaling for determinant callers via closure-free trick:
        # we fold it into `sign` as a Fraction multiplier.
        sign = sign * sign_scale
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots, sign


def rank_nullspace(m: Matrix) -> tuple[int, list[tuple]]:
    """Rank and an exact basis of the right nullspace.

    Nullspace vectors use the standard free-variable parametrization: one
    basis vector per non-pivot column, with 1 in that column.  The list is
    ordered by free column index, so the output is canonical.
    """
    rows = [list(r) for r in m.entries]
    if not rows:
        eye = Matrix.identity(m.cols)
        return 0, [eye.row(j) for j in range(m.cols)]
    pivots, _ = _echelon(rows)
    rank = len(pivots)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r_idx, pc in enumerate(pivots):
            v[pc] = -rows[r_idx][fc]
        basis.append(tuple(v))
    return rank, basis


def rank(m: Matrix) -> int:
    return rank_nullspace(m)[0]


def solve(m: Matrix, b: Sequence) -> tuple | None:
    """One exact solution of m x = b (free variables set to 0), or None."""
    bb = [rat(x) for x in b]
    assert len(bb) == m.rows
    rows = [list(r) + [bb[i]] for i, r in enumerate(m.entries)]
    if not rows:
        return tuple(Fraction(0) for _ in range(m.cols))
    pivots, _ = _echelon(rows)
    if m.cols in pivots:  # pivot in the augmented column: inconsistent
        return None
    x = [Fraction(0)] * m.cols
    for r_idx, pc in enumerate(pivots):
        x[pc] = rows[r_idx][-1]
    return tuple(x)


def solve_unique(m: Matrix, b: Sequence) -> tuple:
    """Solution of a square system required to be uniquely solvable."""
    assert m.rows == m.cols
    x = solve(m, b)
    if x is None or rank(m) < m.cols:
        raise DomainError("linear system is not uniquely solvable")
    return x


def det(m: Matrix) -> Fraction:
    assert m.rows == m.cols
    if m.rows == 0:
        return Fraction(1)
    rows = [list(r) for r in m.entries]
    pivots, sign = _echelon(rows)
    if len(pivots) < m.rows:
        return Fraction(0)
    return Fraction(sign)


def inverse(m: Matrix) -> Matrix:
    assert m.rows == m.cols
    n = m.rows
    rows = [list(r) + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, r in enumerate(m.entries)]
    pivots, _ = _echelon(rows)
    if len(pivots) < n:
        raise DomainError("matrix is singular")
    return Matrix([r[n:] for r in rows])


def distinct_rows(rows: Iterable[Sequence]) -> list[tuple]:
    """Deduplicated rows in lexicographic order (canonical, input-order-free)."""
    return sorted({tuple(r) for r in rows})


# ---------------------------------------------------------------------------
# recurrences and generating functions


def fit_linear_recurrence(seq: Sequence, max_order: int) -> Polynomial:
    """Minimal monic-constant recurrence polynomial c with c[0] = 1.

    Finds the least d <= max_order such that
        sum_{j=0..d} c[j] * seq[n-j] = 0   for all n in d..len(seq)-1,
    and returns c as a Polynomial (constant term 1).  Requires enough data
    to make the fit meaningful; raises NoRecurrence if nothing fits.
    """
    s = [rat(x) for x in seq]
    if len(s) < 2 * max_order:
        raise ValueError("sequence too short for requested order")
    for d in range(max_order + 1):
        if d == 0:
            if all(x == 0 for x in s):
                return Polynomial([1])
            continue
        m = Matrix([[s[n - j] for j in range(1, d + 1)] for n in range(d, len(s))])
        x = solve(m, [-s[n] for n in range(d, len(s))])
        if x is not None:
            return Polynomial([Fraction(1), *x])
    raise NoRecurrence(f"no linear recurrence of order <= {max_order}")


def series_to_rational_function(
    prefix: Sequence, recurrence: Polynomial
) -> RationalFunction:
    """Rational function with the given denominator whose expansion starts with prefix.

    The numerator is the convolution of the prefix with the recurrence,
    truncated to the prefix length; when the prefix genuinely satisfies the
    recurrence from degree d on, this is the unique rational function with
    that denominator extending it.
    """
    s = [rat(x) for x in prefix]
    c = recurrence.coeffs
    assert c and c[0] == 1, "recurrence must have constant term 1"
    num = [
        sum((c[j] * s[n - j] for j in range(min(n, len(c) - 1) + 1)), Fraction(0))
        for n in range(len(s))
    ]
    return RationalFunction(Polynomial(num), recurrence)


def partial_fractions(rf: RationalFunction):
    """Split rf as polynomial + sum of c/(1 - lam*T)^k terms.

    Returns (poly_part, terms) with terms a list of (lam, mult, coeffs),
    coeffs[k-1] multiplying 1/(1 - lam*T)^k, sorted by (lam.numerator,
    lam.denominator).  Raises NonSplitDenominator when the denominator has
    an irreducible factor of degree > 1 over Q.
    """
    poly_part, rem = divmod(rf.num, rf.den)
    den = rf.den
    # factor den = prod (1 - lam*T)^mult by exact rational root search
    factors: list[tuple[Fraction, int]] = []
    work = den
    while work.degree > 0:
        root = _rational_root(work)
        if root is None or root == 0:
            raise NonSplitDenominator(
                "denominator has a non-linear irreducible factor"
            )
        lam = 1 / root
        lin = Polynomial([1, -lam])
        mult = 0
        while True:
            q, r = divmod(work, lin)
            if not r.is_zero():
                break
            work, mult = q, mult + 1
        factors.append((lam, mult))
    factors.sort(key=lambda t: (t[0].numerator, t[0].denominator))

    if rem.is_zero():
        return poly_part, [(lam, mult, [Fraction(0)] * mult) for lam, mult in factors]

    # solve rem = sum c_{i,k} * den / (1 - lam_i T)^k  exactly
    columns: list[Polynomial] = []
    slots: list[tuple[int, int]] = []
    for i, (lam, mult) in enumerate(factors):
        lin = Polynomial([1, -lam])
        reduced = den
        for k in range(1, mult + 1):
            reduced = reduced // lin
            columns.append(reduced)
            slots.append((i, k))
    n = den.degree
    m = Matrix([[col[r] for col in columns] for r in range(n)])
    x = solve_unique(m, [rem[r] for r in range(n)])
    out = []
    for i, (lam, mult) in enumerate(factors):
        coeffs = [Fraction(0)] * mult
        for (ii, k), val in zip(slots, x):
            if ii == i:
                coeffs[k - 1] = val
        out.append((lam, mult, coeffs))
    return poly_part, out


def _rational_root(p: Polynomial) -> Fraction | None:
    """Some rational root of p, or None.  Exact search via the root bounds."""
    cs = p.coeffs
    assert cs
    from math import lcm  # clear denominators to integers

    denlcm = lcm(*(c.denominator for c in cs))
    ints = [int(c * denlcm) for c in cs]
    if ints[0] == 0:
        return Fraction(0)  # T divides p
    a0, an = abs(ints[0]), abs(ints[-1])
    for p_div in _divisors(a0):
        for q_div in _divisors(an):
            for s in (1, -1):
                cand = Fraction(s * p_div, q_div)
                if p(cand) == 0:
                    return cand
    return None


def _divisors(n: int) -> list[int]:
    assert n > 0
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
