"""Exact scalars and fraction-free linear algebra over Q(delta).

Scalars are rational functions in one formal variable delta with integer
coefficients (`RatFunc`), stored in a reduced canonical form so that equal
values always have equal representations.  Plain rationals are handled by
the standard library `Fraction` (aliased `BigRat`) and embed as constant
rational functions.

The elimination routines (`rank`, `kernel_basis`, `in_span`, `span_solve`)
work on sparse matrices over these scalars and never leave exact
arithmetic: rows are cleared to integer-coefficient polynomials and updated
by cross-multiplication with per-row content stripping, so no fractions
appear during elimination.  The pivot rule is deterministic: among all
candidate entries, the one with the smallest (max degree, column index,
row index) is chosen first, which keeps intermediate degrees low.

Floating-point evaluation (`eval_float`, `float_rank`) is provided
separately as a cheap probabilistic cross-check of the exact results.
"""

from __future__ import annotations

import math
from fractions import Fraction

BigRat = Fraction


class PoleAtPoint(ZeroDivisionError):
    """Evaluation point is (numerically) a zero of the denominator."""


class DimensionMismatch(ValueError):
    """Matrix/vector shapes are incompatible."""


# ---------------------------------------------------------------------------
# Integer-coefficient polynomials in delta
# ---------------------------------------------------------------------------

class IntPoly:
    """Polynomial in delta with integer coefficients.

    Coefficients are stored by increasing degree with the trailing zeros
    trimmed, so the zero polynomial has an empty coefficient tuple and
    degree -1.

    >>> p = IntPoly((0, 1))       # delta
    >>> (p * p - IntPoly((1,))).degree
    2
    >>> str(p * p - IntPoly((1,)))
    'delta^2 - 1'
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = tuple(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        self.coeffs = coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPoly(out)

    def scale(self, k: int) -> "IntPoly":
        if k == 0:
            return ZERO_POLY
        return IntPoly(tuple(c * k for c in self.coeffs))

    def shift(self, k: int) -> "IntPoly":
        """Multiply by delta^k."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
            if g == 1:
                break
        return g

    def primitive(self):
        """Return (content, primitive part); the sign stays on the part."""
        c = self.content()
        if c in (0, 1):
            return c, self
        return c, IntPoly(tuple(x // c for x in self.coeffs))

    def divexact(self, other: "IntPoly") -> "IntPoly":
        """Exact division; raises ValueError if other does not divide self."""
        if not other:
            raise ZeroDivisionError("IntPoly division by zero")
        if not self:
            return ZERO_POLY
        rem = list(self.coeffs)
        lead = other.leading
        db = other.degree
        out = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            if rem[i] == 0:
                continue
            q, r = divmod(rem[i], lead)
            if r != 0:
                raise ValueError("inexact polynomial division")
            out[i - db] = q
            for j, c in enumerate(other.coeffs):
                rem[i - db + j] -= q * c
        if any(rem):
            raise ValueError("inexact polynomial division")
        return IntPoly(out)

    def eval(self, x):
        """Horner evaluation; works for float or Fraction arguments."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}delta" if i == 1 else f"{mag}delta^{i}"
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"IntPoly({self.coeffs!r})"


ZERO_POLY = IntPoly()
ONE_POLY = IntPoly((1,))
DELTA_POLY = IntPoly((0, 1))


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Fraction-free remainder of a by b (up to a nonzero integer factor)."""
    lead_b = b.leading
    r = a
    while r and r.degree >= b.degree:
        r = r.scale(lead_b) - b.scale(r.leading).shift(r.degree - b.degree)
        _, r = r.primitive() if r else (0, r)
    return r


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Gcd in Z[delta], normalized with positive leading coefficient."""
    if not a:
        a, b = b, a
    if not b:
        if not a:
            return ZERO_POLY
        return a if a.leading > 0 else -a
    ca, pa = a.primitive()
    cb, pb = b.primitive()
    c = math.gcd(ca, cb)
    while pb:
        pa, pb = pb, _pseudo_rem(pa, pb)
        if pb:
            _, pb = pb.primitive()
    if pa.leading < 0:
        pa = -pa
    return pa.scale(c)


# ---------------------------------------------------------------------------
# Rational functions in delta
# ---------------------------------------------------------------------------

class RatFunc:
    """Reduced fraction of integer polynomials in delta.

    Canonical form: the denominator is nonzero with positive leading
    coefficient, the polynomial gcd of numerator and denominator is 1, and
    so is the gcd of their integer contents.  Equal values therefore have
    equal (hashable) representations.

    >>> d = RatFunc.delta()
    >>> (d * d - RatFunc.one()) / (d - RatFunc.one())
    RatFunc('delta + 1')
    """

    __slots__ = ("num", "den")

    def __init__(self, num: IntPoly, den: IntPoly = ONE_POLY):
        if not den:
            raise ZeroDivisionError("RatFunc with zero denominator")
        if not num:
            self.num, self.den = ZERO_POLY, ONE_POLY
            return
        g = poly_gcd(num, den)
        if g.degree > 0 or g.leading > 1:
            num = num.divexact(g)
            den = den.divexact(g)
        c = math.gcd(num.content(), den.content())
        if c > 1:
            num = IntPoly(tuple(x // c for x in num.coeffs))
            den = IntPoly(tuple(x // c for x in den.coeffs))
        if den.leading < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "RatFunc":
        return RatFunc(ZERO_POLY)

    @staticmethod
    def one() -> "RatFunc":
        return RatFunc(ONE_POLY)

    @staticmethod
    def delta() -> "RatFunc":
        return RatFunc(DELTA_POLY)

    @staticmethod
    def from_int(k: int) -> "RatFunc":
        return RatFunc(IntPoly((k,)))

    @staticmethod
    def from_fraction(q) -> "RatFunc":
        q = Fraction(q)
        return RatFunc(IntPoly((q.numerator,)), IntPoly((q.denominator,)))

    @staticmethod
    def delta_power(k: int) -> "RatFunc":
        return RatFunc(ONE_POLY.shift(k))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __sub__(self, other):
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not other.num:
            raise ZeroDivisionError("RatFunc division by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        return (isinstance(other, RatFunc)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    # -- queries ------------------------------------------------------------

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        num = self.num.coeffs[0] if self.num.coeffs else 0
        return Fraction(num, self.den.coeffs[0])

    def eval_float(self, delta: float) -> float:
        den = self.den.eval(float(delta))
        if abs(den) <= 1e-12:
            raise PoleAtPoint(f"denominator vanishes at delta={delta}")
        return self.num.eval(float(delta)) / den

    def __str__(self):
        if self.den == ONE_POLY:
            return str(self.num)
        num = str(self.num)
        if self.num.degree > 0:
            num = f"({num})"
        den = str(self.den)
        if self.den.degree > 0:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


RF_ZERO = RatFunc.zero()
RF_ONE = RatFunc.one()


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Named-operation wrapper over the four field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def eval_float(a: RatFunc, delta: float) -> float:
    return a.eval_float(delta)


# ---------------------------------------------------------------------------
# Scalar parsing (for the text file formats)
# ---------------------------------------------------------------------------

def parse_scalar(text: str) -> RatFunc:
    """Parse expressions like '3', '-2/5', 'delta^2-1', '(delta+1)/(delta-1)'.

    Grammar: the usual precedence with +, -, *, /, ^, parentheses, integer
    literals, and the variable name 'delta'.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take(expected=None):
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"bad scalar {text!r}: expected {expected}, got {tok}")
        pos[0] += 1
        return tok

    def parse_expr():
        value = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term():
        value = parse_factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = parse_factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def parse_factor():
        if peek() == "-":
            take()
            return -parse_factor()
        if peek() == "+":
            take()
            return parse_factor()
        base = parse_atom()
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            exp_tok = take()
            if not exp_tok.isdigit():
                raise ValueError(f"bad exponent in {text!r}")
            result = RF_ONE
            for _ in range(int(exp_tok)):
                result = result * base
            if neg:
                result = RF_ONE / result
            return result
        return base

    def parse_atom():
        tok = take()
        if tok == "(":
            value = parse_expr()
            take(")")
            return value
        if tok == "delta":
            return RatFunc.delta()
        if tok.isdigit():
            return RatFunc.from_int(int(tok))
        raise ValueError(f"bad token {tok!r} in scalar {text!r}")

    value = parse_expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in scalar {text!r}")
    return value


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif text.startswith("delta", i):
            tokens.append("delta")
            i += 5
        else:
            raise ValueError(f"bad character {ch!r} in scalar {text!r}")
    if not tokens:
        raise ValueError("empty scalar")
    return tokens


# ---------------------------------------------------------------------------
# Sparse matrices
# ---------------------------------------------------------------------------

class SparseMat:
    """Sparse matrix over RatFunc; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                self[r, c] = v

    def __setitem__(self, key, value: RatFunc):
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise DimensionMismatch(f"index {key} out of range")
        if value:
            self.entries[r, c] = value
        else:
            self.entries.pop((r, c), None)

    def __getitem__(self, key) -> RatFunc:
        return self.entries.get(key, RF_ZERO)

    @staticmethod
    def from_dense(data) -> "SparseMat":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        m = SparseMat(rows, cols)
        for r, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged dense data")
            for c, v in enumerate(row):
                if v:
                    m.entries[r, c] = v
        return m

    def column(self, c: int) -> dict:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def is_zero(self) -> bool:
        return not self.entries

    def mat_mul(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = SparseMat(self.rows, other.cols)
        acc: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                key = (r, c)
                prev = acc.get(key)
                acc[key] = a * b if prev is None else prev + a * b
        for key, v in acc.items():
            if v:
                out.entries[key] = v
        return out

    def to_dense_float(self, delta: float):
        import numpy as np
        dense = np.zeros((self.rows, self.cols))
        for (r, c), v in self.entries.items():
            dense[r, c] = v.eval_float(delta)
        return dense


# ---------------------------------------------------------------------------
# Fraction-free elimination
# ---------------------------------------------------------------------------

def _cleared_rows(m: SparseMat, extra_col=None):
    """Rows of m as dicts col -> IntPoly, denominators cleared per row.

    extra_col, if given, is a dict row -> RatFunc appended as column index
    m.cols (used for augmented systems).  Row scaling preserves rank,
    kernels, and solution sets.
    """
    rows = [dict() for _ in range(m.rows)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    if extra_col:
        for r, v in extra_col.items():
            if v:
                rows[r][m.cols] = v
    cleared = []
    for row in rows:
        if not row:
            cleared.append({})
            continue
        lcm = ONE_POLY
        for v in row.values():
            g = poly_gcd(lcm, v.den)
            lcm = lcm.divexact(g) * v.den
        out = {c: v.num * lcm.divexact(v.den) for c, v in row.items()}
        cleared.append(_strip_row_content(out))
    return cleared


def _strip_row_content(row: dict) -> dict:
    """Divide a row of IntPoly by the gcd of its entries (sign kept)."""
    if not row:
        return row
    g = ZERO_POLY
    for v in row.values():
        g = poly_gcd(g, v)
        if g.degree == 0 and abs(g.leading) == 1:
            return row
    if g.degree == 0 and g.leading in (1, -1):
        return row
    return {c: v.divexact(g) for c, v in row.items()}


def _eliminate(rows, pivot_cols_allowed=None):
    """Fraction-free Gauss-Jordan elimination in place.

    Pivot rule: smallest (max degree of entry, column index, row index)
    first.  After each step the pivot column is zeroed in every other row,
    so at the end each pivot column is supported on its pivot row alone.
    Returns the list of (row index, pivot column) pairs.
    """
    pivots = []
    pivoted_rows = set()
    while True:
        best = None
        for r, row in enumerate(rows):
            if r in pivoted_rows:
                continue
            for c, v in row.items():
                if pivot_cols_allowed is not None and c not in pivot_cols_allowed:
                    continue
                key = (v.degree, c, r)
                if best is None or key < best[0]:
                    best = (key, r, c)
        if best is None:
            break
        _, pr, pc = best
        pivot_row = rows[pr]
        pval = pivot_row[pc]
        for r, row in enumerate(rows):
            if r == pr:
                continue
            coef = row.get(pc)
            if coef is None:
                continue
            new = {}
            for c, v in row.items():
                if c == pc:
                    continue
                new[c] = v * pval
            for c, v in pivot_row.items():
                if c == pc:
                    continue
                term = v * coef
                cur = new.get(c)
                total = (cur - term) if cur is not None else -term
                if total:
                    new[c] = total
                elif cur is not None:
                    del new[c]
            rows[r] = _strip_row_content(new)
        pivots.append((pr, pc))
        pivoted_rows.add(pr)
    return pivots


def rank(m: SparseMat) -> int:
    """Rank over Q(delta) by fraction-free elimination."""
    rows = _cleared_rows(m)
    return len(_eliminate(rows))


def kernel_basis(m: SparseMat):
    """Basis of the right kernel of m over Q(delta).

    Each vector is returned as a dense list of RatFunc with polynomial
    entries (denominators cleared), common content stripped, and the first
    nonzero entry having a positive leading coefficient.
    """
    rows = _cleared_rows(m)
    pivots = _eliminate(rows)
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        vec = {f: RF_ONE}
        for r, p in pivots:
            val = rows[r].get(f)
            if val:
                vec[p] = RatFunc(-val, rows[r][p])
        basis.append(_clear_vector(vec, m.cols))
    return basis


def _clear_vector(vec: dict, length: int):
    """Dense RatFunc vector with denominators cleared and content 1."""
    lcm = ONE_POLY
    for v in vec.values():
        g = poly_gcd(lcm, v.den)
        lcm = lcm.divexact(g) * v.den
    cleared = {c: v.num * lcm.divexact(v.den) for c, v in vec.items()}
    g = ZERO_POLY
    for v in cleared.values():
        g = poly_gcd(g, v)
    if g and (g.degree > 0 or g.leading > 1):
        cleared = {c: v.divexact(g) for c, v in cleared.items()}
    first = min(cleared) if cleared else None
    if first is not None and cleared[first].leading < 0:
        cleared = {c: -v for c, v in cleared.items()}
    out = [RF_ZERO] * length
    for c, v in cleared.items():
        out[c] = RatFunc(v)
    return out


def in_span(v, columns: SparseMat) -> bool:
    """True iff vector v (length columns.rows) lies in the column span."""
    v = list(v)
    if len(v) != columns.rows:
        raise DimensionMismatch(
            f"vector length {len(v)} vs {columns.rows} rows")
    base = rank(columns)
    aug = SparseMat(columns.rows, columns.cols + 1, dict(columns.entries))
    for r, val in enumerate(v):
        if val:
            aug[r, columns.cols] = val
    return rank(aug) == base


def span_solve(columns: SparseMat, v):
    """Solve columns . x = v exactly; returns list of RatFunc or None.

    Unlike in_span this produces an explicit coefficient certificate.
    """
    v = list(v)
    if len(v) != columns.rows:
        raise DimensionMismatch(
            f"vector length {len(v)} vs {columns.rows} rows")
    extra = {r: val for r, val in enumerate(v) if val}
    rows = _cleared_rows(columns, extra_col=extra)
    pivots = _eliminate(rows, pivot_cols_allowed=set(range(columns.cols)))
    aug = columns.cols
    pivot_rows = {r for r, _ in pivots}
    for r, row in enumerate(rows):
        if r not in pivot_rows and row.get(aug):
            return None
    x = [RF_ZERO] * columns.cols
    for r, p in pivots:
        val = rows[r].get(aug)
        if val:
            x[p] = RatFunc(val, rows[r][p])
    return x


def float_rank(m: SparseMat, delta: float) -> int:
    """Numerical rank of the matrix evaluated at a float delta."""
    import numpy as np
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(np.linalg.matrix_rank(m.to_dense_float(delta)))


def mat_vec(m: SparseMat, x) -> list:
    """Exact matrix-vector product (x dense over RatFunc)."""
    x = list(x)
    if len(x) != m.cols:
        raise DimensionMismatch("mat_vec shape mismatch")
    out = [RF_ZERO] * m.rows
    for (r, c), v in m.entries.items():
        if x[c]:
            out[r] = out[r] + v * x[c]
    return out
