"""Low-degree chain complex of circle diagrams on a punctured sphere.

A degree-k diagram lives on a sphere with finite punctures q_1..q_k (left
to right) plus one puncture at infinity.  Its circles form a laminar
family of consecutive blocks [i..j] with multiplicities; crossing blocks
(such as [1,2] together with [2,3]) are rejected.  Degrees up to 3 are
supported; that is all the homology checks below need.

The boundary is the alternating sum of puncture-filling operators: index
j < k fills the finite puncture q_{j+1}, and j = k fills the puncture at
infinity, after which the last finite puncture is promoted to infinity
(promote-last rule).  Circles whose puncture-free side becomes empty are
deleted, each contributing a factor delta.

The default mode is unshaded, where boundary . boundary = 0 holds exactly.
Shaded diagrams carry the shading bit of the region at infinity; the bit
transport rules reproduce the displayed shaded boundary values (the
deleted-circle parity at degree 2 and the promoted-region parity at
degree 3) but do not assemble into a chain complex, so all homology
computations run unshaded.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .errors import SizeLimit
from .exactarith import (RatFunc, RF_ONE, RF_ZERO, SparseMat, rank,
                         kernel_basis, span_solve)


class UnsupportedDegree(ValueError):
    """Diagram degree outside the implemented range 0..3."""


# block classes per degree, in canonical order
_BLOCK_CLASSES = {
    0: (),
    1: ((1, 1),),
    2: ((1, 1), (1, 2), (2, 2)),
    3: ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)),
}


def _crossing(b1, b2) -> bool:
    (i1, j1), (i2, j2) = b1, b2
    if i1 > i2 or (i1 == i2 and j1 > j2):
        (i1, j1), (i2, j2) = (i2, j2), (i1, j1)
    # sorted so i1 <= i2; crossing means overlap without containment
    return i2 <= j1 < j2 and i1 < i2


class CircleDiagram:
    """Canonical immutable circle diagram.

    blocks: sorted tuple of (i, j, mult) consecutive intervals.
    shading: None in unshaded mode, else the bit of the region at infinity.
    """

    __slots__ = ("degree", "blocks", "shading")

    def __init__(self, degree, blocks=(), shading=None):
        if not (0 <= degree <= 3):
            raise UnsupportedDegree(f"degree {degree} not supported")
        norm = {}
        for i, j, m in blocks:
            if m == 0:
                continue
            if m < 0:
                raise ValueError(f"negative multiplicity on block [{i},{j}]")
            if not (1 <= i <= j <= degree):
                raise ValueError(f"block [{i},{j}] out of range for degree {degree}")
            norm[i, j] = norm.get((i, j), 0) + m
        for b1, b2 in combinations_with_replacement(sorted(norm), 2):
            if b1 != b2 and _crossing(b1, b2):
                raise ValueError(f"crossing blocks {b1} and {b2}")
        if degree == 0 and norm:
            raise ValueError("degree-0 diagram cannot carry circles")
        if shading is not None:
            if degree == 0:
                # the two shadings of the empty diagram are identified
                shading = None
            elif shading not in (0, 1):
                raise ValueError("shading must be 0, 1, or None")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "blocks",
                           tuple((i, j, norm[i, j]) for i, j in sorted(norm)))
        object.__setattr__(self, "shading", shading)

    def __setattr__(self, *_):
        raise AttributeError("CircleDiagram is immutable")

    def total(self) -> int:
        return sum(m for _, _, m in self.blocks)

    def mult(self, i, j) -> int:
        for bi, bj, m in self.blocks:
            if (bi, bj) == (i, j):
                return m
        return 0

    def __eq__(self, other):
        return (isinstance(other, CircleDiagram)
                and self.degree == other.degree
                and self.blocks == other.blocks
                and self.shading == other.shading)

    def __hash__(self):
        return hash((self.degree, self.blocks, self.shading))

    def sort_key(self):
        return (self.total(), self.blocks, -1 if self.shading is None else self.shading)

    def encode(self) -> str:
        if self.blocks:
            body = " ".join(
                (f"[{i}]^{m}" if i == j else f"[{i},{j}]^{m}")
                for i, j, m in self.blocks)
        else:
            body = "-"
        out = f"k={self.degree}; {body}"
        if self.shading is not None:
            out += f"; s={self.shading}"
        return out

    @staticmethod
    def parse(text: str) -> "CircleDiagram":
        parts = [p.strip() for p in text.split(";")]
        if len(parts) not in (2, 3) or not parts[0].startswith("k="):
            raise ValueError(f"bad diagram encoding {text!r}")
        degree = int(parts[0][2:])
        blocks = []
        if parts[1] != "-":
            for token in parts[1].split():
                if "^" not in token or not token.startswith("["):
                    raise ValueError(f"bad block token {token!r} in {text!r}")
                span, mult = token.rsplit("^", 1)
                inner = span[1:-1]
                if not span.endswith("]"):
                    raise ValueError(f"bad block token {token!r} in {text!r}")
                if "," in inner:
                    i, j = (int(x) for x in inner.split(","))
                else:
                    i = j = int(inner)
                blocks.append((i, j, int(mult)))
        shading = None
        if len(parts) == 3:
            if not parts[2].startswith("s="):
                raise ValueError(f"bad shading field in {text!r}")
            shading = int(parts[2][2:])
        return CircleDiagram(degree, blocks, shading)

    def __repr__(self):
        return f"CircleDiagram({self.encode()!r})"


def sigma(k: int, shading=None) -> CircleDiagram:
    """Degree-1 generator: k parallel circles around the finite puncture."""
    return CircleDiagram(1, [(1, 1, k)] if k else [], shading)


def sigma2(a: int, b: int, c: int, shading=None) -> CircleDiagram:
    """Degree-2 generator: a around q1, b around q2, c around both."""
    return CircleDiagram(2, [(1, 1, a), (2, 2, b), (1, 2, c)], shading)


def diagram3(a=0, b=0, c=0, ab=0, bc=0, abc=0, shading=None) -> CircleDiagram:
    """Degree-3 diagram with the named block multiplicities."""
    return CircleDiagram(3, [(1, 1, a), (2, 2, b), (3, 3, c),
                             (1, 2, ab), (2, 3, bc), (1, 3, abc)],
                         shading)


class ChainVector:
    """Formal RatFunc-combination of diagrams of one degree."""

    def __init__(self, degree, terms=None):
        self.degree = degree
        self.terms = {}
        for d, coeff in (terms or {}).items():
            if d.degree != degree:
                raise ValueError("mixed degrees in chain vector")
            if coeff:
                self.terms[d] = coeff

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("mixed degrees")
        out = dict(self.terms)
        for d, c in other.terms.items():
            val = out.get(d, RF_ZERO) + c
            if val:
                out[d] = val
            elif d in out:
                del out[d]
        return ChainVector(self.degree, out)

    def __neg__(self):
        return ChainVector(self.degree, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff: RatFunc) -> "ChainVector":
        return ChainVector(self.degree,
                           {d: coeff * c for d, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, ChainVector)
                and self.degree == other.degree and self.terms == other.terms)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"ChainVector(k={self.degree}, 0)"
        body = " + ".join(f"({c})*{d.encode()}"
                          for d, c in sorted(self.terms.items(),
                                             key=lambda t: t[0].sort_key()))
        return f"ChainVector({body})"


def single(d: CircleDiagram, coeff=RF_ONE) -> ChainVector:
    return ChainVector(d.degree, {d: coeff})


# ---------------------------------------------------------------------------
# Puncture filling and the boundary
# ---------------------------------------------------------------------------

def fill_puncture(d: CircleDiagram, j: int) -> ChainVector:
    """Fill puncture j (finite q_{j+1} for j < k, infinity for j = k).

    Returns delta^(deleted circles) times the surviving diagram of degree
    k-1.  Shading transport: finite fills keep the bit; filling infinity
    flips it by the deleted-circle parity at degree 2 and by the total
    multiplicity around the promoted puncture at degree 3.
    """
    k = d.degree
    if k < 1:
        raise UnsupportedDegree("cannot fill punctures of a degree-0 diagram")
    if not (0 <= j <= k):
        raise ValueError(f"fill index {j} out of range 0..{k}")
    deleted = 0
    new_blocks = []
    if j < k:
        p = j + 1
        for (i0, j0, m) in d.blocks:
            if i0 <= p <= j0:
                if i0 == j0:
                    deleted += m  # circle loses its only puncture
                    continue
                ni, nj = i0, j0 - 1
            else:
                ni = i0 - 1 if i0 > p else i0
                nj = j0 - 1 if j0 > p else j0
            new_blocks.append((ni, nj, m))
        bit = d.shading
    else:
        flip = 0
        for (i0, j0, m) in d.blocks:
            if j0 == k:
                flip += m  # circles around the promoted puncture
                if i0 == 1:
                    deleted += m  # nothing left on the far side
                    continue
                new_blocks.append((1, i0 - 1, m))
            else:
                new_blocks.append((i0, j0, m))
        if d.shading is None:
            bit = None
        elif k == 2:
            bit = d.shading ^ (deleted & 1)
        else:
            bit = d.shading ^ (flip & 1)
    out = CircleDiagram(k - 1, new_blocks, bit)
    return single(out, RatFunc.delta_power(deleted))


def boundary(x) -> ChainVector:
    """Alternating sum of fill_puncture over all punctures; linear."""
    if isinstance(x, CircleDiagram):
        x = single(x)
    if x.degree < 1:
        raise UnsupportedDegree("boundary defined for degrees 1..3")
    out = ChainVector(x.degree - 1)
    for d, coeff in x.terms.items():
        for j in range(d.degree + 1):
            term = fill_puncture(d, j).scale(coeff)
            out = out + (term if j % 2 == 0 else -term)
    return out


# ---------------------------------------------------------------------------
# Enumeration and matrices (unshaded)
# ---------------------------------------------------------------------------

def enumerate_diagrams(degree: int, max_total: int):
    """All unshaded diagrams of the degree with total multiplicity <= T,
    deterministically ordered."""
    if not (0 <= degree <= 3):
        raise UnsupportedDegree(f"degree {degree} not supported")
    classes = _BLOCK_CLASSES[degree]
    out = []

    def rec(idx, remaining, chosen):
        if idx == len(classes):
            try:
                out.append(CircleDiagram(
                    degree, [(i, j, m) for (i, j), m in chosen.items()]))
            except ValueError:
                pass  # crossing combination
            return
        block = classes[idx]
        for m in range(remaining + 1):
            if m:
                chosen[block] = m
            rec(idx + 1, remaining - m, chosen)
            chosen.pop(block, None)

    rec(0, max_total, {})
    out.sort(key=CircleDiagram.sort_key)
    return out


def boundary_matrix(degree: int, t_dom: int, t_cod: int | None = None) -> SparseMat:
    """Matrix of the boundary on the truncated windows.

    Columns follow enumerate_diagrams(degree, t_dom), rows
    enumerate_diagrams(degree-1, t_cod).  Filling never increases the
    total, so t_cod >= t_dom always suffices.
    """
    if t_cod is None:
        t_cod = t_dom
    if t_cod < t_dom:
        raise ValueError("codomain window smaller than domain window")
    domain = enumerate_diagrams(degree, t_dom)
    codomain = enumerate_diagrams(degree - 1, t_cod)
    row_of = {d: i for i, d in enumerate(codomain)}
    m = SparseMat(len(codomain), len(domain))
    for col, d in enumerate(domain):
        for out_d, coeff in boundary(d).terms.items():
            r = row_of[out_d]
            m[r, col] = m[r, col] + coeff
    return m


def h0_report(window: int = 5) -> int:
    """dim C_0 - rank(boundary_1) over the window; the rank is zero."""
    return 1 - rank(boundary_matrix(1, window))


# ---------------------------------------------------------------------------
# Homology containment checks
# ---------------------------------------------------------------------------

def h1_vanishing_check(K: int) -> dict:
    """Certify sigma_m for m <= K inside the boundary span of degree 2.

    Columns range over sigma^c_{a,b} with a+b+c <= K+1; certificates list
    (column encoding, coefficient) pairs with the exact expansion.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    window = K + 1
    domain = enumerate_diagrams(2, window)
    codomain = enumerate_diagrams(1, window)
    row_of = {d: i for i, d in enumerate(codomain)}
    matrix = boundary_matrix(2, window, window)
    per_m = {}
    all_contained = True
    for m in range(K + 1):
        target = [RF_ZERO] * len(codomain)
        target[row_of[sigma(m)]] = RF_ONE
        coeffs = span_solve(matrix, target)
        if coeffs is None:
            all_contained = False
            per_m[m] = {"contained": False, "certificate": None}
            continue
        cert = [(domain[i].encode(), str(c))
                for i, c in enumerate(coeffs) if c]
        per_m[m] = {"contained": True, "certificate": cert}
    return {"contained": all_contained, "K": K, "window": window,
            "per_m": per_m}


class _Echelon:
    """Incremental exact echelon over the row-index space.

    Pivot rows are kept with their leading (smallest) index normalized to
    coefficient one and are never modified afterwards, so reductions can
    be resumed as new pivots arrive.
    """

    def __init__(self):
        self.pivots = {}

    def reduce(self, vec: dict) -> dict:
        """Reduce until zero or stuck at a leading index with no pivot."""
        while vec:
            lead = min(vec)
            row = self.pivots.get(lead)
            if row is None:
                return vec
            factor = vec[lead]
            for idx, coeff in row.items():
                val = vec.get(idx, RF_ZERO) - factor * coeff
                if val:
                    vec[idx] = val
                elif idx in vec:
                    del vec[idx]
        return vec

    def insert(self, vec: dict):
        """Reduce and store; returns the new pivot index or None."""
        vec = self.reduce(vec)
        if not vec:
            return None
        lead = min(vec)
        inv = RF_ONE / vec[lead]
        self.pivots[lead] = {i: inv * c for i, c in vec.items()}
        return lead


def h2_vanishing_check(N: int, margin: int = 2, diagram_cap: int = 100000,
                       generators=None) -> dict:
    """Check ker(boundary_2) on total <= N against the degree-3 image.

    Kernel vectors of the degree-2 boundary are tested for membership in
    the span of degree-3 boundaries over diagrams with total <= N+margin.
    The degree-3 columns are consumed in ascending total order and
    insertion stops as soon as every kernel vector has reduced to zero.
    generators overrides the degree-3 window (used to probe failure
    reporting).
    """
    if N < 1 or margin < 0:
        raise ValueError("need N >= 1 and margin >= 0")
    window3 = N + margin
    gen3 = enumerate_diagrams(3, window3) if generators is None else list(generators)
    if len(gen3) > diagram_cap:
        raise SizeLimit(
            f"{len(gen3)} degree-3 diagrams exceed cap {diagram_cap}")

    d2 = boundary_matrix(2, N, N)
    kernel = kernel_basis(d2)

    cols2_small = enumerate_diagrams(2, N)
    rows_big = enumerate_diagrams(2, window3)
    row_of = {d: i for i, d in enumerate(rows_big)}

    # kernel vectors re-indexed into the larger degree-2 window
    residuals = []
    supports = []
    for vec in kernel:
        residuals.append({row_of[cols2_small[i]]: c
                          for i, c in enumerate(vec) if c})
        supports.append(sorted(cols2_small[i].encode()
                               for i, c in enumerate(vec) if c))

    ech = _Echelon()
    unresolved = {i: vec for i, vec in enumerate(residuals)}
    stalled = {}  # leading index -> list of residual ids
    for rid in list(unresolved):
        vec = ech.reduce(unresolved[rid])
        if not vec:
            del unresolved[rid]
        else:
            stalled.setdefault(min(vec), []).append(rid)

    columns_used = 0
    for d in gen3:
        if not unresolved:
            break
        columns_used += 1
        col = {}
        for out_d, coeff in boundary(d).terms.items():
            idx = row_of[out_d]
            col[idx] = col.get(idx, RF_ZERO) + coeff
        new_pivot = ech.insert(col)
        while new_pivot is not None and new_pivot in stalled:
            rids = stalled.pop(new_pivot)
            new_pivot = None
            for rid in rids:
                if rid not in unresolved:
                    continue
                vec = ech.reduce(unresolved[rid])
                if not vec:
                    del unresolved[rid]
                else:
                    stalled.setdefault(min(vec), []).append(rid)

    failing = []
    for rid in sorted(unresolved):
        failing.append({"kernel_index": rid, "support": supports[rid]})
    return {
        "kernel_dim": len(kernel),
        "contained": not unresolved,
        "failing_vectors": failing,
        "columns_available": len(gen3),
        "columns_used": columns_used,
        "window": window3,
    }
