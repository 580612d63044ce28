"""Fusion rings: structure constants, dimensions, and global index.

A fusion ring is a based ring with basis `labels` (unit first), an
involutive `dual`, and nonnegative integer structure constants
N(alpha, beta, gamma) counting gamma inside alpha . beta.  Dimensions are
carried as floats and, when a closed form in delta exists, as exact
rational functions.

Infinite rings (the generic Temperley-Lieb ladder) are materialized as
finite windows with `truncated=True` and a `frontier` set of labels whose
products are clipped; axiom checks automatically avoid triples that touch
the frontier.
"""

from __future__ import annotations

import math

from .exactarith import RatFunc, RF_ONE, RF_ZERO, parse_scalar
from .groups import Group, NotAGroup


class NotConnected(ValueError):
    """Fusion graph is disconnected; no unique Perron eigenvector."""


class InvalidRingFile(ValueError):
    """Ring file is malformed or fails an axiom."""


class FusionRing:
    """Based ring with nonnegative structure constants.

    N is a dict (a, b, c) -> positive int with zero entries omitted.
    dims maps labels to positive floats; dims_exact (optional) maps labels
    to RatFunc values in delta.
    """

    def __init__(self, labels, dual, N, dims=None, dims_exact=None,
                 truncated=False, frontier=(), name=""):
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.dual = dict(dual)
        self.N = {k: v for k, v in N.items() if v}
        self.dims = dict(dims) if dims else None
        self.dims_exact = dict(dims_exact) if dims_exact else None
        self.truncated = truncated
        self.frontier = frozenset(frontier)
        self.name = name

    @property
    def unit(self):
        return self.labels[0]

    def __len__(self):
        return len(self.labels)

    def mult(self, a, b, c) -> int:
        return self.N.get((a, b, c), 0)

    def support(self, a, b):
        """Labels appearing in a . b, in label order."""
        return [c for c in self.labels if (a, b, c) in self.N]

    def global_index(self) -> float:
        return sum(self.dims[a] ** 2 for a in self.labels)

    def global_index_exact(self):
        if self.dims_exact is None:
            return None
        total = RF_ZERO
        for a in self.labels:
            d = self.dims_exact[a]
            total = total + d * d
        return total

    def __repr__(self):
        tag = self.name or f"{len(self.labels)} labels"
        return f"FusionRing({tag})"


def _checkable(ring: FusionRing, *labels) -> bool:
    """A check may use these labels if no frontier label is involved and
    no pairwise product among them is clipped at the frontier."""
    if not ring.truncated:
        return True
    if any(l in ring.frontier for l in labels):
        return False
    for a in labels:
        for b in labels:
            if any(c in ring.frontier for c in ring.support(a, b)):
                return False
    return True


def verify_axioms(ring: FusionRing, dim_tol=1e-9):
    """Return a list of axiom failures (empty list means all pass).

    Checks the unit law, dual involutivity, Frobenius symmetry,
    associativity, and the dimension eigen-equation
    d(a)d(b) = sum_c N(a,b,c) d(c) (float to dim_tol; exact when exact
    dims are stored).  Truncated rings skip triples touching the frontier.
    """
    failures = []
    labels = ring.labels
    unit = ring.unit

    if ring.dual.get(unit) != unit:
        failures.append(f"dual(unit) = {ring.dual.get(unit)} != unit")
    for a in labels:
        if ring.dual.get(ring.dual.get(a)) != a:
            failures.append(f"dual not involutive at {a}")
            break

    for b in labels:
        for c in labels:
            want = 1 if b == c else 0
            if ring.mult(unit, b, c) != want:
                failures.append(f"unit law fails: N(unit,{b},{c}) != {want}")
            if ring.mult(b, unit, c) != want:
                failures.append(f"unit law fails: N({b},unit,{c}) != {want}")

    for (a, b, c), v in sorted(ring.N.items(), key=_key(ring)):
        if v < 0:
            failures.append(f"negative multiplicity at ({a},{b},{c})")
        if not _checkable(ring, a, b, c):
            continue
        da, db, dc = ring.dual[a], ring.dual[b], ring.dual[c]
        if ring.mult(db, da, dc) != v:
            failures.append(
                f"Frobenius fails: N({a},{b},{c})={v} but "
                f"N({db},{da},{dc})={ring.mult(db, da, dc)}")
        if ring.mult(da, c, b) != v:
            failures.append(
                f"Frobenius fails: N({a},{b},{c})={v} but "
                f"N({da},{c},{b})={ring.mult(da, c, b)}")

    for a in labels:
        for b in labels:
            for g in labels:
                if not _checkable(ring, a, b, g):
                    continue
                for d in labels:
                    lhs = sum(ring.mult(a, b, x) * ring.mult(x, g, d)
                              for x in ring.support(a, b))
                    rhs = sum(ring.mult(b, g, y) * ring.mult(a, y, d)
                              for y in ring.support(b, g))
                    if lhs != rhs:
                        failures.append(
                            f"associativity fails at ({a},{b},{g})->{d}: "
                            f"{lhs} != {rhs}")

    if ring.dims is not None:
        for a in labels:
            for b in labels:
                if not _checkable(ring, a, b):
                    continue
                lhs = ring.dims[a] * ring.dims[b]
                rhs = sum(v * ring.dims[c] for (x, y, c), v in ring.N.items()
                          if x == a and y == b)
                if abs(lhs - rhs) > dim_tol * max(1.0, abs(lhs)):
                    failures.append(
                        f"dimension equation fails at ({a},{b}): "
                        f"{lhs} vs {rhs}")
    if ring.dims_exact is not None:
        for a in labels:
            for b in labels:
                if not _checkable(ring, a, b):
                    continue
                lhs = ring.dims_exact[a] * ring.dims_exact[b]
                rhs = RF_ZERO
                for c in ring.support(a, b):
                    rhs = rhs + RatFunc.from_int(ring.mult(a, b, c)) * ring.dims_exact[c]
                if lhs != rhs:
                    failures.append(
                        f"exact dimension equation fails at ({a},{b})")
    return failures


def _key(ring):
    idx = ring.index
    return lambda item: (idx[item[0][0]], idx[item[0][1]], idx[item[0][2]])


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def from_group(group: Group) -> FusionRing:
    """Group ring as a fusion ring: N(g,h,k) = [gh = k], dual = inverse."""
    if not isinstance(group, Group):
        raise NotAGroup("expected a validated Group instance")
    labels = group.elements
    N = {}
    for g in labels:
        for h in labels:
            N[g, h, group.mul[g, h]] = 1
    dims = {g: 1.0 for g in labels}
    dims_exact = {g: RF_ONE for g in labels}
    return FusionRing(labels, dict(group.inv), N, dims, dims_exact,
                      name=f"Vec({group.name})" if group.name else "Vec")


def tlj_even(n: int) -> FusionRing:
    """Even part of the A_n Temperley-Lieb-Jones ring.

    Labels f_0, f_2, ..., f_{2*floor((n-1)/2)} with
    N(f_{2i}, f_{2j}, f_{2k}) = 1 iff |i-j| <= k <= min(i+j, (n-1)-i-j).
    Dimensions are the sine quotients at delta = 2cos(pi/(n+1)); these are
    genuinely irrational for most n, so only float dims are stored.
    """
    if n < 2:
        raise ValueError("tlj_even needs n >= 2")
    half = (n - 1) // 2
    labels = tuple(f"f{2 * i}" for i in range(half + 1))
    N = {}
    for i in range(half + 1):
        for j in range(half + 1):
            lo = abs(i - j)
            hi = min(i + j, (n - 1) - i - j)
            for k in range(lo, hi + 1):
                N[labels[i], labels[j], labels[k]] = 1
    q = math.pi / (n + 1)
    dims = {labels[i]: math.sin((2 * i + 1) * q) / math.sin(q)
            for i in range(half + 1)}
    dual = {lab: lab for lab in labels}
    return FusionRing(labels, dual, N, dims, name=f"TLJ_even(A_{n})")


def tlj_global_index(n: int) -> float:
    """Closed form (n+1) / (4 sin^2(pi/(n+1))) for the even TLJ ring."""
    return (n + 1) / (4 * math.sin(math.pi / (n + 1)) ** 2)


def chebyshev_dims(count: int):
    """Exact quantum integers [1], [2], ... as IntPoly in delta.

    d_0 = 1, d_1 = delta, d_{k+1} = delta d_k - d_{k-1}.
    """
    out = [RF_ONE, RatFunc.delta()]
    delta = RatFunc.delta()
    while len(out) < count:
        out.append(delta * out[-1] - out[-2])
    return out[:count]


def tlj_ladder(width: int, delta: float | None = None) -> FusionRing:
    """Window of the generic Temperley-Lieb ladder ring.

    All labels f_0 .. f_{width-1}, fusion N(f_i, f_j, f_k) = 1 iff
    |i-j| <= k <= i+j and k = i+j mod 2, restricted to the window.  The
    ring is marked truncated with the last two labels as frontier (both
    parities).  Exact Chebyshev dims are always stored; float dims are
    evaluated when a delta value is supplied.
    """
    if width < 1:
        raise ValueError("window width must be >= 1")
    labels = tuple(f"f{i}" for i in range(width))
    N = {}
    for i in range(width):
        for j in range(width):
            for k in range(abs(i - j), min(i + j, width - 1) + 1, 2):
                N[labels[i], labels[j], labels[k]] = 1
    dual = {lab: lab for lab in labels}
    exact = dict(zip(labels, chebyshev_dims(width)))
    dims = None
    if delta is not None:
        # Run the three-term recurrence in float: evaluating the exact
        # coefficient form cancels catastrophically past degree ~60.
        vals = [1.0, float(delta)]
        while len(vals) < width:
            vals.append(delta * vals[-1] - vals[-2])
        dims = dict(zip(labels, vals[:width]))
    frontier = set(labels[-2:]) if width > 1 else set(labels)
    return FusionRing(labels, dual, N, dims, exact,
                      truncated=True, frontier=frontier,
                      name=f"TLJ_ladder({width})")


def product(r1: FusionRing, r2: FusionRing) -> FusionRing:
    """Direct (Deligne-style) product: labels are pairs, N multiplies."""
    labels = tuple((a, b) for a in r1.labels for b in r2.labels)
    dual = {(a, b): (r1.dual[a], r2.dual[b]) for a, b in labels}
    N = {}
    for (a1, b1, c1), v1 in r1.N.items():
        for (a2, b2, c2), v2 in r2.N.items():
            N[(a1, a2), (b1, b2), (c1, c2)] = v1 * v2
    dims = None
    if r1.dims is not None and r2.dims is not None:
        dims = {(a, b): r1.dims[a] * r2.dims[b] for a, b in labels}
    dims_exact = None
    if r1.dims_exact is not None and r2.dims_exact is not None:
        dims_exact = {(a, b): r1.dims_exact[a] * r2.dims_exact[b]
                      for a, b in labels}
    frontier = {(a, b) for a, b in labels
                if a in r1.frontier or b in r2.frontier}
    return FusionRing(labels, dual, N, dims, dims_exact,
                      truncated=r1.truncated or r2.truncated,
                      frontier=frontier,
                      name=f"{r1.name} x {r2.name}")


# ---------------------------------------------------------------------------
# Perron-Frobenius dimensions and the zeroth Betti number
# ---------------------------------------------------------------------------

def perron_dims(ring: FusionRing, max_iter=200000):
    """Positive eigenvector of M = sum_alpha N(alpha, ., .), d(unit) = 1.

    Plain power iteration, run to relative sup-norm residual < 1e-12.
    Raises NotConnected when the fusion graph does not reach every label
    from the unit.
    """
    import numpy as np

    n = len(ring.labels)
    idx = ring.index
    M = np.zeros((n, n))
    for (a, b, c), v in ring.N.items():
        M[idx[b], idx[c]] += v

    # connectivity of the undirected support graph
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and (M[i, j] or M[j, i]):
                adj[i].add(j)
                adj[j].add(i)
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        raise NotConnected(f"only {len(seen)} of {n} labels reachable")

    v = np.ones(n)
    lam = 1.0
    for _ in range(max_iter):
        w = M @ v
        lam = float(w.max())
        w /= lam
        if np.max(np.abs(M @ w - lam * w)) <= 1e-12 * lam * np.max(np.abs(w)):
            v = w
            break
        v = w
    else:
        raise RuntimeError("power iteration did not converge")
    v = v / v[0]
    return {lab: float(v[idx[lab]]) for lab in ring.labels}


class BettiZeroReport:
    """Global index and its inverse, exactly when exact dims exist."""

    def __init__(self, global_index, beta0, global_index_exact=None,
                 beta0_exact=None):
        self.global_index = global_index
        self.beta0 = beta0
        self.global_index_exact = global_index_exact
        self.beta0_exact = beta0_exact

    def __repr__(self):
        return f"BettiZeroReport(index={self.global_index}, beta0={self.beta0})"


def beta0(ring: FusionRing) -> BettiZeroReport:
    """beta_0 = 1 / (sum of squared dimensions)."""
    dims = ring.dims
    if dims is None:
        dims = perron_dims(ring)
    gi = sum(dims[a] ** 2 for a in ring.labels)
    gi_exact = ring.global_index_exact()
    b_exact = None
    if gi_exact is not None and gi_exact:
        b_exact = RF_ONE / gi_exact
    return BettiZeroReport(gi, 1.0 / gi, gi_exact, b_exact)


# ---------------------------------------------------------------------------
# Hochschild contrast: the fusion algebra itself has nonzero H^1
# ---------------------------------------------------------------------------

def hochschild_h1_witness(max_degree: int):
    """Certify a nonvanishing 1-cocycle on the polynomial fusion algebra.

    The one-generator fusion algebra is modeled as R = C[t] with
    augmentation eps(p) = p(delta).  Hochschild boundaries of elementary
    2-chains are b(t^i x t^j) = eps(t^i) t^j - t^{i+j} + eps(t^j) t^i.
    The functional phi(q) = q'(delta) kills every boundary exactly (in
    Q(delta)) while phi(t) = 1, so the truncated H^1 is nonzero.

    Returns a dict with the verification outcome and the witness value.
    """
    if max_degree < 2:
        raise ValueError("need max_degree >= 2")
    delta = RatFunc.delta()

    def phi_monomial(m: int) -> RatFunc:
        # phi(t^m) = m delta^(m-1)
        if m == 0:
            return RF_ZERO
        return RatFunc.from_int(m) * RatFunc.delta_power(m - 1)

    boundaries = 0
    all_vanish = True
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            # phi(b(t^i x t^j)) with eps(t^k) = delta^k
            val = (RatFunc.delta_power(i) * phi_monomial(j)
                   - phi_monomial(i + j)
                   + RatFunc.delta_power(j) * phi_monomial(i))
            boundaries += 1
            if val:
                all_vanish = False
    return {
        "functional_vanishes_on_boundaries": all_vanish,
        "witness_cycle_value": phi_monomial(1),
        "boundaries_checked": boundaries,
        "max_degree": max_degree,
    }


# ---------------------------------------------------------------------------
# Text file format
# ---------------------------------------------------------------------------

def relabel(ring: FusionRing, mapping=None) -> FusionRing:
    """Rename labels (default x0, x1, ... in order), preserving structure.

    Needed before serializing rings whose labels are not single tokens
    (group elements are often tuples).
    """
    if mapping is None:
        mapping = {lab: f"x{i}" for i, lab in enumerate(ring.labels)}
    labels = tuple(mapping[l] for l in ring.labels)
    dual = {mapping[a]: mapping[b] for a, b in ring.dual.items()}
    N = {(mapping[a], mapping[b], mapping[c]): v
         for (a, b, c), v in ring.N.items()}
    dims = ({mapping[l]: v for l, v in ring.dims.items()}
            if ring.dims is not None else None)
    dims_exact = ({mapping[l]: v for l, v in ring.dims_exact.items()}
                  if ring.dims_exact is not None else None)
    return FusionRing(labels, dual, N, dims, dims_exact,
                      truncated=ring.truncated,
                      frontier={mapping[l] for l in ring.frontier},
                      name=ring.name)


def ring_to_text(ring: FusionRing) -> str:
    """Serialize to the human-editable ring format (sorted body lines).

    Labels must be single whitespace-free tokens; use relabel() first for
    rings whose labels are tuples.
    """
    for lab in ring.labels:
        token = str(lab)
        if not token or any(ch.isspace() for ch in token) or ";" in token or "#" in token:
            raise ValueError(f"label {lab!r} is not a single token; relabel first")
    lines = [
        "labels: " + " ".join(str(l) for l in ring.labels),
        "dual: " + " ".join(str(ring.dual[l]) for l in ring.labels),
    ]
    if ring.dims is not None:
        lines.append("dims: " + " ".join(repr(ring.dims[l]) for l in ring.labels))
    if ring.dims_exact is not None:
        lines.append("dims-exact: " + " ; ".join(
            str(ring.dims_exact[l]) for l in ring.labels))
    if ring.truncated:
        lines.append("truncated: " + " ".join(
            str(l) for l in sorted(ring.frontier, key=ring.index.get)))
    lines.append("N:")
    for (a, b, c), v in sorted(ring.N.items(), key=_key(ring)):
        lines.append(f"{a} {b} {c} {v}")
    return "\n".join(lines) + "\n"


def ring_from_text(text: str) -> FusionRing:
    """Parse the ring format; validates axioms and raises InvalidRingFile
    with the first failure."""
    labels = None
    dual_line = None
    dims_line = None
    exact_line = None
    frontier_line = None
    body = []
    in_body = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if in_body:
            body.append(line)
        elif line.startswith("labels:"):
            labels = line[len("labels:"):].split()
        elif line.startswith("dual:"):
            dual_line = line[len("dual:"):].split()
        elif line.startswith("dims-exact:"):
            exact_line = line[len("dims-exact:"):]
        elif line.startswith("dims:"):
            dims_line = line[len("dims:"):].split()
        elif line.startswith("truncated:"):
            frontier_line = line[len("truncated:"):].split()
        elif line == "N:":
            in_body = True
        else:
            raise InvalidRingFile(f"unrecognized header line: {raw!r}")
    if not labels:
        raise InvalidRingFile("missing labels: line")
    if dual_line is None or len(dual_line) != len(labels):
        raise InvalidRingFile("dual: line missing or wrong length")
    if len(set(labels)) != len(labels):
        raise InvalidRingFile("duplicate labels")
    lset = set(labels)
    dual = {}
    for lab, dl in zip(labels, dual_line):
        if dl not in lset:
            raise InvalidRingFile(f"dual of {lab} is unknown label {dl}")
        dual[lab] = dl
    dims = None
    if dims_line is not None:
        if len(dims_line) != len(labels):
            raise InvalidRingFile("dims: line wrong length")
        dims = {lab: float(x) for lab, x in zip(labels, dims_line)}
    dims_exact = None
    if exact_line is not None:
        parts = [p.strip() for p in exact_line.split(";")]
        if len(parts) != len(labels):
            raise InvalidRingFile("dims-exact: line wrong length")
        dims_exact = {lab: parse_scalar(p) for lab, p in zip(labels, parts)}
    N = {}
    for line in body:
        parts = line.split()
        if len(parts) != 4:
            raise InvalidRingFile(f"bad body line: {line!r}")
        a, b, c, v = parts
        if a not in lset or b not in lset or c not in lset:
            raise InvalidRingFile(f"unknown label in body line: {line!r}")
        try:
            mult = int(v)
        except ValueError:
            raise InvalidRingFile(f"bad multiplicity in line: {line!r}")
        if mult < 0:
            raise InvalidRingFile(f"negative multiplicity in line: {line!r}")
        if (a, b, c) in N:
            raise InvalidRingFile(f"duplicate body line for ({a},{b},{c})")
        N[a, b, c] = mult
    truncated = frontier_line is not None
    frontier = set()
    if truncated:
        for lab in frontier_line:
            if lab not in lset:
                raise InvalidRingFile(f"unknown frontier label {lab}")
            frontier.add(lab)
    ring = FusionRing(labels, dual, N, dims, dims_exact,
                      truncated=truncated, frontier=frontier)
    if ring.dims is None and not truncated:
        ring.dims = perron_dims(ring)
    failures = verify_axioms(ring)
    if failures:
        raise InvalidRingFile(failures[0])
    return ring
