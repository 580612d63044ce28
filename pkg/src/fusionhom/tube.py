"""Finite-dimensional tube *-algebras as structure-constant data.

A tube algebra here is a finite basis graded by (source, target) corner
pairs, with sparse multiplication and star tables over exact scalars, the
trace functional tau, the counit supported on the distinguished corner,
and one projection p_i per corner.  The group case (quantum double of a
finite group) is built directly; anything else arrives through the text
file format and is verified on load.

The trivial-coefficient bar homology collapses both ends of the relative
bar complex along the counit; chains are tuples of composable basis
elements starting and ending at the distinguished corner.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SizeLimit, ParseError, InvariantViolation
from .exactarith import (RatFunc, RF_ONE, RF_ZERO, SparseMat, rank,
                         kernel_basis, parse_scalar)
from .groups import Group, NotAGroup


class TubeAlgebra:
    """Structure-constant *-algebra graded over corner pairs.

    corners: tuple of corner labels, distinguished corner first.
    basis: tuple of basis element names.
    src, tgt: name -> corner.
    mult: (a, b) -> {name: RatFunc}, only nonzero products stored.
    star: name -> {name: RatFunc}.
    trace_vec, counit_vec: name -> RatFunc (zero entries omitted).
    unit_of_corner: corner -> basis name of p_i.
    """

    def __init__(self, corners, basis, src, tgt, mult, star,
                 trace_vec, counit_vec, unit_of_corner, name=""):
        self.corners = tuple(corners)
        self.basis = tuple(basis)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.mult = {k: dict(v) for k, v in mult.items() if v}
        self.star = {k: dict(v) for k, v in star.items()}
        self.trace_vec = {k: v for k, v in trace_vec.items() if v}
        self.counit_vec = {k: v for k, v in counit_vec.items() if v}
        self.unit_of_corner = dict(unit_of_corner)
        self.name = name
        self.index = {b: i for i, b in enumerate(self.basis)}

    @property
    def eps_corner(self):
        return self.corners[0]

    def dim(self) -> int:
        return len(self.basis)

    def mult_elems(self, a, b) -> dict:
        return self.mult.get((a, b), {})

    def mult_combs(self, x: dict, y: dict) -> dict:
        """Product of two linear combinations {name: RatFunc}."""
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, coeff in self.mult_elems(a, b).items():
                    val = out.get(c, RF_ZERO) + ca * cb * coeff
                    if val:
                        out[c] = val
                    elif c in out:
                        del out[c]
        return out

    def star_comb(self, x: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in self.star[a].items():
                val = out.get(b, RF_ZERO) + ca * cb
                if val:
                    out[b] = val
                elif b in out:
                    del out[b]
        return out

    def trace_comb(self, x: dict) -> RatFunc:
        total = RF_ZERO
        for a, ca in x.items():
            t = self.trace_vec.get(a)
            if t:
                total = total + ca * t
        return total

    def counit_comb(self, x: dict) -> RatFunc:
        total = RF_ZERO
        for a, ca in x.items():
            t = self.counit_vec.get(a)
            if t:
                total = total + ca * t
        return total

    def corner_basis(self, i, j):
        return [b for b in self.basis if self.src[b] == i and self.tgt[b] == j]

    def __repr__(self):
        return f"TubeAlgebra({self.name or self.dim()})"


def tube_from_group(group: Group) -> TubeAlgebra:
    """Tube algebra of the pointed category over a finite group.

    Basis (i, alpha) for all pairs; (i,alpha).(j,beta) is (i, alpha beta)
    when j = alpha^-1 i alpha and zero otherwise; star of (i,alpha) is
    (alpha^-1 i alpha, alpha^-1); p_i = (i, e); tau picks alpha = e and
    the counit picks i = e.
    """
    if not isinstance(group, Group):
        raise NotAGroup("expected a validated Group instance")
    e = group.identity
    conj = lambda i, a: group.mul[group.mul[group.inv[a], i], a]
    corners = tuple(group.elements)  # identity first
    basis = tuple((i, a) for i in group.elements for a in group.elements)
    src = {(i, a): i for (i, a) in basis}
    tgt = {(i, a): conj(i, a) for (i, a) in basis}
    mult = {}
    for (i, a) in basis:
        j = conj(i, a)
        for b in group.elements:
            mult[(i, a), (j, b)] = {(i, group.mul[a, b]): RF_ONE}
    star = {(i, a): {(conj(i, a), group.inv[a]): RF_ONE} for (i, a) in basis}
    trace_vec = {(i, a): RF_ONE for (i, a) in basis if a == e}
    counit_vec = {(i, a): RF_ONE for (i, a) in basis if i == e}
    unit_of_corner = {i: (i, e) for i in group.elements}
    return TubeAlgebra(corners, basis, src, tgt, mult, star, trace_vec,
                       counit_vec, unit_of_corner,
                       name=f"Tube(Vec({group.name}))" if group.name else "Tube")


# ---------------------------------------------------------------------------
# Identity verification
# ---------------------------------------------------------------------------

class IdentityReport:
    """Outcome of verify_identities: failures per check plus counts.

    notes records checks that were skipped (for instance PSD minors on a
    block with non-constant scalars); they do not affect all_passed.
    """

    def __init__(self):
        self.failures = {}
        self.counts = {}
        self.notes = {}

    def record(self, check, count, failures, notes=()):
        self.counts[check] = count
        self.failures[check] = failures
        if notes:
            self.notes[check] = list(notes)

    @property
    def all_passed(self) -> bool:
        return all(not f for f in self.failures.values())

    def first_failure(self):
        for check, fails in self.failures.items():
            if fails:
                return check, fails[0]
        return None

    def summary(self) -> str:
        lines = []
        for check in self.failures:
            status = "ok" if not self.failures[check] else \
                f"{len(self.failures[check])} FAILED"
            lines.append(f"{check}: {self.counts[check]} checked, {status}")
        return "\n".join(lines)


def verify_identities(A: TubeAlgebra, max_witnesses=5) -> IdentityReport:
    """Exhaustive exact verification of the tube-algebra identities.

    Covers grading, projections, associativity, star involutivity and
    anti-multiplicativity, trace symmetry, Gram positivity per corner
    block (leading principal minors), the one-term orthonormal-basis sum
    identity a . a* = p_src(a) (checked when the Gram blocks are
    identities), and counit multiplicativity on the distinguished corner.
    """
    rep = IdentityReport()
    basis = A.basis

    fails = []
    n = 0
    for (a, b), comb in A.mult.items():
        n += 1
        if A.tgt[a] != A.src[b] and comb:
            fails.append(f"nonzero product across grading: {a}*{b}")
        for c in comb:
            if A.src[c] != A.src[a] or A.tgt[c] != A.tgt[b]:
                fails.append(f"product {a}*{b} leaves its corner block at {c}")
    rep.record("grading", n, fails[:max_witnesses])

    fails = []
    n = 0
    for i in A.corners:
        p = A.unit_of_corner[i]
        n += 1
        if A.src[p] != i or A.tgt[p] != i:
            fails.append(f"p_{i} not in corner ({i},{i})")
        if A.mult_elems(p, p) != {p: RF_ONE}:
            fails.append(f"p_{i} not idempotent")
        if A.star[p] != {p: RF_ONE}:
            fails.append(f"p_{i} not self-adjoint")
    for a in basis:
        n += 1
        if A.mult_elems(A.unit_of_corner[A.src[a]], a) != {a: RF_ONE}:
            fails.append(f"left unit fails at {a}")
        if A.mult_elems(a, A.unit_of_corner[A.tgt[a]]) != {a: RF_ONE}:
            fails.append(f"right unit fails at {a}")
    rep.record("projections", n, fails[:max_witnesses])

    fails = []
    n = 0
    for a in basis:
        for b in basis:
            if A.tgt[a] != A.src[b]:
                continue
            ab = A.mult_elems(a, b)
            for c in basis:
                if A.tgt[b] != A.src[c]:
                    continue
                n += 1
                left = A.mult_combs(ab, {c: RF_ONE})
                right = A.mult_combs({a: RF_ONE}, A.mult_elems(b, c))
                if left != right:
                    fails.append(f"associativity fails at ({a},{b},{c})")
                    if len(fails) >= max_witnesses:
                        break
            else:
                continue
            break
        else:
            continue
        break
    rep.record("associativity", n, fails)

    fails = []
    n = 0
    for a in basis:
        n += 1
        if A.star_comb(A.star[a]) != {a: RF_ONE}:
            fails.append(f"star not involutive at {a}")
    for a in basis:
        for b in basis:
            n += 1
            lhs = A.star_comb(A.mult_elems(a, b))
            rhs = A.mult_combs(A.star[b], A.star[a])
            if lhs != rhs:
                fails.append(f"star anti-multiplicativity fails at ({a},{b})")
                if len(fails) >= max_witnesses:
                    break
        if len(fails) >= max_witnesses:
            break
    rep.record("star", n, fails)

    fails = []
    n = 0
    for a in basis:
        for b in basis:
            n += 1
            if A.trace_comb(A.mult_elems(a, b)) != A.trace_comb(A.mult_elems(b, a)):
                fails.append(f"trace symmetry fails at ({a},{b})")
                if len(fails) >= max_witnesses:
                    break
        if len(fails) >= max_witnesses:
            break
    rep.record("trace-symmetry", n, fails)

    fails = []
    notes = []
    n = 0
    gram_all_identity = True
    for i in A.corners:
        for j in A.corners:
            block = A.corner_basis(i, j)
            if not block:
                continue
            gram = [[A.trace_comb(A.mult_combs(A.star[a], {b: RF_ONE}))
                     for b in block] for a in block]
            for a_idx in range(len(block)):
                for b_idx in range(len(block)):
                    if gram[a_idx][b_idx] != gram[b_idx][a_idx]:
                        fails.append(f"Gram not symmetric on corner ({i},{j})")
            if any(not v.is_constant() for row in gram for v in row):
                # minors need numbers; generic scalars are accepted as-is
                gram_all_identity = False
                notes.append(
                    f"minors skipped on corner ({i},{j}): non-constant entries")
                continue
            frac = [[v.as_fraction() for v in row] for row in gram]
            for a_idx, row in enumerate(frac):
                for b_idx, v in enumerate(row):
                    if v != (1 if a_idx == b_idx else 0):
                        gram_all_identity = False
            for k in range(1, len(block) + 1):
                n += 1
                minor = _det_fraction([row[:k] for row in frac[:k]])
                if minor < 0:
                    fails.append(
                        f"Gram leading minor {k} negative on corner ({i},{j})")
    rep.record("gram-psd", n, fails[:max_witnesses], notes)

    fails = []
    n = 0
    if gram_all_identity:
        # basis is orthonormal, so the onb sum identity has one term per
        # element and reads a . a* = p_src(a)
        for a in basis:
            n += 1
            prod = A.mult_combs({a: RF_ONE}, A.star[a])
            if prod != {A.unit_of_corner[A.src[a]]: RF_ONE}:
                fails.append(f"onb sum identity fails at {a}")
                if len(fails) >= max_witnesses:
                    break
    rep.record("onb-sum", n, fails)

    fails = []
    n = 0
    eps = A.eps_corner
    for a, v in A.counit_vec.items():
        n += 1
        if A.src[a] != eps or A.tgt[a] != eps:
            fails.append(f"counit supported outside distinguished corner at {a}")
    p_eps = A.unit_of_corner[eps]
    n += 1
    if A.counit_vec.get(p_eps, RF_ZERO) != RF_ONE:
        fails.append("counit(p_eps) != 1")
    corner = A.corner_basis(eps, eps)
    for a in corner:
        for b in corner:
            n += 1
            lhs = A.counit_comb(A.mult_elems(a, b))
            rhs = (A.counit_vec.get(a, RF_ZERO)
                   * A.counit_vec.get(b, RF_ZERO))
            if lhs != rhs:
                fails.append(f"counit not multiplicative at ({a},{b})")
                if len(fails) >= max_witnesses:
                    break
        if len(fails) >= max_witnesses:
            break
    rep.record("counit", n, fails)

    return rep


def _det_fraction(rows) -> Fraction:
    """Exact determinant of a small matrix of Fractions."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


# ---------------------------------------------------------------------------
# Distinguished corner as a fusion ring
# ---------------------------------------------------------------------------

def fusion_corner(A: TubeAlgebra, ring, bijection=None) -> dict:
    """Match p_eps . A . p_eps against a declared fusion ring.

    bijection maps corner basis names to ring labels; when omitted and the
    basis names are (i, alpha) pairs, the natural map (eps, alpha) ->
    alpha is used.  Returns a report dict with the matched bijection or
    the first mismatch.
    """
    eps = A.eps_corner
    corner = A.corner_basis(eps, eps)
    if bijection is None:
        try:
            bijection = {a: a[1] for a in corner}
        except (TypeError, IndexError):
            raise ValueError("no natural bijection; pass one explicitly")
    if sorted(map(str, bijection.values())) != sorted(map(str, ring.labels)):
        return {"isomorphic": False, "corner_dim": len(corner),
                "mismatch": "bijection is not onto the ring labels",
                "bijection": bijection}
    inverse = {v: k for k, v in bijection.items()}
    for a in corner:
        for b in corner:
            prod = A.mult_elems(a, b)
            for gamma in ring.labels:
                want = RatFunc.from_int(ring.mult(bijection[a], bijection[b], gamma))
                got = prod.get(inverse[gamma], RF_ZERO)
                if want != got:
                    return {
                        "isomorphic": False,
                        "corner_dim": len(corner),
                        "mismatch": (bijection[a], bijection[b], gamma,
                                     str(want), str(got)),
                        "bijection": bijection,
                    }
    return {"isomorphic": True, "corner_dim": len(corner),
            "mismatch": None, "bijection": bijection}


# ---------------------------------------------------------------------------
# Center and bar homology
# ---------------------------------------------------------------------------

def center_dim(A: TubeAlgebra) -> int:
    """Dimension of {z : za = az for all a}, by exact kernel computation."""
    n = A.dim()
    idx = A.index
    rows = {}

    def add(r, c, v):
        key = (r, c)
        cur = rows.get(key, RF_ZERO) + v
        if cur:
            rows[key] = cur
        elif key in rows:
            del rows[key]

    # rows indexed by (test element a, output component y); cols by z-component x
    row_of = {}
    for ai, a in enumerate(A.basis):
        for x in A.basis:
            for y, coeff in A.mult_elems(x, a).items():
                add(_row(row_of, (ai, y)), idx[x], coeff)
            for y, coeff in A.mult_elems(a, x).items():
                add(_row(row_of, (ai, y)), idx[x], -coeff)
    m = SparseMat(len(row_of), n, rows)
    return n - rank(m)


def _row(table, key):
    if key not in table:
        table[key] = len(table)
    return table[key]


class HomologyReport:
    """Exact homology dimensions of the collapsed bar complex."""

    def __init__(self, degrees_computed, dims, chain_dims):
        self.degrees_computed = degrees_computed
        self.dims = tuple(dims)
        self.chain_dims = tuple(chain_dims)
        if any(d < 0 for d in self.dims):
            raise ValueError(f"negative homology dimension: {self.dims}")

    def __repr__(self):
        return f"HomologyReport(dims={self.dims}, chains={self.chain_dims})"


def bar_chain_basis(A: TubeAlgebra, n: int):
    """Tuples (b_1..b_n) composable left to right, both ends at eps."""
    eps = A.eps_corner
    if n == 0:
        return [()]
    chains = [[b] for b in A.basis if A.src[b] == eps]
    for _ in range(n - 1):
        chains = [ch + [b] for ch in chains for b in A.basis
                  if A.tgt[ch[-1]] == A.src[b]]
    return [tuple(ch) for ch in chains if A.tgt[ch[-1]] == eps]


def bar_boundary_matrix(A: TubeAlgebra, n: int, basis_n=None, basis_prev=None):
    """Matrix of the degree-n boundary D_n -> D_{n-1}.

    The alternating sum applies the counit to the first factor, multiplies
    each adjacent pair, and applies the counit to the last factor.
    """
    if n < 1:
        raise ValueError("boundary defined for n >= 1")
    if basis_n is None:
        basis_n = bar_chain_basis(A, n)
    if basis_prev is None:
        basis_prev = bar_chain_basis(A, n - 1)
    prev_index = {t: i for i, t in enumerate(basis_prev)}
    m = SparseMat(len(basis_prev), len(basis_n))

    def add(r, c, v):
        cur = m[r, c] + v
        m[r, c] = cur

    for col, chain in enumerate(basis_n):
        eps_first = A.counit_vec.get(chain[0], RF_ZERO)
        if eps_first:
            add(prev_index[chain[1:]], col, eps_first)
        for k in range(1, n):
            sign = -1 if k % 2 else 1
            for prod, coeff in A.mult_elems(chain[k - 1], chain[k]).items():
                target = chain[:k - 1] + (prod,) + chain[k + 1:]
                val = coeff if sign > 0 else -coeff
                add(prev_index[target], col, val)
        eps_last = A.counit_vec.get(chain[-1], RF_ZERO)
        if eps_last:
            val = eps_last if n % 2 == 0 else -eps_last
            add(prev_index[chain[:-1]], col, val)
    return m


def trivial_homology(A: TubeAlgebra, n_max: int, chain_cap=50000) -> HomologyReport:
    """Homology of the counit-collapsed bar complex up to degree n_max.

    Raises SizeLimit when any needed chain space (including degree
    n_max + 1 for the incoming boundary) exceeds chain_cap.
    """
    if n_max < 0 or n_max > 3:
        raise ValueError("n_max must be between 0 and 3")
    bases = []
    for n in range(n_max + 2):
        basis_n = bar_chain_basis(A, n)
        if len(basis_n) > chain_cap:
            raise SizeLimit(
                f"chain dimension {len(basis_n)} at degree {n} exceeds cap {chain_cap}")
        bases.append(basis_n)
    ranks = [0]  # rank of boundary_0 is 0
    for n in range(1, n_max + 2):
        ranks.append(rank(bar_boundary_matrix(A, n, bases[n], bases[n - 1])))
    dims = []
    for n in range(n_max + 1):
        dims.append(len(bases[n]) - ranks[n] - ranks[n + 1])
    return HomologyReport(n_max, dims, [len(b) for b in bases[:n_max + 1]])


# ---------------------------------------------------------------------------
# Text file format
# ---------------------------------------------------------------------------

def tube_to_text(A: TubeAlgebra) -> str:
    """Canonical serialization: corners c0.., basis a0.., sorted lines."""
    corner_name = {c: f"c{i}" for i, c in enumerate(A.corners)}
    basis_name = {b: f"a{i}" for i, b in enumerate(A.basis)}
    lines = ["tube-algebra",
             "corners: " + " ".join(corner_name[c] for c in A.corners)]
    lines.append("basis:")
    for b in A.basis:
        lines.append(f"{basis_name[b]} {corner_name[A.src[b]]} {corner_name[A.tgt[b]]}")
    lines.append("units:")
    for c in A.corners:
        lines.append(f"{corner_name[c]} {basis_name[A.unit_of_corner[c]]}")
    lines.append("mult:")
    for a in A.basis:
        for b in A.basis:
            comb = A.mult_elems(a, b)
            for c in sorted(comb, key=A.index.get):
                lines.append(f"{basis_name[a]} {basis_name[b]} "
                             f"{basis_name[c]} {comb[c]}")
    lines.append("star:")
    for a in A.basis:
        for b in sorted(A.star[a], key=A.index.get):
            lines.append(f"{basis_name[a]} {basis_name[b]} {A.star[a][b]}")
    lines.append("trace:")
    for a in A.basis:
        v = A.trace_vec.get(a)
        if v:
            lines.append(f"{basis_name[a]} {v}")
    lines.append("counit:")
    for a in A.basis:
        v = A.counit_vec.get(a)
        if v:
            lines.append(f"{basis_name[a]} {v}")
    return "\n".join(lines) + "\n"


def tube_from_text(text: str, verify=True) -> TubeAlgebra:
    """Parse the tube format; verify identities and raise the first
    violation as InvariantViolation."""
    section = None
    corners = None
    basis = []
    src = {}
    tgt = {}
    mult = {}
    star = {}
    trace_vec = {}
    counit_vec = {}
    unit_of_corner = {}
    saw_header = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not saw_header:
            if line != "tube-algebra":
                raise ParseError("missing tube-algebra header")
            saw_header = True
            continue
        if line.startswith("corners:"):
            corners = tuple(line[len("corners:"):].split())
            continue
        if line in ("basis:", "units:", "mult:", "star:", "trace:", "counit:"):
            section = line[:-1]
            continue
        parts = line.split()
        if section == "basis":
            if len(parts) != 3:
                raise ParseError(f"bad basis line: {raw!r}")
            name, s, t = parts
            if corners is None or s not in corners or t not in corners:
                raise ParseError(f"unknown corner in basis line: {raw!r}")
            if name in src:
                raise ParseError(f"duplicate basis element {name}")
            basis.append(name)
            src[name] = s
            tgt[name] = t
        elif section == "units":
            if len(parts) != 2:
                raise ParseError(f"bad units line: {raw!r}")
            c, name = parts
            unit_of_corner[c] = name
        elif section == "mult":
            if len(parts) < 4:
                raise ParseError(f"bad mult line: {raw!r}")
            a, b, c = parts[0], parts[1], parts[2]
            coeff = parse_scalar(" ".join(parts[3:]))
            _check_names(raw, src, a, b, c)
            entry = mult.setdefault((a, b), {})
            if c in entry:
                raise ParseError(f"duplicate mult line: {raw!r}")
            if coeff:
                entry[c] = coeff
        elif section == "star":
            if len(parts) < 3:
                raise ParseError(f"bad star line: {raw!r}")
            a, b = parts[0], parts[1]
            coeff = parse_scalar(" ".join(parts[2:]))
            _check_names(raw, src, a, b)
            entry = star.setdefault(a, {})
            if b in entry:
                raise ParseError(f"duplicate star line: {raw!r}")
            if coeff:
                entry[b] = coeff
        elif section in ("trace", "counit"):
            if len(parts) < 2:
                raise ParseError(f"bad {section} line: {raw!r}")
            a = parts[0]
            coeff = parse_scalar(" ".join(parts[1:]))
            _check_names(raw, src, a)
            target = trace_vec if section == "trace" else counit_vec
            if a in target:
                raise ParseError(f"duplicate {section} line: {raw!r}")
            if coeff:
                target[a] = coeff
        else:
            raise ParseError(f"line outside any section: {raw!r}")
    if corners is None:
        raise ParseError("missing corners line")
    for c in corners:
        if c not in unit_of_corner:
            raise ParseError(f"no unit declared for corner {c}")
        if unit_of_corner[c] not in src:
            raise ParseError(f"unknown unit element for corner {c}")
    for a in basis:
        if a not in star:
            raise ParseError(f"no star image declared for {a}")
    A = TubeAlgebra(corners, basis, src, tgt, mult, star, trace_vec,
                    counit_vec, unit_of_corner, name="from-file")
    if verify:
        report = verify_identities(A)
        if not report.all_passed:
            which, witness = report.first_failure()
            raise InvariantViolation(which, witness)
    return A


def _check_names(raw, src, *names):
    for n in names:
        if n not in src:
            raise ParseError(f"unknown basis element {n} in line: {raw!r}")
