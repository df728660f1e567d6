"""Hamilton-cycle stitching constructions for bicirculants.

Every construction collects path segments inside shifted copies of a component
cycle plus the rim edges joining them, assembles the result with
:func:`assemble` and verifies it before returning.  All constructions work on
the component containing ``u_0``; for connected parameters that is the whole
graph.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .core import (
    BicirculantError,
    BicirculantParams,
    U,
    V,
    Vertex,
    classify_edge,
    make_params,
    render_params,
    swap_sides,
    swap_vertex,
    verify_component_cycle,
)
from .oracle import Constraints, find_component_cycle, find_cycle_exact, find_path_between
from .structure import (
    decompose,
    delta,
    gcd_all,
    grid_shape,
    grid_shape_general,
    lift_from_quotient,
    remove_types,
    shift_seq,
)


_TAG = re.compile(r"\b(?:L2|L3|T1|P4)\.\d[\w-]*")


class ConstructionError(BicirculantError):
    pass


class PreconditionViolated(ConstructionError):
    pass


class HypothesisUnmet(ConstructionError):
    pass


class BaseCycleInvalid(ConstructionError):
    pass


class TooFewOuterEdges(ConstructionError):
    pass


class WrongShape(ConstructionError):
    pass


class PathInvalid(ConstructionError):
    pass


class OracleFailed(ConstructionError):
    pass


class InternalStitchFailure(AssertionError):
    """Assembled segments do not form a hamilton cycle: a bug, never expected."""


@dataclass
class ConstructionTrace:
    lemma: str
    chosen_types: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def note(self, msg):
        self.log.append(msg)

    def absorb(self, other: "ConstructionTrace", prefix=""):
        self.chosen_types.extend(other.chosen_types)
        self.log.append(f"{prefix}{other.lemma}")
        self.log.extend("  " + line for line in other.log)

    def tags(self):
        """Every lemma tag mentioned in this trace, including nested ones."""
        out = {self.lemma}
        for line in self.log:
            out.update(_TAG.findall(line))
        return out


@dataclass(frozen=True)
class StitchPlan:
    """Anchors chosen on the base path P (from v_s to u_0) for the Haar-grid stitch."""

    lam: int
    mu: int
    a: int
    b: int
    path: tuple
    anchors: dict


# ---------------------------------------------------------------- assembly


def assemble(segments, joins):
    """Join vertex-disjoint paths with extra edges into a single cycle.

    ``segments`` are vertex lists (a single vertex is allowed); ``joins`` are
    vertex pairs.  Raises InternalStitchFailure unless the union is one cycle
    through every listed vertex.
    """
    adj = {}
    for seg in segments:
        for v in seg:
            if v in adj:
                raise InternalStitchFailure(f"vertex {v} appears in two segments")
            adj[v] = []
        for x, y in zip(seg, seg[1:]):
            adj[x].append(y)
            adj[y].append(x)
    for x, y in joins:
        if x not in adj or y not in adj:
            raise InternalStitchFailure(f"join {x}-{y} touches an uncovered vertex")
        if y in adj[x]:
            raise InternalStitchFailure(f"join {x}-{y} duplicates an edge")
        adj[x].append(y)
        adj[y].append(x)
    bad = [v for v, ns in adj.items() if len(ns) != 2]
    if bad:
        raise InternalStitchFailure(f"vertices without degree 2: {bad[:6]}")
    start = next(iter(adj))
    cycle = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = a if a != prev else b
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    if len(cycle) != len(adj):
        raise InternalStitchFailure(f"assembled {len(cycle)} of {len(adj)} vertices into one cycle")
    return cycle


def _check(p, seq, what):
    try:
        verify_component_cycle(p, seq, balanced=p.r == len(p.T))
    except BicirculantError as e:
        raise InternalStitchFailure(f"{what} produced an invalid cycle of {render_params(p)}: {e}") from e
    return seq


def subgraph(m, R, S, T) -> BicirculantParams:
    """Parameters of a possibly irregular (|R| != |T|) spanning subgraph; no validation."""
    return BicirculantParams(m, tuple(sorted({x % m for x in R})), tuple(sorted({x % m for x in S})),
                             tuple(sorted({x % m for x in T})))


def on_u0_component(p: BicirculantParams, fn):
    """Run ``fn`` on the connected quotient of ``p`` and map the result to the u_0 component."""
    k = delta(p)
    if k == 1:
        return fn(p)
    q = decompose(p).quotient
    out = fn(q)
    seq, trace = out if isinstance(out, tuple) else (out, None)
    seq = lift_from_quotient(seq, k)
    return (seq, trace) if isinstance(out, tuple) else seq


def outer_edge_count(seq):
    n = len(seq)
    return sum(1 for i in range(n) if seq[i].side == "u" and seq[(i + 1) % n].side == "u")


def inner_edge_count(seq):
    n = len(seq)
    return sum(1 for i in range(n) if seq[i].side == "v" and seq[(i + 1) % n].side == "v")


# ---------------------------------------------------------- cycle providers


@lru_cache(maxsize=4096)
def _haar_quotient_cycle(m, S):
    q = make_params(m, (), S, ())
    c = find_cycle_exact(q)
    return None if c is None else tuple(c)


def haar_component_cycle(p: BicirculantParams):
    """A hamilton cycle of the component of H(m;S) containing u_0 (exact oracle on the quotient)."""
    g = gcd_all(p.m, p.S)
    c = _haar_quotient_cycle(p.m // g, tuple(sorted({x // g for x in p.S})))
    if c is None:
        raise OracleFailed(f"component of H({p.m}; {p.S}) has no hamilton cycle")
    return lift_from_quotient(c, g)


@lru_cache(maxsize=4096)
def _cached_path(p, x, y):
    res = find_path_between(p, x, y)
    return None if res is None else tuple(res)


def oracle_path(p, x, y):
    res = _cached_path(p, Vertex(*x), Vertex(*y))
    return None if res is None else list(res)


# ------------------------------------------------------------- Haar stitch


def _orient_at_u0(cycle):
    """Path P of the cycle starting at a neighbour v_s of u_0 and ending at u_0."""
    i = cycle.index(U(0))
    return cycle[i + 1:] + cycle[: i + 1]


def _haar_preconditions(p):
    if p.r != 2 or len(p.T) != 2:
        raise PreconditionViolated("stitch_haar needs |R| = |T| = 2 (one outer and one inner type)")
    if p.s < 2:
        raise PreconditionViolated("|S| >= 2 required")
    if delta(p) != 1:
        raise PreconditionViolated("graph must be connected")
    g = gcd_all(p.m, p.S)
    if g == 1:
        raise PreconditionViolated("gcd(m,S) > 1 required")
    a, b = min(p.R), min(p.T)
    if p.half in (a, b):
        raise PreconditionViolated("a, b must differ from m/2")
    shape = grid_shape(p, a, b)
    if shape.lam == 0:
        raise PreconditionViolated("lambda = gcd(m,S,b) - 1 must be positive")
    return shape


def stitch_haar(p: BicirculantParams, base=None, z_index=None):
    """Hamilton cycle of B(m; a, S, b) joined from Haar-component cycles along types a and b.

    ``base`` is a hamilton cycle of the spoke-subgraph component containing u_0
    (oracle-supplied when omitted).  ``z_index`` picks the anchor u_z as the
    vertex at that (odd) position of the base path; default is the first outer
    vertex after v_s.
    """
    shape = _haar_preconditions(p)
    m, a, b, lam, mu = p.m, shape.a, shape.b, shape.lam, shape.mu
    hp = make_params(m, (), p.S, ())
    if base is None:
        base = haar_component_cycle(p)
    base = [Vertex(*v) for v in base]
    try:
        verify_component_cycle(hp, base)
    except BicirculantError as e:
        raise BaseCycleInvalid(str(e)) from e
    if U(0) not in base:
        raise BaseCycleInvalid("base cycle must pass through u_0")
    P = _orient_at_u0(base)

    def sh(seq, i, j):
        return shift_seq(seq, i * b + j * a, m)

    def lab(x, i, j):
        return Vertex(x.side, (x.index + i * b + j * a) % m)

    segs, joins = [], []
    if mu == 0:
        tag = "L3.2-case1"
        s = P[0].index
        pos = {v: k for k, v in enumerate(P)}
        iA, iB = pos[V((s - b) % m)], pos[V((s + b) % m)]
        if iA > iB:  # swap the roles of b and -b
            iA, iB = iB, iA
        u0, up, ut, ul = P[-1], P[iB - 1], P[1], P[iA + 1]
        p_main = P[iB:][::-1] + P[:iB]  # u_0 .. u_p
        p_tail = P[1:iA + 1] + [P[0]] + P[iA + 1:][::-1]  # u_t .. u_l
        p_dbl = P[iB:][::-1] + [P[0]] + P[1:iA + 1][::-1]  # u_0 .. u_t
        p_mid = P[iA + 1:iB]  # u_l .. u_p
        segs.append(sh(p_main, 0, 0))
        for j in range(1, lam):
            segs.append(sh(p_mid, 0, j))
            segs.append(sh(p_dbl, 0, j))
        segs.append(sh(p_tail if lam % 2 == 0 else p_main, 0, lam))
        for j in range(lam):
            pair = (u0, up) if j % 2 == 0 else (ut, ul)
            joins += [(lab(x, 0, j), lab(x, 0, j + 1)) for x in pair]
        anchors = {"v_s": P[0], "u_t": ut, "u_0": u0, "u_p": up, "u_l": ul,
                   "u_r": P[iA - 1], "u_q": P[iB + 1], "v_s-b": P[iA], "v_s+b": P[iB]}
    else:
        tag = "L3.2-case2"
        n = len(P)
        iz = 1 if z_index is None else z_index
        if iz % 2 == 0 or not 1 <= iz <= n - 3:
            raise PreconditionViolated(f"z_index {iz} is not an outer vertex of P other than u_0")
        vs, u0, v0, u1 = P[0], P[-1], P[-2], P[-3]
        uz, vh, vk = P[iz], P[iz - 1], P[iz + 1]
        full = list(P)
        to_u1 = P[:-2]  # v_s .. u_1
        s_to_h = P[:iz]  # v_s .. v_h
        k_to_0 = P[iz + 1:-1]  # v_k .. v_0
        z_to_0 = P[iz:]  # u_z .. u_0
        c_minus_z = P[:iz][::-1] + [u0] + P[iz + 1:-1][::-1]  # v_h .. v_k avoiding u_z
        c_minus_zh = P[:iz][::-1] + [u0] + P[iz:-1][::-1]  # v_h .. u_z
        c_minus_00 = [u0] + P[:-1]  # u_0 .. v_0
        c_minus_10 = P[:-2][::-1] + [u0, v0]  # u_1 .. v_0
        z_to_v0 = P[iz:-1]  # u_z .. v_0
        u0_to_h = [u0] + P[:iz]  # u_0, v_s .. v_h
        for j in range(1, lam):
            segs += [sh(to_u1, 0, j), sh([u0, v0], 0, j)]
            for i in range(1, mu):
                segs += [sh(s_to_h, i, j), sh(k_to_0, i, j), sh([u0], i, j), sh([uz], i, j)]
            if mu % 2 == 0:
                segs += [sh([uz], mu, j), sh(c_minus_z, mu, j)]
            else:
                segs += [sh([u0], mu, j), sh(full[:-1], mu, j)]
            for i in range(mu):
                pair = (vs, v0) if i % 2 == 0 else (vh, vk)
                joins += [(lab(x, i, j), lab(x, i + 1, j)) for x in pair]
        segs.append(sh(full, 0, 0))
        for i in range(1, mu):
            segs += [sh(s_to_h, i, 0), sh(z_to_0, i, 0)]
        segs.append(sh(c_minus_zh if mu % 2 == 0 else full, mu, 0))
        for i in range(1, mu):
            segs += [sh(u0_to_h, i, lam), sh(z_to_v0, i, lam)]
        segs.append(sh(c_minus_00 if lam % 2 == 1 else c_minus_10, 0, lam))
        segs.append(sh(c_minus_zh if mu % 2 == 0 else c_minus_00, mu, lam))
        for i in range(mu):
            x0 = vs if i % 2 == 0 else vh
            xl = v0 if i % 2 == 0 else vh
            joins.append((lab(x0, i, 0), lab(x0, i + 1, 0)))
            joins.append((lab(xl, i, lam), lab(xl, i + 1, lam)))
        for i in range(1, mu):
            for j in range(lam):
                joins += [(lab(x, i, j), lab(x, i, j + 1)) for x in (u0, uz)]
        last = u0 if mu % 2 == 1 else uz
        joins += [(lab(last, mu, j), lab(last, mu, j + 1)) for j in range(lam)]
        for j in range(1, lam - 1):
            x = u0 if j % 2 == 0 else u1
            joins.append((lab(x, 0, j), lab(x, 0, j + 1)))
        alpha = u0 if lam % 2 == 1 else u1
        joins.append((lab(u0, 0, 0), lab(u0, 0, 1)))
        if lam > 1:
            joins.append((lab(alpha, 0, lam - 1), lab(alpha, 0, lam)))
        anchors = {"v_s": vs, "u_0": u0, "v_0": v0, "u_1": u1, "u_z": uz, "v_h": vh, "v_k": vk,
                   "u_t": P[1]}
    seq = assemble(segs, joins)
    seq = _rotate_to_u0(seq)
    _check(p, seq, tag)
    trace = ConstructionTrace(tag, [(a, b)])
    trace.note(f"lambda={lam} mu={mu} a={a} b={b}")
    trace.plan = StitchPlan(lam, mu, a, b, tuple(P), anchors)
    return seq, trace


def _rotate_to_u0(seq):
    if U(0) in seq:
        i = seq.index(U(0))
        return seq[i:] + seq[:i]
    return seq


def haar_stitch_any(p: BicirculantParams, base=None, z_index=None):
    """stitch_haar, mirroring outer/inner when only the outer type shares a factor with gcd(m,S)."""
    try:
        return stitch_haar(p, base, z_index)
    except PreconditionViolated as first:
        sp = swap_sides(p)
        try:
            _haar_preconditions(sp)
        except PreconditionViolated:
            raise first
        seq, trace = stitch_haar(sp, None, z_index)
        seq = _rotate_to_u0([swap_vertex(v) for v in seq])
        _check(p, seq, "mirrored L3.2")
        trace.note("outer/inner mirrored")
        return seq, trace


def haar_applicable(p: BicirculantParams) -> bool:
    for q in (p, swap_sides(p)):
        try:
            _haar_preconditions(q)
            return True
        except PreconditionViolated:
            pass
    return False


# ---------------------------------------------------------------- zig-zag


def zigzag(p: BicirculantParams, side: str, t: int, cycle, e1=None, e2=None):
    """Join shifted copies of a component cycle along rim edges of type ``t``.

    ``cycle`` is a hamilton cycle of one component X of ``p`` with the type-``t``
    edges on ``side`` removed; X, X+t, X+2t, ... are the components making up the
    component of ``p`` containing X.  Two distinct ``side``-edges of the cycle are
    cut: ``e1`` (default: the first one; it may be the virtual closing edge of a
    path) and ``e2`` (default: the next one).  Returns a hamilton cycle of that
    component of ``p``.
    """
    m = p.m
    t %= m
    drop = {t, (-t) % m}
    K = remove_types(p, drop, ()) if side == "u" else remove_types(p, (), drop)
    n = delta(K) // delta(p)
    c = [Vertex(*v) for v in cycle]
    L = len(c)
    if n == 1:
        return c
    side_edges = [(c[i], c[(i + 1) % L]) for i in range(L)
                  if c[i].side == side and c[(i + 1) % L].side == side]
    if e1 is None:
        if not side_edges:
            raise TooFewOuterEdges(f"cycle has no {side}-rim edge to cut")
        e1 = side_edges[0]
    x0, xs = e1
    i0 = c.index(x0)
    # orient so the cycle reads x0 ... xs (closing edge xs-x0 is e1)
    if c[(i0 - 1) % L] == xs:
        c = c[i0:] + c[:i0]
    elif c[(i0 + 1) % L] == xs:
        c = (c[i0:] + c[:i0])
        c = [c[0]] + c[1:][::-1]
    else:
        raise PathInvalid(f"{x0}{xs} is not an edge of the cycle")
    if e2 is None:
        for i in range(L - 1):
            if c[i].side == side and c[i + 1].side == side:
                e2 = (c[i], c[i + 1])
                break
        else:
            raise TooFewOuterEdges(f"need two distinct {side}-rim edges")
    ih = c.index(e2[0])
    if ih + 1 >= L or c[ih + 1] != e2[1]:
        ih = c.index(e2[1])
        if ih + 1 >= L or c[ih + 1] != e2[0]:
            raise PathInvalid(f"{e2} is not an edge of the cycle distinct from e1")
    xh, xk = c[ih], c[ih + 1]
    piece_a, piece_b = c[: ih + 1], c[ih + 1:]
    minus_e2 = c[: ih + 1][::-1] + c[ih + 1:][::-1]
    lam = n - 1
    segs = [c]
    for j in range(1, lam):
        segs += [shift_seq(piece_a, j * t, m), shift_seq(piece_b, j * t, m)]
    segs.append(shift_seq(c if lam % 2 == 1 else minus_e2, lam * t, m))
    joins = []
    for j in range(lam):
        pair = (x0, xs) if j % 2 == 0 else (xh, xk)
        for x in pair:
            joins.append((Vertex(x.side, (x.index + j * t) % m), Vertex(x.side, (x.index + (j + 1) * t) % m)))
    return assemble(segs, joins)


# --------------------------------------------------------- removal stitch


def stitch_removal(p: BicirculantParams, a: int, b: int, component_cycle):
    """Hamilton cycle of the u_0 component of ``p`` from a cycle of the u_0 component of
    ``p`` minus the outer type ``a`` and inner type ``b``."""
    m = p.m
    a %= m
    b %= m
    if p.half in (a, b):
        raise PreconditionViolated("a, b must differ from m/2")
    if a not in p.R or b not in p.T:
        raise PreconditionViolated(f"types {a}, {b} not present")
    H = remove_types(p, {a, (-a) % m}, {b, (-b) % m})
    C = [Vertex(*v) for v in component_cycle]
    try:
        verify_component_cycle(H, C)
    except BicirculantError as e:
        raise BaseCycleInvalid(f"supplied cycle is not a hamilton cycle of H's component: {e}") from e
    if U(0) not in C:
        raise BaseCycleInvalid("supplied cycle must lie in the component of u_0")
    if delta(H) == delta(p):
        trace = ConstructionTrace("L3.4-trivial", [(a, b)])
        trace.note("H component spans; supplied cycle returned")
        return C, trace
    if outer_edge_count(C) < 2:
        raise TooFewOuterEdges("component cycle has fewer than two outer edges")
    shape = grid_shape_general(p, a, b) if delta(p) == 1 else None
    K = remove_types(p, {a, (-a) % m}, ())
    mu = delta(H) // delta(K) - 1
    lam = delta(K) // delta(p) - 1
    if mu == 0:
        seq = zigzag(p, "u", a, C)
        tag = "L3.4-case1"
    else:
        c1 = zigzag(K, "v", b, C)
        _check(K, c1, "L3.4-case2 inner stage")
        seq = zigzag(p, "u", a, c1)
        tag = "L3.4-case2"
    seq = _rotate_to_u0(seq)
    _check(p, seq, tag)
    if shape is not None:
        assert (shape.lam, shape.mu) == (lam, mu)
    trace = ConstructionTrace(tag, [(a, b)])
    trace.note(f"lambda={lam} mu={mu} a={a} b={b}")
    return seq, trace


# ------------------------------------------------------------------ K2 lift


def k2_lift(h0_seq, p: BicirculantParams, is_cycle=False):
    """Prism traversal: walk a hamilton path of H_0, cross an m/2 edge, walk back in the copy.

    H is ``p`` without the m/2 types; it must have exactly twice as many
    components as ``p``.  A cycle input is cut at its closing edge.
    """
    h = p.half
    if h is None or h not in p.R or h not in p.T:
        raise WrongShape("m must be even with m/2 in R and T")
    H = remove_types(p, {h}, {h})
    if delta(H) != 2 * delta(p):
        raise WrongShape(f"H has {delta(H)} components, expected {2 * delta(p)}")
    P = [Vertex(*v) for v in h0_seq]
    comp = {v for v in P}
    if len(comp) != len(P) or len(P) != 2 * H.m // delta(H):
        raise PathInvalid("input does not cover H_0 exactly once")
    for k, (x, y) in enumerate(zip(P, P[1:])):
        try:
            classify_edge(H, x, y)
        except BicirculantError as e:
            raise PathInvalid(f"step {k}: {e}") from e
    if is_cycle:
        try:
            classify_edge(H, P[-1], P[0])
        except BicirculantError as e:
            raise PathInvalid(f"closing step: {e}") from e
    other = shift_seq(P, h, p.m)
    seq = P + other[::-1]
    seq = _rotate_to_u0(seq)
    _check(p, seq, "L2.8-lift")
    return seq


# ------------------------------------------------------ combination pipeline


def _pairs(m, X):
    return sorted({min(x, m - x) for x in X if 2 * x != m})


def _coprime_to(x, g):
    return gcd(x, g) == 1


def _greedy_L(p: BicirculantParams):
    """Remove rim type pairs while connectivity survives, coprime-to-gcd(m,S) types first."""
    m, g, h = p.m, gcd_all(p.m, p.S), p.half
    R, T = set(p.R), set(p.T)
    removed = []

    def keeps_witness(R_, T_):
        return any(x != h and not _coprime_to(x, g) for x in R_ | T_)

    while True:
        cands = []
        for a in _pairs(m, R):
            for b in _pairs(m, T):
                cands.append((a, b))
        if h is not None and h in R and h in T:
            cands.append((h, h))
        best = None
        for a, b in cands:
            R_ = R - {a, (-a) % m}
            T_ = T - {b, (-b) % m}
            if gcd_all(m, R_, p.S, T_) != 1 or not keeps_witness(R_, T_):
                continue
            key = (int(not _coprime_to(a, g)) + int(not _coprime_to(b, g)), a, b)
            if best is None or key < best[0]:
                best = (key, a, b)
        if best is None:
            break
        _, a, b = best
        R -= {a, (-a) % m}
        T -= {b, (-b) % m}
        removed.append((a, b))
    return make_params(m, R, p.S, T), removed


def _stage1_ok(m, S, a, b):
    L1 = make_params(m, {a, (-a) % m}, S, {b, (-b) % m})
    q = decompose(L1).quotient
    return haar_applicable(q)


def _plan(p: BicirculantParams, L: BicirculantParams):
    """Order the rim pairs of L so the first stage is a valid Haar stitch."""
    m, h = p.m, p.half
    Ra, Tb = _pairs(m, L.R), _pairs(m, L.T)
    odd = h is not None and h in L.R
    if not Ra:
        return None, odd
    order = [(a, b) for a in Ra for b in Tb]
    order.sort(key=lambda ab: not _stage1_ok(m, p.S, *ab))
    a, b = order[0]
    rest_a = [x for x in Ra if x != a]
    rest_b = [x for x in Tb if x != b]
    return [(a, b)] + list(zip(rest_a, rest_b)), odd


def lemma35_hypotheses(p: BicirculantParams):
    """None when the combination pipeline applies, else the failing clause."""
    if p.s < 2:
        return "|S| >= 2"
    if delta(p) != 1:
        return "connected"
    g = gcd_all(p.m, p.S)
    if g == 1:
        return "H(m;S) disconnected"
    h = p.half
    if not any(x != h and not _coprime_to(x, g) for x in set(p.R) | set(p.T)):
        return "some rim type other than m/2 not coprime to gcd(m,S)"
    return None


def _stage1(L, more, trace):
    """Cycle of the u_0 component of L_1: Haar stitch when it applies, else a spanning
    Haar cycle (no later stage) or an oracle cycle with two outer edges."""
    q = decompose(L).quotient
    if haar_applicable(q):
        seq, t1 = on_u0_component(L, haar_stitch_any)
        trace.absorb(t1, "stage 1: ")
    elif gcd_all(q.m, q.S) == 1 and not more:
        seq = haar_component_cycle(L)
        trace.note("stage 1: spoke subgraph spans the component")
    else:
        c = find_component_cycle(q, U(0), Constraints.min_outer(2 if more else 0))
        if c is None:
            raise OracleFailed(f"no suitable cycle in a component of {render_params(L)}")
        seq = lift_from_quotient(c, delta(L))
        trace.note("stage 1: oracle cycle with two outer edges")
    _check(L, seq, "stage 1")
    return seq


def build_chain(p: BicirculantParams, pairs, odd, trace):
    """Haar stitch on L_1, removal stitches up to L_k, and the K2 lift when m/2 types remain."""
    m = p.m
    a1, b1 = pairs[0]
    R = {a1, (-a1) % m}
    T = {b1, (-b1) % m}
    L = make_params(m, R, p.S, T)
    seq = _stage1(L, more=len(pairs) > 1, trace=trace)
    for k, (a, b) in enumerate(pairs[1:], start=2):
        R |= {a, (-a) % m}
        T |= {b, (-b) % m}
        L = make_params(m, R, p.S, T)
        seq, tk = stitch_removal(L, a, b, seq)
        trace.absorb(tk, f"stage {k}: ")
    if odd:
        h = p.half
        L2 = make_params(m, R | {h}, p.S, T | {h})
        if delta(L) == delta(L2):
            trace.note("L2.8-lift skipped: L_k already spans")
        else:
            seq = k2_lift(seq, L2, is_cycle=True)
            trace.note("L2.8-lift over m/2 types")
        L = L2
    return L, seq


def pipeline_combination(p: BicirculantParams):
    bad = lemma35_hypotheses(p)
    if bad is not None:
        raise HypothesisUnmet(bad)
    trace = ConstructionTrace("L3.5-pipeline")
    L, removed = _greedy_L(p)
    trace.note(f"removed pairs {removed}; L = {render_params(L)}")
    pairs, odd = _plan(p, L)
    if pairs is None:
        pairs, odd = _plan(p, p)
        trace.note("no valid first stage in greedy L; using G itself")
        L = p
    if pairs is None:
        raise HypothesisUnmet("no rim pair gives a valid Haar-grid first stage")
    trace.note(f"stage order {pairs}{' + m/2' if odd else ''}")
    Lfin, seq = build_chain(p, pairs, odd, trace)
    assert Lfin == L
    # L is a connected spanning subgraph of p
    seq = _rotate_to_u0(seq)
    _check(p, seq, "L3.5-pipeline")
    return seq, trace


# ------------------------------------------------------- m/2 in R and T


def half_hypotheses(p: BicirculantParams):
    if delta(p) != 1:
        return "connected"
    if p.m % 2 or p.m < 4:
        return "m even, m >= 4"
    if p.s < 3:
        return "|S| >= 3"
    if p.half not in p.R or p.half not in p.T:
        return "m/2 in R and T"
    return None


def _half_case1(p: BicirculantParams, a: int, trace):
    """Zig-zag of hamilton paths u_0 -> u_{m/2} across the components of B(m; m/2, S, m/2)."""
    m, h = p.m, p.half
    Gp = make_params(m, {h}, p.S, {h})
    g2 = delta(Gp)
    lam = g2 - 1
    P0 = oracle_path(Gp, U(0), U(h))
    if P0 is None:
        raise OracleFailed(f"no hamilton path u0 -> u{h} in a component of {render_params(Gp)}")
    segs, joins = [], []

    def ua(x, i):
        return U((x + i * a) % m)

    def join(x, i):
        joins.append((ua(x, i), ua(x, i + 1)))

    last_start = ua(0, lam) if lam % 2 == 0 else ua(h, lam)
    degenerate = last_start == U((-a) % m)
    Pl = None if degenerate else oracle_path(Gp, last_start, U((-a) % m))
    if Pl is not None:
        for i in range(lam):
            segs.append(shift_seq(P0, i * a, m))
        segs.append(Pl)
        for i in range(lam):
            join(h if i % 2 == 0 else 0, i)
        tag = "T1.4-case1"
    else:
        # Leave component lam-1 through a free vertex u_x instead of its m/2 partner.
        # Needed when u_{-a} hits the entry of the last component, and when that
        # component is bipartite with its entry and u_{-a} in the same colour class.
        tag = "T1.4-case1-relabel" if degenerate else "T1.4-case1-parity"
        entry = 0 if (lam - 1) % 2 == 0 else h
        for i in range(lam - 1):
            segs.append(shift_seq(P0, i * a, m))
        found = None
        for x in range(0, m, g2):
            if x == entry or ua(x, lam) == U((-a) % m):
                continue
            Q = oracle_path(Gp, U(entry), U(x))
            if Q is None:
                continue
            Pl = oracle_path(Gp, U((-a) % m), ua(x, lam))
            if Pl is None:
                continue
            found = (x, Q, Pl)
            break
        if found is None:
            return _half_case1_cycles(p, a, Gp, trace)
        x, Q, Pl = found
        segs.append(shift_seq(Q, (lam - 1) * a, m))
        segs.append(Pl)
        for i in range(lam - 1):
            join(h if i % 2 == 0 else 0, i)
        join(x, lam - 1)
        why = "u_{-a} is the entry of the last component" if degenerate else "entry and u_{-a} share a colour class"
        trace.note(f"{why}; leaving component {lam - 1} through u_x, x = {x}")
    joins.append((U((-a) % m), U(0)))
    seq = assemble(segs, joins)
    seq = _rotate_to_u0(seq)
    _check(p, seq, tag)
    trace.note(f"{tag} a={a} lambda'={lam}")
    trace.chosen_types.append((a, h))
    return seq


def _half_case1_cycles(p, a, Gp, trace):
    """Zig-zag of hamilton cycles of the components of B(m; m/2, S, m/2) along type a.

    Used when no chain of hamilton paths closes up: with bipartite components the
    colour classes of the path endpoints can be forced to clash.
    """
    m, h = p.m, p.half
    C = find_component_cycle(Gp, U(0), Constraints.min_outer(2))
    if C is None:
        raise OracleFailed(f"no hamilton cycle with two m/2 edges in a component of {render_params(Gp)}")
    Gs = subgraph(m, {a, (-a) % m, h}, p.S, {h})
    seq = _rotate_to_u0(zigzag(Gs, "u", a, C))
    _check(p, seq, "T1.4-case1-cycles")
    trace.note(f"T1.4-case1-cycles a={a} lambda'={delta(Gp) - 1}: path chain blocked by colour classes")
    trace.chosen_types.append((a, h))
    return seq


def _half_case1_any(p, trace):
    """Try each rim type coprime to gcd(m/2, S), outer first, mirrored for inner."""
    h = p.half
    g2 = gcd_all(h, p.S)
    last = None
    for mirrored, q in ((False, p), (True, swap_sides(p))):
        for a in _pairs(p.m, q.R):
            if not _coprime_to(a, g2):
                continue
            try:
                seq = _half_case1(q, a, trace)
            except OracleFailed as e:
                last = e
                continue
            if mirrored:
                seq = _rotate_to_u0([swap_vertex(v) for v in seq])
                trace.note("outer/inner mirrored")
            return seq
    raise last or HypothesisUnmet("no rim type coprime to gcd(m/2,S)")


def half_type_construct(p: BicirculantParams):
    bad = half_hypotheses(p)
    if bad is not None:
        raise HypothesisUnmet(bad)
    m, h = p.m, p.half
    g = gcd_all(m, p.S)
    g2 = gcd_all(h, p.S)
    trace = ConstructionTrace("T1.4")
    if g == 1:
        seq = haar_component_cycle(p)
        trace.lemma = "T1.4-haar"
        trace.note("spoke subgraph is connected and spanning")
    elif g2 == 1:
        # g == 2: B(m; m/2, S, m/2) is H_0 x K2
        H0 = haar_component_cycle(p)
        seq = k2_lift(H0, make_params(m, {h}, p.S, {h}), is_cycle=True)
        trace.lemma = "L2.8-lift"
    else:
        others = (set(p.R) | set(p.T)) - {h}
        if any(_coprime_to(x, g2) for x in others):
            seq = _half_case1_any(p, trace)
            trace.lemma = "T1.4-case1"
        else:
            seq = _half_case2(p, trace)
            trace.lemma = "T1.4-case2"
    seq = _rotate_to_u0(seq)
    _check(p, seq, trace.lemma)
    return seq, trace


def _half_case2(p: BicirculantParams, trace):
    m, h = p.m, p.half
    g2 = gcd_all(h, p.S)
    for mirrored, q in ((False, p), (True, swap_sides(p))):
        for a in _pairs(m, q.R):
            if gcd_all(h, {a}, q.S) < g2:
                seq = _half_case2_with(q, a, trace)
                if mirrored:
                    seq = _rotate_to_u0([swap_vertex(v) for v in seq])
                    trace.note("outer/inner mirrored")
                return seq
    raise HypothesisUnmet("no rim type lowers gcd(m/2, S)")


def _half_case2_with(p, a, trace):
    m, h = p.m, p.half
    Gpp = subgraph(m, {a, (-a) % m, h}, p.S, {h})
    sub = ConstructionTrace("T1.4-case1")

    def inner(q):
        return _half_case1(q, min(x for x in q.R if 2 * x != q.m), sub)

    seq = on_u0_component(Gpp, inner)
    _check(Gpp, seq, "T1.4-case2 base")
    trace.absorb(sub, "base: ")
    bs = _pairs(m, p.T)
    b = bs[0]
    R = {a, (-a) % m, h}
    T = {b, (-b) % m, h}
    L1 = make_params(m, R, p.S, T)
    seq = zigzag(L1, "v", b, seq)
    seq = _rotate_to_u0(seq)
    _check(L1, seq, "T1.4-case2 L_1")
    trace.note(f"L3.4-case1 along inner type {b}")
    rest_a = [x for x in _pairs(m, p.R) if x != a]
    rest_b = bs[1:]
    for x, y in zip(rest_a, rest_b):
        R |= {x, (-x) % m}
        T |= {y, (-y) % m}
        L = make_params(m, R, p.S, T)
        seq, tk = stitch_removal(L, x, y, seq)
        trace.absorb(tk)
    return seq


# ------------------------------------------------------------- one spoke


@dataclass
class S1Outcome:
    kind: str  # 'cycle' | 'alspach' | 'nonhamiltonian' | 'K2' | 'cannot-apply'
    cycle: list | None = None
    trace: ConstructionTrace | None = None
    reason: str = ""


def is_canonical_alspach(p: BicirculantParams) -> bool:
    """p is literally GP(m,2) with m = 5 mod 6."""
    m = p.m
    return (m % 6 == 5 and p.S == (0,) and set(p.R) == {1, m - 1}
            and set(p.T) == {2, m - 2})


def s1_classify_construct(p: BicirculantParams) -> S1Outcome:
    if p.s != 1:
        raise PreconditionViolated("|S| = 1 required")
    if p.S != (0,):
        raise PreconditionViolated("normalize S to {0} first")
    if delta(p) != 1:
        raise PreconditionViolated("graph must be connected")
    return _s1(p)


def _s1(p: BicirculantParams) -> S1Outcome:
    m, d = p.m, p.d
    if m == 1:
        return S1Outcome("K2", reason="K2")
    if d <= 3:
        if is_canonical_alspach(p):
            return S1Outcome("alspach", reason=f"GP({m},2), m = 5 mod 6")
        c = find_cycle_exact(p)
        if c is None:
            return S1Outcome("nonhamiltonian", reason="exhaustive search")
        t = ConstructionTrace("P4.1-base")
        t.note(f"d={d}: oracle cycle")
        return S1Outcome("cycle", _rotate_to_u0(c), t)
    if d % 2 == 1:
        return _s1_odd(p)
    return _s1_even(p)


def _sub_outcome(H):
    """Outcome for the u_0 component of H (via its connected quotient)."""
    k = delta(H)
    q = decompose(H).quotient
    out = _s1(q)
    if out.kind == "cycle":
        out = S1Outcome("cycle", lift_from_quotient(out.cycle, k), out.trace)
    return out


def _s1_odd(p):
    m = p.m
    pairs = [(a, b) for a in _pairs(m, p.R) for b in _pairs(m, p.T)]
    subs = []
    for a, b in pairs:
        H = remove_types(p, {a, m - a}, {b, m - b})
        sub = _sub_outcome(H)
        subs.append((a, b, H, sub))
        if sub.kind == "cycle":
            seq, tr = stitch_removal(p, a, b, sub.cycle)
            t = ConstructionTrace("P4.1-odd", [(a, b)])
            if sub.trace is not None:
                t.absorb(sub.trace, "component: ")
            t.absorb(tr)
            return S1Outcome("cycle", seq, t)
    for a, b, H, sub in subs:
        seq = _s1_escape(p, a, b, H)
        if seq is not None:
            t = ConstructionTrace("P4.1-alspach", [(a, b)])
            t.note(f"components of H are non-hamiltonian ({sub.reason}); hamilton paths stitched")
            return S1Outcome("cycle", seq, t)
    return S1Outcome("cannot-apply", reason="every type pair leaves non-hamiltonian components "
                                            "in a shape the path stitch cannot close")


def _s1_escape(p, a, b, H):
    """Stitch hamilton paths of non-hamiltonian components; None when the shape does not allow it."""
    m = p.m
    if delta(H) == 1:
        P = oracle_path(H, U(0), U(a))
        if P is None:
            return None
        seq = _rotate_to_u0(P)
        _check(p, seq, "P4.1 path closure")
        return seq
    K = remove_types(p, {a, m - a}, ())
    mu = delta(H) // delta(K) - 1
    lam = delta(K) - 1
    k = delta(H)
    if mu == 0:
        if lam % 2 == 0:
            return None
        for x in range(k, m, k):
            P = oracle_path(H, U(0), U(x))
            if P is None:
                continue
            seq = zigzag(p, "u", a, P, e1=(P[0], P[-1]))
            seq = _rotate_to_u0(seq)
            _check(p, seq, "P4.1 path zig-zag")
            return seq
        return None
    if mu % 2 == 0:
        return None
    for x in range(k, m, k):
        P = oracle_path(H, V(0), V(x))
        if P is None:
            continue
        c1 = zigzag(K, "v", b, P, e1=(P[0], P[-1]))
        _check(K, c1, "P4.1 inner path zig-zag")
        seq = _rotate_to_u0(zigzag(p, "u", a, c1))
        _check(p, seq, "P4.1 path zig-zag")
        return seq
    return None


def _s1_even(p):
    m, h = p.m, p.half
    H = remove_types(p, {h}, {h})
    sub = _sub_outcome(H)
    t = ConstructionTrace("P4.1-even")
    if sub.kind == "cycle":
        if sub.trace is not None:
            t.absorb(sub.trace, "component: ")
        if delta(H) == 1:
            t.note("H spans G")
            return S1Outcome("cycle", sub.cycle, t)
        seq = k2_lift(sub.cycle, p, is_cycle=True)
        t.note("L2.8-lift")
        return S1Outcome("cycle", seq, t)
    if delta(H) != 2:
        return S1Outcome("cannot-apply", reason="connected non-hamiltonian H")
    k = 2
    for x in range(k, m, k):
        P = oracle_path(H, U(0), U(x))
        if P is not None:
            seq = k2_lift(P, p)
            t.note(f"L2.8-lift of a hamilton path of a non-hamiltonian component ({sub.reason})")
            return S1Outcome("cycle", seq, t)
    return S1Outcome("cannot-apply", reason="no hamilton path in H_0")
