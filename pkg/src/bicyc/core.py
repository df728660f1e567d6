"""Bicirculant graph model B(m; R, S, T) and the hamilton-cycle certificate checker.

Vertices are ``Vertex('u', i)`` (outer) and ``Vertex('v', i)`` (inner) for
``i`` in ``range(m)``.  Edges are ``u_i u_{i+a}`` for ``a`` in R, ``v_i v_{i+b}``
for ``b`` in T and spokes ``u_i v_{i+c}`` for ``c`` in S.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class BicirculantError(ValueError):
    """Base class for invalid parameters and rejected certificates."""

    field = None


class NonSymmetricRimSet(BicirculantError):
    pass


class ZeroInRim(BicirculantError):
    pass


class MissingZeroSpoke(BicirculantError):
    pass


class UnequalRimSizes(BicirculantError):
    pass


class EmptySpokes(BicirculantError):
    pass


class NotAnEdge(BicirculantError):
    pass


class ShiftNotInS(BicirculantError):
    pass


class OddM(BicirculantError):
    pass


class HalfAlreadyPresent(BicirculantError):
    pass


class CertificateError(BicirculantError):
    """A vertex sequence that is not a hamilton cycle."""


class WrongLength(CertificateError):
    pass


class RepeatedVertex(CertificateError):
    pass


class NonAdjacentStep(CertificateError):
    def __init__(self, position: int, x, y):
        super().__init__(f"step {position}: {x} and {y} are not adjacent")
        self.position = position


class OuterInnerCountMismatch(CertificateError):
    pass


def _err(cls, msg, fieldname=None):
    e = cls(msg)
    e.field = fieldname
    return e


class Vertex(NamedTuple):
    side: str  # 'u' outer, 'v' inner
    index: int

    def __str__(self):
        return f"{self.side}{self.index}"


def U(i: int) -> Vertex:
    return Vertex("u", i)


def V(i: int) -> Vertex:
    return Vertex("v", i)


@dataclass(frozen=True)
class BicirculantParams:
    """Normalized parameters; R, S, T are sorted tuples of residues in [0, m)."""

    m: int
    R: tuple
    S: tuple
    T: tuple

    @property
    def r(self) -> int:
        return len(self.R)

    @property
    def s(self) -> int:
        return len(self.S)

    @property
    def d(self) -> int:
        return self.r + self.s

    @property
    def half(self):
        """m/2 when m is even, else None."""
        return self.m // 2 if self.m % 2 == 0 else None

    def vertices(self):
        return [U(i) for i in range(self.m)] + [V(i) for i in range(self.m)]

    def __str__(self):
        return render_params(self)


def _as_set(m, values, name):
    out = set()
    for x in values:
        if not isinstance(x, int):
            raise _err(BicirculantError, f"{name} must contain integers, got {x!r}", name)
        out.add(x % m)
    return out


def make_params(m: int, R: Iterable[int], S: Iterable[int], T: Iterable[int]) -> BicirculantParams:
    if not isinstance(m, int) or m < 1:
        raise BicirculantError(f"m must be a positive integer, got {m!r}")
    R_ = _as_set(m, R, "R")
    S_ = _as_set(m, S, "S")
    T_ = _as_set(m, T, "T")
    for name, X in (("R", R_), ("T", T_)):
        if 0 in X:
            raise _err(ZeroInRim, f"0 in {name}", name)
        missing = sorted((-x) % m for x in X if (-x) % m not in X)
        if missing:
            raise _err(NonSymmetricRimSet, f"{name} is not closed under negation mod {m}; missing {missing}", name)
    if not S_:
        raise _err(EmptySpokes, "S is empty", "S")
    if 0 not in S_:
        raise _err(MissingZeroSpoke, "0 not in S (shift spokes first)", "S")
    if len(R_) != len(T_):
        raise _err(UnequalRimSizes, f"|R|={len(R_)} != |T|={len(T_)}", "T")
    return BicirculantParams(m, tuple(sorted(R_)), tuple(sorted(S_)), tuple(sorted(T_)))


def sym(m: int, *types: int) -> set:
    """Symmetric closure {a, -a} of the given types; shorthand for B(m; a, S, b)."""
    return {t % m for t in types} | {(-t) % m for t in types}


def gp(m: int, k: int) -> BicirculantParams:
    return make_params(m, sym(m, 1), {0}, sym(m, k))


def render_params(p: BicirculantParams) -> str:
    def f(X):
        return ",".join(map(str, X)) if X else "_"

    return f"B({p.m}; {f(p.R)}; {f(p.S)}; {f(p.T)})"


def canonical_type(m: int, a: int) -> int:
    a %= m
    return min(a, m - a)


def neighbors(p: BicirculantParams, v: Vertex) -> set:
    m, i = p.m, v.index
    if v.side == "u":
        out = {U((i + a) % m) for a in p.R}
        out |= {V((i + c) % m) for c in p.S}
    else:
        out = {V((i + b) % m) for b in p.T}
        out |= {U((i - c) % m) for c in p.S}
    return out


def adjacent(p: BicirculantParams, x: Vertex, y: Vertex) -> bool:
    m = p.m
    diff = (y.index - x.index) % m
    if x.side == y.side:
        return diff in (p.R if x.side == "u" else p.T)
    if x.side == "u":
        return diff in p.S
    return (-diff) % m in p.S


class EdgeKind(NamedTuple):
    kind: str  # 'outer' | 'inner' | 'spoke'
    type: int


def classify_edge(p: BicirculantParams, x: Vertex, y: Vertex) -> EdgeKind:
    if not adjacent(p, x, y):
        raise NotAnEdge(f"{x}{y} is not an edge of {render_params(p)}")
    m = p.m
    if x.side == y.side:
        kind = "outer" if x.side == "u" else "inner"
        return EdgeKind(kind, canonical_type(m, y.index - x.index))
    if x.side == "v":
        x, y = y, x
    return EdgeKind("spoke", (y.index - x.index) % m)


def canonical_cycle(seq: Sequence[Vertex]) -> list:
    """Rotate the minimum vertex to the front and pick the smaller orientation."""
    seq = list(seq)
    if not seq:
        return seq
    i = seq.index(min(seq))
    fwd = seq[i:] + seq[:i]
    bwd = [fwd[0]] + fwd[1:][::-1]
    return min(fwd, bwd)


@dataclass(frozen=True)
class CycleCertificate:
    vertices: tuple
    edge_counts: dict = field(compare=False)

    @property
    def outer(self):
        return self.edge_counts["outer"]

    @property
    def inner(self):
        return self.edge_counts["inner"]

    @property
    def spoke(self):
        return self.edge_counts["spoke"]

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def cycle_edges(seq):
    n = len(seq)
    return [(seq[i], seq[(i + 1) % n]) for i in range(n)]


def type_counts(p: BicirculantParams, seq) -> Counter:
    """Counter of EdgeKind over the closed walk ``seq``."""
    return Counter(classify_edge(p, x, y) for x, y in cycle_edges(seq))


def _check_cycle(p, seq, expected_len, allowed=None, balanced=True):
    seq = [Vertex(*v) for v in seq]
    if len(seq) != expected_len:
        raise WrongLength(f"sequence has {len(seq)} vertices, expected {expected_len}")
    seen = set()
    for v in seq:
        if v.side not in ("u", "v") or not 0 <= v.index < p.m:
            raise CertificateError(f"{v} is not a vertex of {render_params(p)}")
        if allowed is not None and v not in allowed:
            raise CertificateError(f"{v} is outside the component")
        if v in seen:
            raise RepeatedVertex(f"{v} repeated")
        seen.add(v)
    counts = Counter(outer=0, inner=0, spoke=0)
    if expected_len == 2:
        # a 2-vertex walk reuses its only edge
        raise NonAdjacentStep(1, seq[1], seq[0])
    for i, (x, y) in enumerate(cycle_edges(seq)):
        if not adjacent(p, x, y):
            raise NonAdjacentStep(i, x, y)
        counts[classify_edge(p, x, y).kind] += 1
    if balanced and counts["outer"] != counts["inner"]:
        raise OuterInnerCountMismatch(f"outer={counts['outer']} inner={counts['inner']}")
    return seq, dict(counts)


def verify_certificate(p: BicirculantParams, seq: Sequence[Vertex]) -> CycleCertificate:
    seq, counts = _check_cycle(p, seq, 2 * p.m)
    return CycleCertificate(tuple(canonical_cycle(seq)), counts)


def verify_component_cycle(p: BicirculantParams, seq: Sequence[Vertex], component=None,
                           balanced=True) -> CycleCertificate:
    """Verify a hamilton cycle of one connected component of a possibly disconnected ``p``.

    ``component`` defaults to the component containing ``seq[0]``.  Pass
    ``balanced=False`` for irregular subgraphs (|R| != |T|), where outer and inner
    edge counts need not agree.
    """
    from .structure import component_vertices

    if not seq:
        raise WrongLength("empty sequence")
    comp = component if component is not None else component_vertices(p, Vertex(*seq[0]))
    seq, counts = _check_cycle(p, seq, len(comp), allowed=set(comp), balanced=balanced)
    return CycleCertificate(tuple(canonical_cycle(seq)), counts)


def shift_spokes(p: BicirculantParams, c: int) -> BicirculantParams:
    c %= p.m
    if c not in p.S:
        raise ShiftNotInS(f"{c} not in S={p.S}")
    return make_params(p.m, p.R, [x - c for x in p.S], p.T)


def shift_spokes_map(p: BicirculantParams, c: int):
    """Isomorphism B(m;R,S,T) -> B(m;R,S-c,T): u_i -> u_i, v_i -> v_{i-c}."""
    m = p.m

    def f(v):
        return v if v.side == "u" else V((v.index - c) % m)

    return f


def add_half_types(p: BicirculantParams) -> BicirculantParams:
    if p.m % 2:
        raise OddM(f"m={p.m} is odd")
    h = p.m // 2
    if h in p.R or h in p.T:
        raise HalfAlreadyPresent(f"m/2={h} already in R or T")
    return make_params(p.m, set(p.R) | {h}, p.S, set(p.T) | {h})


def swap_sides(p: BicirculantParams) -> BicirculantParams:
    """B(m;R,S,T) is isomorphic to B(m;T,-S,R) via u_i <-> v_i."""
    return make_params(p.m, p.T, [-c for c in p.S], p.R)


def swap_vertex(v: Vertex) -> Vertex:
    return Vertex("v" if v.side == "u" else "u", v.index)
