"""gcd arithmetic on bicirculant parameters: connectivity, components, stitching grids."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import (
    BicirculantError,
    BicirculantParams,
    U,
    V,
    Vertex,
    make_params,
    render_params,
)


class AsymmetricDrop(BicirculantError):
    pass


class NotASubset(BicirculantError):
    pass


class TypeNotPresent(BicirculantError):
    pass


class HalfTypeForbidden(BicirculantError):
    pass


def gcd_all(m: int, *sets) -> int:
    """gcd of m with every residue of every set; gcd(m, 0) = m, empty sets add nothing."""
    g = m
    for X in sets:
        for x in X:
            g = gcd(g, x)
    return g


def delta(p: BicirculantParams) -> int:
    return gcd_all(p.m, p.R, p.S, p.T)


def is_connected(p: BicirculantParams) -> bool:
    return delta(p) == 1


@dataclass(frozen=True)
class Decomposition:
    delta: int
    quotient: BicirculantParams

    def component_of(self, v: Vertex) -> int:
        return v.index % self.delta

    def to_quotient(self, v: Vertex) -> Vertex:
        """Index division on the component containing ``v``: x -> (x - comp) / delta."""
        c = v.index % self.delta
        return Vertex(v.side, (v.index - c) // self.delta)

    def from_quotient(self, v: Vertex, component: int = 0) -> Vertex:
        return Vertex(v.side, v.index * self.delta + component)


def _div(X, k):
    return tuple(sorted(x // k for x in X))


def decompose(p: BicirculantParams) -> Decomposition:
    # dividing every residue by delta keeps the parameter invariants intact
    k = delta(p)
    q = BicirculantParams(p.m // k, _div(p.R, k), _div(p.S, k), _div(p.T, k))
    return Decomposition(k, q)


def component_vertices(p: BicirculantParams, v: Vertex) -> list:
    k = delta(p)
    c = v.index % k
    idx = range(c, p.m, k)
    return [U(i) for i in idx] + [V(i) for i in idx]


def lift_from_quotient(seq, k: int, offset: int = 0):
    """Map a vertex sequence of the quotient into the component ``offset`` of the original."""
    return [Vertex(v.side, v.index * k + offset) for v in seq]


def shift_seq(seq, t: int, m: int):
    return [Vertex(v.side, (v.index + t) % m) for v in seq]


def _check_drop(p, X, drop, name):
    drop = {x % p.m for x in drop}
    if not drop <= set(X):
        raise NotASubset(f"{sorted(drop - set(X))} not in {name}")
    if any((-x) % p.m not in drop for x in drop):
        raise AsymmetricDrop(f"{name} drop {sorted(drop)} is not symmetric")
    return drop


def remove_types(p: BicirculantParams, outer_drop=(), inner_drop=()) -> BicirculantParams:
    od = _check_drop(p, p.R, outer_drop, "R")
    idr = _check_drop(p, p.T, inner_drop, "T")
    return BicirculantParams(p.m, tuple(x for x in p.R if x not in od), p.S,
                             tuple(x for x in p.T if x not in idr))


def _pm(m, a):
    return {a % m, (-a) % m}


@dataclass(frozen=True)
class GridShape:
    a: int
    b: int
    lam: int
    mu: int


def _check_ab(p, a, b):
    a %= p.m
    b %= p.m
    if a not in p.R:
        raise TypeNotPresent(f"outer type {a} not in R")
    if b not in p.T:
        raise TypeNotPresent(f"inner type {b} not in T")
    if p.half is not None and p.half in (a, b):
        raise HalfTypeForbidden(f"type m/2={p.half} not allowed here")
    return a, b


def grid_shape(p: BicirculantParams, a: int, b: int) -> GridShape:
    """Column/row counts of the Haar-component grid: lam+1 = gcd(m,S,b), (lam+1)(mu+1) = gcd(m,S)."""
    a, b = _check_ab(p, a, b)
    gs = gcd_all(p.m, p.S)
    gsb = gcd(gs, b)
    return GridShape(a, b, gsb - 1, gs // gsb - 1)


def grid_shape_general(p: BicirculantParams, a: int, b: int) -> GridShape:
    """Grid after removing types a, b from all of R, T: the residual keeps the other rim types."""
    a, b = _check_ab(p, a, b)
    R0 = set(p.R) - _pm(p.m, a)
    T0 = set(p.T) - _pm(p.m, b)
    k = gcd_all(p.m, R0, p.S, p.T)
    h = gcd_all(p.m, R0, p.S, T0)
    return GridShape(a, b, k - 1, h // k - 1)


def prime_divisors(n: int) -> list:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_factor_count(m: int) -> int:
    return len(prime_divisors(m))


def info(p: BicirculantParams) -> dict:
    dec = decompose(p)
    grids = []
    h = p.half
    for a in p.R:
        for b in p.T:
            if a > p.m - a or b > p.m - b or h in (a, b):
                continue
            g1 = grid_shape(p, a, b)
            g2 = grid_shape_general(p, a, b)
            grids.append({"a": a, "b": b, "haar": {"lambda": g1.lam, "mu": g1.mu},
                          "removal": {"lambda": g2.lam, "mu": g2.mu}})
    return {
        "params": render_params(p),
        "m": p.m,
        "d": p.d,
        "s": p.s,
        "delta": dec.delta,
        "connected": dec.delta == 1,
        "quotient": render_params(dec.quotient),
        "gcd_m_S": gcd_all(p.m, p.S),
        "grids": grids,
    }
