"""Strategy cascade deciding hamiltonicity, and the exhaustive small-universe sweep."""
from __future__ import annotations

import itertools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .constructions import (
    ConstructionError,
    ConstructionTrace,
    half_hypotheses,
    half_type_construct,
    haar_component_cycle,
    is_canonical_alspach,
    lemma35_hypotheses,
    pipeline_combination,
    s1_classify_construct,
)
from .core import (
    BicirculantParams,
    CycleCertificate,
    V,
    Vertex,
    make_params,
    render_params,
    sym,
    verify_certificate,
)
from .oracle import DEFAULT_BUDGET, BudgetExceeded, SearchBudget, find_cycle_exact, find_cycle_heuristic
from .structure import Decomposition, decompose, delta, gcd_all, prime_power_factor_count

HAMILTONIAN = "Hamiltonian"
NON_HAMILTONIAN = "NonHamiltonian"
DISCONNECTED = "Disconnected"
UNKNOWN = "Unknown"


@dataclass
class Outcome:
    verdict: str
    certificate: CycleCertificate | None = None
    trace: ConstructionTrace | None = None
    strategy: str = ""
    reason: str = ""
    decomposition: Decomposition | None = None
    budget: SearchBudget | None = None

    def to_json(self, p: BicirculantParams | None = None) -> dict:
        out = {"verdict": self.verdict, "strategy": self.strategy}
        if p is not None:
            out["params"] = render_params(p)
        if self.reason:
            out["reason"] = self.reason
        if self.certificate is not None:
            out["cycle"] = [[v.side, v.index] for v in self.certificate.vertices]
            out["counts"] = dict(self.certificate.edge_counts)
        if self.trace is not None:
            out["trace"] = {"lemma": self.trace.lemma,
                            "chosen_types": [list(t) for t in self.trace.chosen_types],
                            "log": list(self.trace.log)}
        if self.decomposition is not None:
            out["delta"] = self.decomposition.delta
            out["quotient"] = render_params(self.decomposition.quotient)
        if self.verdict == UNKNOWN and self.budget is not None:
            out["budget"] = {"max_nodes": self.budget.max_nodes, "max_millis": self.budget.max_millis,
                             "seed": self.budget.seed}
        return out


def _ham(p, seq, strategy, trace=None):
    return Outcome(HAMILTONIAN, verify_certificate(p, seq), trace, strategy)


@dataclass(frozen=True)
class SubgraphWitness:
    applicable: bool
    kind: str | None  # 'haar' | 'spoke-pair' | None
    spokes: tuple = ()  # (c_j, c_i): B(m;R,{0,c_i-c_j},T) is connected

    @property
    def difference(self):
        return None if not self.spokes else self.spokes[1] - self.spokes[0]


def find_spoke_pair(p: BicirculantParams):
    """Spokes c_j, c_i of S with gcd(m, R, T, c_i - c_j) = 1, or None."""
    for cj, ci in itertools.permutations(p.S, 2):
        if gcd_all(p.m, p.R, p.T, [(ci - cj) % p.m]) == 1:
            return (cj, ci)
    return None


def theorem13_applicable(p: BicirculantParams) -> SubgraphWitness:
    """Connected |S| >= 3 graph on a ring whose order has at most three prime factors
    contains a connected Haar graph or a connected two-spoke bicirculant."""
    ok = prime_power_factor_count(p.m) <= 3 and p.s >= 3 and delta(p) == 1
    if gcd_all(p.m, p.S) == 1:
        return SubgraphWitness(ok, "haar")
    pair = find_spoke_pair(p)
    if pair is not None:
        return SubgraphWitness(ok, "spoke-pair", pair)
    if ok:
        raise AssertionError(f"no witness subgraph found for {render_params(p)}")
    return SubgraphWitness(False, None)


def _try(fn):
    """Run a construction; None if it cannot apply or an internal search ran out of budget."""
    try:
        return fn()
    except (ConstructionError, BudgetExceeded):
        return None


def classify(p: BicirculantParams, budget: SearchBudget = DEFAULT_BUDGET, prefer_oracle=False,
             use_heuristic=True) -> Outcome:
    m = p.m
    if delta(p) != 1:
        return Outcome(DISCONNECTED, strategy="gcd", decomposition=decompose(p),
                       reason=f"gcd(m,R,S,T) = {delta(p)}")
    if m == 1:
        return Outcome(NON_HAMILTONIAN, strategy="known-exception", reason="K2")
    if is_canonical_alspach(p):
        return Outcome(NON_HAMILTONIAN, strategy="known-exception", reason="AlspachGP")
    if m <= 5 or prefer_oracle:
        out = _exact(p, budget, "oracle-small" if m <= 5 else "oracle")
        if out is not None:
            return out
    if gcd_all(m, p.S) == 1:
        try:
            seq = haar_component_cycle(p)
            return _ham(p, seq, "haar-subgraph")
        except (ConstructionError, BudgetExceeded):
            pass
    if p.s == 1:
        try:
            o = s1_classify_construct(p)
        except BudgetExceeded:
            o = None
        if o is not None:
            if o.kind == "cycle":
                return _ham(p, o.cycle, "one-spoke", o.trace)
            if o.kind == "alspach":
                return Outcome(NON_HAMILTONIAN, strategy="known-exception", reason="AlspachGP")
            if o.kind == "nonhamiltonian":
                return Outcome(NON_HAMILTONIAN, strategy="oracle", reason="ExhaustiveSearch")
            if o.kind == "K2":
                return Outcome(NON_HAMILTONIAN, strategy="known-exception", reason="K2")
    if half_hypotheses(p) is None:
        r = _try(lambda: half_type_construct(p))
        if r is not None:
            return _ham(p, r[0], "half-type", r[1])
    if lemma35_hypotheses(p) is None and m > 5:
        r = _try(lambda: pipeline_combination(p))
        if r is not None:
            return _ham(p, r[0], "pipeline", r[1])
    if p.s >= 3:
        out = _two_spoke_subgraph(p, budget)
        if out is not None:
            return out
    if p.s == 2:
        out = _rose_window(p, budget)
        if out is not None:
            return out
    out = _exact(p, budget, "oracle")
    if out is not None:
        return out
    if use_heuristic:
        c = find_cycle_heuristic(p, budget)
        if c is not None:
            return _ham(p, c, "heuristic")
    return Outcome(UNKNOWN, strategy="budget", reason="search budget exhausted", budget=budget)


def _exact(p, budget, tag):
    try:
        c = find_cycle_exact(p, budget=budget)
    except BudgetExceeded:
        return None
    if c is None:
        return Outcome(NON_HAMILTONIAN, strategy=tag, reason="ExhaustiveSearch")
    return _ham(p, c, tag)


def _two_spoke_subgraph(p, budget):
    """Classify a connected spanning B(m; R, {c_j, c_i}, T) and reuse its cycle."""
    pair = find_spoke_pair(p)
    if pair is None:
        return None
    cj, ci = pair
    sub = make_params(p.m, p.R, {0, ci - cj}, p.T)
    out = classify(sub, budget, use_heuristic=False)
    if out.verdict != HAMILTONIAN:
        return None
    # B(m;R,{0,c},T) -> B(m;R,{c_j,c_i},T): v_x -> v_{x+c_j}
    seq = [v if v.side == "u" else V((v.index + cj) % p.m) for v in out.certificate.vertices]
    tr = ConstructionTrace("T1.3-subgraph")
    tr.note(f"spanning subgraph {render_params(sub)} via spokes {cj},{ci}: {out.strategy}")
    if out.trace is not None:
        tr.absorb(out.trace)
    return _ham(p, seq, "two-spoke-subgraph", tr)


def _rose_window(p, budget):
    """Oracle on a connected spanning 4-valent sub-bicirculant B(m; a, S, b)."""
    m, h = p.m, p.half
    g = gcd_all(m, p.S)
    rim = (set(p.R) | set(p.T)) - {h}
    if any(gcd_all(g, [x]) != 1 for x in rim):
        return None
    for a in sorted({min(x, m - x) for x in p.R}):
        for b in sorted({min(x, m - x) for x in p.T}):
            R_, T_ = sym(m, a), sym(m, b)
            if len(R_) != len(T_) or (R_, T_) == (set(p.R), set(p.T)):
                continue
            sub = make_params(m, R_, p.S, T_)
            if delta(sub) != 1:
                continue
            try:
                c = find_cycle_exact(sub, budget=budget)
            except BudgetExceeded:
                continue
            if c is not None:
                return _ham(p, c, "rose-window-subgraph")
    return None


# ------------------------------------------------------------------- sweep


def _rim_sets(m, size_cap):
    types = range(1, m // 2 + 1)
    out = []
    for k in range(len(types) + 1):
        for combo in itertools.combinations(types, k):
            X = frozenset(sym(m, *combo))
            if len(X) <= size_cap:
                out.append(tuple(sorted(X)))
    return out


def canonical_spokes(m, S):
    """Smallest representative of S under spoke shifts S - c and global negation."""
    best = None
    for sign in (1, -1):
        T = [(sign * x) % m for x in S]
        for c in T:
            cand = tuple(sorted((x - c) % m for x in T))
            if best is None or cand < best:
                best = cand
    return best


def enumerate_universe(m_max: int, d_max: int):
    """All valid parameter sets with m <= m_max and degree d <= d_max, one per spoke-orbit."""
    for m in range(1, m_max + 1):
        for s in range(1, min(d_max, m) + 1):
            rims = _rim_sets(m, d_max - s)
            seen = set()
            for rest in itertools.combinations(range(1, m), s - 1):
                S = canonical_spokes(m, (0,) + rest)
                if S in seen:
                    continue
                seen.add(S)
                for R in rims:
                    for T in rims:
                        if len(R) == len(T):
                            yield BicirculantParams(m, R, S, T)


@dataclass
class SweepReport:
    universe_size: int = 0
    verdict_histogram: dict = field(default_factory=dict)
    strategy_histogram: dict = field(default_factory=dict)
    exceptions: list = field(default_factory=list)
    unknown: list = field(default_factory=list)
    agreement_failures: list = field(default_factory=list)
    agreement_checked: int = 0
    outer_inner_mismatches: int = 0
    seconds: float = 0.0

    def to_json(self, include_timing=False):
        out = {
            "universe_size": self.universe_size,
            "verdict_histogram": dict(sorted(self.verdict_histogram.items())),
            "strategy_histogram": dict(sorted(self.strategy_histogram.items())),
            "exceptions": list(self.exceptions),
            "unknown": list(self.unknown),
            "agreement_failures": list(self.agreement_failures),
            "agreement_checked": self.agreement_checked,
            "outer_inner_mismatches": self.outer_inner_mismatches,
        }
        if include_timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _sweep_one(args):
    p, budget, cross_check_m = args
    out = classify(p, budget)
    row = {"params": render_params(p), "verdict": out.verdict, "strategy": out.strategy,
           "reason": out.reason, "agree": None, "balanced": True}
    if out.certificate is not None:
        row["balanced"] = out.certificate.outer == out.certificate.inner
    if out.verdict in (HAMILTONIAN, NON_HAMILTONIAN) and p.m <= cross_check_m and out.strategy not in (
            "oracle", "oracle-small"):
        try:
            c = find_cycle_exact(p, budget=budget)
            row["agree"] = (c is not None) == (out.verdict == HAMILTONIAN)
        except BudgetExceeded:
            pass
    return row


def sweep(m_max: int, d_max: int, budget: SearchBudget = DEFAULT_BUDGET, jobs: int = 1,
          cross_check_m: int = 12) -> SweepReport:
    """Classify every parameter set of the universe; constructions are re-checked by the
    exact oracle for m <= cross_check_m."""
    t0 = time.monotonic()
    work = [(p, budget, cross_check_m) for p in enumerate_universe(m_max, d_max)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_sweep_one, work, chunksize=16))
    else:
        rows = [_sweep_one(w) for w in work]
    rep = SweepReport(universe_size=len(rows))
    vh, sh = Counter(), Counter()
    for r in rows:
        vh[r["verdict"]] += 1
        sh[r["strategy"]] += 1
        if r["verdict"] == NON_HAMILTONIAN:
            rep.exceptions.append({"params": r["params"], "reason": r["reason"]})
        elif r["verdict"] == UNKNOWN:
            rep.unknown.append(r["params"])
        if r["agree"] is not None:
            rep.agreement_checked += 1
            if not r["agree"]:
                rep.agreement_failures.append(r["params"])
        if not r["balanced"]:
            rep.outer_inner_mismatches += 1
    rep.verdict_histogram = dict(vh)
    rep.strategy_histogram = dict(sh)
    rep.seconds = time.monotonic() - t0
    return rep


def is_gp2_alias(p: BicirculantParams) -> bool:
    """p is isomorphic to GP(m,2) through a unit multiplier and/or an outer/inner swap."""
    from math import gcd

    m = p.m
    if p.S != (0,) or p.r != 2:
        return False
    gp2 = (frozenset(sym(m, 1)), frozenset(sym(m, 2)))
    for k in range(1, m):
        if gcd(k, m) != 1:
            continue
        R = frozenset((k * x) % m for x in p.R)
        T = frozenset((k * x) % m for x in p.T)
        if (R, T) == gp2 or (T, R) == gp2:
            return True
    return False


__all__ = [
    "Outcome", "classify", "sweep", "SweepReport", "enumerate_universe", "canonical_spokes",
    "theorem13_applicable", "SubgraphWitness", "find_spoke_pair", "is_gp2_alias",
    "HAMILTONIAN", "NON_HAMILTONIAN", "DISCONNECTED", "UNKNOWN", "Vertex",
]
