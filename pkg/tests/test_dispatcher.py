import random

import pytest
from hypothesis import given

from bicyc.core import gp, make_params, render_params, verify_certificate
from bicyc.dispatcher import (
    DISCONNECTED,
    HAMILTONIAN,
    NON_HAMILTONIAN,
    UNKNOWN,
    canonical_spokes,
    classify,
    enumerate_universe,
    is_gp2_alias,
    sweep,
    theorem13_applicable,
)
from bicyc.oracle import SearchBudget, find_cycle_exact
from bicyc.structure import delta
from test_core import params


def test_k2_and_alspach_exceptions():
    out = classify(make_params(1, (), {0}, ()))
    assert (out.verdict, out.reason) == (NON_HAMILTONIAN, "K2")
    for m in (5, 11, 17):
        out = classify(gp(m, 2))
        assert (out.verdict, out.reason) == (NON_HAMILTONIAN, "AlspachGP")


def test_disconnected_reports_decomposition():
    out = classify(make_params(6, {2, 4}, {0, 2}, {2, 4}))
    assert out.verdict == DISCONNECTED and out.decomposition.delta == 2
    assert out.to_json()["quotient"] == "B(3; 1,2; 0,1; 1,2)"


@pytest.mark.parametrize("p,strategy", [
    (make_params(12, {3, 9}, {0, 4, 8}, {2, 10}), "pipeline"),
    (make_params(8, {4}, {0, 1, 2}, {4}), "haar-subgraph"),
    (make_params(12, {6, 1, 11}, {0, 4, 8}, {6, 1, 11}), "half-type"),
    (gp(12, 5), "one-spoke"),
])
def test_strategy_selection(p, strategy):
    out = classify(p)
    assert out.verdict == HAMILTONIAN and out.strategy == strategy
    verify_certificate(p, list(out.certificate.vertices))


def test_prefer_oracle_uses_search():
    out = classify(gp(9, 2), prefer_oracle=True)
    assert out.verdict == HAMILTONIAN and out.strategy == "oracle"


def test_unknown_carries_budget():
    b = SearchBudget(max_nodes=1)
    out = classify(make_params(30, {1, 29}, {0, 5}, {3, 27}), b, use_heuristic=False)
    if out.verdict == UNKNOWN:
        assert out.to_json()["budget"]["max_nodes"] == 1


def test_theorem13_witnesses():
    w = theorem13_applicable(make_params(60, {12, 48}, {0, 10, 15}, {12, 48}))
    assert w.applicable and w.kind == "spoke-pair"
    assert theorem13_applicable(make_params(8, {4}, {0, 1, 2}, {4})).kind == "haar"
    w = theorem13_applicable(make_params(210, {30, 180}, {0, 14, 35}, {60, 150}))
    assert not w.applicable and w.kind is None


def test_theorem13_seeded_random_instances():
    rng = random.Random(7)
    seen = 0
    while seen < 100:
        m = rng.choice([12, 18, 20, 24, 30, 36, 60, 84, 90])
        S = {0} | set(rng.sample(range(1, m), 2))
        a = rng.randrange(1, m // 2)
        p = make_params(m, {a, m - a}, S, {a, m - a})
        if delta(p) != 1:
            continue
        seen += 1
        w = theorem13_applicable(p)
        assert w.applicable
        if w.kind == "spoke-pair":
            cj, ci = w.spokes
            assert delta(make_params(m, p.R, {0, (ci - cj) % m}, p.T)) == 1


def test_sweep_smallest_universe_is_k2():
    rep = sweep(1, 3)
    assert rep.universe_size == 1
    assert rep.exceptions == [{"params": "B(1; _; 0; _)", "reason": "K2"}]


def test_sweep_is_deterministic():
    a = sweep(8, 4).to_json()
    b = sweep(8, 4).to_json()
    assert a == b and not a["unknown"] and not a["agreement_failures"]


def test_canonical_spokes_collapses_orbits():
    assert canonical_spokes(7, {0, 2, 3}) == canonical_spokes(7, {0, 1, 5})
    assert canonical_spokes(7, {0, 1}) == canonical_spokes(7, {0, 6})


def test_universe_has_no_orbit_duplicates():
    seen = set()
    for p in enumerate_universe(9, 4):
        key = (p.m, p.R, canonical_spokes(p.m, p.S), p.T)
        assert key not in seen
        seen.add(key)


def test_small_exceptions_are_gp2_aliases():
    rep = sweep(10, 4)
    for e in rep.exceptions:
        if e["reason"] != "K2":
            p = next(q for q in enumerate_universe(10, 4) if render_params(q) == e["params"])
            assert is_gp2_alias(p)


@given(params(m_max=9, s_max=3))
def test_classify_agrees_with_exact_search(p):
    out = classify(p)
    assert out.verdict != UNKNOWN
    if out.verdict == DISCONNECTED:
        assert delta(p) > 1
        return
    exists = find_cycle_exact(p) is not None
    assert (out.verdict == HAMILTONIAN) == exists
    if out.certificate is not None:
        assert out.certificate.outer == out.certificate.inner
