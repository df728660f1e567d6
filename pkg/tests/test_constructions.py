import pytest
from hypothesis import given
from hypothesis import strategies as st

from bicyc.constructions import (
    BaseCycleInvalid,
    HypothesisUnmet,
    InternalStitchFailure,
    PathInvalid,
    PreconditionViolated,
    TooFewOuterEdges,
    WrongShape,
    assemble,
    haar_component_cycle,
    half_type_construct,
    k2_lift,
    pipeline_combination,
    s1_classify_construct,
    stitch_haar,
    stitch_removal,
    zigzag,
)
from bicyc.core import EdgeKind, U, V, gp, make_params, swap_sides, sym, type_counts, verify_certificate
from bicyc.oracle import Constraints, find_cycle_exact, find_path_between
from bicyc.structure import decompose, delta, grid_shape, lift_from_quotient, remove_types


def haar(m, a, S, b):
    return make_params(m, sym(m, a), S, sym(m, b))


def removal_cycle(p, a, b):
    """Oracle cycle of the u_0 component of p minus types a, b with two outer edges."""
    H = remove_types(p, sym(p.m, a), sym(p.m, b))
    q = decompose(H).quotient
    c = find_cycle_exact(q, Constraints.min_outer(2))
    return None if c is None else lift_from_quotient(c, delta(H))


def test_assemble_detects_bad_joins():
    with pytest.raises(InternalStitchFailure):
        assemble([[U(0), U(1)], [U(2), U(3)]], [(U(1), U(2))])
    with pytest.raises(InternalStitchFailure):
        assemble([[U(0), U(1)], [U(1), U(2)]], [])
    assert assemble([[U(0), U(1)], [U(2), U(3)]], [(U(1), U(2)), (U(3), U(0))]) == [U(0), U(1), U(2), U(3)]


@pytest.mark.parametrize("p,shape,tag", [
    (haar(12, 3, {0, 4, 8}, 2), (1, 1), "L3.2-case2"),
    (haar(12, 1, {0, 4, 8}, 4), (3, 0), "L3.2-case1"),
    (haar(8, 1, {0, 4}, 2), (1, 1), "L3.2-case2"),
    (haar(18, 1, {0, 6, 12}, 6), (5, 0), "L3.2-case1"),
    (haar(18, 1, {0, 9}, 3), (2, 2), "L3.2-case2"),
    (haar(24, 1, {0, 12}, 3), (2, 3), "L3.2-case2"),
])
def test_stitch_haar_examples(p, shape, tag):
    g = grid_shape(p, min(p.R), min(p.T))
    assert (g.lam, g.mu) == shape
    seq, trace = stitch_haar(p)
    cert = verify_certificate(p, seq)
    assert trace.lemma == tag
    assert type_counts(p, seq)[EdgeKind("outer", min(p.R))] >= 2
    assert cert.outer == cert.inner


def test_stitch_haar_preconditions():
    with pytest.raises(PreconditionViolated):
        stitch_haar(haar(12, 1, {0, 4, 8}, 1))  # lambda = 0
    with pytest.raises(PreconditionViolated):
        stitch_haar(gp(10, 2))  # single spoke
    with pytest.raises(PreconditionViolated):
        stitch_haar(make_params(12, {1, 11, 2, 10}, {0, 4}, {1, 11, 2, 10}))
    p = haar(12, 1, {0, 4, 8}, 4)
    with pytest.raises(BaseCycleInvalid):
        stitch_haar(p, base=[U(0), V(0), U(4), V(4)])


@pytest.mark.parametrize("p", [haar(12, 3, {0, 4, 8}, 2), haar(8, 1, {0, 4}, 2), haar(18, 1, {0, 9}, 3),
                               haar(20, 1, {0, 10}, 2), haar(24, 5, {0, 8, 16}, 2)])
def test_stitch_haar_forced_anchor_coincidences(p):
    n = len(haar_component_cycle(p))
    # z at position 1: v_h = v_s and u_z = u_t; z at n-3: u_z = u_1 and v_k = v_0
    for z in (1, n - 3):
        seq, trace = stitch_haar(p, z_index=z)
        verify_certificate(p, seq)
    with pytest.raises(PreconditionViolated):
        stitch_haar(p, z_index=2)


def test_stitch_haar_accepts_supplied_base():
    p = haar(12, 1, {0, 4, 8}, 4)
    base = haar_component_cycle(p)
    seq, _ = stitch_haar(p, base=base[::-1])
    verify_certificate(p, seq)


def test_stitch_removal_trivial_when_residual_spans():
    p = make_params(12, {1, 11, 3, 9}, {0, 6}, {1, 11, 3, 9})
    c = find_cycle_exact(remove_types(p, {3, 9}, {3, 9}))
    seq, trace = stitch_removal(p, 3, 3, c)
    assert seq == c and trace.lemma == "L3.4-trivial"


def test_stitch_removal_two_components():
    p = make_params(12, {2, 10, 3, 9}, {0, 4, 8}, {2, 10, 3, 9})
    seq, trace = stitch_removal(p, 3, 3, removal_cycle(p, 3, 3))
    verify_certificate(p, seq)
    # dropping only the outer type keeps G connected (lambda = 0), so mu = 1
    assert trace.lemma == "L3.4-case2"


def test_stitch_removal_outer_zigzag():
    p = make_params(12, sym(12, 1, 2), {0, 6}, sym(12, 2, 4))
    seq, trace = stitch_removal(p, 1, 2, removal_cycle(p, 1, 2))
    verify_certificate(p, seq)
    assert trace.lemma == "L3.4-case1"


def test_stitch_removal_inner_stage():
    p = make_params(20, {4, 16, 1, 19}, {0, 10}, {4, 16, 3, 17})
    seq, trace = stitch_removal(p, 1, 3, removal_cycle(p, 1, 3))
    verify_certificate(p, seq)
    assert trace.lemma == "L3.4-case2"


def test_stitch_removal_errors():
    p = make_params(12, {2, 10, 3, 9}, {0, 2, 6}, {2, 10, 3, 9})
    H = remove_types(p, {3, 9}, {3, 9})
    c = find_cycle_exact(decompose(H).quotient, Constraints(forbidden=frozenset({"outer", "inner"})))
    with pytest.raises(TooFewOuterEdges):
        stitch_removal(p, 3, 3, lift_from_quotient(c, 2))
    with pytest.raises(BaseCycleInvalid):
        stitch_removal(p, 3, 3, [U(0), V(0), U(4), V(4)])
    with pytest.raises(PreconditionViolated):
        stitch_removal(p, 1, 3, removal_cycle(p, 3, 3))


def test_k2_lift_examples():
    p = make_params(4, {2}, {0}, {2})
    assert k2_lift([U(0), V(0)], p) == [U(0), V(0), V(2), U(2)]
    p = make_params(6, {3}, {0, 2}, {3})
    H = remove_types(p, {3}, {3})
    path = next(q for y in (U(2), U(4), V(0), V(2), V(4)) if (q := find_path_between(H, U(0), y)))
    seq = k2_lift(path, p)
    cert = verify_certificate(p, seq)
    assert cert.outer + cert.inner == 2
    cyc = lift_from_quotient(find_cycle_exact(decompose(H).quotient), 2)
    verify_certificate(p, k2_lift(cyc, p, is_cycle=True))


def test_k2_lift_errors():
    with pytest.raises(WrongShape):
        k2_lift([U(0), V(0)], gp(6, 2))
    with pytest.raises(WrongShape):
        k2_lift([U(0), V(0)], make_params(6, {3}, {0, 1}, {3}))
    with pytest.raises(PathInvalid):
        k2_lift([U(0), U(2), V(2), V(0), U(4), V(4)], make_params(6, {3}, {0, 2}, {3}))


@pytest.mark.parametrize("p", [
    make_params(12, {3, 9}, {0, 4, 8}, {2, 10}),
    make_params(16, {2, 14, 5, 11}, {0, 8}, {2, 14, 3, 13}),
    make_params(12, {2, 10, 3, 9}, {0, 4, 8}, {2, 10, 3, 9}),
    make_params(6, {2, 3, 4}, {0, 2}, {2, 3, 4}),
    make_params(20, {4, 16, 1, 19}, {0, 10}, {4, 16, 3, 17}),
])
def test_pipeline_examples(p):
    seq, trace = pipeline_combination(p)
    verify_certificate(p, seq)
    assert trace.lemma == "L3.5-pipeline"


def test_pipeline_uses_k2_tail():
    p = make_params(10, {2, 5, 8}, {0, 2}, {2, 5, 8})
    seq, trace = pipeline_combination(p)
    verify_certificate(p, seq)
    assert "L2.8-lift" in trace.tags()


def test_pipeline_hypothesis_violation():
    with pytest.raises(HypothesisUnmet):
        pipeline_combination(make_params(15, {1, 14}, {0, 5}, {2, 13}))
    with pytest.raises(HypothesisUnmet):
        pipeline_combination(make_params(12, {1, 11}, {0, 1}, {1, 11}))


@pytest.mark.parametrize("p,tag", [
    (make_params(8, {4}, {0, 1, 2}, {4}), "T1.4-haar"),
    (make_params(12, {6, 1, 11}, {0, 2, 4}, {6, 1, 11}), "T1.4-case1"),
    (make_params(24, {2, 12, 22}, {0, 6, 12}, {3, 12, 21}), "T1.4-case2"),
    (make_params(10, {5}, {0, 2, 4}, {5}), "L2.8-lift"),
    (make_params(12, {6, 1, 11}, {0, 4, 8}, {6, 1, 11}), "T1.4-case1"),
])
def test_half_type_examples(p, tag):
    seq, trace = half_type_construct(p)
    verify_certificate(p, seq)
    assert trace.lemma == tag


def test_half_type_hypotheses():
    with pytest.raises(HypothesisUnmet):
        half_type_construct(make_params(12, {6}, {0, 4}, {6}))
    with pytest.raises(HypothesisUnmet):
        half_type_construct(make_params(12, {1, 11}, {0, 1, 4}, {1, 11}))


def test_s1_examples():
    assert s1_classify_construct(gp(11, 2)).kind == "alspach"
    for p in (make_params(7, {1, 6, 2, 5}, {0}, {3, 4, 2, 5}), make_params(6, {3, 1, 5}, {0}, {3, 2, 4}),
              gp(12, 5), make_params(15, {1, 14, 5, 10}, {0}, {2, 13, 3, 12})):
        out = s1_classify_construct(p)
        assert out.kind == "cycle"
        verify_certificate(p, out.cycle)


def test_s1_alias_is_searched_not_recognised():
    alias = make_params(5, {2, 3}, {0}, {1, 4})
    assert s1_classify_construct(alias).kind == "nonhamiltonian"
    with pytest.raises(PreconditionViolated):
        s1_classify_construct(make_params(6, {1, 5}, {0, 1}, {1, 5}))


def _direct(p):
    try:
        stitch_haar(p)
        return True
    except PreconditionViolated:
        return False


HAAR_CASES = [
    haar(m, a, S, b)
    for m in range(6, 25, 2)
    for g in (2, 3, 4)
    if m % g == 0
    for S in ({0, g}, {0, g, m - g})
    for a in range(1, m // 2)
    for b in range(1, m // 2)
]
HAAR_CASES = [p for p in HAAR_CASES if _direct(p)]


@given(st.sampled_from(HAAR_CASES), st.data())
def test_stitch_haar_property(p, data):
    n = len(haar_component_cycle(p))
    z = data.draw(st.sampled_from([None, 1, n - 3]))
    seq, trace = stitch_haar(p, z_index=z)
    cert = verify_certificate(p, seq)
    assert cert.outer == cert.inner >= 1
    assert trace.lemma in ("L3.2-case1", "L3.2-case2")
