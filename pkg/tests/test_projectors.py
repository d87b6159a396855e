import pytest
from hypothesis import given, settings, strategies as st

from vermajw.intertwiners import GradedMap, cap_cup_e, check_intertwiner, f_family
from vermajw.qfield import ONE, RationalFn, WeightExpr, qint
from vermajw.projectors import (ProjectorBlocks, extended_jw, f_oracle, jw, rank_one_ok,
                                specialize_map, trace_report, verify_idempotent)
from vermajw.repspaces import Verma

from conftest import MU

qp = RationalFn.q_pow


def _same(a, b):
    return all(a.blocks[k] == b.blocks[k] for k in range(a.cutoff + 1))


# --- classical ---------------------------------------------------------------

def test_jw_one_is_identity():
    assert _same(jw(1), GradedMap.identity(jw(1).factors, 1))


def test_jw_two():
    e = cap_cup_e(2, 1)
    expected = GradedMap.identity(e.src_factors, 2) + e.scale(ONE / qint(2))
    assert _same(jw(2), expected)


@pytest.mark.parametrize("n", range(1, 6))
def test_jw_idempotent(n):
    assert verify_idempotent(jw(n)) == []


@pytest.mark.parametrize("n", [3, 4])
def test_jw_is_annihilated_by_generators(n):
    # diagnostic only: e_i P_n = 0
    P = jw(n)
    for i in range(1, n):
        prod = cap_cup_e(n, i) @ P
        assert all(not prod.blocks[k].entries for k in range(n + 1))


def test_jw_provenance():
    assert jw(3).provenance.startswith("P3=P2+[2]/[3]")
    with pytest.raises(ValueError):
        jw(0)


# --- extended projectors -----------------------------------------------------

def test_degree_zero_block_is_identity():
    for ws in ([MU[1], MU[2]], [MU[1], MU[2], MU[3]]):
        P = extended_jw(ws, 0)
        assert P.blocks[0].entries == {(0, 0): ONE}


def test_degree_one_block():
    m1, m2 = MU[1], MU[2]
    s = qint(m1 + m2)
    P = extended_jw([m1, m2], 1)
    assert list(P.blocks[1].src.vectors) == [(0, 1), (1, 0)]
    assert P.blocks[1].to_rows() == [
        [qp(-m1) * qint(m2) / s, qp(m2 - m1) * qint(m2) / s],
        [qint(m1) / s, qp(m2) * qint(m1) / s],
    ]
    assert P.blocks[1].trace() == ONE


@pytest.mark.parametrize("n,D", [(2, 6), (3, 4), (4, 2)])
def test_idempotent_and_trace_one(n, D):
    P = extended_jw(MU[1:n + 1], D)
    assert verify_idempotent(P) == []
    assert trace_report(P) == []
    assert rank_one_ok(P)


def test_extended_projector_is_an_intertwiner():
    assert check_intertwiner(extended_jw(MU[1:4], 3)) == []


def test_provenance_records_recursion():
    P = extended_jw(MU[1:4], 1)
    assert P.provenance == "F(mu1,mu2;mu3).[F(mu1+mu2,mu3).E(mu1+mu2,mu3)].E(mu1,mu2;mu3)"


def test_input_guards():
    with pytest.raises(ValueError):
        extended_jw([MU[1]], 2)
    with pytest.raises(ValueError):
        extended_jw(MU[1:3], -1)


def test_idempotence_report_on_identity_and_scaled():
    fs = (Verma(MU[1]), Verma(MU[2]))
    Id = GradedMap.identity(fs, 3)
    assert verify_idempotent(Id) == []
    P = extended_jw(MU[1:3], 3)
    scaled = GradedMap(P.src_factors, P.dst_factors, {**P.blocks, 2: P.blocks[2].scale(2)}, 3)
    viol = verify_idempotent(scaled)
    assert [v.degree for v in viol] == [2]
    assert trace_report(scaled) == [2]


def test_non_idempotent_is_reported_per_degree():
    fs = (Verma(MU[1]), Verma(MU[2]))
    Z = GradedMap.identity(fs, 2).scale(qp(1))
    assert [v.degree for v in verify_idempotent(Z)] == [0, 1, 2]


# --- oracle ------------------------------------------------------------------

def test_oracle_first_steps():
    mu, lam = MU[1], MU[2]
    G = f_oracle(mu, lam, 1)
    assert G.blocks[0].entries == {(0, 0): ONE}
    b = G.blocks[1]
    assert b[b.dst.index((1, 0)), 0] == qint(mu) / qint(mu + lam)
    assert b[b.dst.index((0, 1)), 0] == qp(-mu) * qint(lam) / qint(mu + lam)


def test_oracle_matches_closed_form():
    assert _same(f_oracle(MU[1], MU[2], 6), f_family(MU[1], MU[2], 6))


@pytest.mark.parametrize("a,b", [(-1, -2), (-3, -5), (-1, -7)])
def test_oracle_matches_closed_form_specialized(a, b):
    asg = {1: a, 2: b}
    D = 8
    ref = f_oracle(WeightExpr.const(a), WeightExpr.const(b), D)
    assert _same(specialize_map(f_family(MU[1], MU[2], D), asg), ref)


# --- specialization ----------------------------------------------------------

@settings(max_examples=6, deadline=None)
@given(st.lists(st.sampled_from([-1, -2, -3]), min_size=2, max_size=3))
def test_specialization_commutes(vals):
    D = 3
    n = len(vals)
    asg = {j + 1: v for j, v in enumerate(vals)}
    sym = specialize_map(extended_jw(MU[1:n + 1], D), asg)
    direct = extended_jw([WeightExpr.const(v) for v in vals], D)
    assert sym.factors == direct.factors
    assert _same(sym, direct)
    assert all(b.is_q_only() for blk in sym.blocks.values() for b in blk.entries.values())


def test_partial_specialization_stays_idempotent():
    P = specialize_map(extended_jw(MU[1:4], 3), {2: -2})
    assert isinstance(P, ProjectorBlocks)
    assert P.factors[1] == Verma(WeightExpr.const(-2))
    assert verify_idempotent(P) == [] and trace_report(P) == []


def test_specialization_pole_names_location():
    from vermajw.qfield import PoleError
    P = extended_jw(MU[1:3], 2)
    with pytest.raises(PoleError) as info:
        specialize_map(P, {1: 2, 2: -1})
    assert info.value.location[0] == 2
    assert specialize_map(extended_jw(MU[1:3], 1), {1: 2, 2: -1}).cutoff == 1
