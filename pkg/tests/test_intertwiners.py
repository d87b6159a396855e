from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vermajw.intertwiners import (V1, GradedMap, cap_cup, cap_cup_e, check_intertwiner,
                                  e_block, e_family, ef_identity_report, embed, f_block,
                                  f_family, splice, splice_family)
from vermajw.qfield import ONE, RationalFn, qint
from vermajw.repspaces import BlockMatrix, Verma, graded_basis

from conftest import MU, Q0, T0, qnum

qp = RationalFn.q_pow
mu, lam = MU[1], MU[2]


# --- closed forms ----------------------------------------------------------

def test_e_block_examples():
    assert e_block(mu, lam, 0).entries == {(0, 0): ONE}
    b1 = e_block(mu, lam, 1)
    assert list(b1.src.vectors) == [(0, 1), (1, 0)]
    assert b1.to_rows() == [[ONE, qp(lam)]]
    b2 = e_block(mu, lam, 2)
    assert b2[0, b2.src.index((1, 1))] == qp(lam - 1)


def test_f_block_examples():
    assert f_block(mu, lam, 0).entries == {(0, 0): ONE}
    b1 = f_block(mu, lam, 1)
    s = qint(mu + lam)
    assert b1[b1.dst.index((0, 1)), 0] == qp(-mu) * qint(lam) / s
    assert b1[b1.dst.index((1, 0)), 0] == qint(mu) / s


def test_hand_identity_behind_degree_one():
    assert qp(-mu) * qint(lam) + qp(lam) * qint(mu) == qint(mu + lam)


@pytest.mark.parametrize("k", [2, 3])
def test_f_block_numeric(k):
    # closed form of the unfusion coefficients, evaluated directly at a rational point
    from vermajw.qfield import qbinomial
    b = f_block(mu, lam, k)
    for j in range(k + 1):
        val = Fraction(1)
        for i in range(j):
            val *= qnum(mu - i)
        for i in range(k - j):
            val *= qnum(lam - i)
        for i in range(k):
            val /= qnum(mu + lam - i)
        # q^{-(k-j)(mu-j)} with q^mu -> T0[0]
        val *= (T0[0] * Q0 ** -j) ** (j - k) * qbinomial(k, j).evaluate(Q0)
        assert b[b.dst.index((j, k - j)), 0].evaluate(Q0, T0) == val


def test_ef_is_identity():
    assert ef_identity_report(mu, lam, 10) == []


def test_ef_is_identity_with_compound_weights():
    assert ef_identity_report(MU[1] + MU[3] - 2, MU[2] * 2, 5) == []


def test_fe_is_not_identity():
    # F.E is a projection onto a proper summand, so it must differ from Id at degree 1
    fe = f_block(mu, lam, 1) @ e_block(mu, lam, 1)
    assert fe != BlockMatrix.identity(fe.src)


# --- intertwining ----------------------------------------------------------

def test_families_are_intertwiners():
    assert check_intertwiner(e_family(mu, lam, 8)) == []
    assert check_intertwiner(f_family(mu, lam, 8)) == []


def test_fault_injection_is_reported():
    F = f_family(mu, lam, 4)
    blk = F.blocks[2]
    (r, c), v = sorted(blk.entries.items())[0]
    entries = dict(blk.entries)
    entries[r, c] = v * qp(1)
    broken = GradedMap(F.src_factors, F.dst_factors,
                       {**F.blocks, 2: BlockMatrix(blk.src, blk.dst, entries)}, 4)
    viol = check_intertwiner(broken)
    assert viol
    assert {v.degree for v in viol} & {1, 2}
    assert {v.generator for v in viol} <= {"K", "E", "F"}
    assert any(v.generator in ("E", "F") for v in viol)


def test_diagonal_non_scalar_is_not_an_intertwiner():
    fs = (Verma(mu), Verma(lam))
    blocks = {}
    for k in range(3):
        b = graded_basis(fs, k)
        blocks[k] = BlockMatrix(b, b, {(i, i): qp(i) for i in range(len(b))})
    assert check_intertwiner(GradedMap(fs, fs, blocks, 2))


# --- splicing --------------------------------------------------------------

def test_empty_splice_is_unchanged():
    E = e_family(mu, lam, 3)
    for k in range(4):
        assert splice(E, (), k) == E.blocks[k]


def test_splice_example():
    E = e_family(mu, lam, 1)
    b = splice(E, (Verma(MU[3]),), 1)
    col = lambda v: b.column(b.src.index(v))  # noqa: E731
    assert col((0, 0, 1)) == {b.dst.index((0, 1)): ONE}
    assert col((0, 1, 0)) == {b.dst.index((1, 0)): ONE}
    assert col((1, 0, 0)) == {b.dst.index((1, 0)): qp(lam)}


def test_splice_of_identity_is_identity():
    Id = GradedMap.identity((Verma(mu), Verma(lam)), 3)
    S = splice_family(Id, (Verma(MU[3]),))
    assert S == GradedMap.identity(S.src_factors, 3)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 3), st.integers(0, 1))
def test_splice_is_functorial(k, extra):
    E, F = e_family(mu, lam, 3), f_family(mu, lam, 3)
    trailing = (Verma(MU[3]),) + (V1,) * extra
    assert splice(E @ F, trailing, k) == splice(E, trailing, k) @ splice(F, trailing, k)
    assert splice(F @ E, trailing, k) == splice(F, trailing, k) @ splice(E, trailing, k)


def test_embed_on_both_sides():
    E = e_family(mu, lam, 2)
    left, right = (Verma(MU[3]),), (Verma(MU[4]),)
    for k in range(3):
        a = embed(E, left, right, k)
        assert a.src == graded_basis(left + E.src_factors + right, k)


def test_spliced_maps_stay_intertwiners():
    trailing = (Verma(MU[3]),)
    assert check_intertwiner(splice_family(e_family(mu, lam, 4), trailing)) == []
    assert check_intertwiner(splice_family(f_family(mu, lam, 4), trailing)) == []


# --- Temperley-Lieb --------------------------------------------------------

def test_cap_cup_examples():
    e = cap_cup()
    assert e.blocks[0].entries == {} and e.blocks[2].entries == {}
    b1 = e.blocks[1]
    col = b1.column(b1.src.index((1, 0)))
    assert col == {b1.dst.index((0, 1)): ONE, b1.dst.index((1, 0)): -qp(-1)}


def test_cap_cup_is_an_intertwiner():
    assert check_intertwiner(cap_cup()) == []


def _eq(a, b):
    return all(a.blocks[k] == b.blocks[k] for k in range(a.cutoff + 1))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tl_relations(n):
    loop = -(qp(1) + qp(-1))
    es = {i: cap_cup_e(n, i) for i in range(1, n)}
    for i, e in es.items():
        assert _eq(e @ e, e.scale(loop))
        if i + 1 < n:
            f = es[i + 1]
            assert _eq(e @ f @ e, e)
            assert _eq(f @ e @ f, f)
        for j, f in es.items():
            if abs(i - j) > 1:
                assert _eq(e @ f, f @ e)


def test_tl_generator_range():
    with pytest.raises(ValueError):
        cap_cup_e(3, 3)
    with pytest.raises(ValueError):
        cap_cup_e(1, 1)
