"""Jones-Wenzl projectors on V1^{(x) n} and their extension to Verma tensor products."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .intertwiners import (V1, GradedMap, cap_cup_e, e_family, embed, f_family,
                           splice_family)
from .qfield import ONE, PoleError, WeightExpr, qint
from .repspaces import BlockMatrix, Verma, graded_basis, tensor_action


@dataclass(eq=False)
class ProjectorBlocks(GradedMap):
    """Endomorphism blocks plus the recursion that produced them."""

    provenance: str = ""

    def __post_init__(self):
        super().__post_init__()
        if self.src_factors != self.dst_factors:
            raise ValueError("a projector is an endomorphism")

    @property
    def factors(self):
        return self.src_factors


# ---------------------------------------------------------------------------
# classical Jones-Wenzl
# ---------------------------------------------------------------------------


def _extend_right(p: GradedMap, n: int) -> GradedMap:
    """p (x) Id_{V1} on n strands."""
    factors = (V1,) * n
    return GradedMap(factors, factors, {k: embed(p, (), (V1,), k) for k in range(n + 1)}, n)


def jw(n: int) -> ProjectorBlocks:
    """P_1 = Id and P_n = P_{n-1} + [n-1]/[n] P_{n-1} e_{n-1} P_{n-1}."""
    if n < 1:
        raise ValueError("jw needs n >= 1")
    p = GradedMap.identity((V1,), 1)
    trace = "P1=Id"
    for m in range(2, n + 1):
        prev = _extend_right(p, m)
        e = cap_cup_e(m, m - 1)
        p = prev + (prev @ e @ prev).scale(qint(m - 1) / qint(m))
        trace = f"P{m}=P{m-1}+[{m-1}]/[{m}]*P{m-1}*e{m-1}*P{m-1}; " + trace
    return ProjectorBlocks(p.src_factors, p.dst_factors, p.blocks, p.cutoff, provenance=trace)


# ---------------------------------------------------------------------------
# extended projectors
# ---------------------------------------------------------------------------


def _fmt(ws: Sequence[WeightExpr]) -> str:
    return ",".join(str(w) for w in ws)


def extended_jw(weights: Sequence[WeightExpr], cutoff: int) -> ProjectorBlocks:
    """P_{mu1,...,mun} on degrees 0..cutoff.

    P_{mu1,mu2} = F E and P_{mu1,...,mun} = F' P_{mu1+mu2,mu3,...} E', where
    E', F' are the fusion maps of the first two factors tensored with the
    identity on the rest.
    """
    weights = tuple(weights)
    if len(weights) < 2:
        raise ValueError("extended_jw needs at least two weights")
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    mu, lam, rest = weights[0], weights[1], weights[2:]
    E = e_family(mu, lam, cutoff)
    F = f_family(mu, lam, cutoff)
    if not rest:
        P = F @ E
        return ProjectorBlocks(P.src_factors, P.dst_factors, P.blocks, cutoff,
                               provenance=f"F({_fmt(weights)}).E({_fmt(weights)})")
    trailing = tuple(Verma(w) for w in rest)
    inner = extended_jw((mu + lam,) + rest, cutoff)
    Es = splice_family(E, trailing)
    Fs = splice_family(F, trailing)
    blocks = {k: Fs.blocks[k] @ inner.blocks[k] @ Es.blocks[k] for k in range(cutoff + 1)}
    head = f"{mu},{lam};{_fmt(rest)}"
    return ProjectorBlocks(Es.src_factors, Es.src_factors, blocks, cutoff,
                           provenance=f"F({head}).[{inner.provenance}].E({head})")


class IdempotenceViolation(NamedTuple):
    degree: int
    row: int
    col: int


def verify_idempotent(P: GradedMap) -> list[IdempotenceViolation]:
    """First entry per degree where P.P differs from P; empty means idempotent."""
    out = []
    for k in range(P.cutoff + 1):
        b = P.blocks[k]
        diff = (b @ b).differences(b)
        if diff:
            out.append(IdempotenceViolation(k, *diff[0]))
    return out


def trace_report(P: GradedMap) -> list[int]:
    """Degrees whose block does not have trace exactly 1."""
    return [k for k in range(P.cutoff + 1) if P.blocks[k].trace() != ONE]


# ---------------------------------------------------------------------------
# independent derivation of the unfusion map
# ---------------------------------------------------------------------------


def f_oracle(mu: WeightExpr, lam: WeightExpr, cutoff: int) -> GradedMap:
    """Unfusion map built only from the module actions.

    G(v_0) = v_{0,0} and G(v_{k+1}) = F.G(v_k) / [mu+lam-k], since
    F v_k = [mu+lam-k] v_{k+1} in M(mu+lam) and G must commute with F.
    """
    src = (Verma(mu + lam),)
    dst = (Verma(mu), Verma(lam))
    b0 = BlockMatrix(graded_basis(src, 0), graded_basis(dst, 0), {(0, 0): ONE})
    blocks = {0: b0}
    for k in range(cutoff):
        pushed = tensor_action("F", dst, k) @ blocks[k]
        inv = ONE / qint(mu + lam - k)
        blocks[k + 1] = BlockMatrix(graded_basis(src, k + 1), graded_basis(dst, k + 1),
                                    {rc: v * inv for rc, v in pushed.entries.items()})
    return GradedMap(src, dst, blocks, cutoff)


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------


def specialize_map(P: GradedMap, assignment: Mapping[int, int]) -> GradedMap:
    """Substitute mu_j -> assignment[j] in every entry and in the factor weights."""
    def fac(fs):
        return tuple(Verma(f.weight.substitute(assignment)) if isinstance(f, Verma) else f for f in fs)

    src, dst = fac(P.src_factors), fac(P.dst_factors)
    blocks = {}
    for k, b in P.blocks.items():
        if k > P.cutoff:
            continue
        entries = {}
        for rc, v in b.entries.items():
            try:
                entries[rc] = v.specialize(assignment)
            except PoleError as exc:
                exc.location = (k, *rc)
                exc.args = (f"degree {k}, entry {rc}: {exc.args[0]}",)
                raise
        blocks[k] = BlockMatrix(graded_basis(src, k), graded_basis(dst, k), entries)
    if isinstance(P, ProjectorBlocks):
        return ProjectorBlocks(src, dst, blocks, P.cutoff, provenance=P.provenance)
    return GradedMap(src, dst, blocks, P.cutoff)


def rank_one_ok(P: GradedMap) -> bool:
    return not verify_idempotent(P) and not trace_report(P)
