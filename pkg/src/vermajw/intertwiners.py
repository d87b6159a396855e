"""Fusion maps between M(mu) (x) M(lambda) and M(mu+lambda), splicing, and TL generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .qfield import ONE, RationalFn, WeightExpr, qbinomial, qint_num
from .repspaces import (BlockMatrix, FiniteIrrep, ModuleDesc, Verma, graded_basis,
                        tensor_action)


@dataclass
class GradedMap:
    """A degree-preserving linear map, stored as one block per degree 0..cutoff."""

    src_factors: tuple[ModuleDesc, ...]
    dst_factors: tuple[ModuleDesc, ...]
    blocks: dict[int, BlockMatrix]
    cutoff: int

    def __post_init__(self):
        self.src_factors = tuple(self.src_factors)
        self.dst_factors = tuple(self.dst_factors)
        for k in range(self.cutoff + 1):
            if k not in self.blocks:
                raise ValueError(f"missing block for degree {k}")
            b = self.blocks[k]
            if b.src != graded_basis(self.src_factors, k) or b.dst != graded_basis(self.dst_factors, k):
                raise ValueError(f"block {k} does not match the declared factors")

    def __getitem__(self, k: int) -> BlockMatrix:
        return self.blocks[k]

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        if self.src_factors != other.dst_factors:
            raise ValueError("factor lists do not compose")
        cut = min(self.cutoff, other.cutoff)
        return GradedMap(other.src_factors, self.dst_factors,
                         {k: self.blocks[k] @ other.blocks[k] for k in range(cut + 1)}, cut)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        cut = min(self.cutoff, other.cutoff)
        return GradedMap(self.src_factors, self.dst_factors,
                         {k: self.blocks[k] + other.blocks[k] for k in range(cut + 1)}, cut)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        cut = min(self.cutoff, other.cutoff)
        return GradedMap(self.src_factors, self.dst_factors,
                         {k: self.blocks[k] - other.blocks[k] for k in range(cut + 1)}, cut)

    def scale(self, x) -> "GradedMap":
        return GradedMap(self.src_factors, self.dst_factors,
                         {k: b.scale(x) for k, b in self.blocks.items()}, self.cutoff)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.src_factors == other.src_factors and self.dst_factors == other.dst_factors
                and self.cutoff == other.cutoff
                and all(self.blocks[k] == other.blocks[k] for k in range(self.cutoff + 1)))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def identity(cls, factors: Sequence[ModuleDesc], cutoff: int) -> "GradedMap":
        factors = tuple(factors)
        return cls(factors, factors,
                   {k: BlockMatrix.identity(graded_basis(factors, k)) for k in range(cutoff + 1)},
                   cutoff)


IntertwinerBlocks = GradedMap


# ---------------------------------------------------------------------------
# fusion and unfusion
# ---------------------------------------------------------------------------


def e_block(mu: WeightExpr, lam: WeightExpr, k: int) -> BlockMatrix:
    """Degree-k block of M(mu) (x) M(lam) -> M(mu+lam): v_{i,j} -> q^{i(lam-j)} v_{i+j}."""
    src = graded_basis((Verma(mu), Verma(lam)), k)
    dst = graded_basis((Verma(mu + lam),), k)
    entries = {}
    for col, (i, j) in enumerate(src.vectors):
        entries[0, col] = RationalFn.q_pow(i * lam - i * j)
    return BlockMatrix(src, dst, entries)


def f_block(mu: WeightExpr, lam: WeightExpr, k: int) -> BlockMatrix:
    """Degree-k block of the unfusion map M(mu+lam) -> M(mu) (x) M(lam).

    v_k goes to the sum over j of
    q^{-(k-j)(mu-j)} [k j] prod_{i<j}[mu-i] prod_{i<k-j}[lam-i] / prod_{i<k}[mu+lam-i]
    times v_{j,k-j}. Every quantum number is (q^w - q^-w)/(q - q^-1); the
    k factors of (q - q^-1) above and below cancel, so they are never formed.
    """
    src = graded_basis((Verma(mu + lam),), k)
    dst = graded_basis((Verma(mu), Verma(lam)), k)
    inv_den = ONE
    for i in range(k):
        inv_den = inv_den / RationalFn(qint_num(mu + lam - i))
    mu_prod = [ONE]
    lam_prod = [ONE]
    for i in range(k):
        mu_prod.append(mu_prod[-1] * RationalFn(qint_num(mu - i)))
        lam_prod.append(lam_prod[-1] * RationalFn(qint_num(lam - i)))
    entries = {}
    for j in range(k + 1):
        coeff = RationalFn.q_pow(-(k - j) * (mu - j)) * qbinomial(k, j)
        entries[dst.index((j, k - j)), 0] = coeff * mu_prod[j] * lam_prod[k - j] * inv_den
    return BlockMatrix(src, dst, entries)


def e_family(mu: WeightExpr, lam: WeightExpr, cutoff: int) -> GradedMap:
    return GradedMap((Verma(mu), Verma(lam)), (Verma(mu + lam),),
                     {k: e_block(mu, lam, k) for k in range(cutoff + 1)}, cutoff)


def f_family(mu: WeightExpr, lam: WeightExpr, cutoff: int) -> GradedMap:
    return GradedMap((Verma(mu + lam),), (Verma(mu), Verma(lam)),
                     {k: f_block(mu, lam, k) for k in range(cutoff + 1)}, cutoff)


# ---------------------------------------------------------------------------
# tensoring with identities
# ---------------------------------------------------------------------------


def embed(base: GradedMap, left: Sequence[ModuleDesc], right: Sequence[ModuleDesc],
          k: int) -> BlockMatrix:
    """Degree-k block of Id(left) (x) base (x) Id(right)."""
    left, right = tuple(left), tuple(right)
    nl, nb = len(left), len(base.src_factors)
    src = graded_basis(left + base.src_factors + right, k)
    dst = graded_basis(left + base.dst_factors + right, k)
    cols_by_degree: dict[int, dict[int, list]] = {}
    entries = {}
    for col, v in enumerate(src.vectors):
        head, mid, tail = v[:nl], v[nl:nl + nb], v[nl + nb:]
        d = sum(mid)
        if d not in base.blocks:
            raise KeyError(f"base map has no block for degree {d}")
        block = base.blocks[d]
        if d not in cols_by_degree:
            cols_by_degree[d] = block.columns()
        for r, val in cols_by_degree[d].get(block.src.index(mid), ()):
            row = dst.index(head + block.dst.vectors[r] + tail)
            entries[row, col] = val
    return BlockMatrix._trusted(src, dst, entries)


def splice(base: GradedMap, trailing: Sequence[ModuleDesc], k: int) -> BlockMatrix:
    """Degree-k block of base (x) Id on the trailing factors."""
    return embed(base, (), trailing, k)


def splice_family(base: GradedMap, trailing: Sequence[ModuleDesc],
                  cutoff: int | None = None) -> GradedMap:
    trailing = tuple(trailing)
    cutoff = base.cutoff if cutoff is None else cutoff
    return GradedMap(base.src_factors + trailing, base.dst_factors + trailing,
                     {k: splice(base, trailing, k) for k in range(cutoff + 1)}, cutoff)


# ---------------------------------------------------------------------------
# Temperley-Lieb generators on V1^{(x) n}
# ---------------------------------------------------------------------------

V1 = FiniteIrrep(1)


def cap_cup() -> GradedMap:
    """cap . cup on V1 (x) V1.

    cup(v01) = -q, cup(v10) = 1, cup(v00) = cup(v11) = 0 and
    cap(1) = v01 - q^-1 v10; only degree 1 is nonzero.
    """
    factors = (V1, V1)
    blocks = {}
    for k in range(3):
        b = graded_basis(factors, k)
        blocks[k] = BlockMatrix(b, b)
    b1 = graded_basis(factors, 1)
    cup = {b1.index((0, 1)): RationalFn.q_pow(1) * -1, b1.index((1, 0)): ONE}
    cap = {b1.index((0, 1)): ONE, b1.index((1, 0)): RationalFn.q_pow(-1) * -1}
    blocks[1] = BlockMatrix(b1, b1, {(r, c): cap[r] * cup[c] for r in cap for c in cup})
    return GradedMap(factors, factors, blocks, 2)


def cap_cup_e(n: int, i: int) -> GradedMap:
    """The generator e_i = Id^{i-1} (x) cap.cup (x) Id^{n-i-1} of TL_n."""
    if n < 2 or not 1 <= i <= n - 1:
        raise ValueError(f"e_{i} is not defined on {n} strands")
    base = cap_cup()
    left = (V1,) * (i - 1)
    right = (V1,) * (n - i - 1)
    factors = (V1,) * n
    return GradedMap(factors, factors, {k: embed(base, left, right, k) for k in range(n + 1)}, n)


# ---------------------------------------------------------------------------
# intertwiner check
# ---------------------------------------------------------------------------


class Violation(NamedTuple):
    generator: str
    degree: int
    row: int
    col: int


def check_intertwiner(phi: GradedMap, cutoff: int | None = None) -> list[Violation]:
    """Compare X.phi with phi.X for X = K (k <= D), E (1 <= k <= D), F (k <= D-1)."""
    D = phi.cutoff if cutoff is None else min(cutoff, phi.cutoff)
    src, dst = phi.src_factors, phi.dst_factors
    out: list[Violation] = []
    for k in range(D + 1):
        lhs = tensor_action("K", dst, k) @ phi.blocks[k]
        rhs = phi.blocks[k] @ tensor_action("K", src, k)
        out.extend(Violation("K", k, r, c) for r, c in lhs.differences(rhs))
    for k in range(1, D + 1):
        lhs = tensor_action("E", dst, k) @ phi.blocks[k]
        rhs = phi.blocks[k - 1] @ tensor_action("E", src, k)
        out.extend(Violation("E", k, r, c) for r, c in lhs.differences(rhs))
    for k in range(D):
        lhs = tensor_action("F", dst, k) @ phi.blocks[k]
        rhs = phi.blocks[k + 1] @ tensor_action("F", src, k)
        out.extend(Violation("F", k, r, c) for r, c in lhs.differences(rhs))
    return out


def ef_identity_report(mu: WeightExpr, lam: WeightExpr, cutoff: int) -> list[int]:
    """Degrees k <= cutoff at which E_{mu,lam} F_{mu,lam} is not the identity."""
    bad = []
    for k in range(cutoff + 1):
        prod = e_block(mu, lam, k) @ f_block(mu, lam, k)
        if prod != BlockMatrix.identity(prod.src):
            bad.append(k)
    return bad


def weights_of(factors: Iterable[ModuleDesc]) -> list[WeightExpr]:
    return [f.weight for f in factors]
