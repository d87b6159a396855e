"""Graded bases, sparse blocks and U_q(sl2) actions on truncated modules."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence, Union

from .qfield import ONE, ZERO, RationalFn, WeightExpr, qint, rsum

GENERATORS = ("K", "Kinv", "E", "F")

# degree shift of each generator
_SHIFT = {"K": 0, "Kinv": 0, "E": -1, "F": 1, "1": 0}


@dataclass(frozen=True)
class FiniteIrrep:
    """V_k, spanned by v_0, ..., v_k."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("V_k needs k >= 0")

    @property
    def dim(self) -> int:
        return self.k + 1

    @property
    def weight(self) -> WeightExpr:
        return WeightExpr.const(self.k)

    def __str__(self) -> str:
        return f"V{self.k}"


@dataclass(frozen=True)
class Verma:
    """M(w), spanned by v_0, v_1, ...; always used through a degree cutoff."""

    weight: WeightExpr

    @property
    def dim(self) -> None:
        return None

    def __str__(self) -> str:
        return f"M({self.weight})"


ModuleDesc = Union[FiniteIrrep, Verma]


def verma_factors(weights: Sequence[WeightExpr]) -> tuple[Verma, ...]:
    return tuple(Verma(w) for w in weights)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


def _compositions(k: int, caps: Sequence[int | None]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if k == 0:
            yield ()
        return
    if len(caps) == 1:
        if caps[0] is None or k <= caps[0]:
            yield (k,)
        return
    top = k if caps[0] is None else min(k, caps[0])
    for i in range(top + 1):
        for rest in _compositions(k - i, caps[1:]):
            yield (i,) + rest


class GradedBasis:
    """Degree-k weight space of a tensor product, basis in lex order.

    A negative degree denotes the zero space (no vectors); it appears as the
    target of E on degree 0.
    """

    __slots__ = ("factors", "degree", "vectors", "_index")

    def __init__(self, factors: Sequence[ModuleDesc], degree: int):
        self.factors = tuple(factors)
        self.degree = degree
        caps = [f.k if isinstance(f, FiniteIrrep) else None for f in self.factors]
        self.vectors = tuple(_compositions(degree, caps)) if degree >= 0 else ()
        self._index = {v: i for i, v in enumerate(self.vectors)}

    def index(self, v: tuple[int, ...]) -> int:
        return self._index[v]

    def get(self, v: tuple[int, ...]) -> int | None:
        return self._index.get(v)

    def __len__(self) -> int:
        return len(self.vectors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedBasis):
            return NotImplemented
        return self.factors == other.factors and self.degree == other.degree

    def __hash__(self) -> int:
        return hash((self.factors, self.degree))

    def weight_exponent(self) -> WeightExpr:
        """Exponent of the K-eigenvalue shared by every vector: sum(w_j) - 2k."""
        total = WeightExpr.const(0)
        for f in self.factors:
            total = total + f.weight
        return total - 2 * self.degree

    def __repr__(self) -> str:
        return f"GradedBasis([{', '.join(map(str, self.factors))}], {self.degree})"


@lru_cache(maxsize=4096)
def _cached_basis(factors: tuple[ModuleDesc, ...], k: int) -> GradedBasis:
    return GradedBasis(factors, k)


def graded_basis(factors: Sequence[ModuleDesc], k: int) -> GradedBasis:
    return _cached_basis(tuple(factors), k)


# ---------------------------------------------------------------------------
# sparse blocks
# ---------------------------------------------------------------------------


class BlockMatrix:
    """Sparse matrix over Q(q, t) from ``src`` to ``dst``; absent entries are zero."""

    __slots__ = ("src", "dst", "entries")

    def __init__(self, src: GradedBasis, dst: GradedBasis,
                 entries: Mapping[tuple[int, int], RationalFn] | None = None):
        self.src = src
        self.dst = dst
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < len(dst) and 0 <= c < len(src)):
                raise IndexError(f"entry ({r}, {c}) outside a {len(dst)}x{len(src)} block")
            if not isinstance(v, RationalFn):
                v = RationalFn._coerce(v)
            if not v.is_zero():
                clean[r, c] = v
        self.entries = clean

    @classmethod
    def identity(cls, basis: GradedBasis) -> "BlockMatrix":
        return cls(basis, basis, {(i, i): ONE for i in range(len(basis))})

    @classmethod
    def zero(cls, src: GradedBasis, dst: GradedBasis) -> "BlockMatrix":
        return cls(src, dst)

    @classmethod
    def scalar(cls, basis: GradedBasis, x: RationalFn) -> "BlockMatrix":
        return cls(basis, basis, {(i, i): x for i in range(len(basis))})

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.dst), len(self.src)

    def __getitem__(self, rc: tuple[int, int]) -> RationalFn:
        return self.entries.get(rc, ZERO)

    def column(self, c: int) -> dict[int, RationalFn]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self) -> dict[int, list[tuple[int, RationalFn]]]:
        cols: dict[int, list[tuple[int, RationalFn]]] = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, []).append((r, v))
        return cols

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        """Composition self . other (apply other first)."""
        if other.dst != self.src:
            raise ValueError(f"cannot compose {self.src!r} with {other.dst!r}")
        cols = self.columns()
        acc: dict[tuple[int, int], list[RationalFn]] = {}
        for (m, j), b in other.entries.items():
            for i, a in cols.get(m, ()):
                acc.setdefault((i, j), []).append(a * b)
        out = {}
        for rc, terms in acc.items():
            v = terms[0] if len(terms) == 1 else rsum(terms)
            if not v.is_zero():
                out[rc] = v
        return BlockMatrix._trusted(other.src, self.dst, out)

    @classmethod
    def _trusted(cls, src, dst, entries) -> "BlockMatrix":
        m = object.__new__(cls)
        m.src, m.dst, m.entries = src, dst, entries
        return m

    def _check_same(self, other: "BlockMatrix"):
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("blocks live on different bases")

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        self._check_same(other)
        out = dict(self.entries)
        for rc, v in other.entries.items():
            s = out[rc] + v if rc in out else v
            if s.is_zero():
                out.pop(rc, None)
            else:
                out[rc] = s
        return BlockMatrix._trusted(self.src, self.dst, out)

    def __neg__(self) -> "BlockMatrix":
        return BlockMatrix._trusted(self.src, self.dst, {rc: -v for rc, v in self.entries.items()})

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return self + (-other)

    def scale(self, x) -> "BlockMatrix":
        x = RationalFn._coerce(x)
        if x.is_zero():
            return BlockMatrix._trusted(self.src, self.dst, {})
        return BlockMatrix._trusted(self.src, self.dst, {rc: v * x for rc, v in self.entries.items()})

    def map_entries(self, fn: Callable[[RationalFn], RationalFn]) -> "BlockMatrix":
        return BlockMatrix(self.src, self.dst, {rc: fn(v) for rc, v in self.entries.items()})

    def trace(self) -> RationalFn:
        if len(self.src) != len(self.dst):
            raise ValueError("trace of a non-square block")
        return rsum(v for (r, c), v in self.entries.items() if r == c)

    def differences(self, other: "BlockMatrix") -> list[tuple[int, int]]:
        """Coordinates (row, col) where the two blocks disagree, sorted."""
        self._check_same(other)
        bad = []
        for rc in sorted(set(self.entries) | set(other.entries)):
            a = self.entries.get(rc)
            b = other.entries.get(rc)
            if a is None or b is None or a != b:
                bad.append(rc)
        return bad

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        if self.src != other.src or self.dst != other.dst:
            return False
        if self.entries.keys() != other.entries.keys():
            return False
        return all(v == other.entries[rc] for rc, v in self.entries.items())

    __hash__ = None  # type: ignore[assignment]

    def to_rows(self) -> list[list[RationalFn]]:
        rows = [[ZERO] * len(self.src) for _ in range(len(self.dst))]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def __repr__(self) -> str:
        return f"BlockMatrix({len(self.dst)}x{len(self.src)}, {len(self.entries)} nonzeros)"


# ---------------------------------------------------------------------------
# single-factor actions
# ---------------------------------------------------------------------------


def _factor_action(gen: str, f: ModuleDesc, i: int) -> tuple[int, RationalFn] | None:
    """gen . v_i = coeff * v_j for one factor; None when the result is zero."""
    if gen == "1":
        return i, ONE
    w = f.weight
    if gen == "K":
        return i, RationalFn.q_pow(w - 2 * i)
    if gen == "Kinv":
        return i, RationalFn.q_pow(2 * i - w)
    if gen == "E":
        if i == 0:
            return None
        return i - 1, qint(i)
    if gen == "F":
        if isinstance(f, FiniteIrrep) and i >= f.k:
            return None
        c = qint(w - i)
        if c.is_zero():
            return None
        return i + 1, c
    raise ValueError(f"unknown generator {gen!r}")


def verma_action(gen: str, w: WeightExpr, k: int) -> BlockMatrix:
    """Action of ``gen`` on the degree-k space of M(w) (a 1x1 or 0-row block)."""
    return tensor_action(gen, (Verma(w),), k)


def irrep_action(gen: str, k_dim: int) -> dict[int, BlockMatrix]:
    """Action of ``gen`` on V_k, one block per basis vector v_i."""
    return {i: tensor_action(gen, (FiniteIrrep(k_dim),), i) for i in range(k_dim + 1)}


# ---------------------------------------------------------------------------
# tensor products via the coproduct
# ---------------------------------------------------------------------------

Bracketing = Union[int, tuple]


def left_bracketing(n: int) -> Bracketing:
    tree: Bracketing = 0
    for i in range(1, n):
        tree = (tree, i)
    return tree


def right_bracketing(n: int) -> Bracketing:
    tree: Bracketing = n - 1
    for i in range(n - 2, -1, -1):
        tree = (i, tree)
    return tree


def _leaves(tree: Bracketing) -> list[int]:
    if isinstance(tree, int):
        return [tree]
    out = []
    for t in tree:
        out.extend(_leaves(t))
    return out


def coproduct_words(gen: str, tree: Bracketing) -> list[dict[int, str]]:
    """Expand the coproduct of ``gen`` down a bracketing tree.

    Each word maps leaf index to the generator acting there; leaves not named
    carry the identity.
    """
    if isinstance(tree, int):
        return [{tree: gen}]
    left, right = tree
    if gen in ("K", "Kinv"):
        words = [{}]
        for sub in (left, right):
            words = [{**a, **b} for a in words for b in coproduct_words(gen, sub)]
        return words
    left_leaves, right_leaves = _leaves(left), _leaves(right)
    if gen == "F":
        # F -> F (x) 1 + K^-1 (x) F
        kinv = {i: "Kinv" for i in left_leaves}
        return coproduct_words("F", left) + [{**kinv, **w} for w in coproduct_words("F", right)]
    if gen == "E":
        # E -> E (x) K + 1 (x) E
        kk = {i: "K" for i in right_leaves}
        return [{**w, **kk} for w in coproduct_words("E", left)] + coproduct_words("E", right)
    raise ValueError(f"unknown generator {gen!r}")


def tensor_action(gen: str, factors: Sequence[ModuleDesc], k: int,
                  bracketing: Bracketing | None = None) -> BlockMatrix:
    """Action of ``gen`` on the degree-k space of the tensor product of ``factors``.

    The n-fold coproduct is expanded along ``bracketing`` (default
    ((M1 (x) M2) (x) ...) (x) Mn).
    """
    factors = tuple(factors)
    n = len(factors)
    if bracketing is None:
        bracketing = left_bracketing(n)
    src = graded_basis(factors, k)
    dst = graded_basis(factors, k + _SHIFT[gen])
    words = coproduct_words(gen, bracketing)
    acc: dict[tuple[int, int], list[RationalFn]] = {}
    for col, v in enumerate(src.vectors):
        for word in words:
            coeff = ONE
            target = list(v)
            for pos, g in word.items():
                res = _factor_action(g, factors[pos], v[pos])
                if res is None:
                    break
                target[pos], c = res
                coeff = coeff * c
            else:
                row = dst.get(tuple(target))
                if row is not None:
                    acc.setdefault((row, col), []).append(coeff)
    entries = {rc: rsum(vals) for rc, vals in acc.items()}
    return BlockMatrix(src, dst, entries)


class RelationViolation(NamedTuple):
    relation: str
    degree: int
    row: int
    col: int


def _check(name, k, lhs: BlockMatrix, rhs: BlockMatrix, out: list):
    out.extend(RelationViolation(name, k, r, c) for r, c in lhs.differences(rhs))


def relation_violations(factors: Sequence[ModuleDesc], cutoff: int) -> list[RelationViolation]:
    """Check the defining relations of U_q(sl2) on the truncation to degrees <= cutoff.

    Each relation is tested at every source degree k for which all the blocks it
    composes exist: KE = q^2 EK for 1 <= k <= D, KF = q^-2 FK and
    EF - FE = (K - K^-1)/(q - q^-1) for k <= D-1, K K^-1 = 1 for k <= D.
    """
    factors = tuple(factors)
    act = lambda g, k: tensor_action(g, factors, k)  # noqa: E731
    q2, qm2 = RationalFn.q_pow(2), RationalFn.q_pow(-2)
    inv_qdiff = ONE / (RationalFn.q_pow(1) - RationalFn.q_pow(-1))
    out: list[RelationViolation] = []
    for k in range(cutoff + 1):
        _check("KKinv=1", k, act("K", k) @ act("Kinv", k), BlockMatrix.identity(graded_basis(factors, k)), out)
    for k in range(1, cutoff + 1):
        _check("KE=q^2EK", k, act("K", k - 1) @ act("E", k), (act("E", k) @ act("K", k)).scale(q2), out)
    for k in range(cutoff):
        _check("KF=q^-2FK", k, act("K", k + 1) @ act("F", k), (act("F", k) @ act("K", k)).scale(qm2), out)
        ef = act("E", k + 1) @ act("F", k)
        if k > 0:
            ef = ef - act("F", k - 1) @ act("E", k)
        rhs = (act("K", k) - act("Kinv", k)).scale(inv_qdiff)
        _check("EF-FE=(K-Kinv)/(q-q^-1)", k, ef, rhs, out)
    return out


def coassociativity_violations(factors: Sequence[ModuleDesc], cutoff: int) -> list[RelationViolation]:
    """Compare left- and right-bracketed coproducts for every generator and k <= cutoff."""
    factors = tuple(factors)
    n = len(factors)
    out: list[RelationViolation] = []
    for gen in GENERATORS:
        for k in range(cutoff + 1):
            lhs = tensor_action(gen, factors, k, left_bracketing(n))
            rhs = tensor_action(gen, factors, k, right_bracketing(n))
            _check(f"coassoc:{gen}", k, lhs, rhs, out)
    return out
