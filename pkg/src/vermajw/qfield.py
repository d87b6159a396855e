"""Exact arithmetic in Q(q, t1, ..., tn), where tj stands for q**mu_j.

Monomials are packed into a single Python int: slot 0 holds the exponent of
``q`` and slot j the exponent of ``tj``, each a signed digit in base 2**32.
Multiplying monomials is then integer addition, and integer order on keys is
the lexicographic order on (e_n, ..., e_1, e_q), which is a group order on
Z^(n+1) and is what exact division relies on.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Union

_BITS = 32
_BASE = 1 << _BITS
_HALF = 1 << (_BITS - 1)

Coeff = Union[int, Fraction]


class QFieldError(ArithmeticError):
    """Base class for errors raised by exact field arithmetic."""


class DivisionByZero(QFieldError, ZeroDivisionError):
    pass


class PoleError(QFieldError):
    """A denominator vanished identically under specialization."""

    def __init__(self, denominator: "LaurentPoly", assignment: Mapping[int, int],
                 factor: "LaurentPoly | None" = None):
        self.denominator = denominator
        self.factor = factor if factor is not None else denominator
        self.assignment = dict(assignment)
        at = ", ".join(f"mu{j}={c}" for j, c in sorted(self.assignment.items()))
        super().__init__(f"pole at specialization ({at}): denominator factor {self.factor} "
                         f"vanishes (denominator {denominator})")


# ---------------------------------------------------------------------------
# monomial keys
# ---------------------------------------------------------------------------


def encode(q_exp: int, t_exps: Iterable[int] = ()) -> int:
    key = 0
    for e in reversed(tuple(t_exps)):
        if not -_HALF < e < _HALF:
            raise OverflowError(f"exponent {e} out of range")
        key = key * _BASE + e
    if not -_HALF < q_exp < _HALF:
        raise OverflowError(f"exponent {q_exp} out of range")
    return key * _BASE + q_exp


def decode(key: int) -> tuple[int, ...]:
    """Exponent vector (e_q, e_1, ..., e_m) with trailing zeros dropped."""
    out = []
    while key:
        r = key & (_BASE - 1)
        if r >= _HALF:
            r -= _BASE
        out.append(r)
        key = (key - r) >> _BITS
    return tuple(out) or (0,)


def _is_q_only(key: int) -> bool:
    return -_HALF < key < _HALF


class LaurentMono(NamedTuple):
    """q**q_exp * prod(tj**t_exps[j-1])."""

    q_exp: int
    t_exps: tuple[int, ...] = ()

    @property
    def key(self) -> int:
        return encode(self.q_exp, self.t_exps)

    @classmethod
    def from_key(cls, key: int, nvars: int | None = None) -> "LaurentMono":
        exps = decode(key)
        t = exps[1:]
        if nvars is not None:
            if len(t) > nvars:
                raise ValueError(f"monomial uses t{len(t)} but only {nvars} symbols in scope")
            t = t + (0,) * (nvars - len(t))
        return cls(exps[0], t)

    def __mul__(self, other):  # type: ignore[override]
        if not isinstance(other, LaurentMono):
            return NotImplemented
        return LaurentMono.from_key(self.key + other.key)

    def __str__(self) -> str:
        return _mono_str(self.key)


def _mono_str(key: int) -> str:
    exps = decode(key)
    parts = []
    for j, e in enumerate(exps[1:], start=1):
        if e:
            parts.append(f"t{j}" if e == 1 else f"t{j}^{e}")
    if exps[0]:
        parts.append("q" if exps[0] == 1 else f"q^{exps[0]}")
    return "*".join(parts)


def _order_key(key: int) -> tuple:
    exps = decode(key)
    return (exps[0],) + exps[1:]


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


class WeightExpr:
    """Formal weight sum(a_j * mu_j) + b with integer a_j and b.

    Symbols are numbered from 1; ``WeightExpr.symbol(2)`` is mu2.
    """

    __slots__ = ("_coeffs", "offset")

    def __init__(self, sym_coeffs: Mapping[int, int] | None = None, offset: int = 0):
        coeffs = {}
        for j, a in (sym_coeffs or {}).items():
            if j < 1:
                raise ValueError("weight symbols are numbered from 1")
            if a:
                coeffs[int(j)] = int(a)
        self._coeffs = tuple(sorted(coeffs.items()))
        self.offset = int(offset)

    @classmethod
    def symbol(cls, j: int) -> "WeightExpr":
        return cls({j: 1})

    @classmethod
    def const(cls, b: int) -> "WeightExpr":
        return cls({}, b)

    @property
    def sym_coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    @property
    def is_integer(self) -> bool:
        return not self._coeffs

    @property
    def nvars(self) -> int:
        return self._coeffs[-1][0] if self._coeffs else 0

    def key(self) -> int:
        """Monomial key of q**self, i.e. q**b * prod(tj**a_j)."""
        return sum(a << (_BITS * j) for j, a in self._coeffs) + self.offset

    def _combine(self, other, sign: int) -> "WeightExpr":
        if isinstance(other, int):
            other = WeightExpr.const(other)
        if not isinstance(other, WeightExpr):
            return NotImplemented
        c = dict(self._coeffs)
        for j, a in other._coeffs:
            c[j] = c.get(j, 0) + sign * a
        return WeightExpr(c, self.offset + sign * other.offset)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self) -> "WeightExpr":
        return WeightExpr({j: -a for j, a in self._coeffs}, -self.offset)

    def __mul__(self, n: int) -> "WeightExpr":
        if not isinstance(n, int):
            return NotImplemented
        return WeightExpr({j: n * a for j, a in self._coeffs}, n * self.offset)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = WeightExpr.const(other)
        if not isinstance(other, WeightExpr):
            return NotImplemented
        return self._coeffs == other._coeffs and self.offset == other.offset

    def __hash__(self) -> int:
        return hash((self._coeffs, self.offset))

    def substitute(self, assignment: Mapping[int, int]) -> "WeightExpr":
        """Replace mu_j by assignment[j]; unassigned symbols stay symbolic."""
        kept = {j: a for j, a in self._coeffs if j not in assignment}
        return WeightExpr(kept, self.offset + sum(a * assignment[j] for j, a in self._coeffs
                                                  if j in assignment))

    def __str__(self) -> str:
        parts = []
        for j, a in self._coeffs:
            sym = f"mu{j}"
            if a == 1:
                parts.append(f"+{sym}")
            elif a == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{a:+d}*{sym}")
        if self.offset or not parts:
            parts.append(f"{self.offset:+d}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self) -> str:
        return f"WeightExpr({self})"


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


def _norm_coeff(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _cdiv(a: Coeff, b: Coeff) -> Coeff:
    if type(a) is int and type(b) is int and a % b == 0:
        return a // b
    return _norm_coeff(Fraction(a) / b)


class LaurentPoly:
    """Laurent polynomial in q, t1, ..., tn with rational coefficients.

    Immutable. ``terms`` maps LaurentMono to a nonzero coefficient; internally
    the map is keyed by packed monomial ints.
    """

    __slots__ = ("_t", "_h", "_qo")

    def __init__(self, terms: Mapping[LaurentMono | int, Coeff] | None = None):
        t: dict[int, Coeff] = {}
        for m, c in (terms or {}).items():
            k = m if isinstance(m, int) else LaurentMono(*m).key
            c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
            if c:
                t[k] = _norm_coeff(t.get(k, 0) + c)
                if not t[k]:
                    del t[k]
        self._t = t
        self._h = None
        self._qo = None

    @classmethod
    def _wrap(cls, t: dict[int, Coeff]) -> "LaurentPoly":
        p = object.__new__(cls)
        p._t = t
        p._h = None
        p._qo = None
        return p

    @classmethod
    def const(cls, c: Coeff) -> "LaurentPoly":
        c = _norm_coeff(c)
        return cls._wrap({0: c} if c else {})

    @classmethod
    def mono(cls, key: int, c: Coeff = 1) -> "LaurentPoly":
        return cls._wrap({key: _norm_coeff(c)} if c else {})

    @classmethod
    def q(cls, e: int = 1) -> "LaurentPoly":
        return cls.mono(e)

    @classmethod
    def t(cls, j: int, e: int = 1) -> "LaurentPoly":
        return cls.mono(e << (_BITS * j))

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[LaurentMono, Coeff]:
        return {LaurentMono.from_key(k): c for k, c in self._t.items()}

    def items(self):
        return self._t.items()

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_one(self) -> bool:
        return len(self._t) == 1 and self._t.get(0) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_q_only(self) -> bool:
        if self._qo is None:
            self._qo = all(-_HALF < k < _HALF for k in self._t)
        return self._qo

    @property
    def nvars(self) -> int:
        return max((len(decode(k)) - 1 for k in self._t), default=0)

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._t.get(0, 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Coeff]]:
        """Terms as (exponent vector, coeff), ascending lexicographic on (q_exp, t_exps)."""
        rows = [(decode(k), c) for k, c in self._t.items()]
        rows.sort(key=lambda r: r[0] + (0,) * (64 - len(r[0])))
        return rows

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({k: -c for k, c in self._t.items()})

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(self._t) < len(other._t):
            self, other = other, self
        r = dict(self._t)
        for k, c in other._t.items():
            v = r.get(k, 0) + c
            if v:
                r[k] = v
            else:
                r.pop(k, None)
        if any(type(c) is Fraction for c in other._t.values()):
            r = {k: _norm_coeff(c) for k, c in r.items()}
        return LaurentPoly._wrap(r)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return LaurentPoly._wrap({})
        if len(b) == 1:
            (kb, cb), = b.items()
            if cb == 1:
                return LaurentPoly._wrap({k + kb: c for k, c in a.items()})
            return LaurentPoly._wrap({k + kb: _norm_coeff(c * cb) for k, c in a.items()})
        r: dict[int, Coeff] = {}
        get = r.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                r[k] = get(k, 0) + ca * cb
        out = {}
        for k, c in r.items():
            if c:
                out[k] = _norm_coeff(c) if type(c) is Fraction else c
        return LaurentPoly._wrap(out)

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = _norm_coeff(c)
        if not c:
            return LaurentPoly._wrap({})
        if c == 1:
            return self
        return LaurentPoly._wrap({k: _norm_coeff(v * c) for k, v in self._t.items()})

    def shift(self, key: int) -> "LaurentPoly":
        """Multiply by the monomial with the given key."""
        if not key:
            return self
        return LaurentPoly._wrap({k + key: c for k, c in self._t.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if self.is_monomial():
                (k, c), = self._t.items()
                return LaurentPoly.mono(k * n, Fraction(c) ** n)
            raise DivisionByZero("negative power of a non-monomial Laurent polynomial")
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly | None":
        """Return ``self / other`` if it is a Laurent polynomial, else None."""
        b = other._t
        if not b:
            raise DivisionByZero("division by the zero polynomial")
        a = self._t
        if not a:
            return self
        if len(b) == 1:
            (kb, cb), = b.items()
            return LaurentPoly._wrap({k - kb: _cdiv(c, cb) for k, c in a.items()})
        if self.is_q_only() and other.is_q_only():
            return _q_divexact(self, other)
        bmax = max(b)
        cbmax = b[bmax]
        lo_key = min(a) - min(b)
        # per-variable exponent box for quotient monomials
        da = [decode(k) for k in a]
        db = [decode(k) for k in b]
        width = max(max(map(len, da)), max(map(len, db)))
        pad = lambda v: v + (0,) * (width - len(v))  # noqa: E731
        da = [pad(v) for v in da]
        db = [pad(v) for v in db]
        box = []
        for i in range(width):
            lo = min(v[i] for v in da) - min(v[i] for v in db)
            hi = max(v[i] for v in da) - max(v[i] for v in db)
            if lo > hi:
                return None
            box.append((lo, hi))

        r = dict(a)
        heap = [-k for k in r]
        heapq.heapify(heap)
        quo: dict[int, Coeff] = {}
        b_items = list(b.items())
        while r:
            k = -heapq.heappop(heap)
            if k not in r:
                continue
            qk = k - bmax
            if qk < lo_key:
                return None
            e = decode(qk)
            if len(e) > width:
                return None
            e = e + (0,) * (width - len(e))
            if any(not (lo <= x <= hi) for x, (lo, hi) in zip(e, box)):
                return None
            qc = _cdiv(r[k], cbmax)
            quo[qk] = qc
            for kb, cb in b_items:
                kk = kb + qk
                v = r.get(kk, 0) - qc * cb
                if v:
                    if kk not in r:
                        heapq.heappush(heap, -kk)
                    r[kk] = v
                else:
                    r.pop(kk, None)
        return LaurentPoly._wrap({k: _norm_coeff(c) for k, c in quo.items()})

    # -- content / normalization -------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive over the integers."""
        if not self._t:
            return Fraction(0)
        nums = 0
        dens = 1
        for c in self._t.values():
            if type(c) is Fraction:
                nums = gcd(nums, c.numerator)
                dens = lcm(dens, c.denominator)
            else:
                nums = gcd(nums, c)
        return Fraction(nums, dens)

    def specialize(self, assignment: Mapping[int, int]) -> "LaurentPoly":
        """Substitute tj -> q**assignment[j]; unassigned tj are left alone."""
        out: dict[int, Coeff] = {}
        for k, c in self._t.items():
            e = decode(k)
            qe = e[0]
            rest = list(e[1:])
            for j, ej in enumerate(e[1:], start=1):
                if ej and j in assignment:
                    qe += ej * assignment[j]
                    rest[j - 1] = 0
            key = encode(qe, rest)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return LaurentPoly._wrap(out)

    def evaluate(self, q: Fraction, ts: Iterable[Fraction] = ()) -> Fraction:
        """Numeric value at rational points (test helper, exact)."""
        ts = tuple(ts)
        total = Fraction(0)
        for k, c in self._t.items():
            e = decode(k)
            v = Fraction(c) * Fraction(q) ** e[0]
            for j, ej in enumerate(e[1:]):
                if ej:
                    v *= Fraction(ts[j]) ** ej
            total += v
        return total

    def __str__(self) -> str:
        if not self._t:
            return "0"
        rows = sorted(self._t.items(), key=lambda kc: _render_key(kc[0]), reverse=True)
        out = []
        for i, (k, c) in enumerate(rows):
            m = _mono_str(k)
            neg = c < 0
            a = -c if neg else c
            if m:
                body = m if a == 1 else f"{a}*{m}"
            else:
                body = str(a)
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _render_key(key: int) -> tuple:
    e = decode(key)
    t = e[1:] + (0,) * (64 - len(e))
    return t + (e[0],)


# ---------------------------------------------------------------------------
# univariate gcd in Q[q, q^-1]
# ---------------------------------------------------------------------------


def _q_divexact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    alo, x = _to_dense_raw(a)
    blo, y = _to_dense_raw(b)
    if len(x) < len(y):
        return None
    lead = y[-1]
    ny = len(y) - 1
    ynz = [(j, yj) for j, yj in enumerate(y) if yj]
    quo = [0] * (len(x) - ny)
    for i in range(len(x) - 1, ny - 1, -1):
        c = x[i]
        if not c:
            continue
        f = _cdiv(c, lead)
        quo[i - ny] = f
        off = i - ny
        for j, yj in ynz:
            x[off + j] -= f * yj
    if any(x[:ny]):
        return None
    shift = alo - blo
    return LaurentPoly._wrap({i + shift: _norm_coeff(c) for i, c in enumerate(quo) if c})


def _to_dense_raw(p: LaurentPoly) -> tuple[int, list]:
    lo = min(p._t)
    v = [0] * (max(p._t) - lo + 1)
    for k, c in p._t.items():
        v[k - lo] = c
    return lo, v


def _int_primitive(p: LaurentPoly) -> list[int]:
    """Dense coefficients of p scaled to a primitive integer vector."""
    _, v = _to_dense_raw(p)
    den = 1
    for c in v:
        if type(c) is Fraction:
            den = lcm(den, c.denominator)
    ints = [int(c * den) for c in v]
    return _strip_content(ints)


def _strip_content(v: list[int]) -> list[int]:
    g = 0
    for c in v:
        g = gcd(g, c)
        if g == 1:
            return v
    return [c // g for c in v] if g else v


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b over Z (both dense, nonzero leading terms)."""
    a = a[:]
    lb = b[-1]
    db = len(b) - 1
    bnz = [(j, c) for j, c in enumerate(b) if c]
    while len(a) - 1 >= db:
        f = a[-1]
        off = len(a) - 1 - db
        if f:
            a = [c * lb for c in a]
            for j, c in bnz:
                a[off + j] -= f * c
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def q_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd (up to units q**k) of two q-only Laurent polynomials."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    x, y = _int_primitive(a), _int_primitive(b)
    if len(x) < len(y):
        x, y = y, x
    while y:
        x, y = y, _strip_content(_int_prem(x, y))
    lead = x[-1]
    return LaurentPoly._wrap({i: _norm_coeff(Fraction(c, lead)) for i, c in enumerate(x) if c})


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def _split(p: LaurentPoly) -> tuple[Coeff, int, LaurentPoly | None]:
    """Write p = c * mono * p_hat with p_hat primitive over Z and lowest term a positive constant.

    p_hat is None when p is a single term.
    """
    t = p._t
    if len(t) == 1:
        (k, c), = t.items()
        return c, k, None
    low = min(t)
    s = p.content()
    if t[low] < 0:
        s = -s
    if s == 1:
        return 1, low, p.shift(-low)
    if s == -1:
        return -1, low, LaurentPoly._wrap({k - low: -c for k, c in t.items()})
    inv = 1 / s
    hat = LaurentPoly._wrap({k - low: _norm_coeff(c * inv) for k, c in t.items()})
    return _norm_coeff(s), low, hat


def _expand(coeff: Coeff, mono: int, items: Iterable[tuple[LaurentPoly, int]]) -> LaurentPoly:
    p = LaurentPoly.mono(mono, coeff)
    for f, e in sorted(items, key=lambda fe: len(fe[0])):
        for _ in range(e):
            p = p * f
    return p


class RationalFn:
    """Element of Q(q, t1, ..., tn), kept as coeff * mono * prod(f**e).

    Each factor f is a Laurent polynomial that is primitive over the integers
    with lowest term a positive constant, so integer content and monomials
    always live in ``coeff`` and ``mono``. Factors with negative exponent form
    the denominator. Identical factors cancel on multiplication; no
    polynomial gcd is taken except for values in Q(q) alone, which are kept
    fully reduced. Equality is decided by cross multiplication.
    """

    __slots__ = ("coeff", "mono", "factors")

    def __init__(self, num: LaurentPoly | Coeff = 0, den: LaurentPoly | Coeff = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            coeff, mono, factors = 0, 0, {}
        else:
            cn, mn, hn = _split(num)
            cd, md, hd = _split(den)
            factors = {}
            if hn is not None:
                factors[hn] = 1
            if hd is not None:
                e = factors.get(hd, 0) - 1
                if e:
                    factors[hd] = e
                else:
                    del factors[hd]
            coeff, mono, factors = _settle(_cdiv(cn, cd), mn - md, factors)
        self.coeff = coeff
        self.mono = mono
        self.factors = factors

    @classmethod
    def _raw(cls, coeff: Coeff, mono: int, factors: dict) -> "RationalFn":
        r = object.__new__(cls)
        r.coeff = coeff
        r.mono = mono
        r.factors = factors
        return r

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFn":
        return cls(p, 1)

    @classmethod
    def mono_term(cls, key: int, c: Coeff = 1) -> "RationalFn":
        c = _norm_coeff(c)
        return cls._raw(c, key if c else 0, {})

    @classmethod
    def q_pow(cls, w: "WeightExpr | int") -> "RationalFn":
        """q**w with tj substituted for q**mu_j."""
        key = w.key() if isinstance(w, WeightExpr) else int(w)
        return cls._raw(1, key, {})

    # -- views -------------------------------------------------------------

    @property
    def num(self) -> LaurentPoly:
        return _expand(self.coeff, self.mono, [(f, e) for f, e in self.factors.items() if e > 0])

    @property
    def den(self) -> LaurentPoly:
        return _expand(1, 0, [(f, -e) for f, e in self.factors.items() if e < 0])

    def is_zero(self) -> bool:
        return not self.coeff

    def is_one(self) -> bool:
        return self.coeff == 1 and not self.mono and not self.factors

    def is_poly(self) -> bool:
        return all(e > 0 for e in self.factors.values())

    def is_q_only(self) -> bool:
        return _is_q_only(self.mono) and all(f.is_q_only() for f in self.factors)

    def __bool__(self) -> bool:
        return bool(self.coeff)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "RationalFn":
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, (int, Fraction)):
            return RationalFn._raw(_norm_coeff(x), 0, {})
        if isinstance(x, LaurentPoly):
            return RationalFn(x, 1)
        raise TypeError(f"cannot use {type(x).__name__} as a field element")

    def __add__(self, other) -> "RationalFn":
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        return rsum((self, o))

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn._raw(-self.coeff, self.mono, self.factors)

    def __sub__(self, other) -> "RationalFn":
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        return rsum((self, -o))

    def __rsub__(self, other) -> "RationalFn":
        return (-self) + other

    def __mul__(self, other) -> "RationalFn":
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        if not self.coeff or not o.coeff:
            return ZERO
        f, g = self.factors, o.factors
        if not g:
            merged = f
        elif not f:
            merged = g
        else:
            if len(f) < len(g):
                f, g = g, f
            merged = dict(f)
            for p, e in g.items():
                v = merged.get(p, 0) + e
                if v:
                    merged[p] = v
                else:
                    del merged[p]
        coeff, mono, merged = _settle(_norm_coeff(self.coeff * o.coeff), self.mono + o.mono, merged)
        return RationalFn._raw(coeff, mono, merged)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if not self.coeff:
            raise DivisionByZero("division by zero in Q(q, t)")
        return RationalFn._raw(_norm_coeff(Fraction(1) / Fraction(self.coeff)), -self.mono,
                               {f: -e for f, e in self.factors.items()})

    def __truediv__(self, other) -> "RationalFn":
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "RationalFn":
        return RationalFn._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFn":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            o = RationalFn._coerce(other)
        except TypeError:
            return NotImplemented
        if self.coeff == o.coeff and self.mono == o.mono and self.factors == o.factors:
            return True
        if not self.coeff or not o.coeff:
            return False
        return _sum_terms((self, -o), cancel=False).coeff == 0

    __hash__ = None  # type: ignore[assignment]

    def specialize(self, assignment: Mapping[int, int]) -> "RationalFn":
        """Substitute tj -> q**assignment[j]; result lies in Q(q)."""
        if not self.coeff:
            return ZERO
        num = LaurentPoly.mono(self.mono, self.coeff).specialize(assignment)
        den = LaurentPoly.const(1)
        vanishing = False
        for f, e in sorted(self.factors.items(), key=lambda fe: fe[1]):
            s = f.specialize(assignment)
            if s.is_zero():
                if e < 0:
                    raise PoleError(self.den, assignment, factor=f)
                vanishing = True
                continue
            if e > 0:
                num = num * s ** e
            else:
                den = den * s ** (-e)
        if vanishing:
            return ZERO
        return RationalFn(num, den)

    def evaluate(self, q: Fraction, ts: Iterable[Fraction] = ()) -> Fraction:
        """Exact value at a rational point (test helper)."""
        ts = tuple(ts)
        v = LaurentPoly.mono(self.mono, self.coeff).evaluate(q, ts)
        for f, e in self.factors.items():
            fv = f.evaluate(q, ts)
            if not fv:
                if e < 0:
                    raise DivisionByZero("denominator vanishes at this point")
                return Fraction(0)
            v *= fv ** e
        return v

    def __str__(self) -> str:
        den = self.den
        num = self.num
        if den.is_one():
            return str(num)
        n = str(num)
        if len(num) > 1:
            n = f"({n})"
        return f"{n}/({den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


_ONE_POLY = LaurentPoly.const(1)
ZERO = RationalFn._raw(0, 0, {})
ONE = RationalFn._raw(1, 0, {})


def _settle(coeff: Coeff, mono: int, factors: dict) -> tuple[Coeff, int, dict]:
    """Canonical form for values in Q(q): one reduced numerator and denominator factor."""
    if not coeff:
        return 0, 0, {}
    if not factors or not _is_q_only(mono):
        return coeff, mono, factors
    if len(factors) == 1 and abs(next(iter(factors.values()))) == 1:
        return coeff, mono, factors
    if not all(f.is_q_only() for f in factors):
        return coeff, mono, factors
    num = _expand(1, 0, [(f, e) for f, e in factors.items() if e > 0])
    den = _expand(1, 0, [(f, -e) for f, e in factors.items() if e < 0])
    if not den.is_one():
        g = q_gcd(num, den)
        if not g.is_constant():
            num = num.divexact(g)
            den = den.divexact(g)
    cn, mn, hn = _split(num)
    cd, md, hd = _split(den)
    out = {}
    if hn is not None:
        out[hn] = 1
    if hd is not None:
        out[hd] = -1
    return _norm_coeff(coeff * Fraction(cn) / cd), mono + mn - md, out


def _sum_terms(terms: Iterable[RationalFn], cancel: bool = True) -> RationalFn:
    terms = [t for t in terms if t.coeff]
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    # common part: each factor at its least exponent over all terms
    common: dict[LaurentPoly, int] = {}
    first = terms[0].factors
    for f in {f for t in terms for f in t.factors}:
        m = min(t.factors.get(f, 0) for t in terms)
        if m:
            common[f] = m
    acc: dict[int, Coeff] = {}
    get = acc.get
    for t in terms:
        cof = [(f, e - common.get(f, 0)) for f, e in t.factors.items() if e != common.get(f, 0)]
        cof.extend((f, -m) for f, m in common.items() if f not in t.factors)
        for k, c in _expand(t.coeff, t.mono, cof)._t.items():
            acc[k] = get(k, 0) + c
    s = LaurentPoly._wrap({k: _norm_coeff(c) for k, c in acc.items() if c})
    if s.is_zero():
        return ZERO
    coeff, mono, hat = _split(s)
    factors = dict(common)
    if hat is not None and cancel:
        for f, e in common.items():
            if e >= 0 or len(f) > len(hat):
                continue
            while e < 0 and hat is not None and len(f) <= len(hat):
                quo = hat.divexact(f)
                if quo is None:
                    break
                c2, m2, hat = _split(quo)
                coeff = _norm_coeff(coeff * c2)
                mono += m2
                e += 1
            if e:
                factors[f] = e
            else:
                del factors[f]
            if hat is None:
                break
    if hat is not None:
        v = factors.get(hat, 0) + 1
        if v:
            factors[hat] = v
        else:
            del factors[hat]
    del first
    coeff, mono, factors = _settle(coeff, mono, factors)
    return RationalFn._raw(coeff, mono, factors)


def rsum(values: Iterable[RationalFn]) -> RationalFn:
    """Exact sum; pulls out shared factors before expanding anything."""
    return _sum_terms(values)


# ---------------------------------------------------------------------------
# quantum numbers
# ---------------------------------------------------------------------------

_QDIFF = LaurentPoly({1: 1, -1: -1})  # q - q^-1


def qint_num(w: WeightExpr | int) -> LaurentPoly:
    """q**w - q**-w, the numerator of [w] over q - q**-1."""
    key = w.key() if isinstance(w, WeightExpr) else int(w)
    if key == 0:
        return LaurentPoly.const(0)
    return LaurentPoly._wrap({key: 1, -key: -1})


@lru_cache(maxsize=4096)
def _qint_int(n: int) -> LaurentPoly:
    if n == 0:
        return LaurentPoly.const(0)
    if n < 0:
        return -_qint_int(-n)
    return LaurentPoly._wrap({n - 1 - 2 * i: 1 for i in range(n)})


def qint(w: WeightExpr | int) -> RationalFn:
    """The quantum number [w] = (q**w - q**-w) / (q - q**-1)."""
    if isinstance(w, int):
        return RationalFn(_qint_int(w))
    if w.is_integer:
        return RationalFn(_qint_int(w.offset))
    return RationalFn(qint_num(w), _QDIFF)


@lru_cache(maxsize=None)
def qfactorial(k: int) -> LaurentPoly:
    """[k]! = [k][k-1]...[1], with [0]! = 1."""
    if k < 0:
        raise ValueError("factorial of a negative integer")
    if k == 0:
        return LaurentPoly.const(1)
    return qfactorial(k - 1) * _qint_int(k)


@lru_cache(maxsize=None)
def _qbinomial_poly(k: int, l: int) -> LaurentPoly:
    # [k]!/([l]![k-l]!) telescoped: each partial product is itself [k-l+i choose i]
    l = min(l, k - l)
    out = LaurentPoly.const(1)
    for i in range(1, l + 1):
        quo = (out * qint_num(k - l + i)).divexact(qint_num(i))
        assert quo is not None
        out = quo
    return out


def qbinomial(k: int, l: int) -> RationalFn:
    """Gaussian binomial [k]! / ([l]! [k-l]!) for 0 <= l <= k."""
    if k < 0 or l < 0:
        raise ValueError(f"binomial [{k} {l}] needs non-negative arguments")
    if l > k:
        raise ValueError(f"binomial [{k} {l}] needs l <= k")
    return RationalFn(_qbinomial_poly(k, l))


def specialize(x: RationalFn, assignment: Mapping[int, int]) -> RationalFn:
    return x.specialize(assignment)


def pascal_violations(kmax: int = 30) -> list[tuple[int, int]]:
    """(k, j) with 1 <= j <= k <= kmax where
    [k+1 j] != q^{-k+j-1} [k j-1] + q^j [k j]."""
    bad = []
    for k in range(1, kmax + 1):
        for j in range(1, k + 1):
            rhs = RationalFn.q_pow(-k + j - 1) * qbinomial(k, j - 1) + RationalFn.q_pow(j) * qbinomial(k, j)
            if qbinomial(k + 1, j) != rhs:
                bad.append((k, j))
    return bad


def splitting_violations(mu: WeightExpr, lam: WeightExpr, kmax: int = 10) -> list[tuple[int, int]]:
    """(k, j) where [mu+lam-k] != q^{lam-k+j}[mu-j] + q^{-mu+j}[lam-k+j]."""
    bad = []
    for k in range(kmax + 1):
        for j in range(k + 1):
            lhs = qint(mu + lam - k)
            rhs = (RationalFn.q_pow(lam - k + j) * qint(mu - j)
                   + RationalFn.q_pow(-mu + j) * qint(lam - k + j))
            if lhs != rhs:
                bad.append((k, j))
    return bad
