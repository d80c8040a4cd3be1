"""Exact arithmetic for Laurent polynomials and their fraction field.

Everything downstream works in the variable v = q^(1/2), so a q-exponent
of n/2 is stored as the integer v-exponent n and no fractional exponents
ever appear.  Coefficients are exact rationals (fractions.Fraction).

A LaurentPoly is a sparse map {v-exponent: coefficient}.  A LaurentRat is
a reduced fraction num/den of LaurentPolys in the canonical form where the
denominator's lowest term has exponent 0 and coefficient 1, which makes
equality a structural comparison.

The quantum integer [n] = (v^n - v^-n)/(v - v^-1) and the quantum
factorial [n]! are the basic building blocks.  Large products of quantum
integers are handled through BracketRatio, a factored form that cancels
common factors by multiset arithmetic and only expands what survives,
using the cyclotomic factorization [n] = v^(1-n) * prod Phi_d(v) over
divisors d >= 3 of 2n.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import gcd as int_gcd
from typing import Iterable, Mapping

Coeff = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PoleError(ZeroDivisionError):
    """Numeric evaluation hit a vanishing denominator."""


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class LaurentPoly:
    """Sparse Laurent polynomial in v with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]] | None = None):
        data: dict[int, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                c = _coerce(c)
                if c:
                    acc = data.get(e)
                    c = c if acc is None else acc + c
                    if c:
                        data[e] = c
                    else:
                        del data[e]
        self.terms = data

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: _ONE})

    @classmethod
    def v_power(cls, e: int, coeff=1) -> "LaurentPoly":
        return cls({e: _coerce(coeff)})

    @classmethod
    def from_int_coeffs(cls, coeffs: list[int], shift: int = 0) -> "LaurentPoly":
        """coeffs[k] is the coefficient of v^(k+shift)."""
        return cls({k + shift: Fraction(c) for k, c in enumerate(coeffs) if c})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {0: _ONE}

    def min_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self.terms)

    def max_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self.terms)

    def coefficient(self, e: int) -> Fraction:
        return self.terms.get(e, _ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    # -- ring operations ----------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: _coerce(other)})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        data = dict(self.terms)
        for e, c in other.terms.items():
            s = data.get(e, _ZERO) + c
            if s:
                data[e] = s
            elif e in data:
                del data[e]
        out = LaurentPoly()
        out.terms = data
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly({0: _coerce(other)})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            out = LaurentPoly()
            if c:
                out.terms = {e: k * c for e, k in self.terms.items()}
            return out
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly()
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        data: dict[int, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                s = data.get(e)
                p = c1 * c2
                s = p if s is None else s + p
                if s:
                    data[e] = s
                elif e in data:
                    del data[e]
        out = LaurentPoly()
        out.terms = data
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        out = LaurentPoly()
        out.terms = {e + k: c for e, c in self.terms.items()}
        return out

    def v_inverted(self) -> "LaurentPoly":
        """Substitute v -> 1/v."""
        out = LaurentPoly()
        out.terms = {-e: c for e, c in self.terms.items()}
        return out

    # -- evaluation ----------------------------------------------------

    def eval_exact(self, v0: Fraction) -> Fraction:
        v0 = _coerce(v0)
        if v0 == 0 and self.terms and self.min_exp() < 0:
            raise PoleError("evaluation at v=0 with negative exponents")
        return sum((c * v0 ** e for e, c in self.terms.items()), _ZERO)

    def eval_complex(self, v0: complex) -> complex:
        v0 = complex(v0)
        if v0 == 0:
            if self.terms and self.min_exp() < 0:
                raise PoleError("evaluation at v=0 with negative exponents")
            return complex(self.terms.get(0, _ZERO))
        total = 0j
        for e, c in self.terms.items():
            total += complex(c) * v0 ** e
        return total

    # -- rendering ------------------------------------------------------

    def _term_strings(self) -> list[tuple[int, Fraction]]:
        return sorted(self.terms.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e, c in self._term_strings():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                if e == 2:
                    power = "q"
                elif e % 2 == 0:
                    power = f"q^({e // 2})"
                else:
                    power = f"q^({e}/2)"
                body = power if mag == 1 else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms!r})"

    def to_json_obj(self) -> dict:
        return {
            "variable": "v",
            "meaning": "q^(1/2)",
            "terms": [[e, str(c)] for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LaurentPoly":
        return cls({int(e): Fraction(c) for e, c in obj["terms"]})


# -- integer-coefficient helpers for gcd ---------------------------------


def _to_int_list(p: LaurentPoly) -> tuple[list[int], int]:
    """Shift to ordinary polynomial form and clear denominators.

    Returns (coeff list, lcm of denominators); list[0] is the v^min term.
    """
    lo = p.min_exp()
    hi = p.max_exp()
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
    out = [0] * (hi - lo + 1)
    for e, c in p.terms.items():
        out[e - lo] = c.numerator * (lcm // c.denominator)
    return out, lcm


def _int_content(cs: list[int]) -> int:
    g = 0
    for c in cs:
        g = int_gcd(g, c)
        if g == 1:
            break
    return g or 1


def _strip(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _prim(cs: list[int]) -> list[int]:
    g = _int_content(cs)
    if g > 1:
        cs = [c // g for c in cs]
    if cs and cs[-1] < 0:
        cs = [-c for c in cs]
    return cs


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of primitive integer polynomials, b nonzero."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da, la = len(a) - 1, a[-1]
        # a <- lb*a - la*x^(da-db)*b
        shift = da - db
        a = [c * lb for c in a]
        for i, bc in enumerate(b):
            a[shift + i] -= la * bc
        _strip(a)
        if len(a) - 1 >= db:
            g = _int_content(a)
            if g > 1:
                a = [c // g for c in a]
    return a


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Monic-at-bottom gcd of Laurent polynomials, up to a unit v^k.

    The result is an ordinary polynomial (minimum exponent 0) with integer
    coefficients and positive leading coefficient; monomial factors v^k are
    units of the Laurent ring and are dropped.
    """
    if p.is_zero():
        return _unitize(q)
    if q.is_zero():
        return _unitize(p)
    a, _ = _to_int_list(p)
    b, _ = _to_int_list(q)
    # strip trailing/leading zeros introduced by the shift
    while a and a[0] == 0:
        a.pop(0)
    while b and b[0] == 0:
        b.pop(0)
    a, b = _prim(_strip(a)), _prim(_strip(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _prim(r)
    return LaurentPoly.from_int_coeffs(a)


def _unitize(p: LaurentPoly) -> LaurentPoly:
    """Normalize a nonzero poly to min exponent 0 and positive primitive coefficients."""
    if p.is_zero():
        return p
    cs, _ = _to_int_list(p)
    return LaurentPoly.from_int_coeffs(_prim(_strip(cs)))


def exact_div_poly(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact division a/b in the Laurent ring; raises ValueError if inexact."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return LaurentPoly()
    alo, blo = a.min_exp(), b.min_exp()
    ra = {e - alo: c for e, c in a.terms.items()}
    rb = {e - blo: c for e, c in b.terms.items()}
    da, db = max(ra), max(rb)
    if da < db:
        raise ValueError("not divisible")
    lead_b = rb[db]
    quot: dict[int, Fraction] = {}
    cur = dict(ra)
    while cur:
        dc = max(cur)
        if dc < db:
            raise ValueError("not divisible")
        qc = cur[dc] / lead_b
        qe = dc - db
        quot[qe] = qc
        for e, c in rb.items():
            t = e + qe
            s = cur.get(t, _ZERO) - qc * c
            if s:
                cur[t] = s
            elif t in cur:
                del cur[t]
    out = LaurentPoly()
    out.terms = {e + alo - blo: c for e, c in quot.items()}
    return out


# -- quantum integers ------------------------------------------------------


def q_int(n: int) -> LaurentPoly:
    """Quantum integer [n] = v^(n-1) + v^(n-3) + ... + v^(1-n)."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"q_int requires n >= 0, got {n!r}")
    return LaurentPoly({n - 1 - 2 * k: _ONE for k in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n: int) -> LaurentPoly:
    """Quantum factorial [n]! = [n][n-1]...[1], with [0]! = 1."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"q_factorial requires n >= 0, got {n!r}")
    if n <= 1:
        return LaurentPoly.one()
    return q_factorial(n - 1) * q_int(n)


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> LaurentPoly:
    """d-th cyclotomic polynomial Phi_d(v), exact integer coefficients."""
    if d < 1:
        raise ValueError("d must be positive")
    num = LaurentPoly({d: _ONE, 0: -_ONE})  # v^d - 1
    for e in range(1, d):
        if d % e == 0:
            num = exact_div_poly(num, cyclotomic(e))
    return num


@lru_cache(maxsize=None)
def _bracket_cyclo_divisors(k: int) -> tuple[int, ...]:
    """Divisors d >= 3 of 2k: [k] = v^(1-k) * prod Phi_d(v) over these d."""
    n = 2 * k
    return tuple(d for d in range(3, n + 1) if n % d == 0)


# Integer-coefficient fast path.  Cyclotomic products and their alternating
# sums have integer coefficients throughout; plain int dicts avoid the
# per-operation normalization cost of Fraction.


def _imul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def _iadd_into(acc: dict[int, int], term: dict[int, int], sign: int, shift: int) -> None:
    for e, c in term.items():
        k = e + shift
        s = acc.get(k, 0) + (c if sign > 0 else -c)
        if s:
            acc[k] = s
        elif k in acc:
            del acc[k]


@lru_cache(maxsize=None)
def _cyclo_int(d: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((e, int(c)) for e, c in cyclotomic(d).terms.items()))


@lru_cache(maxsize=None)
def _phi_power_int(d: int, m: int) -> tuple[tuple[int, int], ...]:
    if m == 0:
        return ((0, 1),)
    if m == 1:
        return _cyclo_int(d)
    prev = dict(_phi_power_int(d, m - 1))
    return tuple(sorted(_imul(prev, dict(_cyclo_int(d))).items()))


def _assemble_counter(mult: Counter) -> dict[int, int]:
    """Product of Phi_d^m over a multiplicity counter, as an int dict."""
    out = {0: 1}
    for d in sorted(mult, key=lambda d: (len(_cyclo_int(d)), d)):
        m = mult[d]
        if m > 0:
            out = _imul(out, dict(_phi_power_int(d, m)))
    return out


def _idiv_exact(num: dict[int, int], phi: dict[int, int]) -> dict[int, int] | None:
    """Exact division by a poly with lowest term 1*v^0; None if inexact."""
    if not num:
        return {}
    hi_limit = max(num) - max(phi)
    cur = dict(num)
    out: dict[int, int] = {}
    while cur:
        lo = min(cur)
        if lo > hi_limit:
            return None
        qc = cur[lo]
        out[lo] = qc
        for e, c in phi.items():
            k = e + lo
            s = cur.get(k, 0) - qc * c
            if s:
                cur[k] = s
            elif k in cur:
                del cur[k]
    return out


def _wrap_int_poly(d: dict[int, int]) -> LaurentPoly:
    out = LaurentPoly()
    out.terms = {e: Fraction(c) for e, c in d.items()}
    return out


class BracketRatio:
    """Signed ratio of products of quantum integers, kept factored.

    Stores multisets of bracket indices for numerator and denominator and a
    sign; common indices cancel exactly.  Conversion to LaurentRat goes
    through the cyclotomic factorization, so the resulting num/den pair is
    coprime by construction and the expensive polynomial gcd is skipped.
    """

    __slots__ = ("sign", "num", "den")

    def __init__(self, sign: int = 1, num: Counter | None = None, den: Counter | None = None):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.sign = sign
        self.num = Counter()
        self.den = Counter()
        if num:
            for k, m in num.items():
                if k < 1:
                    raise ValueError(f"bracket index must be positive, got {k}")
                if k > 1 and m:
                    self.num[k] = m
        if den:
            for k, m in den.items():
                if k < 1:
                    raise ValueError(f"bracket index must be positive, got {k}")
                if k > 1 and m:
                    self.den[k] = m
        self._cancel()

    def _cancel(self) -> None:
        for k in list(self.num):
            if k in self.den:
                m = min(self.num[k], self.den[k])
                self.num[k] -= m
                self.den[k] -= m
                if not self.num[k]:
                    del self.num[k]
                if not self.den[k]:
                    del self.den[k]

    @classmethod
    def one(cls) -> "BracketRatio":
        return cls()

    @classmethod
    def factorial(cls, n: int, inverse: bool = False) -> "BracketRatio":
        if n < 0:
            raise ValueError("factorial of negative quantum integer")
        c = Counter(range(2, n + 1))
        return cls(1, None, c) if inverse else cls(1, c, None)

    def times_bracket(self, k: int, power: int = 1) -> "BracketRatio":
        if k == 0:
            raise ZeroDivisionError("bracket [0] is zero")
        sign = self.sign
        if k < 0:
            # [-k] = -[k]
            k = -k
            if power % 2:
                sign = -sign
        out = BracketRatio(sign, self.num, self.den)
        if k > 1:
            if power > 0:
                out.num[k] += power
            else:
                out.den[k] -= power
        out._cancel()
        return out

    def __mul__(self, other: "BracketRatio") -> "BracketRatio":
        return BracketRatio(self.sign * other.sign, self.num + other.num, self.den + other.den)

    def __truediv__(self, other: "BracketRatio") -> "BracketRatio":
        return BracketRatio(self.sign * other.sign, self.num + other.den, self.den + other.num)

    def __neg__(self) -> "BracketRatio":
        return BracketRatio(-self.sign, self.num, self.den)

    def is_one(self) -> bool:
        return self.sign == 1 and not self.num and not self.den

    def _cyclo_counters(self) -> tuple[Counter, Counter]:
        """Cyclotomic multiplicities of num and den after cancellation."""
        mult_n: Counter = Counter()
        mult_d: Counter = Counter()
        for k, m in self.num.items():
            for d in _bracket_cyclo_divisors(k):
                mult_n[d] += m
        for k, m in self.den.items():
            for d in _bracket_cyclo_divisors(k):
                mult_d[d] += m
        for d in set(mult_n) & set(mult_d):
            m = min(mult_n[d], mult_d[d])
            mult_n[d] -= m
            mult_d[d] -= m
            if not mult_n[d]:
                del mult_n[d]
            if not mult_d[d]:
                del mult_d[d]
        return mult_n, mult_d

    def _unit_shift(self) -> int:
        """v-exponent of the unit factor prod v^(1-k) over num minus den."""
        return sum((1 - k) * m for k, m in self.num.items()) - sum((1 - k) * m for k, m in self.den.items())

    def _reduced_polys(self) -> tuple[LaurentPoly, LaurentPoly]:
        """Coprime (num, den) LaurentPolys, each with min exponent 0."""
        mult_n, mult_d = self._cyclo_counters()
        return _wrap_int_poly(_assemble_counter(mult_n)), _wrap_int_poly(_assemble_counter(mult_d))

    def to_laurent_rat(self) -> "LaurentRat":
        num, den = self._reduced_polys()
        if self.sign < 0:
            num = -num
        # each bracket carries a unit v^(1-k) next to its Phi product
        num = num.shifted(self._unit_shift())
        return LaurentRat(num, den, trusted=True)

    def __repr__(self) -> str:
        return f"BracketRatio(sign={self.sign}, num={dict(self.num)}, den={dict(self.den)})"


def bracket_ratio_sum(terms: Iterable[BracketRatio]) -> LaurentRat:
    """Exact sum of factored bracket ratios, without polynomial gcd.

    All terms are brought over the least common denominator in the
    cyclotomic factor basis; the numerator sum is then stripped of any
    remaining cyclotomic factors of the denominator by exact division.
    The result is canonical (coprime, unit-normalized denominator).
    """
    forms = []
    den_mult: Counter = Counter()
    for t in terms:
        cn, cd = t._cyclo_counters()
        forms.append((t.sign, t._unit_shift(), cn, cd))
        for d, m in cd.items():
            if m > den_mult[d]:
                den_mult[d] = m
    if not forms:
        return LaurentRat.zero()
    num: dict[int, int] = {}
    for sign, shift, cn, cd in forms:
        need = Counter(cn)
        for d, m in den_mult.items():
            extra = m - cd.get(d, 0)
            if extra:
                need[d] += extra
        _iadd_into(num, _assemble_counter(need), sign, shift)
    if not num:
        return LaurentRat.zero()
    for d in sorted(den_mult):
        phi = dict(_cyclo_int(d))
        while den_mult[d] > 0:
            q = _idiv_exact(num, phi)
            if q is None:
                break
            num = q
            den_mult[d] -= 1
    den = _wrap_int_poly(_assemble_counter(den_mult))
    return LaurentRat(_wrap_int_poly(num), den, trusted=True)


def _int_terms(p: "LaurentPoly") -> dict[int, int] | None:
    """Integer coefficient dict, or None if any coefficient is non-integer."""
    out = {}
    for e, c in p.terms.items():
        if c.denominator != 1:
            return None
        out[e] = c.numerator
    return out


def rat_dot(pairs: Iterable[tuple["LaurentRat", "LaurentRat"]]) -> LaurentRat:
    """Exact sum of products a_i * b_i with a single final normalization.

    Each per-term add in the naive expression sum(a*b) reduces the running
    fraction to lowest terms; deferring the gcd to one pass at the end is
    much cheaper, and free when the sum collapses to zero.  All-integer
    coefficients (the common case here) also bypass Fraction arithmetic.
    """
    pairs = list(pairs)
    rows = []
    for a, b in pairs:
        row = tuple(_int_terms(p) for p in (a.num, a.den, b.num, b.den))
        if any(r is None for r in row):
            rows = None
            break
        rows.append(row)
    if rows is not None:
        num: dict[int, int] = {}
        den = {0: 1}
        for an, ad, bn, bd in rows:
            t_num = _imul(an, bn)
            t_den = _imul(ad, bd)
            num = _imul(num, t_den)
            _iadd_into(num, _imul(t_num, den), 1, 0)
            den = _imul(den, t_den)
        return LaurentRat(_wrap_int_poly(num), _wrap_int_poly(den))
    num = LaurentPoly()
    den = LaurentPoly.one()
    for a, b in pairs:
        t_num = a.num * b.num
        t_den = a.den * b.den
        num = num * t_den + t_num * den
        den = den * t_den
    return LaurentRat(num, den)


class LaurentRat:
    """Element of the fraction field of Laurent polynomials in v.

    Canonical form: gcd(num, den) = 1, the denominator's lowest exponent is
    0 and its lowest coefficient is 1.  Equality is then structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, trusted: bool = False):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly({0: _coerce(num)})
        if den is None:
            den = LaurentPoly.one()
        elif isinstance(den, (int, Fraction)):
            den = LaurentPoly({0: _coerce(den)})
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = LaurentPoly()
            self.den = LaurentPoly.one()
            return
        if not trusted:
            g = poly_gcd(num, den)
            if not g.is_one():
                num = exact_div_poly(num, g)
                den = exact_div_poly(den, g)
        # unit normalization: den lowest term -> exponent 0, coefficient 1
        lo = den.min_exp()
        c = den.terms[lo]
        if lo or c != 1:
            inv = _ONE / c
            num = LaurentPoly({e - lo: k * inv for e, k in num.terms.items()})
            den = LaurentPoly({e - lo: k * inv for e, k in den.terms.items()})
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentRat":
        return cls(LaurentPoly())

    @classmethod
    def one(cls) -> "LaurentRat":
        return cls(LaurentPoly.one())

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "LaurentRat":
        return cls(p, LaurentPoly.one(), trusted=True)

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent_poly(self) -> bool:
        """True when the reduced denominator is 1."""
        return self.den.is_one()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = LaurentRat(other if isinstance(other, LaurentPoly) else LaurentPoly({0: _coerce(other)}))
        if not isinstance(other, LaurentRat):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- field operations ---------------------------------------------------

    def __neg__(self) -> "LaurentRat":
        out = LaurentRat.__new__(LaurentRat)
        out.num = -self.num
        out.den = self.den
        return out

    def _lift(self, other) -> "LaurentRat | None":
        if isinstance(other, (int, Fraction)):
            return LaurentRat(LaurentPoly({0: _coerce(other)}))
        if isinstance(other, LaurentPoly):
            return LaurentRat.from_poly(other)
        if isinstance(other, LaurentRat):
            return other
        return None

    def __add__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return LaurentRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return LaurentRat(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return LaurentRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero value")
        return LaurentRat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "LaurentRat":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def v_inverted(self) -> "LaurentRat":
        return LaurentRat(self.num.v_inverted(), self.den.v_inverted())

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, v0: Fraction) -> Fraction:
        d = self.den.eval_exact(v0)
        if d == 0:
            raise PoleError(f"pole at v = {v0}")
        return self.num.eval_exact(v0) / d

    def eval_complex(self, v0: complex, precision: int = 53) -> complex:
        """Evaluate at a complex point.

        precision is in bits; above 53 the evaluation runs through mpmath
        and is rounded back to a double complex.  The pole threshold scales
        with the magnitude of the denominator's terms.
        """
        if precision > 53:
            import mpmath

            with mpmath.workprec(precision):
                vm = mpmath.mpc(v0)
                den = mpmath.mpc(0)
                scale = mpmath.mpf(0)
                for e, c in self.den.terms.items():
                    t = mpmath.mpf(c.numerator) / c.denominator * vm ** e
                    den += t
                    scale += abs(t)
                if den == 0 or abs(den) < mpmath.mpf("1e-300") * max(scale, mpmath.mpf(1)):
                    raise PoleError(f"pole near v = {v0}")
                num = mpmath.mpc(0)
                for e, c in self.num.terms.items():
                    num += mpmath.mpf(c.numerator) / c.denominator * vm ** e
                r = num / den
                return complex(r)
        v0 = complex(v0)
        scale = 0.0
        den = 0j
        for e, c in self.den.terms.items():
            t = complex(c) * v0 ** e
            den += t
            scale += abs(t)
        if den == 0 or abs(den) < 1e-300 * max(scale, 1.0):
            raise PoleError(f"pole near v = {v0}")
        return self.num.eval_complex(v0) / den

    # -- rendering -------------------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"LaurentRat({self.num!r}, {self.den!r})"

    def to_json_obj(self) -> dict:
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LaurentRat":
        return cls(LaurentPoly.from_json_obj(obj["num"]), LaurentPoly.from_json_obj(obj["den"]))
