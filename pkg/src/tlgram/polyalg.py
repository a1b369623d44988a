"""Sparse integer polynomials in two variables, alpha and delta.

A :class:`Poly` maps exponent pairs ``(ea, ed)`` to nonzero Python ints.
Small products and quotients use plain dictionary loops. Large ones switch
to Kronecker substitution: both operands are packed into a single big
integer (delta-degree first, then alpha-degree, in fixed-width signed
digits), multiplied or divided by CPython's integer arithmetic and
unpacked again. Exact quotients found that way are always confirmed by
multiplying back.
"""

from __future__ import annotations

import json
import math
import re
from typing import Iterable, Mapping

__all__ = [
    "ExponentCapError",
    "InexactDivisionError",
    "Poly",
    "chebyshev_t",
    "eval_int",
    "exact_div",
    "substitute_squares",
]

EXPONENT_CAP = 10**6

# product size (terms_a * terms_b) above which packed arithmetic is used
KRONECKER_THRESHOLD = 400


class ExponentCapError(OverflowError):
    pass


class InexactDivisionError(ArithmeticError):
    pass


Monomial = tuple[int, int]


class Poly:
    """Immutable sparse polynomial in ``a`` (alpha) and ``d`` (delta)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean = {}
        if terms:
            for (ea, ed), c in terms.items():
                if c:
                    if ea < 0 or ed < 0:
                        raise ValueError(f"negative exponent in {(ea, ed)}")
                    if ea > EXPONENT_CAP or ed > EXPONENT_CAP:
                        raise ExponentCapError(f"exponent {(ea, ed)} exceeds cap {EXPONENT_CAP}")
                    clean[(ea, ed)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> Poly:
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> Poly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, ea: int = 0, ed: int = 0, c: int = 1) -> Poly:
        return cls({(ea, ed): c})

    @classmethod
    def promote(cls, x: Poly | int) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot promote {type(x).__name__} to Poly")

    # --- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((ea + ed for ea, ed in self.terms), default=-1)

    def leading_term(self) -> tuple[Monomial, int]:
        """Largest monomial in lex order on ``(ea, ed)``."""
        m = max(self.terms)
        return m, self.terms[m]

    def max_coeff_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.terms.values()), default=0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # --- ring operations -------------------------------------------------

    def __add__(self, other: Poly | int) -> Poly:
        other = Poly.promote(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly | int) -> Poly:
        return self + (-Poly.promote(other))

    def __rsub__(self, other: int) -> Poly:
        return Poly.promote(other) - self

    def __mul__(self, other: Poly | int) -> Poly:
        if isinstance(other, int):
            if other == 0:
                return Poly()
            return Poly._raw({m: c * other for m, c in self.terms.items()})
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # --- serialisation ---------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical ascending order on ``(ea, ed)``."""
        return sorted(self.terms.items())

    def to_json(self) -> list[dict]:
        return [{"ea": ea, "ed": ed, "c": str(c)} for (ea, ed), c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: str | list) -> Poly:
        if isinstance(data, str):
            data = json.loads(data)
        out: dict[Monomial, int] = {}
        for t in data:
            key = (int(t["ea"]), int(t["ed"]))
            if key in out:
                raise ValueError(f"duplicate monomial {key}")
            out[key] = int(t["c"])
        return cls(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        # highest delta power first, alpha descending within
        for (ea, ed), c in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0]), reverse=True):
            factors = []
            if ea:
                factors.append("a" if ea == 1 else f"a^{ea}")
            if ed:
                factors.append("d" if ed == 1 else f"d^{ed}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if parts:
                parts.append(("-" if c < 0 else "+") + body)
            else:
                parts.append(("-" if c < 0 else "") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    @classmethod
    def parse(cls, text: str) -> Poly:
        """Inverse of ``str``: sums of ``c*a^i*d^j`` terms."""
        text = "".join(text.split())
        chunks = re.findall(r"[+-]?[^+-]+", text)
        if not text or "".join(chunks) != text:
            raise ValueError(f"cannot parse polynomial {text!r}")
        out = Poly()
        for chunk in chunks:
            sign = -1 if chunk[0] == "-" else 1
            c, ea, ed = 1, 0, 0
            for factor in chunk.lstrip("+-").split("*"):
                if factor.isdigit():
                    c *= int(factor)
                    continue
                fm = re.fullmatch(r"([ad])(?:\^(\d+))?", factor)
                if fm is None:
                    raise ValueError(f"bad factor {factor!r}")
                e = int(fm.group(2) or 1)
                if fm.group(1) == "a":
                    ea += e
                else:
                    ed += e
            out = out + Poly.monomial(ea, ed, sign * c)
        return out


A = Poly.monomial(1, 0)
D = Poly.monomial(0, 1)


# --- multiplication ----------------------------------------------------------

def _mul_dict(a: Poly, b: Poly) -> Poly:
    out: dict[Monomial, int] = {}
    get = out.get
    for (ea1, ed1), c1 in a.terms.items():
        for (ea2, ed2), c2 in b.terms.items():
            m = (ea1 + ea2, ed1 + ed2)
            out[m] = get(m, 0) + c1 * c2
    res = {m: c for m, c in out.items() if c}
    for ea, ed in res:
        if ea > EXPONENT_CAP or ed > EXPONENT_CAP:
            raise ExponentCapError(f"exponent {(ea, ed)} exceeds cap {EXPONENT_CAP}")
    return Poly._raw(res)


def _mul(a: Poly, b: Poly) -> Poly:
    if not a.terms or not b.terms:
        return Poly()
    if len(a) * len(b) < KRONECKER_THRESHOLD:
        return _mul_dict(a, b)
    return _mul_packed(a, b)


def _bounds(p: Poly) -> tuple[int, int, int, int]:
    eas = [m[0] for m in p.terms]
    eds = [m[1] for m in p.terms]
    return min(eas), max(eas), min(eds), max(eds)


def _pack(p: Poly, sa: int, sd: int, width: int, nbytes: int) -> int:
    """Pack ``p`` shifted by ``(sa, sd)`` with ``width`` slots per alpha row."""
    top = max((ea - sa) * width + (ed - sd) for ea, ed in p.terms) + 1
    pos = bytearray(nbytes * top)
    neg = bytearray(nbytes * top)
    # digit for a^ea d^ed sits at slot (ea - sa) * width + (ed - sd), little-endian
    for (ea, ed), c in p.terms.items():
        at = ((ea - sa) * width + (ed - sd)) * nbytes
        if c > 0:
            pos[at:at + nbytes] = c.to_bytes(nbytes, "little")
        else:
            neg[at:at + nbytes] = (-c).to_bytes(nbytes, "little")
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(v: int, nslots: int, sa: int, sd: int, width: int, nbytes: int) -> dict[Monomial, int] | None:
    """Balanced-digit decode of ``v``; None if it does not fit ``nslots``."""
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * nslots, "little")
    u = v + offset
    if u < 0 or u.bit_length() > 8 * nbytes * nslots:
        return None
    raw = u.to_bytes(nbytes * nslots, "little")
    out = {}
    for i in range(nslots):
        c = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        if c:
            ea, ed = divmod(i, width)
            out[(ea + sa, ed + sd)] = c
    return out


def _nbytes(bits: int) -> int:
    # one extra bit for the sign of a balanced digit
    return (bits + 1 + 7) // 8


def _mul_packed(a: Poly, b: Poly) -> Poly:
    a0, a1, d0, d1 = _bounds(a)
    b0, b1, e0, e1 = _bounds(b)
    if a1 + b1 > EXPONENT_CAP or d1 + e1 > EXPONENT_CAP:
        raise ExponentCapError(f"product exponent exceeds cap {EXPONENT_CAP}")
    width = (d1 - d0) + (e1 - e0) + 1
    bits = a.max_coeff_bits() + b.max_coeff_bits() + min(len(a), len(b)).bit_length()
    nbytes = _nbytes(bits)
    v = _pack(a, a0, d0, width, nbytes) * _pack(b, b0, e0, width, nbytes)
    nslots = ((a1 - a0) + (b1 - b0) + 1) * width
    terms = _unpack(v, nslots, a0 + b0, d0 + e0, width, nbytes)
    assert terms is not None, "packed product overflowed its digit bound"
    return Poly._raw(terms)


# --- division ------------------------------------------------------------------

def _exact_div_long(a: Poly, b: Poly) -> Poly:
    """Multivariate long division, lex order on (ea, ed), zero remainder."""
    (lba, lbd), lbc = b.leading_term()
    rem = dict(a.terms)
    q: dict[Monomial, int] = {}
    while rem:
        (ra, rd) = m = max(rem)
        c = rem[m]
        if ra < lba or rd < lbd or c % lbc:
            raise InexactDivisionError(f"{b} does not divide {a}")
        qm = (ra - lba, rd - lbd)
        qc = c // lbc
        q[qm] = qc
        for (ea, ed), bc in b.terms.items():
            t = (ea + qm[0], ed + qm[1])
            s = rem.get(t, 0) - qc * bc
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return Poly._raw(q)


def _exact_div_packed(a: Poly, b: Poly) -> Poly:
    a0, a1, d0, d1 = _bounds(a)
    b0, b1, e0, e1 = _bounds(b)
    # exponent ranges add under multiplication in each variable
    qa0, qa1, qd0, qd1 = a0 - b0, a1 - b1, d0 - e0, d1 - e1
    if min(qa0, qd0) < 0 or qa1 < qa0 or qd1 < qd0:
        raise InexactDivisionError(f"degree bounds rule out {b} dividing {a}")
    width = d1 - d0 + 1
    nslots = (qa1 - qa0 + 1) * width
    # Mignotte-style ceiling for the quotient's coefficients, via the
    # univariate image of degree < nslots
    norm_bits = (sum(c * c for c in a.terms.values()).bit_length() + 1) // 2
    ceiling = nslots + norm_bits + 1
    bits = a.max_coeff_bits() + 2
    while True:
        nbytes = _nbytes(bits)
        av = _pack(a, a0, d0, width, nbytes)
        bv = _pack(b, b0, e0, width, nbytes)
        qv, r = divmod(av, bv)
        if r:
            # a(X) = q(X) b(X) holds for every integer X when b | a
            raise InexactDivisionError(f"{b} does not divide {a}")
        terms = _unpack(qv, nslots, qa0, qd0, width, nbytes)
        if terms:
            q = Poly._raw(terms)
            if _mul(q, b) == a:
                return q
        if bits > ceiling:
            raise InexactDivisionError(f"{b} does not divide {a}")
        bits *= 2


def exact_div(a: Poly, b: Poly | int) -> Poly:
    """Return ``q`` with ``q * b == a``; raise if no such polynomial exists."""
    b = Poly.promote(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return Poly()
    if len(b) == 1:
        (mb, cb), = b.terms.items()
        out = {}
        for (ea, ed), c in a.terms.items():
            if ea < mb[0] or ed < mb[1] or c % cb:
                raise InexactDivisionError(f"{b} does not divide {a}")
            out[(ea - mb[0], ed - mb[1])] = c // cb
        return Poly._raw(out)
    if len(a) * len(b) < KRONECKER_THRESHOLD:
        return _exact_div_long(a, b)
    return _exact_div_packed(a, b)


# --- evaluation and named polynomials ------------------------------------------

def eval_int(p: Poly, alpha: int, delta: int) -> int:
    """Exact integer value of ``p`` at ``(alpha, delta)``."""
    by_ea: dict[int, int] = {}
    for (ea, ed), c in p.terms.items():
        by_ea[ea] = by_ea.get(ea, 0) + c * delta**ed
    return sum(v * alpha**ea for ea, v in by_ea.items())


def chebyshev_t(i: int) -> Poly:
    """Chebyshev polynomial of the first kind in delta, normalised ``T_0 = 2``."""
    if i < 0:
        raise ValueError("index must be non-negative")
    prev, cur = Poly.const(2), D
    if i == 0:
        return prev
    for _ in range(i - 1):
        prev, cur = cur, D * cur - prev
    return cur


def substitute_squares(p: Poly) -> Poly:
    """alpha -> alpha^2, delta -> delta^2."""
    return Poly({(2 * ea, 2 * ed): c for (ea, ed), c in p.terms.items()})


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def from_terms(terms: Iterable[tuple[int, int, int]]) -> Poly:
    out = Poly()
    for ea, ed, c in terms:
        out = out + Poly.monomial(ea, ed, c)
    return out
