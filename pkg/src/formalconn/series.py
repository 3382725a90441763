"""Truncated Laurent series over an exact ground field.

A :class:`LaurentScalar` stores the finitely many known coefficients of
a formal Laurent series together with a *precision* bound: coefficients
at exponents >= ``prec`` are unknown.  Exact values (Laurent
polynomials) carry ``prec = INF`` and never lose digits.  Every
operation propagates the t-adic precision window; an operation that
would need an unknown coefficient raises ``PrecisionError`` instead of
silently truncating.

The session-wide default window for freshly created inexact values
(series inverses, logarithms, ...) is ``default_precision()`` digits, a
module-level setting.
"""

import math
from fractions import Fraction

from .errors import ParseError, PrecisionError, ZeroLeading
from .scalars import format_scalar, get_field, is_zero, parse_scalar

INF = math.inf

_DEFAULT_PRECISION = 24
PRECISION_FLOOR = 4


def default_precision():
    return _DEFAULT_PRECISION


def set_default_precision(n):
    """Set the session default window width (t-adic digits)."""
    global _DEFAULT_PRECISION
    if n < PRECISION_FLOOR:
        raise PrecisionError("default precision below floor %d" % PRECISION_FLOOR, needed=PRECISION_FLOOR)
    _DEFAULT_PRECISION = int(n)


class LaurentScalar:
    """A Laurent series known modulo t^prec."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec=INF):
        clean = {}
        for k, v in coeffs.items():
            if k < prec and not is_zero(v):
                clean[k] = v
        self.coeffs = clean
        self.prec = prec

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, prec=INF):
        return cls({}, prec)

    @classmethod
    def one(cls):
        return cls({0: Fraction(1)})

    @classmethod
    def t_power(cls, k, coeff=Fraction(1), prec=INF):
        return cls({k: coeff}, prec)

    @classmethod
    def from_scalar(cls, c, prec=INF):
        return cls({0: c}, prec)

    @classmethod
    def from_pairs(cls, pairs, prec=INF):
        d = {}
        for k, v in pairs:
            d[k] = d.get(k, 0) + v
        return cls(d, prec)

    # -- basic structure --------------------------------------------------

    @property
    def order(self):
        """Lowest exponent with a (known) nonzero coefficient; for a
        series that is zero to precision this is the precision bound."""
        if self.coeffs:
            return min(self.coeffs)
        return self.prec

    @property
    def is_exact(self):
        return self.prec is INF

    def is_zero(self):
        """Zero to the known precision (exactly zero when exact)."""
        return not self.coeffs

    def coeff(self, k):
        if k >= self.prec:
            raise PrecisionError("coefficient of t^%d unknown (prec %s)" % (k, self.prec),
                                 needed=k + 1)
        return self.coeffs.get(k, Fraction(0))

    def coeff_or_zero(self, k):
        return self.coeffs.get(k, Fraction(0))

    def support(self):
        return sorted(self.coeffs)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LaurentScalar(self.coeffs, prec)

    def window(self):
        return (self.order, self.prec)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        d = dict(self.coeffs)
        for k, v in other.coeffs.items():
            d[k] = d.get(k, 0) + v
        return LaurentScalar(d, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "Ext":
            if is_zero(other):
                return LaurentScalar.zero(self.prec)
            return LaurentScalar({k: v * other for k, v in self.coeffs.items()}, self.prec)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        prec = _mul_prec(self, other)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k < prec:
                    out[k] = out.get(k, 0) + a * b
        return LaurentScalar(out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def shift(self, k):
        """Multiply by t^k (exact)."""
        prec = self.prec if self.prec is INF else self.prec + k
        return LaurentScalar({e + k: v for e, v in self.coeffs.items()}, prec)

    def inverse(self, digits=None):
        """Multiplicative inverse.  Monomials invert exactly; everything
        else is computed to the available window (or the session default
        for exact non-monomial input)."""
        if self.is_zero():
            raise ZeroLeading("inverse of zero(-to-precision) series")
        s = self.order
        lead = self.coeffs[s]
        if len(self.coeffs) == 1 and self.is_exact:
            inv_lead = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else lead.inverse()
            return LaurentScalar({-s: inv_lead})
        if digits is None:
            digits = default_precision() if self.prec is INF else int(self.prec - s)
        if digits < PRECISION_FLOOR:
            raise PrecisionError("inverse with window %d below floor" % digits,
                                 needed=s + PRECISION_FLOOR)
        inv_lead = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else lead.inverse()
        # u = self / (lead * t^s) = 1 + eps; invert by power series recurrence.
        u = {k - s: v * inv_lead for k, v in self.coeffs.items() if k - s < digits}
        out = {0: _one_like(lead)}
        for k in range(1, digits):
            acc = None
            for j, uj in u.items():
                if 0 < j <= k:
                    term = uj * out.get(k - j, 0)
                    acc = term if acc is None else acc + term
            if acc is not None and not is_zero(acc):
                out[k] = -acc
        res = {k - s: v * inv_lead for k, v in out.items()}
        return LaurentScalar(res, -s + digits)

    def derivative(self):
        """d/dt, exact on the known window."""
        prec = self.prec if self.prec is INF else self.prec - 1
        return LaurentScalar({k - 1: k * v for k, v in self.coeffs.items() if k != 0}, prec)

    def tau(self):
        """t * d/dt; preserves exponents so the window survives."""
        return LaurentScalar({k: k * v for k, v in self.coeffs.items() if k != 0}, self.prec)

    # -- comparisons -------------------------------------------------------

    def agrees(self, other, through=None):
        """Equality over the shared precision window (optionally only
        through exponent ``through`` exclusive)."""
        other = _lift(other)
        bound = min(self.prec, other.prec)
        if through is not None:
            bound = min(bound, through)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff_or_zero(k) == other.coeff_or_zero(k)
                   for k in keys if k < bound)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "Ext":
            other = LaurentScalar.from_scalar(other) if not is_zero(other) else LaurentScalar.zero()
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self.coeffs == other.coeffs and self.prec == other.prec

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0])), self.prec))

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for k in self.support():
                c = format_scalar(self.coeffs[k])
                if k == 0:
                    parts.append(c)
                elif k == 1:
                    parts.append("(%s)*t" % c)
                else:
                    parts.append("(%s)*t^%d" % (c, k))
            body = " + ".join(parts)
        if self.prec is INF:
            return body
        return "%s + O(t^%d)" % (body, self.prec)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return [[k, format_scalar(self.coeffs[k])] for k in self.support()]

    @classmethod
    def from_json(cls, data, field, prec=INF):
        pairs = []
        for item in data:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ParseError("series term must be [exponent, coefficient]")
            k, c = item
            if not isinstance(k, int):
                raise ParseError("exponent must be an integer, got %r" % (k,))
            pairs.append((k, parse_scalar(str(c), field)))
        return cls.from_pairs(pairs, prec)


def _lift(x):
    if isinstance(x, LaurentScalar):
        return x
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "Ext":
        return LaurentScalar.zero() if is_zero(x) else LaurentScalar.from_scalar(x)
    return NotImplemented


def _one_like(c):
    return Fraction(1) if isinstance(c, (int, Fraction)) else c.field.one()


def _mul_prec(a, b):
    if a.prec is INF and b.prec is INF:
        return INF
    return min(a.order + b.prec, b.order + a.prec)


class OneForm:
    """A nonzero one-form nu = f dt.  Its order is the t-order of f, so
    dt/t has order -1 and dt has order 0."""

    __slots__ = ("f",)

    def __init__(self, f):
        if f.is_zero():
            raise ZeroLeading("one-form must be nonzero")
        self.f = f

    @classmethod
    def dt_over_t(cls):
        return cls(LaurentScalar.t_power(-1))

    @classmethod
    def dt(cls):
        return cls(LaurentScalar.one())

    @classmethod
    def dt_over_t_pow(cls, ell):
        """dt / t^ell, of order -ell."""
        return cls(LaurentScalar.t_power(-ell))

    @property
    def order(self):
        return self.f.order

    def scale(self, series):
        return OneForm(self.f * series)

    def __repr__(self):
        return "(%r) dt" % self.f

    def to_json(self):
        return {"order": self.order, "coeffs": self.f.to_json()}

    @classmethod
    def from_json(cls, data, field):
        return cls(LaurentScalar.from_json(data["coeffs"], field))


def residue(a, nu):
    """Res(a * nu): the t^(-1) coefficient of a*f for nu = f dt.

    Raises PrecisionError when that coefficient is outside the known
    window of the product.
    """
    prod = a * nu.f
    if prod.prec is not INF and prod.prec <= -1:
        raise PrecisionError("residue coefficient t^-1 unknown", needed=0)
    return prod.coeff_or_zero(-1)


def tau_of(nu):
    """The scaling carried by the vector field tau_nu = (1/f) d/dt: apply
    as series -> derivative / f.  Returned as the multiplier series 1/f."""
    return nu.f.inverse()
