"""Exact ground-field arithmetic.

The library computes over Q or over a cyclotomic extension Q(zeta_m).
Rational values are plain ``fractions.Fraction`` objects; extension
elements are ``Ext`` instances holding a coordinate vector in the power
basis 1, z, ..., z^(d-1) modulo the m-th cyclotomic polynomial.  The two
kinds interoperate: Fraction (or int) mixes freely into Ext arithmetic.

Field names accepted throughout: "Q", "Q(i)" (= Q(zeta_4)) and
"Q(zeta_m)" for small m.
"""

from fractions import Fraction

from .errors import NonsplitField, ParseError

_FIELD_CACHE = {}


def _cyclotomic_poly(m):
    # x^m - 1 divided by the product of Phi_d over proper divisors d | m.
    poly = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            phi_d = _cyclotomic_poly(d)
            poly = _polydiv_exact(poly, phi_d)
    return poly


def _polydiv_exact(num, den):
    num = list(num)
    dd = len(den) - 1
    out = [Fraction(0)] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] / den[dd]
        out[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] -= c * den[j]
    assert all(c == 0 for c in num[:dd]), "nonzero remainder"
    return out


class GroundField:
    """The cyclotomic field Q(zeta_m); m=1 is Q itself, m=4 is Q(i)."""

    def __init__(self, m):
        if m in (1, 2):
            m = 1
        self.m = m
        if m == 1:
            self.degree = 1
            self.modulus = None
            self._reduction = None
        else:
            mod = _cyclotomic_poly(m)
            d = len(mod) - 1
            self.degree = d
            self.modulus = mod
            # rows: z^(d+k) expressed in the power basis, k = 0..d-2
            rows = []
            cur = [-mod[i] / mod[d] for i in range(d)]
            rows.append(list(cur))
            for _ in range(d - 2):
                top = cur[d - 1]
                cur = [Fraction(0)] + cur[:-1]
                for i in range(d):
                    cur[i] += top * rows[0][i]
                rows.append(list(cur))
            self._reduction = rows

    @property
    def name(self):
        if self.m == 1:
            return "Q"
        if self.m == 4:
            return "Q(i)"
        return "Q(zeta_%d)" % self.m

    def __repr__(self):
        return "GroundField(%s)" % self.name

    def __eq__(self, other):
        return isinstance(other, GroundField) and other.m == self.m

    def __hash__(self):
        return hash(("GroundField", self.m))

    # -- element constructors ------------------------------------------

    def zero(self):
        return Fraction(0) if self.m == 1 else Ext(self, (Fraction(0),) * self.degree)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q):
        q = Fraction(q)
        if self.m == 1:
            return q
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = q
        return Ext(self, tuple(coeffs))

    def from_coords(self, coords):
        coords = [Fraction(c) for c in coords]
        if self.m == 1:
            assert len(coords) == 1
            return coords[0]
        assert len(coords) == self.degree
        return Ext(self, tuple(coords))

    def generator(self):
        if self.m == 1:
            raise NonsplitField("Q has no nontrivial root of unity")
        coords = [Fraction(0)] * self.degree
        coords[1 if self.degree > 1 else 0] = Fraction(1)
        if self.degree == 1:  # m = 1 only; unreachable
            raise NonsplitField("degenerate field")
        return Ext(self, tuple(coords))

    def coerce(self, x):
        if isinstance(x, Ext):
            if x.field is not self and x.field != self:
                raise ParseError("mixed ground fields: %s vs %s" % (x.field.name, self.name))
            return x
        return self.from_rational(x)

    # -- roots of unity -------------------------------------------------

    def root_of_unity(self, e):
        """A primitive e-th root of unity, or raise NonsplitField."""
        if e == 1:
            return self.one()
        if e == 2:
            return self.from_rational(-1)
        if self.m == 1:
            raise NonsplitField("no primitive %d-th root of unity in Q" % e)
        if self.m % e == 0:
            return self.generator() ** (self.m // e)
        # Q(zeta_m) contains the 2m-th roots when m is odd.
        if self.m % 2 == 1 and (2 * self.m) % e == 0:
            cand = -(self.generator() ** (((2 * self.m) // e + 1) // 2 % self.m))
            if _order_of_root(cand, e):
                return cand
            for k in range(self.m):
                cand = -(self.generator() ** k)
                if _order_of_root(cand, e):
                    return cand
        raise NonsplitField("no primitive %d-th root of unity in %s" % (e, self.name))

    def has_root_of_unity(self, e):
        try:
            self.root_of_unity(e)
            return True
        except NonsplitField:
            return False


def _order_of_root(x, e):
    p = x
    for k in range(1, e):
        if p == 1:
            return False
        p = p * x
    return p == 1


class Ext:
    """Element of Q(zeta_m) in the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _lift(self, other):
        if isinstance(other, Ext):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Ext(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Ext(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Ext(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Ext(self.field, tuple(a * other for a in self.coords))
        if not isinstance(other, Ext):
            return NotImplemented
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        red = self.field._reduction
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = red[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return Ext(self.field, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self):
        # Solve (mult-by-self) x = 1 by Gaussian elimination over Q.
        d = self.field.degree
        cols = []
        basis = [Fraction(0)] * d
        for j in range(d):
            basis = [Fraction(0)] * d
            basis[j] = Fraction(1)
            col = self * Ext(self.field, tuple(basis))
            cols.append(list(col.coords))
        aug = [[cols[j][i] for j in range(d)] + [Fraction(1) if i == 0 else Fraction(0)]
               for i in range(d)]
        for c in range(d):
            piv = next((r for r in range(c, d) if aug[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("division by zero in %s" % self.field.name)
            aug[c], aug[piv] = aug[piv], aug[c]
            pv = aug[c][c]
            aug[c] = [v / pv for v in aug[c]]
            for r in range(d):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
        return Ext(self.field, tuple(aug[i][d] for i in range(d)))

    def __eq__(self, other):
        if isinstance(other, Ext):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and all(c == 0 for c in self.coords[1:])
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field.m, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return "Ext(%s, %s)" % (self.field.name, format_scalar(self))


# -- generic helpers (work on Fraction and Ext alike) ------------------


def field_of(x):
    return x.field if isinstance(x, Ext) else _FIELD_CACHE.setdefault(1, GroundField(1))


def get_field(name):
    m = _parse_field_name(name)
    if m not in _FIELD_CACHE:
        _FIELD_CACHE[m] = GroundField(m)
    return _FIELD_CACHE[m]


def _parse_field_name(name):
    name = name.strip()
    if name in ("Q", "QQ"):
        return 1
    if name in ("Q(i)", "Qi", "Q(I)"):
        return 4
    if name.startswith("Q(zeta_") and name.endswith(")"):
        try:
            return int(name[len("Q(zeta_"):-1])
        except ValueError:
            pass
    raise ParseError("unknown field name %r" % name)


def is_zero(x):
    return not x if isinstance(x, Ext) else x == 0


def is_rational_value(x):
    if isinstance(x, (int, Fraction)):
        return True
    return all(c == 0 for c in x.coords[1:])


def as_fraction(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if is_rational_value(x):
        return x.coords[0]
    raise NonsplitField("value is not rational: %s" % format_scalar(x))


def scalar_coords(x):
    if isinstance(x, Ext):
        return list(x.coords)
    return [Fraction(x)]


def sort_key(x):
    """Deterministic total order on ground-field elements: lexicographic
    on (numerator, denominator) per power-basis coordinate."""
    out = []
    for c in scalar_coords(x):
        out.append(c.numerator)
        out.append(c.denominator)
    return tuple(out)


def nth_root_in_field(x, n, field):
    """An exact n-th root of x in the field, or None.

    Rational radicands are extracted by integer root finding; for even n
    the nonnegative root is returned.  Non-rational radicands are only
    matched against rational-times-root-of-unity candidates.
    """
    if is_zero(x):
        return field.zero()
    if is_rational_value(x):
        q = as_fraction(x)
        neg = q < 0
        if neg and n % 2 == 0:
            # try a root of unity twist: x = (zeta * r)^n needs zeta^n = -1
            root = _rational_nth_root(-q, n)
            if root is None:
                return None
            try:
                zeta = field.root_of_unity(2 * n)
            except NonsplitField:
                return None
            return zeta * field.from_rational(root)
        root = _rational_nth_root(abs(q), n)
        if root is None:
            return None
        return field.from_rational(-root if neg else root)
    return None


def _rational_nth_root(q, n):
    if q < 0:
        r = _rational_nth_root(-q, n)
        return None if r is None else -r
    num = _int_nth_root(q.numerator, n)
    den = _int_nth_root(q.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_nth_root(a, n):
    if a == 0:
        return 0
    r = round(a ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** n == a:
            return cand
    return None


# -- parsing / printing ------------------------------------------------


def format_scalar(x):
    """Canonical string form: "p/q" over Q, "p/q+r/s*i" over Q(i) and
    "p/q+r/s*z+..." for general cyclotomic fields."""
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return "%d/%d" % (q.numerator, q.denominator)
    sym = "i" if x.field.m == 4 else "z"
    parts = []
    for k, c in enumerate(x.coords):
        if k == 0:
            parts.append("%d/%d" % (c.numerator, c.denominator))
        elif c != 0:
            mono = sym if k == 1 else "%s^%d" % (sym, k)
            frag = "%d/%d*%s" % (c.numerator, c.denominator, mono)
            parts.append(frag if c < 0 else "+" + frag)
    if len(parts) == 1:
        return parts[0]
    return "".join(p if p.startswith(("+", "-")) or i == 0 else "+" + p
                   for i, p in enumerate(parts))


def parse_scalar(text, field):
    """Inverse of :func:`format_scalar` (also accepts bare integers)."""
    text = text.replace(" ", "")
    if not text:
        raise ParseError("empty scalar")
    sym = "i" if field.m == 4 else "z"
    coords = [Fraction(0)] * max(field.degree, 1)
    for term in _split_terms(text):
        coef, power = _parse_term(term, sym)
        if power >= len(coords):
            raise ParseError("power %d exceeds field degree in %r" % (power, text))
        coords[power] += coef
    if field.m == 1:
        if len(coords) > 1 and any(coords[1:]):
            raise ParseError("non-rational literal %r over Q" % text)
        return coords[0]
    return field.from_coords(coords)


def _split_terms(text):
    terms, cur = [], ""
    for idx, ch in enumerate(text):
        if ch in "+-" and idx > 0 and text[idx - 1] not in "+-*/^(":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    return [t for t in terms if t not in ("", "+")]


def _parse_term(term, sym):
    if term.startswith("+"):
        term = term[1:]
    sign = 1
    if term.startswith("-"):
        sign = -1
        term = term[1:]
    if "*" in term:
        coef_s, mono = term.split("*", 1)
    elif term.startswith(sym):
        coef_s, mono = "1", term
    else:
        coef_s, mono = term, ""
    if mono == "":
        power = 0
    elif mono == sym:
        power = 1
    elif mono.startswith(sym + "^"):
        power = int(mono[len(sym) + 1:])
    else:
        raise ParseError("bad monomial %r" % term)
    try:
        coef = Fraction(coef_s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad coefficient %r" % coef_s) from exc
    return sign * coef, power
