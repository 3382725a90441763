"""Matrices of truncated Laurent series and the residue-trace pairing.

A :class:`LaurentMatrix` is a square grid of :class:`LaurentScalar`.
All entries share the matrix's declared precision implicitly via the
min over entries; operations propagate windows entrywise.
"""

from fractions import Fraction

from .errors import ParseError, PrecisionError, SingularGauge
from .series import INF, LaurentScalar, residue


class LaurentMatrix:
    __slots__ = ("n", "rows")

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.n = len(self.rows)
        for r in self.rows:
            if len(r) != self.n:
                raise ParseError("matrix must be square")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, n, prec=INF):
        return cls([[LaurentScalar.zero(prec) for _ in range(n)] for _ in range(n)])

    @classmethod
    def identity(cls, n):
        return cls([[LaurentScalar.one() if i == j else LaurentScalar.zero()
                     for j in range(n)] for i in range(n)])

    @classmethod
    def from_entries(cls, entries):
        return cls(entries)

    @classmethod
    def from_scalar_matrix(cls, kmat):
        """Lift a constant ground-field matrix."""
        return cls([[LaurentScalar.from_scalar(v) if v else LaurentScalar.zero()
                     for v in row] for row in kmat])

    @classmethod
    def scalar(cls, n, series):
        return cls([[series if i == j else LaurentScalar.zero()
                     for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        return LaurentMatrix([[a + b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return LaurentMatrix([[a - b for a, b in zip(ra, rb)]
                              for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return LaurentMatrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, LaurentMatrix):
            n = self.n
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = LaurentScalar.zero()
                    for k in range(n):
                        a = self.rows[i][k]
                        b = other.rows[k][j]
                        if not (a.is_zero() and a.is_exact) and not (b.is_zero() and b.is_exact):
                            acc = acc + a * b
                        else:
                            acc = acc + LaurentScalar.zero(_prod_prec(a, b))
                    row.append(acc)
                out.append(row)
            return LaurentMatrix(out)
        if isinstance(other, LaurentScalar) or isinstance(other, (int, Fraction)) \
                or type(other).__name__ == "Ext":
            return LaurentMatrix([[a * other for a in r] for r in self.rows])
        return NotImplemented

    __rmul__ = __mul__

    def matvec(self, vec):
        return [sum((self.rows[i][j] * vec[j] for j in range(self.n)),
                    LaurentScalar.zero()) for i in range(self.n)]

    def power(self, k):
        assert k >= 0
        out = LaurentMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def shift(self, k):
        return LaurentMatrix([[a.shift(k) for a in r] for r in self.rows])

    def truncate(self, prec):
        return LaurentMatrix([[a.truncate(prec) for a in r] for r in self.rows])

    def transpose(self):
        return LaurentMatrix([list(col) for col in zip(*self.rows)])

    def trace(self):
        acc = LaurentScalar.zero()
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def tau(self):
        """Apply t d/dt entrywise."""
        return LaurentMatrix([[a.tau() for a in r] for r in self.rows])

    def precision(self):
        return min((a.prec for r in self.rows for a in r), default=INF)

    def min_order(self):
        return min((a.order for r in self.rows for a in r), default=INF)

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def agrees(self, other, through=None):
        return all(a.agrees(b, through)
                   for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def constant_term(self):
        """The t^0 coefficient matrix (raises if unknown)."""
        return [[a.coeff(0) for a in r] for r in self.rows]

    def coeff_matrix(self, k):
        return [[a.coeff(k) for a in r] for r in self.rows]

    def inverse(self, digits=None):
        """Exact truncated inverse by Gauss-Jordan with valuation
        pivoting.  Raises SingularGauge when no unit pivot exists."""
        n = self.n
        work = [[self.rows[i][j] for j in range(n)] +
                [LaurentScalar.one() if i == j else LaurentScalar.zero() for j in range(n)]
                for i in range(n)]
        perm = list(range(n))
        for c in range(n):
            piv, piv_ord = None, None
            for r in range(c, n):
                entry = work[r][c]
                if not entry.is_zero():
                    if piv_ord is None or entry.order < piv_ord:
                        piv, piv_ord = r, entry.order
            if piv is None:
                if any(work[r][c].prec is not INF for r in range(c, n)):
                    raise PrecisionError("pivot undetectable at available precision")
                raise SingularGauge("matrix is singular")
            work[c], work[piv] = work[piv], work[c]
            inv_piv = work[c][c].inverse(digits)
            work[c] = [x * inv_piv for x in work[c]]
            for r in range(n):
                if r != c and not work[r][c].is_zero():
                    f = work[r][c]
                    work[r] = [x - f * y for x, y in zip(work[r], work[c])]
        _ = perm
        return LaurentMatrix([row[n:] for row in work])

    def __repr__(self):
        body = ",\n ".join("[" + ", ".join(repr(a) for a in r) + "]" for r in self.rows)
        return "LaurentMatrix(\n %s)" % body

    # -- serialization -------------------------------------------------

    def to_json(self):
        return [[a.to_json() for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, field, prec=INF):
        rows = []
        for r in data:
            rows.append([LaurentScalar.from_json(e, field, prec) for e in r])
        return cls(rows)


def _prod_prec(a, b):
    if a.prec is INF and b.prec is INF:
        return INF
    return min(a.order + b.prec, b.order + a.prec)


def pairing(a, b, nu):
    """The invariant symmetric form <A, B>_nu = Res[Tr(AB) nu]."""
    if a.n != b.n:
        raise ParseError("pairing of mismatched dimensions")
    return residue((a * b).trace(), nu)


def commutator(a, b):
    return a * b - b * a


def series_columns_matrix(cols):
    """Assemble column vectors (lists of LaurentScalar) into a matrix;
    the result may be non-square and is returned as a list of rows."""
    n = len(cols[0])
    return [[col[i] for col in cols] for i in range(n)]
