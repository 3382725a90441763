"""Formal types and the relative affine Weyl group action.

A formal type of depth r on torus data (e, m) is the truncated Cartan
representative A = sum_j sum_{d=-r}^0 a_{j,d} varpi_E^d eps_j; the
affine Weyl group Sigma_m x (Z/e)^m x Z^m acts by permuting blocks,
twisting varpi-degrees by roots of unity, and shifting the degree-zero
coefficients by (1/e) Z.  Orbit equivalence decides formal isomorphism.
"""

import math
import warnings
from fractions import Fraction

from .errors import NonsplitField, NotRegular, ShapeMismatch
from .scalars import (as_fraction, format_scalar, is_rational_value, is_zero,
                      parse_scalar, sort_key)
from .series import LaurentScalar
from .matrices import LaurentMatrix
from .strata import Stratum, is_regular
from .torus import TorusData, ToralElement


class FormalType:
    """Coefficients a_{j,d} of the Cartan representative, d in [-r, 0]."""

    __slots__ = ("torus", "depth", "coeffs", "field")

    def __init__(self, torus, depth, coeffs, field):
        assert len(coeffs) == torus.m
        self.torus = torus
        self.depth = depth
        self.coeffs = [list(row) for row in coeffs]
        for row in self.coeffs:
            assert len(row) == depth + 1
        self.field = field

    @property
    def e(self):
        return self.torus.e

    @property
    def m(self):
        return self.torus.m

    @property
    def n(self):
        return self.torus.n

    def leading(self):
        return [row[0] for row in self.coeffs]

    def toral(self):
        blocks = []
        for row in self.coeffs:
            blocks.append({-self.depth + i: c for i, c in enumerate(row)
                           if not is_zero(c)})
        return ToralElement(self.torus, blocks)

    def realization(self):
        return self.toral().realization()

    def induced_stratum(self):
        return Stratum(self.torus.context(), self.depth, self.realization())

    def same_shape(self, other):
        return self.torus == other.torus and self.depth == other.depth

    def __eq__(self, other):
        if not isinstance(other, FormalType):
            return NotImplemented
        return self.same_shape(other) and all(
            a == b for ra, rb in zip(self.coeffs, other.coeffs)
            for a, b in zip(ra, rb))

    def sorted_blocks(self):
        order = sorted(range(self.m), key=lambda j: tuple(sort_key(c) for c in self.coeffs[j]))
        return FormalType(self.torus, self.depth,
                          [self.coeffs[j] for j in order], self.field)

    def to_json(self):
        return {"e": self.e, "m": self.m, "r": self.depth,
                "coeffs": [[format_scalar(c) for c in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, data, field):
        torus = TorusData(data["e"], data["m"])
        coeffs = [[parse_scalar(str(c), field) for c in row] for row in data["coeffs"]]
        return cls(torus, data["r"], coeffs, field)

    def __repr__(self):
        rows = "; ".join(",".join(format_scalar(c) for c in row) for row in self.coeffs)
        return "FormalType(e=%d, m=%d, r=%d: %s)" % (self.e, self.m, self.depth, rows)


class WeylElement:
    """Element of the relative affine Weyl group: a block permutation,
    per-block Galois twists in Z/e, and per-block integer translations."""

    __slots__ = ("perm", "galois", "transl")

    def __init__(self, perm, galois, transl):
        self.perm = tuple(perm)
        self.galois = tuple(galois)
        self.transl = tuple(transl)

    @classmethod
    def identity(cls, m):
        return cls(tuple(range(m)), (0,) * m, (0,) * m)

    def is_identity(self):
        return (self.perm == tuple(range(len(self.perm)))
                and all(g == 0 for g in self.galois)
                and all(d == 0 for d in self.transl))

    def compose(self, other):
        """self after other: (self*other) . A = self . (other . A)."""
        m = len(self.perm)
        assert len(other.perm) == m
        perm = tuple(self.perm[other.perm[j]] for j in range(m))
        inv1 = _inverse_perm(self.perm)
        galois = tuple(self.galois[j] + other.galois[inv1[j]] for j in range(m))
        transl = tuple(self.transl[j] + other.transl[inv1[j]] for j in range(m))
        return WeylElement(perm, galois, transl)

    def inverse(self):
        m = len(self.perm)
        inv = _inverse_perm(self.perm)
        galois = tuple(-self.galois[self.perm[j]] for j in range(m))
        transl = tuple(-self.transl[self.perm[j]] for j in range(m))
        return WeylElement(inv, galois, transl)

    def normalized(self, e):
        return WeylElement(self.perm, tuple(g % e for g in self.galois), self.transl)

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return (self.perm, self.galois, self.transl) == \
            (other.perm, other.galois, other.transl)

    def to_json(self):
        return {"perm": list(self.perm), "galois": list(self.galois),
                "translation": list(self.transl)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["perm"]), tuple(data["galois"]),
                   tuple(data["translation"]))

    def __repr__(self):
        return "WeylElement(perm=%r, galois=%r, transl=%r)" % (
            self.perm, self.galois, self.transl)


def _inverse_perm(perm):
    inv = [0] * len(perm)
    for j, p in enumerate(perm):
        inv[p] = j
    return tuple(inv)


def validate_formal_type(a):
    """All invariants, with diagnostics: gcd(r,e) = 1 at positive depth,
    nonzero regular leading data, the depth-zero mod-Z condition, and
    regularity of the induced stratum."""
    diags = []
    r, e = a.depth, a.e
    if r > 0:
        if math.gcd(r, e) != 1:
            diags.append("gcd(depth, e) = %d != 1" % math.gcd(r, e))
        lead = a.leading()
        if any(is_zero(c) for c in lead):
            diags.append("a leading coefficient vanishes")
        if len(set(map(sort_key, lead))) != len(lead):
            diags.append("leading coefficients are not pairwise distinct")
    else:
        if e != 1:
            diags.append("depth zero requires a split torus (e = 1)")
        vals = [row[-1] for row in a.coeffs]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                d = vals[i] - vals[j]
                if is_rational_value(d) and as_fraction(d).denominator == 1:
                    diags.append("coefficients %d and %d congruent modulo Z" % (i, j))
    if not diags:
        try:
            report = is_regular(a.induced_stratum(), a.field)
            if not report:
                diags.append("induced stratum not regular: %s" % report.reason)
        except NonsplitField as exc:
            diags.append("regularity undecidable: %s" % exc)
        except NotRegular as exc:
            diags.append(str(exc))
    return (not diags), diags


def weyl_act(w, a):
    """The affine action: blocks permuted, varpi-degrees Galois twisted,
    degree-zero coefficients shifted by -transl/e."""
    m, e, r = a.m, a.e, a.depth
    if len(w.perm) != m:
        raise ShapeMismatch("Weyl element on %d blocks applied to %d blocks"
                            % (len(w.perm), m))
    zeta = None
    if any(g % e for g in w.galois):
        zeta = a.field.root_of_unity(e)  # NonsplitField when unavailable
    inv = _inverse_perm(w.perm)
    new_coeffs = []
    for j in range(m):
        src = inv[j]
        row = list(a.coeffs[src])
        g = w.galois[j] % e
        if g and zeta is not None:
            tw = []
            for i, c in enumerate(row):
                d = -r + i
                tw.append(c * zeta ** ((g * d) % e))
            row = tw
        row[-1] = row[-1] - Fraction(w.transl[j], e)
        new_coeffs.append(row)
    return FormalType(a.torus, r, new_coeffs, a.field)


def orbit_equivalent(a, b):
    """Search the finite Weyl data for the unique w with
    weyl_act(w, b) = a; returns None when the types are not in the same
    orbit (or have different shapes/depths).

    When the field lacks the e-th roots of unity (e > 2) the Galois
    twists are skipped with a warning and the search runs over the
    permutation-translation subgroup only.
    """
    if not a.same_shape(b):
        return None
    m, e, r = a.m, a.e, a.depth
    field = a.field
    if field.has_root_of_unity(e):
        galois_range = range(e)
        zeta = field.root_of_unity(e) if e > 1 else None
    else:
        warnings.warn("field %s lacks %d-th roots of unity; orbit search "
                      "restricted to permutations and translations"
                      % (field.name, e))
        galois_range = (0,)
        zeta = None
    import itertools
    for perm in itertools.permutations(range(m)):
        inv = _inverse_perm(perm)
        for galois in itertools.product(galois_range, repeat=m):
            transl = []
            ok = True
            for j in range(m):
                src = inv[j]
                row = b.coeffs[src]
                g = galois[j] % e
                cand = []
                for i, c in enumerate(row):
                    d = -r + i
                    cand.append(c * zeta ** ((g * d) % e) if (g and zeta is not None) else c)
                for i in range(r):
                    if cand[i] != a.coeffs[j][i]:
                        ok = False
                        break
                if not ok:
                    break
                diff = cand[-1] - a.coeffs[j][-1]
                scaled = diff * e
                if not is_rational_value(scaled):
                    ok = False
                    break
                frac = as_fraction(scaled)
                if frac.denominator != 1:
                    ok = False
                    break
                transl.append(int(frac))
            if ok:
                return WeylElement(perm, galois, tuple(transl))
    return None


def weyl_half_sum(torus):
    """The per-block half sum of positive coroots in the upper
    triangular ordering: diag((e-1)/2 - p) in each block."""
    e, m = torus.e, torus.m
    n = torus.n
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    for j in range(m):
        for p in range(e):
            u = j * e + p
            rows[u][u] = LaurentScalar.from_scalar(Fraction(e - 1, 2) - p)
    return LaurentMatrix(rows)
