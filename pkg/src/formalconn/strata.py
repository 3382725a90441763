"""Strata: depth data attached to a parahoric filtration.

A stratum is (P, r, beta) with beta in P^(-r)/P^(1-r) stored through a
representative matrix under a fixed one-form of order -1.  This module
decides fundamentality through the stratum characteristic polynomial,
produces the gcd reduction along the sub-chain L'^j = L^(jg), splits
fundamental strata by Hensel lifting the coprime factorization of that
polynomial, and classifies regular strata by recursive splitting.
"""

import math
from fractions import Fraction

from .errors import (GcdViolation, IrreducibleStratum, NonsplitField, NotRegular,
                     PrecisionError)
from .linalg import minpoly
from .matrices import LaurentMatrix
from .omodule import (column_echelon, combine, kernel_columns, matrix_columns,
                      preimage_lattice)
from .parahoric import (LatticeChain, ParahoricContext, filtration_degree,
                        graded_component, in_filtration)
from .polys import (charpoly_series, is_power_of_x, kpoly_deg, kpoly_factor,
                    kpoly_format, kpoly_is_squarefree, kpoly_mul, kpoly_trim,
                    hensel_lift, spoly_eval_matrix)
from .scalars import Ext, get_field, is_zero, nth_root_in_field, sort_key
from .series import INF, LaurentScalar, OneForm

HENSEL_GUARD = 8


def infer_field(*matrices):
    for m in matrices:
        for row in m.rows:
            for entry in row:
                for c in entry.coeffs.values():
                    if isinstance(c, Ext):
                        return c.field
    return get_field("Q")


class Stratum:
    """(P, r, beta) with the representative beta_rep in P^(-r)."""

    __slots__ = ("ctx", "r", "beta", "nu")

    def __init__(self, ctx, r, beta, nu=None):
        if nu is None:
            nu = OneForm.dt_over_t()
        if nu.order != -1:
            raise GcdViolation("stratum representatives are stored against a form of order -1")
        self.ctx = ctx
        self.r = r
        self.beta = beta
        self.nu = nu
        deg = filtration_degree(beta, ctx)
        if deg < -r:
            raise GcdViolation("representative has filtration degree %s < -r = %d" % (deg, -r))

    @property
    def n(self):
        return self.ctx.n

    @property
    def e(self):
        return self.ctx.period

    @property
    def slope(self):
        return Fraction(self.r, self.e)

    def graded_rep(self):
        return graded_component(self.beta, self.ctx, -self.r)

    def translate_equal(self, other):
        """Stratum equality: same depth, same chain up to translation,
        same image in P^(-r)/P^(1-r).

        Both contexts are base-point normalized (L^0 = o^n), and the
        only normalized translates differ by multiples of e, which fix
        the phase vector; so the chains coincide exactly and the graded
        patterns (built from phase differences) compare directly."""
        if self.r != other.r or self.n != other.n or self.e != other.e:
            return False
        if self.ctx.phases != other.ctx.phases:
            return False
        return self.graded_rep().pattern == other.graded_rep().pattern

    def to_json(self):
        return {"blocks": list(self.ctx.chain.blocks), "r": self.r,
                "beta": self.beta.to_json(), "nu": self.nu.to_json()}

    def __repr__(self):
        return "Stratum(blocks=%r, r=%d)" % (self.ctx.chain.blocks, self.r)


class StratumCharPoly:
    """Monic degree-n characteristic polynomial of the y-coset."""

    __slots__ = ("poly",)

    def __init__(self, poly):
        self.poly = kpoly_trim(poly)

    @property
    def degree(self):
        return kpoly_deg(self.poly)

    def __repr__(self):
        return "StratumCharPoly(%s)" % kpoly_format(self.poly)

    def format(self):
        return kpoly_format(self.poly)


def stratum_char_poly(s):
    """char poly of y = beta^(e/g) t^(r/g) + P^1 via the Levi
    identification; g = gcd(r, e).

    Multiplying by t^(r/g) only relocates coefficient slots, so y's
    Levi pattern is the (e/g)-th power of the leading pattern of beta
    and the computation stays inside constant matrices.
    """
    g = math.gcd(s.r, s.e) if s.r else s.e
    pat = s.graded_rep()
    power = pat
    for _ in range(s.e // g - 1):
        power = power.compose(pat)
    from .linalg import charpoly
    return StratumCharPoly(charpoly(power.pattern))


def is_fundamental(s):
    """True iff the gcd-reduced stratum's characteristic polynomial has
    a nonzero root; decided through the equivalent graded criterion
    (the leading term is not nilpotent on gr of the chain)."""
    red = reduce_stratum(s)
    return not red.graded_rep().is_nilpotent()


def reduce_stratum(s):
    """The canonical reduction along the sub-chain L'^j = L^(jg) with
    g = gcd(r, e); afterwards gcd(r', e') = 1 (and r = 0 lands on the
    maximal parahoric).  Slope is preserved."""
    g = math.gcd(s.r, s.e) if s.r else s.e
    if g == 1:
        return s
    e_new = s.e // g
    phases = tuple(p // g for p in s.ctx.phases)
    counts = {}
    for p in phases:
        counts[p] = counts.get(p, 0) + 1
    blocks = tuple(counts.get(e_new - 1 - b, 0) for b in range(e_new))
    ctx = ParahoricContext(LatticeChain(s.n, blocks), phases, "grouped")
    return Stratum(ctx, s.r // g, s.beta, s.nu)


class SplitPart:
    """One summand of a split stratum: ambient coordinate slots (after
    the basis change) plus the induced stratum in its own coordinates."""

    __slots__ = ("slots", "stratum")

    def __init__(self, slots, stratum):
        self.slots = slots
        self.stratum = stratum

    def __repr__(self):
        return "SplitPart(slots=%r, %r)" % (self.slots, self.stratum)


def split_stratum(s, field=None):
    """Split a fundamental stratum along the coprime factorization of
    its characteristic polynomial.

    Returns (g, parts): a basis change g in GL_n(o) stabilizing the
    chain, such that Ad(g^-1)(beta) is block diagonal modulo P^(1-r)
    with respect to the parts' coordinate slots; parts are sorted by
    the total order on their phi-roots.

    Raises IrreducibleStratum for pure strata (single linear factor
    power) and NonsplitField when phi does not factor over the field.
    """
    if field is None:
        field = infer_field(s.beta)
    if s.r > 0 and math.gcd(s.r, s.e) != 1:
        raise GcdViolation("split requires gcd(r, e) = 1; reduce first")
    if not is_fundamental(s):
        raise GcdViolation("split requires a fundamental stratum")
    phi = stratum_char_poly(s).poly
    factors = kpoly_factor(phi, field)
    if len(factors) == 1:
        fac, _ = factors[0]
        if kpoly_deg(fac) == 1:
            raise IrreducibleStratum("pure stratum: phi = %s" % kpoly_format(phi))
        raise NonsplitField("phi has no root in %s: %s" % (field.name, kpoly_format(phi)))
    groups = []
    for fac, mult in factors:
        power = [field.one()] if field.m != 1 else [Fraction(1)]
        for _ in range(mult):
            power = kpoly_mul(power, fac)
        groups.append((fac, power))
    groups.sort(key=_group_sort_key)

    digits = s.r * s.n + HENSEL_GUARD
    y_tilde = _power_truncated(s.beta, s.e, digits).shift(s.r).truncate(digits)
    phi_tilde = [c.truncate(digits) for c in charpoly_series(y_tilde)]

    kernels = []
    rest = groups
    for fac, gpoly in groups[:-1]:
        hpoly = [field.one() if field.m != 1 else Fraction(1)]
        for f2, p2 in rest:
            if f2 is not fac:
                hpoly = kpoly_mul(hpoly, p2)
        glift, _ = hensel_lift(phi_tilde, gpoly, hpoly, digits)
        kernels.append(_kernel_of_poly(glift, y_tilde))
    # last part: kernel of the lifted product of all other factors
    fac_last, gpoly_last = groups[-1]
    hpoly_last = [field.one() if field.m != 1 else Fraction(1)]
    for f2, p2 in groups[:-1]:
        hpoly_last = kpoly_mul(hpoly_last, p2)
    glift_last, _ = hensel_lift(phi_tilde, gpoly_last, hpoly_last, digits)
    kernels.append(_kernel_of_poly(glift_last, y_tilde))

    dims = [len(k) for k in kernels]
    if sum(dims) != s.n:
        raise PrecisionError("Hensel kernels have total dimension %d != %d; "
                             "increase the guard" % (sum(dims), s.n))
    g, slot_lists = _adapted_basis_change(s.ctx, kernels)
    beta_conj = g.inverse() * s.beta * g
    if not off_block_filtration_ok(s.ctx, beta_conj, slot_lists, s.r):
        raise PrecisionError("conjugated representative is not split at level r")
    parts = []
    for slots in slot_lists:
        sub_ctx, sub_beta, picked = _restrict_to_slots(s.ctx, beta_conj, slots, s.r)
        parts.append(SplitPart(picked, Stratum(sub_ctx, s.r, sub_beta, s.nu)))
    return g, parts


def _power_truncated(mat, k, digits):
    """mat^k known modulo t^(digits+1): intermediate products are
    truncated with headroom for the remaining factors' polar depth."""
    cutoff = digits + 1
    depth = max(0, -_min_order(mat))
    out = LaurentMatrix.identity(mat.n)
    for i in range(k):
        remaining = k - 1 - i
        out = (out * mat).truncate(cutoff + remaining * depth)
    return out


def _min_order(mat):
    mo = mat.min_order()
    return 0 if mo is INF else int(mo)


def _group_sort_key(group):
    fac, _ = group
    if kpoly_deg(fac) == 1:
        return (0, sort_key(-fac[0]))
    return (1, tuple(sort_key(c) for c in fac))


def _kernel_of_poly(spoly, mat):
    evaluated = spoly_eval_matrix(spoly, mat)
    cols = matrix_columns(evaluated)
    null = kernel_columns(cols)
    basis_cols = matrix_columns(LaurentMatrix.identity(mat.n))
    out = []
    for coeffs in null:
        vec = combine(basis_cols, coeffs)
        lead = min((c.order for c in vec if not c.is_zero()), default=0)
        out.append([c.shift(-lead) for c in vec])
    return out


def _adapted_basis_change(ctx, kernels):
    """Build g in P whose columns are chain-adapted bases of the kernel
    subspaces; returns (g, slot lists per part)."""
    e = ctx.period
    n = ctx.n
    chosen = {p: [] for p in range(e)}  # phase -> list of (part, column)
    for part_idx, kcols in enumerate(kernels):
        graded = _chain_adapted_vectors(ctx, kcols)
        for phase, vec in graded:
            chosen[phase].append((part_idx, vec))
    slots_by_phase = {}
    for u, p in enumerate(ctx.phases):
        slots_by_phase.setdefault(p, []).append(u)
    cols = [None] * n
    slot_lists = [[] for _ in kernels]
    for p in range(e):
        picks = chosen.get(p, [])
        slots = slots_by_phase.get(p, [])
        if len(picks) != len(slots):
            raise PrecisionError("adapted basis phase count mismatch at phase %d" % p)
        picks.sort(key=lambda pv: pv[0])
        for slot, (part_idx, vec) in zip(slots, picks):
            cols[slot] = vec
            slot_lists[part_idx].append(slot)
    g = LaurentMatrix([[cols[j][i] for j in range(n)] for i in range(n)])
    if filtration_degree(g, ctx) < 0:
        raise PrecisionError("adapted basis change left the parahoric")
    return g, [sorted(sl) for sl in slot_lists]


def _chain_adapted_vectors(ctx, kcols):
    """For the subspace spanned by kcols, vectors of V cap L^i spanning
    each graded step, tagged by phase = i for i in [0, e)."""
    e = ctx.period
    d = len(kcols)
    coords = []  # per level i: columns in V-coordinates of V cap L^i
    for i in range(e + 1):
        exps = ctx.lattice_exponents(i)
        coords.append(preimage_lattice(kcols, exps))
    out = []
    taken = 0
    for i in range(e):
        cur = coords[i]
        nxt = coords[i + 1]
        cur_ech = column_echelon(cur)
        # express next-level lattice in current coordinates, mod t
        red_rows = []
        for col in nxt:
            coeffs, residual = cur_ech.reduce_vector(col)
            if any(not x.is_zero() for x in residual):
                raise PrecisionError("chain step is not nested")
            red_rows.append([c.coeff_or_zero(0) for c in coeffs])
        from .linalg import rref
        _, pivots = rref(red_rows) if red_rows else ([], [])
        free = [j for j in range(cur_ech.rank) if j not in pivots]
        for j in free:
            vec = combine(kcols, cur_ech.cols[j])
            out.append((i % e, vec))
            taken += 1
    if taken != d:
        raise PrecisionError("adapted vector count %d != dim %d" % (taken, d))
    return out


def _restrict_to_slots(ctx, mat, slots, r):
    """Sub-context and sub-matrix on the given coordinate slots; the
    off-slot blocks must lie in P^(1-r)."""
    e = ctx.period
    sub_phases_raw = [ctx.phases[u] for u in slots]
    residues = sorted(set(p % e for p in sub_phases_raw))
    e_new = len(residues)
    rank = {res: idx for idx, res in enumerate(residues)}
    # order slots so equal phases stay together, descending phase
    order = sorted(range(len(slots)), key=lambda i: (-sub_phases_raw[i], slots[i]))
    new_phases = [rank[sub_phases_raw[i] % e] for i in order]
    counts = {}
    for p in new_phases:
        counts[p] = counts.get(p, 0) + 1
    blocks = tuple(counts.get(e_new - 1 - b, 0) for b in range(e_new))
    sub_ctx = ParahoricContext(LatticeChain(len(slots), blocks), new_phases, "grouped")
    picked = [slots[i] for i in order]
    sub = LaurentMatrix([[mat.rows[u][v] for v in picked] for u in picked])
    return sub_ctx, sub, picked


def off_block_filtration_ok(ctx, mat, slot_lists, r, extra=0):
    """Check that blocks mixing different parts lie in P^(1-r+extra)."""
    part_of = {}
    for idx, slots in enumerate(slot_lists):
        for u in slots:
            part_of[u] = idx
    n = ctx.n
    rows = [[mat.rows[u][v] if part_of[u] != part_of[v] else LaurentScalar.zero()
             for v in range(n)] for u in range(n)]
    return in_filtration(LaurentMatrix(rows), ctx, 1 - r + extra)


class RegularityReport:
    """Outcome of the regularity test: torus data and per-block leading
    coefficients when regular, a reason otherwise."""

    __slots__ = ("regular", "reason", "e", "m", "leading", "gauge", "slot_lists")

    def __init__(self, regular, reason=None, e=None, m=None, leading=None,
                 gauge=None, slot_lists=None):
        self.regular = regular
        self.reason = reason
        self.e = e
        self.m = m
        self.leading = leading
        self.gauge = gauge
        self.slot_lists = slot_lists

    def __bool__(self):
        return self.regular

    def __repr__(self):
        if self.regular:
            return "RegularityReport(regular, e=%d, m=%d)" % (self.e, self.m)
        return "RegularityReport(not regular: %s)" % self.reason


def is_regular(s, field=None):
    """Classify the stratum: regular iff the recursive splitting yields
    n/e blocks of dimension e with pairwise distinct leading data (plus
    the mod-Z condition at depth zero and semisimplicity of y)."""
    if field is None:
        field = infer_field(s.beta)
    s = reduce_stratum(s)
    if s.r == 0:
        return _regular_depth_zero(s, field)
    if not s.ctx.uniform:
        return RegularityReport(False, reason="parahoric is not uniform")
    if not is_fundamental(s):
        return RegularityReport(False, reason="stratum is not fundamental")
    pat = graded_component(s.beta.power(s.e).shift(s.r), s.ctx, 0)
    if not kpoly_is_squarefree(minpoly(pat.pattern)):
        return RegularityReport(False, reason="y is not semisimple")
    e = s.e
    gauge = LaurentMatrix.identity(s.n)
    try:
        blocks = _split_recursive(s, field, gauge, list(range(s.n)))
    except NonsplitField as exc:
        raise NonsplitField("regularity undecidable over %s: %s" % (field.name, exc))
    leading = []
    slot_lists = []
    for slots, sub, alpha in blocks:
        if alpha is None:
            return RegularityReport(False, reason="a block of dimension %d is not pure"
                                    % len(slots))
        if len(slots) != e:
            return RegularityReport(False, reason="block dimension %d != e = %d"
                                    % (len(slots), e))
        leading.append(alpha)
        slot_lists.append(slots)
    zero_count = sum(1 for a in leading if is_zero(a))
    if zero_count > 1 or (zero_count == 1 and e > 1):
        return RegularityReport(False, reason="nilpotent summand not of the allowed shape")
    if len(set(map(sort_key, leading))) != len(leading):
        return RegularityReport(False, reason="leading coefficients are not pairwise distinct")
    return RegularityReport(True, e=e, m=s.n // e, leading=leading,
                            gauge=gauge, slot_lists=slot_lists)


def _regular_depth_zero(s, field):
    pat = s.graded_rep()
    from .linalg import charpoly
    phi = charpoly(pat.pattern)
    roots, nonsplit = kpoly_roots(phi, field)
    if kpoly_deg(nonsplit) > 0:
        raise NonsplitField("residue eigenvalues do not all lie in %s" % field.name)
    if any(mult > 1 for _, mult in roots):
        return RegularityReport(False, reason="repeated residue eigenvalue")
    vals = [root for root, _ in roots]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            diff = vals[i] - vals[j]
            if _is_integer(diff):
                return RegularityReport(False,
                                        reason="residue eigenvalues congruent modulo Z")
    vals.sort(key=sort_key)
    return RegularityReport(True, e=1, m=s.n, leading=vals,
                            gauge=LaurentMatrix.identity(s.n),
                            slot_lists=[[i] for i in range(s.n)])


def _is_integer(x):
    from .scalars import is_rational_value, as_fraction
    if not is_rational_value(x):
        return False
    return as_fraction(x).denominator == 1


def _split_recursive(s, field, gauge, ambient_slots):
    """Recursively split; returns [(ambient slots, stratum, alpha)] where
    alpha is the pure-block leading coefficient (None if the block is
    neither pure nor one-dimensional)."""
    if s.n == 1:
        lead = s.beta.rows[0][0]
        return [(ambient_slots, s, lead.coeff_or_zero(-s.r))]
    try:
        _, parts = split_stratum(s, field)
    except IrreducibleStratum:
        alpha = _pure_leading(s, field)
        return [(ambient_slots, s, alpha)]
    out = []
    for part in parts:
        sub_slots = [ambient_slots[i] for i in part.slots]
        if is_fundamental(part.stratum):
            out.extend(_split_recursive(part.stratum, field, gauge, sub_slots))
        else:
            if part.stratum.n == 1:
                lead = part.stratum.beta.rows[0][0]
                out.append((sub_slots, part.stratum, lead.coeff_or_zero(-s.r)))
            else:
                out.append((sub_slots, part.stratum, None))
    return out


def _order_or_inf(entry):
    return entry.order if not entry.is_zero() else INF


def _pure_leading(s, field):
    """Leading coefficient of a pure-candidate block, or None.

    The graded leading term must be alpha * varpi^(-r) for alpha in the
    field, possibly after a diagonal renormalization whose existence
    requires an n-th root of the cyclic product.
    """
    if s.n != s.e:
        return None
    if not s.ctx.uniform:
        return None
    pat = s.graded_rep().pattern
    xs = []
    for u in range(s.n):
        row_vals = [pat[u][v] for v in range(s.n) if not is_zero(pat[u][v])]
        if len(row_vals) != 1:
            return None
        xs.append(row_vals[0])
    if any(is_zero(x) for x in xs):
        return None
    first = xs[0]
    if all(x == first for x in xs):
        return first
    prod = xs[0]
    for x in xs[1:]:
        prod = prod * x
    alpha = nth_root_in_field(prod, s.n, field)
    if alpha is None:
        raise NonsplitField("pure block needs an %d-th root of a cyclic product" % s.n)
    return alpha


def kpoly_roots(p, field):
    from .polys import kpoly_roots as _kr
    return _kr(p, field)
