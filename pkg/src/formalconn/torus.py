"""Uniform maximal tori in block-diagonal position and the tame
corestriction onto their Cartan algebras.

The torus data (e, m) describes n = e*m with m diagonal blocks of size
e; inside each block the degree-e ramified extension E is realized by
sending its uniformizer to the e x e shift matrix, so that the
associated parahoric is the interleaved standard context.  A toral
element stores per-block coefficient vectors in powers of the block
uniformizer and is realized to a series matrix on demand.
"""

import math
from fractions import Fraction

from .errors import GcdViolation, NotRegular, PrecisionError
from .linalg import ksolve
from .matrices import LaurentMatrix, pairing
from .parahoric import ParahoricContext, filtration_degree, graded_component, \
    graded_monomials, monomial_matrix
from .scalars import is_zero, sort_key
from .series import INF, LaurentScalar, OneForm


class TorusData:
    """Uniform torus shape: extension degree e, block count m."""

    __slots__ = ("e", "m")

    def __init__(self, e, m):
        assert e >= 1 and m >= 1
        self.e = e
        self.m = m

    @property
    def n(self):
        return self.e * self.m

    def context(self):
        return ParahoricContext.interleaved(self.e, self.m)

    def __eq__(self, other):
        return isinstance(other, TorusData) and (self.e, self.m) == (other.e, other.m)

    def __repr__(self):
        return "TorusData(e=%d, m=%d)" % (self.e, self.m)


def varpi_block(e, d, coeff=Fraction(1)):
    """The d-th power of the e x e uniformizer block, scaled."""
    rows = [[LaurentScalar.zero() for _ in range(e)] for _ in range(e)]
    for q in range(e):
        p = (q - d) % e
        wraps = (d - q + p) // e
        rows[p][q] = LaurentScalar.t_power(wraps, coeff)
    return rows


class ToralElement:
    """Element of the Cartan algebra: per block j, sum over d of
    coeffs[j][d] * varpi_E^d, with degrees >= prec unknown."""

    __slots__ = ("torus", "coeffs", "prec")

    def __init__(self, torus, coeffs, prec=INF):
        self.torus = torus
        cleaned = []
        for block in coeffs:
            cleaned.append({d: c for d, c in block.items() if d < prec and not is_zero(c)})
        self.coeffs = cleaned
        self.prec = prec

    @classmethod
    def zero(cls, torus, prec=INF):
        return cls(torus, [{} for _ in range(torus.m)], prec)

    def min_degree(self):
        degs = [min(block) for block in self.coeffs if block]
        return min(degs) if degs else self.prec

    def coeff(self, j, d):
        if d >= self.prec:
            raise PrecisionError("toral coefficient at degree %d unknown" % d)
        return self.coeffs[j].get(d, Fraction(0))

    def leading_at(self, depth):
        """Per-block coefficients at degree -depth."""
        return [block.get(-depth, Fraction(0)) for block in self.coeffs]

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return ToralElement(self.torus, self.coeffs, prec)

    def __add__(self, other):
        assert self.torus == other.torus
        prec = min(self.prec, other.prec)
        out = []
        for a, b in zip(self.coeffs, other.coeffs):
            d = dict(a)
            for k, v in b.items():
                d[k] = d.get(k, 0) + v
            out.append(d)
        return ToralElement(self.torus, out, prec)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        return ToralElement(self.torus, [{d: v * c for d, v in blk.items()}
                                         for blk in self.coeffs], self.prec)

    def realization(self):
        e, m = self.torus.e, self.torus.m
        n = e * m
        rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
        for j, block in enumerate(self.coeffs):
            base = j * e
            acc = [[LaurentScalar.zero() for _ in range(e)] for _ in range(e)]
            for d, c in block.items():
                piece = varpi_block(e, d, c)
                acc = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(acc, piece)]
            for p in range(e):
                for q in range(e):
                    rows[base + p][base + q] = acc[p][q]
        if self.prec is not INF:
            cut = -(-self.prec // e) + 1
            rows = [[entry.truncate(cut) for entry in row] for row in rows]
        return LaurentMatrix(rows)

    def is_zero(self):
        return all(not blk for blk in self.coeffs)

    def agrees(self, other, through=None):
        bound = min(self.prec, other.prec)
        if through is not None:
            bound = min(bound, through)
        for a, b in zip(self.coeffs, other.coeffs):
            for d in set(a) | set(b):
                if d < bound and a.get(d, 0) != b.get(d, 0):
                    return False
        return True

    def to_json(self):
        from .scalars import format_scalar
        return {"e": self.torus.e, "m": self.torus.m,
                "blocks": [sorted(((d, format_scalar(c)) for d, c in blk.items()))
                           for blk in self.coeffs]}

    def __repr__(self):
        return "ToralElement(e=%d, m=%d, %r)" % (self.torus.e, self.torus.m, self.coeffs)


def epsilon_matrix(torus, i):
    """Idempotent of the i-th block."""
    n = torus.n
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    for p in range(torus.e):
        u = i * torus.e + p
        rows[u][u] = LaurentScalar.one()
    return LaurentMatrix(rows)


def varpi_eps(torus, s, i, coeff=Fraction(1)):
    """varpi_E^s supported on block i."""
    n = torus.n
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    block = varpi_block(torus.e, s, coeff)
    base = i * torus.e
    for p in range(torus.e):
        for q in range(torus.e):
            rows[base + p][base + q] = block[p][q]
    return LaurentMatrix(rows)


def tame_corestriction(x, torus, nu):
    """The t-bimodule projection onto the Cartan algebra:
    pi(X) = sum_{s,i} psi_s^i(X) varpi^s eps_i with
    psi_s^i(X) = (1/e) <varpi^(-s) eps_i, X>_nu.

    Requires nu of order -1.  The projection itself is independent of
    the chosen form (F-linearity moves the unit scalar through pi), so
    it is evaluated by the dt/t coefficient extraction: averaging the e
    matrix coefficients on the varpi^s slots of each diagonal block.
    """
    if nu.order != -1:
        raise GcdViolation("tame corestriction requires a one-form of order -1")
    e = torus.e
    lo = x.min_order()
    if lo is INF:
        return ToralElement.zero(torus, _toral_prec_from_matrix(x, e))
    s_lo = e * lo - e
    prec = _toral_prec_from_matrix(x, e)
    hi_known = e * _max_known_exp(x) + e
    blocks = []
    for i in range(torus.m):
        blk = {}
        base = i * e
        s = s_lo
        while s < prec and s <= hi_known:
            acc = None
            ok = True
            for q in range(e):
                p = (q - s) % e
                o = (s - q + p) // e
                entry = x.rows[base + p][base + q]
                if o >= entry.prec:
                    prec = min(prec, s)
                    ok = False
                    break
                c = entry.coeff_or_zero(o)
                acc = c if acc is None else acc + c
            if not ok:
                break
            val = acc * Fraction(1, e)
            if not is_zero(val):
                blk[s] = val
            s += 1
        blocks.append(blk)
    return ToralElement(torus, blocks, prec)


def _toral_prec_from_matrix(x, e):
    p = x.precision()
    if p is INF:
        return INF
    return e * p - (e - 1)


def _max_known_exp(x):
    best = 0
    for row in x.rows:
        for entry in row:
            if entry.coeffs:
                best = max(best, max(entry.coeffs))
    return best


def regular_depth(xi):
    """Depth r of a toral element with regular leading term: leading
    degree is -r, the per-block leading coefficients are nonzero and
    pairwise distinct, and gcd(r, e) = 1 when r > 0."""
    d0 = xi.min_degree()
    if d0 is INF or d0 > 0:
        raise NotRegular("toral element has no polar part")
    r = -d0
    lead = xi.leading_at(r)
    if any(is_zero(a) for a in lead) and xi.torus.m > 1:
        raise NotRegular("a block leading coefficient vanishes")
    if len(set(map(sort_key, lead))) != len(lead):
        raise NotRegular("leading coefficients are not pairwise distinct")
    if r > 0 and math.gcd(r, xi.torus.e) != 1:
        raise GcdViolation("gcd(r, e) != 1")
    return r


def graded_ad_solve(xi, y, ctx=None, nu=None):
    """Solve ad(X)(xi) + pi_t(Y) = Y modulo P^(l-r+1) for X in P^l,
    where l = fildeg(Y) + r and xi has regular leading term at depth -r.

    The kernel ambiguity is fixed by requiring the solution's toral
    component to vanish.  Returns the monomial representative of X.
    """
    if nu is None:
        nu = OneForm.dt_over_t()
    torus = xi.torus
    if ctx is None:
        ctx = torus.context()
    r = regular_depth(xi)
    ell_minus_r = filtration_degree(y, ctx)
    if ell_minus_r is INF:
        return LaurentMatrix.zero(ctx.n)
    ell = ell_minus_r + r
    pi_y = tame_corestriction(y, torus, nu)
    target = y - pi_y.realization()
    tgt_pat = graded_component(target, ctx, ell_minus_r)
    if tgt_pat.is_zero():
        return LaurentMatrix.zero(ctx.n)
    sol = _graded_ad_solve_pattern(xi, tgt_pat, ctx, ell)
    if sol is None:
        raise NotRegular("graded ad-equation unsolvable; leading term not regular")
    # strip the toral component of the solution
    pi_sol = tame_corestriction(sol, torus, nu)
    if not pi_sol.is_zero():
        sol = sol - pi_sol.realization()
    return sol


def graded_ad_image_solve(xi, target, ctx, level):
    """Low-level: solve ad(X)(xi) = target on the graded piece at
    ``level`` = fildeg(target); X in P^(level + r).  Returns None when
    the target has a toral graded component (the kernel obstruction)."""
    tgt_pat = graded_component(target, ctx, level)
    if tgt_pat.is_zero():
        return LaurentMatrix.zero(ctx.n)
    return _graded_ad_solve_pattern(xi, tgt_pat, ctx, level + regular_depth(xi))


def _graded_ad_solve_pattern(xi, tgt_pat, ctx, ell):
    r = regular_depth(xi)
    lead = ToralElement(xi.torus, [{-r: a} for a in xi.leading_at(r)])
    lead_mat = lead.realization()
    slots = graded_monomials(ctx, ell)
    out_slots = graded_monomials(ctx, ell - r)
    index_of = {(u, v): k for k, (u, v, _) in enumerate(out_slots)}
    cols = []
    for (u, v, o) in slots:
        basis_elt = monomial_matrix(ctx, u, v, o)
        img = basis_elt * lead_mat - lead_mat * basis_elt  # ad(E)(xi)
        col = [Fraction(0)] * len(out_slots)
        pat = graded_component(img, ctx, ell - r)
        for (uu, vv, oo) in out_slots:
            col[index_of[(uu, vv)]] = pat.pattern[uu][vv]
        cols.append(col)
    rhs = [tgt_pat.pattern[u][v] for (u, v, _) in out_slots]
    mat_rows = [[cols[j][i] for j in range(len(slots))] for i in range(len(out_slots))]
    x = ksolve(mat_rows, rhs)
    if x is None:
        return None
    sol = LaurentMatrix.zero(ctx.n)
    for coeff, (u, v, o) in zip(x, slots):
        if not is_zero(coeff):
            sol = sol + monomial_matrix(ctx, u, v, o, coeff)
    return sol


def delta_kernel_dimension(e, r):
    """Kernel dimension of ad(varpi^(-r)) on the graded piece
    I^l / I^(l+1) of the complete chain in dimension e: the cyclic
    difference system x_p - x_(p-r)."""
    rows = []
    for p in range(e):
        row = [Fraction(0)] * e
        row[p] += 1
        row[(p - r) % e] -= 1
        rows.append(row)
    from .linalg import knullspace
    return len(knullspace(rows))
