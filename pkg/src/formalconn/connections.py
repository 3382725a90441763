"""Formal connections: gauge action, contained strata, slope,
splitting, and diagonalization to a formal type.

The slope engine keeps the connection matrix in a fixed frame and scans
standard parahorics over constant permutation gauges (derivative-free);
any fundamental stratum found certifies the slope.  When every scan
candidate is non-fundamental it alternates a constant kernel-flag
triangularization with the slope-decreasing reduction: a twisted
saturation of the current chain by powers of the matrix, standardized
by an adapted-basis gauge.  Slopes live in the discrete set
{p/q : 1 <= q <= n}, and every saturation round strictly lowers the
best bound, so the search terminates.
"""

import itertools
import math
from fractions import Fraction

from .errors import (FormalConnError, NonsplitField, NotRegular, NotSplit,
                     PrecisionError, SingularGauge)
from .linalg import kidentity, kmatmul, knullspace, ksolve, rref
from .matrices import LaurentMatrix
from .parahoric import (filtration_degree, graded_component, graded_monomials,
                        monomial_matrix, pattern_to_matrix, standard_chain)
from .polys import kpoly_deg, kpoly_roots
from .scalars import as_fraction, get_field, is_rational_value, is_zero, sort_key
from .series import INF, LaurentScalar, OneForm
from .strata import (Stratum, infer_field, is_fundamental, is_regular,
                     reduce_stratum, split_stratum)
from .torus import (ToralElement, TorusData, graded_ad_image_solve,
                    tame_corestriction, varpi_eps)

MAX_DESCENT_ROUNDS = 64


class FormalConnection:
    """A formal connection nabla = d + [nabla]; stored as the matrix of
    nabla_tau for the chosen one-form nu (tau_nu is the vector field
    with iota_tau(nu) = 1)."""

    __slots__ = ("matrix", "nu")

    def __init__(self, tau_matrix, nu=None):
        if nu is None:
            nu = OneForm.dt_over_t()
        self.matrix = tau_matrix
        self.nu = nu

    @classmethod
    def from_dt_matrix(cls, m_dt, nu=None):
        """Build from the matrix of nabla against dt (nabla = d + M dt):
        [nabla_tau] = M / f for nu = f dt."""
        if nu is None:
            nu = OneForm.dt_over_t()
        return cls(m_dt * nu.f.inverse(), nu)

    @property
    def n(self):
        return self.matrix.n

    def dt_matrix(self):
        return self.matrix * self.nu.f

    def with_one_form(self, nu2):
        """Rescale to another one-form: [nabla_tau'] = (f/f') [nabla_tau]."""
        factor = self.nu.f * nu2.f.inverse()
        return FormalConnection(self.matrix * factor, nu2)

    def standardized(self):
        """The same connection against dt/t."""
        f = self.nu.f
        if f.order == -1 and len(f.coeffs) == 1 and f.coeff_or_zero(-1) == 1:
            return self
        return self.with_one_form(OneForm.dt_over_t())

    def tau_of_matrix(self, g):
        """Apply the derivation tau_nu = (1/f) d/dt entrywise to g."""
        deriv = LaurentMatrix([[e.derivative() for e in row] for row in g.rows])
        f = self.nu.f
        if len(f.coeffs) == 1:
            k = f.order
            c = f.coeffs[k]
            inv = (Fraction(1) / c) if isinstance(c, (int, Fraction)) else c.inverse()
            return deriv.shift(-k) * inv
        return deriv * f.inverse()

    def to_json(self, field=None):
        field_name = (field or infer_field(self.matrix)).name
        return {"schema_version": 1, "n": self.n, "field": field_name,
                "nu": self.nu.to_json(), "matrix": self.dt_matrix().to_json()}

    @classmethod
    def from_json(cls, data, field=None):
        from .errors import ParseError
        for key in ("n", "matrix"):
            if key not in data:
                raise ParseError("connection file lacks %r" % key)
        if field is None:
            field = get_field(data.get("field", "Q"))
        nu = OneForm.from_json(data["nu"], field) if data.get("nu") else OneForm.dt_over_t()
        m = LaurentMatrix.from_json(data["matrix"], field)
        if m.n != data["n"]:
            raise ParseError("matrix size disagrees with n")
        return cls.from_dt_matrix(m, nu)

    def __repr__(self):
        return "FormalConnection(n=%d, nu_order=%d)" % (self.n, self.nu.order)


def gauge_transform(g, conn):
    """g . [nabla_tau] = g [nabla_tau] g^-1 - (tau g) g^-1."""
    try:
        g_inv = g.inverse()
    except SingularGauge:
        raise SingularGauge("gauge matrix is not invertible")
    new = g * conn.matrix * g_inv - conn.tau_of_matrix(g) * g_inv
    return FormalConnection(new, conn.nu)


def contained_stratum(conn, ctx):
    """The stratum the connection contains relative to the given
    standard parahoric: depth r = max(-fildeg([nabla_tau]), 0) with
    [nabla_tau] itself as representative, against dt/t."""
    c = conn.standardized()
    d = filtration_degree(c.matrix, ctx)
    r = max(0, -d) if d is not INF else 0
    return Stratum(ctx, r, c.matrix, c.nu)


# -- slope -----------------------------------------------------------------


def _compositions(n):
    out = []
    for cuts in range(1 << (n - 1)):
        blocks = []
        size = 1
        for pos in range(n - 1):
            if cuts & (1 << pos):
                blocks.append(size)
                size = 1
            else:
                size += 1
        blocks.append(size)
        out.append(tuple(blocks))
    out.sort(key=lambda b: (len(b), b))
    return out


def _permutation_matrix(perm, n=None):
    n = n if n is not None else len(perm)
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = LaurentScalar.one()
    return LaurentMatrix(rows)


_RS = object()  # regular-singular marker


def _permuted_entries(matrix, perm):
    n = matrix.n
    return LaurentMatrix([[matrix.rows[perm[u]][perm[v]] for v in range(n)]
                          for u in range(n)])


def _scan_standard(matrix, n, perms):
    """Scan (permutation, composition) candidates.  Returns
    (fundamental_hit, best_nonfundamental), entries (slope, perm, ctx, r);
    a regular-singular detection returns (_RS, perm, ctx, 0) as the hit.
    Any fundamental stratum already certifies the slope, so the scan
    exits on the first hit."""
    best_any = None
    for perm in perms:
        m_p = _permuted_entries(matrix, perm)
        for blocks in _compositions(n):
            ctx = standard_chain(blocks)
            try:
                d = filtration_degree(m_p, ctx)
            except PrecisionError:
                continue
            if d is INF or d >= 0:
                return (_RS, perm, ctx, 0), None
            r = -d
            sl = Fraction(r, ctx.period)
            entry = (sl, perm, ctx, r)
            if is_fundamental(Stratum(ctx, r, m_p)):
                return entry, None
            if best_any is None or sl < best_any[0]:
                best_any = entry
    return None, best_any


def fundamental_stratum(conn):
    """A fundamental stratum contained in the connection.

    Returns (gauge, gauged_connection, stratum): the (gcd-reduced)
    stratum is contained in gauge . conn with respect to a standard
    chain, so its slope certifies the connection slope.  Regular
    singular input yields the depth-zero stratum on the maximal chain.

    Descent: scan standard parahorics over constant permutations; when
    every candidate is non-fundamental, triangularize the nilpotent
    leading term by a constant kernel-flag gauge and shear the kernel
    block by diag(t, .., 1).  Both moves cost at most a constant
    derivative term.
    """
    conn = conn.standardized()
    n = conn.n
    gauge = LaurentMatrix.identity(n)
    cur = conn
    perms = list(itertools.permutations(range(n))) if n <= 4 else [tuple(range(n))]
    for round_no in range(MAX_DESCENT_ROUNDS):
        found_f, _ = _scan_standard(cur.matrix, n, perms)
        if found_f is not None:
            sl, perm, ctx, r = found_f
            pm = _permutation_matrix(perm)
            gauge = pm.inverse() * gauge
            cur = gauge_transform(pm.inverse(), cur)
            s = Stratum(ctx, r, cur.matrix, cur.nu)
            return gauge, cur, (s if r == 0 else reduce_stratum(s))
        h = _moser_move(cur.matrix, 1 + round_no % (n - 1))
        gauge = h * gauge
        cur = gauge_transform(h, cur)
    raise FormalConnError("slope descent did not terminate")


def _kernel_flag_basis(pat, n):
    """Basis adapted to ker(pat) <= ker(pat^2) <= ... (pat nilpotent);
    pat becomes block strictly upper triangular in this basis."""
    basis = []
    power = [list(r) for r in pat]
    for _ in range(n):
        ker = knullspace(power)
        cand = basis + ker
        if not cand:
            return None
        mat_rows = [[cand[j][i] for j in range(len(cand))] for i in range(n)]
        _, pivots = rref(mat_rows)
        basis = [cand[p] for p in pivots]
        if len(basis) == n:
            return basis
        power = kmatmul(power, pat)
    return None


def _moser_move(matrix, kernel_power=1):
    """One shear move on the maximal chain: bring the nilpotent leading
    coefficient into kernel-flag position by a constant gauge, then
    rescale the coordinates of ker(pattern^k) by t.

    The returned gauge g is diag(t on the kernel flag coords) times the
    constant flag matrix inverse; its derivative term is the constant
    diag of the shear exponents, harmless to polar depths.
    """
    n = matrix.n
    ctx = standard_chain((n,))
    d = filtration_degree(matrix, ctx)
    if d is INF:
        raise FormalConnError("shear move on the zero matrix")
    pat = graded_component(matrix, ctx, d).pattern
    basis = _kernel_flag_basis(pat, n)
    if basis is None:
        raise FormalConnError("leading coefficient has no kernel flag")
    h_const = [[basis[j][i] for j in range(n)] for i in range(n)]
    h = LaurentMatrix.from_scalar_matrix(h_const)
    # kernel of pattern^k in the flag basis occupies the first coordinates
    power = [list(r) for r in pat]
    for _ in range(kernel_power - 1):
        power = kmatmul(power, pat)
    ker_dim = max(1, len(knullspace(power)))
    ker_dim = min(ker_dim, n - 1) if ker_dim == n else ker_dim
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    for u in range(n):
        rows[u][u] = LaurentScalar.t_power(1 if u < ker_dim else 0)
    shear = LaurentMatrix(rows)
    return shear * h.inverse()


def slope(conn):
    """Katz slope: r/e_P of any contained fundamental stratum; zero for
    regular singular connections."""
    if conn.standardized().matrix.is_zero():
        return Fraction(0)
    _, _, s = fundamental_stratum(conn)
    return s.slope


# -- splitting ---------------------------------------------------------------


def split_connection(conn, ctx, r, slot_lists, digits=8):
    """Kill the off-diagonal blocks of a connection containing a stratum
    split along the given coordinate slots.

    Iterates the strongly-uniform graded solves; at depth zero the
    graded derivative contributes the shift -m and an unsolvable level
    raises NotSplit.  Returns (p, conn') with p a product of unipotent
    off-block gauges and conn' block diagonal to the requested depth:
    off-blocks have filtration degree >= 1 - r + digits.
    """
    conn = conn.standardized()
    n = conn.n
    part_of = {}
    for idx, slots in enumerate(slot_lists):
        for u in slots:
            part_of[u] = idx
    lead_pat = [[graded_component(conn.matrix, ctx, -r).pattern[u][v]
                 if part_of[u] == part_of[v] else Fraction(0)
                 for v in range(n)] for u in range(n)]
    lead_mat = pattern_to_matrix(ctx, lead_pat, -r)
    p_total = LaurentMatrix.identity(n)
    cur = conn
    target = 1 - r + digits
    for _ in range(digits + 2 * r + 4):
        off = _off_part(cur.matrix, part_of)
        try:
            d = filtration_degree(off, ctx, stop_at=target)
        except PrecisionError:
            raise PrecisionError("splitting ran out of digits")
        if d is INF or d >= target:
            break
        x = _solve_split_level(ctx, lead_mat, off, d, r, part_of)
        if x is None:
            raise NotSplit("resonant obstruction at level %d" % (d + r))
        g = LaurentMatrix.identity(n) + x
        cur = gauge_transform(g, cur)
        p_total = g * p_total
    else:
        raise PrecisionError("splitting did not reach the requested depth")
    return p_total, cur


def _off_part(mat, part_of):
    n = mat.n
    rows = [[mat.rows[u][v] if part_of[u] != part_of[v] else LaurentScalar.zero()
             for v in range(n)] for u in range(n)]
    return LaurentMatrix(rows)


def _solve_split_level(ctx, lead_mat, off, level, r, part_of):
    """Solve ad(X)(lead) (- m X at r = 0) = off on the graded piece at
    ``level``, X over the off-diagonal slots of P^(level + r)."""
    m_eff = level + r
    slots = [(u, v, o) for (u, v, o) in graded_monomials(ctx, m_eff)
             if part_of[u] != part_of[v]]
    out_slots = [(u, v, o) for (u, v, o) in graded_monomials(ctx, level)
                 if part_of[u] != part_of[v]]
    index_of = {(u, v): k for k, (u, v, _) in enumerate(out_slots)}
    cols = []
    for (u, v, o) in slots:
        e_mat = monomial_matrix(ctx, u, v, o)
        img = e_mat * lead_mat - lead_mat * e_mat      # ad(E)(lead)
        if r == 0:
            img = img - e_mat * Fraction(m_eff)
        pat = graded_component(img, ctx, level)
        col = [Fraction(0)] * len(out_slots)
        for (uu, vv, _) in out_slots:
            col[index_of[(uu, vv)]] = pat.pattern[uu][vv]
        cols.append(col)
    tgt = graded_component(off, ctx, level)
    rhs = [-tgt.pattern[u][v] for (u, v, _) in out_slots]
    mat_rows = [[cols[j][i] for j in range(len(slots))] for i in range(len(out_slots))]
    sol = ksolve(mat_rows, rhs)
    if sol is None:
        return None
    x = LaurentMatrix.zero(ctx.n)
    for c, (u, v, o) in zip(sol, slots):
        if not is_zero(c):
            x = x + monomial_matrix(ctx, u, v, o, c)
    return x


# -- diagonalization ---------------------------------------------------------


class DiagonalizationResult:
    """Total gauge p, the toral representative, and the formal type;
    p . [nabla_tau] agrees with realization(A_rep) to the working depth."""

    __slots__ = ("gauge", "A_rep", "formal_type")

    def __init__(self, gauge, a_rep, formal_type):
        self.gauge = gauge
        self.A_rep = a_rep
        self.formal_type = formal_type

    def __repr__(self):
        return "DiagonalizationResult(%r)" % (self.formal_type,)


def diagonalize(conn, digits=8):
    """Gauge the connection into its Cartan form (Cartan coefficients in
    degrees -r..0 constitute the formal type).

    Raises NotRegular when no regular stratum is contained and
    NonsplitField when the ground field lacks needed roots.
    """
    from .formal_types import FormalType
    conn = conn.standardized()
    n = conn.n
    field = infer_field(conn.matrix)
    if conn.matrix.is_zero():
        if n == 1:
            torus = TorusData(1, 1)
            return DiagonalizationResult(
                LaurentMatrix.identity(1), ToralElement(torus, [{}]),
                FormalType(torus, 0, [[field.zero()]], field))
        raise NotRegular("the zero connection in rank >= 2 contains no regular stratum")
    gauge, cur, strat = fundamental_stratum(conn)
    r = strat.r
    work_prec = digits + r + 4
    if cur.matrix.precision() is INF or cur.matrix.precision() > work_prec:
        cur = FormalConnection(cur.matrix.truncate(work_prec), cur.nu)
        strat = Stratum(strat.ctx, strat.r, cur.matrix, cur.nu)
    if r == 0:
        return _diagonalize_regular_singular(cur, gauge, field, digits)
    report = is_regular(strat, field)
    if not report:
        raise NotRegular("connection is not regular: %s" % report.reason)
    e = report.e
    if report.m == 1:
        p, q_coeffs = _pure_block_reduce(cur, strat.ctx, r, field, digits)
        gauge = p * gauge
        torus = TorusData(e, 1)
        a_rep = ToralElement(torus, [dict(q_coeffs)])
        ft = FormalType(torus, r, [[q_coeffs.get(d, field.zero())
                                    for d in range(-r, 1)]], field)
        return DiagonalizationResult(gauge, a_rep, ft)
    g_split, parts = split_stratum(strat, field)
    cur = gauge_transform(g_split.inverse(), cur)
    gauge = g_split.inverse() * gauge
    slot_lists = [part.slots for part in parts]
    p_split, cur = split_connection(cur, strat.ctx, r, slot_lists,
                                    digits=digits + r)
    gauge = p_split * gauge
    blocks = []
    for part in parts:
        sub = _extract_block(cur.matrix, part.slots)
        sub_res = diagonalize(FormalConnection(sub, cur.nu), digits)
        blocks.append((part.slots, sub_res))
    return _assemble_blocks(cur, gauge, blocks, r, e, field)


def _extract_block(mat, slots):
    return LaurentMatrix([[mat.rows[u][v] for v in slots] for u in slots])


def _assemble_blocks(cur, gauge, blocks, r, e, field):
    from .formal_types import FormalType
    n = cur.n
    items = []
    for slots, res in blocks:
        ft = res.formal_type
        if ft.torus.e != e or ft.torus.m != 1:
            raise NotRegular("block shape (e=%d, m=%d) inside an e=%d type"
                             % (ft.torus.e, ft.torus.m, e))
        if ft.depth < r:
            coeffs = [field.zero()] * (r - ft.depth) + list(ft.coeffs[0])
        else:
            coeffs = list(ft.coeffs[0])
        items.append((slots, res, coeffs))
    items.sort(key=lambda it: sort_key(it[2][0]))
    m = len(items)
    torus = TorusData(e, m)
    perm = [None] * n
    for j, (slots, _, _) in enumerate(items):
        for p_idx, u in enumerate(slots):
            perm[j * e + p_idx] = u
    pm = LaurentMatrix([[LaurentScalar.one() if perm[i] == j else LaurentScalar.zero()
                         for j in range(n)] for i in range(n)])
    block_gauge = LaurentMatrix.zero(n)
    for slots, res, _ in items:
        for a in range(len(slots)):
            for b in range(len(slots)):
                block_gauge.rows[slots[a]][slots[b]] = res.gauge.rows[a][b]
    gauge = pm * block_gauge * gauge
    a_rep = ToralElement(torus, [dict(res.A_rep.coeffs[0]) for _, res, _ in items])
    ft = FormalType(torus, r, [coeffs for _, _, coeffs in items], field)
    return DiagonalizationResult(gauge, a_rep, ft)


def _diagonalize_regular_singular(cur, gauge, field, digits):
    """Depth zero: conjugate the residue to diagonal form (eigenvalues
    must be distinct modulo Z) and strip the tail order by order."""
    from .formal_types import FormalType
    from .linalg import charpoly
    n = cur.n
    ctx = standard_chain((n,))
    pat = graded_component(cur.matrix, ctx, 0).pattern
    phi = charpoly(pat)
    roots, nonsplit = kpoly_roots(phi, field)
    if kpoly_deg(nonsplit) > 0:
        raise NonsplitField("residue eigenvalues lie outside %s" % field.name)
    if any(mult > 1 for _, mult in roots):
        raise NotRegular("repeated residue eigenvalue at depth zero")
    vals = sorted((root for root, _ in roots), key=sort_key)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            d = vals[i] - vals[j]
            if is_rational_value(d) and as_fraction(d).denominator == 1:
                raise NotRegular("residue eigenvalues congruent modulo Z")
    evecs = []
    for root in vals:
        shifted = [[pat[i][j] - (root if i == j else 0) for j in range(n)]
                   for i in range(n)]
        null = knullspace(shifted)
        if len(null) != 1:
            raise NotRegular("residue eigenspace of unexpected dimension")
        evecs.append(null[0])
    h = LaurentMatrix.from_scalar_matrix([[evecs[j][i] for j in range(n)]
                                          for i in range(n)])
    cur = gauge_transform(h.inverse(), cur)
    gauge = h.inverse() * gauge
    lam = [[cur.matrix.rows[i][j].coeff_or_zero(0) if i == j else field.zero()
            for j in range(n)] for i in range(n)]
    lam_mat = LaurentMatrix.from_scalar_matrix(lam)
    for _ in range(digits + 2):
        rem = cur.matrix - lam_mat
        try:
            d = filtration_degree(rem, ctx, stop_at=digits + 1)
        except PrecisionError:
            break
        if d is INF or d > digits:
            break
        coeff = rem.coeff_matrix(d)
        sol = _solve_resonant_level(lam, coeff, d, field)
        x = LaurentMatrix.from_scalar_matrix(sol).shift(d)
        g = LaurentMatrix.identity(n) + x
        cur = gauge_transform(g, cur)
        gauge = g * gauge
    torus = TorusData(1, n)
    a_rep = ToralElement(torus, [({0: lam[j][j]} if not is_zero(lam[j][j]) else {})
                                 for j in range(n)])
    ft = FormalType(torus, 0, [[lam[j][j]] for j in range(n)], field)
    return DiagonalizationResult(gauge, a_rep, ft)


def _solve_resonant_level(lam, coeff, m, field):
    """(ad(Lambda) - m) X = -coeff, entrywise: the (i,j) slot reads
    (lam_i - lam_j - m) x_ij = -c_ij; non-resonance makes each factor
    invertible."""
    n = len(lam)
    out = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            denom = lam[i][i] - lam[j][j] - m
            if is_zero(denom):
                raise NotRegular("resonance at level %d" % m)
            inv = (Fraction(1) / denom) if isinstance(denom, (int, Fraction)) \
                else denom.inverse()
            out[i][j] = -coeff[i][j] * inv
    return out


def _pure_block_reduce(conn, ctx, r, field, digits):
    """Two-phase reduction of a pure block to q(varpi^(-1)).

    Phase one (levels up to r) absorbs Cartan components into q and
    solves the graded ad-equation; phase two additionally cancels the
    Cartan obstruction with gauges 1 + alpha varpi^v, whose derivative
    term has Cartan component (v/e) alpha varpi^v.
    Returns (gauge, dict of q-coefficients in degrees -r..0).
    """
    n = conn.n
    e = ctx.period
    assert e == n
    torus = TorusData(e, 1)
    nu = conn.nu
    cur = conn
    p_total = LaurentMatrix.identity(n)
    pat = graded_component(cur.matrix, ctx, -r).pattern
    xs = []
    for u in range(n):
        vals = [pat[u][v] for v in range(n) if not is_zero(pat[u][v])]
        if len(vals) != 1:
            raise NotRegular("pure block leading term is not a varpi multiple")
        xs.append(pat[u][(u - r) % n])
    if any(is_zero(x) for x in xs):
        raise NotRegular("pure block leading term is singular")
    first = xs[0]
    if all(x == first for x in xs):
        alpha = first
    else:
        prod = xs[0]
        for x in xs[1:]:
            prod = prod * x
        from .scalars import nth_root_in_field
        alpha = nth_root_in_field(prod, n, field)
        if alpha is None:
            raise NonsplitField("pure leading term needs an %d-th root in %s"
                                % (n, field.name))
        h = _pure_normalizer(n, r, xs, alpha, field)
        cur = gauge_transform(h, cur)
        p_total = h * p_total
    q = {-r: alpha}
    lead = ToralElement(torus, [{-r: alpha}])
    guard = r + digits + 4
    for _ in range(guard):
        rem = cur.matrix - ToralElement(torus, [dict(q)]).realization()
        try:
            d = filtration_degree(rem, ctx, stop_at=digits + 1)
        except PrecisionError:
            break
        if d is INF or d > digits:
            break
        v = d
        c = tame_corestriction(rem, torus, nu).coeffs[0].get(v, field.zero())
        if not is_zero(c):
            if v <= 0:
                q[v] = q.get(v, field.zero()) + c
            else:
                alpha_c = c * Fraction(e, v)
                u_gauge = LaurentMatrix.identity(n) + \
                    varpi_eps(torus, v, 0) * alpha_c
                cur = gauge_transform(u_gauge, cur)
                p_total = u_gauge * p_total
            rem = cur.matrix - ToralElement(torus, [dict(q)]).realization()
            d2 = filtration_degree(rem, ctx, stop_at=digits + 1)
            if d2 is INF or d2 > digits:
                break
            if d2 > v:
                continue
            v = d2
        target = rem - tame_corestriction(rem, torus, nu).realization()
        try:
            tgt_deg = filtration_degree(target, ctx, stop_at=digits + 1)
        except PrecisionError:
            break
        if tgt_deg is INF or tgt_deg > v:
            continue
        x = graded_ad_image_solve(lead, target * Fraction(-1), ctx, tgt_deg)
        if x is None:
            raise NotRegular("pure reduction hit an unsolvable level")
        g = LaurentMatrix.identity(n) + x
        cur = gauge_transform(g, cur)
        p_total = g * p_total
    return p_total, q


def _pure_normalizer(n, r, xs, alpha, field):
    """Constant diagonal p with Ad(p)(x varpi^(-r)) = alpha varpi^(-r):
    solve p_u = alpha p_(u-r) / x_u around the r-cycle (gcd(r,n)=1)."""
    diag = [None] * n
    diag[0] = field.one()
    u = 0
    for _ in range(n - 1):
        nxt = (u + r) % n
        val = alpha * diag[u]
        x = xs[nxt]
        inv = (Fraction(1) / x) if isinstance(x, (int, Fraction)) else x.inverse()
        diag[nxt] = val * inv
        u = nxt
    rows = [[LaurentScalar.from_scalar(diag[i]) if i == j else LaurentScalar.zero()
             for j in range(n)] for i in range(n)]
    return LaurentMatrix(rows)


_ = math
