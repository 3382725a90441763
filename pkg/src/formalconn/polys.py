"""Polynomials over the ground field and over truncated power series.

Provides the characteristic polynomial of series matrices, exact gcd /
squarefree machinery, factorization into irreducibles over Q or a
cyclotomic extension (delegated to sympy's exact factorizer), and
Hensel lifting of a coprime factorization from the residue field up the
t-adic filtration.

Polynomials are dense lists of coefficients in ascending degree.
"""

from fractions import Fraction

from .errors import PrecisionError
from .linalg import kidentity, kmatmul, sum_scalars
from .scalars import Ext, GroundField, is_zero
from .series import INF, LaurentScalar

# -- ground-field polynomials ------------------------------------------


def kpoly_trim(p):
    while len(p) > 1 and is_zero(p[-1]):
        p = p[:-1]
    return list(p)


def kpoly_deg(p):
    p = kpoly_trim(p)
    return -1 if len(p) == 1 and is_zero(p[0]) else len(p) - 1


def kpoly_add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else Fraction(0)
        b = q[i] if i < len(q) else Fraction(0)
        out.append(a + b)
    return kpoly_trim(out)


def kpoly_sub(p, q):
    return kpoly_add(p, [-c for c in q])


def kpoly_scale(p, c):
    return kpoly_trim([a * c for a in p])


def kpoly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not is_zero(a):
            for j, b in enumerate(q):
                if not is_zero(b):
                    out[i + j] = out[i + j] + a * b
    return kpoly_trim(out)


def kpoly_divmod(p, q):
    """Division with remainder; q need not be monic."""
    p = kpoly_trim(p)
    q = kpoly_trim(q)
    dq = kpoly_deg(q)
    assert dq >= 0
    lead = q[-1]
    inv = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else lead.inverse()
    rem = list(p)
    quot = [Fraction(0)] * max(len(p) - dq, 1)
    while kpoly_deg(rem) >= dq:
        d = kpoly_deg(rem)
        c = rem[d] * inv
        quot[d - dq] = c
        for i in range(dq + 1):
            rem[d - dq + i] = rem[d - dq + i] - c * q[i]
        rem = kpoly_trim(rem)
        if kpoly_deg(rem) < dq:
            break
    return kpoly_trim(quot), kpoly_trim(rem)


def kpoly_monic(p):
    p = kpoly_trim(p)
    lead = p[-1]
    if lead == 1:
        return p
    inv = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else lead.inverse()
    return [c * inv for c in p]


def kpoly_gcd(p, q):
    a, b = kpoly_trim(p), kpoly_trim(q)
    while kpoly_deg(b) >= 0:
        _, r = kpoly_divmod(a, b)
        a, b = b, r
    if kpoly_deg(a) < 0:
        return a
    return kpoly_monic(a)


def kpoly_gcdext(p, q):
    """Extended Euclid: returns (g, u, v) with u p + v q = g, g monic."""
    a, b = kpoly_trim(p), kpoly_trim(q)
    ua, va = [Fraction(1)], [Fraction(0)]
    ub, vb = [Fraction(0)], [Fraction(1)]
    while kpoly_deg(b) >= 0:
        quo, rem = kpoly_divmod(a, b)
        a, b = b, rem
        ua, ub = ub, kpoly_sub(ua, kpoly_mul(quo, ub))
        va, vb = vb, kpoly_sub(va, kpoly_mul(quo, vb))
    lead = a[-1]
    inv = Fraction(1) / lead if isinstance(lead, (int, Fraction)) else lead.inverse()
    return kpoly_scale(a, inv), kpoly_scale(ua, inv), kpoly_scale(va, inv)


def kpoly_derivative(p):
    return kpoly_trim([i * c for i, c in enumerate(p)][1:] or [Fraction(0)])


def kpoly_is_squarefree(p):
    return kpoly_deg(kpoly_gcd(p, kpoly_derivative(p))) <= 0


def kpoly_eval(p, x):
    acc = None
    for c in reversed(p):
        acc = c if acc is None else acc * x + c
    return acc


def kpoly_eval_kmatrix(p, mat):
    """Evaluate on a constant square matrix (Horner)."""
    n = len(mat)
    acc = kidentity(n)
    acc = [[p[-1] * v for v in row] for row in acc]
    for c in reversed(p[:-1]):
        acc = kmatmul(acc, mat)
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc


def kpoly_format(p, var="X"):
    parts = []
    for i in range(kpoly_deg(p), -1, -1):
        c = p[i] if i < len(p) else Fraction(0)
        if is_zero(c):
            continue
        from .scalars import format_scalar
        cs = format_scalar(c)
        if i == 0:
            parts.append(cs)
        elif i == 1:
            parts.append("(%s)*%s" % (cs, var))
        else:
            parts.append("(%s)*%s^%d" % (cs, var, i))
    return " + ".join(parts) if parts else "0"


# -- factorization over the ground field (sympy bridge) ------------------

_SYMPY_DOMAIN_CACHE = {}


def _sympy_domain(field):
    if field.m in _SYMPY_DOMAIN_CACHE:
        return _SYMPY_DOMAIN_CACHE[field.m]
    from sympy import QQ as SQQ
    if field.m == 1:
        dom = SQQ
    else:
        import sympy
        if field.m == 4:
            gen = sympy.I
        else:
            gen = sympy.exp(2 * sympy.pi * sympy.I / field.m)
        dom = SQQ.algebraic_field(gen)
    _SYMPY_DOMAIN_CACHE[field.m] = dom
    return dom


def _to_sympy_coeff(c, field, dom):
    from sympy import QQ as SQQ
    if field.m == 1:
        q = Fraction(c)
        return SQQ(q.numerator, q.denominator)
    coords = list(c.coords) if isinstance(c, Ext) else [Fraction(c)] + [Fraction(0)] * (field.degree - 1)
    from sympy.polys.polyclasses import ANP
    rep = [SQQ(x.numerator, x.denominator) for x in reversed(coords)]
    mod = [SQQ(x.numerator, x.denominator) for x in reversed(field.modulus)]
    return ANP(rep, mod, SQQ)


def _from_sympy_coeff(c, field):
    if field.m == 1:
        return Fraction(int(c.numerator), int(c.denominator))
    lst = list(c.to_list())  # highest theta power first
    lst = [Fraction(int(x.numerator), int(x.denominator)) for x in lst]
    lst = list(reversed(lst))
    lst += [Fraction(0)] * (field.degree - len(lst))
    return field.from_coords(lst)


def kpoly_factor(p, field):
    """Factor a polynomial into monic irreducibles over the field.

    Returns a list of (factor, multiplicity) with ascending-coefficient
    monic factors; the unit content is discarded (inputs are monic in
    all call sites).
    """
    from sympy.polys.factortools import dup_factor_list
    p = kpoly_monic(p)
    dom = _sympy_domain(field)
    dup = [_to_sympy_coeff(c, field, dom) for c in reversed(p)]
    _, factors = dup_factor_list(dup, dom)
    out = []
    for fac, mult in factors:
        coeffs = [_from_sympy_coeff(c, field) for c in reversed(fac)]
        out.append((kpoly_monic(coeffs), mult))
    out.sort(key=lambda fm: (kpoly_deg(fm[0]), _factor_sort_key(fm[0])))
    return out


def _factor_sort_key(p):
    from .scalars import sort_key
    return tuple(sort_key(c) for c in p)


def kpoly_roots(p, field):
    """Roots lying in the field with multiplicities, plus the product of
    the nonlinear irreducible factors (the part with no roots in k)."""
    roots = []
    nonsplit = [field.one() if field.m != 1 else Fraction(1)]
    for fac, mult in kpoly_factor(p, field):
        if kpoly_deg(fac) == 1:
            roots.append((-fac[0], mult))
        else:
            for _ in range(mult):
                nonsplit = kpoly_mul(nonsplit, fac)
    return roots, kpoly_trim(nonsplit)


# -- series-coefficient polynomials --------------------------------------


def charpoly_series(mat):
    """Characteristic polynomial of a LaurentMatrix, ascending
    coefficients (LaurentScalar), monic of degree n.  Faddeev-LeVerrier:
    only divisions by integers occur."""
    n = mat.n
    coeffs = [LaurentScalar.zero() for _ in range(n + 1)]
    coeffs[n] = LaurentScalar.one()
    work = mat
    m_prev = None
    for k in range(1, n + 1):
        cur = mat if k == 1 else mat * m_prev
        tr = cur.trace()
        c = tr * Fraction(-1, k)
        coeffs[n - k] = c
        m_prev = cur + _scalar_diag(n, c)
    return coeffs


def _scalar_diag(n, series):
    from .matrices import LaurentMatrix
    return LaurentMatrix.scalar(n, series)


def spoly_mul(p, q, prec=INF):
    out = [LaurentScalar.zero() for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + (a * b).truncate(prec)
    return out


def spoly_sub(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else LaurentScalar.zero()
        b = q[i] if i < len(q) else LaurentScalar.zero()
        out.append(a - b)
    return out


def spoly_coeff_at(p, t_exp):
    """Extract the ground-field polynomial of t^t_exp coefficients."""
    return kpoly_trim([c.coeff_or_zero(t_exp) for c in p])


def spoly_reduce_mod_t(p):
    out = []
    for c in p:
        if c.prec is not INF and c.prec <= 0:
            raise PrecisionError("series polynomial unknown mod t")
        out.append(c.coeff_or_zero(0))
    return kpoly_trim(out)


def hensel_lift(phi, g0, h0, digits):
    """Lift the coprime factorization phi = g0 h0 (mod t) to t^digits.

    phi: monic, coefficients LaurentScalar with orders >= 0.
    g0, h0: monic coprime ground-field polynomials.
    Returns (g, h) with series coefficients agreeing with phi to the
    requested number of t-digits.
    """
    one, u, v = kpoly_gcdext(g0, h0)
    assert kpoly_deg(one) == 0, "factors are not coprime"
    g = [LaurentScalar.from_scalar(c) if not is_zero(c) else LaurentScalar.zero() for c in g0]
    h = [LaurentScalar.from_scalar(c) if not is_zero(c) else LaurentScalar.zero() for c in h0]
    for k in range(1, digits):
        err = spoly_sub(phi, spoly_mul(g, h, prec=k + 1))
        e_k = spoly_coeff_at(err, k)
        if kpoly_deg(e_k) < 0:
            continue
        # Solve A h0 + B g0 = e_k with deg A < deg g0.
        a_raw = kpoly_mul(v, e_k)
        _, a = kpoly_divmod(a_raw, g0)
        num = kpoly_sub(e_k, kpoly_mul(a, h0))
        b, rem = kpoly_divmod(num, g0)
        assert kpoly_deg(rem) < 0, "Hensel correction failed to divide"
        g = _spoly_add_tk(g, a, k)
        h = _spoly_add_tk(h, b, k)
    g = [c.truncate(digits) for c in g]
    h = [c.truncate(digits) for c in h]
    return g, h


def _spoly_add_tk(p, kpoly, k):
    out = list(p)
    for i, c in enumerate(kpoly):
        if is_zero(c):
            continue
        add = LaurentScalar.t_power(k, c)
        if i < len(out):
            out[i] = out[i] + add
        else:
            out.append(add)
    return out


def spoly_eval_matrix(p, mat):
    """Evaluate a series-coefficient polynomial on a LaurentMatrix."""
    from .matrices import LaurentMatrix
    n = mat.n
    acc = LaurentMatrix.scalar(n, p[-1])
    for c in reversed(p[:-1]):
        acc = acc * mat + LaurentMatrix.scalar(n, c)
    return acc


def kpoly_charpoly_from_kmatrix(mat):
    from .linalg import charpoly
    return charpoly(mat)


def is_power_of_x(p):
    """True when p = X^n (the nilpotent characteristic polynomial)."""
    p = kpoly_trim(p)
    return all(is_zero(c) for c in p[:-1])


_ = (GroundField, sum_scalars)
