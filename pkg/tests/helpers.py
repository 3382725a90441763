"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: the
slope oracle measures Katz growth of iterated derivatives, and the
fundamental-stratum oracle brute-forces the power criterion through raw
series arithmetic and entry-order membership tests.
"""

import random
from fractions import Fraction

from formalconn.matrices import LaurentMatrix
from formalconn.series import INF, LaurentScalar


def LS(pairs, prec=INF):
    return LaurentScalar({k: (Fraction(*p) if isinstance(p, tuple) else Fraction(p))
                          for k, p in pairs}, prec)


def lmat(entries, prec=INF):
    return LaurentMatrix([[LS(e, prec) for e in row] for row in entries])


def random_series(rng, lo=-2, hi=3, density=0.6, denom=3, prec=INF):
    coeffs = {}
    for k in range(lo, hi):
        if rng.random() < density:
            num = rng.randint(-4, 4)
            if num:
                coeffs[k] = Fraction(num, rng.randint(1, denom))
    return LaurentScalar(coeffs, prec)


def random_matrix(rng, n, lo=-2, hi=3, density=0.6, prec=INF):
    return LaurentMatrix([[random_series(rng, lo, hi, density, prec=prec)
                           for _ in range(n)] for _ in range(n)])


def random_unit_matrix(rng, n, depth=3):
    """Identity plus strictly positive-order noise: a unit of P^1-type."""
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = {}
            for k in range(1, depth + 1):
                c = rng.randint(-2, 2)
                if c:
                    coeffs[k] = Fraction(c)
            if i == j:
                coeffs[0] = Fraction(1)
            row.append(LaurentScalar(coeffs))
        rows.append(row)
    return LaurentMatrix(rows)


# -- the Katz growth oracle ---------------------------------------------------


def katz_slope_oracle(conn, imax=40, bound=Fraction(2)):
    """Slope via boundedness of v(nabla_tau^i e) + sigma i over the
    (1/n!)-grid of candidate slopes.

    Entirely independent of the strata machinery: iterated application
    of M + tau to the standard basis, valuations read off entry orders.
    Vectors are truncated to a working window above their valuation; an
    undetermined valuation (swallowed by the window) retries the whole
    run with a doubled window, and a vector that stays indistinguishable
    from zero at the widest window ends the iteration with the
    valuations collected so far.
    """
    conn = conn.standardized()
    n = conn.n
    m = conn.matrix
    vals = None
    for window in (14, 28, 56, 112, 224):
        vecs = []
        for j in range(n):
            col = [LaurentScalar.zero() for _ in range(n)]
            col[j] = LaurentScalar.one()
            vecs.append(col)
        vals = []
        widen = False
        for _ in range(imax):
            vecs = [_apply_nabla(m, v) for v in vecs]
            orders = [entry.order for col in vecs for entry in col
                      if not entry.is_zero()]
            if not orders:
                if any(entry.prec is not INF for col in vecs for entry in col) \
                        and window < 224:
                    widen = True
                break
            v_i = min(orders)
            vals.append(v_i)
            cut = v_i + window
            vecs = [[entry.truncate(cut) for entry in col] for col in vecs]
        if not widen:
            break
    if not vals or all(v is None for v in vals):
        return Fraction(0)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    max_slope = max(-Fraction(v, i + 1) for i, v in enumerate(vals) if v is not None)
    if max_slope <= 0:
        return Fraction(0)
    candidates = [Fraction(p, fact) for p in range(0, int(max_slope * fact) + fact + 1)]
    best = None
    for sigma in candidates:
        ds = [Fraction(v) + sigma * (i + 1) for i, v in enumerate(vals) if v is not None]
        spread = max(ds) - min(ds)
        if best is None or spread < best[0]:
            best = (spread, sigma)
    spread, sigma = best
    assert spread <= bound, "oracle found no bounded candidate (spread %s)" % spread
    return sigma


def _apply_nabla(m, vec):
    out = m.matvec(vec)
    return [a + b.tau() for a, b in zip(out, vec)]


# -- brute-force fundamental test --------------------------------------------


def entry_min_order_table(blocks):
    """Minimal entry orders of P^r for the grouped standard chain,
    recomputed from scratch (independent of the library's formula):
    explicit membership of t^c E_uv against the listed lattices."""
    e = len(blocks)
    n = sum(blocks)
    group = []
    for b_idx, size in enumerate(blocks):
        group.extend([b_idx] * size)

    def lattice_exp(j, u):
        # L^j = sum t^(m_u) o e_u built by peeling the last block first
        q, s = divmod(j, e)
        # after s peels, blocks e-1, ..., e-s have gained one t
        extra = 1 if group[u] >= e - s else 0
        return q + extra

    def min_order(u, v, r):
        c = -(abs(r) + 8)
        while True:
            if all(c + lattice_exp(j, v) >= lattice_exp(j + r, u) for j in range(2 * e)):
                return c
            c += 1

    return min_order


def brute_force_fundamental(blocks, r, beta, max_power=None):
    """Non-fundamental iff beta^m lies in P^(1-rm) for some m <= n,
    with membership tested entry by entry against first principles."""
    n = sum(blocks)
    if max_power is None:
        max_power = n
    min_order = entry_min_order_table(blocks)
    power = LaurentMatrix.identity(n)
    for m in range(1, max_power + 1):
        power = power * beta
        level = 1 - r * m
        inside = True
        for u in range(n):
            for v in range(n):
                entry = power.rows[u][v]
                if entry.is_zero():
                    continue
                if entry.order < min_order(u, v, level):
                    inside = False
                    break
            if not inside:
                break
        if inside:
            return False
    return True


def seeded(seed):
    return random.Random(seed)
