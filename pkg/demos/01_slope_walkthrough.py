"""Slope computation walkthrough.

Builds a handful of connections, shows the standard-parahoric scan data
(filtration depth per chain), and compares the resulting slopes with
the naive polar order.  Run:  python demos/01_slope_walkthrough.py
"""

from fractions import Fraction

from formalconn import (FormalConnection, LaurentMatrix, LaurentScalar,
                        OneForm, filtration_degree, fundamental_stratum,
                        is_fundamental, slope, standard_chain,
                        stratum_char_poly)
from formalconn.strata import Stratum


def series(pairs):
    return LaurentScalar({k: Fraction(v) for k, v in pairs})


def connection_from_dt(entries):
    rows = [[series(e) for e in row] for row in entries]
    return FormalConnection.from_dt_matrix(LaurentMatrix(rows), OneForm.dt())


def show(name, conn):
    print("=" * 60)
    print(name)
    std = conn.standardized()
    n = conn.n
    print("  [nabla_tau] =", std.matrix.to_json())
    for blocks in [(n,)] + ([(1,) * n] if n > 1 else []):
        ctx = standard_chain(blocks)
        d = filtration_degree(std.matrix, ctx)
        line = "  chain %-12r depth r = %s, slope bound %s" % (
            blocks, -d, Fraction(-d, ctx.period) if d < 0 else 0)
        try:
            s = Stratum(ctx, max(0, -d), std.matrix)
            line += ", fundamental" if is_fundamental(s) else ", NOT fundamental"
            line += ", phi = %s" % stratum_char_poly(s).format()
        except Exception as exc:
            line += " (%s)" % exc
        print(line)
    print("  slope =", slope(conn))
    gauge, cur, strat = fundamental_stratum(conn)
    print("  certifying stratum: blocks %r, r = %d (slope %s)"
          % (strat.ctx.chain.blocks, strat.r, strat.slope))


# The nilpotent-leading-term example: the naive polar order says 3 but
# the complete chain sees the true slope 3/2.
show("irregular with nilpotent leading term",
     connection_from_dt([[[], [(-3, 1)]], [[(-2, 1)], []]]))

# A split pair of line connections: the slope is the deeper of the two.
show("split diagonal", FormalConnection(LaurentMatrix([
    [series([(-2, 1)]), LaurentScalar.zero()],
    [LaurentScalar.zero(), series([(-5, 3)])]])))

# The shear case: every standard chain in the given frame is
# non-fundamental and the engine must move the lattice first.
show("kernel shear needed", FormalConnection(LaurentMatrix([
    [LaurentScalar.zero(), series([(-2, 1)])],
    [series([(0, 1)]), LaurentScalar.zero()]])))

# A regular singular connection: slope zero.
show("regular singular", FormalConnection(LaurentMatrix([
    [series([(0, (1, 2))]), series([(1, 1)])],
    [LaurentScalar.zero(), series([(0, (1, 3))])]])))
