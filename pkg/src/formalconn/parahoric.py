"""Standard lattice chains and parahoric filtrations.

A standard chain in F^n is encoded by a *phase* per basis vector: the
lattice L^j is the span of t^(m_u(j)) e_u with m_u(j) = ceil((j -
phase(u)) / e).  Then L^0 = o^n, L^(j+e) = t L^j, and membership of a
matrix entry in the congruence ideal P^l has the closed form

    ord(X[u][v]) >= ceil((l + phase(v) - phase(u)) / e).

Grouped layout (the standard chain of a composition) assigns phases
e-1-B(u) where B(u) is the index of the block containing u; the
torus-adapted interleaved layout repeats the complete-chain phases
inside each of the n/e diagonal blocks.
"""

from fractions import Fraction

from .errors import EmptyComposition, NotInFiltration, PrecisionError
from .linalg import kmatmul, kzeros
from .matrices import LaurentMatrix
from .scalars import is_zero
from .series import INF, LaurentScalar


class LatticeChain:
    """Combinatorial shadow of a standard lattice chain: dimension,
    flag composition and period."""

    __slots__ = ("n", "blocks", "period")

    def __init__(self, n, blocks):
        blocks = tuple(blocks)
        if not blocks or any(b <= 0 for b in blocks):
            raise EmptyComposition("composition must be nonempty and positive")
        if sum(blocks) != n:
            raise EmptyComposition("composition %r does not sum to %d" % (blocks, n))
        self.n = n
        self.blocks = blocks
        self.period = len(blocks)

    @property
    def uniform(self):
        return len(set(self.blocks)) == 1

    def __repr__(self):
        return "LatticeChain(n=%d, blocks=%r)" % (self.n, self.blocks)


class ParahoricContext:
    """A standard parahoric: chain data plus the phase vector and, for
    uniform chains, the shift generator of P^1."""

    __slots__ = ("chain", "phases", "layout", "_varpi")

    def __init__(self, chain, phases, layout):
        self.chain = chain
        self.phases = tuple(phases)
        self.layout = layout
        self._varpi = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def grouped(cls, blocks):
        blocks = tuple(blocks)
        n = sum(blocks)
        chain = LatticeChain(n, blocks)
        e = len(blocks)
        phases = []
        for b_idx, size in enumerate(blocks):
            phases.extend([e - 1 - b_idx] * size)
        return cls(chain, phases, "grouped")

    @classmethod
    def interleaved(cls, e, m):
        """Torus-adapted context: m diagonal blocks of size e, each
        carrying the complete-chain phases."""
        n = e * m
        chain = LatticeChain(n, (m,) * e)
        phases = []
        for _ in range(m):
            phases.extend(e - 1 - p for p in range(e))
        return cls(chain, phases, "interleaved")

    # -- basic data -------------------------------------------------------

    @property
    def n(self):
        return self.chain.n

    @property
    def period(self):
        return self.chain.period

    @property
    def uniform(self):
        counts = {}
        for p in self.phases:
            counts[p] = counts.get(p, 0) + 1
        return len(counts) == self.period and len(set(counts.values())) == 1

    def min_entry_order(self, u, v, level):
        """Smallest t-order allowed for entry (u, v) of P^level."""
        e = self.period
        return -((-(level + self.phases[v] - self.phases[u])) // e)

    def lattice_exponents(self, j):
        """Exponents m_u(j) such that L^j = sum t^(m_u) o e_u."""
        e = self.period
        return [-((-(j - p)) // e) for p in self.phases]

    def graded_dim(self, j):
        """dim L^j / L^(j+1)."""
        e = self.period
        return sum(1 for p in self.phases if p % e == j % e)

    def translate(self, j):
        """The chain reindexed by L[j]^i = L^(i+j).

        Phases shift without normalization: the lattice set and the
        congruence ideals are unchanged, only the base point moves, so
        the translate of a normalized context (L^0 = o^n) is normalized
        again only for j in e Z."""
        return ParahoricContext(self.chain, tuple(p - j for p in self.phases),
                                self.layout)

    def same_filtration(self, other):
        return self.period == other.period and self.phases == other.phases

    # -- the shift generator -----------------------------------------------

    @property
    def varpi(self):
        """Generator of P^1 for uniform chains (None otherwise)."""
        if not self.uniform:
            return None
        if self._varpi is None:
            e = self.period
            n = self.n
            rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
            # within each phase class, order indices; the generator sends
            # the class of phase p to phase p+1 (mod e), acquiring t on wrap.
            by_phase = {}
            for u, p in enumerate(self.phases):
                by_phase.setdefault(p, []).append(u)
            for p in range(e):
                src = by_phase[p]
                dst = by_phase[(p + 1) % e]
                wrap = (p + 1) == e
                for s, d in zip(src, dst):
                    rows[d][s] = LaurentScalar.t_power(1) if wrap else LaurentScalar.one()
            self._varpi = LaurentMatrix(rows)
        return self._varpi

    def varpi_power(self, k):
        w = self.varpi
        assert w is not None, "varpi needs a uniform chain"
        e = self.period
        q, s = divmod(k, e)
        out = LaurentMatrix.identity(self.n).shift(q)
        for _ in range(s):
            out = out * w
        return out

    def __repr__(self):
        return "ParahoricContext(blocks=%r, layout=%s)" % (self.chain.blocks, self.layout)


def standard_chain(blocks):
    """The standard parahoric of a composition; Iwahori for (1,...,1),
    the maximal parahoric GL_n(o) for (n,)."""
    return ParahoricContext.grouped(blocks)


def fildeg_certified(x, ctx):
    """(degree over known-nonzero entries, certification bound): the
    filtration degree equals the first value when it does not exceed
    the second; beyond the bound the windows are silent."""
    e = ctx.period
    best = INF
    bound = INF
    for u in range(ctx.n):
        for v in range(ctx.n):
            entry = x.rows[u][v]
            off = ctx.phases[u] - ctx.phases[v]
            if entry.is_zero():
                if entry.prec is not INF:
                    bound = min(bound, e * entry.prec + off)
                continue
            best = min(best, e * entry.order + off)
            if entry.prec is not INF:
                bound = min(bound, e * entry.prec + off)
    return best, bound


def filtration_degree(x, ctx, stop_at=None):
    """Largest r with x in P^r; +inf for the zero matrix.

    Raises PrecisionError when a zero-to-precision entry leaves the
    answer undetermined -- unless ``stop_at`` is given and the degree
    is certified to be at least that, in which case +inf is returned
    as an "at least stop_at" sentinel.
    """
    best, bound = fildeg_certified(x, ctx)
    if bound < best:
        if stop_at is not None and bound >= stop_at and best is INF:
            return INF
        raise PrecisionError(
            "filtration degree undetermined: known bound %s < candidate %s" % (bound, best),
            needed=None)
    return best


class GradedEndo:
    """Image of X in P^r / P^(r+1), stored as the n x n pattern matrix of
    leading coefficients (entry (u,v) is the coefficient at the minimal
    order slot when the phase pattern allows it, else 0)."""

    __slots__ = ("pattern", "r", "ctx")

    def __init__(self, pattern, r, ctx):
        self.pattern = pattern
        self.r = r
        self.ctx = ctx

    def maps(self):
        """The e maps Hom(Lbar^i, Lbar^(i+r)) as constant matrices."""
        e = self.ctx.period
        out = []
        for i in range(e):
            cols = [u for u in range(self.ctx.n) if self.ctx.phases[u] % e == i % e]
            rows = [u for u in range(self.ctx.n) if self.ctx.phases[u] % e == (i + self.r) % e]
            out.append([[self.pattern[ru][cu] for cu in cols] for ru in rows])
        return out

    def compose(self, other):
        """(self in degree r) o (other in degree s) -> degree r+s."""
        assert self.ctx.same_filtration(other.ctx)
        return GradedEndo(kmatmul(self.pattern, other.pattern), self.r + other.r, self.ctx)

    def is_zero(self):
        return all(is_zero(c) for row in self.pattern for c in row)

    def is_nilpotent(self):
        m = self.pattern
        for _ in range(self.ctx.n):
            if all(is_zero(c) for row in m for c in row):
                return True
            m = kmatmul(m, self.pattern)
        return all(is_zero(c) for row in m for c in row)

    def __eq__(self, other):
        if not isinstance(other, GradedEndo):
            return NotImplemented
        return (self.r == other.r and self.ctx.same_filtration(other.ctx)
                and self.pattern == other.pattern)

    def __repr__(self):
        return "GradedEndo(r=%d, pattern=%r)" % (self.r, self.pattern)


def graded_component(x, ctx, r):
    """The image of x in P^r / P^(r+1) (requires x in P^r)."""
    deg = filtration_degree(x, ctx)
    if deg < r:
        raise NotInFiltration("matrix has filtration degree %s < %d" % (deg, r))
    e = ctx.period
    n = ctx.n
    pat = kzeros(n, n)
    for u in range(n):
        for v in range(n):
            rem = (r + ctx.phases[v] - ctx.phases[u]) % e
            if rem == 0:
                o = (r + ctx.phases[v] - ctx.phases[u]) // e
                entry = x.rows[u][v]
                if o >= entry.prec:
                    raise PrecisionError("graded coefficient at t^%d unknown" % o, needed=o + 1)
                pat[u][v] = entry.coeff_or_zero(o)
    return GradedEndo(pat, r, ctx)


def graded_monomials(ctx, r):
    """Monomial basis of P^r / P^(r+1): list of (u, v, order)."""
    e = ctx.period
    out = []
    for u in range(ctx.n):
        for v in range(ctx.n):
            val = r + ctx.phases[v] - ctx.phases[u]
            if val % e == 0:
                out.append((u, v, val // e))
    return out


def monomial_matrix(ctx, u, v, order, coeff=Fraction(1)):
    rows = [[LaurentScalar.zero() for _ in range(ctx.n)] for _ in range(ctx.n)]
    rows[u][v] = LaurentScalar.t_power(order, coeff)
    return LaurentMatrix(rows)


def pattern_to_matrix(ctx, pattern, r):
    """Realize a graded pattern as the monomial representative in P^r."""
    n = ctx.n
    e = ctx.period
    rows = [[LaurentScalar.zero() for _ in range(n)] for _ in range(n)]
    for u in range(n):
        for v in range(n):
            c = pattern[u][v]
            if not is_zero(c):
                val = r + ctx.phases[v] - ctx.phases[u]
                assert val % e == 0, "pattern entry off the graded support"
                rows[u][v] = LaurentScalar.t_power(val // e, c)
    return LaurentMatrix(rows)


def in_filtration(x, ctx, r):
    """x in P^r, decided exactly (PrecisionError when undecidable)."""
    try:
        return filtration_degree(x, ctx) >= r
    except PrecisionError:
        # the undetermined bound might still decide membership
        e = ctx.period
        for u in range(ctx.n):
            for v in range(ctx.n):
                entry = x.rows[u][v]
                need = ctx.min_entry_order(u, v, r)
                for k in entry.support():
                    if k < need:
                        return False
                if entry.prec is not INF and entry.prec < need:
                    raise
        return True
