"""Exact truncated power series in t and face weights g_2, g_4, ...

Series are truncated by total g-degree (= number of inner faces of the
objects they count).  Coefficients are exact rationals; the vertex
variable t is kept as a Laurent variable so that expressions like
d ln R / dt - 1/t are representable before cancellation.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

QUAD = (4,)
GENERAL = (2, 4, 6, 8)


class TruncSeries:
    r"""A truncated multivariate series.

    coeffs maps a g-exponent tuple (aligned with ``degrees``) to a
    t-polynomial stored as {t_exponent: Fraction}.  All arithmetic
    truncates at total g-degree ``order``.
    """

    __slots__ = ("order", "degrees", "coeffs")

    def __init__(self, order, degrees, coeffs=None):
        self.order = order
        self.degrees = tuple(degrees)
        self.coeffs = {}
        if coeffs:
            for gexp, tpoly in coeffs.items():
                clean = {te: Fraction(c) for te, c in tpoly.items() if c}
                if clean and sum(gexp) <= order:
                    self.coeffs[tuple(gexp)] = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order, degrees):
        return cls(order, degrees)

    @classmethod
    def t_power(cls, order, degrees, texp=1, coeff=1):
        zero_g = tuple(0 for _ in degrees)
        return cls(order, degrees, {zero_g: {texp: Fraction(coeff)}})

    @classmethod
    def g_var(cls, order, degrees, degree):
        idx = degrees.index(degree)
        gexp = tuple(1 if i == idx else 0 for i in range(len(degrees)))
        return cls(order, degrees, {gexp: {0: Fraction(1)}})

    # -- helpers ------------------------------------------------------

    def _check(self, other):
        if self.order != other.order or self.degrees != other.degrees:
            raise ValueError("incompatible series parameters")

    def copy(self):
        return TruncSeries(self.order, self.degrees,
                           {g: dict(p) for g, p in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def g_order(self):
        """Smallest total g-degree with a nonzero coefficient (None if 0)."""
        if not self.coeffs:
            return None
        return min(sum(g) for g in self.coeffs)

    def coefficient(self, gexp, texp):
        return self.coeffs.get(tuple(gexp), {}).get(texp, Fraction(0))

    def t_poly(self, gexp):
        return dict(self.coeffs.get(tuple(gexp), {}))

    def min_t_power(self):
        lows = [min(p) for p in self.coeffs.values()]
        return min(lows) if lows else None

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.t_power(self.order, self.degrees, 0, other)
        self._check(other)
        out = {g: dict(p) for g, p in self.coeffs.items()}
        for g, p in other.coeffs.items():
            tgt = out.setdefault(g, {})
            for te, c in p.items():
                tgt[te] = tgt.get(te, Fraction(0)) + c
        return TruncSeries(self.order, self.degrees, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.order, self.degrees,
                           {g: {te: -c for te, c in p.items()}
                            for g, p in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.t_power(self.order, self.degrees, 0, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return TruncSeries(self.order, self.degrees)
        return TruncSeries(self.order, self.degrees,
                           {g: {te: c * scalar for te, c in p.items()}
                            for g, p in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        out = {}
        for g1, p1 in self.coeffs.items():
            d1 = sum(g1)
            for g2, p2 in other.coeffs.items():
                if d1 + sum(g2) > self.order:
                    continue
                g = tuple(a + b for a, b in zip(g1, g2))
                tgt = out.setdefault(g, {})
                for t1, c1 in p1.items():
                    for t2, c2 in p2.items():
                        te = t1 + t2
                        tgt[te] = tgt.get(te, Fraction(0)) + c1 * c2
        return TruncSeries(self.order, self.degrees, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.t_power(self.order, self.degrees, 0, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def inverse(self):
        """Inverse of a series whose g-degree-0 part is a t-monomial."""
        zero_g = tuple(0 for _ in self.degrees)
        head = self.coeffs.get(zero_g, {})
        if len(head) != 1:
            raise ValueError("inverse requires a monomial g^0 part")
        (texp, c), = head.items()
        lead_inv = TruncSeries.t_power(self.order, self.degrees, -texp,
                                       Fraction(1, 1) / c)
        u = self * lead_inv - 1          # g-order >= 1
        if not u.is_zero() and u.g_order() == 0:
            raise ValueError("inverse requires a monomial g^0 part")
        acc = TruncSeries.t_power(self.order, self.degrees, 0, 1)
        term = TruncSeries.t_power(self.order, self.degrees, 0, 1)
        sign = 1
        for _ in range(self.order):
            term = term * u
            sign = -sign
            if term.is_zero():
                break
            acc = acc + term.scale(sign)
        return acc * lead_inv

    def dt(self):
        """Derivative with respect to t."""
        out = {}
        for g, p in self.coeffs.items():
            tgt = {}
            for te, c in p.items():
                if te != 0:
                    tgt[te - 1] = tgt.get(te - 1, Fraction(0)) + c * te
            if tgt:
                out[g] = tgt
        return TruncSeries(self.order, self.degrees, out)

    # -- evaluation / comparison --------------------------------------

    def at_t1(self):
        """Collapse t to 1, returning {gexp: Fraction}."""
        return {g: sum(p.values()) for g, p in self.coeffs.items()
                if sum(p.values())}

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return (self - other).is_zero()
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.order, self.degrees,
                     tuple(sorted((g, tuple(sorted(p.items())))
                                  for g, p in self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "TruncSeries(0)"
        parts = []
        for g in sorted(self.coeffs, key=lambda g: (sum(g), g)):
            for te in sorted(self.coeffs[g]):
                c = self.coeffs[g][te]
                mono = "".join("g%d^%d" % (d, e) if e > 1 else
                               ("g%d" % d if e == 1 else "")
                               for d, e in zip(self.degrees, g))
                parts.append("%s%s t^%d" % (c, mono, te))
        return "TruncSeries(" + " + ".join(parts) + ")"

    def rows(self):
        """Sorted (gexp, texp, numerator, denominator) rows for TSV export."""
        out = []
        for g in sorted(self.coeffs, key=lambda g: (sum(g), g)):
            for te in sorted(self.coeffs[g]):
                c = self.coeffs[g][te]
                out.append((g, te, c.numerator, c.denominator))
        return out


# ---------------------------------------------------------------------
# The slice series R and its relatives
# ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def solve_R(N, degrees=GENERAL):
    """Fixed point of R = t + sum_k binom(2k-1, k) g_2k R^k.

    The returned series is shared via a cache; treat it as immutable.
    """
    t = TruncSeries.t_power(N, degrees)
    R = t
    for _ in range(N + 1):
        acc = t
        for d in degrees:
            k = d // 2
            gv = TruncSeries.g_var(N, degrees, d)
            acc = acc + gv * R ** k * comb(2 * k - 1, k)
        R = acc
    return R


def dlogR_dt(R):
    """d ln R / dt (contains a 1/t term)."""
    return _dlogR(R.order, R.degrees)


@lru_cache(maxsize=None)
def _dlogR(N, degrees):
    R = solve_R(N, degrees)
    return R.dt() * R.inverse()


def tabc_series(two_a, two_b, two_c, N, degrees=GENERAL):
    """Weighted count of maps with three labeled tight boundaries of
    lengths two_a, two_b, two_c (halved parameters may be half-integers,
    hence the doubled arguments)."""
    if any(x < 0 for x in (two_a, two_b, two_c)):
        raise ValueError("negative boundary length")
    s = two_a + two_b + two_c
    if s % 2:
        raise ValueError("a+b+c must be an integer")
    R = solve_R(N, degrees)
    T = R ** (s // 2) * dlogR_dt(R)
    if s == 0:
        T = T - TruncSeries.t_power(N, degrees, -1)
    assert (T.min_t_power() or 0) >= 0, "t^-1 terms failed to cancel"
    return T


def alpha_count(two_L):
    """(2L)! / (floor(L)! floor(L - 1/2)!) for 2L a positive integer."""
    if two_L <= 0:
        raise ValueError("2L must be positive")
    return factorial(two_L) // (factorial(two_L // 2)
                                * factorial((two_L - 1) // 2))


def boundary_gf(N, two_Ls, degrees=GENERAL):
    """Closed-form count of maps with 2 or 3 rooted boundaries of
    half-lengths L_i (passed doubled)."""
    if len(two_Ls) not in (2, 3):
        raise ValueError("need 2 or 3 boundary lengths")
    if any(x <= 0 for x in two_Ls):
        raise ValueError("boundary lengths must be positive")
    tot = sum(two_Ls)
    if tot % 2:
        raise ValueError("sum of L_i must be an integer")
    R = solve_R(N, degrees)
    coeff = 1
    for tl in two_Ls:
        coeff *= alpha_count(tl)
    if len(two_Ls) == 2:
        return (R ** (tot // 2)).scale(Fraction(2 * coeff, tot))
    return (R ** (tot // 2) * dlogR_dt(R)).scale(coeff)


def funnel_block(two_L, two_l, N, degrees=GENERAL):
    """Annular maps with a rooted boundary of length 2L and a strictly
    tight unrooted boundary of length 2l: binom(2L, L-l) R^(L-l)."""
    if two_l <= 0 or two_L < two_l or (two_L - two_l) % 2:
        raise ValueError("need L >= l > 0 with L - l a nonnegative integer")
    k = (two_L - two_l) // 2
    R = solve_R(N, degrees)
    return (R ** k).scale(comb(two_L, k))


def tight_annulus(two_l, N, degrees=GENERAL):
    """Annular maps with two rooted tight boundaries of length 2l: 2l R^2l."""
    if two_l <= 0:
        raise ValueError("2l must be positive")
    R = solve_R(N, degrees)
    return (R ** two_l).scale(two_l)


def quad_xy(N):
    """Quadrangulation specialization: the auxiliary series x and the
    diangle/triangle series X, Y."""
    degrees = QUAD
    t = TruncSeries.t_power(N, degrees)
    g = TruncSeries.g_var(N, degrees, 4)
    R = solve_R(N, degrees)
    base = g * R * R * t.inverse()
    x = TruncSeries.zero(N, degrees)
    for _ in range(N + 1):
        x = base * (1 + x + x * x)
    X = t * (1 + x + x * x)
    Y = t * (1 - x ** 3).inverse()
    return x, X, Y


def hypergeom_alpha_identity(two_L):
    """sum over 2l > 0 of 2l * binom(2L, L - l) == alpha(2L)."""
    total = 0
    two_l = two_L
    while two_l > 0:
        total += two_l * comb(two_L, (two_L - two_l) // 2)
        two_l -= 2
    return total == alpha_count(two_L)


def identity_suite(N, quad_N=None, max_two_L=20):
    """Run every in-scope algebraic identity exactly; return a report as
    a list of (name, passed) pairs."""
    if quad_N is None:
        quad_N = N
    report = []

    # quadrangulation identities
    Rq = solve_R(quad_N, QUAD)
    dlq = dlogR_dt(Rq)
    x, X, Y = quad_xy(quad_N)
    t6 = TruncSeries.t_power(quad_N, QUAD, 6)
    report.append(("quad X^3 Y^2 / t^6 == d ln R / dt",
                   X ** 3 * Y ** 2 * t6.inverse() == dlq))
    report.append(("quad x equation",
                   x == Rq * Rq * TruncSeries.g_var(quad_N, QUAD, 4)
                   * TruncSeries.t_power(quad_N, QUAD).inverse()
                   * (1 + x + x * x)))

    # hypergeometric alpha identity, including half-integer L
    ok = all(hypergeom_alpha_identity(tl) for tl in range(1, max_two_L + 1))
    report.append(("hypergeometric alpha identity, 2L <= %d" % max_two_L, ok))

    # three-boundary closed form vs funnel (x) tight-core convolution
    for two_Ls in ((2, 2, 2), (1, 1, 2), (3, 2, 1)):
        closed = boundary_gf(N, two_Ls)
        R = solve_R(N, GENERAL)
        dl = dlogR_dt(R)
        conv = TruncSeries.zero(N, GENERAL)
        from itertools import product
        ranges = [range(tl % 2 if tl % 2 else 2, tl + 1, 2) for tl in two_Ls]
        ranges = [[v for v in r if v > 0] for r in ranges]
        for two_ls in product(*ranges):
            term = TruncSeries.t_power(N, GENERAL, 0, 1)
            for tL, tl in zip(two_Ls, two_ls):
                term = term * funnel_block(tL, tl, N).scale(tl)
            term = term * R ** (sum(two_ls) // 2) * dl
            conv = conv + term
        report.append(("three-boundary convolution %s" % (two_Ls,),
                       closed == conv))

    # annular closed form vs funnel (x) funnel (x) tight annulus
    for two_Ls in ((2, 2), (1, 1), (3, 1), (2, 4)):
        closed = boundary_gf(N, two_Ls)
        conv = TruncSeries.zero(N, GENERAL)
        lo = 2 if two_Ls[0] % 2 == 0 else 1
        for two_l in range(lo, min(two_Ls) + 1, 2):
            if (two_Ls[0] - two_l) % 2 or (two_Ls[1] - two_l) % 2:
                continue
            conv = conv + (funnel_block(two_Ls[0], two_l, N)
                           * funnel_block(two_Ls[1], two_l, N)
                           * tight_annulus(two_l, N))
        report.append(("annular convolution %s" % (two_Ls,), closed == conv))

    # doubly pointed maps: ln(R/t) generating function consistency
    R = solve_R(N, GENERAL)
    report.append(("T_{0,0,0} == d ln(R/t) / dt",
                   tabc_series(0, 0, 0, N) ==
                   dlogR_dt(R) - TruncSeries.t_power(N, GENERAL, -1)))
    return report
