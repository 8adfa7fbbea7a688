"""
Free fermions on H = H+ (+) H-, their Fock module, and the quadratic
fields whose components give a conformal algebra R^_2 spanned by
two-particle states and the vacuum.

Modes are half-integers stored as the integer e of e + 1/2, so e <= -1 is
a creation mode and e >= 0 annihilates.  A factor is (e, s, i) with s = 0
for the plus basis vector and s = 1 for the minus one; a creation string
is kept sorted by that tuple, which puts larger |mode| first, plus before
minus, then lower index.
"""

import random
from bisect import bisect_left
from collections import namedtuple
from fractions import Fraction
from itertools import product as cartesian

from .foundation import MalformedInput, Vector, ZSeries, binom, rational, rational_to_str
from .report import VerificationReport

PLUS, MINUS = 0, 1


class KernelDisagreement(AssertionError):
    """Two independent evaluation paths returned different results."""


class StraighteningError(AssertionError):
    """A state that should lie in R^_2 does not."""


class FermionSpace:
    def __init__(self, rank: int):
        if rank < 1:
            raise MalformedInput("rank must be >= 1")
        self.rank = rank

    def basis(self):
        return [(s, i) for s in (PLUS, MINUS) for i in range(1, self.rank + 1)]

    def check(self, h):
        s, i = h
        if s not in (PLUS, MINUS) or not 1 <= i <= self.rank:
            raise MalformedInput(f"basis vector {h} outside rank {self.rank}")
        return h


def pairing(h, g) -> int:
    """<s+_i, s-_j> = delta_ij, symmetric; H+ and H- are isotropic."""
    return 1 if h[0] != g[0] and h[1] == g[1] else 0


def mode_str(e: int) -> str:
    return f"{2 * e + 1}/2"


class FockElement(Vector):
    """Combination of canonical creation strings applied to the vacuum."""

    __slots__ = ()

    @classmethod
    def vacuum(cls):
        return cls({(): 1})

    def to_json(self):
        out = []
        for key, c in sorted(self.items()):
            out.append({"coefficient": rational_to_str(c),
                        "factors": [{"sign_basis": "+" if s == PLUS else "-", "index": i,
                                     "mode_numerator": 2 * e + 1, "mode": mode_str(e)}
                                    for (e, s, i) in key]})
        return out

    @classmethod
    def from_json(cls, doc):
        acc = {}
        for term in doc:
            x = cls.vacuum()
            for f in reversed(term["factors"]):
                h = (PLUS if f["sign_basis"] == "+" else MINUS, int(f["index"]))
                x = apply_mode(h, (int(f["mode_numerator"]) - 1) // 2, x)
            x.add_to(acc, rational(term["coefficient"]))
        return cls(acc)

    def __repr__(self):
        if not self:
            return "0"
        parts = []
        for key, c in sorted(self.items()):
            word = "".join(f"{'ς+' if s == PLUS else 'ς-'}{i}({mode_str(e)})" for (e, s, i) in key) or "1"
            parts.append(word if c == 1 else f"{rational_to_str(c)}*{word}")
        return " + ".join(parts)


def apply_mode(h, e: int, x: FockElement) -> FockElement:
    """h(e + 1/2) acting on x."""
    acc = {}
    s, i = h
    if e <= -1:
        f = (e, s, i)
        for key, c in x.items():
            pos = bisect_left(key, f)
            if pos < len(key) and key[pos] == f:
                continue  # exclusion
            new = key[:pos] + (f,) + key[pos:]
            v = acc.get(new, 0) + (c if pos % 2 == 0 else -c)
            if v:
                acc[new] = v
            else:
                acc.pop(new, None)
        return FockElement(acc)
    target = -e - 1
    for key, c in x.items():
        for p, (e2, s2, i2) in enumerate(key):
            if e2 == target and pairing(h, (s2, i2)):
                new = key[:p] + key[p + 1:]
                v = acc.get(new, 0) + (c if p % 2 == 0 else -c)
                if v:
                    acc[new] = v
                else:
                    acc.pop(new, None)
    return FockElement(acc)


def apply_word(word, x: FockElement) -> FockElement:
    """Apply [(h, e), ...] right to left, as an operator product."""
    for h, e in reversed(word):
        x = apply_mode(h, e, x)
        if not x:
            break
    return x


def _max_annihilator(x: FockElement) -> int:
    """Largest e for which h(e + 1/2) can act nontrivially on x (-1 if none)."""
    best = -1
    for key in x:
        for (e, _, _) in key:
            best = max(best, -e - 1)
    return best


# --------------------------------------------------------------------------
# R^_2 generators

QuadGen = namedtuple("QuadGen", "j1 j2 m n")
QuadGen.__doc__ = "s+_j1(-m-1/2) s-_j2(-n-1/2) . 1"
UNIT = ()


def _gen_weight(g):
    return 0 if g == UNIT else g.m + g.n + 1


def quad_state(g) -> FockElement:
    if g == UNIT:
        return FockElement.vacuum()
    return apply_word([((PLUS, g.j1), -g.m - 1), ((MINUS, g.j2), -g.n - 1)], FockElement.vacuum())


def _gen_str(g):
    if g == UNIT:
        return "1"
    return f"ς+{g.j1}({mode_str(-g.m - 1)})ς-{g.j2}({mode_str(-g.n - 1)})"


class HatElement(Vector):
    """Element of R^_2 in the spanning set {QuadGen states, 1}."""

    __slots__ = ()

    @classmethod
    def gen(cls, g):
        return cls({g if g == UNIT else QuadGen(*g): 1})

    def state(self) -> FockElement:
        acc = {}
        for g, c in self.items():
            quad_state(g).add_to(acc, c)
        return FockElement(acc)

    def unit_part(self):
        return self[UNIT]

    def without_unit(self):
        return self._spawn({g: c for g, c in self.items() if g != UNIT})

    def weight(self):
        ws = {_gen_weight(g) for g in self}
        return ws.pop() if len(ws) == 1 else None

    def to_json(self):
        return [{"term": _gen_str(g), "coefficient": rational_to_str(c)} for g, c in sorted(self.items())]

    def __repr__(self):
        if not self:
            return "0"
        return " + ".join(_gen_str(g) if c == 1 else f"{rational_to_str(c)}*{_gen_str(g)}"
                          for g, c in sorted(self.items()))


def straighten(x: FockElement) -> HatElement:
    """Read a Fock element back in the R^_2 spanning set."""
    acc = {}
    for key, c in x.items():
        if key == ():
            acc[UNIT] = acc.get(UNIT, 0) + c
            continue
        if len(key) != 2 or {key[0][1], key[1][1]} != {PLUS, MINUS}:
            raise StraighteningError(f"state {FockElement({key: c})} is not in R^_2")
        (ea, sa, ia), (eb, sb, ib) = key
        sign = 1 if sa == PLUS else -1
        plus, minus = ((ea, ia), (eb, ib)) if sa == PLUS else ((eb, ib), (ea, ia))
        g = QuadGen(plus[1], minus[1], -plus[0] - 1, -minus[0] - 1)
        acc[g] = acc.get(g, 0) + sign * c
    return HatElement(acc)


# --------------------------------------------------------------------------
# components of quadratic fields

def _component_series(g, c, x: FockElement) -> FockElement:
    """Coefficient of z^(-c-1) in the normal-ordered product of derived fields.

    (1/m!) d^m h(z) = sum_e C(-e-1, m) h(e+1/2) z^(-e-1-m); the creation part
    of h1 stays to the left of h2 and its annihilation part moves right with
    a sign.
    """
    if g == UNIT:
        return x if c == -1 else x.zero()
    h1, h2 = (PLUS, g.j1), (MINUS, g.j2)
    total = c - g.m - g.n - 1  # e1 + e2
    top = _max_annihilator(x)
    acc = {}
    # h1^- (creation, e1 <= -1) times the whole h2 field
    for e2 in range(total + 1, top + 1):
        e1 = total - e2
        coef = binom(-e1 - 1, g.m) * binom(-e2 - 1, g.n)
        if coef:
            apply_word([(h1, e1), (h2, e2)], x).add_to(acc, coef)
    # - h2 field times h1^+ (annihilation, e1 >= 0)
    for e1 in range(0, top + 1):
        e2 = total - e1
        coef = binom(-e1 - 1, g.m) * binom(-e2 - 1, g.n)
        if coef:
            apply_word([(h2, e2), (h1, e1)], x).add_to(acc, -coef)
    return FockElement(acc)


def _component_closed(g, c, x: FockElement, as_printed=False) -> FockElement:
    """Closed-form double sum over the annihilation index j.

    With ``as_printed`` the first sum runs over every j >= 0 and no
    creation-creation terms are added; that reading counts the
    annihilation-annihilation terms twice once c > m + n.
    """
    if g == UNIT:
        return x if c == -1 else x.zero()
    m, n = g.m, g.n
    h1, h2 = (PLUS, g.j1), (MINUS, g.j2)
    top = _max_annihilator(x)
    acc = {}
    start = 0 if as_printed else max(0, c - m - n)
    for j in range(start, top + 1):
        coef = binom(-j - 1, n) * binom(j + m + n - c, m)
        if coef:
            apply_word([(h1, c - m - n - j - 1), (h2, j)], x).add_to(acc, coef)
    for j in range(0, top + 1):
        coef = binom(-j - 1, m) * binom(j + m + n - c, n)
        if coef:
            apply_word([(h2, c - m - n - j - 1), (h1, j)], x).add_to(acc, -coef)
    if not as_printed:
        s = m + n + 1 - c  # p + q for h1(-p + 1/2) h2(-q + 1/2)
        for p in range(1, s):
            coef = binom(p - 1, m) * binom(s - p - 1, n)
            if coef:
                apply_word([(h1, -p), (h2, -(s - p))], x).add_to(acc, coef)
    return FockElement(acc)


def component_as_printed(g, c, x: FockElement) -> FockElement:
    return _component_closed(g, c, x, as_printed=True)


def quadratic_component(g, c: int):
    """The operator u_c for the generator g; both evaluation paths must agree."""

    def op(x: FockElement) -> FockElement:
        closed = _component_closed(g, c, x)
        series = _component_series(g, c, x)
        if closed != series:
            raise KernelDisagreement(f"component {c} of {_gen_str(g)} on {x}: {closed} vs {series}")
        return closed

    return op


def apply_component(u: HatElement, c: int, x: FockElement) -> FockElement:
    acc = {}
    for g, coef in u.items():
        quadratic_component(g, c)(x).add_to(acc, coef)
    return FockElement(acc)


# --------------------------------------------------------------------------
# the conformal algebra R^_2

def partial_hat(e: HatElement) -> HatElement:
    acc = {}
    for g, c in e.items():
        if g == UNIT:
            continue
        for key, f in ((QuadGen(g.j1, g.j2, g.m + 1, g.n), g.m + 1), (QuadGen(g.j1, g.j2, g.m, g.n + 1), g.n + 1)):
            v = acc.get(key, 0) + c * f
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return HatElement(acc)


_YPLUS_CACHE = {}


def yplus_hat(u, v) -> ZSeries:
    """Y+(u, z) v for generators u, v (QuadGen or UNIT)."""
    key = (u, v)
    if key in _YPLUS_CACHE:
        return _YPLUS_CACHE[key]
    zero = HatElement()
    if u == UNIT:
        out = ZSeries({}, "z", zero)
    else:
        s = quad_state(v)
        bound = _gen_weight(u) + _gen_weight(v) - 1
        comps = {}
        for c in range(0, bound + 1):
            x = straighten(quadratic_component(u, c)(s))
            if x:
                comps[-c - 1] = x
        for c in (bound + 1, bound + 2):
            if quadratic_component(u, c)(s):
                raise StraighteningError(f"component {c} of {_gen_str(u)} on {_gen_str(v)} is nonzero")
        out = ZSeries(comps, "z", zero)
    _YPLUS_CACHE[key] = out
    return out


def hat_product(a: HatElement, b: HatElement) -> ZSeries:
    total = ZSeries({}, "z", HatElement())
    for u, cu in a.items():
        for v, cv in b.items():
            total = total + yplus_hat(u, v) * (cu * cv)
    return total


class FockConformalAlgebra:
    """R^_2 at a given rank, generated by QuadGen(j1, j2, 0, n) for n <= max_mode.

    Over F[d] the states with m = 0 already generate; the unit is included
    when ``with_unit`` is set.
    """

    def __init__(self, rank=2, max_mode=2, with_unit=True, label=None):
        self.space = FermionSpace(rank)
        self.rank = rank
        self.max_mode = max_mode
        self.with_unit = with_unit
        self.label = label or f"R^_2(rank {rank})"

    def generators(self):
        r = range(1, self.rank + 1)
        gens = [HatElement.gen(QuadGen(i, j, 0, n)) for n in range(self.max_mode + 1) for i in r for j in r]
        if self.with_unit:
            gens.append(HatElement.gen(UNIT))
        return gens

    def zero(self):
        return HatElement()

    def partial(self, x):
        return partial_hat(x)

    def product(self, a, b):
        return hat_product(a, b)

    def weight(self, x):
        return x.weight() if x else None


# --------------------------------------------------------------------------
# verification

def _states(rank, max_mode):
    """Vacuum, all two-particle states and a few four-particle states."""
    modes = range(-max_mode - 1, 0)
    out = [FockElement.vacuum()]
    for i, j in cartesian(range(1, rank + 1), repeat=2):
        for a, b in cartesian(modes, repeat=2):
            out.append(apply_word([((PLUS, i), a), ((MINUS, j), b)], FockElement.vacuum()))
    rng = random.Random(rank * 1000 + max_mode)
    basis = [(s, i) for s in (PLUS, MINUS) for i in range(1, rank + 1)]
    for _ in range(6):
        word = [(rng.choice(basis), rng.choice(list(modes))) for _ in range(4)]
        x = apply_word(word, FockElement.vacuum())
        if x:
            out.append(x)
    out.append(apply_word([((PLUS, 1), -1), ((MINUS, 1), -2), ((PLUS, 1), -3)], FockElement.vacuum()))
    return out


def check_action_identities(rank=2, max_mode=2) -> VerificationReport:
    """Two-mode actions on two-particle states, and the anticommutation relation.

    Mode values range over 1/2 .. max_mode + 1/2.
    """
    rep = VerificationReport("fock.identities", {"rank": rank, "max_mode": max_mode})
    pos = [(PLUS, i) for i in range(1, rank + 1)]
    neg = [(MINUS, i) for i in range(1, rank + 1)]
    vals = range(0, max_mode + 1)  # encoded e >= 0, value e + 1/2
    vac = FockElement.vacuum()

    def state(h3, j, h4, k):
        return apply_word([(h3, -j - 1), (h4, -k - 1)], vac)

    for h1, h2, h3, h4 in cartesian(pos, neg, pos, neg):
        for m, n, j, k in cartesian(vals, repeat=4):
            s = state(h3, j, h4, k)
            got = apply_word([(h1, m), (h2, n)], s)
            want = vac * ((m == k) * (n == j) * pairing(h1, h4) * pairing(h2, h3))
            rep.check(("annihilate-both", h1, m, h2, n, h3, j, h4, k), got == want,
                      {"h": [h1, h2, h3, h4], "modes": [m, n, j, k]}, want, got)
            got = apply_word([(h1, -m - 1), (h2, n)], s)
            want = apply_word([(h1, -m - 1), (h4, -k - 1)], vac) * ((n == j) * pairing(h2, h3))
            rep.check(("create-plus", h1, m, h2, n, h3, j, h4, k), got == want,
                      {"h": [h1, h2, h3, h4], "modes": [m, n, j, k]}, want, got)
            got = apply_word([(h2, -m - 1), (h1, n)], s)
            want = apply_word([(h3, -j - 1), (h2, -m - 1)], vac) * ((n == k) * pairing(h1, h4))
            rep.check(("create-minus", h1, m, h2, n, h3, j, h4, k), got == want,
                      {"h": [h1, h2, h3, h4], "modes": [m, n, j, k]}, want, got)
    for a, b, c, d in cartesian(range(1, rank + 1), repeat=4):
        for m in vals:
            s = state((PLUS, c), m, (MINUS, d), m)
            got = apply_word([((PLUS, a), -m - 1), ((MINUS, b), m)], s)
            want = state((PLUS, a), m, (MINUS, d), m) * (b == c)
            rep.check(("matrix-unit", a, b, c, d, m), got == want, {"indices": [a, b, c, d], "m": m}, want, got)
    # h(p) h'(q) + h'(q) h(p) = <h, h'> delta_(p+q, 0)
    allmodes = range(-max_mode - 1, max_mode + 1)
    for x in _states(rank, max_mode):
        for h, g in cartesian(pos + neg, repeat=2):
            for p, q in cartesian(allmodes, repeat=2):
                lhs = apply_word([(h, p), (g, q)], x) + apply_word([(g, q), (h, p)], x)
                want = x * (pairing(h, g) * (p + q + 1 == 0))
                rep.check(("anticommutator", h, p, g, q), lhs == want, {"h": h, "p": p, "g": g, "q": q, "state": x},
                          want, lhs)
    return rep.finish()


def check_component_paths(rank=2, max_mn=2, max_c=4) -> VerificationReport:
    """Closed form vs field-series extraction, and d-covariance (du)_c = -c u_(c-1)."""
    rep = VerificationReport("fock.components", {"rank": rank, "max_mn": max_mn, "max_c": max_c})
    states = _states(rank, max_mn + 1)
    r = range(1, rank + 1)
    printed_mismatch = 0
    for j1, j2, m, n in cartesian(r, r, range(max_mn + 1), range(max_mn + 1)):
        g = QuadGen(j1, j2, m, n)
        dg = partial_hat(HatElement.gen(g))
        for c in range(-max_c, max_c + 1):
            for x in states:
                closed = _component_closed(g, c, x)
                series = _component_series(g, c, x)
                rep.check(("closed=series", g, c), closed == series, {"gen": list(g), "c": c, "state": x},
                          series, closed)
                if component_as_printed(g, c, x) != series:
                    printed_mismatch += 1
                lhs = apply_component(dg, c, x)
                rhs = _component_series(g, c - 1, x) * (-c)
                rep.check(("translation", g, c), lhs == rhs, {"gen": list(g), "c": c, "state": x}, rhs, lhs)
    rep.details["printed_form_mismatches"] = printed_mismatch
    return rep.finish()


def check_unit_ideal(rank=2, max_mode=2) -> VerificationReport:
    """d1 = 0 and Y+(u, z)1 = 0 for every tested generator u."""
    rep = VerificationReport("fock.unit", {"rank": rank, "max_mode": max_mode})
    one = HatElement.gen(UNIT)
    rep.check("partial-unit", not partial_hat(one), {}, 0, partial_hat(one))
    r = range(1, rank + 1)
    for j1, j2, m, n in cartesian(r, r, range(max_mode + 1), range(max_mode + 1)):
        g = QuadGen(j1, j2, m, n)
        y = yplus_hat(g, UNIT)
        rep.check(("annihilates-unit", g), not y, {"gen": list(g)}, 0, y)
        y = yplus_hat(UNIT, g)
        rep.check(("unit-field", g), not y, {"gen": list(g)}, 0, y)
    return rep.finish()


def oracle_compare(j1, j2, j3, j4, m1, m2, n1, n2, r=2, report=None) -> VerificationReport:
    """Fermionic Y+ against the matrix formula via E_ij(m, n) <-> s+_i(-m-1/2) s-_j(-n-1/2)."""
    from .matrix_family.elements import MatElement, yplus_matrix

    params = {"j": [j1, j2, j3, j4], "m": [m1, m2], "n": [n1, n2], "rank": r}
    rep = report if report is not None else VerificationReport("oracle", params)
    for idx in (j1, j2, j3, j4):
        if not 1 <= idx <= r:
            raise MalformedInput(f"index {idx} outside rank {r}")
    ferm = yplus_hat(QuadGen(j1, j2, m1, m2), QuadGen(j3, j4, n1, n2))
    mat = yplus_matrix(MatElement.unit(r, j1, j2, m1, m2), MatElement.unit(r, j3, j4, n1, n2))
    scalars = rep.details.setdefault("scalars", [])
    units = rep.details.setdefault("unit_terms", [])
    for e in sorted(set(ferm.coeffs) | set(mat.coeffs)):
        f = ferm[e]
        if f.unit_part():
            units.append({"case": params, "exponent": e, "coefficient": rational_to_str(f.unit_part())})
        fm = MatElement(r, {(g.m, g.n, g.j1, g.j2): c for g, c in f.without_unit().items()})
        mm = mat[e]
        for bd in sorted(fm.bidegrees() | mm.bidegrees()):
            a, b = fm.matrix_at(*bd), mm.matrix_at(*bd)
            case = {**params, "exponent": e, "bidegree": list(bd)}
            same_shape = set(a) == set(b) and a and b
            lam = None
            if same_shape:
                k0 = next(iter(b))
                lam = Fraction(a[k0]) / b[k0]
                same_shape = all(a[q] == lam * b[q] for q in b)
            if not rep.check(("oracle.structure", tuple(params["j"]), m1, m2, n1, n2, e, bd), same_shape, case,
                             {str(q): v for q, v in b.items()}, {str(q): v for q, v in a.items()}):
                continue
            scalars.append({"case": case, "scalar": rational_to_str(lam)})
            rep.check(("oracle.scalar", tuple(params["j"]), m1, m2, n1, n2, e, bd), lam == 1, case, 1, lam)
    return rep.finish()


def oracle_suite(r=2, max_mode=2) -> VerificationReport:
    rep = VerificationReport("oracle", {"rank": r, "max_mode": max_mode})
    idx = range(1, r + 1)
    modes = range(max_mode + 1)
    for j1, j2, j3, j4 in cartesian(idx, repeat=4):
        for m1, m2, n1, n2 in cartesian(modes, repeat=4):
            oracle_compare(j1, j2, j3, j4, m1, m2, n1, n2, r, report=rep)
    scalars = {s["scalar"] for s in rep.details.get("scalars", [])}
    rep.details["distinct_scalars"] = sorted(scalars)
    rep.details["bidegrees_compared"] = len(rep.details.get("scalars", []))
    return rep.finish()
