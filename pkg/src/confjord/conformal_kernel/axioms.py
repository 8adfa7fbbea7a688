"""
Executable versions of the conformal-algebra axioms.

Every checker takes an algebra object (see :mod:`.algebra` for the expected
surface) and returns a :class:`~confjord.report.VerificationReport`.
Skew-symmetry and the Jacobi-type axiom are each evaluated by two
independent routes, a literal residue computation and the component
identity, and the two routes must agree with each other as well as with
Y+(a, z) b itself.
"""

import random
from fractions import Fraction
from itertools import product as cartesian
from math import factorial

from ..foundation import BiSeries, ZSeries, binom, derivative, negative_part
from ..report import VerificationReport
from .algebra import components


def _zero_like(alg):
    return alg.zero()


def _partial_power(alg, x, i):
    for _ in range(i):
        x = alg.partial(x)
    return x


def _locality(series: ZSeries) -> int:
    """Smallest N with u_n(v) = 0 for all n >= N."""
    return max((-e for e in series.coeffs), default=0)


# --------------------------------------------------------------------------
# translation covariance

def check_translation(alg, sample_depth=2, pairs=None, report=None):
    """Y+(da,z)b == d/dz Y+(a,z)b  and  d Y+(a,z)b - Y+(a,z) db == Y+(da,z)b."""
    rep = report or VerificationReport("translation", {"algebra": getattr(alg, "label", "?"),
                                                       "sample_depth": sample_depth})
    gens = alg.generators()
    if pairs is None:
        pairs = [(u, v) for u in gens for v in gens]
    for u, v in pairs:
        for i in range(sample_depth + 1):
            a = _partial_power(alg, u, i)
            da = alg.partial(a)
            for j in range(sample_depth + 1):
                b = _partial_power(alg, v, j)
                y_ab = alg.product(a, b)
                y_dab = alg.product(da, b)
                lhs = derivative(y_ab)
                rep.check(("d/dz", i, j), y_dab == lhs,
                          {"a": a, "b": b}, lhs, y_dab)
                comm = y_ab.map(alg.partial) - alg.product(a, alg.partial(b))
                rep.check(("[d,Y]", i, j), comm == y_dab,
                          {"a": a, "b": b}, y_dab, comm)
    return rep if report is not None else rep.finish()


# --------------------------------------------------------------------------
# skew-symmetry

def skew_rhs_residue(alg, a, b) -> ZSeries:
    """Res_x 1/(z-x) e^{x d} Y+(b,-x) a, evaluated literally.

    The exponential is truncated at the locality bound of Y+(b,z)a; terms
    beyond it only carry nonnegative powers of x and are discarded anyway.
    """
    yba = alg.product(b, a)
    in_x = yba.substitute_neg("x")
    bound = _locality(yba)
    zero = _zero_like(alg)
    acc = {}
    for e, coeff in in_x.coeffs.items():
        x = coeff
        for i in range(bound + 1):
            if i:
                x = alg.partial(x)
            if not x:
                break
            term = x * Fraction(1, factorial(i))
            key = e + i
            acc[key] = acc[key] + term if key in acc else term
    full = ZSeries(acc, "x", zero)
    return negative_part(full, "z")


def skew_rhs_components(alg, a, b) -> dict:
    """a_n(b) = sum_i (-1)^(n+i+1) d^i (b_(n+i)(a)) / i!."""
    comps = components(alg.product(b, a))
    out = {}
    for n in range(max(comps, default=-1) + 1):
        total = None
        for i in range(0, max(comps) - n + 1):
            x = comps.get(n + i)
            if not x:
                continue
            term = _partial_power(alg, x, i) * Fraction((-1) ** (n + i + 1), factorial(i))
            total = term if total is None else total + term
        if total:
            out[n] = total
    return out


def check_skew(alg, a, b, report=None):
    rep = report or VerificationReport("skew", {"algebra": getattr(alg, "label", "?"), "a": a, "b": b})
    direct = components(alg.product(a, b))
    via_residue = components(skew_rhs_residue(alg, a, b))
    via_components = skew_rhs_components(alg, a, b)
    zero = _zero_like(alg)
    for n in sorted(set(direct) | set(via_residue) | set(via_components)):
        d = direct.get(n, zero)
        r = via_residue.get(n, zero)
        c = via_components.get(n, zero)
        inputs = {"a": a, "b": b, "n": n}
        rep.check(("skew.residue", n), d == r, inputs, r, d)
        rep.check(("skew.component", n), d == c, inputs, c, d)
        rep.check(("skew.paths-agree", n), r == c, inputs, c, r)
    return rep if report is not None else rep.finish()


# --------------------------------------------------------------------------
# Jacobi-type axiom

def _apply_components(alg, a, comps_b: dict) -> dict:
    """{(m, n): a_m(x_n)} for a dict {n: x_n}."""
    out = {}
    for n, x in comps_b.items():
        for m, y in components(alg.product(a, x)).items():
            out[(m, n)] = y
    return out


def jacobi_lhs(alg, a, b, c) -> dict:
    """{(m, n): a_m(b_n(c)) - b_n(a_m(c))}."""
    out = {}
    for key, x in _apply_components(alg, a, components(alg.product(b, c))).items():
        out[key] = x
    ac = components(alg.product(a, c))
    for m, x in ac.items():
        for n, y in components(alg.product(b, x)).items():
            out[(m, n)] = out[(m, n)] - y if (m, n) in out else -y
    return {k: v for k, v in out.items() if v}


def jacobi_rhs_components(alg, a, b, c, keys) -> dict:
    """{(m, n): sum_{i<=m} C(m,i) (a_i(b))_(m+n-i)(c)} for the requested keys."""
    ab = components(alg.product(a, b))
    prods = {i: components(alg.product(x, c)) for i, x in ab.items()}
    out = {}
    for m, n in keys:
        total = None
        for i, comps in prods.items():
            if i > m:
                continue
            y = comps.get(m + n - i)
            if y:
                term = y * binom(m, i)
                total = term if total is None else total + term
        if total:
            out[(m, n)] = total
    return out


def jacobi_rhs_residue(alg, a, b, c, window=None) -> BiSeries:
    """Res_x 1/(z2-x) Y+(Y+(a, z1-x) b, x) c as a two-variable series.

    (z1-x)^(-i-1) is expanded in the second variable x up to x^window; all
    dropped terms carry nonnegative powers of x once window reaches the
    locality of the inner products, so the result is exact.
    """
    zero = _zero_like(alg)
    ab = components(alg.product(a, b))
    inner = {i: alg.product(x, c) for i, x in ab.items()}
    if window is None:
        window = max((_locality(s) for s in inner.values()), default=0)
    acc = {}
    for i, s in inner.items():
        for j in range(window + 1):
            coeff = binom(-i - 1, j) * (-1) ** j
            if not coeff:
                continue
            e1 = -i - 1 - j
            for p_exp, y in s.coeffs.items():
                ex = j + p_exp
                if ex >= 0:
                    continue
                key = (e1, ex)
                term = y * coeff
                acc[key] = acc[key] + term if key in acc else term
    return BiSeries(acc, zero)


def check_jacobi(alg, a, b, c, report=None):
    rep = report or VerificationReport("jacobi", {"algebra": getattr(alg, "label", "?"),
                                                  "a": a, "b": b, "c": c})
    zero = _zero_like(alg)
    lhs = jacobi_lhs(alg, a, b, c)
    lit = jacobi_rhs_residue(alg, a, b, c)
    lit_comp = {(-e1 - 1, -e2 - 1): y for (e1, e2), y in lit.coeffs.items()}
    n_ab = _locality(alg.product(a, b))
    n_ac = _locality(alg.product(a, c))
    n_bc = _locality(alg.product(b, c))
    box = {(m, n) for m in range(n_ab + n_ac) for n in range(n_bc + n_ab)}
    keys = sorted(box | set(lhs) | set(lit_comp))
    comp = jacobi_rhs_components(alg, a, b, c, keys)
    for key in keys:
        left = lhs.get(key, zero)
        r1 = comp.get(key, zero)
        r2 = lit_comp.get(key, zero)
        inputs = {"a": a, "b": b, "c": c, "m": key[0], "n": key[1]}
        rep.check(("jacobi.component",) + key, left == r1, inputs, r1, left)
        rep.check(("jacobi.residue",) + key, left == r2, inputs, r2, left)
        rep.check(("jacobi.paths-agree",) + key, r1 == r2, inputs, r1, r2)
    return rep if report is not None else rep.finish()


# --------------------------------------------------------------------------
# generator sufficiency

def _axioms_on(alg, elements, triples, rep):
    for a, b in cartesian(elements, repeat=2):
        check_skew(alg, a, b, report=rep)
    for a, b, c in triples:
        check_jacobi(alg, a, b, c, report=rep)
    return rep


def _random_element(alg, rng, pool):
    picks = rng.sample(pool, min(3, len(pool)))
    total = None
    for x in picks:
        c = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
        total = x * c if total is None else total + x * c
    return total


def check_on_generators(alg, depth=1, samples=3, seed=0, max_triples=None):
    """Run skew/Jacobi on V and separately on d-shifted samples; verdicts must agree.

    The extended level uses d^i u for generators u and 1 <= i <= depth plus
    ``samples`` random combinations of them (fixed seed).
    """
    label = getattr(alg, "label", "?")
    rep = VerificationReport("on_generators", {"algebra": label, "depth": depth,
                                               "samples": samples, "seed": seed})
    gens = alg.generators()
    gen_rep = VerificationReport("generators")
    triples = list(cartesian(gens, repeat=3))
    if max_triples is not None and len(triples) > max_triples:
        triples = random.Random(seed).sample(triples, max_triples)
    _axioms_on(alg, gens, triples, gen_rep)

    rng = random.Random(seed)
    shifted = [_partial_power(alg, u, i) for u in gens for i in range(1, depth + 1)]
    pool = gens + shifted
    extra = [_random_element(alg, rng, pool) for _ in range(samples)]
    if len(shifted) > 4:
        shifted = rng.sample(shifted, 4)
    ext_elements = shifted + extra
    ext_triples = list(cartesian(ext_elements, repeat=3))
    if max_triples is not None and len(ext_triples) > max_triples:
        ext_triples = rng.sample(ext_triples, max_triples)
    ext_rep = VerificationReport("extended")
    _axioms_on(alg, ext_elements, ext_triples, ext_rep)

    rep.absorb(gen_rep.finish(), "generators")
    rep.absorb(ext_rep.finish(), "extended")
    rep.details["generator_verdict"] = gen_rep.status
    rep.details["extended_verdict"] = ext_rep.status
    agree = gen_rep.status == ext_rep.status
    rep.details["verdicts_agree"] = agree
    if not agree:
        rep.error("generator-level and extended-level verdicts disagree (kernel bug)")
    return rep.finish()


# --------------------------------------------------------------------------
# grading

def check_weight_grading(alg, max_weight=8, elements=None):
    """u(j) = u_(j+wt(u)-1) must send weight n to weight n - j.

    Also reports the growth bound N0 = max_n dim(V cap R^(n)) over the tested
    weights.
    """
    rep = VerificationReport("grading", {"algebra": getattr(alg, "label", "?"), "max_weight": max_weight})
    if elements is None:
        elements = [g for g in alg.generators() if (alg.weight(g) or 0) <= max_weight]
    per_weight = {}
    for g in elements:
        w = alg.weight(g)
        if w is None:
            rep.fail("grading.homogeneous", {"element": g}, "homogeneous generator", "mixed weights")
            continue
        per_weight[w] = per_weight.get(w, 0) + 1
    for u in elements:
        wu = alg.weight(u)
        for v in elements:
            wv = alg.weight(v)
            if wu is None or wv is None:
                continue
            for n, x in components(alg.product(u, v)).items():
                j = n - wu + 1
                expected = wv - j
                rep.check(("grading", n), alg.weight(x) == expected,
                          {"u": u, "v": v, "n": n}, expected, alg.weight(x))
    rep.details["dims_by_weight"] = {str(w): d for w, d in sorted(per_weight.items())}
    rep.details["N0"] = max(per_weight.values(), default=0)
    return rep.finish()


def run_axiom_suite(alg, depth=2, triples=None):
    """Translation, skew and Jacobi on all generator pairs/triples."""
    rep = VerificationReport("axioms", {"algebra": getattr(alg, "label", "?"), "depth": depth})
    rep.absorb(check_translation(alg, depth), "translation")
    gens = alg.generators()
    for a, b in cartesian(gens, repeat=2):
        check_skew(alg, a, b, report=rep)
    for a, b, c in (triples if triples is not None else cartesian(gens, repeat=3)):
        check_jacobi(alg, a, b, c, report=rep)
    return rep.finish()
