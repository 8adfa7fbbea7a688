"""
Mode Lie algebras attached to conformal algebras, and the two-variable
delta-function identities for affine sl(n) and Virasoro.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from ..foundation import BiSeries, MalformedInput, Vector, ZSeries, binom, delta_series
from ..report import VerificationReport
from .algebra import components, sl_n_data

KAPPA = ("κ",)


class ModeVector(Vector):
    """Combination of (basis, mode) pairs, plus the central symbol KAPPA."""

    __slots__ = ()

    def kappa(self):
        return self[KAPPA]

    def to_json(self):
        out = []
        for key, c in sorted(self.items(), key=lambda t: str(t[0])):
            name = "κ" if key == KAPPA else f"{key[0]}⊗t^{key[1]}"
            out.append({"term": name, "coefficient": str(c)})
        return out

    def __repr__(self):
        if not self:
            return "0"
        return " + ".join(
            f"{c}*{'κ' if k == KAPPA else f'{k[0]}(t^{k[1]})'}"
            for k, c in sorted(self.items(), key=lambda t: str(t[0])))


class WindowError(MalformedInput):
    pass


def mode_of(basis, mode):
    return ModeVector({(basis, mode): 1})


@dataclass
class ModeBracketTable:
    """[u (x) t^m, v (x) t^n] on the window |m|, |n|, |m+n| <= W.

    Modes are labelled by weight when the algebra carries weights: the
    label j of u corresponds to u (x) t^(j + wt(u) - 1), so that e.g. the
    Witt brackets read (j - l) e_(j+l).
    """

    window: int
    basis: tuple
    brackets: dict = field(default_factory=dict)
    shifts: dict = field(default_factory=dict)
    _alg: object = None

    def bracket(self, u, m, v, n) -> ModeVector:
        key = (u, m, v, n)
        if key in self.brackets:
            return self.brackets[key]
        if max(abs(m), abs(n)) > self.window:
            raise WindowError(f"mode outside window {self.window}: {key}; widen the window")
        value = _raw_mode_bracket(self._alg, u, m + self.shifts[u], v, n + self.shifts[v], self.shifts)
        self.brackets[key] = value
        return value

    def bracket_vectors(self, x: ModeVector, y: ModeVector) -> ModeVector:
        acc = {}
        for (u, m), cx in x.items():
            for (v, n), cy in y.items():
                self.bracket(u, m, v, n).add_to(acc, cx * cy)
        return ModeVector(acc)

    def verify(self, jacobi_window=None) -> VerificationReport:
        W = self.window
        rep = VerificationReport("affinize", {"window": W})
        modes = range(-W, W + 1)
        for u, v in cartesian(self.basis, repeat=2):
            for m, n in cartesian(modes, repeat=2):
                if abs(m + n) > W:
                    continue
                ab = self.bracket(u, m, v, n)
                ba = self.bracket(v, n, u, m)
                rep.check(("antisymmetry", u, m, v, n), ab == -ba, {"u": u, "m": m, "v": v, "n": n}, -ba, ab)
        J = W if jacobi_window is None else jacobi_window
        jmodes = range(-J, J + 1)
        for a, b, c in cartesian(self.basis, repeat=3):
            for m, n, p in cartesian(jmodes, repeat=3):
                if max(abs(m + n), abs(n + p), abs(m + p), abs(m + n + p)) > W:
                    continue
                x, y, z = mode_of(a, m), mode_of(b, n), mode_of(c, p)
                try:
                    total = (self.bracket_vectors(x, self.bracket_vectors(y, z))
                             + self.bracket_vectors(y, self.bracket_vectors(z, x))
                             + self.bracket_vectors(z, self.bracket_vectors(x, y)))
                except WindowError:
                    continue
                rep.check(("jacobi", a, m, b, n, c, p), not total,
                          {"a": a, "m": m, "b": b, "n": n, "c": c, "p": p}, 0, total)
        return rep.finish()

    def to_json(self):
        rows = []
        for (u, m, v, n), val in sorted(self.brackets.items(), key=lambda t: str(t[0])):
            rows.append({"u": u, "m": m, "v": v, "n": n, "value": val.to_json()})
        return rows


def _raw_mode_bracket(alg, u, m, v, n, shifts) -> ModeVector:
    """[u t^m, v t^n] = sum_j C(m,j) (u_j v)|_(t^(m+n-j)),  with (d w) t^k = -k w t^(k-1)."""
    from .algebra import ConformalElement
    comps = components(alg.product(ConformalElement.gen(u), ConformalElement.gen(v)))
    acc = {}
    for j, x in comps.items():
        cj = binom(m, j)
        if not cj:
            continue
        k = m + n - j
        for (i, w), c in x.items():
            # d^i w (x) t^k = (-1)^i k(k-1)...(k-i+1) w (x) t^(k-i)
            f = 1
            for r in range(i):
                f *= -(k - r)
            if not f:
                continue
            label = k - i - shifts[w]
            key = (w, label)
            val = acc.get(key, 0) + cj * c * f
            if val:
                acc[key] = val
            else:
                acc.pop(key, None)
    return ModeVector(acc)


def affinize(alg, window: int, by_weight=True) -> ModeBracketTable:
    """Centerless mode algebra of a free conformal algebra on the given window."""
    if window < 0:
        raise MalformedInput("window must be >= 0")
    shifts = {}
    for b in alg.basis:
        w = alg.weights[b] if (by_weight and alg.weights) else 1
        shifts[b] = w - 1
    table = ModeBracketTable(window, tuple(alg.basis), shifts=shifts, _alg=alg)
    modes = range(-window, window + 1)
    for u, v in cartesian(alg.basis, repeat=2):
        for m, n in cartesian(modes, repeat=2):
            if abs(m + n) <= window:
                table.bracket(u, m, v, n)
    return table


# --------------------------------------------------------------------------
# delta-function identities

@dataclass(frozen=True)
class AffineSl:
    n: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise MalformedInput("AffineSl(n) requires n >= 2")


@dataclass(frozen=True)
class Virasoro:
    pass


def _field(name, lo, hi, offset=1):
    """u(z) = sum_j (u (x) t^j) z^(-j-offset), materialized for lo <= j <= hi."""
    return ZSeries({-j - offset: mode_of(name, j) for j in range(lo, hi + 1)}, "z2", ModeVector())


def affine_mode_bracket(n, u, l, v, j) -> ModeVector:
    """[u t^l, v t^j] = [u,v] t^(l+j) + l <u,v> delta_(l+j,0) kappa."""
    names, sc, form, _ = sl_n_data(n)
    acc = {(w, l + j): c for w, c in sc.get((u, v), {}).items()}
    if l + j == 0 and form.get((u, v)):
        acc[KAPPA] = l * form[(u, v)]
    return ModeVector(acc)


def virasoro_mode_bracket(j, l) -> ModeVector:
    """[L(j), L(l)] = (j-l) L(j+l) + (j^3-j)/12 delta_(j+l,0) kappa."""
    acc = {("L", j + l): j - l}
    if j + l == 0:
        acc[KAPPA] = Fraction(j ** 3 - j, 12)
    return ModeVector(acc)


def affine_delta_rhs(n, u, v, window, kappa_sign=-1) -> BiSeries:
    """z2^-1 delta(z1/z2) [u,v](z2)  +  kappa_sign * z2^-1 d_z1 delta(z1/z2) <u,v> kappa."""
    names, sc, form, _ = sl_n_data(n)
    span = 3 * window + 4
    delta = delta_series(span)
    shifted = BiSeries({(e1, e2 - 1): c for (e1, e2), c in delta.coeffs.items()})
    comm = sc.get((u, v), {})
    acc = BiSeries({}, ModeVector())
    for w, c in comm.items():
        acc = acc + shifted.times_z2_series(_field(w, -span, span)) * c
    pairing = form.get((u, v), 0)
    if pairing:
        acc = acc + shifted.d1().times_scalar_constant(ModeVector({KAPPA: kappa_sign * pairing}))
    return acc


def virasoro_delta_rhs(window, kappa_sign=-1) -> BiSeries:
    """z2^-1 delta dL(z2) - 2 z2^-1 d_z1 delta L(z2) + kappa_sign/12 z2^-1 d_z1^3 delta kappa."""
    span = 3 * window + 6
    delta = delta_series(span)
    shifted = BiSeries({(e1, e2 - 1): c for (e1, e2), c in delta.coeffs.items()})
    L = _field("L", -span, span, offset=2)
    dL = ZSeries({e - 1: c * e for e, c in L.coeffs.items()}, "z2", ModeVector())
    acc = shifted.times_z2_series(dL)
    acc = acc + shifted.d1().times_z2_series(L) * -2
    acc = acc + shifted.d1().d1().d1().times_scalar_constant(ModeVector({KAPPA: Fraction(kappa_sign, 12)}))
    return acc


def delta_coefficient(case, window, l, j, u=None, v=None, kappa_sign=-1) -> ModeVector:
    """Coefficient of the mode pair (l, j) extracted from the delta-function side."""
    if isinstance(case, AffineSl):
        rhs = affine_delta_rhs(case.n, u, v, window, kappa_sign)
        return rhs[(-l - 1, -j - 1)]
    rhs = virasoro_delta_rhs(window, kappa_sign)
    return rhs[(-l - 2, -j - 2)]


def check_delta_identity(case, window=4, pairs=None):
    """Match the delta-function form against the mode brackets coefficient-wise.

    kappa is kept as a formal symbol.  Both signs of the central term are
    evaluated; the report records which one reconciles the two sides.
    """
    rep = VerificationReport("delta", {"case": type(case).__name__ + (f"({case.n})" if isinstance(case, AffineSl) else ""),
                                       "window": window})
    modes = range(-window, window + 1)
    reconciled = {}
    if isinstance(case, AffineSl):
        names, _, _, _ = sl_n_data(case.n)
        if pairs is None:
            pairs = list(cartesian(names, repeat=2))
        for sign in (-1, 1):
            ok = True
            for u, v in pairs:
                rhs = affine_delta_rhs(case.n, u, v, window, sign)
                for l, j in cartesian(modes, repeat=2):
                    got = rhs[(-l - 1, -j - 1)]
                    want = affine_mode_bracket(case.n, u, l, j=j, v=v)
                    if sign == -1:
                        rep.check(("delta", u, l, v, j), got == want,
                                  {"u": u, "l": l, "v": v, "j": j}, want, got)
                    ok = ok and got == want
            reconciled[sign] = ok
    elif isinstance(case, Virasoro):
        for sign in (-1, 1):
            ok = True
            rhs = virasoro_delta_rhs(window, sign)
            for j, l in cartesian(modes, repeat=2):
                got = rhs[(-j - 2, -l - 2)]
                want = virasoro_mode_bracket(j, l)
                if sign == -1:
                    rep.check(("delta", j, l), got == want, {"j": j, "l": l}, want, got)
                ok = ok and got == want
            reconciled[sign] = ok
    else:
        raise MalformedInput(f"unknown delta-identity case {case!r}")
    rep.details["reconciling_kappa_sign"] = [s for s, ok in sorted(reconciled.items()) if ok]
    return rep.finish()


def check_loop_recovery(alg, window: int, reference) -> VerificationReport:
    """Compare affinize(alg) with a reference bracket on |j|, |l| <= window.

    ``reference(u, j, v, l)`` returns the expected ModeVector.
    """
    rep = VerificationReport("affinize", {"algebra": getattr(alg, "label", "?"), "window": window})
    table = affinize(alg, window)
    modes = range(-window, window + 1)
    for u, v in cartesian(alg.basis, repeat=2):
        for j, l in cartesian(modes, repeat=2):
            got = table.bracket(u, j, v, l)
            want = reference(u, j, v, l)
            rep.check(("bracket", u, j, v, l), got == want, {"u": u, "j": j, "v": v, "l": l}, want, got)
    rep.absorb(table.verify(jacobi_window=min(window, 3)), "lie")
    rep.details["brackets_compared"] = len(alg.basis) ** 2 * len(modes) ** 2
    return rep.finish()


def witt_reference(u, j, v, l) -> ModeVector:
    """[e_j, e_l] = (j - l) e_(j+l)."""
    return ModeVector({("e", j + l): j - l})


def loop_reference(structure_constants):
    """[u t^j, v t^l] = [u, v] t^(j+l)."""
    def ref(u, j, v, l):
        return ModeVector({(w, j + l): c for w, c in structure_constants.get((u, v), {}).items()})
    return ref
