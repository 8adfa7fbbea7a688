"""
The product u o v = u(0) v on the minimal-weight space of a family, and
identification of the resulting algebra with a classical matrix model.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian

from ..foundation import Basis, MalformedInput, Span
from ..report import VerificationReport
from .elements import MatElement, yplus_matrix
from .families import FamilyKind, dagger_matrix, membership, minimal_weight_basis, transpose_matrix


def circle_product(a: MatElement, b: MatElement, f: FamilyKind) -> MatElement:
    """Coefficient of z^-L in Y+(a, z) b."""
    span = f.span(f.L)
    for x, name in ((a, "a"), (b, "b")):
        if x.weight() not in (None, f.L) or x not in span:
            raise MalformedInput(f"{name} is not in the minimal-weight space of {f}")
    out = yplus_matrix(a, b)[-f.L]
    if not membership(out, f) or (out and out.weight() != f.L):
        raise AssertionError(f"circle product left the minimal-weight space of {f}")
    return out


class MinimalWeightAlgebra:
    """Structure constants of o on a fixed basis of the minimal-weight space."""

    def __init__(self, f: FamilyKind):
        self.family = f
        self.basis = minimal_weight_basis(f)
        self._coords = Basis(self.basis)
        n = len(self.basis)
        self.table = [[None] * n for _ in range(n)]
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                c = self._coords.coordinates(circle_product(a, b, f))
                if c is None:
                    raise AssertionError("minimal-weight product table is not closed")
                self.table[i][j] = c

    @property
    def dim(self):
        return len(self.basis)

    def coordinates(self, x: MatElement):
        return self._coords.coordinates(x)

    def element(self, coords) -> MatElement:
        total = MatElement(self.family.k)
        for c, el in zip(coords, self.basis):
            if c:
                total = total + el * c
        return total

    def mul(self, x, y):
        n = self.dim
        out = [0] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for t, v in enumerate(row[j]):
                    if v:
                        out[t] += c * v
        return tuple(out)

    def unit_vector(self, i):
        return tuple(1 if t == i else 0 for t in range(self.dim))

    def random_element(self, rng):
        return tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(self.dim))


def _add(*vs):
    return tuple(sum(t) for t in zip(*vs))


def _neg(v):
    return tuple(-x for x in v)


def check_jordan(f: FamilyKind, random_samples=50, seed=0, algebra=None) -> VerificationReport:
    """Commutativity and (x o y) o (x o x) = x o (y o (x o x)).

    Exhaustive on the basis via the fully linearized identity, plus random
    elements with the identity in its original form.  ``algebra`` may supply
    a prebuilt (possibly fault-injected) structure table.
    """
    if f.L % 2:
        raise MalformedInput("check_jordan needs an even label L")
    rep = VerificationReport("jordan", {"family": f, "random_samples": random_samples, "seed": seed})
    alg = algebra or MinimalWeightAlgebra(f)
    n = alg.dim
    e = [alg.unit_vector(i) for i in range(n)]
    m = alg.mul
    for i, j in cartesian(range(n), repeat=2):
        rep.check(("commutative", i, j), m(e[i], e[j]) == m(e[j], e[i]), {"i": i, "j": j},
                  m(e[j], e[i]), m(e[i], e[j]))
    # products of basis pairs, reused across quadruples
    pair = [[m(e[i], e[j]) for j in range(n)] for i in range(n)]
    for x, y, z, w in cartesian(range(n), repeat=4):
        # sum over cyclic (x,z,w):  ((x z) y) w  ==  (x z)(y w)
        lhs = _add(m(m(pair[x][z], e[y]), e[w]), m(m(pair[z][w], e[y]), e[x]), m(m(pair[w][x], e[y]), e[z]))
        rhs = _add(m(pair[x][z], pair[y][w]), m(pair[z][w], pair[y][x]), m(pair[w][x], pair[y][z]))
        rep.check(("jordan.linearized", x, y, z, w), lhs == rhs, {"basis": [x, y, z, w]}, rhs, lhs)
    rng = random.Random(seed)
    for t in range(random_samples):
        x, y = alg.random_element(rng), alg.random_element(rng)
        rep.check(("commutative.random", t), m(x, y) == m(y, x), {"x": x, "y": y}, m(y, x), m(x, y))
        xx = m(x, x)
        lhs = m(m(x, y), xx)
        rhs = m(x, m(y, xx))
        rep.check(("jordan.random", t), lhs == rhs, {"x": x, "y": y}, rhs, lhs)
    rep.details["dimension"] = n
    return rep.finish()


def check_lie(f: FamilyKind, random_samples=50, seed=0, algebra=None) -> VerificationReport:
    if f.L % 2 == 0:
        raise MalformedInput("check_lie needs an odd label L")
    rep = VerificationReport("lie", {"family": f, "random_samples": random_samples, "seed": seed})
    alg = algebra or MinimalWeightAlgebra(f)
    n = alg.dim
    e = [alg.unit_vector(i) for i in range(n)]
    m = alg.mul
    for i, j in cartesian(range(n), repeat=2):
        rep.check(("anticommutative", i, j), m(e[i], e[j]) == _neg(m(e[j], e[i])), {"i": i, "j": j},
                  _neg(m(e[j], e[i])), m(e[i], e[j]))
    zero = tuple([0] * n)
    for i, j, k in cartesian(range(n), repeat=3):
        total = _add(m(e[i], m(e[j], e[k])), m(e[j], m(e[k], e[i])), m(e[k], m(e[i], e[j])))
        rep.check(("jacobi", i, j, k), total == zero, {"basis": [i, j, k]}, zero, total)
    rng = random.Random(seed)
    for t in range(random_samples):
        x, y, z = (alg.random_element(rng) for _ in range(3))
        rep.check(("square-zero.random", t), m(x, x) == zero, {"x": x}, zero, m(x, x))
        total = _add(m(x, m(y, z)), m(y, m(z, x)), m(z, m(x, y)))
        rep.check(("jacobi.random", t), total == zero, {"x": x, "y": y, "z": z}, zero, total)
    rep.details["dimension"] = n
    return rep.finish()


# --------------------------------------------------------------------------
# model identification

def _matmul(a: dict, b: dict) -> dict:
    out = {}
    for (i, j), c in a.items():
        for (j2, l), d in b.items():
            if j == j2:
                out[(i, l)] = out.get((i, l), 0) + c * d
    return {key: v for key, v in out.items() if v}


def _lin(*pairs) -> dict:
    out = {}
    for c, mat in pairs:
        for key, v in mat.items():
            out[key] = out.get(key, 0) + c * v
    return {key: v for key, v in out.items() if v}


def _model_space(label, k):
    """Spanning matrices of the model's underlying space, or None if undefined for k."""
    units = [{(i, j): 1} for i in range(1, k + 1) for j in range(1, k + 1)]
    if label in ("JordanA", "gl"):
        return units
    if label in ("JordanB", "o"):
        s = 1 if label == "JordanB" else -1
        return [_lin((1, u), (s, transpose_matrix(u))) for u in units]
    if k % 2:
        return None
    s = 1 if label == "JordanC" else -1
    return [_lin((1, u), (s, dagger_matrix(u, k))) for u in units]


MODELS = ("JordanA", "JordanB", "JordanC", "gl", "o", "sp")


@dataclass
class ModelMatch:
    label: str
    scale: Fraction
    k: int

    def to_json(self):
        return {"label": self.label, "scale": str(self.scale), "k": self.k}


def identify_model(f: FamilyKind):
    """Match (minimal-weight space, o) against a classical model up to one global scalar.

    Each basis element is read off through its matrix at bidegree (0, L-1).
    Returns a ModelMatch, or None if nothing matches.
    """
    alg = MinimalWeightAlgebra(f)
    s = f.shift
    mats = []
    for el in alg.basis:
        if el.bidegrees() != {(0, s)}:
            raise AssertionError(f"minimal-weight element {el} is not concentrated at bidegree (0, {s})")
        mats.append(el.matrix_at(0, s))
    ours = Span(mats)
    for label in MODELS:
        space = _model_space(label, f.k)
        if space is None:
            continue
        model = Span(space)
        if len(model) != len(ours) or any(m not in model for m in mats):
            continue
        jordan = label.startswith("Jordan")
        scale = None
        ok = True
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                prod = alg.element(alg.table[i][j]).matrix_at(0, s)
                ref = _lin((1, _matmul(a, b)), (1 if jordan else -1, _matmul(b, a)))
                if not ref and not prod:
                    continue
                if not ref or not prod or set(ref) != set(prod):
                    ok = False
                    break
                key = next(iter(ref))
                lam = Fraction(prod[key]) / ref[key]
                if any(Fraction(prod[q]) != lam * ref[q] for q in ref):
                    ok = False
                    break
                if scale is None:
                    scale = lam
                elif scale != lam:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return ModelMatch(label, scale if scale is not None else Fraction(0), f.k)
    return None


def identify_report(f: FamilyKind) -> VerificationReport:
    rep = VerificationReport("identify", {"family": f})
    match = identify_model(f)
    rep.check("identify.match", match is not None, {"family": f}, "a classical model", None)
    if match is not None:
        rep.details.update(match.to_json())
    else:
        rep.details["label"] = None
        rep.details["note"] = "no model matched: this would contradict the classification at this size"
    return rep.finish()
