"""
The three subalgebra families of R_{k x k} and finite-weight evidence for
their closure, simplicity and generation by the minimal-weight space.

A family is addressed by its label L (the minimal weight); internally the
shift s = L - 1 is the second-index offset of the spanning elements.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..foundation import MalformedInput, Span, binom
from ..report import VerificationReport
from .elements import MatElement, partial_action, yplus_components

KINDS = ("full", "star", "dagger")


# --------------------------------------------------------------------------
# involutions

def transpose_matrix(mat: dict) -> dict:
    return {(j, i): c for (i, j), c in mat.items()}


def dagger_matrix(mat: dict, k: int) -> dict:
    """u^dagger = J u^T J^-1 with J = [[0, -I], [I, 0]] (k = 2 k1)."""
    if k % 2:
        raise MalformedInput(f"the dagger involution needs even k, got {k}")
    h = k // 2
    # J e_c = e_{c+h} for c <= h, J e_c = -e_{c-h} for c > h
    def J(c):
        return (c + h, 1) if c <= h else (c - h, -1)

    # J^-1 = -J
    out = {}
    for (i, j), c in mat.items():
        # u^T has entry c at (j, i); J E_ji J^-1 = (J e_j)(e_i^T J^-1)
        r, sr = J(j)
        # e_i^T J^-1 = (J^-T e_i)^T = (J e_i)^T since J^-T = J for this J
        col, sc = J(i)
        out[(r, col)] = out.get((r, col), 0) + c * sr * sc
    return {key: c for key, c in out.items() if c}


# --------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class FamilyKind:
    kind: str
    L: int
    k: int
    dropped: tuple = field(default=(), compare=True)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInput(f"unknown family kind {self.kind!r}; expected one of {KINDS}")
        if self.L < 1:
            raise MalformedInput("family label L must be >= 1")
        if self.k < 1:
            raise MalformedInput("matrix size k must be >= 1")
        if self.kind == "dagger" and self.k % 2:
            raise MalformedInput(f"dagger family needs even k, got k={self.k}")

    @property
    def shift(self) -> int:
        return self.L - 1

    def to_json(self):
        out = {"kind": self.kind, "L": self.L, "k": self.k}
        if self.dropped:
            out["dropped"] = [list(d) for d in self.dropped]
        return out

    def __str__(self):
        sym = {"full": "", "star": "*", "dagger": "†"}[self.kind]
        return f"R{sym}_{self.k}x{self.k},{self.L}"

    # -- per-weight data (cached at module level)
    def weight_basis(self, w: int):
        return _weight_basis(self, w)

    def span(self, w: int) -> Span:
        return _weight_span(self, w)

    def dimension(self, w: int) -> int:
        return len(self.weight_basis(w))

    def without(self, w: int, index: int) -> "FamilyKind":
        """Fault injection: the same family with one basis vector removed."""
        return FamilyKind(self.kind, self.L, self.k, self.dropped + ((w, index),))


def _spanning_elements(f: FamilyKind, w: int):
    s, k = f.shift, f.k
    if w < f.L:
        return []
    out = []
    if f.kind == "full":
        for n in range(s, w):
            m = w - 1 - n
            for i in range(1, k + 1):
                for j in range(1, k + 1):
                    out.append(MatElement.unit(k, i, j, m, n))
        return out
    sign = -1 if s % 2 == 0 else 1  # -(-1)^s
    for m in range(0, w - s):
        n = w - 1 - s - m
        a = binom(n + s, s)
        b = sign * binom(m + s, s)
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                mat = {(i, j): 1}
                inv = transpose_matrix(mat) if f.kind == "star" else dagger_matrix(mat, k)
                d = {(m, n + s, i, j): a}
                for (p, q), c in inv.items():
                    key = (n, m + s, p, q)
                    d[key] = d.get(key, 0) + b * c
                el = MatElement(k, d)
                if el:
                    out.append(el)
    return out


@lru_cache(maxsize=None)
def _weight_basis(f: FamilyKind, w: int):
    span = Span()
    basis = []
    for el in _spanning_elements(f, w):
        if span.add(el):
            basis.append(el)
    drops = sorted((idx for (dw, idx) in f.dropped if dw == w), reverse=True)
    for idx in drops:
        if idx < len(basis):
            del basis[idx]
    return tuple(basis)


@lru_cache(maxsize=None)
def _weight_span(f: FamilyKind, w: int) -> Span:
    return Span(_weight_basis(f, w))


def family_basis(f: FamilyKind, w_max: int) -> dict:
    """{weight: [basis elements]} for L <= weight <= w_max."""
    if w_max < f.L:
        raise MalformedInput(f"w_max must be >= L = {f.L}")
    return {w: list(f.weight_basis(w)) for w in range(f.L, w_max + 1)}


def membership(e: MatElement, f: FamilyKind) -> bool:
    if e.k != f.k:
        raise MalformedInput("matrix size mismatch")
    for w, part in e.homogeneous_parts().items():
        if part not in f.span(w):
            return False
    return True


def minimal_weight_basis(f: FamilyKind):
    return list(f.weight_basis(f.L))


# --------------------------------------------------------------------------
# closure

def closure_check(f: FamilyKind, w_max: int) -> VerificationReport:
    """All Y+ components of basis pairs (weights <= w_max) and all d-images lie in the family."""
    rep = VerificationReport("closure", {"family": f, "w_max": w_max})
    basis = [el for w, els in family_basis(f, w_max).items() for el in els]
    for a in basis:
        da = partial_action(a)
        rep.check("closure.partial", membership(da, f), {"a": a}, "member of family", da)
    products = 0
    for a in basis:
        wa = a.weight()
        for b in basis:
            products += 1
            wb = b.weight()
            for e, d in yplus_components(a, b).items():
                n = -e - 1
                x = MatElement(f.k, d)
                w = wa + wb - n - 1
                ok = x.weight() == w and x in f.span(w)
                rep.check("closure.product", ok, {"a": a, "b": b, "n": n}, "member of family", x)
    rep.details["products_checked"] = products
    rep.details["basis_size"] = len(basis)
    return rep.finish()


# --------------------------------------------------------------------------
# saturation helpers

class GradedSpan:
    """Per-weight spans of homogeneous elements, truncated at w_max."""

    def __init__(self, k, w_max):
        self.k = k
        self.w_max = w_max
        self.spans = {}
        self.vectors = {}

    def add(self, x: MatElement) -> bool:
        w = x.weight()
        if w is None:
            raise MalformedInput("graded span only accepts homogeneous elements")
        if w > self.w_max:
            return False
        sp = self.spans.setdefault(w, Span())
        if sp.add(x):
            self.vectors.setdefault(w, []).append(x)
            return True
        return False

    def dims(self):
        return {w: len(sp) for w, sp in sorted(self.spans.items())}


def _homogeneous_products(a, b):
    for e, d in yplus_components(a, b).items():
        yield -e - 1, MatElement(a.k, d)


def random_family_element(f: FamilyKind, rng: random.Random, w_min=None, w_max=None) -> MatElement:
    """Homogeneous element with random rational coefficients in [-5, 5] / [1, 4]."""
    lo = f.L if w_min is None else w_min
    hi = lo if w_max is None else w_max
    while True:
        w = rng.randint(lo, hi)
        total = MatElement(f.k)
        for el in f.weight_basis(w):
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            total = total + el * c
        if total:
            return total


def ideal_probe(f: FamilyKind, seed: MatElement, w_max: int) -> VerificationReport:
    """Saturate {seed} under d, left and right components of the family basis.

    Elements are kept homogeneous and anything above w_max is dropped, so a
    pass is certified evidence that the ideal generated by ``seed`` meets
    every weight <= w_max in the full family span.
    """
    rep = VerificationReport("ideal_probe", {"family": f, "seed": seed, "w_max": w_max})
    if not seed:
        raise MalformedInput("seed must be nonzero")
    if not membership(seed, f):
        raise MalformedInput("seed is not in the family")
    target = {w: f.dimension(w) for w in range(f.L, w_max + 1)}
    basis = [el for w in range(f.L, w_max + 1) for el in f.weight_basis(w)]
    ideal = GradedSpan(f.k, w_max)
    queue = []
    for part in seed.homogeneous_parts().values():
        if ideal.add(part):
            queue.append(part)

    def full():
        return all(len(ideal.spans.get(w, ())) == d for w, d in target.items())

    ops = 0
    while queue and not full():
        x = queue.pop(0)
        candidates = [partial_action(x)]
        for a in basis:
            candidates.extend(y for _, y in _homogeneous_products(a, x))
            candidates.extend(y for _, y in _homogeneous_products(x, a))
        for y in candidates:
            ops += 1
            if y and ideal.add(y):
                queue.append(y)
                if full():
                    break
    got = ideal.dims()
    for w, d in target.items():
        rep.check(("ideal.dim", w), got.get(w, 0) == d, {"weight": w}, d, got.get(w, 0))
    rep.details["dims"] = {str(w): got.get(w, 0) for w in target}
    rep.details["target_dims"] = {str(w): d for w, d in target.items()}
    rep.details["operations"] = ops
    return rep.finish()


def generation_check(f: FamilyKind, w_max: int) -> VerificationReport:
    """Span of iterated components u1_n1 ... us_ns (v) with ui, v of minimal weight."""
    rep = VerificationReport("generation", {"family": f, "w_max": w_max})
    hyp = f.L >= 2 and (f.k >= 4 if f.kind == "dagger" else f.k >= 2)
    rep.details["generation_hypotheses_hold"] = hyp
    gens = minimal_weight_basis(f)
    obtained = GradedSpan(f.k, w_max)
    queue = [g for g in gens if obtained.add(g)]
    target = {w: f.dimension(w) for w in range(f.L, w_max + 1)}

    def full():
        return all(len(obtained.spans.get(w, ())) == d for w, d in target.items())

    while queue and not full():
        x = queue.pop(0)
        for u in gens:
            for _, y in _homogeneous_products(u, x):
                if y and obtained.add(y):
                    queue.append(y)
    got = obtained.dims()
    for w, d in target.items():
        rep.check(("generation.dim", w), got.get(w, 0) == d, {"weight": w}, d, got.get(w, 0))
    rep.details["dims"] = {str(w): got.get(w, 0) for w in target}
    rep.details["target_dims"] = {str(w): d for w, d in target.items()}
    return rep.finish()
