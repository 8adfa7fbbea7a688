"""
Elements of R_{k x k} = M_k (x) F[t1, t2] and its conformal structure.

A MatElement is stored flat, as a sparse combination of keys
(m1, m2, i, j) standing for E_ij (x) t1^m1 t2^m2 (matrix indices 1-based).
"""

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..foundation import MalformedInput, Vector, ZSeries, binom, rational, rational_to_str
from ..conformal_kernel.algebra import ConformalElement


class MatElement(Vector):
    __slots__ = ("k",)

    def __init__(self, k, terms=None):
        super().__init__(terms)
        self.k = k
        for (m1, m2, i, j) in self._terms:
            if m1 < 0 or m2 < 0 or not (1 <= i <= k and 1 <= j <= k):
                raise MalformedInput(f"bad MatElement key {(m1, m2, i, j)} for k={k}")

    def _copy_meta(self, new):
        new.k = self.k

    def _compatible(self, other):
        return isinstance(other, MatElement) and other.k == self.k

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("MatElement", self.k, frozenset(self._terms.items())))
        return self._hash

    @classmethod
    def unit(cls, k, i, j, m1=0, m2=0, coefficient=1):
        return cls(k, {(m1, m2, i, j): coefficient})

    @classmethod
    def from_matrix(cls, matrix, m1=0, m2=0):
        """matrix: dict {(i, j): c} or nested rows (1-based in the dict form)."""
        if isinstance(matrix, dict):
            k = max(max(i, j) for i, j in matrix) if matrix else 1
            return cls(k, {(m1, m2, i, j): c for (i, j), c in matrix.items()})
        k = len(matrix)
        return cls(k, {(m1, m2, i + 1, j + 1): rational(c)
                       for i, row in enumerate(matrix) for j, c in enumerate(row) if c})

    def terms(self):
        """{(m1, m2): {(i, j): c}} grouped by bidegree."""
        out = {}
        for (m1, m2, i, j), c in self._terms.items():
            out.setdefault((m1, m2), {})[(i, j)] = c
        return out

    def bidegrees(self):
        return {(m1, m2) for (m1, m2, _, _) in self._terms}

    def weights(self):
        return {m1 + m2 + 1 for (m1, m2, _, _) in self._terms}

    def weight(self):
        ws = self.weights()
        return ws.pop() if len(ws) == 1 else None

    def homogeneous_parts(self):
        out = {}
        for key, c in self._terms.items():
            out.setdefault(key[0] + key[1] + 1, {})[key] = c
        return {w: self._spawn(d) for w, d in sorted(out.items())}

    def matrix_at(self, m1, m2):
        return {(i, j): c for (a, b, i, j), c in self._terms.items() if (a, b) == (m1, m2)}

    def to_json(self):
        terms = []
        for (m1, m2), mat in sorted(self.terms().items()):
            rows = [[rational_to_str(mat.get((i, j), 0)) for j in range(1, self.k + 1)]
                    for i in range(1, self.k + 1)]
            terms.append({"m1": m1, "m2": m2, "matrix": rows})
        return {"k": self.k, "terms": terms}

    @classmethod
    def from_json(cls, doc):
        k = int(doc["k"])
        d = {}
        for t in doc["terms"]:
            for i, row in enumerate(t["matrix"]):
                for j, c in enumerate(row):
                    c = rational(c)
                    if c:
                        d[(int(t["m1"]), int(t["m2"]), i + 1, j + 1)] = c
        return cls(k, d)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (m1, m2, i, j), c in sorted(self._terms.items()):
            mono = f"E{i}{j}({m1},{m2})"
            parts.append(mono if c == 1 else (f"-{mono}" if c == -1 else f"{rational_to_str(c)}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# F[d]-action and structure map

def partial_action(e: MatElement) -> MatElement:
    """d u(m,n) = (m+1) u(m+1,n) + (n+1) u(m,n+1)."""
    acc = {}
    for (m1, m2, i, j), c in e.items():
        for key, f in (((m1 + 1, m2, i, j), m1 + 1), ((m1, m2 + 1, i, j), m2 + 1)):
            v = acc.get(key, 0) + c * f
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return e._spawn(acc)


@lru_cache(maxsize=None)
def _left_profile(m1, m2, n1):
    """[(exponent, p, coefficient)] of the (uv)(p, n2) sum."""
    lead = binom(-n1 - 1, m2)
    if not lead:
        return ()
    top = m1 + m2 + n1
    return tuple((p - top - 1, p, lead * binom(p, m1)) for p in range(m1, top + 1))


@lru_cache(maxsize=None)
def _right_profile(m1, m2, n2):
    """[(exponent, q, coefficient)] of the (vu)(n1, q) sum (sign included)."""
    lead = binom(-n2 - 1, m1)
    if not lead:
        return ()
    top = m1 + m2 + n2
    return tuple((q - top - 1, q, -lead * binom(q, m2)) for q in range(m2, top + 1))


def yplus_components(a: MatElement, b: MatElement) -> dict:
    """{exponent: {key: coefficient}} for Y+(a, z) b."""
    if a.k != b.k:
        raise MalformedInput(f"matrix size mismatch: {a.k} vs {b.k}")
    out = {}
    for (m1, m2, i, j), ca in a.items():
        for (n1, n2, p, q), cb in b.items():
            c = ca * cb
            if j == p:  # uv = E_iq
                for e, pp, f in _left_profile(m1, m2, n1):
                    d = out.setdefault(e, {})
                    key = (pp, n2, i, q)
                    v = d.get(key, 0) + c * f
                    if v:
                        d[key] = v
                    else:
                        del d[key]
            if q == i:  # vu = E_pj
                for e, qq, f in _right_profile(m1, m2, n2):
                    d = out.setdefault(e, {})
                    key = (n1, qq, p, j)
                    v = d.get(key, 0) + c * f
                    if v:
                        d[key] = v
                    else:
                        del d[key]
    return {e: d for e, d in out.items() if d}


def yplus_matrix(a: MatElement, b: MatElement) -> ZSeries:
    zero = MatElement(a.k)
    return ZSeries({e: a._spawn(d) for e, d in yplus_components(a, b).items()}, "z", zero)


def weight(g: MatElement) -> int:
    w = g.weight()
    if w is None:
        raise MalformedInput("element is not homogeneous")
    return w


def component_by_weight(a: MatElement, j: int):
    """The operator u(j) = u_(j + wt(u) - 1); zero below the lower bound 1 - wt(u)."""
    ell = a.weight()
    if ell is None:
        raise MalformedInput("component_by_weight needs a homogeneous element")
    n = j + ell - 1

    def op(b: MatElement) -> MatElement:
        if n < 0:
            return MatElement(a.k)
        return yplus_matrix(a, b)[-n - 1]

    return op


# --------------------------------------------------------------------------
# R_{k x k} as a conformal algebra (adapter for the kernel checkers)

class MatrixConformalAlgebra:
    """R_{k x k} with generators E_ij(0, n) for n <= max_degree."""

    def __init__(self, k, max_degree=1, label=None):
        self.k = k
        self.max_degree = max_degree
        self.label = label or f"R_{k}x{k}"

    def generators(self):
        return [MatElement.unit(self.k, i, j, 0, n)
                for n in range(self.max_degree + 1)
                for i in range(1, self.k + 1) for j in range(1, self.k + 1)]

    def zero(self):
        return MatElement(self.k)

    def partial(self, x):
        return partial_action(x)

    def product(self, a, b):
        return yplus_matrix(a, b)

    def weight(self, x):
        return x.weight() if x else None


# --------------------------------------------------------------------------
# R as a free F[d]-module over V = span{u(0, n)}

def partial_power_of_v(k, i, j, n, power) -> MatElement:
    """d^power E_ij(0, n) expanded in the (m1, m2) basis.

    Closed form: sum_a C(power, a) a! (n+power-a)!/n! E_ij(a, n+power-a).
    """
    d = {}
    for a in range(power + 1):
        c = binom(power, a) * factorial(a) * factorial(n + power - a) // factorial(n)
        d[(a, n + power - a, i, j)] = c
    return MatElement(k, d)


def canonicalize_over_V(e: MatElement) -> ConformalElement:
    """Unique expression e = sum_i d^i v_i with v_i in span{u(0, n)}.

    Basis labels of the result are (i, j, n) for E_ij(0, n).  Terms are
    eliminated by decreasing first index; the leading coefficient of
    d^m u(0, n) at u(m, n) is m!.
    """
    rest = dict(e.items())
    out = {}
    while rest:
        m1, m2, i, j = max(rest, key=lambda t: (t[0], t))
        c = rest[(m1, m2, i, j)]
        coeff = Fraction(c) / factorial(m1)
        out[(m1, (i, j, m2))] = out.get((m1, (i, j, m2)), 0) + coeff
        for key, f in partial_power_of_v(e.k, i, j, m2, m1).items():
            v = rest.get(key, 0) - coeff * f
            if v:
                rest[key] = v
            else:
                rest.pop(key, None)
    result = ConformalElement(out)
    if expand_over_V(result, e.k) != e:
        raise AssertionError("canonical form does not round-trip")
    return result


def expand_over_V(x: ConformalElement, k: int) -> MatElement:
    total = MatElement(k)
    for (power, (i, j, n)), c in x.items():
        total = total + partial_power_of_v(k, i, j, n, power) * c
    return total


# --------------------------------------------------------------------------
# element literals

_LITERAL = re.compile(
    r"^\s*(?:(?P<coef>[-+]?\d+(?:/\d+)?)\s*\*\s*)?"
    r"(?P<kind>sym-|skew-|dag-|adag-)?E(?P<i>\d+)(?:_(?P<j2>\d+)|(?P<j>\d))?"
    r":(?P<m1>\d+),(?P<m2>\d+)\s*$")


def parse_element(text: str, k: int) -> MatElement:
    """Parse ``[c*]NAME:m1,m2`` terms joined by ``+``.

    NAME is ``Eij`` (matrix unit; ``Ei_j`` when indices exceed 9),
    ``sym-Eij`` (E_ij + E_ji), ``skew-Eij`` (E_ij - E_ji),
    ``dag-Eij`` (E_ij + E_ij^dagger) or ``adag-Eij`` (E_ij - E_ij^dagger).
    """
    from .families import dagger_matrix
    total = MatElement(k)
    for chunk in re.split(r"\s\+\s|\+(?=\s*(?:[-\d]|sym|skew|dag|adag|E))", text):
        if not chunk.strip():
            continue
        m = _LITERAL.match(chunk)
        if not m:
            raise MalformedInput(f"cannot parse element literal {chunk!r}")
        if m.group("j2"):
            i, j = int(m.group("i")), int(m.group("j2"))
        else:
            digits = m.group("i") + (m.group("j") or "")
            if len(digits) != 2:
                raise MalformedInput(f"ambiguous matrix-unit name in {chunk!r}; use Ei_j")
            i, j = int(digits[0]), int(digits[1])
        if not (1 <= i <= k and 1 <= j <= k):
            raise MalformedInput(f"matrix unit E{i}{j} out of range for k={k}")
        m1, m2 = int(m.group("m1")), int(m.group("m2"))
        coef = rational(m.group("coef") or 1)
        kind = m.group("kind") or ""
        mat = {(i, j): 1}
        if kind in ("sym-", "skew-"):
            s = 1 if kind == "sym-" else -1
            mat[(j, i)] = mat.get((j, i), 0) + s
        elif kind in ("dag-", "adag-"):
            s = 1 if kind == "dag-" else -1
            for key, c in dagger_matrix(mat, k).items():
                mat[key] = mat.get(key, 0) + s * c
        total = total + MatElement(k, {(m1, m2, a, b): c * coef for (a, b), c in mat.items() if c})
    return total
