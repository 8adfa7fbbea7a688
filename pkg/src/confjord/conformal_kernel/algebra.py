"""
Conformal algebras that are free F[d]-modules over a finite generating space.

An algebra is described by its generators and the finitely many nonzero
components ``u_n(v)`` for generators u, v; everything else (products of
d-shifted elements) follows from translation covariance.

Every algebra object used by the checkers in :mod:`.axioms` exposes the same
small surface:

``generators()``   list of elements spanning V
``partial(x)``     the F[d]-action
``product(a, b)``  Y+(a, z) b as a ZSeries of elements
``weight(x)``      homogeneous weight, or None
"""

import json
from functools import lru_cache

from ..foundation import MalformedInput, Vector, ZSeries, binom, derivative, rational, rational_to_str


class ConformalElement(Vector):
    """Linear combination of d^i v, keyed by (i, basis_name)."""

    __slots__ = ()

    @classmethod
    def gen(cls, name, power=0, coefficient=1):
        return cls({(power, name): coefficient})

    def partial(self, times=1):
        if times == 0:
            return self
        out = {}
        for (i, b), c in self._terms.items():
            out[(i + times, b)] = c
        return self._spawn(out)

    def max_power(self):
        return max((i for i, _ in self._terms), default=0)

    def to_json(self):
        return [{"partial_power": i, "basis": str(b), "coefficient": rational_to_str(c)}
                for (i, b), c in sorted(self._terms.items(), key=lambda t: (t[0][0], str(t[0][1])))]

    @classmethod
    def from_json(cls, terms):
        return cls({(int(t["partial_power"]), t["basis"]): rational(t["coefficient"]) for t in terms})

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, b), c in sorted(self._terms.items(), key=lambda t: (-t[0][0], str(t[0][1]))):
            mono = str(b) if i == 0 else (f"∂{b}" if i == 1 else f"∂^{i}{b}")
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{rational_to_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = ConformalElement()


def components(series: ZSeries) -> dict:
    """{n: u_n(v)} from Y+(u,z)v = sum u_n(v) z^(-n-1)."""
    return {-e - 1: c for e, c in series.coeffs.items()}


def from_components(comps: dict, zero) -> ZSeries:
    return ZSeries({-n - 1: c for n, c in comps.items()}, "z", zero)


class ConformalAlgebra:
    """(R = F[d] V, d, Y+) with Y+ given on generator pairs.

    ``table`` maps (u, v) to a sequence (u_0(v), u_1(v), ...); pairs that are
    absent have zero product.  ``weights`` optionally assigns each generator
    a positive weight; d raises weight by one.
    """

    def __init__(self, basis, table, weights=None, label=""):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise MalformedInput("basis names must be unique")
        self.weights = dict(weights) if weights else None
        if self.weights is not None:
            if set(self.weights) != set(self.basis):
                raise MalformedInput("weights must cover the basis exactly")
            if any(w < 1 for w in self.weights.values()):
                raise MalformedInput("weights must be >= 1")
        self.label = label
        self.table = {}
        for (u, v), comps in table.items():
            if u not in self.basis or v not in self.basis:
                raise MalformedInput(f"unknown basis element in table entry {(u, v)}")
            comps = [c if isinstance(c, ConformalElement) else ConformalElement(c) for c in comps]
            for c in comps:
                for (_, b) in c:
                    if b not in self.basis:
                        raise MalformedInput(f"component of {(u, v)} mentions unknown generator {b!r}")
            while comps and not comps[-1]:
                comps.pop()
            if comps:
                self.table[(u, v)] = tuple(comps)
        self._cache = {}

    def __repr__(self):
        return f"ConformalAlgebra({self.label or '?'}, dim V = {len(self.basis)})"

    # -- generator level
    def component(self, u, v, n) -> ConformalElement:
        comps = self.table.get((u, v), ())
        return comps[n] if 0 <= n < len(comps) else ZERO

    def locality(self, u, v) -> int:
        return len(self.table.get((u, v), ()))

    def raw_product(self, u, v) -> ZSeries:
        return from_components(dict(enumerate(self.table.get((u, v), ()))), ZERO)

    # -- protocol
    def generators(self):
        return [ConformalElement.gen(b) for b in self.basis]

    def zero(self):
        return ZERO

    def partial(self, x):
        return x.partial()

    def weight(self, x):
        if self.weights is None or not x:
            return None
        ws = {self.weights[b] + i for (i, b) in x}
        return ws.pop() if len(ws) == 1 else None

    def product(self, a, b) -> ZSeries:
        """Y+(a, z) b, extended bilinearly from generators by

        Y+(d^m u, z) d^n v = sum_j (-1)^j C(n,j) (d/dz)^(m+j) d^(n-j) Y+(u,z) v.
        """
        acc = {}
        for (m, u), cu in a.items():
            for (n, v), cv in b.items():
                s = self._shifted_product(m, u, n, v)
                c = cu * cv
                for e, x in s.coeffs.items():
                    acc[e] = acc[e] + x * c if e in acc else x * c
        return ZSeries(acc, "z", ZERO)

    def _shifted_product(self, m, u, n, v) -> ZSeries:
        key = (m, u, n, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        base = self.raw_product(u, v)
        total = ZSeries({}, "z", ZERO)
        for j in range(n + 1):
            term = derivative(base, m + j).map(lambda x, p=n - j: x.partial(p))
            total = total + term * ((-1) ** j * binom(n, j))
        self._cache[key] = total
        return total

    # -- serialization
    def to_json(self):
        comps = []
        for (u, v), cs in sorted(self.table.items()):
            for n, c in enumerate(cs):
                if c:
                    comps.append({"u": u, "v": v, "n": n, "terms": c.to_json()})
        out = {"label": self.label, "basis": list(self.basis), "components": comps}
        if self.weights is not None:
            out["weights"] = dict(self.weights)
        return out


def extend_product(a, b, alg):
    return alg.product(a, b)


# --------------------------------------------------------------------------
# builders

class NotALieAlgebra(MalformedInput):
    def __init__(self, message, triple):
        super().__init__(message)
        self.triple = triple


def lie_bracket_from_table(structure_constants):
    def bracket(x: dict, y: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for w, c in structure_constants.get((a, b), {}).items():
                    val = out.get(w, 0) + ca * cb * c
                    if val:
                        out[w] = val
                    else:
                        out.pop(w, None)
        return out
    return bracket


def check_lie_structure(basis, structure_constants):
    """Raise NotALieAlgebra on the first antisymmetry or Jacobi violation."""
    br = lie_bracket_from_table(structure_constants)
    for a in basis:
        for b in basis:
            ab = br({a: 1}, {b: 1})
            ba = br({b: 1}, {a: 1})
            neg = {k: -c for k, c in ba.items()}
            if ab != neg:
                raise NotALieAlgebra(f"bracket not antisymmetric on ({a}, {b})", (a, b, None))
    for a in basis:
        for b in basis:
            for c in basis:
                total = {}
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    for k, v in br({x: 1}, br({y: 1}, {z: 1})).items():
                        total[k] = total.get(k, 0) + v
                if any(total.values()):
                    raise NotALieAlgebra(f"Jacobi identity fails on ({a}, {b}, {c})", (a, b, c))


def from_lie_algebra(basis, structure_constants, label="R(G)", check=True) -> ConformalAlgebra:
    """R(G) = F[d] (x) G with Y+(u,z)v = [u,v] z^-1.

    ``structure_constants`` maps (u, v) to {w: coefficient} giving [u, v].
    """
    basis = list(basis)
    for (u, v), img in structure_constants.items():
        if u not in basis or v not in basis or any(w not in basis for w in img):
            raise MalformedInput(f"structure constant entry {(u, v)} mentions an unknown basis element")
    if check:
        check_lie_structure(basis, structure_constants)
    table = {}
    for (u, v), img in structure_constants.items():
        el = ConformalElement({(0, w): rational(c) for w, c in img.items()})
        if el:
            table[(u, v)] = (el,)
    return ConformalAlgebra(basis, table, {b: 1 for b in basis}, label)


def make_witt() -> ConformalAlgebra:
    """R_W = F[d] e with Y+(e,z)e = de z^-1 + 2e z^-2."""
    e0 = ConformalElement.gen("e", 1)
    e1 = ConformalElement.gen("e", 0, 2)
    return ConformalAlgebra(["e"], {("e", "e"): (e0, e1)}, {"e": 2}, "witt")


def sl2_structure_constants():
    basis = ["e", "f", "h"]
    sc = {
        ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
        ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
        ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2},
    }
    return basis, sc


@lru_cache(maxsize=None)
def sl_n_data(n: int):
    """Basis, structure constants and trace form of sl(n).

    Basis: E{i}{j} for i != j and H{i} = E_ii - E_{i+1,i+1}; matrices are
    returned as dicts {(row, col): value} (1-based).
    """
    if n < 2:
        raise MalformedInput("sl(n) requires n >= 2")
    names, mats = [], {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                name = f"E{i}{j}" if n < 10 else f"E{i}_{j}"
                names.append(name)
                mats[name] = {(i, j): 1}
    for i in range(1, n):
        name = f"H{i}"
        names.append(name)
        mats[name] = {(i, i): 1, (i + 1, i + 1): -1}

    def mul(x, y):
        out = {}
        for (a, b), c in x.items():
            for (b2, d), c2 in y.items():
                if b == b2:
                    out[(a, d)] = out.get((a, d), 0) + c * c2
        return {k: v for k, v in out.items() if v}

    def decompose(m):
        out = {}
        for (a, b), c in m.items():
            if a != b:
                out[f"E{a}{b}" if n < 10 else f"E{a}_{b}"] = c
        # diagonal part: sum_i d_i E_ii with trace 0 -> sum_i c_i H_i, c_i = d_1 + ... + d_i
        running = 0
        for i in range(1, n):
            running += m.get((i, i), 0)
            if running:
                out[f"H{i}"] = running
        return out

    sc = {}
    for u in names:
        for v in names:
            comm = mul(mats[u], mats[v])
            for k, c in mul(mats[v], mats[u]).items():
                comm[k] = comm.get(k, 0) - c
            comm = {k: c for k, c in comm.items() if c}
            if comm:
                sc[(u, v)] = decompose(comm)
    form = {}
    for u in names:
        for v in names:
            tr = sum(c for (a, b), c in mul(mats[u], mats[v]).items() if a == b)
            if tr:
                form[(u, v)] = tr
    return tuple(names), sc, form, mats


def make_sl2_current() -> ConformalAlgebra:
    basis, sc = sl2_structure_constants()
    return from_lie_algebra(basis, sc, label="sl2")


def abelian(basis, label="abelian") -> ConformalAlgebra:
    return from_lie_algebra(basis, {}, label=label)


# --------------------------------------------------------------------------
# fault injection

def mutate(alg: ConformalAlgebra, u, v, n, value, label=None) -> ConformalAlgebra:
    """Copy of ``alg`` with the generator component u_n(v) replaced by ``value``.

    The extension to d-shifted elements is recomputed from the altered table,
    so the mutant stays translation covariant but usually breaks skew or Jacobi.
    """
    table = {k: list(cs) for k, cs in alg.table.items()}
    comps = table.setdefault((u, v), [])
    while len(comps) <= n:
        comps.append(ZERO)
    comps[n] = value
    return ConformalAlgebra(alg.basis, table, alg.weights, label or f"{alg.label}*")


class PatchedAlgebra:
    """Wraps an algebra, overriding Y+(u,z)v for one exact pair of elements.

    All other products (including those of d-shifted elements) come from the
    original map, so the patched map breaks translation covariance.
    """

    def __init__(self, base, a, b, series, label=None):
        self.base = base
        self.a, self.b, self.series = a, b, series
        self.label = label or f"{base.label}~"

    def generators(self):
        return self.base.generators()

    def zero(self):
        return self.base.zero()

    def partial(self, x):
        return self.base.partial(x)

    def weight(self, x):
        return self.base.weight(x)

    def product(self, a, b):
        if a == self.a and b == self.b:
            return self.series
        return self.base.product(a, b)


def builtin_mutants():
    """The three fault-injected algebras used in the axiom consistency suite."""
    witt = make_witt()
    sl2 = make_sl2_current()
    e = ConformalElement.gen
    return {
        "witt-e1": mutate(witt, "e", "e", 1, e("e", 0, 3), "witt-e1"),
        "sl2-skew": mutate(sl2, "e", "f", 0, e("h", 0, 2), "sl2-skew"),
        "sl2-jacobi": mutate(mutate(sl2, "h", "e", 0, e("e", 0, 3)), "e", "h", 0, e("e", 0, -3),
                             "sl2-jacobi"),
    }


# --------------------------------------------------------------------------
# declarative format

def load_algebra(text: str) -> ConformalAlgebra:
    """Parse the JSON algebra description produced by ``ConformalAlgebra.to_json``.

    {"label": ..., "basis": [...], "weights": {...} (optional),
     "components": [{"u": .., "v": .., "n": .., "terms": [{"partial_power", "basis", "coefficient"}]}]}
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"algebra description is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "basis" not in doc:
        raise MalformedInput("algebra description needs a 'basis' list")
    table = {}
    for entry in doc.get("components", []):
        try:
            u, v, n = entry["u"], entry["v"], int(entry["n"])
            value = ConformalElement.from_json(entry["terms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad component entry {entry!r}: {exc}") from None
        if n < 0:
            raise MalformedInput("component index must be >= 0")
        comps = table.setdefault((u, v), [])
        while len(comps) <= n:
            comps.append(ZERO)
        comps[n] = comps[n] + value
    weights = doc.get("weights")
    if weights is not None:
        weights = {k: int(w) for k, w in weights.items()}
    return ConformalAlgebra(doc["basis"], table, weights, doc.get("label", ""))


def dump_algebra(alg: ConformalAlgebra) -> str:
    return json.dumps(alg.to_json(), indent=2, sort_keys=True)
