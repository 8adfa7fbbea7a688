"""
Exact arithmetic primitives shared by every other module.

Scalars are ``fractions.Fraction`` (plain ``int`` is accepted wherever a
scalar is expected, since it is an exact rational too).  Linear
combinations are sparse, immutable maps from hashable keys to nonzero
scalars; formal series are sparse maps from integer exponents to
coefficients of any type that supports ``+``, ``-``, scalar ``*`` and
truthiness-as-nonzero.
"""

from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache
from math import factorial


class MalformedInput(ValueError):
    pass


# --------------------------------------------------------------------------
# scalars

def rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise MalformedInput(f"not a rational number: {x!r}") from None


def rational_to_str(x) -> str:
    x = rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=None)
def binom(a: int, n: int) -> int:
    """Generalized binomial a(a-1)...(a-n+1)/n! for any integer a.

    Negative upper arguments follow the expansion of (z-x)^a in the
    second variable, so binom(-j-1, n) == (-1)**n * binom(j+n, n).
    The value is always an integer for integer a.
    """
    if n < 0:
        raise MalformedInput(f"binom: lower argument must be >= 0, got {n}")
    num = 1
    for i in range(n):
        num *= a - i
    return num // factorial(n)


# --------------------------------------------------------------------------
# sparse linear combinations

class Vector(Mapping):
    """Immutable sparse linear combination ``{key: coefficient}``.

    Zero coefficients are never stored, so equality is plain map equality.
    Subclasses carry extra metadata by overriding ``_copy_meta``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, c in items:
                if not c:
                    continue
                c2 = d.get(key, 0) + c
                if c2:
                    d[key] = c2
                else:
                    del d[key]
        self._terms = d
        self._hash = None

    def _spawn(self, d):
        new = object.__new__(type(self))
        new._terms = d
        new._hash = None
        self._copy_meta(new)
        return new

    def _copy_meta(self, new):
        pass

    def _compatible(self, other):
        return type(other) is type(self)

    # Mapping protocol
    def __getitem__(self, key):
        return self._terms.get(key, 0)

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __contains__(self, key):
        return key in self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self._compatible(other) and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Vector):
            return NotImplemented
        if not self._compatible(other):
            raise MalformedInput(f"cannot add {type(self).__name__} and {type(other).__name__}")
        d = dict(self._terms)
        for key, c in other._terms.items():
            c2 = d.get(key, 0) + c
            if c2:
                d[key] = c2
            else:
                del d[key]
        return self._spawn(d)

    __radd__ = __add__

    def __neg__(self):
        return self._spawn({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Vector):
            return NotImplemented
        if not scalar:
            return self._spawn({})
        if scalar == 1:
            return self
        return self._spawn({k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1) / rational(scalar))

    def zero(self):
        return self._spawn({})

    def add_to(self, acc: dict, scale=1):
        """Accumulate ``scale * self`` into a plain dict (pruning zeros)."""
        for key, c in self._terms.items():
            c2 = acc.get(key, 0) + c * scale
            if c2:
                acc[key] = c2
            else:
                acc.pop(key, None)

    def apply(self, fn, zero=None):
        """Linear extension of ``fn: key -> Vector``."""
        acc = {}
        result = None
        for key, c in self._terms.items():
            image = fn(key)
            if result is None and isinstance(image, Vector):
                result = image
            if image:
                image.add_to(acc, c)
        if result is None:
            return zero if zero is not None else self._spawn({})
        return result._spawn(acc)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for key, c in self._terms.items():
            parts.append(f"{rational_to_str(c)}*{key!r}")
        return " + ".join(parts)


# --------------------------------------------------------------------------
# span computations

def _reduce_against(rows: dict, v: dict) -> dict:
    r = dict(v)
    for key in list(r):
        c = r.get(key)
        if c and key in rows:
            for k2, c2 in rows[key].items():
                c3 = r.get(k2, 0) - c * c2
                if c3:
                    r[k2] = c3
                else:
                    r.pop(k2, None)
    return r


class Span:
    """Subspace spanned by sparse vectors, kept in reduced row-echelon form.

    Vectors are ``Mapping``s (``Vector`` or dict) with arbitrary hashable
    keys; rows are stored with pivot coefficient 1.
    """

    def __init__(self, vectors=()):
        self._rows = {}
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self._rows)

    def residual(self, v) -> dict:
        return _reduce_against(self._rows, v)

    def __contains__(self, v) -> bool:
        return not self.residual(v)

    def add(self, v) -> bool:
        """Insert v; return True if the dimension grew."""
        r = self.residual(v)
        if not r:
            return False
        pivot = next(iter(r))
        inv = Fraction(1) / r[pivot]
        row = {k: c * inv for k, c in r.items()}
        for other in self._rows.values():
            c = other.get(pivot)
            if c:
                for k2, c2 in row.items():
                    c3 = other.get(k2, 0) - c * c2
                    if c3:
                        other[k2] = c3
                    else:
                        other.pop(k2, None)
        self._rows[pivot] = row
        return True

    def copy(self) -> "Span":
        new = Span()
        new._rows = {p: dict(r) for p, r in self._rows.items()}
        return new


class Basis:
    """Linearly independent family with exact coordinate extraction."""

    def __init__(self, vectors):
        self.vectors = list(vectors)
        self._rows = {}
        # each row: (coordinates dict, combination dict over generator indices)
        for idx, v in enumerate(self.vectors):
            r, comb = self._reduce(dict(v), {idx: Fraction(1)})
            if not r:
                raise MalformedInput(f"basis vector {idx} is linearly dependent on the previous ones")
            pivot = next(iter(r))
            inv = Fraction(1) / r[pivot]
            self._rows[pivot] = ({k: c * inv for k, c in r.items()},
                                 {k: c * inv for k, c in comb.items()})

    def _reduce(self, r, comb):
        for pivot, (row, rcomb) in self._rows.items():
            c = r.get(pivot)
            if c:
                for k2, c2 in row.items():
                    c3 = r.get(k2, 0) - c * c2
                    if c3:
                        r[k2] = c3
                    else:
                        r.pop(k2, None)
                for k2, c2 in rcomb.items():
                    c3 = comb.get(k2, 0) - c * c2
                    if c3:
                        comb[k2] = c3
                    else:
                        comb.pop(k2, None)
        return r, comb

    def __len__(self):
        return len(self.vectors)

    def coordinates(self, v):
        """Coefficients expressing v in the basis, or None if v is outside the span."""
        r, comb = self._reduce(dict(v), {})
        if r:
            return None
        # comb holds -(target combination); see _reduce sign convention
        return tuple(-comb.get(i, 0) for i in range(len(self.vectors)))

    def combine(self, coords):
        acc = {}
        proto = None
        for c, v in zip(coords, self.vectors):
            if c:
                proto = v
                for k, x in v.items():
                    y = acc.get(k, 0) + c * x
                    if y:
                        acc[k] = y
                    else:
                        acc.pop(k, None)
        if isinstance(proto, Vector):
            return proto._spawn(acc)
        return acc


def solve_in_span(generators, target):
    """Exact rational coefficients c with sum(c_i * g_i) == target, or None.

    Inputs are coordinate sequences of equal length (or sparse Mappings).
    Generators may be linearly dependent; any valid solution is returned.
    """
    gens = [_as_sparse(g) for g in generators]
    tgt = _as_sparse(target)
    dims = {len(g) for g in generators if not isinstance(g, Mapping)}
    if not isinstance(target, Mapping):
        dims.add(len(target))
    if len(dims) > 1:
        raise MalformedInput(f"dimension mismatch: {sorted(dims)}")
    rows = {}
    for idx, g in enumerate(gens):
        r = dict(g)
        comb = {idx: Fraction(1)}
        for pivot, (row, rcomb) in rows.items():
            c = r.get(pivot)
            if c:
                _axpy(r, -c, row)
                _axpy(comb, -c, rcomb)
        if r:
            pivot = next(iter(r))
            inv = Fraction(1) / r[pivot]
            rows[pivot] = ({k: c * inv for k, c in r.items()}, {k: c * inv for k, c in comb.items()})
    r = dict(tgt)
    comb = {}
    for pivot, (row, rcomb) in rows.items():
        c = r.get(pivot)
        if c:
            _axpy(r, -c, row)
            _axpy(comb, c, rcomb)
    if r:
        return None
    return [Fraction(comb.get(i, 0)) for i in range(len(gens))]


def _axpy(acc, a, x):
    for k, c in x.items():
        y = acc.get(k, 0) + a * c
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def _as_sparse(v):
    if isinstance(v, Mapping):
        return {k: c for k, c in v.items() if c}
    return {i: rational(c) for i, c in enumerate(v) if c}


# --------------------------------------------------------------------------
# formal series

class ZSeries:
    """Finitely supported formal series  sum_j c_j z^j  (j may be negative)."""

    __slots__ = ("coeffs", "var", "zero")

    def __init__(self, coeffs=None, var="z", zero=0):
        d = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, c in items:
                if not c:
                    continue
                c2 = d[e] + c if e in d else c
                if c2:
                    d[e] = c2
                else:
                    del d[e]
        self.coeffs = d
        self.var = var
        self.zero = zero

    def _new(self, d, var=None):
        return ZSeries(d, var or self.var, self.zero)

    def __getitem__(self, e):
        return self.coeffs.get(e, self.zero)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, ZSeries):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def items(self):
        return sorted(self.coeffs.items(), key=lambda t: t[0])

    def support(self):
        return sorted(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        d = dict(self.coeffs)
        for e, c in other.coeffs.items():
            d[e] = d[e] + c if e in d else c
        return self._new(d)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ZSeries):
            d = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    p = c1 * c2
                    e = e1 + e2
                    d[e] = d[e] + p if e in d else p
            zero = self.zero if not isinstance(self.zero, int) else other.zero
            return ZSeries(d, self.var, zero)
        return self._new({e: c * other for e, c in self.coeffs.items()})

    def __rmul__(self, scalar):
        return self._new({e: scalar * c for e, c in self.coeffs.items()})

    def map(self, fn):
        return self._new({e: fn(c) for e, c in self.coeffs.items()})

    def shift(self, k):
        """Multiply by z**k."""
        return self._new({e + k: c for e, c in self.coeffs.items()})

    def substitute_neg(self, var=None):
        """Series in -var:  c_j z^j -> c_j (-1)^j var^j."""
        return self._new({e: (c if e % 2 == 0 else -c) for e, c in self.coeffs.items()}, var)

    def to_json(self):
        return [{"exponent": e, "coefficient": to_jsonable(c)} for e, c in self.items()]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c!r})*{self.var}^{e}" for e, c in self.items())


def residue(s: ZSeries):
    return s[-1]


def derivative(s: ZSeries, times: int = 1) -> ZSeries:
    d = s.coeffs
    for _ in range(times):
        d = {e - 1: c * e for e, c in d.items() if e != 0}
    return s._new(d)


def negative_part(s: ZSeries, new_variable: str = "z") -> ZSeries:
    return ZSeries({e: c for e, c in s.coeffs.items() if e < 0}, new_variable, s.zero)


class BiSeries:
    """Finitely supported two-variable series keyed by (e1, e2)."""

    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs=None, zero=0):
        d = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for key, c in items:
                if not c:
                    continue
                c2 = d[key] + c if key in d else c
                if c2:
                    d[key] = c2
                else:
                    del d[key]
        self.coeffs = d
        self.zero = zero

    def __getitem__(self, key):
        return self.coeffs.get(key, self.zero)

    def __eq__(self, other):
        if isinstance(other, BiSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def __add__(self, other):
        d = dict(self.coeffs)
        for k, c in other.coeffs.items():
            d[k] = d[k] + c if k in d else c
        return BiSeries(d, self.zero)

    def __neg__(self):
        return BiSeries({k: -c for k, c in self.coeffs.items()}, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return BiSeries({k: c * scalar for k, c in self.coeffs.items()}, self.zero)

    __rmul__ = __mul__

    def support(self):
        return set(self.coeffs)

    def d1(self):
        """d/dz1."""
        return BiSeries({(e1 - 1, e2): c * e1 for (e1, e2), c in self.coeffs.items() if e1}, self.zero)

    def d2(self):
        return BiSeries({(e1, e2 - 1): c * e2 for (e1, e2), c in self.coeffs.items() if e2}, self.zero)

    def times_z2_series(self, s: ZSeries):
        """Multiply by a one-variable series in z2 whose coefficients are vectors."""
        d = {}
        for (e1, e2), c in self.coeffs.items():
            for e, v in s.coeffs.items():
                key = (e1, e2 + e)
                p = v * c
                d[key] = d[key] + p if key in d else p
        return BiSeries(d, s.zero)

    def times_scalar_constant(self, v):
        return BiSeries({k: v * c for k, c in self.coeffs.items()}, v.zero() if isinstance(v, Vector) else 0)


def delta_series(window: int) -> BiSeries:
    """delta(z1/z2) = sum_j z1^j z2^-j, materialized for |j| <= window."""
    return BiSeries({(j, -j): 1 for j in range(-window, window + 1)})


# --------------------------------------------------------------------------
# serialization

def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return rational_to_str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, Mapping):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return repr(x)


def series_from_json(items, coefficient=rational, var="z"):
    return ZSeries({int(it["exponent"]): coefficient(it["coefficient"]) for it in items}, var)
