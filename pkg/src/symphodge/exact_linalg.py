"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`.  Vectors are sparse
``dict`` objects mapping a coordinate (any hashable key) to a nonzero
coefficient; dense sequences are accepted wherever a vector is expected.

The workhorse is :class:`Eliminator`, an incremental column-echelon form
computed with fraction-free integer arithmetic.  Each stored vector carries
the combination of inserted vectors that produced it, so a single pass gives
ranks, kernels, particular solutions and coset representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence

__all__ = [
    "RatMatrix",
    "Subspace",
    "Eliminator",
    "DimensionMismatch",
    "NotASubspace",
    "as_sparse",
    "to_dense",
    "kernel",
    "image",
    "rank",
    "solve",
    "membership",
    "quotient_dim",
    "coset_representatives",
    "determinant",
]

PIVOTS = ("first", "last")


class DimensionMismatch(ValueError):
    pass


class NotASubspace(ValueError):
    """Raised by :func:`quotient_dim` when the smaller space is not contained
    in the larger one (the complex axioms were violated upstream)."""


def as_sparse(v) -> dict:
    if isinstance(v, Mapping):
        return {k: Fraction(c) for k, c in v.items() if c}
    return {i: Fraction(c) for i, c in enumerate(v) if c}


def to_dense(v: Mapping, n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, c in v.items():
        out[i] = Fraction(c)
    return out


def _integerize(v: Mapping) -> tuple[dict, int]:
    """Return (w, D) with integer w = D * v."""
    den = 1
    for c in v.values():
        den = lcm(den, Fraction(c).denominator)
    w = {}
    for k, c in v.items():
        c = Fraction(c)
        if c:
            w[k] = c.numerator * (den // c.denominator)
    return w, den


def _content(*parts) -> int:
    g = 0
    for part in parts:
        if isinstance(part, int):
            g = gcd(g, part)
        else:
            for c in part.values():
                g = gcd(g, c)
                if g == 1:
                    return 1
    return g


class Eliminator:
    """Incremental echelon form over arbitrary hashable coordinates.

    ``pivot="first"`` picks the earliest-seen coordinate of a reduced vector as
    its pivot, ``"last"`` the latest.  Coordinates are ordered by first
    appearance unless ``order`` pre-registers them.
    """

    def __init__(self, pivot: str = "first", order: Iterable[Hashable] = ()):
        if pivot not in PIVOTS:
            raise ValueError(f"unknown pivot strategy {pivot!r}")
        self.pivot = pivot
        self._order: dict = {}
        for k in order:
            self._order.setdefault(k, len(self._order))
        # (pivot key, integer vector, integer combination over tags)
        self._rows: list[tuple[Hashable, dict, dict]] = []
        self._pivot_keys: set = set()

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _rank_of(self, key) -> int:
        r = self._order.get(key)
        if r is None:
            r = self._order[key] = len(self._order)
        return r

    def _reduce(self, v: dict, c: dict, s: int) -> tuple[dict, dict, int]:
        # invariant maintained: M.c == v + s.b
        for p, e, ce in self._rows:
            a = v.get(p)
            if not a:
                continue
            b = e[p]
            g = gcd(a, b)
            ma, mb = b // g, a // g
            if ma != 1:
                for k in v:
                    v[k] *= ma
                for k in c:
                    c[k] *= ma
                s *= ma
            for k, x in e.items():
                y = v.get(k, 0) - mb * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
            for k, x in ce.items():
                y = c.get(k, 0) - mb * x
                if y:
                    c[k] = y
                else:
                    c.pop(k, None)
            g = _content(v, c, s)
            if g > 1:
                v = {k: x // g for k, x in v.items()}
                c = {k: x // g for k, x in c.items()}
                s //= g
        return v, c, s

    def add(self, vector, tag: Hashable = None) -> dict | None:
        """Insert ``vector`` labelled ``tag``.

        Returns ``None`` when the vector is independent of those already
        inserted; otherwise the linear relation (tag -> coefficient) among the
        inserted vectors that it exposes.
        """
        if tag is None:
            tag = ("_auto", len(self._order), self.rank)
        w, den = _integerize(as_sparse(vector))
        for k in w:
            self._rank_of(k)
        v, c, _ = self._reduce(w, {tag: den}, 0)
        if v:
            keys = sorted(v, key=self._rank_of)
            p = keys[0] if self.pivot == "first" else keys[-1]
            g = _content(v, c)
            if v[p] < 0:
                g = -g
            v = {k: x // g for k, x in v.items()}
            c = {k: x // g for k, x in c.items()}
            self._rows.append((p, v, c))
            self._pivot_keys.add(p)
            return None
        return _primitive(c)

    def express(self, vector) -> dict | None:
        """Coefficients (tag -> Fraction) writing ``vector`` as a combination
        of inserted vectors, or ``None`` when it is outside their span."""
        w, den = _integerize(as_sparse(vector))
        v, c, s = self._reduce({k: -x for k, x in w.items()}, {}, den)
        if v:
            return None
        return {k: Fraction(x, s) for k, x in c.items()}

    def contains(self, vector) -> bool:
        w, den = _integerize(as_sparse(vector))
        v, _, _ = self._reduce(w, {}, 0)
        return not v

    def residual(self, vector) -> dict:
        """A vector congruent to ``vector`` modulo the span, zero iff inside."""
        w, den = _integerize(as_sparse(vector))
        v, _, _ = self._reduce(w, {}, 0)
        return {k: Fraction(x, den) for k, x in v.items()}


def _primitive(c: dict) -> dict:
    """Scale an integer relation to coprime entries, first entry positive."""
    g = _content(c)
    first = next(iter(sorted(c, key=_sort_key)))
    if c[first] < 0:
        g = -g
    return {k: Fraction(x // g) for k, x in c.items()}


def _sort_key(k):
    return (0, k, "") if isinstance(k, int) else (1, 0, repr(k))


@dataclass(frozen=True)
class RatMatrix:
    """Sparse rational matrix; zero entries are never stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), x in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            x = Fraction(x)
            if x:
                clean[(i, j)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RatMatrix:
        m = len(rows)
        n = len(rows[0]) if m else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionMismatch("ragged rows")
            for j, x in enumerate(row):
                if x:
                    ent[(i, j)] = x
        return cls(m, n, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping]) -> RatMatrix:
        ent = {}
        for j, col in enumerate(columns):
            for i, x in as_sparse(col).items():
                ent[(i, j)] = x
        return cls(rows, len(columns), ent)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, {})

    @cached_property
    def _columns(self) -> list[dict]:
        cols = [{} for _ in range(self.cols)]
        for (i, j), x in self.entries.items():
            cols[j][i] = x
        return cols

    def column(self, j: int) -> dict:
        return dict(self._columns[j])

    def matvec(self, x) -> list[Fraction]:
        x = as_sparse(x)
        out = [Fraction(0)] * self.rows
        for (i, j), a in self.entries.items():
            if j in x:
                out[i] += a * x[j]
        return out

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def eliminator(self, pivot: str = "first") -> Eliminator:
        el = Eliminator(pivot, order=range(self.rows))
        for j in range(self.cols):
            el.add(self._columns[j], j)
        return el


@dataclass(frozen=True)
class Subspace:
    """A subspace given by independent sparse basis vectors."""

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable) -> Subspace:
        el = Eliminator(order=range(ambient_dim))
        kept = []
        for v in vectors:
            v = as_sparse(v)
            if el.add(v) is None:
                kept.append(v)
        return cls(ambient_dim, tuple(kept))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _eliminator(self) -> Eliminator:
        el = Eliminator(order=range(self.ambient_dim))
        for i, v in enumerate(self.basis):
            if el.add(v, i) is not None:
                raise ValueError("subspace basis is linearly dependent")
        return el

    def __contains__(self, v) -> bool:
        return self._eliminator.contains(v)

    def coordinates(self, v) -> list[Fraction] | None:
        c = self._eliminator.express(v)
        if c is None:
            return None
        return [c.get(i, Fraction(0)) for i in range(self.dim)]

    def dense_basis(self) -> list[list[Fraction]]:
        return [to_dense(v, self.ambient_dim) for v in self.basis]


def kernel(M: RatMatrix, pivot: str = "first") -> Subspace:
    el = Eliminator(pivot, order=range(M.rows))
    basis = []
    for j in range(M.cols):
        rel = el.add(M._columns[j], j)
        if rel is not None:
            basis.append(rel)
    return Subspace(M.cols, tuple(basis))


def image(M: RatMatrix) -> Subspace:
    return Subspace.span(M.rows, M._columns)


def rank(M: RatMatrix) -> int:
    return M.eliminator().rank


def solve(M: RatMatrix, b, pivot: str = "first") -> list[Fraction] | None:
    """Some ``x`` with ``M x = b`` or ``None`` if the system is inconsistent."""
    if len(b) != M.rows:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {M.rows}")
    coeffs = M.eliminator(pivot).express(b)
    if coeffs is None:
        return None
    x = to_dense(coeffs, M.cols)
    assert M.matvec(x) == [Fraction(y) for y in b]
    return x


def membership(S: Subspace, v) -> bool:
    if not isinstance(v, Mapping) and len(v) != S.ambient_dim:
        raise DimensionMismatch("vector length differs from ambient dimension")
    return v in S


def quotient_dim(A: Subspace, B: Subspace) -> int:
    if A.ambient_dim != B.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    for v in A.basis:
        if v not in B:
            raise NotASubspace("first argument is not contained in the second")
    return B.dim - A.dim


def coset_representatives(A_basis: Iterable, B_basis: Iterable) -> list[dict]:
    """Elements of ``B_basis`` whose classes form a basis of span(B)/span(A).

    ``span(A) <= span(B)`` is assumed, not checked.
    """
    el = Eliminator()
    for v in A_basis:
        el.add(v)
    reps = []
    for v in B_basis:
        v = as_sparse(v)
        if el.add(v) is None:
            reps.append(v)
    return reps


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Bareiss fraction-free determinant (entries cleared to integers first)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    a = [[int(Fraction(x) * den) for x in row] for row in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den**n)
