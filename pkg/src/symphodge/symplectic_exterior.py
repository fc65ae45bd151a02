"""Exterior algebra of a symplectic vector space in a Darboux basis.

Basis covectors are indexed ``0 .. 2n-1``; index ``2i`` is the covector
usually written e^(i+1) and ``2i+1`` is f^(i+1), so that

    omega = sum_i  theta^(2i) ^ theta^(2i+1).

A *frame* is a strictly increasing tuple of indices and stands for the wedge
product of the corresponding basis covectors (or vectors, for multivectors).
The frame-level helpers in this module are shared with the model complexes,
whose forms are coefficient functions times frames.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Iterable, Mapping

from . import exact_linalg as la

__all__ = [
    "SymplecticSpace",
    "Multiform",
    "Multivector",
    "GradeError",
    "wedge_frames",
    "contract_frame",
    "bracket",
    "lefschetz_ops",
    "primitive_decompose",
    "direct_sum_star",
    "embed",
    "identity_suite",
    "direct_sum_suite",
]

Frame = tuple[int, ...]


class GradeError(ValueError):
    pass


def wedge_frames(I: Frame, J: Frame) -> tuple[int, Frame]:
    """theta^I ^ theta^J = sign * theta^K.  Returns (0, ()) when they overlap."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    if set(I) & set(J):
        return 0, ()
    # count pairs (i in I, j in J) with i > j: each is one transposition
    inv = 0
    pos = 0
    for j in J:
        while pos < len(I) and I[pos] < j:
            pos += 1
        inv += len(I) - pos
    return (-1 if inv % 2 else 1), tuple(sorted(I + J))


def contract_frame(j: int, I: Frame) -> tuple[int, Frame]:
    """iota(a_j) theta^I where a_j is the basis vector dual to theta^j."""
    try:
        p = I.index(j)
    except ValueError:
        return 0, ()
    return (-1 if p % 2 else 1), I[:p] + I[p + 1 :]


def _add_into(acc: dict, key, c) -> None:
    if not c:
        return
    y = acc.get(key, 0) + c
    if y:
        acc[key] = y
    else:
        acc.pop(key, None)


class _SparseGraded:
    """Shared arithmetic for Multiform and Multivector."""

    __slots__ = ("space", "terms")

    def __init__(self, space: SymplecticSpace, terms: Mapping[Frame, object] | None = None):
        self.space = space
        clean = {}
        for I, c in (terms or {}).items():
            I = tuple(I)
            if any(i < 0 or i >= space.dim for i in I) or list(I) != sorted(set(I)):
                raise ValueError(f"bad frame {I} for dimension {space.dim}")
            c = Fraction(c)
            if c:
                clean[I] = c
        self.terms = clean

    @classmethod
    def _raw(cls, space, terms):
        obj = cls.__new__(cls)
        obj.space = space
        obj.terms = terms
        return obj

    @classmethod
    def basis(cls, space: SymplecticSpace, i: int):
        return cls._raw(space, {(i,): Fraction(1)})

    @classmethod
    def zero(cls, space):
        return cls._raw(space, {})

    def _check(self, other):
        if type(other) is not type(self) or other.space != self.space:
            raise TypeError("operands live in different spaces")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for I, c in other.terms.items():
            _add_into(acc, I, c)
        return self._raw(self.space, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._raw(self.space, {I: -c for I, c in self.terms.items()})

    def __mul__(self, s):
        s = Fraction(s)
        if not s:
            return self.zero(self.space)
        return self._raw(self.space, {I: s * c for I, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / Fraction(s))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return type(other) is type(self) and self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def wedge(self, other):
        self._check(other)
        acc: dict = {}
        for I, a in self.terms.items():
            for J, b in other.terms.items():
                s, K = wedge_frames(I, J)
                if s:
                    _add_into(acc, K, s * a * b)
        return self._raw(self.space, acc)

    __xor__ = wedge

    def grades(self) -> set[int]:
        return {len(I) for I in self.terms}

    @property
    def grade(self) -> int:
        g = self.grades()
        if len(g) > 1:
            raise GradeError("element is not homogeneous")
        return g.pop() if g else 0

    def part(self, k: int):
        return self._raw(self.space, {I: c for I, c in self.terms.items() if len(I) == k})

    def to_json(self) -> dict:
        return {
            "n": self.space.n,
            "terms": [
                {"idx": list(I), "num": str(c.numerator), "den": str(c.denominator)}
                for I, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping):
        space = SymplecticSpace(int(data["n"]))
        return cls(space, {tuple(t["idx"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]})

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        parts = [f"{c}*{list(I)}" for I, c in sorted(self.terms.items())]
        return f"{type(self).__name__}({' + '.join(parts)})"


class Multiform(_SparseGraded):
    """Element of the exterior algebra of V*."""

    __slots__ = ()

    @classmethod
    def one(cls, space):
        return cls._raw(space, {(): Fraction(1)})


class Multivector(_SparseGraded):
    """Element of the exterior algebra of V."""

    __slots__ = ()


class SymplecticSpace:
    """(V, omega) of dimension 2n with omega in Darboux form."""

    _cache: dict = {}

    def __new__(cls, n: int):
        if n < 0:
            raise ValueError("half-dimension must be nonnegative")
        obj = cls._cache.get(n)
        if obj is None:
            obj = super().__new__(cls)
            obj.n = n
            cls._cache[n] = obj
        return obj

    def __getnewargs__(self):
        return (self.n,)

    def __repr__(self):
        return f"SymplecticSpace({self.n})"

    @property
    def dim(self) -> int:
        return 2 * self.n

    def frames(self, k: int) -> list[Frame]:
        return list(combinations(range(self.dim), k))

    # omega on V in the basis a_0..a_{2n-1} dual to theta^0..theta^{2n-1}
    def omega_V(self, i: int, j: int) -> int:
        if i // 2 != j // 2 or i == j:
            return 0
        return 1 if i % 2 == 0 else -1

    def omega_on_vectors(self, a: Multivector, b: Multivector) -> Fraction:
        if a.grade != 1 or b.grade != 1:
            raise GradeError("omega pairs vectors")
        return sum(
            (x * y * self.omega_V(I[0], J[0]) for I, x in a.terms.items() for J, y in b.terms.items()),
            Fraction(0),
        )

    @cached_property
    def _flat_matrix(self) -> la.RatMatrix:
        # (a^flat)_j = omega(a, a_j)
        return la.RatMatrix(
            self.dim, self.dim, {(j, i): self.omega_V(i, j) for i in range(self.dim) for j in range(self.dim)}
        )

    @cached_property
    def _sharp_columns(self) -> list[dict]:
        cols = []
        for j in range(self.dim):
            e = [0] * self.dim
            e[j] = 1
            cols.append(la.as_sparse(la.solve(self._flat_matrix, e)))
        return cols

    def sharp_index(self, j: int) -> dict:
        """Coordinates of (theta^j)^sharp in the basis a_0..a_{2n-1}."""
        return self._sharp_columns[j]

    def flat(self, a: Multivector) -> Multiform:
        if a and a.grade != 1:
            raise GradeError("flat takes a vector")
        out = {}
        for (i,), c in a.terms.items():
            for j in range(self.dim):
                _add_into(out, (j,), c * self.omega_V(i, j))
        return Multiform._raw(self, out)

    def sharp(self, u: Multiform) -> Multivector:
        if u and u.grade != 1:
            raise GradeError("sharp takes a covector")
        out = {}
        for (j,), c in u.terms.items():
            for i, x in self.sharp_index(j).items():
                _add_into(out, (i,), c * x)
        return Multivector._raw(self, out)

    @cached_property
    def gram1(self) -> list[list[Fraction]]:
        """omega(theta^i, theta^j) = omega(theta^i sharp, theta^j sharp)."""
        d = self.dim
        out = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                si, sj = self.sharp_index(i), self.sharp_index(j)
                out[i][j] = sum((x * y * self.omega_V(p, q) for p, x in si.items() for q, y in sj.items()), Fraction(0))
        return out

    @lru_cache(maxsize=None)
    def pairing_frames(self, I: Frame, J: Frame) -> Fraction:
        if len(I) != len(J):
            raise GradeError("pairing needs equal grades")
        g = self.gram1
        return la.determinant([[g[i][j] for j in J] for i in I])

    def pairing(self, u: Multiform, w: Multiform) -> Fraction:
        if u and w and u.grade != w.grade:
            raise GradeError("pairing needs equal grades")
        return sum(
            (a * b * self.pairing_frames(I, J) for I, a in u.terms.items() for J, b in w.terms.items()),
            Fraction(0),
        )

    @cached_property
    def omega(self) -> Multiform:
        return Multiform._raw(self, {(2 * i, 2 * i + 1): Fraction(1) for i in range(self.n)})

    def omega_power(self, k: int) -> Multiform:
        """omega^k / k!"""
        out = Multiform.one(self)
        for _ in range(k):
            out = out.wedge(self.omega)
        return out / factorial(k)

    @property
    def volume_frame(self) -> Frame:
        return tuple(range(self.dim))

    @cached_property
    def volume(self) -> Multiform:
        return self.omega_power(self.n)

    @cached_property
    def pi(self) -> Multivector:
        """The Poisson bivector omega^sharp."""
        out = Multivector.zero(self)
        for (i, j), c in self.omega.terms.items():
            a = self.sharp(Multiform.basis(self, i))
            b = self.sharp(Multiform.basis(self, j))
            out = out + c * a.wedge(b)
        return out

    # -- star ---------------------------------------------------------------

    @lru_cache(maxsize=None)
    def _star_table(self, k: int) -> dict:
        """Solve u ^ *v = omega(u, v) omega^n/n! for every basis k-form v."""
        rows = self.frames(k)
        cols = self.frames(self.dim - k)
        vol_frame, vol_coeff = next(iter(self.volume.terms.items()))
        ent = {}
        for r, K in enumerate(rows):
            for c, J in enumerate(cols):
                s, L = wedge_frames(K, J)
                if s:
                    assert L == vol_frame
                    ent[(r, c)] = s
        M = la.RatMatrix(len(rows), len(cols), ent)
        el = M.eliminator()
        table = {}
        for I in rows:
            rhs = {r: self.pairing_frames(K, I) * vol_coeff for r, K in enumerate(rows)}
            x = el.express(rhs)
            if x is None:
                raise ArithmeticError("star defining system is inconsistent")
            table[I] = {cols[c]: v for c, v in x.items() if v}
        return table

    def star_frame(self, I: Frame) -> dict:
        return self._star_table(len(I))[I]

    def star(self, u: Multiform) -> Multiform:
        out: dict = {}
        for I, c in u.terms.items():
            for J, x in self.star_frame(I).items():
                _add_into(out, J, c * x)
        return Multiform._raw(self, out)

    # -- eps / iota ---------------------------------------------------------

    def eps(self, u: Multiform) -> Callable[[Multiform], Multiform]:
        return lambda x: u.wedge(x)

    def iota(self, a: Multivector) -> Callable[[Multiform], Multiform]:
        def op(x: Multiform) -> Multiform:
            out: dict = {}
            for A, c in a.terms.items():
                for I, y in x.terms.items():
                    s, J = 1, I
                    # iota(a1 ^ a2 ^ ...) = ... o iota(a2) o iota(a1)
                    for j in A:
                        t, J = contract_frame(j, J)
                        s *= t
                        if not s:
                            break
                    if s:
                        _add_into(out, J, s * c * y)
            return Multiform._raw(self, out)

        return op

    @lru_cache(maxsize=None)
    def iota_pi_frame(self, I: Frame) -> dict:
        res = self.iota(self.pi)(Multiform._raw(self, {I: Fraction(1)}))
        return res.terms

    def basis_forms(self, k: int) -> list[Multiform]:
        return [Multiform._raw(self, {I: Fraction(1)}) for I in self.frames(k)]


def bracket(P: Callable, Q: Callable) -> Callable:
    """Plain commutator P Q - Q P of linear operators."""
    return lambda x: P(Q(x)) - Q(P(x))


def lefschetz_ops(space: SymplecticSpace):
    """(L, Lambda, A) = (eps(omega), iota(pi), [Lambda, L])."""
    L = space.eps(space.omega)
    Lam = space.iota(space.pi)
    return L, Lam, bracket(Lam, L)


def primitive_decompose(u: Multiform) -> list[tuple[int, Multiform]]:
    """Write a homogeneous u as sum_j L^j p_j with iota(pi) p_j = 0."""
    if not u:
        return []
    space = u.space
    k = u.grade
    if k > space.dim:
        raise GradeError("grade exceeds dimension")
    L, Lam, _ = lefschetz_ops(space)
    columns, labels = [], []
    for j in range(k // 2 + 1):
        g = k - 2 * j
        basis = space.basis_forms(g)
        M = la.RatMatrix.from_columns(
            len(space.frames(g - 2)) if g >= 2 else 0,
            [_coords(Lam(b), space.frames(g - 2)) for b in basis],
        ) if g >= 2 else None
        prim = [b for b in basis] if M is None else [
            _from_coords(space, v, space.frames(g)) for v in la.kernel(M).basis
        ]
        for p in prim:
            img = p
            for _ in range(j):
                img = L(img)
            if img:
                columns.append(img.terms)
                labels.append((j, p))
    el = la.Eliminator()
    for idx, col in enumerate(columns):
        el.add(col, idx)
    coeffs = el.express(u.terms)
    if coeffs is None:
        raise ArithmeticError("Lefschetz decomposition failed")
    parts: dict[int, Multiform] = {}
    for idx, c in coeffs.items():
        j, p = labels[idx]
        parts[j] = parts.get(j, Multiform.zero(space)) + c * p
    return [(j, p) for j, p in sorted(parts.items()) if p]


def _coords(x: Multiform, frames: list[Frame]) -> dict:
    index = {I: r for r, I in enumerate(frames)}
    return {index[I]: c for I, c in x.terms.items()}


def _from_coords(space, v: Mapping, frames: list[Frame]) -> Multiform:
    return Multiform(space, {frames[i]: c for i, c in v.items()})


def embed(u: Multiform, target: SymplecticSpace, offset: int) -> Multiform:
    """Push a form on a summand into the direct sum, shifting indices."""
    return Multiform._raw(target, {tuple(i + offset for i in I): c for I, c in u.terms.items()})


def direct_sum_star(u1: Multiform, u2: Multiform, variant: str = "signed") -> Multiform:
    """Star of u1 ^ u2 on V1 + V2 assembled from the factor stars.

    ``variant="signed"`` uses (-1)^(k1 k2) (*u1) ^ (*u2); ``"swapped"`` uses
    (*u2) ^ (*u1).  Both must agree with the star of the direct sum.
    """
    s1, s2 = u1.space, u2.space
    V = SymplecticSpace(s1.n + s2.n)
    a = embed(s1.star(u1), V, 0)
    b = embed(s2.star(u2), V, s1.dim)
    if variant == "signed":
        k1 = u1.grade
        k2 = u2.grade
        return (-1) ** (k1 * k2) * a.wedge(b)
    if variant == "swapped":
        return b.wedge(a)
    raise ValueError(f"unknown variant {variant!r}")


def identity_suite(space: SymplecticSpace) -> dict[str, list]:
    """Exhaustive check of the pointwise identities on every basis element.

    Returns identity name -> list of failing inputs (empty when it holds).
    """
    n, N = space.n, space.dim
    L, _, A = lefschetz_ops(space)
    vol = space.volume
    fails: dict[str, list] = {
        "adjoint": [],
        "star_involution": [],
        "star_defining": [],
        "star_exp_omega": [],
        "lefschetz_A": [],
        "pairing_symmetry": [],
    }
    bases = [space.basis_forms(k) for k in range(N + 1)]
    for k in range(N + 1):
        for x in bases[k]:
            if space.star(space.star(x)) != x:
                fails["star_involution"].append(x)
            if A(x) != (n - k) * x:
                fails["lefschetz_A"].append(x)
            for y in bases[k]:
                p = space.pairing(x, y)
                if p != (-1) ** k * space.pairing(y, x):
                    fails["pairing_symmetry"].append((x, y))
                if x.wedge(space.star(y)) != p * vol:
                    fails["star_defining"].append((x, y))
            if k < N:
                for u in bases[1]:
                    minus_iota = space.iota(-space.sharp(u))
                    for y in bases[k + 1]:
                        if space.pairing(u.wedge(x), y) != space.pairing(x, minus_iota(y)):
                            fails["adjoint"].append((u, x, y))
    for k in range(n + 1):
        if space.star(space.omega_power(k)) != space.omega_power(n - k):
            fails["star_exp_omega"].append(k)
    return fails


def direct_sum_suite(n1: int, n2: int) -> dict[str, list]:
    """Star of the direct sum against both assembled variants."""
    s1, s2 = SymplecticSpace(n1), SymplecticSpace(n2)
    V = SymplecticSpace(n1 + n2)
    fails: dict[str, list] = {"signed": [], "swapped": []}
    for k1 in range(s1.dim + 1):
        for u1 in s1.basis_forms(k1):
            for k2 in range(s2.dim + 1):
                for u2 in s2.basis_forms(k2):
                    full = V.star(embed(u1, V, 0).wedge(embed(u2, V, s1.dim)))
                    for variant in fails:
                        if direct_sum_star(u1, u2, variant) != full:
                            fails[variant].append((u1, u2))
    return fails
