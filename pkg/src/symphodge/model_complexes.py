"""Finite-dimensional models of (invariant) de Rham complexes.

A form on a model is a finite sum of terms ``coefficient * frame``: the
coefficient is a basis function of the model's function ring and the frame is
a wedge of global Darboux coframe 1-forms (see :mod:`symplectic_exterior`).
Because omega has constant coefficients in the coframe, the star, the
contraction by the Poisson bivector and the omega-pairing all act on frames
alone.  Operators act on unbounded sparse forms exactly; only the linear
algebra sees a finite basis, chosen so that d and delta never leave it.

Three models are provided:

* :func:`flat_torus` -- T^2n with circle coordinates of period 1 and
  trigonometric-polynomial coefficients;
* :func:`sphere_s1` -- the S^1-invariant forms on S^2 with polynomial
  coefficients in the height z;
* :func:`kodaira_thurston` -- the Chevalley-Eilenberg complex of the
  nilpotent Lie algebra of the Kodaira-Thurston nilmanifold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import factorial
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .symplectic_exterior import (
    Frame,
    SymplecticSpace,
    _add_into,
    contract_frame,
    wedge_frames,
)

__all__ = [
    "Form",
    "ModelComplex",
    "GroupData",
    "TrigRing",
    "PolyZRing",
    "ConstRing",
    "ModelError",
    "flat_torus",
    "sphere_s1",
    "kodaira_thurston",
    "ce_complex",
    "build_model",
    "MODEL_NAMES",
]


class ModelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient rings


class TrigRing:
    """Real trigonometric polynomials on R^m / Z^m.

    A key ``(k, "c")`` is cos(2 pi k.t) and ``(k, "s")`` is sin(2 pi k.t), with
    the first nonzero entry of ``k`` positive.  Derivatives are taken with
    respect to 2 pi t, so the factor 2 pi never appears: the model's d is
    the de Rham differential divided by 2 pi, which has the same kernel and
    image.
    """

    def __init__(self, m: int):
        self.m = m
        self.one = ((0,) * m, "c")

    def normalize(self, k: Sequence[int], kind: str) -> tuple[int, tuple | None]:
        k = tuple(k)
        nz = next((x for x in k if x), 0)
        if nz == 0:
            return (1, (k, "c")) if kind == "c" else (0, None)
        if nz < 0:
            k = tuple(-x for x in k)
            return (1 if kind == "c" else -1), (k, kind)
        return 1, (k, kind)

    def mul(self, a, b) -> dict:
        (ka, ta), (kb, tb) = a, b
        plus = tuple(x + y for x, y in zip(ka, kb))
        minus = tuple(x - y for x, y in zip(ka, kb))
        half = Fraction(1, 2)
        if ta == "c" and tb == "c":
            parts = [(half, minus, "c"), (half, plus, "c")]
        elif ta == "s" and tb == "s":
            parts = [(half, minus, "c"), (-half, plus, "c")]
        elif ta == "s":
            parts = [(half, plus, "s"), (half, minus, "s")]
        else:
            parts = [(half, plus, "s"), (-half, minus, "s")]
        out: dict = {}
        for c, k, t in parts:
            s, key = self.normalize(k, t)
            if s:
                _add_into(out, key, c * s)
        return out

    def partial(self, a, j: int) -> dict:
        k, t = a
        kj = k[j]
        if not kj:
            return {}
        if t == "c":
            return {(k, "s"): Fraction(-kj)}
        return {(k, "c"): Fraction(kj)}

    def integral(self, a) -> Fraction:
        return Fraction(1) if a == self.one else Fraction(0)

    def describe(self, a) -> dict:
        return {"freq": list(a[0]), "kind": "cos" if a[1] == "c" else "sin"}

    def parse(self, d: Mapping):
        s, key = self.normalize(d["freq"], "c" if d["kind"] == "cos" else "s")
        if s != 1:
            raise ModelError(f"non-normalized coefficient descriptor {d}")
        return key

    def sort_key(self, a):
        return (a[0], a[1])

    def keys(self, bound: int) -> list:
        out = [self.one]
        for k in product(range(-bound, bound + 1), repeat=self.m):
            nz = next((x for x in k if x), 0)
            if nz > 0:
                out.append((k, "c"))
                out.append((k, "s"))
        return out

    def label(self, a) -> str:
        k, t = a
        if a == self.one:
            return "1"
        arg = "+".join(f"{x}t{i}" for i, x in enumerate(k) if x)
        return f"{'cos' if t == 'c' else 'sin'}({arg})"


class PolyZRing:
    """Polynomials in the height z; ``deriv_index`` is the coframe slot of dz."""

    def __init__(self, deriv_index: int):
        self.deriv_index = deriv_index
        self.one = 0

    def mul(self, a: int, b: int) -> dict:
        return {a + b: Fraction(1)}

    def partial(self, a: int, j: int) -> dict:
        if j != self.deriv_index or a == 0:
            return {}
        return {a - 1: Fraction(a)}

    def integral(self, a: int) -> Fraction:
        # integral over [-1, 1] of z^a; theta has period 1
        return Fraction(2, a + 1) if a % 2 == 0 else Fraction(0)

    def describe(self, a: int) -> dict:
        return {"z": a}

    def parse(self, d: Mapping) -> int:
        return int(d["z"])

    def sort_key(self, a):
        return a

    def label(self, a: int) -> str:
        return "1" if a == 0 else ("z" if a == 1 else f"z^{a}")


class ConstRing:
    """Constant coefficients (left-invariant forms)."""

    one = ()

    def mul(self, a, b) -> dict:
        return {(): Fraction(1)}

    def partial(self, a, j) -> dict:
        return {}

    def integral(self, a) -> Fraction:
        return Fraction(1)

    def describe(self, a) -> dict:
        return {}

    def parse(self, d) -> tuple:
        return ()

    def sort_key(self, a):
        return 0

    def label(self, a) -> str:
        return "1"


# ---------------------------------------------------------------------------
# forms


class Form:
    """Sparse form on a model: terms (coefficient key, frame) -> Fraction."""

    __slots__ = ("model", "terms")

    def __init__(self, model: ModelComplex, terms: Mapping | None = None):
        self.model = model
        self.terms = {}
        for key, c in (terms or {}).items():
            _add_into(self.terms, key, Fraction(c))

    @classmethod
    def _raw(cls, model, terms):
        obj = cls.__new__(cls)
        obj.model = model
        obj.terms = terms
        return obj

    def _check(self, other):
        if not isinstance(other, Form) or other.model is not self.model:
            raise TypeError("forms live on different models")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(acc, k, c)
        return Form._raw(self.model, acc)

    def __sub__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(acc, k, -c)
        return Form._raw(self.model, acc)

    def __neg__(self):
        return Form._raw(self.model, {k: -c for k, c in self.terms.items()})

    def __mul__(self, s):
        if isinstance(s, Form):
            return self.model.wedge(self, s)
        s = Fraction(s)
        if not s:
            return Form._raw(self.model, {})
        return Form._raw(self.model, {k: s * c for k, c in self.terms.items()})

    def __rmul__(self, s):
        return self * s

    def __truediv__(self, s):
        return self * (1 / Fraction(s))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return isinstance(other, Form) and other.model is self.model and other.terms == self.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def grades(self) -> set[int]:
        return {len(I) for _, I in self.terms}

    @property
    def grade(self) -> int:
        g = self.grades()
        if len(g) > 1:
            raise ModelError("form is not homogeneous")
        return g.pop() if g else 0

    def part(self, k: int) -> Form:
        return Form._raw(self.model, {key: c for key, c in self.terms.items() if len(key[1]) == k})

    def to_json(self) -> dict:
        ring = self.model.ring
        g = self.grades()
        items = sorted(self.terms.items(), key=lambda kv: (kv[0][1], ring.sort_key(kv[0][0])))
        return {
            "grade": g.pop() if len(g) == 1 else None,
            "terms": [
                {
                    "coeff": ring.describe(a),
                    "frame": list(I),
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
                for (a, I), c in items
            ],
        }

    def __repr__(self):
        return f"Form({self.model.pretty(self)})"


@dataclass
class GroupData:
    """A Hamiltonian torus action: generating fields and moment map components.

    ``fields[q]`` is the field induced by the Lie-algebra basis element xi_q,
    given as pointwise coordinates {(coefficient key, vector index): value};
    ``moment[q]`` is the function phi(xi_q).
    """

    fields: list[dict]
    moment: list[Form]
    trivial: bool = False

    @property
    def rank(self) -> int:
        return len(self.fields)


class ModelComplex:
    """A model complex with operators d, star, delta, wedge, iota, integrate."""

    def __init__(
        self,
        name: str,
        n: int,
        ring,
        basis_fn: Callable[[ModelComplex, int, int], list[Form]],
        *,
        frame_d: Mapping[int, Mapping[Frame, Fraction]] | None = None,
        lefschetz_expected: bool = True,
        admissible: Callable[[Form], bool] | None = None,
        params: Mapping | None = None,
        frame_labels: Sequence[str] | None = None,
    ):
        self.name = name
        self.space = SymplecticSpace(n)
        self.n = n
        self.ring = ring
        self._basis_fn = basis_fn
        self.frame_d = {i: dict(v) for i, v in (frame_d or {}).items() if v}
        self.lefschetz_expected = lefschetz_expected
        self._admissible = admissible
        self.params = dict(params or {})
        self.frame_labels = list(frame_labels or [f"th{i}" for i in range(2 * n)])
        self.group: GroupData | None = None
        self._basis_cache: dict = {}

    def __repr__(self):
        return f"ModelComplex({self.name!r})"

    # -- construction helpers -------------------------------------------------

    def form(self, terms: Mapping) -> Form:
        return Form(self, terms)

    def zero(self) -> Form:
        return Form._raw(self, {})

    def function(self, key, c=1) -> Form:
        return Form(self, {(key, ()): c})

    def one(self) -> Form:
        return self.function(self.ring.one)

    def coframe(self, *idx: int) -> Form:
        out = self.one()
        for i in idx:
            out = self.wedge(out, Form(self, {(self.ring.one, (i,)): 1}))
        return out

    @cached_property
    def omega(self) -> Form:
        return Form(self, {(self.ring.one, I): c for I, c in self.space.omega.terms.items()})

    def omega_power(self, k: int) -> Form:
        out = self.one()
        for _ in range(k):
            out = self.wedge(out, self.omega)
        return out / factorial(k)

    @cached_property
    def volume(self) -> Form:
        return self.omega_power(self.n)

    def descriptor(self) -> dict:
        return {"name": self.name, "n": self.n, **self.params}

    # -- basis ----------------------------------------------------------------

    def basis(self, k: int, extra: int = 0) -> list[Form]:
        """Finite basis of the truncated grade-k piece; ``extra`` enlarges the
        truncation (used for polynomial-weighted equivariant components)."""
        if k < 0 or k > 2 * self.n:
            return []
        key = (k, extra)
        b = self._basis_cache.get(key)
        if b is None:
            b = self._basis_cache[key] = self._basis_fn(self, k, extra)
        return b

    def is_admissible(self, alpha: Form) -> bool:
        return True if self._admissible is None else self._admissible(alpha)

    # -- pointwise algebra ----------------------------------------------------

    def _ring_mul(self, a, b) -> dict:
        return self.ring.mul(a, b)

    def wedge(self, alpha: Form, beta: Form) -> Form:
        acc: dict = {}
        for (a, I), x in alpha.terms.items():
            for (b, J), y in beta.terms.items():
                s, K = wedge_frames(I, J)
                if not s:
                    continue
                for c, z in self._ring_mul(a, b).items():
                    _add_into(acc, (c, K), s * x * y * z)
        return Form._raw(self, acc)

    def star(self, alpha: Form) -> Form:
        acc: dict = {}
        for (a, I), x in alpha.terms.items():
            for J, y in self.space.star_frame(I).items():
                _add_into(acc, (a, J), x * y)
        return Form._raw(self, acc)

    def iota_pi(self, alpha: Form) -> Form:
        acc: dict = {}
        for (a, I), x in alpha.terms.items():
            for J, y in self.space.iota_pi_frame(I).items():
                _add_into(acc, (a, J), x * y)
        return Form._raw(self, acc)

    def iota(self, field: Mapping, alpha: Form) -> Form:
        """Contraction by a vector field {(coefficient key, index): value}."""
        acc: dict = {}
        for (f, j), x in field.items():
            for (a, I), y in alpha.terms.items():
                s, J = contract_frame(j, I)
                if not s:
                    continue
                for c, z in self._ring_mul(f, a).items():
                    _add_into(acc, (c, J), s * x * y * z)
        return Form._raw(self, acc)

    def sharp_field(self, alpha: Form) -> dict:
        """Pointwise sharp of a 1-form, as a vector field."""
        out: dict = {}
        for (a, I), x in alpha.terms.items():
            if len(I) != 1:
                raise ModelError("sharp takes a 1-form")
            for i, y in self.space.sharp_index(I[0]).items():
                _add_into(out, (a, i), x * y)
        return out

    def hamiltonian_field(self, f: Form) -> dict:
        """v_f = (df)^sharp."""
        return self.sharp_field(self.d(f))

    # -- differentials --------------------------------------------------------

    @lru_cache(maxsize=None)
    def _d_frame(self, I: Frame) -> tuple:
        """d(theta^I) from the coframe differentials, Leibniz with signs."""
        acc: dict = {}
        for p, i in enumerate(I):
            di = self.frame_d.get(i)
            if not di:
                continue
            sign = -1 if p % 2 else 1
            left, right = I[:p], I[p + 1 :]
            for J, c in di.items():
                s1, K = wedge_frames(left, J)
                if not s1:
                    continue
                s2, K = wedge_frames(K, right)
                if s2:
                    _add_into(acc, K, sign * s1 * s2 * c)
        return tuple(acc.items())

    def d(self, alpha: Form) -> Form:
        acc: dict = {}
        dim = 2 * self.n
        for (a, I), x in alpha.terms.items():
            for j in range(dim):
                der = self.ring.partial(a, j)
                if not der:
                    continue
                s, K = wedge_frames((j,), I)
                if not s:
                    continue
                for b, y in der.items():
                    _add_into(acc, (b, K), s * x * y)
            for K, y in self._d_frame(I):
                _add_into(acc, (a, K), x * y)
        return Form._raw(self, acc)

    def delta(self, alpha: Form) -> Form:
        """delta = (-1)^(k+1) * d * on each homogeneous part."""
        out = self.zero()
        for k in sorted(alpha.grades()):
            part = self.star(self.d(self.star(alpha.part(k))))
            out = out + (part if k % 2 else -part)
        return out

    def delta_koszul(self, alpha: Form) -> Form:
        """delta = [iota(pi), d]."""
        return self.iota_pi(self.d(alpha)) - self.d(self.iota_pi(alpha))

    def integrate(self, alpha: Form) -> Fraction:
        top = tuple(range(2 * self.n))
        total = Fraction(0)
        for (a, I), x in alpha.terms.items():
            if I != top:
                raise ModelError("integrate takes a top-degree form")
            total += x * self.ring.integral(a)
        return total

    def mean(self, f: Form) -> Fraction:
        """Average of a function against the Liouville measure."""
        return self.integrate(self.wedge(f, self.volume)) / self.integrate(self.volume)

    def is_coexact_function(self, f: Form) -> bool:
        if f.grades() - {0}:
            raise ModelError("expected a function")
        return self.integrate(self.wedge(f, self.volume)) == 0

    def leibniz_check(self, f: Form, alpha: Form) -> bool:
        lhs = self.delta(self.wedge(f, alpha))
        rhs = self.wedge(f, self.delta(alpha)) - self.iota(self.hamiltonian_field(f), alpha)
        return lhs == rhs

    # -- randomness -----------------------------------------------------------

    def random_form(self, rng: random.Random, k: int, density: int = 6, extra: int = 0) -> Form:
        basis = self.basis(k, extra)
        if not basis:
            return self.zero()
        out = self.zero()
        for b in rng.sample(basis, min(density, len(basis))):
            out = out + rng.choice((-3, -2, -1, 1, 2, 3)) * b
        return out

    # -- display / serialization ---------------------------------------------

    def pretty(self, alpha: Form) -> str:
        if not alpha.terms:
            return "0"
        parts = []
        for (a, I), c in sorted(alpha.terms.items(), key=lambda kv: (kv[0][1], self.ring.sort_key(kv[0][0]))):
            frame = "^".join(self.frame_labels[i] for i in I)
            coeff = self.ring.label(a)
            bits = [b for b in (coeff if coeff != "1" else "", frame) if b]
            body = "*".join(bits) or "1"
            parts.append(f"{c}*{body}" if c != 1 else body)
        return " + ".join(parts)

    def form_from_json(self, data: Mapping) -> Form:
        terms = {}
        for t in data["terms"]:
            key = (self.ring.parse(t["coeff"]), tuple(t["frame"]))
            terms[key] = terms.get(key, 0) + Fraction(int(t["num"]), int(t["den"]))
        alpha = Form(self, terms)
        if data.get("grade") is not None and alpha and alpha.grades() != {data["grade"]}:
            raise ModelError("declared grade does not match terms")
        return alpha


# ---------------------------------------------------------------------------
# concrete models


def flat_torus(n: int, freq_bound: int | None = None) -> ModelComplex:
    """T^2n = R^2n / Z^2n with omega = sum dx_i ^ dy_i.

    Coframe slot 2i is dx_(i+1), slot 2i+1 is dy_(i+1); the trigonometric
    frequency vector is indexed by coframe slot as well.
    """
    if n < 1:
        raise ModelError("n must be at least 1")
    if freq_bound is None:
        freq_bound = 2 if n == 1 else 1
    ring = TrigRing(2 * n)
    keys = ring.keys(freq_bound)
    space = SymplecticSpace(n)

    def basis(model, k, extra):
        return [Form._raw(model, {(a, I): Fraction(1)}) for a in keys for I in space.frames(k)]

    labels = []
    for i in range(n):
        labels += [f"dx{i + 1}", f"dy{i + 1}"]
    return ModelComplex(
        f"flat-torus-{2 * n}",
        n,
        ring,
        basis,
        lefschetz_expected=True,
        params={"freq_bound": freq_bound},
        frame_labels=labels,
    )


THETA, DZ = 0, 1


def _sphere_admissible(alpha: Form) -> bool:
    # the dtheta-coefficient of a 1-form must vanish at both poles
    at_plus, at_minus = Fraction(0), Fraction(0)
    for (a, I), c in alpha.terms.items():
        if I == (THETA,):
            at_plus += c
            at_minus += c * (-1) ** a
    return at_plus == 0 and at_minus == 0


def sphere_s1(truncation: int = 8, trivial_action: bool = False) -> ModelComplex:
    """S^1-invariant forms on S^2 with coordinates (theta, z), theta of period 1.

    Coframe slot 0 is dtheta and slot 1 is dz, so omega = dtheta ^ dz is the
    positively oriented area form and integrate(c(z) omega) is the integral of
    c over [-1, 1].  The circle acts by rotating theta; its generating field
    xi satisfies iota(xi) dtheta = 1, iota(xi) dz = 0 and the moment map is
    phi(xi) = z, so that d phi(xi) = iota(xi) omega.

    Truncation is by the weight deg_z + #dz - #dtheta, which d, delta and
    iota(xi) (the latter raising weight by one) respect; ``truncation`` bounds
    the weight.  A dtheta-coefficient is a multiple of (1 - z^2) (smoothness at
    the poles).  With ``trivial_action`` the circle acts trivially (xi = 0,
    phi = 0).
    """
    ring = PolyZRing(DZ)
    N = truncation

    def basis(model, k, extra):
        W = N + extra
        one = Fraction(1)
        if k == 0:
            return [Form._raw(model, {(j, ()): one}) for j in range(W + 1)]
        if k == 1:
            out = [Form._raw(model, {(j, (DZ,)): one}) for j in range(W)]
            out += [Form._raw(model, {(j, (THETA,)): one, (j + 2, (THETA,)): -one}) for j in range(W)]
            return out
        return [Form._raw(model, {(j, (THETA, DZ)): one}) for j in range(W + 1)]

    name = "sphere-s1-trivial" if trivial_action else "sphere-s1"
    model = ModelComplex(
        name,
        1,
        ring,
        basis,
        lefschetz_expected=True,
        admissible=_sphere_admissible,
        params={"truncation": N},
        frame_labels=["dtheta", "dz"],
    )
    if trivial_action:
        model.group = GroupData(fields=[{}], moment=[model.zero()], trivial=True)
    else:
        model.group = GroupData(fields=[{(ring.one, THETA): Fraction(1)}], moment=[model.function(1)])
    return model


def ce_complex(
    name: str,
    n: int,
    structure: Mapping[int, Mapping[Frame, object]],
    lefschetz_expected: bool,
    frame_labels: Sequence[str] | None = None,
) -> ModelComplex:
    """Chevalley-Eilenberg complex of a Lie algebra in a Darboux coframe.

    ``structure[i]`` is d(theta^i) as {frame of length 2: coefficient}.  The
    symplectic form is the Darboux omega of the coframe; construction fails if
    d^2 != 0 or omega is not closed.
    """
    space = SymplecticSpace(n)

    def basis(model, k, extra):
        return [Form._raw(model, {((), I): Fraction(1)}) for I in space.frames(k)]

    model = ModelComplex(
        name,
        n,
        ConstRing(),
        basis,
        frame_d={i: {tuple(I): Fraction(c) for I, c in v.items()} for i, v in structure.items()},
        lefschetz_expected=lefschetz_expected,
        frame_labels=frame_labels,
        params={"structure": {str(i): {",".join(map(str, I)): str(c) for I, c in v.items()} for i, v in structure.items()}},
    )
    for i in range(2 * n):
        g = model.coframe(i)
        if model.d(model.d(g)):
            raise ModelError(f"d^2 != 0 on generator {i}: structure constants violate the Jacobi identity")
    if model.d(model.omega):
        raise ModelError("omega is not closed")
    if not model.volume:
        raise ModelError("omega is degenerate")
    return model


def kodaira_thurston() -> ModelComplex:
    """Invariant forms on the Kodaira-Thurston nilmanifold.

    Lie algebra dual basis e1..e4 with de4 = e1 ^ e2 and omega = e1^e3 + e2^e4;
    coframe slots (0, 1, 2, 3) hold (e1, e3, e2, e4).
    """
    return ce_complex(
        "kodaira-thurston",
        2,
        {3: {(0, 2): 1}},
        lefschetz_expected=False,
        frame_labels=["e1", "e3", "e2", "e4"],
    )


MODEL_NAMES = ("flat-torus-2", "flat-torus-4", "sphere-s1", "kodaira-thurston")


def build_model(name: str, **params) -> ModelComplex:
    if name == "flat-torus-2":
        return flat_torus(1, params.get("freq_bound"))
    if name == "flat-torus-4":
        return flat_torus(2, params.get("freq_bound"))
    if name == "sphere-s1":
        return sphere_s1(params.get("truncation", 8))
    if name == "sphere-s1-trivial":
        return sphere_s1(params.get("truncation", 8), trivial_action=True)
    if name == "kodaira-thurston":
        return kodaira_thurston()
    raise ModelError(f"unknown model {name!r}")


def model_from_descriptor(data: Mapping) -> ModelComplex:
    params = {k: v for k, v in data.items() if k in ("freq_bound", "truncation")}
    return build_model(data["name"], **params)
