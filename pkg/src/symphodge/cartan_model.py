"""The Cartan complex of a Hamiltonian torus action on a model.

An equivariant form is a polynomial in generators u_1..u_r (the dual basis of
the Lie algebra) with invariant forms as coefficients.  A term u^m (x) beta
with |m| = i and beta of form degree g has bidegree (i, i + g) and total
degree 2i + g.  For a torus every polynomial is invariant, and on the
invariant model every coefficient form is invariant, so no averaging occurs.

Operators:

* ``d``        coefficientwise exterior derivative, bidegree (0, 1);
* ``partial``  alpha -> -sum_q u_q iota(xi_q) alpha, bidegree (1, 1);
* ``d_G``      d + partial;
* ``delta``    coefficientwise Koszul differential, bidegree (0, -1).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .exact_linalg import Eliminator
from .hodge_solvers import (
    CohomologyBasis,
    OperatorSolver,
    PreconditionError,
    TheoremViolation,
    cohomology,
    combine,
    harmonic_representative,
    quotient,
)
from .model_complexes import Form, ModelComplex

__all__ = [
    "EquivariantForm",
    "CartanComplex",
]


class EquivariantForm:
    """Polynomial in u_1..u_r with model forms as coefficients."""

    __slots__ = ("model", "r", "comps")

    def __init__(self, model: ModelComplex, r: int, comps: Mapping[tuple, Form] | None = None):
        self.model = model
        self.r = r
        self.comps = {}
        for m, f in (comps or {}).items():
            m = tuple(m)
            if len(m) != r or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m}")
            if f:
                self.comps[m] = self.comps[m] + f if m in self.comps else f

    @classmethod
    def _raw(cls, model, r, comps):
        obj = cls.__new__(cls)
        obj.model, obj.r, obj.comps = model, r, comps
        return obj

    @classmethod
    def lift(cls, alpha: Form, r: int) -> EquivariantForm:
        return cls(alpha.model, r, {(0,) * r: alpha})

    @property
    def terms(self) -> dict:
        out = {}
        for m, f in self.comps.items():
            for (a, I), c in f.terms.items():
                out[(m, a, I)] = c
        return out

    def _combine(self, other, sign):
        if not isinstance(other, EquivariantForm) or other.model is not self.model:
            raise TypeError("operands live on different models")
        comps = dict(self.comps)
        for m, f in other.comps.items():
            g = comps[m] + f if sign > 0 and m in comps else (comps[m] - f if m in comps else (f if sign > 0 else -f))
            if g:
                comps[m] = g
            else:
                comps.pop(m, None)
        return EquivariantForm._raw(self.model, self.r, comps)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return EquivariantForm._raw(self.model, self.r, {m: -f for m, f in self.comps.items()})

    def __mul__(self, s):
        if isinstance(s, EquivariantForm):
            return self.wedge(s)
        s = Fraction(s)
        if not s:
            return EquivariantForm._raw(self.model, self.r, {})
        return EquivariantForm._raw(self.model, self.r, {m: s * f for m, f in self.comps.items()})

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / Fraction(s))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.comps
        return (
            isinstance(other, EquivariantForm)
            and other.model is self.model
            and self.comps.keys() == other.comps.keys()
            and all(self.comps[m] == other.comps[m] for m in self.comps)
        )

    __hash__ = None

    def __bool__(self):
        return bool(self.comps)

    def wedge(self, other: EquivariantForm) -> EquivariantForm:
        comps: dict = {}
        for m1, f1 in self.comps.items():
            for m2, f2 in other.comps.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                g = self.model.wedge(f1, f2)
                if g:
                    comps[m] = comps[m] + g if m in comps else g
        return EquivariantForm._raw(self.model, self.r, {m: f for m, f in comps.items() if f})

    def map(self, fn) -> EquivariantForm:
        comps = {}
        for m, f in self.comps.items():
            g = fn(f)
            if g:
                comps[m] = g
        return EquivariantForm._raw(self.model, self.r, comps)

    def at_zero(self) -> Form:
        """Evaluation at u = 0 (the Cartesian projection)."""
        return self.comps.get((0,) * self.r, self.model.zero())

    def poly_part(self, i: int) -> EquivariantForm:
        return EquivariantForm._raw(self.model, self.r, {m: f for m, f in self.comps.items() if sum(m) == i})

    def poly_degrees(self) -> set[int]:
        return {sum(m) for m in self.comps}

    def total_degrees(self) -> set[int]:
        return {2 * sum(m) + g for m, f in self.comps.items() for g in f.grades()}

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(sum(m), sum(m) + g) for m, f in self.comps.items() for g in f.grades()}

    def to_json(self, poly_degree_bound: int) -> dict:
        return {
            "poly_degree_bound": poly_degree_bound,
            "terms": [{"u_exps": list(m), "form": f.to_json()} for m, f in sorted(self.comps.items())],
        }

    @classmethod
    def from_json(cls, model: ModelComplex, r: int, data: Mapping) -> EquivariantForm:
        comps = {}
        for t in data["terms"]:
            m = tuple(t["u_exps"])
            f = model.form_from_json(t["form"])
            comps[m] = comps[m] + f if m in comps else f
        return cls(model, r, comps)

    def pretty(self) -> str:
        if not self.comps:
            return "0"
        parts = []
        for m, f in sorted(self.comps.items()):
            mono = "*".join(
                (f"u{q + 1}" if self.r > 1 else "u") + (f"^{e}" if e > 1 else "") for q, e in enumerate(m) if e
            )
            body = self.model.pretty(f)
            parts.append(f"{mono}*({body})" if mono else body)
        return " + ".join(parts)

    def __repr__(self):
        return f"EquivariantForm({self.pretty()})"


def _monomials(r: int, i: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(r), i):
        m = [0] * r
        for q in combo:
            m[q] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


class CartanComplex:
    """Truncated Cartan complex of a model carrying a Hamiltonian torus action."""

    def __init__(self, model: ModelComplex, degree_bound: int = 6):
        if model.group is None:
            raise PreconditionError(f"model {model.name} has no group action")
        self.model = model
        self.group = model.group
        self.r = model.group.rank
        self.degree_bound = degree_bound
        self._solvers: dict = {}
        self._basis: dict = {}
        for q, phi in enumerate(self.group.moment):
            if model.d(phi) != model.iota(self.group.fields[q], model.omega):
                raise PreconditionError(f"moment map component {q} violates d phi = iota(xi) omega")

    # -- elements -------------------------------------------------------------

    def zero(self) -> EquivariantForm:
        return EquivariantForm._raw(self.model, self.r, {})

    def lift(self, alpha: Form) -> EquivariantForm:
        return EquivariantForm.lift(alpha, self.r)

    def u(self, q: int) -> tuple:
        m = [0] * self.r
        m[q] = 1
        return tuple(m)

    def constant(self, m: tuple, c=1) -> EquivariantForm:
        return EquivariantForm(self.model, self.r, {m: c * self.model.one()})

    def moment_form(self) -> EquivariantForm:
        """phi = sum_q u_q phi(xi_q)."""
        return EquivariantForm(self.model, self.r, {self.u(q): f for q, f in enumerate(self.group.moment)})

    def chi0(self) -> list[Fraction]:
        """Liouville means of the moment map components."""
        return [self.model.mean(f) for f in self.group.moment]

    def shifted_moment(self) -> EquivariantForm:
        """phi_0 = phi - chi_0, whose components have mean zero."""
        one = self.model.one()
        return EquivariantForm(
            self.model,
            self.r,
            {self.u(q): f - c * one for q, (f, c) in enumerate(zip(self.group.moment, self.chi0()))},
        )

    def omega_G(self) -> EquivariantForm:
        return self.lift(self.model.omega) + self.shifted_moment()

    # -- operators ------------------------------------------------------------

    def d(self, alpha: EquivariantForm) -> EquivariantForm:
        return alpha.map(self.model.d)

    def delta(self, alpha: EquivariantForm) -> EquivariantForm:
        return alpha.map(self.model.delta)

    def partial(self, alpha: EquivariantForm) -> EquivariantForm:
        comps: dict = {}
        for q, xi in enumerate(self.group.fields):
            if not xi:
                continue
            for m, f in alpha.comps.items():
                g = -self.model.iota(xi, f)
                if not g:
                    continue
                m2 = tuple(e + (1 if p == q else 0) for p, e in enumerate(m))
                comps[m2] = comps[m2] + g if m2 in comps else g
        return EquivariantForm._raw(self.model, self.r, {m: f for m, f in comps.items() if f})

    def d_G(self, alpha: EquivariantForm) -> EquivariantForm:
        return self.d(alpha) + self.partial(alpha)

    d_vert = d
    delta_equiv = delta

    def ops(self) -> dict:
        return {
            "d": self.d,
            "delta": self.delta,
            "partial": self.partial,
            "d_G": self.d_G,
            "ddelta": lambda a: self.d(self.delta(a)),
            "d_Gdelta": lambda a: self.d_G(self.delta(a)),
        }

    # -- bases ----------------------------------------------------------------

    def component_basis(self, i: int, g: int) -> list[EquivariantForm]:
        """u-degree i times form degree g, truncation widened by i."""
        key = ("c", i, g)
        b = self._basis.get(key)
        if b is None:
            b = []
            if i >= 0:
                for m in _monomials(self.r, i):
                    for f in self.model.basis(g, extra=i):
                        b.append(EquivariantForm._raw(self.model, self.r, {m: f}))
            self._basis[key] = b
        return b

    def basis(self, k: int) -> list[EquivariantForm]:
        """Basis of total degree k."""
        key = ("t", k)
        b = self._basis.get(key)
        if b is None:
            b = []
            for i in range(k // 2 + 1):
                b += self.component_basis(i, k - 2 * i)
            self._basis[key] = b
        return b

    def solver(self, op: str, domain_key, pivot: str = "first") -> OperatorSolver:
        key = (op, domain_key, pivot)
        s = self._solvers.get(key)
        if s is None:
            domain = self.basis(domain_key) if isinstance(domain_key, int) else self.component_basis(*domain_key)
            s = self._solvers[key] = OperatorSolver(self.ops()[op], domain, self.zero(), pivot)
        return s

    # -- checks ---------------------------------------------------------------

    def anticommute_check(self, degree_bound: int | None = None) -> dict:
        bound = self.degree_bound if degree_bound is None else degree_bound
        names = {
            "partial delta + delta partial": lambda a: self.partial(self.delta(a)) + self.delta(self.partial(a)),
            "d_G delta + delta d_G": lambda a: self.d_G(self.delta(a)) + self.delta(self.d_G(a)),
            "d_G^2": lambda a: self.d_G(self.d_G(a)),
            "delta^2": lambda a: self.delta(self.delta(a)),
            "partial^2": lambda a: self.partial(self.partial(a)),
            "d partial + partial d": lambda a: self.d(self.partial(a)) + self.partial(self.d(a)),
        }
        failures = {name: [] for name in names}
        checked = 0
        for k in range(bound + 1):
            for b in self.basis(k):
                checked += 1
                for name, fn in names.items():
                    if fn(b):
                        failures[name].append(b)
        return {
            "basis_elements": checked,
            "identities": {name: not f for name, f in failures.items()},
            "failures": {name: f for name, f in failures.items() if f},
            "ok": not any(failures.values()),
        }

    def equivariant_cohomology(self, k: int) -> CohomologyBasis:
        cycles = self.solver("d_G", k).kernel()
        boundaries = [self.d_G(b) for b in self.basis(k - 1)]
        reps = quotient(cycles, boundaries)
        return CohomologyBasis(self, k, "d_G", reps, [b for b in boundaries if b])

    def delta_homology(self, k: int) -> CohomologyBasis:
        cycles = self.solver("delta", k).kernel()
        boundaries = [self.delta(b) for b in self.basis(k + 1)]
        reps = quotient(cycles, boundaries)
        return CohomologyBasis(self, k, "delta", reps, [b for b in boundaries if b])

    def formality_dims(self, bound: int | None = None) -> list[int]:
        """dim (S g* (x) H(M)) in each total degree up to the bound."""
        bound = self.degree_bound if bound is None else bound
        hdims = [cohomology(self.model, g).dimension for g in range(2 * self.model.n + 1)]
        out = []
        for k in range(bound + 1):
            out.append(
                sum(
                    len(_monomials(self.r, i)) * hdims[k - 2 * i]
                    for i in range(k // 2 + 1)
                    if k - 2 * i < len(hdims)
                )
            )
        return out

    def induced_differentials_vanish(self, k: int) -> dict:
        """On H(Omega_G, delta) in degree k, both d and partial act by zero."""
        H = self.delta_homology(k)
        target = self.solver("delta", k + 2)
        d_ok = all(target.in_image(self.d(rep)) for rep in H.representatives)
        p_ok = all(target.in_image(self.partial(rep)) for rep in H.representatives)
        return {"degree": k, "dimension": H.dimension, "d_zero": d_ok, "partial_zero": p_ok}

    # -- solvers --------------------------------------------------------------

    def _component_shape(self, alpha: EquivariantForm) -> tuple[int, int]:
        bi = alpha.bidegrees()
        if len(bi) != 1:
            raise PreconditionError(f"expected a single bigraded component, got {sorted(bi)}")
        i, j = bi.pop()
        return i, j - i

    def ddelta_component(self, alpha: EquivariantForm, pivot: str = "first") -> EquivariantForm | None:
        """Coefficientwise d-delta lemma on one bigraded piece."""
        if not alpha:
            return self.zero()
        i, g = self._component_shape(alpha)
        return self.solver("ddelta", (i, g), pivot).preimage(alpha)

    def zeta_chain_extend(self, zetas: Sequence[EquivariantForm], pivot: str = "first") -> EquivariantForm:
        """Given d zeta_0 = 0 and partial zeta_(i-1) + d zeta_i = 0 for
        0 < i < j, return zeta_j with partial zeta_(j-1) + d zeta_j = 0."""
        if not zetas:
            raise PreconditionError("need at least zeta_0")
        if self.d(zetas[0]):
            raise PreconditionError("d zeta_0 != 0")
        for i in range(1, len(zetas)):
            if self.partial(zetas[i - 1]) + self.d(zetas[i]):
                raise PreconditionError(f"partial zeta_{i - 1} + d zeta_{i} != 0")
        target = -self.partial(zetas[-1])
        if not target:
            return self.zero()
        i, g = self._component_shape(target)
        z = self.solver("d", (i, g - 1), pivot).preimage(target) if g >= 1 else None
        if z is None:
            if self.model.lefschetz_expected:
                raise TheoremViolation("zeta chain cannot be extended")
            raise ArithmeticError("zeta chain cannot be extended (non-Lefschetz model)")
        return z

    def canonical_section(self, gamma: Form, pivot: str = "first") -> dict:
        """Equivariantly harmonic extension alpha_G = alpha + sum_i delta beta_i
        of a closed form gamma, alpha its harmonic representative."""
        alpha = harmonic_representative(self.model, gamma, pivot=pivot) if gamma else gamma
        a = self.lift(alpha)
        betas = []
        t = self.partial(a)  # partial alpha, then partial delta beta_i
        while t:
            beta = self.ddelta_component(-t, pivot)
            if beta is None:
                raise TheoremViolation("recursion for the canonical extension is insoluble")
            betas.append(beta)
            t = self.partial(self.delta(beta))
        alpha_G = a
        for beta in betas:
            alpha_G = alpha_G + self.delta(beta)
        if self.d_G(alpha_G) or self.delta(alpha_G) or alpha_G.at_zero() != alpha:
            raise ArithmeticError("canonical extension failed its certificate")
        return {"alpha": alpha, "alpha_G": alpha_G, "betas": betas}

    def is_exact(self, alpha: EquivariantForm) -> bool:
        if not alpha:
            return True
        degs = alpha.total_degrees()
        if len(degs) != 1:
            raise PreconditionError("inhomogeneous total degree")
        k = degs.pop()
        return k >= 1 and self.solver("d_G", k - 1).in_image(alpha)

    def projection_p(self, alpha_G: EquivariantForm) -> list[Fraction]:
        """Coordinates in H(M) of the class of alpha_G(0)."""
        if self.d_G(alpha_G):
            raise PreconditionError("d_G alpha != 0")
        a0 = alpha_G.at_zero()
        k = a0.grade if a0 else min(alpha_G.total_degrees() or {0})
        if k > 2 * self.model.n:
            return []
        coords = cohomology(self.model, k).coordinates(a0)
        if coords is None:
            raise ArithmeticError("alpha_G(0) is not closed")
        return coords

    def section_independence(self, gamma: Form) -> dict:
        first = self.canonical_section(gamma, "first")
        last = self.canonical_section(gamma, "last")
        diff = first["alpha_G"] - last["alpha_G"]
        return {
            "first": first["alpha_G"],
            "last": last["alpha_G"],
            "representatives_differ": bool(diff),
            "difference_exact": self.is_exact(diff),
        }

    def omega_squared_example(self) -> dict:
        """phi_1, chi_1, phi_2 for the extension of [omega]^2, and the resulting
        representative; see the README for the sign discussion."""
        model = self.model
        phi0 = self.shifted_moment()
        phi1 = self._delta_preimage(phi0)
        half_sq = phi0.wedge(phi0) / 2
        ww = self.lift(model.wedge(model.omega, model.omega))
        results = {"phi0": phi0, "phi1": phi1}
        for label, sgn in (("literal", 1), ("consistent", -1)):
            q = half_sq + sgn * self.partial(phi1)
            chi = self._mean_poly(q)
            phi2 = self._delta_preimage(q - chi)
            w_phi1 = self.lift(model.omega).wedge(phi1)
            if label == "literal":
                rep = ww - 2 * self.delta(w_phi1) - self.delta(phi2)
            else:
                rep = ww + 2 * self.delta(w_phi1) + 2 * self.delta(phi2)
            section = self.canonical_section(model.wedge(model.omega, model.omega))["alpha_G"]
            results[label] = {
                "chi1": chi,
                "chi1_integral": self._integral_poly(q),
                "phi2": phi2,
                "representative": rep,
                "d_G": self.d_G(rep),
                "closed": not self.d_G(rep),
                "coclosed": not self.delta(rep),
                "matches_section": not self.d_G(rep) and self.is_exact(rep - section),
            }
        return results

    def _delta_preimage(self, target: EquivariantForm) -> EquivariantForm:
        out = self.zero()
        for i in sorted(target.poly_degrees()):
            part = target.poly_part(i)
            _, g = self._component_shape(part)
            x = self.solver("delta", (i, g + 1)).preimage(part)
            if x is None:
                raise TheoremViolation("mean-zero coefficient is not coexact")
            out = out + x
        return out

    def _mean_poly(self, f: EquivariantForm) -> EquivariantForm:
        one = self.model.one()
        return EquivariantForm(self.model, self.r, {m: self.model.mean(c) * one for m, c in f.comps.items()})

    def _integral_poly(self, f: EquivariantForm) -> EquivariantForm:
        one = self.model.one()
        vol = self.model.volume
        return EquivariantForm(
            self.model, self.r, {m: self.model.integrate(self.model.wedge(c, vol)) * one for m, c in f.comps.items()}
        )

    def dG_delta_solve(self, alpha: EquivariantForm, pivot: str = "first") -> EquivariantForm:
        """beta with alpha = d_G delta beta, by induction on polynomial degree."""
        if not alpha:
            return self.zero()
        degs = alpha.total_degrees()
        if len(degs) != 1:
            raise PreconditionError("alpha is not homogeneous in total degree")
        k = degs.pop()
        if self.d_G(alpha):
            raise PreconditionError("d_G alpha != 0")
        if self.delta(alpha):
            raise PreconditionError("delta alpha != 0")
        branch = self.harmonic_branch(alpha, pivot)
        if branch is None:
            raise PreconditionError("alpha is neither equivariantly exact nor coexact")
        gamma = self.solver("d_G", k - 1, pivot).preimage(alpha) if k >= 1 else None
        if gamma is None:
            # coexact: its class in H(Omega_G, delta) vanishes, hence so does its d_G class
            raise TheoremViolation("coclosed, coexact, d_G-closed form is not equivariantly exact")
        betas: list[EquivariantForm] = []
        zetas: list[EquivariantForm] = []
        for j in range(k // 2 + 1):
            a_j = alpha.poly_part(j)
            rhs = a_j - (self.partial(self.delta(betas[-1])) if betas else self.zero())
            if j >= 1:
                zetas.append(gamma.poly_part(j - 1) - self.delta(betas[j - 1]))
                zeta_j = self.zeta_chain_extend(zetas, pivot)
                if rhs != self.d(gamma.poly_part(j) - zeta_j):
                    raise ArithmeticError("right-hand side is not d(gamma_j - zeta_j)")
            beta_j = self.ddelta_component(rhs, pivot) if rhs else self.zero()
            if beta_j is None:
                raise TheoremViolation(f"d delta step {j} insoluble")
            betas.append(beta_j)
        beta = self.zero()
        for b in betas:
            beta = beta + b
        if self.d_G(self.delta(beta)) != alpha:
            raise ArithmeticError("d_G delta beta != alpha")
        return beta

    def harmonic_branch(self, alpha: EquivariantForm, pivot: str = "first") -> str | None:
        """"coexact" if alpha is delta-exact, else "exact" if d_G-exact, else None."""
        if not alpha:
            return "exact"
        k = max(alpha.total_degrees())
        if self.solver("delta", k + 1, pivot).in_image(alpha):
            return "coexact"
        if k >= 1 and self.solver("d_G", k - 1, pivot).in_image(alpha):
            return "exact"
        return None

    def non_multiplicativity_witness(self) -> dict:
        model = self.model
        n = model.n
        wG = self.omega_G()
        power = self.lift(model.one())
        for _ in range(n + 1):
            power = power.wedge(wG)
        top = model.one()
        for _ in range(n + 1):
            top = model.wedge(top, model.omega)
        s_top = self.canonical_section(top)["alpha_G"]
        s_w = self.canonical_section(model.omega)["alpha_G"]
        s_w_pow = self.lift(model.one())
        for _ in range(n + 1):
            s_w_pow = s_w_pow.wedge(s_w)
        return {
            "omega_G_power": power,
            "omega_G_power_exact": self.is_exact(power),
            "section_of_power": s_top,
            "product_of_sections_minus_section_exact": self.is_exact(s_w_pow - s_top),
            "trivial_action": self.group.trivial,
        }

    def seeded_dG_delta_instances(self, k: int, count: int, rng: random.Random, density: int = 6):
        """Pairs (beta0, d_G delta beta0) with nonzero image."""
        basis = self.basis(k)
        made = 0
        for _ in range(50 * count):
            if made == count:
                return
            beta0 = self.zero()
            for b in rng.sample(basis, min(density, len(basis))):
                beta0 = beta0 + rng.choice((-3, -2, -1, 1, 2, 3)) * b
            alpha = self.d_G(self.delta(beta0))
            if alpha:
                made += 1
                yield beta0, alpha
        raise ValueError(f"could not seed {count} nonzero instances in degree {k}")

    def coexact_instance(self, k: int, rng: random.Random) -> EquivariantForm:
        """delta of a random d_G-cocycle of degree k + 1."""
        cycles = self.solver("d_G", k + 1).kernel()
        eta = self.zero()
        for c in rng.sample(cycles, min(4, len(cycles))):
            eta = eta + rng.choice((-2, -1, 1, 2)) * c
        return self.delta(eta)
