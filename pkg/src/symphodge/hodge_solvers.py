"""Cohomology, harmonic representatives, strong Lefschetz and the d-delta lemma.

Every existence statement is decided by an exact linear solve over a model's
finite basis.  Elements handled here only need ``.terms`` (a sparse dict),
``+`` and scalar ``*``, so the same machinery serves the Cartan complex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact_linalg import Eliminator, NotASubspace
from .model_complexes import Form, ModelComplex

__all__ = [
    "TheoremViolation",
    "PreconditionError",
    "NoHarmonicRepresentative",
    "DdeltaCounterexample",
    "OperatorSolver",
    "CohomologyBasis",
    "combine",
    "operator_solver",
    "cohomology",
    "cohomology_dims",
    "strong_lefschetz_check",
    "harmonic_representative",
    "mathieu_check",
    "quasi_isomorphism_check",
    "ddelta_solve",
    "find_ddelta_counterexample",
    "seeded_ddelta_instances",
    "iota_exact_solve",
    "iota_coexact_solve",
    "coexact_witness",
]


class TheoremViolation(RuntimeError):
    """A solve that a theorem guarantees has failed on a Lefschetz model."""


class PreconditionError(ValueError):
    pass


class NoHarmonicRepresentative(ArithmeticError):
    def __init__(self, gamma, message="class has no harmonic representative"):
        super().__init__(message)
        self.gamma = gamma


class DdeltaCounterexample(ArithmeticError):
    def __init__(self, alpha, kind: str):
        super().__init__(f"harmonic {kind} form is not in the image of d delta")
        self.alpha = alpha
        self.kind = kind


def combine(domain: Sequence, coeffs: dict, zero):
    out = zero
    for i, c in sorted(coeffs.items()):
        if c:
            out = out + c * domain[i]
    return out


class OperatorSolver:
    """Column echelon form of ``op`` on a finite domain basis."""

    def __init__(self, op: Callable, domain: Sequence, zero, pivot: str = "first"):
        self.op = op
        self.domain = list(domain)
        self.zero = zero
        self.images = [op(b) for b in self.domain]
        self._el = Eliminator(pivot)
        self.kernel_relations = []
        for i, img in enumerate(self.images):
            rel = self._el.add(img.terms, i)
            if rel is not None:
                self.kernel_relations.append(rel)

    @property
    def rank(self) -> int:
        return self._el.rank

    def preimage(self, target):
        """Some x in span(domain) with op(x) == target, or None."""
        if not target.terms:
            return self.zero
        coeffs = self._el.express(target.terms)
        if coeffs is None:
            return None
        x = combine(self.domain, coeffs, self.zero)
        if self.op(x) != target:
            raise ArithmeticError("linear solve failed substitution check")
        return x

    def in_image(self, target) -> bool:
        return self._el.contains(target.terms)

    def kernel(self) -> list:
        return [combine(self.domain, rel, self.zero) for rel in self.kernel_relations]


class _Stacked:
    """Pair (d a, delta a) flattened into one sparse vector."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms

    def __eq__(self, other):
        return self.terms == other.terms


def _both(model: ModelComplex):
    def op(a):
        terms = {("d",) + k: c for k, c in model.d(a).terms.items()}
        terms.update({("delta",) + k: c for k, c in model.delta(a).terms.items()})
        return _Stacked(terms)

    return op


def _ops(model: ModelComplex) -> dict:
    return {
        "d": model.d,
        "delta": model.delta,
        "ddelta": lambda a: model.d(model.delta(a)),
        "deltad": lambda a: model.delta(model.d(a)),
        "d+delta": _both(model),
    }


def operator_solver(model: ModelComplex, name: str, k: int, extra: int = 0, pivot: str = "first") -> OperatorSolver:
    cache = model.__dict__.setdefault("_solver_cache", {})
    key = (name, k, extra, pivot)
    s = cache.get(key)
    if s is None:
        s = cache[key] = OperatorSolver(_ops(model)[name], model.basis(k, extra), model.zero(), pivot)
    return s


@dataclass
class CohomologyBasis:
    """Classes of a quotient cycles/boundaries with chosen representatives."""

    model: object
    grade: int
    differential: str
    representatives: list
    boundaries: list = field(repr=False, default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def _eliminator(self) -> Eliminator:
        el = self.__dict__.get("_el")
        if el is None:
            el = Eliminator()
            for i, b in enumerate(self.boundaries):
                el.add(b.terms, ("b", i))
            for j, r in enumerate(self.representatives):
                if el.add(r.terms, ("r", j)) is not None:
                    raise ArithmeticError("representatives are not independent")
            self.__dict__["_el"] = el
        return el

    def coordinates(self, cycle) -> list[Fraction] | None:
        """Coordinates of the class of ``cycle``; None if outside the cycle space
        spanned by representatives and boundaries."""
        c = self._eliminator().express(cycle.terms)
        if c is None:
            return None
        return [c.get(("r", j), Fraction(0)) for j in range(self.dimension)]

    def is_trivial(self, cycle) -> bool:
        coords = self.coordinates(cycle)
        if coords is None:
            raise ValueError("not a cycle of this quotient")
        return not any(coords)


def quotient(cycles: Sequence, boundaries: Sequence) -> list:
    """Coset representatives for span(cycles)/span(boundaries), checking that
    the boundaries lie inside the cycles."""
    cyc = Eliminator()
    for c in cycles:
        cyc.add(c.terms)
    for b in boundaries:
        if not cyc.contains(b.terms):
            raise NotASubspace("boundary is not a cycle: truncation is not closed")
    el = Eliminator()
    for b in boundaries:
        el.add(b.terms)
    return [c for c in cycles if el.add(c.terms) is None]


def cohomology(model: ModelComplex, k: int, differential: str = "d") -> CohomologyBasis:
    """``d``: de Rham; ``delta``: H(Omega, delta); ``delta_subcomplex``:
    H_delta = cohomology of (ker delta, d)."""
    if differential == "d":
        cycles = operator_solver(model, "d", k).kernel()
        boundaries = [model.d(b) for b in model.basis(k - 1)]
    elif differential == "delta":
        cycles = operator_solver(model, "delta", k).kernel()
        boundaries = [model.delta(b) for b in model.basis(k + 1)]
    elif differential == "delta_subcomplex":
        cycles = operator_solver(model, "d+delta", k).kernel()
        boundaries = [model.d(b) for b in operator_solver(model, "delta", k - 1).kernel()] if k >= 1 else []
    else:
        raise ValueError(f"unknown differential {differential!r}")
    reps = quotient(cycles, boundaries)
    return CohomologyBasis(model, k, differential, reps, [b for b in boundaries if b])


def cohomology_dims(model: ModelComplex, differential: str = "d") -> list[int]:
    return [cohomology(model, k, differential).dimension for k in range(2 * model.n + 1)]


def strong_lefschetz_check(model: ModelComplex) -> dict:
    n = model.n
    rows = []
    for k in range(n + 1):
        src = cohomology(model, n - k)
        tgt = cohomology(model, n + k)
        wk = model.omega_power(k)
        matrix = []
        for rep in src.representatives:
            coords = tgt.coordinates(model.wedge(wk, rep))
            if coords is None:
                raise ArithmeticError("omega^k ^ cycle is not a cycle")
            matrix.append(coords)
        el = Eliminator()
        rk = sum(1 for col in matrix if el.add(dict(enumerate(col))) is None)
        rows.append(
            {
                "k": k,
                "source_dim": src.dimension,
                "target_dim": tgt.dimension,
                "rank": rk,
                "matrix": [[str(x) for x in col] for col in matrix],
                "isomorphism": rk == src.dimension == tgt.dimension,
            }
        )
    return {"per_k": rows, "lefschetz": all(r["isomorphism"] for r in rows)}


def harmonic_representative(model: ModelComplex, gamma: Form, pivot: str = "first") -> Form:
    """alpha = gamma + d eta with d alpha = delta alpha = 0."""
    if model.d(gamma):
        raise PreconditionError("representative is not closed (d gamma != 0)")
    if not gamma:
        return gamma
    k = gamma.grade
    target = -model.delta(gamma)
    if k == 0 or not target:
        eta = model.zero()
    else:
        eta = operator_solver(model, "deltad", k - 1, pivot=pivot).preimage(target)
    if eta is None:
        if model.lefschetz_expected:
            raise TheoremViolation(f"no harmonic representative on Lefschetz model {model.name}")
        raise NoHarmonicRepresentative(gamma)
    alpha = gamma + model.d(eta)
    assert not model.d(alpha) and not model.delta(alpha)
    return alpha


def mathieu_check(model: ModelComplex) -> dict:
    """Both sides of the Lefschetz / harmonic-representative equivalence."""
    lef = strong_lefschetz_check(model)
    failures = []
    reps = {}
    for k in range(2 * model.n + 1):
        H = cohomology(model, k)
        reps[k] = []
        for j, gamma in enumerate(H.representatives):
            try:
                alpha = harmonic_representative(model, gamma)
            except NoHarmonicRepresentative:
                failures.append({"grade": k, "index": j, "gamma": gamma})
            else:
                if not operator_solver(model, "d", k - 1).in_image(alpha - gamma) and alpha != gamma:
                    raise ArithmeticError("harmonic representative left the class")
                reps[k].append(alpha)
    all_harmonic = not failures
    return {
        "lefschetz": lef["lefschetz"],
        "all_classes_harmonic": all_harmonic,
        "equivalence_holds": lef["lefschetz"] == all_harmonic,
        "failures": failures,
        "harmonic_representatives": reps,
        "lefschetz_report": lef,
    }


def quasi_isomorphism_check(model: ModelComplex) -> dict:
    """dim H_delta = dim H = dim H(Omega, delta), and H_delta -> H is bijective."""
    rows = []
    for k in range(2 * model.n + 1):
        H = cohomology(model, k)
        Hd = cohomology(model, k, "delta_subcomplex")
        Hh = cohomology(model, k, "delta")
        el = Eliminator()
        for rep in Hd.representatives:
            coords = H.coordinates(rep)
            if coords is None:
                raise ArithmeticError("H_delta representative is not closed")
            el.add(dict(enumerate(coords)))
        rows.append(
            {
                "k": k,
                "dim_H": H.dimension,
                "dim_H_delta": Hd.dimension,
                "dim_H_delta_homology": Hh.dimension,
                "induced_rank": el.rank,
                "bijective": el.rank == Hd.dimension == H.dimension,
            }
        )
    return {"per_k": rows, "bijective": all(r["bijective"] for r in rows)}


def _exact_or_coexact(model: ModelComplex, alpha: Form, k: int) -> str | None:
    if k >= 1 and operator_solver(model, "d", k - 1).in_image(alpha):
        return "exact"
    if operator_solver(model, "delta", k + 1).in_image(alpha):
        return "coexact"
    return None


def ddelta_solve(model: ModelComplex, alpha: Form, pivot: str = "first") -> Form:
    """beta with alpha = d delta beta for harmonic exact-or-coexact alpha."""
    if not alpha:
        return model.zero()
    k = alpha.grade
    if model.d(alpha):
        raise PreconditionError("d alpha != 0")
    if model.delta(alpha):
        raise PreconditionError("delta alpha != 0")
    kind = _exact_or_coexact(model, alpha, k)
    if kind is None:
        raise PreconditionError("alpha is neither exact nor coexact")
    beta = operator_solver(model, "ddelta", k, pivot=pivot).preimage(alpha)
    if beta is None:
        if model.lefschetz_expected:
            raise TheoremViolation(f"d-delta lemma failed on Lefschetz model {model.name}")
        raise DdeltaCounterexample(alpha, kind)
    assert model.d(model.delta(beta)) == alpha
    return beta


def _minimize(candidates: list, insoluble: Callable, zero):
    """Greedily drop summands while the sum stays a counterexample."""
    kept = list(candidates)
    total = combine(kept, {i: 1 for i in range(len(kept))}, zero)
    if not insoluble(total):
        return None
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1 :]
        s = combine(trial, {j: 1 for j in range(len(trial))}, zero)
        if trial and insoluble(s):
            kept, total = trial, s
        else:
            i += 1
    return total


def find_ddelta_counterexample(model: ModelComplex, k: int) -> dict | None:
    """Search ker d cap im delta and ker delta cap im d at grade k for an
    element outside im d delta; the witness is minimized before return."""
    solver = operator_solver(model, "ddelta", k)
    zero = model.zero()

    def insoluble(a):
        return bool(a) and not solver.in_image(a)

    # ker delta cap im d
    exact_coclosed = [model.d(x) for x in operator_solver(model, "deltad", k - 1).kernel()] if k >= 1 else []
    # ker d cap im delta
    coexact_closed = [model.delta(x) for x in operator_solver(model, "ddelta", k + 1).kernel()]
    for kind, cands in (("exact", exact_coclosed), ("coexact", coexact_closed)):
        cands = [c for c in cands if c]
        w = _minimize(cands, insoluble, zero)
        if w is not None:
            return {"grade": k, "kind": kind, "alpha": w}
    return None


def seeded_ddelta_instances(model: ModelComplex, k: int, count: int, rng: random.Random):
    """Pairs (beta0, alpha = d delta beta0) with random sparse beta0 and alpha != 0."""
    made = 0
    for _ in range(50 * count):
        if made == count:
            return
        beta0 = model.random_form(rng, k)
        alpha = model.d(model.delta(beta0))
        if alpha:
            made += 1
            yield beta0, alpha
    raise ValueError(f"could not seed {count} nonzero instances in grade {k}")


def iota_exact_solve(model: ModelComplex, q: int, alpha: Form) -> Form:
    """beta with d beta = iota(xi_q) alpha, for closed invariant alpha."""
    if model.group is None:
        raise PreconditionError("model has no group action")
    if model.d(alpha):
        raise PreconditionError("d alpha != 0")
    target = model.iota(model.group.fields[q], alpha)
    if not target:
        return model.zero()
    k = target.grade
    beta = operator_solver(model, "d", k - 1, extra=1).preimage(target) if k >= 1 else None
    if beta is None:
        raise TheoremViolation("iota(xi) alpha is not exact")
    return beta


def iota_coexact_solve(model: ModelComplex, f: Form, alpha: Form) -> Form:
    """beta = -f alpha, which satisfies delta beta = iota(v_f) alpha when alpha
    is coclosed."""
    if model.delta(alpha):
        raise PreconditionError("delta alpha != 0")
    beta = -model.wedge(f, alpha)
    if model.delta(beta) != model.iota(model.hamiltonian_field(f), alpha):
        raise ArithmeticError("Leibniz identity failed")
    return beta


def coexact_witness(model: ModelComplex, f: Form) -> Form | None:
    """beta with delta beta = f, or None when f has nonzero mean."""
    if not model.is_coexact_function(f):
        return None
    if not f:
        return model.zero()
    beta = operator_solver(model, "delta", 1, extra=1).preimage(f)
    if beta is None and model.lefschetz_expected:
        raise TheoremViolation("mean-zero function is not coexact")
    return beta
