import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from symphodge.hodge_solvers import (
    DdeltaCounterexample,
    NoHarmonicRepresentative,
    PreconditionError,
    coexact_witness,
    cohomology,
    cohomology_dims,
    ddelta_solve,
    find_ddelta_counterexample,
    harmonic_representative,
    iota_coexact_solve,
    iota_exact_solve,
    mathieu_check,
    operator_solver,
    quasi_isomorphism_check,
    seeded_ddelta_instances,
    strong_lefschetz_check,
)
from symphodge.model_complexes import DZ, THETA, build_model

LEFSCHETZ = ("flat-torus-2", "flat-torus-4", "sphere-s1")


def sympy_rank(model, k):
    """Rank of d on the grade-k basis, from raw term coordinates."""
    basis = model.basis(k)
    if not basis:
        return 0
    images = [model.d(b).terms for b in basis]
    keys = sorted({key for img in images for key in img}, key=repr)
    if not keys:
        return 0
    rows = [[sympy.Rational(str(img.get(key, 0))) for img in images] for key in keys]
    return sympy.Matrix(rows).rank()


def oracle_dims(model):
    ranks = [sympy_rank(model, k) for k in range(2 * model.n + 1)]
    return [len(model.basis(k)) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(2 * model.n + 1)]


@pytest.mark.parametrize(
    "name,expected",
    [("flat-torus-2", [1, 2, 1]), ("sphere-s1", [1, 0, 1]), ("kodaira-thurston", [1, 3, 4, 3, 1])],
)
def test_cohomology_against_independent_rank(name, expected):
    m = build_model(name)
    assert oracle_dims(m) == expected
    assert cohomology_dims(m) == expected


def test_torus4_betti_numbers():
    m = build_model("flat-torus-4")
    assert cohomology_dims(m) == [comb(4, k) for k in range(5)]


def test_kodaira_thurston_b1_odd():
    assert cohomology_dims(build_model("kodaira-thurston"))[1] % 2 == 1


@pytest.mark.parametrize("name", LEFSCHETZ + ("kodaira-thurston",))
def test_delta_homology_and_subcomplex_dims(name):
    m = build_model(name)
    dims = cohomology_dims(m)
    assert cohomology_dims(m, "delta") == dims[::-1] == dims
    assert cohomology_dims(m, "delta_subcomplex") == dims


def test_cohomology_coordinates():
    m = build_model("sphere-s1")
    H = cohomology(m, 2)
    assert H.dimension == 1
    exact = m.d(m.form({(0, (THETA,)): 1, (2, (THETA,)): -1}))
    assert H.coordinates(3 * m.omega + exact) == [3 * x for x in H.coordinates(m.omega)]
    assert H.is_trivial(m.d(m.form({(1, (THETA,)): 1, (3, (THETA,)): -1})))
    assert cohomology(m, 0).coordinates(m.function(1)) is None  # not closed
    with pytest.raises(ValueError):
        cohomology(m, 0, "bogus")


@pytest.mark.parametrize("name", LEFSCHETZ)
def test_strong_lefschetz_holds(name):
    r = strong_lefschetz_check(build_model(name))
    assert r["lefschetz"]
    assert all(row["isomorphism"] for row in r["per_k"])


def test_strong_lefschetz_fails_on_kodaira_thurston():
    r = strong_lefschetz_check(build_model("kodaira-thurston"))
    assert not r["lefschetz"]
    row = r["per_k"][1]
    assert (row["source_dim"], row["target_dim"], row["rank"]) == (3, 3, 2)


@pytest.mark.parametrize("name", LEFSCHETZ)
def test_every_class_harmonic(name):
    m = build_model(name)
    for k in range(2 * m.n + 1):
        H = cohomology(m, k)
        for rep in H.representatives:
            rng = random.Random(k)
            gamma = rep + (m.d(m.random_form(rng, k - 1)) if k else m.zero())
            alpha = harmonic_representative(m, gamma)
            assert not m.d(alpha) and not m.delta(alpha)
            assert H.coordinates(alpha) == H.coordinates(gamma)


def test_harmonic_failure_on_kodaira_thurston():
    m = build_model("kodaira-thurston")
    res = mathieu_check(m)
    assert not res["lefschetz"] and not res["all_classes_harmonic"] and res["equivalence_holds"]
    gamma = res["failures"][0]["gamma"]
    with pytest.raises(NoHarmonicRepresentative):
        harmonic_representative(m, gamma)
    # no closed form in the class is coclosed: delta(gamma + d eta) = 0 is insoluble
    assert not operator_solver(m, "deltad", gamma.grade - 1).in_image(-m.delta(gamma))


def test_harmonic_requires_closed():
    m = build_model("flat-torus-2")
    with pytest.raises(PreconditionError):
        harmonic_representative(m, m.function(((1, 0), "c")))


@pytest.mark.parametrize("name", LEFSCHETZ)
def test_mathieu_and_quasi_on_lefschetz(name):
    m = build_model(name)
    assert mathieu_check(m)["equivalence_holds"]
    assert quasi_isomorphism_check(m)["bijective"]


def test_quasi_not_bijective_on_kodaira_thurston():
    assert not quasi_isomorphism_check(build_model("kodaira-thurston"))["bijective"]


@pytest.mark.parametrize("name", LEFSCHETZ)
def test_ddelta_seeded(name):
    m = build_model(name)
    rng = random.Random(f"ddelta:{name}")
    for k in range(1, 2 * m.n):
        for _, alpha in seeded_ddelta_instances(m, k, 100, rng):
            beta = ddelta_solve(m, alpha)
            assert m.d(m.delta(beta)) == alpha


def test_ddelta_zero_and_preconditions():
    m = build_model("flat-torus-2")
    assert not ddelta_solve(m, m.zero())
    with pytest.raises(PreconditionError, match="d alpha"):
        ddelta_solve(m, m.function(((1, 0), "c")))
    with pytest.raises(PreconditionError, match="neither"):
        ddelta_solve(m, m.omega)


@pytest.mark.parametrize("name", LEFSCHETZ)
def test_no_ddelta_counterexample_on_lefschetz(name):
    m = build_model(name)
    assert all(find_ddelta_counterexample(m, k) is None for k in range(2 * m.n + 1))


def test_ddelta_counterexample_on_kodaira_thurston():
    m = build_model("kodaira-thurston")
    found = [c for k in range(5) if (c := find_ddelta_counterexample(m, k)) is not None]
    assert found
    for c in found:
        a = c["alpha"]
        assert not m.d(a) and not m.delta(a)
        k = a.grade
        if c["kind"] == "exact":
            assert operator_solver(m, "d", k - 1).in_image(a)
        else:
            assert operator_solver(m, "delta", k + 1).in_image(a)
        assert not operator_solver(m, "ddelta", k).in_image(a)
        with pytest.raises(DdeltaCounterexample):
            ddelta_solve(m, a)
    # minimized witnesses are single invariant monomials here
    assert all(len(c["alpha"].terms) == 1 for c in found)


def test_iota_solvers_on_sphere():
    m = build_model("sphere-s1")
    beta = iota_exact_solve(m, 0, m.omega)
    assert m.d(beta) == m.iota(m.group.fields[0], m.omega) == m.coframe(DZ)
    f = m.function(2)
    alpha = m.omega
    b2 = iota_coexact_solve(m, f, alpha)
    assert m.delta(b2) == m.iota(m.hamiltonian_field(f), alpha)
    with pytest.raises(PreconditionError):
        iota_exact_solve(m, 0, m.function(1))


def test_coexact_witness():
    m = build_model("sphere-s1")
    z = m.function(1)
    beta = coexact_witness(m, z)
    assert m.delta(beta) == z
    assert coexact_witness(m, m.one()) is None
    assert coexact_witness(m, m.function(2) - Fraction(1, 3) * m.one()) is not None
