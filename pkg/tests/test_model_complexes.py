import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from symphodge.model_complexes import (
    DZ,
    MODEL_NAMES,
    THETA,
    ModelError,
    TrigRing,
    build_model,
    ce_complex,
    flat_torus,
    model_from_descriptor,
    sphere_s1,
)

ALL = MODEL_NAMES + ("sphere-s1-trivial",)


@pytest.fixture(scope="module", params=ALL)
def model(request):
    return build_model(request.param)


# -- oracles ------------------------------------------------------------------


def laurent(key):
    """cos / sin of 2 pi k.t as a Laurent polynomial in exp(2 pi i t)."""
    k, t = key
    neg = tuple(-x for x in k)
    if t == "c":
        return {k: Fraction(1, 2), neg: Fraction(1, 2)} if any(k) else {k: Fraction(1)}
    # sin x = (e^ix - e^-ix) / 2i; keep the 1/i as a separate flag
    return {k: Fraction(1, 2), neg: Fraction(-1, 2)}


def laurent_mul(a, b):
    out = {}
    for k1, x in a.items():
        for k2, y in b.items():
            k = tuple(p + q for p, q in zip(k1, k2))
            out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def trig_to_laurent(terms):
    """Sum of c * key as (cos-part, sin-part) Laurent data; sin part is divided by i."""
    cos_part, sin_part = {}, {}
    for key, c in terms.items():
        target = cos_part if key[1] == "c" else sin_part
        for k, v in laurent(key).items():
            target[k] = target.get(k, 0) + c * v
    return {k: v for k, v in cos_part.items() if v}, {k: v for k, v in sin_part.items() if v}


@settings(max_examples=100, deadline=None)
@given(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.sampled_from("cs"),
    st.sampled_from("cs"),
)
def test_trig_product_against_exponentials(k1, k2, t1, t2):
    R = TrigRing(2)
    s1, a = R.normalize(k1, t1)
    s2, b = R.normalize(k2, t2)
    if not s1 or not s2:
        return
    got = R.mul(a, b)
    # product via exponentials: sin*sin = -(sin/i)(sin/i), cos*sin/i etc.
    la, lb = laurent(a), laurent(b)
    prod = laurent_mul(la, lb)
    if t1 == "s" and t2 == "s":
        prod = {k: -v for k, v in prod.items()}
    cos_got, sin_got = trig_to_laurent(got)
    expected_cos = prod if (t1 == "s") == (t2 == "s") else {}
    expected_sin = prod if (t1 == "s") != (t2 == "s") else {}
    assert cos_got == expected_cos
    assert sin_got == expected_sin


def test_trig_derivative():
    R = TrigRing(2)
    assert R.partial(((1, 2), "c"), 1) == {((1, 2), "s"): -2}
    assert R.partial(((1, 2), "s"), 0) == {((1, 2), "c"): 1}
    assert R.partial(R.one, 0) == {}


@pytest.mark.parametrize("j", range(8))
def test_sphere_integral_against_sympy(j):
    z = sympy.symbols("z")
    m = sphere_s1()
    got = m.integrate(m.wedge(m.function(j), m.omega))
    assert got == Fraction(str(sympy.integrate(z**j, (z, -1, 1))))


# -- structure ------------------------------------------------------------------


def test_d_squared_zero_and_delta_two_ways(model):
    for k in range(2 * model.n + 1):
        for b in model.basis(k):
            assert not model.d(model.d(b))
            assert model.delta(b) == model.delta_koszul(b)
            assert not model.delta(model.delta(b))
            assert not (model.d(model.delta(b)) + model.delta(model.d(b)))
            assert model.star(model.star(b)) == b


def test_omega_closed_and_coclosed(model):
    assert not model.d(model.omega)
    assert not model.delta(model.omega)


def test_volumes():
    assert [build_model(n).integrate(build_model(n).volume) for n in MODEL_NAMES] == [1, 1, 2, 1]


def test_truncation_is_closed_under_d_and_delta(model):
    # images of basis elements stay in the span of the basis
    from symphodge.exact_linalg import Eliminator

    for k in range(2 * model.n + 1):
        for op, shift in ((model.d, 1), (model.delta, -1)):
            el = Eliminator()
            for b in model.basis(k + shift):
                el.add(b.terms)
            for b in model.basis(k):
                assert el.contains(op(b).terms)


def test_sphere_examples():
    m = sphere_s1()
    z = m.function(1)
    assert m.d(z) == m.coframe(DZ)
    xi = m.group.fields[0]
    assert m.iota(xi, m.omega) == m.coframe(DZ) == m.d(m.group.moment[0])
    assert m.iota(xi, m.coframe(THETA)) == m.one()
    assert m.is_admissible(m.form({(0, (THETA,)): 1, (2, (THETA,)): -1}))
    assert not m.is_admissible(m.coframe(THETA))
    assert m.is_coexact_function(z) and not m.is_coexact_function(m.one())
    assert m.mean(m.function(2)) == Fraction(1, 3)


def test_sphere_admissibility_preserved():
    m = sphere_s1()
    for k in range(3):
        for b in m.basis(k):
            assert m.is_admissible(b)
            assert m.is_admissible(m.d(b)) and m.is_admissible(m.delta(b))


def test_kodaira_thurston_structure():
    m = build_model("kodaira-thurston")
    e1, e3, e2, e4 = (m.coframe(i) for i in range(4))
    assert m.d(e4) == m.wedge(e1, e2)
    assert not m.d(e1) and not m.d(e2) and not m.d(e3)
    assert m.omega == m.wedge(e1, e3) + m.wedge(e2, e4)


def test_ce_rejects_bad_structure():
    with pytest.raises(ModelError, match="not closed"):
        # d(theta^1) = theta^2 ^ theta^3 gives d omega = -theta^0 ^ theta^2 ^ theta^3
        ce_complex("bad", 2, {1: {(2, 3): 1}}, lefschetz_expected=False)
    with pytest.raises(ModelError, match="Jacobi"):
        ce_complex("bad", 2, {0: {(1, 2): 1}, 1: {(0, 3): 1}}, lefschetz_expected=False)


def test_unknown_model():
    with pytest.raises(ModelError):
        build_model("klein-bottle")
    with pytest.raises(ModelError):
        flat_torus(0)


@pytest.mark.parametrize("name", ALL)
def test_leibniz_random_pairs(name):
    m = build_model(name)
    rng = random.Random(name)
    for _ in range(50):
        f = m.random_form(rng, 0, density=3)
        alpha = m.random_form(rng, rng.randrange(0, 2 * m.n + 1))
        assert m.leibniz_check(f, alpha)


def test_leibniz_example_on_torus():
    m = build_model("flat-torus-2")
    # f = cos(2 pi x): v_f = (df)^sharp and delta(f dx) = -iota(v_f) dx
    f = m.function(((1, 0), "c"))
    dx = m.coframe(0)
    assert m.delta(m.wedge(f, dx)) == -m.iota(m.hamiltonian_field(f), dx)
    assert m.leibniz_check(f, dx)


def test_json_roundtrip(model):
    rng = random.Random(3)
    for k in range(2 * model.n + 1):
        a = model.random_form(rng, k)
        assert model.form_from_json(a.to_json()) == a
    assert model_from_descriptor(model.descriptor()).descriptor() == model.descriptor()


def test_integrate_requires_top_form():
    m = build_model("flat-torus-2")
    with pytest.raises(ModelError):
        m.integrate(m.one())
