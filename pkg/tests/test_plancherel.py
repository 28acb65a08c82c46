from __future__ import annotations

import json
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascade_lie.exact import det, matmul, transpose
from cascade_lie.liealg import (
    build_restricted_nilradical,
    build_split_nilradical,
    build_upper_triangular,
)
from cascade_lie.plancherel import (
    LatticeSpec,
    MultiplicityReport,
    PfaffianPolynomial,
    all_variables,
    b_matrix,
    dual_lattice,
    find_nondegenerate_lambda,
    formal_degree,
    in_dual,
    is_stepwise_si,
    layer_pfaffian,
    multiplicity,
    multiplicity_table,
    pfaffian,
    plancherel_constant,
    plancherel_polynomial,
    sparse_patterns,
    witness_seed,
)
from cascade_lie.rootsys import build_root_system
from oracles import heisenberg_multiplicity, leibniz_det, matching_pfaffian

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def skew_matrices(draw, max_half=6):
    n = 2 * draw(st.integers(0, max_half))
    m = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = draw(rationals)
            m[j][i] = -m[i][j]
    return m


# Pfaffian ----------------------------------------------------------------------------


def test_two_by_two():
    assert pfaffian([[0, 5], [-5, 0]]) == 5


def test_four_by_four_formula():
    a, b, c, d, e, f = map(Q, (2, 3, 5, 7, 11, 13))
    m = [[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, f], [-c, -e, -f, 0]]
    assert pfaffian(m) == a * f - b * e + c * d
    assert matching_pfaffian(m) == a * f - b * e + c * d


def test_empty_is_one():
    assert pfaffian([]) == 1


@pytest.mark.parametrize(
    "m", [[[0]], [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]], [[0, 1], [2, 0]], [[1, 1], [-1, 0]], [[0, 1]]]
)
def test_rejects_odd_or_asymmetric(m):
    with pytest.raises(ValueError):
        pfaffian(m)


@settings(max_examples=120, deadline=None)
@given(skew_matrices(max_half=4))
def test_matches_matching_expansion(m):
    assert pfaffian(m) == matching_pfaffian(m)


@settings(max_examples=80, deadline=None)
@given(skew_matrices(max_half=3))
def test_square_is_cofactor_determinant(m):
    assert pfaffian(m) ** 2 == leibniz_det(m)


@settings(max_examples=200, deadline=None)
@given(skew_matrices(max_half=6))
def test_square_is_determinant_up_to_12(m):
    assert pfaffian(m) ** 2 == det(m)


@settings(max_examples=60, deadline=None)
@given(skew_matrices(max_half=4), st.data())
def test_congruence(m, data):
    n = len(m)
    a = [[data.draw(rationals) for _ in range(n)] for _ in range(n)]
    assert pfaffian(matmul(matmul(transpose(a), m), a)) == det(a) * pfaffian(m)


# b_λ and layer Pfaffians ----------------------------------------------------------


def test_b_matrix_ell4():
    alg = build_upper_triangular(4)
    t = Q(3)
    m = b_matrix(alg, 1, [t])
    labels = [alg.labels[i] for i in alg.complements[0]]
    assert labels == ["e(1,2)", "e(2,4)", "e(1,3)", "e(3,4)"]
    assert m == [[0, t, 0, 0], [-t, 0, 0, 0], [0, 0, 0, t], [0, 0, -t, 0]]


def test_b_matrix_zero_lambda():
    alg = build_split_nilradical(build_root_system("F", 4))
    for r in range(1, 5):
        assert all(x == 0 for row in b_matrix(alg, r, [0]) for x in row)


def test_b_matrix_layer_range():
    alg = build_upper_triangular(4)
    with pytest.raises(ValueError):
        b_matrix(alg, 3, [1])
    with pytest.raises(ValueError):
        b_matrix(alg, 1, [1, 2])


@pytest.mark.parametrize("ell", range(2, 9))
def test_upper_triangular_density_is_one_monomial(ell):
    poly = plancherel_polynomial(build_upper_triangular(ell))
    m = ell // 2
    assert len(poly.terms) == 1
    (mono, coeff), = poly.terms.items()
    assert mono == tuple(ell - 2 * r for r in range(1, m + 1))
    assert abs(coeff) == 1


def test_split_g2_density():
    alg = build_split_nilradical(build_root_system("G", 2))
    poly = plancherel_polynomial(alg)
    (mono, coeff), = poly.terms.items()
    assert mono == (2, 0) and coeff != 0 and coeff.denominator == 1
    assert (alg.d(1), alg.d(2)) == (2, 0)
    assert layer_pfaffian(alg, 2).terms == {(0,): 1}


@pytest.mark.parametrize("kind,n", [("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4), ("E", 6)])
def test_split_closed_form_matches_symbolic_route(kind, n):
    """dim z = 1 closed form against direct evaluation of b_λ at λ = t."""
    alg = build_split_nilradical(build_root_system(kind, n))
    for r in range(1, len(alg.layers) + 1):
        poly = layer_pfaffian(alg, r)
        for t in (Q(1), Q(-2), Q(3, 7)):
            assert poly([t]) == pfaffian(b_matrix(alg, r, [t]))


def test_a5_restricted_density_is_minus_square():
    alg = build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5})
    poly = layer_pfaffian(alg, 1)
    assert poly.degree == alg.d(1) == 4
    rng = random.Random(3)
    for _ in range(20):
        lam = [Q(rng.randint(-4, 4)) for _ in range(4)]
        assert poly(lam) == pfaffian(b_matrix(alg, 1, lam))
        assert poly(lam) <= 0


def test_e6_f4_density_matches_numeric_pfaffian():
    alg = build_restricted_nilradical(build_root_system("E", 6), {2, 3, 4, 5})
    poly = layer_pfaffian(alg, 1)
    assert poly.is_homogeneous() and poly.degree == 8
    rng = random.Random(5)
    for _ in range(10):
        lam = [Q(rng.randint(-3, 3)) for _ in range(8)]
        assert poly(lam) == pfaffian(b_matrix(alg, 1, lam))


def test_symbolic_budget_refuses_large_layers(monkeypatch):
    import cascade_lie.plancherel as pl

    alg = build_restricted_nilradical(build_root_system("E", 6), {2, 3, 4, 5})
    monkeypatch.setattr(pl, "SYMBOLIC_MAX_V", 8)
    with pytest.raises(ValueError, match="find_nondegenerate_lambda"):
        pl.layer_pfaffian(alg, 1)


# constants, degrees --------------------------------------------------------------


@pytest.mark.parametrize("ell,c", [(2, 1), (3, 2), (4, 2**2 * 2), (5, 96)])
def test_plancherel_constant(ell, c):
    assert plancherel_constant(build_upper_triangular(ell)) == c


def test_abelian_constant_is_one():
    assert plancherel_constant(build_restricted_nilradical(build_root_system("A", 3), {1, 3})) == 1


def test_formal_degree_ell4():
    alg = build_upper_triangular(4)
    assert formal_degree(alg, [2, 7]) == 4
    assert is_stepwise_si(alg, [2, 7])
    assert not is_stepwise_si(alg, [0, 7])
    # v_2 = 0 here, so Pf(b_{λ_2}) is the empty Pfaffian 1 whatever λ_2 is
    assert is_stepwise_si(alg, [2, 0])


@pytest.mark.parametrize("lam", [[0, 1], [1, 0], [0, 0]])
def test_zero_layer_breaks_si_when_v_r_nonzero(lam):
    alg = build_upper_triangular(5)
    assert (alg.d(1), alg.d(2)) == (3, 1)
    assert not is_stepwise_si(alg, lam)
    assert formal_degree(alg, lam) == 0


def test_split_g2_random_lambda_is_si():
    alg = build_split_nilradical(build_root_system("G", 2))
    rng = random.Random(11)
    for _ in range(10):
        lam = [Q(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1)) for _ in range(2)]
        assert is_stepwise_si(alg, lam)


# witnesses ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kind,n,zero,top,bottom",
    [
        ("E", 6, {2, 3, 4, 5}, (1, 2, 2, 3, 2, 1), (1, 0, 1, 1, 1, 1)),
        ("A", 5, {1, 3, 5}, (1, 1, 1, 1, 1), (0, 1, 1, 1, 0)),
    ],
)
def test_sparse_witness_for_restricted(kind, n, zero, top, bottom):
    alg = build_restricted_nilradical(build_root_system(kind, n), zero)
    w = find_nondegenerate_lambda(alg, 1)
    assert w is not None and w.pattern == "top+bottom" and w.trials == 1
    support = {alg.roots[alg.centers[0][p]] for p, x in enumerate(w.lam) if x}
    assert support == {top, bottom}
    assert pfaffian(b_matrix(alg, 1, w.lam)) == w.pfaffian != 0


def test_split_witness_is_immediate():
    alg = build_split_nilradical(build_root_system("E", 7))
    for r in range(1, len(alg.layers) + 1):
        w = find_nondegenerate_lambda(alg, r)
        assert w.trials == 1 and w.lam == (1,)


def test_witness_seed_env(monkeypatch):
    monkeypatch.delenv("CASCADE_LIE_SEED", raising=False)
    assert witness_seed() == 1729
    monkeypatch.setenv("CASCADE_LIE_SEED", "42")
    assert witness_seed() == 42
    monkeypatch.setenv("CASCADE_LIE_SEED", "nope")
    with pytest.raises(ValueError):
        witness_seed()


def test_random_fallback_is_seeded():
    alg = build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5})
    # a zero Pfaffian on every sparse pattern forces the random phase
    from cascade_lie import plancherel as pl

    patterns = sparse_patterns(alg, 1)
    assert patterns[0][0] == "top+bottom"
    a = pl.find_nondegenerate_lambda(alg, 1, seed=7)
    b = pl.find_nondegenerate_lambda(alg, 1, seed=7)
    assert a == b


# polynomial objects ----------------------------------------------------------------


@st.composite
def polynomials(draw):
    nv = draw(st.integers(1, 3))
    names = tuple(f"l1_{k}" for k in range(1, nv + 1))
    deg = draw(st.integers(0, 4))
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        parts = draw(st.lists(st.integers(0, deg), min_size=nv, max_size=nv))
        parts[-1] = deg - sum(parts[:-1]) if sum(parts[:-1]) <= deg else 0
        if sum(parts) == deg:
            c = draw(rationals)
            if c:
                terms[tuple(parts)] = c
    return PfaffianPolynomial(names, terms)


@settings(max_examples=100, deadline=None)
@given(polynomials())
def test_polynomial_json_round_trip(poly):
    text = poly.dumps()
    back = PfaffianPolynomial.from_json(text)
    assert back.dumps() == text
    assert back.terms == poly.terms
    assert json.loads(text)["vars"] == list(poly.variables)


@pytest.mark.parametrize(
    "alg",
    [
        build_upper_triangular(7),
        build_split_nilradical(build_root_system("F", 4)),
        build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5}),
    ],
    ids=["upper7", "F4", "sl3H"],
)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_homogeneity(alg, data):
    poly = plancherel_polynomial(alg)
    lam = [data.draw(rationals) for _ in all_variables(alg)]
    t = data.draw(rationals)
    assert poly([t * x for x in lam]) == t ** poly.degree * poly(lam)
    assert poly.degree == sum(alg.d(r) for r in range(1, len(alg.layers) + 1))


# lattices and multiplicities ------------------------------------------------------


def test_heisenberg_multiplicity_matches_orbit_count():
    alg = build_upper_triangular(3)
    lat = LatticeSpec.standard(alg)
    for n in range(-3, 4):
        assert multiplicity(alg, lat, [n]) == heisenberg_multiplicity(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, -1, -5])
def test_heisenberg_multiplicity_is_abs(n):
    alg = build_upper_triangular(3)
    assert multiplicity(alg, LatticeSpec.standard(alg), [n]) == abs(n)


@pytest.mark.parametrize("lam", [Q(1, 2), Q(7, 3), 0])
def test_heisenberg_multiplicity_zero_off_lattice(lam):
    alg = build_upper_triangular(3)
    assert multiplicity(alg, LatticeSpec.standard(alg), [lam]) == 0


def test_scaled_lattice_moves_the_support():
    alg = build_upper_triangular(3)
    lat = LatticeSpec(((Q(2),),), (1,))
    assert dual_lattice(lat).basis == ((Q(1, 2),),)
    assert in_dual(lat, [Q(1, 2)])
    assert multiplicity(alg, lat, [Q(1, 2)]) == Q(1, 2)
    table = multiplicity_table(alg, lat, 1)
    assert table.flags  # |P| = 1/2 is not an integer and gets flagged


def test_lattice_validation():
    with pytest.raises(ValueError):
        LatticeSpec(((1, 1), (0, 1)), (1, 1))  # couples two blocks
    with pytest.raises(ValueError):
        LatticeSpec(((1, 0), (0, 0)), (1, 1))
    with pytest.raises(ValueError):
        LatticeSpec(((1, 0),), (1,))
    alg = build_upper_triangular(4)
    with pytest.raises(ValueError):
        multiplicity(alg, LatticeSpec(((1,),), (1,)), [1])


def test_table_and_round_trip():
    alg = build_upper_triangular(3)
    table = multiplicity_table(alg, LatticeSpec.standard(alg), 3)
    assert [(lam[0], m) for lam, m in table.entries] == [(Q(k), Q(abs(k))) for k in (-3, -2, -1, 1, 2, 3)]
    text = table.dumps()
    assert MultiplicityReport.from_json(text).dumps() == text
    assert "flags" not in json.loads(text)


def test_dual_of_dual_is_original():
    lat = LatticeSpec(((Q(2), Q(1), 0), (Q(1), Q(3), 0), (0, 0, Q(5, 2))), (2, 1))
    assert dual_lattice(dual_lattice(lat)).basis == lat.basis


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_multiplicity_sign_flip_invariance(lam):
    alg = build_upper_triangular(5)
    lat = LatticeSpec.standard(alg)
    base = multiplicity(alg, lat, lam)
    for flip in ([-1, 1], [1, -1], [-1, -1]):
        assert multiplicity(alg, lat, [s * x for s, x in zip(flip, lam)]) == base
