from __future__ import annotations

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascade_lie.exact import rank
from cascade_lie.liealg import (
    NilpotentAlgebra,
    basis_vector,
    bracket,
    build_restricted_nilradical,
    build_split_nilradical,
    build_upper_triangular,
    chevalley_constants,
    is_nilpotent,
    lower_central_series,
    pairing_matrix,
    pairing_rank,
    verify_jacobi,
    verify_setup,
)
from cascade_lie.rootsys import add, build_root_system

SPLIT = [("A", 2), ("A", 3), ("B", 2), ("G", 2), ("F", 4), ("B", 4), ("C", 4), ("D", 5), ("E", 6), ("E", 7)]


def _matrix_unit(ell, i, j):
    m = [[Q(0)] * ell for _ in range(ell)]
    m[i - 1][j - 1] = Q(1)
    return m


def _commutator(a, b):
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


def _parse(label):
    i, j = label[2:-1].split(",")
    return int(i), int(j)


# upper-triangular ------------------------------------------------------------------


@pytest.mark.parametrize("ell", range(2, 8))
def test_upper_triangular_matches_matrix_commutators(ell):
    alg = build_upper_triangular(ell)
    pos = {_parse(lab): k for k, lab in enumerate(alg.labels)}
    for (i, j), a in pos.items():
        for (m, n), b in pos.items():
            c = _commutator(_matrix_unit(ell, i, j), _matrix_unit(ell, m, n))
            expect = {pos[(p, q)]: c[p - 1][q - 1] for (p, q) in pos if c[p - 1][q - 1]}
            assert alg.bracket_basis(a, b) == expect


def test_ell4_layer_one_basis():
    alg = build_upper_triangular(4)
    m1 = {alg.labels[i] for i in alg.layers[0]}
    assert m1 == {"e(1,2)", "e(1,3)", "e(2,4)", "e(3,4)", "e(1,4)"}
    assert [alg.labels[i] for i in alg.centers[0]] == ["e(1,4)"]
    assert [alg.labels[i] for i in alg.layers[1]] == ["e(2,3)"]


def test_ell3_is_heisenberg():
    alg = build_upper_triangular(3)
    assert alg.dim == 3
    e12, e23, e13 = (basis_vector(alg, alg.index(x)) for x in ("e(1,2)", "e(2,3)", "e(1,3)"))
    assert bracket(alg, e12, e23) == e13


def test_ell2_is_abelian_line():
    alg = build_upper_triangular(2)
    assert alg.dim == 1 and not alg.sc


@pytest.mark.parametrize("ell", [1, 0, -3])
def test_ell_below_two_rejected(ell):
    with pytest.raises(ValueError):
        build_upper_triangular(ell)


def test_bracket_examples_ell4():
    alg = build_upper_triangular(4)
    v = {lab: basis_vector(alg, alg.index(lab)) for lab in alg.labels}
    assert bracket(alg, v["e(1,2)"], v["e(2,4)"]) == v["e(1,4)"]
    assert not any(bracket(alg, v["e(1,2)"], v["e(3,4)"]))


def test_bracket_rejects_length_mismatch():
    alg = build_upper_triangular(4)
    with pytest.raises(ValueError):
        bracket(alg, [Q(1)] * 3, [Q(0)] * alg.dim)


@pytest.mark.parametrize("ell", range(3, 9))
def test_upper_layers_are_heisenberg(ell):
    alg = build_upper_triangular(ell)
    for r in range(1, ell // 2 + 1):
        assert len(alg.layers[r - 1]) == 2 * (ell - 2 * r) + 1
        assert len(alg.centers[r - 1]) == 1
        assert pairing_rank(alg, r) == 2 * (ell - 2 * r)


@pytest.mark.parametrize("ell", range(2, 9))
def test_upper_jacobi_setup_nilpotent(ell):
    alg = build_upper_triangular(ell)
    assert verify_jacobi(alg).ok
    assert verify_setup(alg).ok
    assert is_nilpotent(alg)
    assert len(lower_central_series(alg)) <= alg.dim + 1


# Chevalley constants ---------------------------------------------------------------


def _p(sys, a, b):
    """Root-string oracle: largest k with b − k·a a root, by direct scanning."""
    roots = set(sys.positive_roots) | {tuple(-c for c in x) for x in sys.positive_roots}
    k = 0
    while tuple(y - (k + 1) * x for x, y in zip(a, b)) in roots:
        k += 1
    return k


@pytest.mark.parametrize("kind,n", SPLIT + [("E", 8)])
def test_constants_have_root_string_magnitudes(kind, n):
    sys = build_root_system(kind, n)
    table = chevalley_constants(sys)
    for a in sys.positive_roots:
        for b in sys.positive_roots:
            s = add(a, b)
            if sys.is_positive_root(s):
                assert abs(table[(a, b)]) == _p(sys, a, b) + 1
                assert table[(a, b)] == -table[(b, a)]
            else:
                assert table[(a, b)] == 0


def test_a2_extraspecial_sign():
    assert chevalley_constants(build_root_system("A", 2))[((1, 0), (0, 1))] == 1


def test_g2_constants():
    t = chevalley_constants(build_root_system("G", 2))
    assert abs(t[((1, 0), (1, 1))]) == 2
    assert abs(t[((1, 0), (2, 1))]) == 3
    # ψ1 is short, so ψ1 + 2ψ2 is not a root
    assert t[((0, 1), (1, 1))] == 0


def test_b2_constant():
    assert abs(chevalley_constants(build_root_system("B", 2))[((0, 1), (1, 1))]) == 2


def test_nonreduced_rejected():
    with pytest.raises(ValueError):
        chevalley_constants(build_root_system("BC", 2))
    with pytest.raises(ValueError):
        build_split_nilradical(build_root_system("BC", 2))


# split nilradicals ----------------------------------------------------------------


@pytest.mark.parametrize("kind,n", SPLIT)
def test_split_jacobi_setup_pairing(kind, n):
    alg = build_split_nilradical(build_root_system(kind, n))
    assert verify_jacobi(alg).ok
    assert verify_setup(alg).ok
    assert is_nilpotent(alg)
    for r in range(1, len(alg.layers) + 1):
        assert len(alg.centers[r - 1]) == 1
        assert pairing_rank(alg, r) == len(alg.complements[r - 1])


@pytest.mark.parametrize(
    "kind,n,dims",
    [
        ("F", 4, (15, 5, 3, 1)),
        ("E", 6, (21, 9, 5, 1)),
        ("B", 4, (11, 3, 1, 1)),
        ("C", 4, (7, 5, 3, 1)),
        ("D", 5, (13, 5, 1, 1)),
        ("E", 7, (33, 17, 1, 9, 1, 1, 1)),
    ],
)
def test_split_layer_dimensions(kind, n, dims):
    alg = build_split_nilradical(build_root_system(kind, n))
    assert tuple(len(m) for m in alg.layers) == dims


def test_g2_first_layer_is_five_dim_heisenberg():
    alg = build_split_nilradical(build_root_system("G", 2))
    assert len(alg.layers[0]) == 5
    (z,) = alg.centers[0]
    assert alg.roots[z] == (3, 2)
    v = alg.complements[0]
    derived = {k for i in v for j in v for k in alg.bracket_basis(i, j)}
    assert derived == {z}


@pytest.mark.parametrize("ell", range(2, 8))
def test_split_a_matches_upper_triangular_layers(ell):
    split = build_split_nilradical(build_root_system("A", ell - 1))
    upper = build_upper_triangular(ell)
    assert [len(m) for m in split.layers] == [len(m) for m in upper.layers]
    assert [len(z) for z in split.centers] == [len(z) for z in upper.centers]


def test_flipped_sign_breaks_jacobi():
    alg = build_split_nilradical(build_root_system("B", 3))
    key = next(k for k, v in sorted(alg.sc.items()) if v)
    sc = dict(alg.sc)
    sc[key] = {k: -c for k, c in sc[key].items()}
    report = verify_jacobi(alg.with_structure(sc))
    assert not report.ok
    assert "witness" in report.failures()[0].detail


def test_swapped_layers_break_ideal_condition():
    alg = build_upper_triangular(5)
    bad = alg.with_layers(alg.layers[::-1], alg.centers[::-1])
    report = verify_setup(bad)
    assert not report.checks[1].passed
    assert report.checks[1].name.startswith("(i)")


# restricted nilradicals ------------------------------------------------------------


def test_sl3h():
    alg = build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5})
    assert len(alg.centers[0]) == 4
    assert len(alg.complements[0]) == 8
    assert verify_jacobi(alg).ok and verify_setup(alg).ok


def test_e6_f4_dimensions():
    alg = build_restricted_nilradical(build_root_system("E", 6), {2, 3, 4, 5})
    assert alg.dim == 24
    assert len(alg.centers[0]) == 8
    # 16 = two fibers of eight over the simple restricted roots
    assert len(alg.complements[0]) == 16
    assert verify_jacobi(alg).ok and verify_setup(alg).ok


def test_sl2h_is_abelian():
    alg = build_restricted_nilradical(build_root_system("A", 3), {1, 3})
    assert alg.dim == 4
    assert not any(alg.sc.values())
    assert len(alg.layers) == 1


@pytest.mark.parametrize("kind,n,zero", [("A", 5, {1, 2}), ("E", 6, {1}), ("D", 4, {1, 3, 4})])
def test_unsupported_patterns_rejected(kind, n, zero):
    with pytest.raises(ValueError):
        build_restricted_nilradical(build_root_system(kind, n), zero)


# serialization ----------------------------------------------------------------------


@pytest.mark.parametrize(
    "build",
    [
        lambda: build_upper_triangular(6),
        lambda: build_split_nilradical(build_root_system("G", 2)),
        lambda: build_split_nilradical(build_root_system("E", 6)),
        lambda: build_restricted_nilradical(build_root_system("E", 6), {2, 3, 4, 5}),
    ],
)
def test_json_round_trip_is_bit_exact(build):
    alg = build()
    text = alg.dumps()
    back = NilpotentAlgebra.from_json(text)
    assert back.dumps() == text
    assert back.labels == alg.labels
    assert all(back.bracket_basis(i, j) == alg.bracket_basis(i, j) for i in range(alg.dim) for j in range(alg.dim))


def test_from_json_rejects_unordered_keys():
    data = build_upper_triangular(3).to_json()
    data["sc"] = [[1, 0, [[2, "1/1"]]]]
    with pytest.raises(ValueError):
        NilpotentAlgebra.from_json(data)


# properties on random vectors ----------------------------------------------------

ALGEBRAS = [
    build_upper_triangular(5),
    build_split_nilradical(build_root_system("G", 2)),
    build_split_nilradical(build_root_system("B", 3)),
    build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5}),
]
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def algebra_and_vectors(draw, count):
    alg = draw(st.sampled_from(ALGEBRAS))
    vecs = [draw(st.lists(rationals, min_size=alg.dim, max_size=alg.dim)) for _ in range(count)]
    return alg, vecs


@settings(max_examples=80, deadline=None)
@given(algebra_and_vectors(3), rationals)
def test_bracket_bilinear_antisymmetric(data, t):
    alg, (x, y, w) = data
    assert not any(bracket(alg, x, x))
    assert bracket(alg, x, y) == [-c for c in bracket(alg, y, x)]
    lhs = bracket(alg, [a + t * b for a, b in zip(x, w)], y)
    rhs = [a + t * b for a, b in zip(bracket(alg, x, y), bracket(alg, w, y))]
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(algebra_and_vectors(3))
def test_jacobi_on_random_vectors(data):
    alg, (x, y, w) = data
    total = [
        a + b + c
        for a, b, c in zip(
            bracket(alg, x, bracket(alg, y, w)),
            bracket(alg, y, bracket(alg, w, x)),
            bracket(alg, w, bracket(alg, x, y)),
        )
    ]
    assert not any(total)


def test_pairing_matrix_is_skew():
    alg = build_split_nilradical(build_root_system("F", 4))
    for r in range(1, len(alg.layers) + 1):
        m = pairing_matrix(alg, r)
        assert all(m[i][j] == -m[j][i] for i in range(len(m)) for j in range(len(m)))
        assert rank(m) == len(m)
