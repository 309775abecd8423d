import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tcrp.algebra import (
    Hypercomplex,
    NonsingularityError,
    axialize,
    cd_multiply,
    cd_multiply_array,
    conj_array,
    conjugate,
    coordinate_pairing,
    division_map,
    restrict_map,
)
from tcrp.projective import ProjectivePoint

# Independent oracle: octonion units e1..e7 (e4 = e, e1..e3 = i, j, k, e5..e7 = ie, je, ke)
# multiply along these oriented triples, e_a e_b = e_c cyclically.
FANO = [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (1, 7, 6), (2, 5, 7), (3, 6, 5)]


def fano_table():
    T = np.zeros((8, 8, 8))
    for a in range(8):
        T[0, a, a] = T[a, 0, a] = 1
    for a in range(1, 8):
        T[a, a, 0] = -1
    for a, b, c in FANO:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            T[x, y, z] = 1
            T[y, x, z] = -1
    return T


def fano_mult(x, y):
    return np.einsum("i,j,ijk->k", x, y, fano_table())


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vec(d):
    return arrays(np.float64, d, elements=finite)


def unit(d, idx):
    return Hypercomplex.unit(d, idx)


def test_quaternion_table():
    one, i, j, k = (unit(4, a) for a in range(4))
    assert i * j == k
    assert j * k == i
    assert k * i == j
    assert j * i == Hypercomplex.from_array(-k.array())
    for q in (i, j, k):
        assert q * q == Hypercomplex.from_array(-one.array())


@pytest.mark.parametrize("d", [2, 4, 8])
def test_imaginary_units_square_to_minus_one(d):
    for a in range(1, d):
        e = unit(d, a)
        assert np.array_equal((e * e).array(), -unit(d, 0).array())


def test_octonion_table_matches_fano_oracle():
    T = fano_table()
    for a, b in itertools.product(range(8), repeat=2):
        got = cd_multiply_array(np.eye(8)[a], np.eye(8)[b])
        assert np.array_equal(got, T[a, b]), (a, b)


def test_octonions_not_associative():
    i, j, e = unit(8, 1), unit(8, 2), unit(8, 4)
    assert (i * j) * e != i * (j * e)
    assert np.array_equal(((i * j) * e).array(), -(i * (j * e)).array())


@given(vec(8), vec(8))
def test_octonion_product_against_oracle(x, y):
    np.testing.assert_allclose(cd_multiply_array(x, y), fano_mult(x, y), atol=1e-9)


@given(st.sampled_from([1, 2, 4, 8]).flatmap(lambda d: st.tuples(vec(d), vec(d))))
def test_norm_multiplicative(xy):
    x, y = xy
    lhs = np.linalg.norm(cd_multiply_array(x, y))
    assert lhs == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y), rel=1e-9, abs=1e-9)


@given(vec(8))
def test_conjugation(x):
    c = conj_array(x)
    assert c[0] == x[0]
    assert np.array_equal(c[1:], -x[1:])
    np.testing.assert_allclose(cd_multiply_array(x, c), [x @ x] + [0] * 7, atol=1e-9)
    h = Hypercomplex.from_array(x)
    assert np.array_equal(conjugate(conjugate(h)).array(), x)


def test_hypercomplex_rejects_bad_dim():
    with pytest.raises(ValueError):
        Hypercomplex.from_array([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        cd_multiply(unit(2, 0), unit(4, 0))


def test_division_map_examples():
    f = division_map(4)
    i, j, k = np.eye(4)[1:]
    # f(u, v) = u * conj(v)
    np.testing.assert_array_equal(f(i, j), cd_multiply_array(i, -j))
    np.testing.assert_array_equal(f(i, j), [0, 0, 0, -1])
    np.testing.assert_array_equal(f(i, i), [1, 0, 0, 0])
    assert f.diagonal_positive and f.bilinear


def test_division_map_d8_matches_doubling_form():
    # (q + Qe)(conj(r) - R e) written out with quaternions
    rng = np.random.default_rng(3)
    qm = lambda a, b: cd_multiply_array(a, b)
    qc = conj_array
    for _ in range(20):
        u, v = rng.standard_normal(8), rng.standard_normal(8)
        q, Q, r, R = u[:4], u[4:], v[:4], v[4:]
        a, b = qc(r), -R
        want = np.concatenate([qm(q, a) - qm(qc(b), Q), qm(b, q) + qm(Q, qc(a))])
        np.testing.assert_allclose(division_map(8)(u, v), want, atol=1e-12)


def det_formula(x, y):
    # <x,y> - det12 i - det13 j - det23 k on R^3
    d = lambda a, b: x[a] * y[b] - x[b] * y[a]
    return np.array([x @ y, -d(0, 1), -d(0, 2), -d(1, 2)])


def test_restriction_matches_determinant_formula():
    g = restrict_map(division_map(4), 3)
    np.testing.assert_array_equal(g([1, 0, 0], [0, 1, 0]), [0, -1, 0, 0])
    rng = np.random.default_rng(0)
    for _ in range(100):
        x, y = rng.standard_normal(3), rng.standard_normal(3)
        np.testing.assert_allclose(g(x, y), det_formula(x, y), atol=1e-12)


def test_restriction_shapes():
    f = division_map(8)
    assert restrict_map(f, 8) is f
    g = restrict_map(f, 5)
    assert (g.input_dim, g.output_dim) == (5, 8)
    with pytest.raises(ValueError):
        g(np.ones(4), np.ones(5))
    with pytest.raises(ValueError):
        restrict_map(f, 9)


def test_structure_tensor_reproduces_map():
    f = restrict_map(division_map(8), 6)
    rng = np.random.default_rng(1)
    u, v = rng.standard_normal(6), rng.standard_normal(6)
    np.testing.assert_allclose(np.einsum("kij,i,j->k", f.structure, u, v), f(u, v), atol=1e-12)


def test_pairing_reads_coordinates():
    f = restrict_map(division_map(8), 7)
    rng = np.random.default_rng(2)
    U, V = rng.standard_normal((50, 7)), rng.standard_normal((50, 7))
    F = f(U, V)
    for j in range(1, 9):
        phi = coordinate_pairing(f, j)
        np.testing.assert_allclose(phi(U, V), F[:, j - 1], atol=1e-12)
    assert coordinate_pairing(f, 1).positive
    assert not coordinate_pairing(f, 2).positive
    with pytest.raises(IndexError):
        coordinate_pairing(f, 9)


def test_axialize():
    g = axialize(division_map(4))
    A = ProjectivePoint.from_vector([0, 0, 1, 0])
    B = ProjectivePoint.from_vector([0, 0, 0, 1])
    assert g(A, B) == ProjectivePoint.from_vector([0, 1, 0, 0])
    # sign of the representative does not matter
    assert g(-A, B) == g(A, B)


def test_axialize_detects_singular_map():
    from tcrp.algebra import NonsingularMap

    zero = NonsingularMap(2, 2, lambda u, v: np.zeros(np.broadcast_shapes(u.shape, v.shape)))
    with pytest.raises(NonsingularityError):
        axialize(zero)(ProjectivePoint.from_vector([1, 0]), ProjectivePoint.from_vector([0, 1]))


@settings(max_examples=50)
@given(st.integers(1, 8), st.data())
def test_restricted_maps_bihomogeneous(m, data):
    d = next(d for d in (1, 2, 4, 8) if d >= m)
    f = restrict_map(division_map(d), m)
    u, v = data.draw(vec(m)), data.draw(vec(m))
    lam, mu = data.draw(finite), data.draw(finite)
    np.testing.assert_allclose(f(lam * u, mu * v), lam * mu * f(u, v), atol=1e-7)
