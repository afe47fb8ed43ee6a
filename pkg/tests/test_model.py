import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from algebroids.errors import AxiomError, DimensionMismatchError
from algebroids.model import (
    abelian, anchor_apply, bracket, cotangent_algebroid, from_arrays, from_bracket_table, lie_algebra,
    tangent_algebroid, validate, vf_bracket, vscale, vadd, apply_vf,
)
from algebroids.multivector import Multivector, schouten
from algebroids.poly import Ring
from conftest import random_poly, random_section


def test_abelian_and_sl2_validate(sl2):
    assert validate(abelian(2)).ok
    assert validate(sl2).ok
    A = lie_algebra(2, {})
    assert (A.base_dim, A.rank, A.is_abelian) == (0, 2, True)


def test_non_skew_data_reports_witness():
    z = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    z[2][0][1] = 1
    z[2][1][0] = 1
    A = from_arrays(0, 3, z, [], check=False)
    rep = validate(A)
    assert not rep["skewness"].passed
    assert rep["skewness"].witnesses[0].indices == (0, 1, 2)
    with pytest.raises(AxiomError):
        from_arrays(0, 3, z, [], check=True)


def test_from_table_rejects_lower_entries():
    with pytest.raises(DimensionMismatchError):
        from_bracket_table(0, 2, {(1, 0): {0: 1}})


def test_bracket_examples(sl2):
    e, f, h = sl2.unit(1), sl2.unit(2), sl2.unit(0)
    assert bracket(sl2, e, f) == h
    T = tangent_algebroid(1)
    x = T.x(0)
    assert bracket(T, (x,), (T.ring.one(),)) == (-T.ring.one(),)
    ab = abelian(2, base_dim=1)
    X = (ab.x(0), ab.ring.one())
    assert bracket(ab, X, X[::-1]) == ab.zero_section()


def test_anchor_examples(lp):
    T = tangent_algebroid(2)
    assert anchor_apply(T, T.unit(0)) == (T.ring.one(), T.ring.zero())
    assert anchor_apply(abelian(2, 1), (abelian(2, 1).x(0),) * 2) == (Ring.base(1).zero(),)
    x = [lp.x(m) for m in range(3)]
    assert anchor_apply(lp, lp.unit(0)) == (lp.ring.zero(), x[2], -x[1])


def test_lie_poisson_structure_constants(lp, so3):
    for i, j, k in product(range(3), repeat=3):
        assert lp.structure[k][i][j] == so3.structure[k][i][j].constant_value()


def test_cotangent_of_zero_is_abelian():
    A = cotangent_algebroid(Multivector.zero(Ring.base(2), 2, 2))
    assert A.is_abelian and validate(A).ok


def test_listed_bivector_is_poisson():
    # x1 d1^d2 + d2^d3 satisfies Jacobi; checked by hand and by both tests below
    R = Ring.base(3)
    pi = Multivector.bivector(R, 3, {(0, 1): R.var(0), (1, 2): R.one()})
    assert schouten(pi, pi).is_zero()
    assert validate(cotangent_algebroid(pi)).ok


def test_non_poisson_bivector_fails():
    R = Ring.base(3)
    pi = Multivector.bivector(R, 3, {(0, 1): R.one(), (1, 2): R.var(1)})
    assert not schouten(pi, pi).is_zero()
    rep = validate(cotangent_algebroid(pi))
    assert not rep.ok
    assert rep.summary()


ALGEBROIDS = ["sl2", "lp", "t2", "heis"]


@pytest.mark.parametrize("name", ALGEBROIDS)
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_bracket_laws(name, seed, request):
    A = request.getfixturevalue(name)
    rng = random.Random(seed)
    X, Y = random_section(A, rng), random_section(A, rng)
    f = random_poly(A.ring, rng, 2, A.base_dim)
    assert vadd(bracket(A, X, Y), bracket(A, Y, X)) == A.zero_section()
    lhs = bracket(A, X, vscale(f, Y))
    rhs = vadd(vscale(f, bracket(A, X, Y)), vscale(apply_vf(anchor_apply(A, X), f), Y))
    assert lhs == rhs
    assert anchor_apply(A, bracket(A, X, Y)) == vf_bracket(anchor_apply(A, X), anchor_apply(A, Y))


def _bivector_family():
    R = Ring.base(3)
    x = [R.var(i) for i in range(3)]
    coeffs = [R.zero(), R.one(), x[0], x[1], x[2], x[0] * x[1]]
    rng = random.Random(7)
    out = []
    for _ in range(40):
        out.append(Multivector.bivector(R, 3, {(0, 1): rng.choice(coeffs), (0, 2): rng.choice(coeffs),
                                            (1, 2): rng.choice(coeffs)}))
    return out


def test_cotangent_validates_iff_poisson():
    seen = set()
    for pi in _bivector_family():
        poisson = schouten(pi, pi).is_zero()
        seen.add(poisson)
        assert validate(cotangent_algebroid(pi)).ok == poisson
    assert seen == {True, False}
