import pytest

from algebroids.gallery import (
    PROVENANCE, bracket_cochain_of, get_entry, is_derivation_matrix, list_examples, load_example, omega_d, quadratic_candidate,
    quadratic_candidates, run_expectations,
)
from algebroids.deformation import cocycle_check, jacobiator
from algebroids.model import SL2, SO3, from_bracket_table, lie_algebra, validate
from algebroids.multivector import lie_poisson_bivector, schouten

# h4_central and the quadratic sweep are exercised by the acceptance suite and the CLI goldens
FAST = [n for n in list_examples() if n not in ("h4_central", "quadratic_poisson_candidates")]


def test_registry_names():
    names = list_examples()
    assert len(names) == len(set(names))
    for required in ("abelian(3)", "sl2", "heisenberg", "so3", "tangent(1)", "tangent(2)", "lie_poisson(so3)",
                     "h4_central", "quadratic_poisson_candidates"):
        assert required in names
    with pytest.raises(KeyError):
        get_entry("nope")


@pytest.mark.parametrize("name", list_examples())
def test_every_entry_validates(name):
    A, exps = load_example(name)
    assert validate(A).ok
    assert exps and all(e.provenance in PROVENANCE for e in exps)


@pytest.mark.parametrize("name", FAST)
def test_expectations_pass(name):
    rep = run_expectations(name)
    assert rep.ok, rep.to_dict()


def test_tampered_constants_fail():
    bad = dict(SL2)
    bad[(1, 2)] = {0: 1, 1: 1}  # [e,f] = h + e breaks Jacobi
    A = from_bracket_table(0, 3, bad, name="sl2", check=False)
    rep = run_expectations("sl2", A)
    assert not rep.ok
    assert not rep.results[0].passed and rep.results[0].name == "validate"


def test_omega_d_examples():
    A, _ = load_example("h4_central")
    g = lie_algebra(3, SO3, "so3")
    ad1 = ((0, 0, 0), (0, 0, -1), (0, 1, 0))  # columns: ad_{e1} e_i, as matrix[k][i]
    assert is_derivation_matrix(g, ad1)
    assert cocycle_check(A, omega_d(A, ad1))
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert not is_derivation_matrix(g, ident)
    assert not cocycle_check(A, omega_d(A, ident))


def test_quadratic_examples():
    A, _ = load_example("quadratic_poisson_candidates")
    pi1 = lie_poisson_bivector(3, SO3)
    cands = list(quadratic_candidates())
    assert len(cands) == 9842
    # M = Id gives W = (x1^2, x2^2, x3^2): compatible with pi1 is decided by the derived rule
    M = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert schouten(pi1, quadratic_candidate(M)).is_zero() == (M[2][1] == M[2][0] and M[1][2] == M[1][0]
                                                               and M[0][2] == M[0][1])
    Om = bracket_cochain_of(quadratic_candidate(M), A)
    assert jacobiator(A, Om).is_zero == schouten(quadratic_candidate(M), quadratic_candidate(M)).is_zero()
