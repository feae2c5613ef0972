import random

import pytest

from symplectic_factor.algebra import GaussianRational, Matrix, MultiPoly, exact_rank
from symplectic_factor.factorization import random_chain
from symplectic_factor.fiber import (
    Family, Parity, ReductionError, StratumLabel, all_strata, check_acyclic, check_multilinearity, check_tangency,
    classify_stratum, evaluate_plan, identities_hold_symbolically, in_singular_set, is_multilinear, jacobian_phi,
    reduce_fiber, sample_smooth_fiber_point, shear_fields, spanning_rank, stratum_coverage, stratum_representative,
    tangent_dimension, verify_reduction,
)
from symplectic_factor.rings import Ring
from symplectic_factor.symplectic import ElementaryChain, ElementarySymplectic, Sign, phi


def identity_chain(n, K):
    factors = [ElementarySymplectic(Sign.MINUS if k % 2 == 0 else Sign.PLUS, Matrix.identity(n), Matrix.zeros(n, n))
               for k in range(K)]
    return ElementaryChain(tuple(factors))


def with_entry(chain, level, which, i, j, value):
    factors = list(chain.factors)
    e = factors[level - 1]
    m = e.A if which == "A" else e.Z
    rows = m.to_rows()
    rows[i][j] = value
    if which == "Z":
        rows[j][i] = value
    m = Matrix.from_rows(rows)
    factors[level - 1] = ElementarySymplectic(e.sign, m if which == "A" else e.A, m if which == "Z" else e.Z)
    return ElementaryChain(tuple(factors))


def singular_point(n, K, rng):
    """Random chain forced into the singular set: Z_i e_n = 0 (i < K), A_j e_n = e_n (1 < j < K)."""
    chain = random_chain(n, K, rng)
    for level in range(1, K + 1):
        for r in range(n):
            if level < K:
                chain = with_entry(chain, level, "Z", r, n - 1, 0)
            if 1 < level < K and r < n - 1:
                chain = with_entry(chain, level, "A", r, n - 1, 0)
    return chain


def test_singular_set_examples():
    assert in_singular_set(identity_chain(2, 3))
    assert not in_singular_set(with_entry(identity_chain(2, 3), 1, "Z", 1, 1, 1))
    assert not in_singular_set(with_entry(identity_chain(2, 3), 2, "A", 0, 1, 1))
    # the last level is unconstrained
    assert in_singular_set(with_entry(identity_chain(2, 3), 3, "Z", 1, 1, 1))
    assert in_singular_set(with_entry(identity_chain(2, 3), 1, "A", 0, 1, 1))


def test_jacobian_single_variable():
    chain = ElementaryChain((ElementarySymplectic(Sign.MINUS, Matrix.identity(1), Matrix.from_rows([[7]])),))
    assert phi(chain).vector == (7, 1)
    assert jacobian_phi(chain) == Matrix.from_rows([[1], [0]])


def test_jacobian_matches_difference_quotient():
    # phi is polynomial, so phi(x + t e_k) - phi(x) is exactly t * column k + O(t^2);
    # with t symbolic the linear coefficient is the column.
    rng = random.Random(0)
    chain = random_chain(2, 3, rng)
    jac = jacobian_phi(chain)
    t = MultiPoly.variable(0, 1)
    col = 0
    for level in range(1, 4):
        e = chain.factors[level - 1]
        for which, pairs in (("A", [(0, 1)]), ("Z", [(0, 0), (0, 1), (1, 1)])):
            for i, j in pairs:
                base = (e.A if which == "A" else e.Z)[i, j]
                moved = with_entry(chain, level, which, i, j, base + t)
                for r, value in enumerate(phi(moved).vector):
                    value = value if isinstance(value, MultiPoly) else MultiPoly.constant(value, 1)
                    assert value.diff(0).evaluate({0: 0}) == jac[r, col]
                col += 1
    assert col == jac.cols


def test_jacobian_rank_on_and_off_singular_set():
    rng = random.Random(1)
    assert exact_rank(jacobian_phi(identity_chain(2, 3))) < 4
    for _ in range(5):
        chain = random_chain(2, 3, rng)
        assert not in_singular_set(chain)
        assert exact_rank(jacobian_phi(chain)) == 4
        s = singular_point(2, 3, rng)
        assert in_singular_set(s)
        assert exact_rank(jacobian_phi(s)) < 4


def test_jacobian_rejects_symbolic_points():
    chain = random_chain(2, 2, random.Random(0), Ring("poly", 1))
    with pytest.raises(TypeError):
        jacobian_phi(chain)


def test_classify_examples():
    n = 3
    assert classify_stratum((1, 0, 0, 4, 4, 4), Parity.EVEN) == StratumLabel(Family.G, 1)
    assert classify_stratum((0, 0, 0, 0, 0, 5), Parity.EVEN) == StratumLabel(Family.N, 0)
    assert classify_stratum((0, 0, 0, 3, 0, 0), Parity.EVEN) == StratumLabel(Family.N, n - 1)
    assert classify_stratum((0, 2, 0, 0, 0, 0), Parity.ODD) == StratumLabel(Family.N_ODD, 1)
    assert classify_stratum((9, 9, 9, 0, 1, 0), Parity.ODD) == StratumLabel(Family.G_ODD, 2)
    with pytest.raises(ValueError):
        classify_stratum((0, 0, 0, 0), Parity.EVEN)


@pytest.mark.parametrize("parity", list(Parity))
def test_representatives_land_in_their_stratum(parity):
    for n in (2, 3, 4):
        strata = all_strata(n, parity)
        assert len(strata) == 2 * n
        for label in strata:
            assert classify_stratum(stratum_representative(n, label), parity) == label


def test_reduction_g1_example():
    plan = reduce_fiber((1, 0, 0, 0), 4, 2)
    assert str(plan.stratum) == "G1"
    assert [str(s.var) for s in plan.substitutions] == ["a12_4", "z12_4", "z11_4"]
    assert plan.pivot_coordinate == 1 and plan.rhs == 1
    assert len(plan.identities) == 3
    assert is_multilinear(plan.residual)
    assert check_multilinearity(plan.residual)


def test_reduction_n0_example():
    plan = reduce_fiber((0, 0, 0, 1), 4, 2)
    assert str(plan.stratum) == "N0"
    assert plan.pivot_coordinate == 4 and plan.rhs == 1


def test_reduction_preconditions():
    with pytest.raises(ValueError):
        reduce_fiber((0, 0, 0, 0), 4, 2)
    with pytest.raises(ValueError):
        reduce_fiber((1, 0, 0, 0), 2, 2)
    with pytest.raises(ValueError):
        reduce_fiber((1, 0, 0), 4, 2)


@pytest.mark.parametrize("target", [(1, 0, 0, 0), (0, 0, 0, 1)])
def test_verify_reduction_fifty_trials(target):
    report = verify_reduction(reduce_fiber(target, 4, 2), trials=50, seed=3)
    assert report.passed == 50 and report.ok
    assert report.text().splitlines()[-1] == "SUMMARY pass=50 fail=0"
    assert all(line.startswith("TRIAL ") for line in report.lines)


@pytest.mark.parametrize("n, K", [(2, 3), (2, 4), (2, 5), (3, 3), (3, 4)])
def test_every_stratum_reduces(n, K):
    rng = random.Random(f"{n}{K}")
    for label in all_strata(n, Parity.of(K)):
        target = list(stratum_representative(n, label))
        # scramble the entries that do not affect the stratum
        for k in range(2 * n):
            if target[k] == 0 and classify_stratum(tuple(target[:k] + [1] + target[k + 1:]), Parity.of(K)) == label:
                target[k] = GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3))
        plan = reduce_fiber(tuple(target), K, n)
        assert plan.stratum == label
        assert len(plan.identities) == 2 * n - 1
        check_acyclic(plan)
        assert identities_hold_symbolically(plan)
        assert is_multilinear(plan.residual)
        assert verify_reduction(plan, trials=3, seed=1).ok


def test_verify_reduction_detects_wrong_target():
    plan = reduce_fiber((1, 0, 0, 0), 4, 2)
    report = verify_reduction(plan, target=(2, 0, 0, 0), trials=3, seed=0)
    assert report.failed == 3 and not report.ok


def test_substitutions_solve_the_fiber():
    plan = reduce_fiber((1, 2, 0, 1), 4, 2)
    rng = random.Random(5)
    point = sample_smooth_fiber_point(plan, rng)
    full = evaluate_plan(plan, point)
    chain = plan.coordinates().chain_from_values(full)
    assert phi(chain).vector == (1, 2, 0, 1)


def test_shear_fields_tangent_and_spanning():
    plan = reduce_fiber((1, 0, 0, 0), 4, 2)
    fields = shear_fields(plan)
    k = len(plan.free)
    assert len(fields) == k * (k - 1) // 2
    assert check_tangency(fields)
    for f in fields[:20]:
        assert not f.apply(plan.residual)
    rng = random.Random(2)
    for _ in range(10):
        point = sample_smooth_fiber_point(plan, rng)
        assert spanning_rank(plan, point, fields) == tangent_dimension(plan)
    assert tangent_dimension(plan) == 4 * 4 - 2 * 2


def test_no_smooth_point_raises():
    plan = reduce_fiber((1, 0, 0, 0), 4, 2)
    with pytest.raises(ReductionError):
        sample_smooth_fiber_point(plan, random.Random(0), tries=0)


def test_stratum_coverage_hits_every_stratum():
    counts = stratum_coverage(2, 3, 10000, seed=0)
    assert sum(counts.values()) == 10000
    assert all(v > 0 for v in counts.values())
    assert set(counts) == {str(s) for s in all_strata(2, Parity.ODD)}
