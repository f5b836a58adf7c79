from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_table
from qlbench.errors import (
    DimensionMismatchError,
    InvariantViolationError,
    PreconditionError,
)
from qlbench.hilbert import named_state
from qlbench.sampling import (
    random_basis_pair,
    random_commuting_pair,
    random_state,
    rng_from,
)
from qlbench.stats import (
    Distribution,
    FrequencyTable,
    SequentialTable,
    born_distribution,
    commutation_defect,
    commuting_bases,
    dispersion,
    joint_exists,
    marginal_over_second,
    nondistribution_defect,
    sequential_distribution,
    within_binomial_bound,
)


class TestFrequencyTable:
    def test_exact_rational_probabilities(self):
        table = FrequencyTable(("up", "down"), (3, 1))
        assert table.probabilities() == (Fraction(3, 4), Fraction(1, 4))
        assert table.total == 4

    def test_to_distribution(self):
        dist = FrequencyTable(("a", "b", "c"), (1, 1, 1)).to_distribution()
        assert abs(sum(dist.probs) - 1.0) < 1e-9

    def test_conversion_error_is_below_1e15(self):
        table = FrequencyTable(("a", "b", "c"), (17, 5, 11))
        dist = table.to_distribution()
        for frac, p in zip(table.probabilities(), dist.probs):
            assert abs(frac - Fraction(float(p))) < Fraction(1, 10 ** 15)

    def test_rejects_empty_run(self):
        with pytest.raises(InvariantViolationError):
            FrequencyTable(("a",), (0,))


class TestDistribution:
    def test_rejects_bad_total(self):
        with pytest.raises(InvariantViolationError):
            Distribution(("a", "b"), (0.6, 0.6))

    def test_rejects_negative(self):
        with pytest.raises(InvariantViolationError):
            Distribution(("a", "b"), (-0.2, 1.2))


class TestBornDistribution:
    def test_eigenstate(self, z_plus, z_basis):
        dist = born_distribution(z_plus, z_basis)
        assert_table(dist.probs, [1.0, 0.0])

    def test_superposed(self, z_plus, x_basis):
        dist = born_distribution(z_plus, x_basis)
        assert_table(dist.probs, [0.5, 0.5])

    def test_sums_to_one(self):
        rng = rng_from(301)
        for _ in range(50):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            basis, _ = random_basis_pair(rng, dim)
            assert abs(float(born_distribution(state, basis).probs.sum()) - 1.0) < 1e-10

    def test_dimension_mismatch(self, z_plus):
        rng = rng_from(302)
        basis, _ = random_basis_pair(rng, 3)
        with pytest.raises(DimensionMismatchError):
            born_distribution(z_plus, basis)


class TestSequentialDistribution:
    def test_z_then_x(self, z_plus, z_basis, x_basis):
        table = sequential_distribution(z_plus, z_basis, x_basis)
        assert_table(table.entries, [[0.5, 0.5], [0.0, 0.0]])

    def test_x_then_z(self, z_plus, z_basis, x_basis):
        table = sequential_distribution(z_plus, x_basis, z_basis)
        assert_table(table.entries, [[0.25, 0.25], [0.25, 0.25]])

    def test_repeated_basis_is_diagonal(self, x_basis):
        state = named_state("z+")
        table = sequential_distribution(state, x_basis, x_basis)
        born = born_distribution(state, x_basis)
        assert_table(np.diag(table.entries), born.probs)
        assert_table(table.entries - np.diag(np.diag(table.entries)),
                     np.zeros((2, 2)))

    def test_invariants_hold_for_random_draws(self):
        rng = rng_from(303)
        for _ in range(50):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            first, second = random_basis_pair(rng, dim)
            table = sequential_distribution(state, first, second)
            assert float(table.entries.min()) >= 0.0
            assert abs(float(table.entries.sum()) - 1.0) < 1e-9
            assert_table(table.first_marginal(),
                         born_distribution(state, first).probs, 1e-9)


class TestSequentialTableInvariants:
    def test_rejects_negative_entry(self, z_basis, x_basis):
        with pytest.raises(InvariantViolationError):
            SequentialTable(z_basis, x_basis, [[0.75, 0.5], [-0.25, 0.0]])

    def test_rejects_bad_total(self, z_basis, x_basis):
        with pytest.raises(InvariantViolationError):
            SequentialTable(z_basis, x_basis, [[0.5, 0.5], [0.5, 0.5]])


class TestMarginalIdentity:
    def test_z_then_x_marginal(self, z_plus, z_basis, x_basis):
        table = sequential_distribution(z_plus, z_basis, x_basis)
        assert_table(marginal_over_second(table).probs, [1.0, 0.0])

    def test_x_then_z_marginal(self, z_plus, z_basis, x_basis):
        table = sequential_distribution(z_plus, x_basis, z_basis)
        assert_table(marginal_over_second(table).probs, [0.5, 0.5])

    def test_identity_for_random_draws(self):
        rng = rng_from(304)
        for _ in range(100):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            first, second = random_basis_pair(rng, dim)
            table = sequential_distribution(state, first, second)
            marginal = marginal_over_second(table)
            assert_table(marginal.probs, born_distribution(state, first).probs, 1e-9)


class TestNondistributionDefect:
    def test_interposed_equator_measurement(self, z_plus, z_basis, x_basis):
        defect = nondistribution_defect(z_plus, z_basis, 0, x_basis)
        assert abs(defect - 0.5) < 1e-12

    def test_interposing_the_same_basis_is_free(self, z_plus, z_basis):
        assert nondistribution_defect(z_plus, z_basis, 0, z_basis) < 1e-12

    def test_commuting_interposition_is_free(self):
        rng = rng_from(305)
        for _ in range(20):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            first, second = random_commuting_pair(rng, dim)
            for index in range(first.size):
                assert nondistribution_defect(state, first, index, second) < 1e-12

    def test_index_out_of_range(self, z_plus, z_basis, x_basis):
        with pytest.raises(PreconditionError):
            nondistribution_defect(z_plus, z_basis, 5, x_basis)


class TestCommutationDefect:
    def test_z_x_pair(self, z_plus, z_basis, x_basis):
        assert abs(commutation_defect(z_plus, z_basis, x_basis) - 0.25) < 1e-12

    def test_same_basis(self, z_plus, z_basis):
        assert commutation_defect(z_plus, z_basis, z_basis) < 1e-12

    def test_commuting_bases(self):
        rng = rng_from(306)
        for _ in range(20):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            first, second = random_commuting_pair(rng, dim)
            assert commuting_bases(first, second)
            assert commutation_defect(state, first, second) < 1e-12


class TestJointExists:
    def test_commuting_pair_has_joint(self):
        rng = rng_from(307)
        state = random_state(rng, 3)
        first, second = random_commuting_pair(rng, 3)
        forward = sequential_distribution(state, first, second)
        reverse = sequential_distribution(state, second, first)
        verdict = joint_exists(forward, reverse)
        assert verdict.exists
        assert verdict.witness is None
        assert_table(verdict.joint.probs, forward.entries.reshape(-1), 1e-12)

    def test_noncommuting_pair_has_witness(self, z_plus, z_basis, x_basis):
        forward = sequential_distribution(z_plus, z_basis, x_basis)
        reverse = sequential_distribution(z_plus, x_basis, z_basis)
        verdict = joint_exists(forward, reverse)
        assert not verdict.exists
        witness = verdict.witness
        assert (witness.first_index, witness.second_index) == (0, 0)
        assert abs(witness.forward - 0.5) < 1e-12
        assert abs(witness.reverse - 0.25) < 1e-12
        assert abs(witness.asymmetry - 0.25) < 1e-12

    def test_hand_built_symmetric_tables(self, z_basis, x_basis):
        entries = np.array([[0.4, 0.1], [0.2, 0.3]])
        forward = SequentialTable(z_basis, x_basis, entries)
        reverse = SequentialTable(x_basis, z_basis, entries.T)
        assert joint_exists(forward, reverse).exists

    def test_basis_mismatch_rejected(self, z_plus, z_basis, x_basis):
        forward = sequential_distribution(z_plus, z_basis, x_basis)
        with pytest.raises(PreconditionError):
            joint_exists(forward, forward)

    def test_verdict_tracks_commutation_defect(self):
        rng = rng_from(308)
        for k in range(40):
            dim = int(rng.integers(2, 5))
            state = random_state(rng, dim)
            if k % 2:
                first, second = random_commuting_pair(rng, dim)
            else:
                first, second = random_basis_pair(rng, dim)
            forward = sequential_distribution(state, first, second)
            reverse = sequential_distribution(state, second, first)
            defect = commutation_defect(state, first, second)
            assert joint_exists(forward, reverse, tol=1e-9).exists == (defect <= 1e-9)


class TestDispersion:
    def test_endpoints_are_dispersion_free(self):
        assert dispersion(0.0) == 0.0
        assert dispersion(1.0) == 0.0

    def test_maximum_at_half(self):
        assert abs(dispersion(0.5) - 0.25) < 1e-15

    @settings(max_examples=200, derandomize=True)
    @given(p=st.floats(min_value=1e-9, max_value=1.0 - 1e-9))
    def test_strictly_positive_between(self, p):
        assert dispersion(p) > 0.0

    def test_out_of_range_rejected(self):
        with pytest.raises(PreconditionError):
            dispersion(1.5)


class TestBinomialBound:
    def test_exact_table_passes_its_own_bound(self, z_plus, z_basis, x_basis):
        table = sequential_distribution(z_plus, z_basis, x_basis)
        assert within_binomial_bound(table, table, 1000)

    def test_large_gap_fails(self, z_plus, z_basis, x_basis):
        exact = sequential_distribution(z_plus, z_basis, x_basis)
        skewed = SequentialTable(z_basis, x_basis, [[0.7, 0.3], [0.0, 0.0]])
        assert not within_binomial_bound(exact, skewed, 100000)
