import numpy as np
import pytest

from smplab.codes import encode, hadamard_code
from smplab.errors import PromiseViolationError
from smplab.protocols import (
    MatchingInstance,
    build_fixture,
    equality_code,
    equality_code_acceptance,
    equality_function,
    equality_public,
    hidden_matching_relation,
    matching_classical,
    matching_qc,
    matching_times_x,
    matching_value,
    random_matching,
    random_promise_instance,
    toy_quantum_equality,
    xor_matching,
)
from smplab.qcore import acceptance_probability
from smplab.rng import trial_rng
from smplab.smp import exact_acceptance, fix_coin, worst_case_error


class TestEqualityPublic:
    def test_equal_inputs_always_accepted(self):
        p = equality_public(3, 2)
        for x in range(8):
            assert exact_acceptance(p, x, x) == 1.0

    @pytest.mark.parametrize("k,expected", [(1, 0.5), (2, 0.25), (3, 0.125)])
    def test_unequal_inputs_accepted_at_two_to_minus_k(self, k, expected):
        p = equality_public(2, k)
        assert exact_acceptance(p, 1, 2) == expected

    def test_acceptance_depends_only_on_xor(self):
        p = equality_public(3, 1)
        for x in range(8):
            for y in range(8):
                assert exact_acceptance(p, x, y) == exact_acceptance(p, x ^ y, 0)


class TestEqualityCode:
    def test_equal_inputs_accepted(self):
        p = equality_code(3)
        assert exact_acceptance(p, 5, 5) == 1.0
        assert equality_code_acceptance(hadamard_code(3), 5, 5) == 1.0

    def test_single_rep_acceptance_equals_cell_agreement_rate(self):
        # oracle: enumerate every (row, column) pair of the grid directly
        code = hadamard_code(3)
        p = equality_code(3)
        for x, y in [(1, 2), (3, 7), (0, 5)]:
            gx = encode(code, x).reshape(code.grid_rows, code.grid_cols)
            gy = encode(code, y).reshape(code.grid_rows, code.grid_cols)
            agree = sum(
                gx[i, j] == gy[i, j]
                for i in range(code.grid_rows)
                for j in range(code.grid_cols)
            )
            oracle = agree / code.m
            assert exact_acceptance(p, x, y) == pytest.approx(oracle, abs=1e-12)
            assert equality_code_acceptance(code, x, y) == pytest.approx(oracle, abs=1e-12)

    def test_hadamard_unequal_single_rep_is_half(self):
        code = hadamard_code(4)
        # brute-force the code distance first: every nonzero codeword has weight m/2
        assert min(int(encode(code, x).sum()) for x in range(1, 16)) == code.m // 2
        for x, y in [(0, 1), (3, 12), (9, 6)]:
            assert equality_code_acceptance(code, x, y) == 0.5

    def test_closed_form_matches_enumeration_for_two_reps(self):
        code = hadamard_code(2)
        p = equality_code(2, reps=2)
        for x in range(4):
            for y in range(4):
                assert exact_acceptance(p, x, y) == pytest.approx(
                    equality_code_acceptance(code, x, y, reps=2), abs=1e-12
                )

    def test_six_reps_worst_case_error_below_third(self):
        code = hadamard_code(4)
        worst = max(
            abs(float(x == y) - equality_code_acceptance(code, x, y, reps=6))
            for x in range(16)
            for y in range(16)
        )
        assert worst <= 1 / 3
        assert worst == pytest.approx(2.0**-6, abs=1e-15)


class TestMatchingValue:
    def test_exact_parities_give_one(self):
        inst = random_promise_instance(12, np.random.default_rng(0), value=1)
        exact = MatchingInstance(12, inst.x, inst.matching, matching_times_x(inst))
        assert matching_value(exact) == 1

    def test_complement_gives_zero(self):
        inst = random_promise_instance(12, np.random.default_rng(1), value=1)
        flipped = tuple(1 - b for b in matching_times_x(inst))
        assert matching_value(MatchingInstance(12, inst.x, inst.matching, flipped)) == 0

    def test_two_flips_at_n12_is_still_one(self):
        rng = np.random.default_rng(2)
        inst = random_promise_instance(12, rng, value=1)
        parities = list(matching_times_x(inst))
        parities[0] ^= 1
        parities[3] ^= 1
        assert matching_value(MatchingInstance(12, inst.x, inst.matching, tuple(parities))) == 1

    def test_promise_violation_raises(self):
        inst = random_promise_instance(12, np.random.default_rng(3), value=1)
        parities = list(matching_times_x(inst))
        for t in range(3):  # distance 3 sits strictly between 12/6 and 12/3
            parities[t] ^= 1
        with pytest.raises(PromiseViolationError):
            matching_value(MatchingInstance(12, inst.x, inst.matching, tuple(parities)))

    def test_invariant_under_relabeling(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            inst = random_promise_instance(12, rng)
            perm = [int(v) for v in rng.permutation(12)]
            x2 = tuple(inst.x[perm.index(i)] for i in range(12))
            pairs = [tuple(sorted((perm[i], perm[j]))) for i, j in inst.matching]
            order = sorted(range(len(pairs)), key=lambda t: pairs[t])
            inst2 = MatchingInstance(
                12,
                x2,
                tuple(pairs[t] for t in order),
                tuple(inst.w[t] for t in order),
            )
            assert matching_value(inst2) == matching_value(inst)


class TestMatchingProtocols:
    def test_edge_projection_probability(self):
        # single copy, one available edge: the edge outcome carries 2/|S|
        p = matching_qc(8, subset_size=4, copies=1, edges_sent=1)
        inst = random_promise_instance(8, np.random.default_rng(5), value=1)
        i, j = inst.matching[0]
        others = [v for v in range(8) if v not in (i, j)]
        subset = tuple(sorted((i, j, others[0], others[1])))
        payload = p.alice_strategy(inst.x, subset)
        (b_msg,) = p.bob_strategy(inst.bob_input, subset).keys()
        outcomes = p.referee._edge_outcomes(payload.factors[0], [(i, j, 0)])
        assert outcomes[0][1] == pytest.approx(2 / 4)

    def test_recovered_parity_is_certain(self):
        p = matching_qc(8, subset_size=4, copies=1, edges_sent=1)
        rng = np.random.default_rng(6)
        for _ in range(10):
            inst = random_promise_instance(8, rng)
            i, j = inst.matching[0]
            others = [v for v in range(8) if v not in (i, j)]
            subset = tuple(sorted((i, j, others[0], others[1])))
            psi = p.alice_strategy(inst.x, subset).factors[0]
            ((_, _, p_even),) = p.referee._edge_outcomes(psi, [(i, j, 0)])
            want = inst.x[i] ^ inst.x[j]
            assert p_even == pytest.approx(1.0 if want == 0 else 0.0, abs=1e-9)

    def test_exact_conditional_acceptance_small_instance(self):
        # with S covering everything, every edge is available and the referee's
        # output distribution is exactly enumerable
        p = matching_qc(4, subset_size=4, copies=2, edges_sent=2)
        inst = MatchingInstance(4, (1, 0, 0, 1), ((0, 1), (2, 3)), (1, 1))
        fixed = fix_coin(p, (0, 1, 2, 3))
        acc = exact_acceptance(fixed, inst.x, inst.bob_input)
        dist = p.referee.output_distribution(
            p.alice_strategy(inst.x, (0, 1, 2, 3)),
            next(iter(p.bob_strategy(inst.bob_input, (0, 1, 2, 3)))),
            (0, 1, 2, 3),
        )
        assert acc == pytest.approx(dist.get(1, 0.0), abs=1e-12)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)

    def test_expected_edges_in_random_subset(self):
        # oracle: count over simulated subsets; mean should be near |S|^2/(2n)
        n, s = 32, 12
        rng = np.random.default_rng(7)
        matching = random_matching(n, rng)
        counts = []
        for _ in range(4000):
            subset = set(rng.choice(n, size=s, replace=False))
            counts.append(sum(1 for i, j in matching if i in subset and j in subset))
        mean = np.mean(counts)
        assert mean == pytest.approx(s * s / (2 * n), rel=0.15)

    def test_classical_edge_comparison_is_errorless(self):
        p = matching_classical(8, subset_size=4)
        inst = random_promise_instance(8, np.random.default_rng(8), value=1)
        i, j = inst.matching[0]
        others = [v for v in range(8) if v not in (i, j)]
        subset = tuple(sorted((i, j, others[0], others[1])))
        (a_msg,) = p.alice_strategy(inst.x, subset).keys()
        (b_msg,) = p.bob_strategy(inst.bob_input, subset).keys()
        dist = p.referee.output_distribution(a_msg, b_msg, subset)
        want = int(inst.w[0] == (inst.x[i] ^ inst.x[j]))
        assert dist == {want: 1.0}


class TestHiddenMatching:
    def test_every_output_is_valid_exhaustively(self):
        protocol, relation = hidden_matching_relation(4)
        for x in range(16):
            for k in (1, 2, 3):
                payload = protocol.alice_strategy(x, None)
                (b,) = protocol.bob_strategy(k, None).keys()
                dist = protocol.referee.output_distribution(payload, b)
                valid_mass = sum(
                    w for out, w in dist.items() if out in relation.valid[(x, k)]
                )
                assert valid_mass == pytest.approx(1.0, abs=1e-9)

    def test_post_projection_parity_amplitudes(self):
        protocol, _ = hidden_matching_relation(4)
        x = 0b0110
        psi = protocol.alice_strategy(x, None)
        amp = psi.amplitudes
        for i, j in xor_matching(4, 1):
            want = ((x >> i) & 1) ^ ((x >> j) & 1)
            plus = abs(amp[i] + amp[j]) ** 2 / 2
            minus = abs(amp[i] - amp[j]) ** 2 / 2
            if want == 0:
                assert minus <= 1e-18
            else:
                assert plus <= 1e-18

    def test_edge_marginal_is_uniform(self):
        protocol, relation = hidden_matching_relation(8)
        payload = protocol.alice_strategy(37, None)
        (b,) = protocol.bob_strategy(5, None).keys()
        dist = protocol.referee.output_distribution(payload, b)
        per_edge: dict[tuple[int, int], float] = {}
        for out, w in dist.items():
            per_edge[(out.i, out.j)] = per_edge.get((out.i, out.j), 0.0) + w
        assert len(per_edge) == 4
        for w in per_edge.values():
            assert w == pytest.approx(2 / 8, abs=1e-12)

    def test_sampled_outputs_satisfy_relation_at_n8(self):
        protocol, _ = hidden_matching_relation(8)
        rng_seed = 21
        x, k = 173, 6
        matching = set(xor_matching(8, k))
        payload = protocol.alice_strategy(x, None)
        (b,) = protocol.bob_strategy(k, None).keys()
        for t in range(10_000):
            out = protocol.referee.sample_output(payload, b, trial_rng(rng_seed, t))
            assert (out.i, out.j) in matching
            assert out.parity == ((x >> out.i) & 1) ^ ((x >> out.j) & 1)

    def test_xor_matchings_are_perfect_and_distinct(self):
        seen = set()
        for k in range(1, 8):
            m = xor_matching(8, k)
            flat = sorted(v for e in m for v in e)
            assert flat == list(range(8))
            seen.add(m)
        assert len(seen) == 7


class TestToyFixtures:
    def test_toy_equality_q1_acceptance_structure(self):
        p = toy_quantum_equality(1)
        for x in range(4):
            for y in range(4):
                acc = exact_acceptance(p, x, y)
                if x == y:
                    assert acc == pytest.approx(1.0, abs=1e-12)
                elif (x + y) % 2 == 0:  # |0> vs |1>, |+> vs |->
                    assert acc == pytest.approx(0.0, abs=1e-12)
                else:
                    assert acc == pytest.approx(0.5, abs=1e-12)

    def test_toy_equality_q2_is_exact(self):
        p = toy_quantum_equality(2)
        f = equality_function(2)
        assert worst_case_error(p, f) <= 1e-12

    def test_canonical_referee_matches_direct_trace(self):
        p = toy_quantum_equality(1)
        rho = p.alice_strategy(1, None)
        e = p.referee.operators["10"]
        assert exact_acceptance(p, 1, 2) == pytest.approx(
            acceptance_probability(e, rho), abs=1e-12
        )


def test_build_fixture_names():
    assert build_fixture("eq-public", {"n": 2, "k": 1}).name.startswith("eq-public")
    assert build_fixture("eq-code", {"n": 2}).name.startswith("eq-code")
    assert build_fixture("matching-qc", {"n": 8}).quantum
    assert not build_fixture("matching-classical", {"n": 8}).quantum
    protocol, relation = build_fixture("hidden-matching", {"n": 4})
    assert protocol.quantum and relation is not None
    with pytest.raises(ValueError, match="unknown fixture"):
        build_fixture("nope", {})
