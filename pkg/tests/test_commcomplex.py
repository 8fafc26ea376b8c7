"""Task definitions, classical strategy search, and protocol simulations."""

import numpy as np
import pytest

from bellkit import commcomplex as cc
from bellkit import qstate as qs
from oracles import tree_protocol_optimum


class TestMod4Task:
    def test_three_party_values(self):
        task = cc.make_mod4_task(3)
        assert task.f[0, 1, 1] == -1.0  # sum 2 -> cos(pi)
        assert task.support[0, 1, 1]
        assert task.p_prime[0, 1, 1] == pytest.approx(0.25)
        assert not task.support[0, 0, 1]  # odd sum excluded
        assert task.p_prime[0, 0, 1] == 0.0

    def test_two_party_support(self):
        task = cc.make_mod4_task(2)
        assert task.support_tuples() == [(0, 0), (1, 1)]
        assert task.f[0, 0] == 1.0 and task.f[1, 1] == -1.0
        assert task.p_prime[0, 0] == task.p_prime[1, 1] == 0.5

    def test_weights_normalized(self):
        for n in range(2, 9):
            task = cc.make_mod4_task(n)
            assert task.p_prime.sum() == pytest.approx(1.0, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            cc.make_mod4_task(1)
        f = np.ones((2, 2))
        p = np.full((2, 2), 0.3)
        with pytest.raises(ValueError, match="sum to 1"):
            cc.TaskSpec(2, f, p, np.ones((2, 2), dtype=bool))


class TestReducedFidelity:
    def test_all_plus_strategy_two_parties(self):
        task = cc.make_mod4_task(2)
        strat = cc.ClassicalStrategy(np.ones((2, 2), dtype=int))
        assert cc.reduced_fidelity(task, strat) == pytest.approx(0.0, abs=1e-15)

    def test_three_party_bound(self):
        task = cc.make_mod4_task(3)
        for idx in range(4**3):
            strat = cc.ClassicalStrategy.from_index(3, idx)
            assert abs(cc.reduced_fidelity(task, strat)) <= 0.5 + 1e-15

    def test_single_support_point(self):
        f = np.zeros((2, 2))
        f[1, 0] = -1.0
        p = np.zeros((2, 2))
        p[1, 0] = 1.0
        support = p > 0
        task = cc.TaskSpec(2, f, p, support)
        signs = np.array([[1, -1], [1, 1]])  # c1(1) c2(0) = -1 matches f
        assert cc.reduced_fidelity(task, cc.ClassicalStrategy(signs)) == 1.0

    def test_multilinear_flip_identity(self):
        # flipping one sign changes F by exactly twice the affected terms
        rng = np.random.default_rng(81)
        task = cc.make_mod4_task(4)
        for _ in range(20):
            signs = 1 - 2 * rng.integers(0, 2, size=(4, 2))
            k = int(rng.integers(0, 4))
            bit = int(rng.integers(0, 2))
            flipped = signs.copy()
            flipped[k, bit] *= -1
            f0 = cc.reduced_fidelity(task, cc.ClassicalStrategy(signs))
            f1 = cc.reduced_fidelity(task, cc.ClassicalStrategy(flipped))
            affected = 0.0
            for x in task.support_tuples():
                if x[k] != bit:
                    continue
                prod = 1
                for m, b in enumerate(x):
                    prod *= int(signs[m, b])
                affected += task.g[x] * prod
            assert f1 - f0 == pytest.approx(-2 * affected, abs=1e-12)

    def test_party_mismatch(self):
        task = cc.make_mod4_task(3)
        with pytest.raises(ValueError, match="mismatch"):
            cc.reduced_fidelity(task, cc.ClassicalStrategy(np.ones((2, 2), dtype=int)))


class TestClassicalOptimum:
    def test_mod4_matches_closed_form(self):
        expected = {2: 1.0, 3: 0.5, 4: 0.5, 5: 0.25, 6: 0.25}
        for n, bound in expected.items():
            opt = cc.classical_optimum(cc.make_mod4_task(n))
            assert opt.f_star == bound
            assert cc.mod4_classical_bound(n) == bound

    def test_reported_strategy_attains_value(self):
        for n in (2, 3, 4, 5):
            task = cc.make_mod4_task(n)
            opt = cc.classical_optimum(task)
            assert abs(cc.reduced_fidelity(task, opt.strategy)) == pytest.approx(
                opt.f_star, abs=1e-15
            )

    def test_first_lexicographic_maximizer(self):
        task = cc.make_mod4_task(3)
        opt = cc.classical_optimum(task)
        for idx in range(opt.index):
            strat = cc.ClassicalStrategy.from_index(3, idx)
            assert abs(cc.reduced_fidelity(task, strat)) < opt.f_star

    def test_strategy_index_round_trip(self):
        for idx in (0, 1, 17, 63):
            strat = cc.ClassicalStrategy.from_index(3, idx)
            assert strat.index() == idx

    def test_ascent_from_all_starts_matches_exhaustive(self):
        for n in (2, 3):
            task = cc.make_mod4_task(n)
            exhaustive = cc.classical_optimum(task)
            ascent = cc.classical_optimum_ascent(task, starts=range(4**n))
            assert ascent.f_star == pytest.approx(exhaustive.f_star, abs=1e-15)
        game = cc.make_chsh_game()
        assert cc.classical_optimum_ascent(
            game, starts=range(16)
        ).f_star == pytest.approx(cc.classical_optimum(game).f_star, abs=1e-15)

    def test_chsh_game_bound(self):
        assert cc.classical_optimum(cc.make_chsh_game()).f_star == 0.5

    def test_party_cap_names_the_fallback(self):
        with pytest.raises(ValueError, match="classical_optimum_ascent"):
            cc.classical_optimum(cc.make_mod4_task(13))


class TestQuantumFidelity:
    def test_ghz_mod4_is_perfect(self):
        for n in range(2, 7):
            task = cc.make_mod4_task(n)
            value = cc.quantum_fidelity_analytic(
                task, qs.make_ghz(n), cc.mod4_settings(n)
            )
            assert value == pytest.approx(1.0, abs=1e-12)

    def test_quantum_over_classical_ratio(self):
        for n in range(2, 7):
            task = cc.make_mod4_task(n)
            quantum = cc.quantum_fidelity_analytic(
                task, qs.make_ghz(n), cc.mod4_settings(n)
            )
            k = n // 2 if n % 2 == 0 else (n + 1) // 2
            ratio = quantum / cc.classical_optimum(task).f_star
            assert ratio == pytest.approx(2.0 ** (k - 1), abs=1e-9)

    def test_chsh_game_per_pair_success(self):
        # correct-answer probability is 1/2 + sqrt(2)/4 on every input pair
        task = cc.make_chsh_game()
        settings = cc.chsh_game_settings()
        state = qs.make_ghz(2)
        from bellkit.corrtensor import compute_tensor, correlation_function

        tensor = compute_tensor(state.projector())
        for x1 in (0, 1):
            for x2 in (0, 1):
                dirs = np.array([settings[0, x1], settings[1, x2]])
                corr = correlation_function(tensor, dirs)
                success = (1 + task.f[x1, x2] * corr) / 2
                assert success == pytest.approx(0.5 + np.sqrt(2) / 4, abs=1e-12)

    def test_white_noise_gives_zero(self):
        task = cc.make_mod4_task(3)
        rho = qs.DensityMatrix(3, np.eye(8) / 8)
        value = cc.quantum_fidelity_analytic(task, rho, cc.mod4_settings(3))
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_settings_validation(self):
        task = cc.make_mod4_task(3)
        with pytest.raises(ValueError, match="shape"):
            cc.quantum_fidelity_analytic(task, qs.make_ghz(3), np.zeros((2, 2, 3)))


class TestEntangledProtocol:
    def test_mod4_ghz_always_correct(self):
        task = cc.make_mod4_task(3)
        result, detail = cc.run_entangled_protocol(
            task, qs.make_ghz(3), cc.mod4_settings(3), 100000, seed=1, return_detail=True
        )
        assert result.fidelity == 1.0
        assert result.success_prob == 1.0
        assert result.stderr == 0.0
        assert result.trials == 100000
        assert np.all(detail.answers == detail.targets)

    def test_message_accounting(self):
        for n in (2, 4):
            task = cc.make_mod4_task(n)
            _, detail = cc.run_entangled_protocol(
                task, qs.make_ghz(n), cc.mod4_settings(n), 500, seed=2, return_detail=True
            )
            assert detail.messages.shape == (500, n - 1)
            assert np.all(np.abs(detail.messages) == 1)
            assert detail.qubit_hops == 0
            # last partner combines own data with the received bits only
            recomputed = (
                detail.outcomes[:, -1]
                * (1 - 2 * detail.z_bits[:, -1])
                * np.prod(detail.messages, axis=1)
            )
            assert np.array_equal(recomputed, detail.answers)

    def test_white_noise_statistics(self):
        task = cc.make_mod4_task(3)
        rho = qs.DensityMatrix(3, np.eye(8) / 8)
        result = cc.run_entangled_protocol(task, rho, cc.mod4_settings(3), 20000, seed=3)
        assert abs(result.fidelity) < 3 * result.stderr

    def test_monte_carlo_matches_analytic(self):
        rng = np.random.default_rng(91)
        task = cc.make_mod4_task(3)
        state = qs.make_ghz(3)
        for trial in range(20):
            settings = rng.normal(size=(3, 2, 3))
            settings /= np.linalg.norm(settings, axis=2, keepdims=True)
            analytic = cc.quantum_fidelity_analytic(task, state, settings)
            result = cc.run_entangled_protocol(
                task, state, settings, 100000, seed=1000 + trial
            )
            assert abs(result.fidelity - analytic) < 4 * max(result.stderr, 1e-4)

    def test_seed_determinism(self):
        task = cc.make_mod4_task(3)
        a = cc.run_entangled_protocol(task, qs.make_ghz(3), cc.mod4_settings(3), 1000, seed=7)
        b = cc.run_entangled_protocol(task, qs.make_ghz(3), cc.mod4_settings(3), 1000, seed=7)
        assert a == b

    def test_trials_validation(self):
        task = cc.make_mod4_task(2)
        with pytest.raises(ValueError, match="trials"):
            cc.run_entangled_protocol(task, qs.make_ghz(2), cc.mod4_settings(2), 0, seed=0)


class TestSequentialProtocol:
    def test_single_input_phase_arithmetic(self):
        # x = (0,1,1), z = (0,0,0): phase pi -> (|0> - |1>)/sqrt(2) -> -1
        assert cc.sequential_answer([0, 1, 1], [0, 0, 0]) == -1
        assert cc.sequential_answer([0, 0], [0, 0]) == 1

    def test_answer_equals_target_on_promise(self):
        rng = np.random.default_rng(101)
        for n in (2, 3, 5):
            task = cc.make_mod4_task(n)
            for _ in range(50):
                x = list(rng.integers(0, 2, size=n))
                if sum(x) % 2:
                    continue
                z = list(rng.integers(0, 2, size=n))
                target = task.f[tuple(x)] * (-1) ** (sum(z) % 2)
                assert cc.sequential_answer(x, z) == target

    def test_off_promise_rejected(self):
        with pytest.raises(cc.UnsupportedTaskError):
            cc.sequential_answer([1, 0, 0], [0, 0, 0])

    def test_deterministic_correctness(self):
        for n in range(2, 9):
            task = cc.make_mod4_task(n)
            result, detail = cc.run_sequential_protocol(
                task, 10000, seed=n, return_detail=True
            )
            assert result.fidelity == 1.0
            assert result.stderr == 0.0
            assert detail.qubit_hops == n - 1
            assert detail.messages.shape == (10000, 0)

    def test_rejects_other_tasks(self):
        with pytest.raises(cc.UnsupportedTaskError):
            cc.run_sequential_protocol(cc.make_chsh_game(), 10, seed=0)

    def test_seed_determinism(self):
        task = cc.make_mod4_task(4)
        assert cc.run_sequential_protocol(task, 500, seed=5) == cc.run_sequential_protocol(
            task, 500, seed=5
        )


class TestChshGame:
    def test_target_formula(self):
        assert cc.chsh_game_target(0, 0) == pytest.approx(0.85355339, abs=1e-8)
        assert cc.chsh_game_target(0, 1) == pytest.approx(0.85355339, abs=1e-8)
        assert cc.chsh_game_target(1, 0) == pytest.approx(0.85355339, abs=1e-8)
        assert cc.chsh_game_target(1, 1) == pytest.approx(0.14644661, abs=1e-8)

    def test_simulated_frequencies_match_targets(self):
        trials = 100000
        freq = cc.chsh_game_equality_frequencies(trials, seed=17)
        for x1 in (0, 1):
            for x2 in (0, 1):
                target = cc.chsh_game_target(x1, x2)
                sigma = np.sqrt(target * (1 - target) / trials)
                assert abs(freq[x1, x2] - target) < 3 * sigma, (x1, x2)

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            cc.chsh_game_target(2, 0)


class TestTreeOracle:
    def test_reduced_form_matches_tree_search(self):
        # the one-bit-message reduction is exact: exhaustive search over
        # explicit communication trees gives the same optimum
        t2 = cc.make_mod4_task(2)
        assert cc.classical_optimum(t2).f_star == pytest.approx(
            tree_protocol_optimum(t2, "chain"), abs=1e-12
        )
        t3 = cc.make_mod4_task(3)
        best3 = cc.classical_optimum(t3).f_star
        assert best3 == pytest.approx(tree_protocol_optimum(t3, "star"), abs=1e-12)
        assert best3 == pytest.approx(tree_protocol_optimum(t3, "chain"), abs=1e-12)
        game = cc.make_chsh_game()
        assert cc.classical_optimum(game).f_star == pytest.approx(
            tree_protocol_optimum(game, "chain"), abs=1e-12
        )
