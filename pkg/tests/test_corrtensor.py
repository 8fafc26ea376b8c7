"""Correlation tensor extraction, contraction, and maximization."""

import io

import numpy as np
import pytest

from bellkit import corrtensor as ct
from bellkit import qstate as qs
from oracles import random_density, tensor_by_traces


def white_noise(n):
    return qs.DensityMatrix(n, np.eye(2**n) / 2**n)


class TestComputeTensor:
    def test_white_noise(self):
        t = ct.compute_tensor(white_noise(3))
        assert t.values[0, 0, 0] == pytest.approx(1.0, abs=1e-12)
        vals = t.values.copy()
        vals[0, 0, 0] = 0.0
        assert np.max(np.abs(vals)) < 1e-12

    def test_werner_proper_block(self):
        for v in (0.3, 0.7):
            t = ct.compute_tensor(qs.make_werner(v))
            assert np.allclose(np.diag(t.proper.reshape(3, 3)), [-v, -v, -v], atol=1e-12)
            off = t.proper - np.diag(np.diag(t.proper))
            assert np.max(np.abs(off)) < 1e-12
            # single-party components vanish
            assert np.max(np.abs(t.values[0, 1:])) < 1e-12
            assert np.max(np.abs(t.values[1:, 0])) < 1e-12

    def test_noisy_ghz_inplane_sum(self):
        for n in (2, 3, 4, 5, 6):
            for v in (0.25, 0.8):
                t = ct.compute_tensor(qs.make_noisy_ghz(n, v))
                inplane = t.values[(slice(1, 3),) * n]
                assert np.sum(inplane**2) == pytest.approx(
                    v**2 * 2 ** (n - 1), abs=1e-10
                )

    def test_matches_operator_traces(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            rho = random_density(int(rng.integers(2, 4)), rng)
            t = ct.compute_tensor(rho)
            assert np.max(np.abs(t.values - tensor_by_traces(rho))) < 1e-12

    def test_matches_pauli_expectation_componentwise(self):
        rng = np.random.default_rng(22)
        rho = random_density(3, rng)
        t = ct.compute_tensor(rho)
        for idx in [(0, 0, 0), (1, 2, 3), (2, 2, 2), (3, 0, 1), (2, 1, 0)]:
            assert t.values[idx] == pytest.approx(
                qs.pauli_expectation(rho, idx), abs=1e-10
            )

    def test_round_trip(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            rho = random_density(int(rng.integers(2, 4)), rng)
            back = ct.tensor_to_density(ct.compute_tensor(rho))
            assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-10

    def test_component_range_enforced(self):
        with pytest.raises(ValueError, match="out of"):
            vals = np.zeros((4, 4))
            vals[0, 0] = 1.0
            vals[1, 1] = 1.5
            ct.CorrelationTensor(2, vals)


class TestCorrelationFunction:
    def test_singlet_same_axis(self):
        t = ct.compute_tensor(qs.make_werner(1.0))
        z = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]])
        assert ct.correlation_function(t, z) == pytest.approx(-1.0, abs=1e-12)

    def test_ghz3_all_x(self):
        t = ct.compute_tensor(qs.make_ghz(3).projector())
        assert ct.correlation_function(t, np.eye(3)[[0, 0, 0]]) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_basis_contraction_equals_component(self):
        rng = np.random.default_rng(31)
        t = ct.compute_tensor(random_density(3, rng))
        for idx in [(1, 1, 1), (2, 3, 1), (3, 3, 2)]:
            dirs = np.eye(3)[[j - 1 for j in idx]]
            assert ct.correlation_function(t, dirs) == pytest.approx(
                t.values[idx], abs=1e-12
            )

    def test_rotated_axes_match_direct_expectation(self):
        # frame-axis contraction vs the expectation of rotated observables
        rng = np.random.default_rng(32)
        rho = random_density(2, rng)
        t = ct.compute_tensor(rho)
        for _ in range(10):
            dirs = rng.normal(size=(2, 3))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            op = np.kron(
                sum(dirs[0][i] * qs.PAULI[i + 1] for i in range(3)),
                sum(dirs[1][i] * qs.PAULI[i + 1] for i in range(3)),
            )
            direct = np.trace(rho.matrix @ op).real
            assert ct.correlation_function(t, dirs) == pytest.approx(direct, abs=1e-10)

    def test_dimension_mismatch(self):
        t = ct.compute_tensor(qs.make_werner(0.5))
        with pytest.raises(ValueError, match="mismatch"):
            ct.correlation_function(t, np.eye(3))

    def test_non_unit_direction(self):
        t = ct.compute_tensor(qs.make_werner(0.5))
        with pytest.raises(ValueError, match="unit"):
            ct.correlation_function(t, [[0, 0, 2], [0, 0, 1]])


class TestTensorDot:
    def test_singlet_norm(self):
        t = ct.compute_tensor(qs.make_werner(1.0))
        assert ct.tensor_dot(t, t) == pytest.approx(3.0, abs=1e-12)

    def test_white_noise_orthogonal_to_everything(self):
        wn = ct.compute_tensor(white_noise(2))
        t = ct.compute_tensor(qs.make_werner(0.9))
        assert ct.tensor_dot(wn, t) == pytest.approx(0.0, abs=1e-12)

    def test_noisy_ghz_full_sum_at_least_inplane(self):
        for v in (0.2, 0.9):
            t = ct.compute_tensor(qs.make_noisy_ghz(3, v))
            assert ct.tensor_dot(t, t) >= 4 * v**2 - 1e-12

    def test_symmetric_bilinear(self):
        rng = np.random.default_rng(41)
        rhos = [random_density(2, rng) for _ in range(3)]
        ts = [ct.compute_tensor(r) for r in rhos]
        assert ct.tensor_dot(ts[0], ts[1]) == pytest.approx(
            ct.tensor_dot(ts[1], ts[0]), abs=1e-12
        )
        # bilinearity through convex mixtures of states
        for lam in (0.25, 0.6):
            mix = qs.DensityMatrix(
                2, lam * rhos[0].matrix + (1 - lam) * rhos[1].matrix
            )
            mixed = ct.compute_tensor(mix)
            expected = lam * ct.tensor_dot(ts[0], ts[2]) + (1 - lam) * ct.tensor_dot(
                ts[1], ts[2]
            )
            assert ct.tensor_dot(mixed, ts[2]) == pytest.approx(expected, abs=1e-10)

    def test_party_mismatch(self):
        a = ct.compute_tensor(qs.make_werner(0.5))
        b = ct.compute_tensor(white_noise(3))
        with pytest.raises(ValueError, match="mismatch"):
            ct.tensor_dot(a, b)


class TestInplaneNormSq:
    def test_noisy_ghz_law(self):
        for n in range(2, 7):
            frame = ct.xy_frame(n)
            for v in (0.1, 0.5, 0.9):
                t = ct.compute_tensor(qs.make_noisy_ghz(n, v))
                assert ct.inplane_norm_sq(t, frame) == pytest.approx(
                    v**2 * 2 ** (n - 1), abs=1e-9
                )

    def test_aligned_product_state_vanishes(self):
        t = ct.compute_tensor(qs.make_product([(0, 0, 1)] * 3))
        assert ct.inplane_norm_sq(t, ct.xy_frame(3)) == pytest.approx(0.0, abs=1e-12)

    def test_singlet_xy(self):
        t = ct.compute_tensor(qs.make_werner(1.0))
        assert ct.inplane_norm_sq(t, ct.xy_frame(2)) == pytest.approx(2.0, abs=1e-12)

    def test_three_axis_frame_rejected(self):
        t = ct.compute_tensor(qs.make_werner(1.0))
        full = ct.LocalFrame(np.broadcast_to(np.eye(3), (2, 3, 3)).copy())
        with pytest.raises(ValueError, match="2 axes"):
            ct.inplane_norm_sq(t, full)

    def test_frame_invariance_under_inplane_rotation(self):
        # the in-plane sum of squares is invariant under rotations of the
        # two axes inside their plane
        t = ct.compute_tensor(qs.make_noisy_ghz(3, 0.7))
        base = ct.inplane_norm_sq(t, ct.xy_frame(3))
        rng = np.random.default_rng(51)
        for _ in range(5):
            axes = np.zeros((3, 2, 3))
            for k in range(3):
                a = rng.uniform(0, 2 * np.pi)
                axes[k, 0] = [np.cos(a), np.sin(a), 0.0]
                axes[k, 1] = [-np.sin(a), np.cos(a), 0.0]
            rotated = ct.inplane_norm_sq(t, ct.LocalFrame(axes))
            assert rotated == pytest.approx(base, abs=1e-10)


class TestLocalFrame:
    def test_rejects_non_orthonormal(self):
        axes = np.zeros((1, 2, 3))
        axes[0, 0] = [1.0, 0.0, 0.0]
        axes[0, 1] = [1.0, 1e-6, 0.0]
        with pytest.raises(ValueError, match="orthonormal"):
            ct.LocalFrame(axes)


class TestMaxProductValue:
    def test_noisy_ghz_both_modes(self):
        for n in (2, 3, 4):
            for v in (0.3, 0.8):
                t = ct.compute_tensor(qs.make_noisy_ghz(n, v))
                full = ct.max_product_value(t)
                planes = ct.max_product_value(t, frame=ct.xy_frame(n))
                assert full.value == pytest.approx(v, abs=1e-9)
                assert planes.value == pytest.approx(v, abs=1e-9)
                assert full.converged and planes.converged

    def test_werner_full(self):
        for v in (0.2, 0.6, 1.0):
            t = ct.compute_tensor(qs.make_werner(v))
            assert ct.max_product_value(t).value == pytest.approx(v, abs=1e-10)

    def test_white_noise(self):
        t = ct.compute_tensor(white_noise(3))
        assert ct.max_product_value(t).value == pytest.approx(0.0, abs=1e-12)

    def test_value_attained_by_reported_directions(self):
        rng = np.random.default_rng(61)
        t = ct.compute_tensor(random_density(3, rng))
        res = ct.max_product_value(t)
        assert ct.correlation_function(t, res.directions) == pytest.approx(
            res.value, abs=1e-10
        )

    def test_ordering_full_planes_component(self):
        rng = np.random.default_rng(62)
        frame = ct.xy_frame(2)
        for _ in range(10):
            t = ct.compute_tensor(random_density(2, rng))
            full = ct.max_product_value(t).value
            planes = ct.max_product_value(t, frame=frame).value
            inplane_top = float(np.max(np.abs(t.values[1:3, 1:3])))
            assert full >= planes - 1e-10
            assert planes >= inplane_top - 1e-10
            assert full >= float(np.max(np.abs(t.proper))) - 1e-10

    def test_two_qubit_svd_oracle(self):
        rng = np.random.default_rng(63)
        for _ in range(60):
            t = ct.compute_tensor(random_density(2, rng))
            top_singular = float(np.linalg.svd(t.proper, compute_uv=False)[0])
            assert ct.max_product_value(t).value == pytest.approx(
                top_singular, abs=1e-9
            )

    def test_seed_determinism(self):
        rng = np.random.default_rng(64)
        t = ct.compute_tensor(random_density(3, rng))
        a = ct.max_product_value(t, seed=5)
        b = ct.max_product_value(t, seed=5)
        assert a.value == b.value
        assert np.array_equal(a.directions, b.directions)


class TestCsvExport:
    def test_header_and_rows(self):
        t = ct.compute_tensor(qs.make_werner(1.0))
        buf = io.StringIO()
        ct.tensor_to_csv(t, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "j1,j2,value"
        assert len(lines) == 1 + 16
        assert lines[1].startswith("0,0,")
        # row order is C order over index tuples; (1, 1) is row 1*4+1+1
        row = lines[1 + 4 + 1].split(",")
        assert row[:2] == ["1", "1"]
        assert float(row[2]) == pytest.approx(-1.0, abs=1e-12)

    def test_values_parse_back(self):
        t = ct.compute_tensor(qs.make_noisy_ghz(2, 0.37))
        buf = io.StringIO()
        ct.tensor_to_csv(t, buf)
        lines = buf.getvalue().strip().splitlines()[1:]
        parsed = np.array([float(line.split(",")[-1]) for line in lines])
        assert np.max(np.abs(parsed - t.values.reshape(-1))) == 0.0
