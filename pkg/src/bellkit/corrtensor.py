"""Generalized correlation tensors and their rank-1 maximization.

A state rho on N qubits decomposes as
    rho = 2^-N sum_{j1..jN} T_{j1..jN} sigma_{j1} x ... x sigma_{jN},
with T_{j1..jN} = Tr(rho sigma_{j1} x ... x sigma_{jN}) and index 0 the
identity.  "Proper" components are those with every index in 1..3; they
carry the N-party correlations contracted here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .qstate import PAULI, DensityMatrix, NumericalIntegrityError

DEFAULT_RESTARTS = 32
DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 500


@dataclass(frozen=True)
class CorrelationTensor:
    """Real array of 4^N expectation values, shape (4,)*N, C-ordered."""

    n_qubits: int
    values: np.ndarray

    def __post_init__(self):
        n = int(self.n_qubits)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (4,) * n:
            raise ValueError(f"values must have shape {(4,) * n}, got {vals.shape}")
        top = float(np.max(np.abs(vals)))
        if top > 1.0 + 1e-10:
            raise ValueError(f"tensor component out of [-1, 1]: max |T| = {top!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "values", vals)

    @property
    def proper(self) -> np.ndarray:
        """View of the components with all indices in 1..3, shape (3,)*N."""
        return self.values[(slice(1, 4),) * self.n_qubits]


@dataclass(frozen=True)
class LocalFrame:
    """Per-party orthonormal measurement axes, two or three per party."""

    axes: np.ndarray  # shape (n_parties, n_axes, 3)

    def __post_init__(self):
        ax = np.asarray(self.axes, dtype=float)
        if ax.ndim != 3 or ax.shape[2] != 3 or ax.shape[1] not in (2, 3):
            raise ValueError(
                f"axes must have shape (n_parties, 2 or 3, 3), got {ax.shape}"
            )
        gram = np.einsum("kaK,kbK->kab", ax, ax)
        eye = np.eye(ax.shape[1])
        err = float(np.max(np.abs(gram - eye)))
        if err > 1e-12:
            raise ValueError(f"axes not orthonormal: max Gram deviation {err:g}")
        ax.setflags(write=False)
        object.__setattr__(self, "axes", ax)

    @property
    def n_parties(self) -> int:
        return self.axes.shape[0]

    @property
    def n_axes(self) -> int:
        return self.axes.shape[1]


def xy_frame(n_parties: int) -> LocalFrame:
    """The standard frame with axes x, y for every party."""
    ax = np.zeros((n_parties, 2, 3))
    ax[:, 0, 0] = 1.0
    ax[:, 1, 1] = 1.0
    return LocalFrame(ax)


def compute_tensor(rho: DensityMatrix) -> CorrelationTensor:
    """Extract the full correlation tensor of a density matrix.

    Works qubit by qubit on the reshaped matrix, so the cost is
    O(N 4^N) instead of 4^N separate operator traces.
    """
    n = rho.n_qubits
    arr = rho.matrix.reshape((2,) * (2 * n))
    for k in range(n):
        # axes after k steps: (r_k..r_{n-1}, c_k..c_{n-1}, j_0..j_{k-1});
        # pairing (r_k, c_k) against (col, row) of sigma_j traces qubit k
        # of rho sigma_j.
        arr = np.tensordot(arr, PAULI, axes=([0, n - k], [2, 1]))
    residue = float(np.max(np.abs(arr.imag)))
    if residue > 1e-8:
        raise NumericalIntegrityError(
            f"correlation tensor has imaginary residue {residue:g}"
        )
    vals = arr.real
    if abs(vals[(0,) * n] - 1.0) > 1e-10:
        raise NumericalIntegrityError(
            f"identity component is {vals[(0,) * n]!r}, expected 1"
        )
    return CorrelationTensor(n, vals)


def tensor_to_density(t: CorrelationTensor) -> DensityMatrix:
    """Rebuild the density matrix 2^-N sum_J T_J sigma_J from a tensor."""
    n = t.n_qubits
    arr = t.values.astype(complex)
    for _ in range(n):
        # consume the leading Pauli index, appending (row, col) axes
        arr = np.tensordot(arr, PAULI, axes=([0], [0]))
    # axes are now (r_0, c_0, r_1, c_1, ...); regroup rows then cols
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    mat = np.transpose(arr, order).reshape(2**n, 2**n) / 2**n
    return DensityMatrix(n, mat)


def _check_party_count(t: CorrelationTensor, other: int, what: str) -> None:
    if t.n_qubits != other:
        raise ValueError(
            f"party count mismatch: tensor has {t.n_qubits}, {what} has {other}"
        )


def correlation_function(t: CorrelationTensor, directions) -> float:
    """Contract the proper components with one unit 3-vector per party."""
    dirs = np.asarray(directions, dtype=float)
    if dirs.ndim != 2 or dirs.shape[1] != 3:
        raise ValueError(f"directions must have shape (N, 3), got {dirs.shape}")
    _check_party_count(t, dirs.shape[0], "direction list")
    norms = np.linalg.norm(dirs, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ValueError("all measurement directions must be unit vectors")
    out = t.proper
    for k in range(t.n_qubits):
        out = np.tensordot(out, dirs[k], axes=([0], [0]))
    return float(out)


def tensor_dot(s: CorrelationTensor, q: CorrelationTensor) -> float:
    """Scalar product over proper components only."""
    _check_party_count(s, q.n_qubits, "second tensor")
    return float(np.sum(s.proper * q.proper))


def frame_components(t: CorrelationTensor, frame: LocalFrame) -> np.ndarray:
    """Tensor components along the frame axes: an (n_axes,)*N array."""
    _check_party_count(t, frame.n_parties, "frame")
    out = t.proper
    for k in range(t.n_qubits):
        # rotate qubit k's proper index into the frame; new axis goes last
        out = np.moveaxis(np.tensordot(out, frame.axes[k], axes=([k], [1])), -1, k)
    return out


def inplane_norm_sq(t: CorrelationTensor, frame: LocalFrame) -> float:
    """Sum of squared components over the two frame axes of every party."""
    if frame.n_axes != 2:
        raise ValueError(f"frame must have exactly 2 axes per party, got {frame.n_axes}")
    comps = frame_components(t, frame)
    return float(np.sum(comps**2))


@dataclass(frozen=True)
class MaxProductResult:
    value: float
    directions: np.ndarray  # (N, 3) unit vectors attaining value
    converged: bool


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))


def _contract_all_but(proper: np.ndarray, dirs: np.ndarray, k: int) -> np.ndarray:
    """Partial contraction leaving party k free; dirs has shape (R, N, 3).

    Returns the (R, 3) gradient of the multilinear objective in party k.
    """
    n = dirs.shape[1]
    out = np.broadcast_to(proper, (dirs.shape[0],) + proper.shape)
    out = np.moveaxis(out, 1 + k, -1)
    for m in [m for m in range(n) if m != k]:
        out = np.einsum("ri...,ri->r...", out, dirs[:, m, :])
    return out


def _objective(proper: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Multilinear objective for each restart row of dirs (R, N, 3)."""
    out = np.broadcast_to(proper, (dirs.shape[0],) + proper.shape)
    for m in range(dirs.shape[1]):
        out = np.einsum("ri...,ri->r...", out, dirs[:, m, :])
    return out


def max_product_value(
    t: CorrelationTensor,
    frame: LocalFrame | None = None,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> MaxProductResult:
    """Maximize the correlation function over unit product directions.

    With ``frame=None`` each party ranges over all of 3-space; with a
    two-axis frame each party is restricted to its plane.  Alternating
    ascent: the optimal vector for one party given the others is the
    normalized partial contraction, so every step is exact and monotone.
    Restarts are seeded from (seed, restart index); one extra start sits
    on the axes of the largest-magnitude component so the result is never
    below max |T| under the same restriction.

    Only the value is canonical: when several direction lists attain the
    maximum, the reported one depends on the seed.
    """
    n = t.n_qubits
    proper = t.proper
    if frame is not None:
        if frame.n_axes != 2:
            raise ValueError("plane restriction needs a frame with 2 axes per party")
        _check_party_count(t, frame.n_parties, "frame")

    # random starts, one per restart, plus one deterministic axis start
    starts = np.empty((restarts + 1, n, 3))
    for r in range(restarts):
        rng = _restart_rng(seed, r)
        if frame is None:
            vecs = rng.normal(size=(n, 3))
        else:
            coef = rng.normal(size=(n, 2))
            vecs = np.einsum("ka,kaj->kj", coef, frame.axes)
        starts[r] = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    if frame is None:
        best_idx = np.unravel_index(np.argmax(np.abs(proper)), proper.shape)
        starts[restarts] = np.eye(3)[list(best_idx)]
    else:
        comps = frame_components(t, frame)
        best_idx = np.unravel_index(np.argmax(np.abs(comps)), comps.shape)
        starts[restarts] = frame.axes[np.arange(n), list(best_idx)]

    dirs = starts
    values = _objective(proper, dirs)
    converged = np.zeros(len(dirs), dtype=bool)
    for _ in range(max_sweeps):
        for k in range(n):
            grad = _contract_all_but(proper, dirs, k)
            if frame is not None:
                coef = np.einsum("ri,ai->ra", grad, frame.axes[k])
                grad = np.einsum("ra,ai->ri", coef, frame.axes[k])
            norms = np.linalg.norm(grad, axis=1)
            ok = norms > 1e-300
            dirs[ok, k, :] = grad[ok] / norms[ok, None]
        new_values = _objective(proper, dirs)
        converged = np.abs(new_values - values) < tol
        values = new_values
        if converged.all():
            break
    best = int(np.argmax(values))
    return MaxProductResult(
        value=float(values[best]),
        directions=dirs[best].copy(),
        converged=bool(converged[best]),
    )


def tensor_to_csv(t: CorrelationTensor, fh) -> None:
    """Write one row per index tuple: columns j1..jN then the value."""
    n = t.n_qubits
    writer = csv.writer(fh)
    writer.writerow([f"j{k}" for k in range(1, n + 1)] + ["value"])
    flat = t.values.reshape(-1)
    for i, idx in enumerate(np.ndindex(*(4,) * n)):
        writer.writerow(list(idx) + [repr(float(flat[i]))])
