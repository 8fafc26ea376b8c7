"""N-qubit pure states and density matrices with Pauli expectation values.

Basis convention: qubit 1 is the most significant bit of the
computational-basis index, so ``np.kron(a, b)`` places ``a`` on qubit 1.
Pauli index convention: 0 = identity, 1/2/3 = x/y/z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Dense 2^N amplitudes / 4^N tensor components stay small up to this cap.
MAX_QUBITS = 10

# Single-qubit Pauli operators, indexed 0..3 (identity, x, y, z).
PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class NumericalIntegrityError(ArithmeticError):
    """A quantity that must be real carries a too-large imaginary part."""


def _check_n_qubits(n: int) -> int:
    n = int(n)
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n}")
    return n


@dataclass(frozen=True)
class StateVector:
    """Pure N-qubit state as a dense complex amplitude vector."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = _check_n_qubits(self.n_qubits)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (2**n,):
            raise ValueError(
                f"amplitude vector must have length {2**n}, got {amps.shape[0]}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum |amp|^2 = {norm_sq!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def projector(self) -> "DensityMatrix":
        """Return |psi><psi| as a DensityMatrix."""
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.n_qubits, mat)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed N-qubit state: Hermitian, unit-trace, positive 2^N x 2^N matrix."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        n = _check_n_qubits(self.n_qubits)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2**n
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix must be {dim}x{dim}, got {mat.shape}")
        herm_err = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_err > 1e-12:
            raise ValueError(f"matrix not Hermitian: max |rho - rho^dag| = {herm_err:g}")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace must be 1, got {tr!r}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -1e-10:
            raise ValueError(f"matrix not positive: min eigenvalue = {min_eig:g}")
        mat.setflags(write=False)
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def make_ghz(n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """GHZ state (|0...0> + |1...1>)/sqrt(2) on n qubits, 2 <= n <= max_qubits."""
    if not 2 <= n <= max_qubits:
        raise ValueError(f"GHZ size must be in [2, {max_qubits}], got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return StateVector(n, amps)


def make_noisy_ghz(n: int, v: float) -> DensityMatrix:
    """Mixture v |GHZ><GHZ| + (1 - v) I / 2^n with visibility v in [0, 1]."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {v}")
    ghz = make_ghz(n)
    dim = 2**n
    mat = v * np.outer(ghz.amplitudes, ghz.amplitudes.conj())
    mat += (1.0 - v) / dim * np.eye(dim)
    return DensityMatrix(n, mat)


def make_werner(v: float) -> DensityMatrix:
    """Two-qubit mixture v |psi-><psi-| + (1 - v) I / 4.

    The maximally entangled component is the singlet (|01> - |10>)/sqrt(2),
    whose proper correlation tensor is diag(-1, -1, -1).
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must be in [0, 1], got {v}")
    singlet = np.zeros(4, dtype=complex)
    singlet[1] = 1.0 / np.sqrt(2.0)
    singlet[2] = -1.0 / np.sqrt(2.0)
    mat = v * np.outer(singlet, singlet.conj()) + (1.0 - v) / 4.0 * np.eye(4)
    return DensityMatrix(2, mat)


def bloch_qubit(bloch) -> np.ndarray:
    """Single-qubit density matrix (I + b . sigma) / 2 for a Bloch vector b."""
    b = np.asarray(bloch, dtype=float).reshape(3)
    norm = float(np.linalg.norm(b))
    if norm > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector norm must be <= 1, got {norm!r}")
    return 0.5 * (PAULI[0] + b[0] * PAULI[1] + b[1] * PAULI[2] + b[2] * PAULI[3])


def make_product(blochs) -> DensityMatrix:
    """Tensor product of single-qubit states given by their Bloch vectors."""
    if len(blochs) == 0:
        raise ValueError("need at least one Bloch vector")
    mat = np.array([[1.0 + 0j]])
    for b in blochs:
        mat = np.kron(mat, bloch_qubit(b))
    return DensityMatrix(len(blochs), mat)


def _check_pauli_string(indices, n_qubits: int) -> tuple[int, ...]:
    idx = tuple(int(j) for j in indices)
    if len(idx) != n_qubits:
        raise ValueError(
            f"Pauli string length {len(idx)} does not match {n_qubits} qubits"
        )
    if any(j not in (0, 1, 2, 3) for j in idx):
        raise ValueError(f"Pauli indices must be in 0..3, got {idx}")
    return idx


def pauli_operator(indices) -> np.ndarray:
    """Dense 2^N x 2^N operator sigma_{j1} x ... x sigma_{jN}."""
    op = np.array([[1.0 + 0j]])
    for j in indices:
        op = np.kron(op, PAULI[int(j)])
    return op


def pauli_expectation(rho: DensityMatrix, indices) -> float:
    """Tr(rho sigma_{j1} x ... x sigma_{jN}); always real for valid inputs."""
    idx = _check_pauli_string(indices, rho.n_qubits)
    return pauli_expectation_matrix(rho.matrix, idx)


def pauli_expectation_matrix(matrix: np.ndarray, indices) -> float:
    """Same as pauli_expectation on a raw matrix, with a realness check."""
    op = pauli_operator(indices)
    val = complex(np.sum(matrix * op.T))
    if abs(val.imag) > 1e-8:
        raise NumericalIntegrityError(
            f"Pauli expectation has imaginary residue {val.imag:g} for {tuple(indices)}"
        )
    return val.real


def check_unit_vector(v, atol: float = 1e-12) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > atol:
        raise ValueError(f"direction must be a unit 3-vector, got norm {norm!r}")
    return v


def measurement_basis(direction) -> np.ndarray:
    """Unitary whose columns are the +1 / -1 eigenvectors of n . sigma."""
    nx, ny, nz = check_unit_vector(direction)
    theta = np.arccos(np.clip(nz, -1.0, 1.0))
    phi = np.arctan2(ny, nx)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    ph = np.exp(1j * phi)
    return np.array([[c, -s], [s * ph, c * ph]])


def measurement_distribution(state, directions) -> np.ndarray:
    """Born probabilities for local measurements of n_k . sigma on each qubit.

    Returns an array of shape (2,)*N; index bit 0 along qubit k means
    outcome +1 on that qubit, bit 1 means outcome -1.
    """
    dirs = np.asarray(directions, dtype=float)
    n = state.n_qubits
    if dirs.shape != (n, 3):
        raise ValueError(f"need {n} directions of 3 components, got shape {dirs.shape}")
    basis = [measurement_basis(d) for d in dirs]
    if isinstance(state, StateVector):
        amp = state.amplitudes.reshape((2,) * n)
        for k in range(n):
            # contract qubit k with U^dag; new axis lands at the end
            amp = np.tensordot(basis[k].conj().T, amp, axes=([1], [k]))
            amp = np.moveaxis(amp, 0, k)
        probs = np.abs(amp) ** 2
    elif isinstance(state, DensityMatrix):
        mat = state.matrix.reshape((2,) * (2 * n))
        for k in range(n):
            mat = np.moveaxis(
                np.tensordot(basis[k].conj().T, mat, axes=([1], [k])), 0, k
            )
            mat = np.moveaxis(
                np.tensordot(mat, basis[k], axes=([n + k], [0])), -1, n + k
            )
        diag = np.einsum(
            "ii->i", mat.reshape((2**n, 2**n))
        )
        probs = diag.real.reshape((2,) * n)
    else:
        raise TypeError(f"expected StateVector or DensityMatrix, got {type(state)!r}")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out all qubits except those in ``keep`` (1-based, ascending)."""
    keep = sorted(int(k) for k in keep)
    n = rho.n_qubits
    if not keep or any(k < 1 or k > n for k in keep):
        raise ValueError(f"keep must name qubits in 1..{n}, got {keep}")
    mat = rho.matrix.reshape((2,) * (2 * n))
    drop = [k - 1 for k in range(1, n + 1) if k not in keep]
    for count, q in enumerate(drop):
        row = q - count
        col = row + (n - count)
        mat = np.trace(mat, axis1=row, axis2=col)
    m = len(keep)
    return DensityMatrix(m, mat.reshape((2**m, 2**m)))


# --- JSON state format -------------------------------------------------------
#
# { "n_qubits": int, "kind": "pure" | "mixed", "data": [[re, im], ...] }
# "pure": 2^N amplitude pairs; "mixed": 4^N matrix entries in row-major order.


def state_to_json(state) -> dict:
    """Encode a StateVector or DensityMatrix as a JSON-ready dict."""
    if isinstance(state, StateVector):
        flat = state.amplitudes
        kind = "pure"
    elif isinstance(state, DensityMatrix):
        flat = state.matrix.reshape(-1)
        kind = "mixed"
    else:
        raise TypeError(f"expected StateVector or DensityMatrix, got {type(state)!r}")
    data = [[float(z.real), float(z.imag)] for z in flat]
    return {"n_qubits": state.n_qubits, "kind": kind, "data": data}


def state_from_json(obj):
    """Decode the JSON state format; raises ValueError naming the bad field."""
    if not isinstance(obj, dict):
        raise ValueError("state document must be a JSON object")
    for field in ("n_qubits", "kind", "data"):
        if field not in obj:
            raise ValueError(f"missing field '{field}'")
    n = obj["n_qubits"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("field 'n_qubits' must be an integer")
    kind = obj["kind"]
    if kind not in ("pure", "mixed"):
        raise ValueError("field 'kind' must be 'pure' or 'mixed'")
    data = obj["data"]
    if not isinstance(data, list):
        raise ValueError("field 'data' must be a list of [re, im] pairs")
    expected = 2**n if kind == "pure" else 4**n
    if len(data) != expected:
        raise ValueError(f"field 'data' must have {expected} entries, got {len(data)}")
    flat = np.empty(expected, dtype=complex)
    for i, pair in enumerate(data):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise ValueError(f"field 'data[{i}]' must be a [re, im] number pair")
        flat[i] = complex(pair[0], pair[1])
    if kind == "pure":
        return StateVector(n, flat)
    return DensityMatrix(n, flat.reshape(2**n, 2**n))


def save_state(path, state) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh)
        fh.write("\n")


def load_state(path):
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))
