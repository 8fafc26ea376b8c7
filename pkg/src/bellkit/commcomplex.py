"""Distributed computation games with N - 1 bits of communication.

A task is T = f(x_1..x_N) (-1)^(z_1+..+z_N) with a promise distribution
p'(x) on the x bits and uniform z bits.  The figure of merit is the
fidelity F = <T A> of the announced answer A; success probability is
(1 + F) / 2.  For one-bit-per-partner protocols the classical optimum
reduces to F = sum_x g(x) prod_n c_n(x_n) with g = f p' and per-party
sign functions c_n, maximized at sign assignments c_n(x_n) = +-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .corrtensor import compute_tensor, correlation_function
from .qstate import StateVector, make_ghz, measurement_distribution

MAX_EXHAUSTIVE_PARTIES = 12


class UnsupportedTaskError(ValueError):
    """The task does not fit the requested protocol."""


@dataclass(frozen=True)
class TaskSpec:
    """A task function, its promise support, and the input distribution.

    ``f`` and ``p_prime`` are arrays of shape (2,)*n_parties indexed by the
    x bits; ``support`` is the boolean promise mask.  f must be +-1 on the
    support and is ignored elsewhere.
    """

    n_parties: int
    f: np.ndarray
    p_prime: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        n = int(self.n_parties)
        if n < 2:
            raise ValueError(f"need at least 2 parties, got {n}")
        shape = (2,) * n
        f = np.asarray(self.f, dtype=float)
        p = np.asarray(self.p_prime, dtype=float)
        sup = np.asarray(self.support, dtype=bool)
        if f.shape != shape or p.shape != shape or sup.shape != shape:
            raise ValueError(f"f, p_prime and support must all have shape {shape}")
        if np.any(p < 0):
            raise ValueError("p_prime must be non-negative")
        if np.any(p[~sup] != 0):
            raise ValueError("p_prime must vanish off the promise support")
        total = float(p[sup].sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"p_prime must sum to 1 on the support, got {total!r}")
        if np.any(np.abs(np.abs(f[sup]) - 1.0) > 0):
            raise ValueError("f must be +1 or -1 on every support tuple")
        for arr in (f, p, sup):
            arr.setflags(write=False)
        object.__setattr__(self, "n_parties", n)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "p_prime", p)
        object.__setattr__(self, "support", sup)

    @property
    def g(self) -> np.ndarray:
        """Weight tensor g = f * p_prime."""
        return self.f * self.p_prime

    def support_tuples(self) -> list:
        return [tuple(int(b) for b in x) for x in np.argwhere(self.support)]


def make_mod4_task(n: int) -> TaskSpec:
    """The modulo-4 sum game on n >= 2 partners.

    Promise: sum of the x bits is even.  On the support
    f = cos(pi/2 sum x) = +-1 and p' = 2^(1-n) |f| is uniform.
    """
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    sums = np.zeros((2,) * n, dtype=int)
    for k in range(n):
        shape = [1] * n
        shape[k] = 2
        sums = sums + np.arange(2).reshape(shape)
    f = np.where(sums % 2 == 0, np.where(sums % 4 == 0, 1.0, -1.0), 0.0)
    support = sums % 2 == 0
    p_prime = np.where(support, 2.0 ** (1 - n), 0.0)
    return TaskSpec(n, f, p_prime, support)


def make_chsh_game() -> TaskSpec:
    """Two-partner game with no promise: f = +1 unless x1 = x2 = 1."""
    f = np.array([[1.0, 1.0], [1.0, -1.0]])
    p_prime = np.full((2, 2), 0.25)
    support = np.ones((2, 2), dtype=bool)
    return TaskSpec(2, f, p_prime, support)


@dataclass(frozen=True)
class ClassicalStrategy:
    """Per-party sign functions c_n: {0,1} -> {-1,+1}, as an (n, 2) array."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=int)
        if s.ndim != 2 or s.shape[1] != 2:
            raise ValueError(f"signs must have shape (n_parties, 2), got {s.shape}")
        if not np.all(np.abs(s) == 1):
            raise ValueError("strategy signs must be +1 or -1")
        s.setflags(write=False)
        object.__setattr__(self, "signs", s)

    @property
    def n_parties(self) -> int:
        return self.signs.shape[0]

    def index(self) -> int:
        """Encode as a 2N-bit integer: party 1 in the highest bit pair,
        within a pair input 0 first; bit 0 encodes +1, bit 1 encodes -1."""
        idx = 0
        for cn in self.signs:
            for s in cn:
                idx = (idx << 1) | (1 if s == -1 else 0)
        return idx

    @classmethod
    def from_index(cls, n_parties: int, index: int) -> "ClassicalStrategy":
        if not 0 <= index < 4**n_parties:
            raise ValueError(f"index must be in [0, 4^{n_parties}), got {index}")
        bits = [(index >> (2 * n_parties - 1 - i)) & 1 for i in range(2 * n_parties)]
        signs = 1 - 2 * np.array(bits).reshape(n_parties, 2)
        return cls(signs)


def reduced_fidelity(task: TaskSpec, strategy: ClassicalStrategy) -> float:
    """F = sum_x g(x) prod_n c_n(x_n) for one sign assignment."""
    if strategy.n_parties != task.n_parties:
        raise ValueError(
            f"party count mismatch: task has {task.n_parties}, "
            f"strategy has {strategy.n_parties}"
        )
    total = 0.0
    for x in task.support_tuples():
        prod = 1
        for k, bit in enumerate(x):
            prod *= int(strategy.signs[k, bit])
        total += task.g[x] * prod
    return float(total)


# Rows are the four sign functions on one bit, ordered by their 2-bit code:
# (+1,+1), (+1,-1), (-1,+1), (-1,-1).
_PARTY_STRATEGIES = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)


def _all_strategy_fidelities(task: TaskSpec) -> np.ndarray:
    """Fidelity of every sign assignment, shape (4,)*n, C-ordered so that the
    flat index equals ClassicalStrategy.index()."""
    out = task.g
    for _ in range(task.n_parties):
        # replace the leading x_k axis by the 4 per-party strategies
        out = np.tensordot(out, _PARTY_STRATEGIES, axes=([0], [1]))
    return out


@dataclass(frozen=True)
class ClassicalOptimum:
    f_star: float
    strategy: ClassicalStrategy
    index: int


def classical_optimum(task: TaskSpec) -> ClassicalOptimum:
    """Exhaustive maximum of |F| over all 4^N sign assignments.

    Returns the first maximizer in lexicographic strategy order.  Raises
    for more than 12 parties; use classical_optimum_ascent beyond that.
    """
    n = task.n_parties
    if n > MAX_EXHAUSTIVE_PARTIES:
        raise ValueError(
            f"strategy space 4^{n} is too large for exhaustive search "
            f"(cap {MAX_EXHAUSTIVE_PARTIES}); use classical_optimum_ascent"
        )
    fid = np.abs(_all_strategy_fidelities(task)).reshape(-1)
    idx = int(np.argmax(fid))
    return ClassicalOptimum(
        f_star=float(fid[idx]),
        strategy=ClassicalStrategy.from_index(n, idx),
        index=idx,
    )


def _ascend_signs(g: np.ndarray, signs: np.ndarray) -> tuple:
    """Coordinate ascent on F = sum_x g(x) prod c_n(x_n) from one start."""
    n = signs.shape[0]
    signs = signs.copy()
    while True:
        improved = False
        for k in range(n):
            # gradient of F in (c_k(0), c_k(1)) with the rest held fixed
            other = g
            for m in range(n):
                axis = 0 if m < k else 1
                if m == k:
                    continue
                vec = signs[m].astype(float)
                other = np.tensordot(other, vec, axes=([axis], [0]))
            new = np.where(other >= 0, 1, -1)
            # keep the old sign on exactly-zero gradient coordinates
            new = np.where(other == 0, signs[k], new)
            if not np.array_equal(new, signs[k]):
                signs[k] = new
                improved = True
        if not improved:
            break
    value = g
    for k in range(n):
        value = np.tensordot(value, signs[k].astype(float), axes=([0], [0]))
    return float(value), signs


def classical_optimum_ascent(
    task: TaskSpec, starts=None, n_random_starts: int = 64, seed: int = 0
) -> ClassicalOptimum:
    """Coordinate-ascent maximum of |F|; exact at vertices of the cube.

    ``starts`` may list strategy indices; by default random sign starts are
    drawn.  Ascends F on both g and -g so the absolute value is covered.
    """
    n = task.n_parties
    if starts is not None:
        start_signs = [ClassicalStrategy.from_index(n, i).signs for i in starts]
    else:
        rng = np.random.default_rng(seed)
        start_signs = list(1 - 2 * rng.integers(0, 2, size=(n_random_starts, n, 2)))
    best_val = -np.inf
    best_signs = None
    for s0 in start_signs:
        for sign in (1.0, -1.0):
            val, s = _ascend_signs(sign * task.g, np.asarray(s0, dtype=int))
            if val > best_val:
                best_val, best_signs = val, s
    strategy = ClassicalStrategy(best_signs)
    return ClassicalOptimum(
        f_star=float(best_val), strategy=strategy, index=strategy.index()
    )


# --- quantum protocols -------------------------------------------------------


def mod4_settings(n: int) -> np.ndarray:
    """In-plane measurement directions at angle (pi/2) x_k per party.

    With the n-qubit GHZ state the product of outcomes equals
    cos(pi/2 sum x) = f on every promise input, so the protocol is exact.
    """
    angles = np.array([[0.0, np.pi / 2]] * n)
    out = np.zeros((n, 2, 3))
    out[:, :, 0] = np.cos(angles)
    out[:, :, 1] = np.sin(angles)
    return out


def chsh_game_settings() -> np.ndarray:
    """Directions realizing the equality-probability target of the game:
    party 1 at angle (pi/2) x1 - pi/4, party 2 at (pi/2) x2."""
    angles = np.array([[-np.pi / 4, np.pi / 4], [0.0, np.pi / 2]])
    out = np.zeros((2, 2, 3))
    out[:, :, 0] = np.cos(angles)
    out[:, :, 1] = np.sin(angles)
    return out


def chsh_game_target(x1: int, x2: int) -> float:
    """Equality probability 1/2 + 1/2 cos(-pi/4 + pi/2 (x1 + x2))."""
    if x1 not in (0, 1) or x2 not in (0, 1):
        raise ValueError("inputs must be bits")
    return 0.5 + 0.5 * np.cos(-np.pi / 4 + (np.pi / 2) * (x1 + x2))


def _check_settings(task: TaskSpec, settings) -> np.ndarray:
    s = np.asarray(settings, dtype=float)
    if s.shape != (task.n_parties, 2, 3):
        raise ValueError(
            f"settings must have shape ({task.n_parties}, 2, 3), got {s.shape}"
        )
    norms = np.linalg.norm(s, axis=2)
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ValueError("all settings must be unit vectors")
    return s


def quantum_fidelity_analytic(task: TaskSpec, state, settings) -> float:
    """F = sum_x g(x) <prod_k n_k(x_k).sigma>, from the correlation tensor."""
    if state.n_qubits != task.n_parties:
        raise ValueError(
            f"party count mismatch: task has {task.n_parties}, "
            f"state has {state.n_qubits} qubits"
        )
    s = _check_settings(task, settings)
    rho = state.projector() if isinstance(state, StateVector) else state
    tensor = compute_tensor(rho)
    total = 0.0
    for x in task.support_tuples():
        dirs = s[np.arange(task.n_parties), list(x)]
        total += task.g[x] * correlation_function(tensor, dirs)
    return float(total)


@dataclass(frozen=True)
class ProtocolResult:
    fidelity: float
    success_prob: float
    trials: int
    stderr: float


@dataclass(frozen=True)
class ProtocolDetail:
    """Per-trial record of one simulated run."""

    x_bits: np.ndarray  # (trials, N)
    z_bits: np.ndarray  # (trials, N)
    outcomes: np.ndarray  # (trials, N) +-1 measurement results (entangled) or
    #                       (trials,) final-qubit results (sequential)
    messages: np.ndarray  # (trials, N-1) one classical bit per sender, or
    #                       empty (trials, 0) when nothing classical is sent
    qubit_hops: int  # per-trial quantum transmissions
    answers: np.ndarray  # (trials,)
    targets: np.ndarray  # (trials,)


def _make_result(scores: np.ndarray) -> ProtocolResult:
    trials = scores.size
    fidelity = float(scores.mean())
    stderr = float(scores.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return ProtocolResult(
        fidelity=fidelity,
        success_prob=(1.0 + fidelity) / 2.0,
        trials=trials,
        stderr=stderr,
    )


def run_entangled_protocol(
    task: TaskSpec,
    state,
    settings,
    trials: int,
    seed: int,
    return_detail: bool = False,
):
    """Monte Carlo run of the shared-state protocol.

    Every trial: draw x from the promise and z uniformly, sample the joint
    outcomes of the local observables n_k(x_k).sigma, have partners 1..N-1
    each send the single bit m_k = y_k gamma_k, and let the last partner
    announce A = y_N gamma_N prod m_k.  The score of a trial is T * A.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if state.n_qubits != task.n_parties:
        raise ValueError(
            f"party count mismatch: task has {task.n_parties}, "
            f"state has {state.n_qubits} qubits"
        )
    s = _check_settings(task, settings)
    n = task.n_parties
    support = task.support_tuples()
    weights = np.array([task.p_prime[x] for x in support])

    rng = np.random.default_rng(seed)
    x_idx = rng.choice(len(support), size=trials, p=weights)
    z_bits = rng.integers(0, 2, size=(trials, n))

    # joint Born distribution is fixed per support tuple; sample per group
    outcome_idx = np.empty(trials, dtype=int)
    for i, x in enumerate(support):
        mask = x_idx == i
        count = int(mask.sum())
        if count == 0:
            continue
        dirs = s[np.arange(n), list(x)]
        probs = measurement_distribution(state, dirs).reshape(-1)
        outcome_idx[mask] = rng.choice(probs.size, size=count, p=probs)

    # bit b_k of the outcome index: 0 -> gamma_k = +1 (qubit 1 is the MSB)
    shifts = n - 1 - np.arange(n)
    gamma = 1 - 2 * ((outcome_idx[:, None] >> shifts) & 1)
    y = 1 - 2 * z_bits
    messages = y[:, : n - 1] * gamma[:, : n - 1]
    assert messages.shape == (trials, n - 1)
    answers = y[:, n - 1] * gamma[:, n - 1] * np.prod(messages, axis=1)

    x_bits = np.array([support[i] for i in x_idx])
    f_vals = np.array([task.f[x] for x in support])[x_idx]
    targets = f_vals * np.prod(y, axis=1)
    scores = (targets * answers).astype(float)

    result = _make_result(scores)
    if not return_detail:
        return result
    detail = ProtocolDetail(
        x_bits=x_bits,
        z_bits=z_bits,
        outcomes=gamma,
        messages=messages,
        qubit_hops=0,
        answers=answers,
        targets=targets,
    )
    return result, detail


def _require_mod4(task: TaskSpec) -> None:
    """Structural check that the task is the modulo-4 sum game."""
    ref = make_mod4_task(task.n_parties)
    if (
        not np.array_equal(task.support, ref.support)
        or not np.allclose(task.p_prime, ref.p_prime)
        or not np.array_equal(task.f[task.support], ref.f[ref.support])
    ):
        raise UnsupportedTaskError(
            "the sequential single-qubit protocol is defined for the "
            "modulo-4 sum task only"
        )


def sequential_answer(x_bits, z_bits) -> int:
    """Deterministic answer of the single-qubit protocol for one input.

    The qubit picks up the phase pi z_k + (pi/2) x_k at partner k; on the
    promise (even sum of x bits) the total is a multiple of pi and the
    final +-basis measurement is certain.
    """
    x = np.asarray(x_bits, dtype=int)
    z = np.asarray(z_bits, dtype=int)
    if x.shape != z.shape or x.ndim != 1:
        raise ValueError("x_bits and z_bits must be equal-length bit vectors")
    if x.sum() % 2 != 0:
        raise UnsupportedTaskError("input violates the even-parity promise")
    phase = np.pi * z.sum() + (np.pi / 2) * x.sum()
    cos = np.cos(phase)
    return 1 if cos > 0 else -1


def run_sequential_protocol(
    task: TaskSpec, trials: int, seed: int, return_detail: bool = False
):
    """Entanglement-free protocol: one qubit hops through all partners.

    The qubit starts in (|0> + |1>)/sqrt(2); partner k applies the phase
    gate diag(1, exp(i(pi z_k + pi/2 x_k))) and passes it on.  The last
    partner measures in the (|0> +- |1>)/sqrt(2) basis and announces the
    outcome.  On the promise the accumulated phase is a multiple of pi,
    so the answer is always correct.  No classical bits are exchanged.

    The gate set is one minimal choice with this property; any per-party
    unitary producing the same relative phase works equally well.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _require_mod4(task)
    n = task.n_parties
    support = task.support_tuples()
    weights = np.array([task.p_prime[x] for x in support])

    rng = np.random.default_rng(seed)
    x_idx = rng.choice(len(support), size=trials, p=weights)
    x_bits = np.array([support[i] for i in x_idx])
    z_bits = rng.integers(0, 2, size=(trials, n))

    phases = np.pi * z_bits + (np.pi / 2) * x_bits
    amp1 = np.exp(1j * phases.sum(axis=1))  # amplitude of |1> after all hops
    p_plus = np.clip((1.0 + amp1.real) / 2.0, 0.0, 1.0)
    answers = np.where(rng.random(trials) < p_plus, 1, -1)

    f_vals = np.array([task.f[x] for x in support])[x_idx]
    targets = f_vals * (1 - 2 * (z_bits.sum(axis=1) % 2))
    scores = (targets * answers).astype(float)

    result = _make_result(scores)
    if not return_detail:
        return result
    detail = ProtocolDetail(
        x_bits=x_bits,
        z_bits=z_bits,
        outcomes=answers,
        messages=np.empty((trials, 0), dtype=int),
        qubit_hops=n - 1,
        answers=answers,
        targets=targets,
    )
    return result, detail


def chsh_game_equality_frequencies(
    trials_per_pair: int, seed: int, settings=None
) -> np.ndarray:
    """Simulate the two-partner game; entry [x1, x2] is the observed
    frequency of equal answers, to be compared with chsh_game_target."""
    if trials_per_pair < 1:
        raise ValueError(f"trials_per_pair must be >= 1, got {trials_per_pair}")
    s = chsh_game_settings() if settings is None else np.asarray(settings, dtype=float)
    state = make_ghz(2)
    rng = np.random.default_rng(seed)
    freq = np.empty((2, 2))
    for x1, x2 in product((0, 1), repeat=2):
        dirs = np.array([s[0, x1], s[1, x2]])
        probs = measurement_distribution(state, dirs).reshape(-1)
        idx = rng.choice(4, size=trials_per_pair, p=probs)
        equal = (idx == 0) | (idx == 3)
        freq[x1, x2] = equal.mean()
    return freq


def mod4_classical_bound(n: int) -> float:
    """B(N) = 2^(1-K) with K = N/2 for even N and (N+1)/2 for odd N."""
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    k = n // 2 if n % 2 == 0 else (n + 1) // 2
    return 2.0 ** (1 - k)
