"""Bell-type tests: the probability-form two-party inequality and the
rotational-invariance bound on in-plane correlation tensors.

The two-party expression is
    B = P(A1=B2) - P(A1=B1) - P(A2=B1) - P(A2=B2) <= 0
for local realistic models; the in-plane bound is
    S = sum over in-plane index tuples of T^2  <=  (4/pi)^N E_max,
with E_max the largest correlation-function value reachable inside the
measurement planes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import product

import numpy as np

from .corrtensor import (
    CorrelationTensor,
    LocalFrame,
    inplane_norm_sq,
    max_product_value,
)
from .qstate import DensityMatrix, make_ghz, measurement_distribution

CHSH_TOL = 1e-10
ROTATIONAL_TOL = 1e-9


@dataclass(frozen=True)
class DeterministicAssignment:
    """Predetermined +-1 outcomes for both settings on both sides."""

    a1: int
    a2: int
    b1: int
    b2: int

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            if getattr(self, name) not in (-1, 1):
                raise ValueError(f"{name} must be +1 or -1")


@dataclass(frozen=True)
class LemmaRecord:
    max_value: int
    max_count: int
    values: tuple


def bell_expression(assignment: DeterministicAssignment) -> int:
    """Integer value of the four-proposition expression for one assignment."""
    a = assignment
    return (
        int(a.a1 == a.b2) - int(a.a1 == a.b1) - int(a.a2 == a.b1) - int(a.a2 == a.b2)
    )


def lr_lemma_exhaustive() -> LemmaRecord:
    """Sweep all 16 deterministic assignments; the maximum must be 0.

    Uses integer arithmetic throughout, so the bound is exact.
    """
    values = []
    for a1, a2, b1, b2 in product((-1, 1), repeat=4):
        values.append(bell_expression(DeterministicAssignment(a1, a2, b1, b2)))
    top = max(values)
    if top > 0:
        raise AssertionError(f"deterministic assignment exceeded 0: {top}")
    return LemmaRecord(max_value=top, max_count=values.count(top), values=tuple(values))


@dataclass(frozen=True)
class BellReport:
    b_value: float
    bound: float
    violated: bool
    equality_probabilities: np.ndarray  # [m, n] -> P(A_m = B_n)


def equality_probability(rho: DensityMatrix, a_dir, b_dir) -> float:
    """P(A = B) for one setting pair, from the joint Born distribution."""
    probs = measurement_distribution(rho, np.array([a_dir, b_dir], dtype=float))
    return float(probs[0, 0] + probs[1, 1])


def chsh_probability_value(rho: DensityMatrix, a_dirs, b_dirs) -> BellReport:
    """Evaluate the probability-form expression on a two-qubit state.

    ``a_dirs`` and ``b_dirs`` each hold two unit 3-vectors (settings 1, 2).
    """
    if rho.n_qubits != 2:
        raise ValueError(f"need a two-qubit state, got {rho.n_qubits} qubits")
    a_dirs = np.asarray(a_dirs, dtype=float)
    b_dirs = np.asarray(b_dirs, dtype=float)
    if a_dirs.shape != (2, 3) or b_dirs.shape != (2, 3):
        raise ValueError("each side needs exactly two 3-vector settings")
    eq = np.empty((2, 2))
    for m in range(2):
        for n in range(2):
            eq[m, n] = equality_probability(rho, a_dirs[m], b_dirs[n])
    b_value = eq[0, 1] - eq[0, 0] - eq[1, 0] - eq[1, 1]
    return BellReport(
        b_value=float(b_value),
        bound=0.0,
        violated=bool(b_value > CHSH_TOL),
        equality_probabilities=eq,
    )


def inplane_direction(angle: float) -> np.ndarray:
    """Unit vector cos(angle) x + sin(angle) y."""
    return np.array([np.cos(angle), np.sin(angle), 0.0])


def chsh_optimal_configuration():
    """Preset reaching B = sqrt(2) - 1: the (|00> + |11>)/sqrt(2) state with
    in-plane angles a = (0, pi/2) and b = (3 pi/4, pi/4).

    Returns (rho, a_dirs, b_dirs); any of them can be replaced.
    """
    rho = make_ghz(2).projector()
    a_dirs = np.array([inplane_direction(0.0), inplane_direction(np.pi / 2)])
    b_dirs = np.array([inplane_direction(3 * np.pi / 4), inplane_direction(np.pi / 4)])
    return rho, a_dirs, b_dirs


@dataclass(frozen=True)
class RotationalReport:
    s_value: float
    e_max: float
    bound: float
    violated: bool
    converged: bool


def rotational_test(
    t: CorrelationTensor,
    frame: LocalFrame,
    seed: int = 0,
    restarts: int = 32,
) -> RotationalReport:
    """Check S <= (4/pi)^N E_max for the tensor's in-plane components."""
    s_value = inplane_norm_sq(t, frame)
    opt = max_product_value(t, frame=frame, seed=seed, restarts=restarts)
    bound = (4.0 / np.pi) ** t.n_qubits * opt.value
    return RotationalReport(
        s_value=float(s_value),
        e_max=float(opt.value),
        bound=float(bound),
        violated=bool(s_value > bound + ROTATIONAL_TOL),
        converged=opt.converged,
    )


def ghz_thresholds(n: int) -> dict:
    """Noise thresholds above which a noisy GHZ state defeats local realism.

    standard:   v >= 2^-(n-1)/2   (two-setting inequalities)
    rotational: v >  2 (2/pi)^n   (in-plane tensor bound)
    """
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    return {
        "standard": 2.0 ** (-(n - 1) / 2.0),
        "rotational": 2.0 * (2.0 / np.pi) ** n,
    }


def threshold_rows(n_min: int, n_max: int) -> list:
    """Rows (n, standard, rotational, rotational_smaller) for n in range."""
    if not 2 <= n_min <= n_max <= 20:
        raise ValueError(
            f"need 2 <= n_min <= n_max <= 20, got n_min={n_min}, n_max={n_max}"
        )
    rows = []
    for n in range(n_min, n_max + 1):
        th = ghz_thresholds(n)
        rows.append(
            {
                "n": n,
                "standard_threshold": th["standard"],
                "rotational_threshold": th["rotational"],
                "rotational_smaller": th["rotational"] < th["standard"],
            }
        )
    return rows


def write_threshold_csv(rows, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["n", "standard_threshold", "rotational_threshold", "rotational_smaller"])
    for row in rows:
        writer.writerow(
            [
                row["n"],
                repr(row["standard_threshold"]),
                repr(row["rotational_threshold"]),
                str(row["rotational_smaller"]).lower(),
            ]
        )
