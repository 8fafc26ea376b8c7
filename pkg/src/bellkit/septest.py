"""Entanglement detection from correlation-tensor geometry.

Every separable tensor satisfies (T, T) <= T^max, where the scalar
product runs over proper components and T^max is the largest value of
the tensor contracted with unit product directions.  Violation proves
entanglement; the test is one-sided.  Generalized metric operators G on
tensor space extend this:  max over pure product states of
|<t_sep, G t_ent>| < <t_ent, G t_ent> also certifies entanglement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corrtensor import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_RESTARTS,
    DEFAULT_TOL,
    CorrelationTensor,
    compute_tensor,
    max_product_value,
    tensor_dot,
    _restart_rng,
)
from .qstate import DensityMatrix, bloch_qubit

DETECTION_TOL = 1e-7


@dataclass(frozen=True)
class SeparabilityReport:
    norm_sq: float
    t_max: float
    entangled_detected: bool
    margin: float
    converged: bool


def separability_check(
    rho: DensityMatrix, seed: int = 0, restarts: int = DEFAULT_RESTARTS
) -> SeparabilityReport:
    """Tensor-norm test: entangled if (T, T) exceeds T^max.

    A False verdict is inconclusive; a True verdict certifies
    entanglement (up to the optimizer finding the true T^max; detection
    is suppressed when the maximization did not converge).
    """
    t = compute_tensor(rho)
    norm_sq = tensor_dot(t, t)
    opt = max_product_value(t, seed=seed, restarts=restarts)
    margin = norm_sq - opt.value
    return SeparabilityReport(
        norm_sq=float(norm_sq),
        t_max=float(opt.value),
        entangled_detected=bool(opt.converged and margin > DETECTION_TOL),
        margin=float(margin),
        converged=opt.converged,
    )


# --- metric operators --------------------------------------------------------


class MetricOperator:
    """Non-negative symmetric bilinear form on 4^N tensor components.

    Coordinates follow the C-order flattening of the (4,)*N component
    array, matching the CSV export row order.
    """

    n_qubits: int

    def apply(self, flat: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def quadratic(self, s: CorrelationTensor, q: CorrelationTensor) -> float:
        if s.n_qubits != self.n_qubits or q.n_qubits != self.n_qubits:
            raise ValueError("tensor party count does not match the metric")
        return float(np.dot(s.values.reshape(-1), self.apply(q.values.reshape(-1))))


class DiagonalMetric(MetricOperator):
    """Metric with one non-negative weight per tensor coordinate."""

    def __init__(self, n_qubits: int, weights):
        w = np.asarray(weights, dtype=float).reshape(-1)
        if w.shape != (4**n_qubits,):
            raise ValueError(
                f"need {4**n_qubits} weights for {n_qubits} qubits, got {w.size}"
            )
        if np.min(w) < -1e-10:
            raise ValueError(f"metric weights must be non-negative, min = {w.min():g}")
        w.setflags(write=False)
        self.n_qubits = int(n_qubits)
        self.weights = w

    def apply(self, flat: np.ndarray) -> np.ndarray:
        return self.weights * flat


class DenseMetric(MetricOperator):
    """Metric stored as a dense symmetric positive semidefinite matrix."""

    def __init__(self, n_qubits: int, matrix):
        dim = 4**n_qubits
        m = np.asarray(matrix, dtype=float)
        if m.shape != (dim, dim):
            raise ValueError(f"metric matrix must be {dim}x{dim}, got {m.shape}")
        sym_err = float(np.max(np.abs(m - m.T)))
        if sym_err > 1e-12:
            raise ValueError(f"metric matrix not symmetric: deviation {sym_err:g}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -1e-10:
            raise ValueError(f"metric not non-negative: min eigenvalue {min_eig:g}")
        m.setflags(write=False)
        self.n_qubits = int(n_qubits)
        self.matrix = m

    def apply(self, flat: np.ndarray) -> np.ndarray:
        return self.matrix @ flat


def identity_proper_metric(n_qubits: int) -> DiagonalMetric:
    """Weight 1 on every proper coordinate, 0 elsewhere; with this metric
    the identifier check reduces to the tensor-norm test."""
    w = np.ones((4,) * n_qubits)
    for k in range(n_qubits):
        idx = [slice(None)] * n_qubits
        idx[k] = 0
        w[tuple(idx)] = 0.0
    return DiagonalMetric(n_qubits, w.reshape(-1))


def rank_one_metric(direction: CorrelationTensor | np.ndarray, n_qubits: int | None = None) -> DenseMetric:
    """Projector metric G = v v^T onto one generalized tensor coordinate.

    A single axis-aligned coordinate can never detect (a product state
    reaches |T_J| = 1 on any axis), but a direction such as the
    normalized tensor of the state under test can.
    """
    if isinstance(direction, CorrelationTensor):
        n_qubits = direction.n_qubits
        v = direction.values.reshape(-1).astype(float)
    else:
        if n_qubits is None:
            raise ValueError("n_qubits is required for a raw coordinate vector")
        v = np.asarray(direction, dtype=float).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("direction must be non-zero")
    v = v / norm
    return DenseMetric(n_qubits, np.outer(v, v))


@dataclass(frozen=True)
class IdentifierReport:
    rhs: float
    lhs_max: float
    detected: bool
    converged: bool


def _product_ascent(
    w: np.ndarray,
    seed: int,
    restarts: int,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
):
    """Maximize <u_1 x ... x u_N, w> over u_k = (1, b_k) with |b_k| = 1.

    w has shape (4,)*N.  The objective is linear in each Bloch vector,
    so the per-party update (normalized gradient) is exact and monotone.
    Returns (value, converged) for the best restart.
    """
    n = w.ndim
    blochs = np.empty((restarts, n, 3))
    for r in range(restarts):
        rng = _restart_rng(seed, r)
        v = rng.normal(size=(n, 3))
        blochs[r] = v / np.linalg.norm(v, axis=1, keepdims=True)

    def u_vectors(b):
        u = np.empty((b.shape[0], n, 4))
        u[:, :, 0] = 1.0
        u[:, :, 1:] = b
        return u

    def objective(b):
        out = np.broadcast_to(w, (b.shape[0],) + w.shape)
        u = u_vectors(b)
        for m in range(n):
            out = np.einsum("ri...,ri->r...", out, u[:, m, :])
        return out

    values = objective(blochs)
    converged = np.zeros(restarts, dtype=bool)
    for _ in range(max_sweeps):
        for k in range(n):
            u = u_vectors(blochs)
            out = np.broadcast_to(w, (restarts,) + w.shape)
            out = np.moveaxis(out, 1 + k, -1)
            for m in [m for m in range(n) if m != k]:
                out = np.einsum("ri...,ri->r...", out, u[:, m, :])
            grad = out[:, 1:]  # the constant u_k0 = 1 part does not move
            norms = np.linalg.norm(grad, axis=1)
            ok = norms > 1e-300
            blochs[ok, k, :] = grad[ok] / norms[ok, None]
        new_values = objective(blochs)
        converged = np.abs(new_values - values) < tol
        values = new_values
        if converged.all():
            break
    best = int(np.argmax(values))
    return float(values[best]), bool(converged[best])


def identifier_check(
    rho_ent: DensityMatrix,
    metric: MetricOperator,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> IdentifierReport:
    """Metric-operator entanglement identifier.

    detected means: the largest |<t_prod, G t_ent>| over pure product
    states falls short of <t_ent, G t_ent>, which is impossible for a
    separable t_ent.
    """
    if metric.n_qubits != rho_ent.n_qubits:
        raise ValueError(
            f"metric is for {metric.n_qubits} qubits, state has {rho_ent.n_qubits}"
        )
    t = compute_tensor(rho_ent)
    rhs = metric.quadratic(t, t)
    w = metric.apply(t.values.reshape(-1)).reshape(t.values.shape)
    hi, conv_hi = _product_ascent(w, seed, restarts)
    lo, conv_lo = _product_ascent(-w, seed, restarts)
    lhs_max = max(hi, lo)
    converged = conv_hi and conv_lo
    return IdentifierReport(
        rhs=float(rhs),
        lhs_max=float(lhs_max),
        detected=bool(converged and lhs_max < rhs - DETECTION_TOL),
        converged=converged,
    )


def random_separable(n: int, k_terms: int, seed: int) -> DensityMatrix:
    """Convex mixture of k_terms pure product states.

    Bloch vectors are uniform on the sphere, weights uniform on the
    simplex; the result is separable by construction.
    """
    if k_terms < 1:
        raise ValueError(f"k_terms must be >= 1, got {k_terms}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k_terms))
    mat = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(k_terms):
        blochs = rng.normal(size=(n, 3))
        blochs /= np.linalg.norm(blochs, axis=1, keepdims=True)
        term = np.array([[1.0 + 0j]])
        for b in blochs:
            term = np.kron(term, bloch_qubit(b))
        mat += weights[i] * term
    return DensityMatrix(n, mat)


# --- metric JSON format ------------------------------------------------------
#
# { "kind": "diagonal", "weights": [...] }  or
# { "kind": "dense",    "matrix": [[...], ...] }
# Coordinates are ordered like the CSV tensor export (C-order index tuples).


def metric_to_json(metric: MetricOperator) -> dict:
    if isinstance(metric, DiagonalMetric):
        return {"kind": "diagonal", "weights": [float(x) for x in metric.weights]}
    if isinstance(metric, DenseMetric):
        return {"kind": "dense", "matrix": [[float(x) for x in row] for row in metric.matrix]}
    raise TypeError(f"unknown metric type {type(metric)!r}")


def metric_from_json(obj, n_qubits: int) -> MetricOperator:
    if not isinstance(obj, dict):
        raise ValueError("metric document must be a JSON object")
    kind = obj.get("kind")
    if kind == "diagonal":
        if "weights" not in obj:
            raise ValueError("missing field 'weights'")
        return DiagonalMetric(n_qubits, obj["weights"])
    if kind == "dense":
        if "matrix" not in obj:
            raise ValueError("missing field 'matrix'")
        return DenseMetric(n_qubits, obj["matrix"])
    raise ValueError("field 'kind' must be 'diagonal' or 'dense'")


def load_metric(path, n_qubits: int) -> MetricOperator:
    with open(path, "r", encoding="utf-8") as fh:
        return metric_from_json(json.load(fh), n_qubits)
