"""Coherence and correlation measures in the computational basis."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from cohchan.errors import NumericalConsistencyError, ValidationError
from cohchan.linalg import (
    check_qubit_count,
    num_qubits,
    partial_trace_to_qubit,
    shannon_entropy,
    von_neumann_entropy,
)

#: Values of non-negative quantities below this raise instead of clamping.
NEGATIVE_TOL = 1e-9


def _nonnegative(name: str, value: float) -> float:
    if value < -NEGATIVE_TOL:
        raise NumericalConsistencyError(f"{name} = {value:.3e} is negative beyond {NEGATIVE_TOL}")
    return max(value, 0.0)


def maximally_coherent_state(n_qubits: int) -> np.ndarray:
    """Density matrix of the uniform superposition over all 2**N basis states."""
    n_qubits = check_qubit_count(n_qubits)
    dim = 2 ** n_qubits
    return np.full((dim, dim), 1.0 / dim, dtype=complex)


def dephase(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    return np.diag(np.diag(rho))


def coherence_l1(rho: np.ndarray) -> float:
    """Sum of absolute values of the off-diagonal entries."""
    rho = np.asarray(rho)
    num_qubits(rho)
    off = np.abs(rho)
    np.fill_diagonal(off, 0.0)
    return float(off.sum())


def _diagonal_entropy(rho: np.ndarray) -> float:
    return shannon_entropy(np.clip(np.real(np.diag(rho)), 0.0, None))


def coherence_relative_entropy(rho: np.ndarray) -> float:
    """S(dephase(rho)) - S(rho) in bits."""
    value = _diagonal_entropy(rho) - von_neumann_entropy(rho)
    return _nonnegative("relative entropy of coherence", value)


def normalized(value: float, measure: str, n_qubits: int) -> float:
    """Divide by the value the measure takes on the maximally coherent state."""
    if value < 0:
        raise ValidationError(f"coherence value must be non-negative, got {value}")
    if measure == "l1":
        return value / (2 ** n_qubits - 1)
    if measure == "re":
        return value / n_qubits
    raise ValidationError(f"unknown measure {measure!r}; expected 'l1' or 're'")


def _local_entropies(rho: np.ndarray, n: int) -> tuple[list[float], list[float]]:
    """Per-qubit (S(rho_i), S(dephase(rho_i)))."""
    entropies, diag_entropies = [], []
    for q in range(n):
        reduced = partial_trace_to_qubit(rho, n, q)
        entropies.append(von_neumann_entropy(reduced))
        diag_entropies.append(_diagonal_entropy(reduced))
    return entropies, diag_entropies


def unlocalized_coherence(rho: np.ndarray) -> float:
    """Joint relative-entropy coherence minus the sum of single-qubit ones."""
    return report(rho).uqc


def mutual_information(rho: np.ndarray) -> float:
    """Total correlation sum_i S(rho_i) - S(rho) in bits."""
    rho = np.asarray(rho)
    n = num_qubits(rho)
    local, _ = _local_entropies(rho, n)
    return _nonnegative("mutual information", sum(local) - von_neumann_entropy(rho))


@dataclass(frozen=True)
class CoherenceReport:
    n_qubits: int
    c_l1: float
    c_re: float
    c_l1_normalized: float
    c_re_normalized: float
    local_c_re: tuple[float, ...]
    uqc: float
    mutual_information: float

    def as_dict(self) -> dict:
        return asdict(self)


def report(rho: np.ndarray) -> CoherenceReport:
    """Evaluate every measure from one pass over the joint and reduced states."""
    rho = np.asarray(rho)
    n = num_qubits(rho)
    s_joint = von_neumann_entropy(rho)
    s_diag = _diagonal_entropy(rho)
    local, local_diag = _local_entropies(rho, n)

    c_l1 = coherence_l1(rho)
    c_re = _nonnegative("relative entropy of coherence", s_diag - s_joint)
    local_c_re = tuple(
        _nonnegative(f"relative entropy of coherence of qubit {q}", d - s)
        for q, (s, d) in enumerate(zip(local, local_diag))
    )
    uqc_raw = (s_diag - s_joint) - sum(d - s for s, d in zip(local, local_diag))
    return CoherenceReport(
        n_qubits=n,
        c_l1=c_l1,
        c_re=c_re,
        c_l1_normalized=normalized(c_l1, "l1", n),
        c_re_normalized=normalized(c_re, "re", n),
        local_c_re=local_c_re,
        uqc=_nonnegative("unlocalized coherence", uqc_raw),
        mutual_information=_nonnegative("mutual information", sum(local) - s_joint),
    )
