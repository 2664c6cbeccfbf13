"""Dense complex linear algebra for small multiqubit systems.

States are plain ``numpy`` arrays of shape ``(2**N, 2**N)``.  Qubit 0 is the
most significant bit of a basis index, matching the left-most factor of a
Kronecker product.
"""

from __future__ import annotations

import math
import os

import numpy as np

from cohchan.errors import DimensionLimitError, ValidationError

#: Hard upper bound on the number of qubits handled densely.
N_MAX = 12

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
EIGEN_CUTOFF = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)


def max_qubits() -> int:
    """Effective qubit limit; ``COHCHAN_NMAX`` may lower it but never raise it."""
    raw = os.environ.get("COHCHAN_NMAX")
    if raw is None or raw.strip() == "":
        return N_MAX
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"COHCHAN_NMAX must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValidationError(f"COHCHAN_NMAX must be positive, got {value}")
    return min(value, N_MAX)


def check_qubit_count(n_qubits: int) -> int:
    if isinstance(n_qubits, bool) or int(n_qubits) != n_qubits:
        raise ValidationError(f"qubit count must be an integer, got {n_qubits!r}")
    n_qubits = int(n_qubits)
    if n_qubits < 1:
        raise ValidationError(f"qubit count must be >= 1, got {n_qubits}")
    limit = max_qubits()
    if n_qubits > limit:
        raise DimensionLimitError(f"{n_qubits} qubits exceeds the limit of {limit}")
    return n_qubits


def num_qubits(rho: np.ndarray) -> int:
    """Number of qubits of a square ``2**N`` matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {rho.shape}")
    dim = rho.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise ValidationError(f"dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the dimension limit enforced before allocation."""
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    limit = 2 ** max_qubits()
    if rows > limit or cols > limit:
        raise DimensionLimitError(
            f"kron result {rows}x{cols} exceeds {limit}x{limit} ({max_qubits()} qubits)"
        )
    return np.kron(a, b)


def kron_all(*factors: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in descending order.

    Raises
    ------
    ValidationError
        If ``m`` is not square or deviates from Hermiticity by more than 1e-10.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        raise ValidationError("matrix is not Hermitian within 1e-10")
    # eigvalsh reads one triangle only; symmetrise so both halves contribute
    herm = 0.5 * (m + m.conj().T)
    return np.linalg.eigvalsh(herm)[::-1]


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the spectrum."""
    rho = np.asarray(rho)
    num_qubits(rho)
    trace = np.trace(rho)
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace {trace} differs from 1 by more than {TRACE_TOL}")
    spectrum = hermitian_eigenvalues(rho)
    if spectrum[-1] < -PSD_TOL:
        raise ValidationError(f"matrix has negative eigenvalue {spectrum[-1]:.3e}")
    return spectrum


def shannon_entropy(probs) -> float:
    """Entropy in bits of a probability vector; entries <= 1e-12 are dropped."""
    probs = np.asarray(probs, dtype=float)
    probs = probs[probs > EIGEN_CUTOFF]
    return float(-np.sum(probs * np.log2(probs)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits.

    Eigenvalues in ``[-1e-10, 0)`` are treated as round-off and clamped; those
    below ``1e-12`` do not contribute to the sum.
    """
    spectrum = validate_density_matrix(rho)
    return shannon_entropy(np.clip(spectrum, 0.0, None))


def binary_entropy(p: float) -> float:
    """H2(p) in bits with the 0 log 0 = 0 convention."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def partial_trace_to_qubit(rho: np.ndarray, n_qubits: int, keep: int) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` (qubit 0 = most significant bit)."""
    rho = np.asarray(rho)
    if num_qubits(rho) != n_qubits:
        raise ValidationError(f"matrix dimension {rho.shape[0]} does not match {n_qubits} qubits")
    if isinstance(keep, bool) or int(keep) != keep or not 0 <= keep < n_qubits:
        raise ValidationError(f"qubit index {keep} out of range for {n_qubits} qubits")
    left = 2 ** keep
    right = 2 ** (n_qubits - keep - 1)
    t = rho.reshape(left, 2, right, left, 2, right)
    reduced = np.einsum("aibajb->ij", t)
    return 0.5 * (reduced + reduced.conj().T)


def basis_permutation(rho: np.ndarray, perm) -> np.ndarray:
    """Relabel computational basis states: ``out[i, j] = rho[perm[i], perm[j]]``."""
    perm = np.asarray(perm)
    return np.asarray(rho)[np.ix_(perm, perm)]


def popcount_parity(values: np.ndarray) -> np.ndarray:
    """Parity (0/1) of the set bits of each entry of an integer array."""
    v = np.asarray(values, dtype=np.int64).copy()
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity
