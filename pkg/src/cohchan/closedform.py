"""Analytic coherence values for the maximally coherent input.

All coherence values returned here are normalized: the l1 value is divided by
``2**N - 1`` and the relative-entropy value by ``N``.  Functions that only
have a closed form in some parameter regimes return ``None`` elsewhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from cohchan.channel import ChannelKind, check_probability
from cohchan.errors import SingularParameterError, ValidationError
from cohchan.linalg import binary_entropy

FAMILIES = ("alpha", "beta", "eta")


class _Frozen(enum.Enum):
    FROZEN = "frozen"

    def __repr__(self) -> str:
        return "FROZEN"


#: Returned by :func:`reduce_channel` when the input passes through unchanged.
FROZEN = _Frozen.FROZEN


@dataclass(frozen=True)
class CoefficientTable:
    family: str
    n_qubits: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        """1-based access, zero outside the table."""
        return self.values[n - 1] if 1 <= n <= len(self.values) else 0

    def __len__(self) -> int:
        return len(self.values)


@lru_cache(maxsize=None)
def _alpha(n: int) -> tuple[int, ...]:
    if n == 1:
        return (1,)
    prev = CoefficientTable("alpha", n - 1, _alpha(n - 1))
    middle = [prev[k - 1] + prev[k] for k in range(2, n)]
    return (n, *middle, 1)


@lru_cache(maxsize=None)
def _beta(n: int) -> tuple[int, ...]:
    if n == 1:
        return (1, 2)
    prev = CoefficientTable("beta", n - 1, _beta(n - 1))
    tail = [2 * prev[k] + prev[k - 1] for k in range(3, n + 2)]
    return (2 ** n - 1, 2 ** (n - 1) * (n + 1), *tail)


@lru_cache(maxsize=None)
def _eta(n: int) -> tuple[int, ...]:
    if n == 2:
        return (1,)
    prev = CoefficientTable("eta", n - 1, _eta(n - 1))
    middle = [prev[k - 1] + prev[k] for k in range(2, n - 1)]
    return (n - 1, *middle, 1)


def coefficients(family: str, n_qubits: int) -> CoefficientTable:
    """Exact integer coefficient table of the l1 closed forms.

    ``alpha`` (length N) belongs to the uncorrelated case, ``beta`` (length
    N + 1) to ``mu = 0.5`` and ``eta`` (length N - 1, N >= 2) to ``p = 0.5``.
    """
    if family not in FAMILIES:
        raise ValidationError(f"unknown coefficient family {family!r}; expected one of {FAMILIES}")
    if isinstance(n_qubits, bool) or int(n_qubits) != n_qubits:
        raise ValidationError(f"qubit count must be an integer, got {n_qubits!r}")
    n_qubits = int(n_qubits)
    minimum = 2 if family == "eta" else 1
    if n_qubits < minimum:
        raise ValidationError(f"{family} coefficients need N >= {minimum}, got {n_qubits}")
    build = {"alpha": _alpha, "beta": _beta, "eta": _eta}[family]
    return CoefficientTable(family, n_qubits, build(n_qubits))


CoefficientSource = Callable[[str, int], CoefficientTable]


def _check_n(n_qubits: int) -> int:
    if isinstance(n_qubits, bool) or int(n_qubits) != n_qubits or n_qubits < 1:
        raise ValidationError(f"qubit count must be a positive integer, got {n_qubits!r}")
    return int(n_qubits)


def l1_phase_flip(
    n_qubits: int, p: float, mu: float, table: CoefficientSource = coefficients
) -> Optional[float]:
    """Normalized l1 coherence after the correlated phase flip, if known exactly.

    Closed forms exist for ``mu`` in {0, 0.5, 1}, for ``p = 0.5`` at any ``mu``,
    and trivially for ``p`` in {0, 1}.  Returns ``None`` for any other point.
    ``table`` supplies the coefficient tables (overridable for testing).
    """
    n = _check_n(n_qubits)
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    denom = 2 ** n - 1
    q = abs(1.0 - 2.0 * p)

    if p == 0.0 or p == 1.0:
        return 1.0
    if mu == 0.0:
        alpha = table("alpha", n)
        return math.fsum(alpha[k] * q ** k for k in range(1, n + 1)) / denom
    if mu == 1.0:
        return (2 ** (n - 1) * (1.0 + q) - 1.0) / denom
    if mu == 0.5:
        pp = 1.0 - p if p > 0.5 else p
        beta = table("beta", n)
        terms = ((-1) ** (k - 1) * beta[k] * pp ** (k - 1) for k in range(1, n + 2))
        return math.fsum(terms) / denom
    if p == 0.5:
        if n == 1:
            return 0.0
        eta = table("eta", n)
        return math.fsum(eta[k] * mu ** k for k in range(1, n)) / denom
    return None


def epsilon_eigenvalues(p: float, mu: float) -> tuple[float, float, float, float]:
    """Spectrum of the two-qubit output state for the maximally coherent input."""
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    off = p * (1.0 - p) * (1.0 - mu)
    return (off, off, p * (p + mu - p * mu), (1.0 - p) * (1.0 - p + p * mu))


def _xlogx_sum(values) -> float:
    return math.fsum(v * math.log2(v) for v in values if v > 0.0)


def k_factor(p: float, mu: float) -> float:
    """Weight of the 1/N-dependent term of the normalized relative-entropy coherence."""
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    if p == 0.0 or p == 1.0:
        raise SingularParameterError(f"k is undefined at p = {p} (binary entropy vanishes)")
    if mu == 0.0:
        return 0.0
    if mu == 1.0:
        return 1.0
    h = binary_entropy(p)
    return (_xlogx_sum(epsilon_eigenvalues(p, mu)) + 2.0 * h) / h


def re_phase_flip(n_qubits: int, p: float, mu: float) -> float:
    """Normalized relative-entropy coherence after the correlated phase flip."""
    n = _check_n(n_qubits)
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    if p == 0.0 or p == 1.0:
        return 1.0
    h = binary_entropy(p)
    if mu == 0.0:
        return 1.0 - h
    if mu == 1.0:
        return 1.0 - h / n
    return 1.0 - h + k_factor(p, mu) * h * (1.0 - 1.0 / n)


def asymptotic_re(p: float, mu: float) -> float:
    """Large-N limit of :func:`re_phase_flip`."""
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    if p == 0.0 or p == 1.0 or mu == 1.0:
        return 1.0
    return 1.0 - (1.0 - k_factor(p, mu)) * binary_entropy(p)


def asymptotic_l1_fully_correlated(p: float) -> float:
    p = check_probability("p", p)
    return (1.0 + abs(1.0 - 2.0 * p)) / 2.0


def reduce_channel(kind: ChannelKind | str, p: float) -> float | _Frozen:
    """Map a channel to the equivalent phase-flip parameter for the maximally coherent input.

    Bit flip leaves that input untouched and returns :data:`FROZEN`.  The
    bit-phase flip behaves like a phase flip with the same ``p``, and the
    depolarizing channel like a phase flip with ``2p/3``.
    """
    kind = ChannelKind.parse(kind)
    p = check_probability("p", p)
    if kind is ChannelKind.BIT_FLIP:
        return FROZEN
    if kind is ChannelKind.DEPOLARIZING:
        return 2.0 * p / 3.0
    return p
