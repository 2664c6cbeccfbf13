"""Correlated Pauli channels acting on N-qubit density matrices.

The error string applied to a register is drawn from a Markov chain over qubit
positions: the first symbol follows the single-qubit distribution, and each
later symbol repeats its predecessor with probability ``mu`` or is redrawn
from the single-qubit distribution otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from cohchan.errors import EnumerationLimitError, ValidationError
from cohchan.linalg import TRACE_TOL, check_qubit_count, is_hermitian, num_qubits, popcount_parity

#: Default cap on the number of enumerated (nonzero-probability) strings.
ENUMERATION_CAP = 4 ** 8

# symbol indices
I, X, Y, Z = 0, 1, 2, 3
SYMBOLS = "IXYZ"


class ChannelKind(enum.Enum):
    PHASE_FLIP = "phaseflip"
    BIT_FLIP = "bitflip"
    BIT_PHASE_FLIP = "bitphaseflip"
    DEPOLARIZING = "depolarizing"

    @classmethod
    def parse(cls, value: "ChannelKind | str") -> "ChannelKind":
        """Accept an enum member or a loose spelling such as ``"bit-flip"``."""
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "").replace("-", "").replace(" ", "")
        for kind in cls:
            if kind.value == key:
                return kind
        choices = ", ".join(k.value for k in cls)
        raise ValidationError(f"unknown channel kind {value!r}; expected one of {choices}")

    def __str__(self) -> str:
        return self.value


def check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value


def single_qubit_probs(kind: ChannelKind | str, p: float) -> np.ndarray:
    """Probabilities of (I, X, Y, Z) for one application of the channel."""
    kind = ChannelKind.parse(kind)
    p = check_probability("p", p)
    probs = np.zeros(4)
    probs[I] = 1.0 - p
    if kind is ChannelKind.PHASE_FLIP:
        probs[Z] = p
    elif kind is ChannelKind.BIT_FLIP:
        probs[X] = p
    elif kind is ChannelKind.BIT_PHASE_FLIP:
        probs[Y] = p
    else:
        probs[X:] = p / 3.0
    return probs


@dataclass(frozen=True)
class CorrelatedChannel:
    """A Pauli channel with Markov memory ``mu`` applied to ``n_qubits`` qubits."""

    kind: ChannelKind
    p: float
    mu: float
    n_qubits: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind.parse(self.kind))
        object.__setattr__(self, "p", check_probability("p", self.p))
        object.__setattr__(self, "mu", check_probability("mu", self.mu))
        object.__setattr__(self, "n_qubits", check_qubit_count(self.n_qubits))

    @property
    def probs(self) -> np.ndarray:
        return single_qubit_probs(self.kind, self.p)

    @property
    def support(self) -> tuple[int, ...]:
        """Symbols with nonzero single-qubit probability, in I<X<Y<Z order."""
        return tuple(int(i) for i in np.flatnonzero(self.probs > 0.0))


class PauliString(NamedTuple):
    word: tuple[int, ...]
    probability: float

    @property
    def label(self) -> str:
        return "".join(SYMBOLS[s] for s in self.word)


def transition_matrix(probs: np.ndarray, mu: float) -> np.ndarray:
    """``T[i, j]`` = probability of symbol ``j`` given predecessor ``i``."""
    probs = np.asarray(probs, dtype=float)
    return (1.0 - mu) * probs[np.newaxis, :] + mu * np.eye(len(probs))


def joint_probability(word: Sequence[int], probs, mu: float) -> float:
    """Markov-chain probability of a Pauli word (symbols 0..3 = I, X, Y, Z)."""
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (4,) or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValidationError(f"probs must be a distribution over 4 symbols, got {probs}")
    mu = check_probability("mu", mu)
    word = tuple(int(s) for s in word)
    if not word or any(s not in (I, X, Y, Z) for s in word):
        raise ValidationError(f"invalid Pauli word {word!r}")
    prob = float(probs[word[0]])
    for prev, cur in zip(word, word[1:]):
        prob *= (1.0 - mu) * probs[cur] + mu * (1.0 if cur == prev else 0.0)
    return prob


def string_table(channel: CorrelatedChannel, cap: int = ENUMERATION_CAP) -> tuple[np.ndarray, np.ndarray]:
    """All nonzero-probability words as an ``(M, N)`` int array plus probabilities.

    Rows are in lexicographic order of symbol index.  Zero-probability prefixes
    are pruned as the chain is extended, so ``mu = 1`` yields one word per
    support symbol regardless of ``N``.
    """
    support = np.array(channel.support, dtype=np.int8)
    probs = channel.probs
    trans = transition_matrix(probs, channel.mu)
    k = len(support)

    words = support[:, np.newaxis].copy()
    weights = probs[support].copy()
    for _ in range(1, channel.n_qubits):
        prev = np.repeat(words[:, -1], k)
        nxt = np.tile(support, len(words))
        weights = np.repeat(weights, k) * trans[prev, nxt]
        words = np.column_stack([np.repeat(words, k, axis=0), nxt])
        keep = weights > 0.0
        words, weights = words[keep], weights[keep]
        if len(words) > cap:
            raise EnumerationLimitError(
                f"{channel.kind} channel on {channel.n_qubits} qubits needs more than "
                f"{cap} Pauli strings"
            )
    return words, weights


def enumerate_strings(channel: CorrelatedChannel, cap: int = ENUMERATION_CAP) -> list[PauliString]:
    words, weights = string_table(channel, cap)
    return [PauliString(tuple(int(s) for s in w), float(pw)) for w, pw in zip(words, weights)]


def _masks(words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Bit-flip and phase masks of each word; position 0 is the top bit."""
    words = np.atleast_2d(words)
    n = words.shape[1]
    bits = (1 << np.arange(n - 1, -1, -1)).astype(np.int64)
    flip = (words == X) | (words == Y)
    phase = (words == Y) | (words == Z)
    return flip @ bits, phase @ bits


def _signs(phase_masks: np.ndarray, dim: int) -> np.ndarray:
    """``out[s, u] = (-1)**popcount(u & phase_masks[s])``."""
    basis = np.arange(dim, dtype=np.int64)
    return 1.0 - 2.0 * popcount_parity(np.bitwise_and.outer(phase_masks, basis))


def _check_state(rho: np.ndarray, n_qubits: int | None = None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho)
    if n_qubits is not None and n != n_qubits:
        raise ValidationError(f"state has {n} qubits but the channel acts on {n_qubits}")
    if not is_hermitian(rho):
        raise ValidationError("input state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValidationError("input state does not have unit trace")
    return rho


def apply_string(rho: np.ndarray, word: Sequence[int] | PauliString) -> np.ndarray:
    """Conjugate ``rho`` by a Pauli string: ``P rho P^dagger``.

    X and Y components permute basis indices, Y and Z components contribute a
    sign; the global phase of Y cancels between ``P`` and ``P^dagger``.
    """
    if isinstance(word, PauliString):
        word = word.word
    word = np.asarray(word, dtype=np.int64)
    rho = np.asarray(rho)
    n = num_qubits(rho)
    if word.ndim != 1 or len(word) != n:
        raise ValidationError(f"word of length {word.size} does not match {n} qubits")
    if np.any((word < 0) | (word > 3)):
        raise ValidationError(f"invalid Pauli word {word.tolist()}")
    flip, phase = (int(m[0]) for m in _masks(word[np.newaxis, :]))
    dim = rho.shape[0]
    perm = np.arange(dim) ^ flip
    sign = _signs(np.array([phase]), dim)[0]
    return np.outer(sign, sign) * rho[np.ix_(perm, perm)]


def apply_channel(rho0: np.ndarray, channel: CorrelatedChannel, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Exact channel output by summing over every enumerated Pauli string.

    Strings sharing a bit-flip mask act through the same index permutation, so
    their sign patterns are summed into one real weight matrix before it is
    applied; the sum runs over groups in ascending mask order.
    """
    rho0 = _check_state(rho0, channel.n_qubits)
    words, weights = string_table(channel, cap)
    flips, phases = _masks(words)
    dim = rho0.shape[0]
    basis = np.arange(dim)
    out = np.zeros_like(rho0)
    block = 1024
    for flip in np.unique(flips):
        sel = np.flatnonzero(flips == flip)
        weight = np.zeros((dim, dim))
        for start in range(0, len(sel), block):
            chunk = sel[start:start + block]
            signs = _signs(phases[chunk], dim)
            weight += signs.T @ (weights[chunk, np.newaxis] * signs)
        perm = basis ^ flip
        out += weight * rho0[np.ix_(perm, perm)]
    return out


def dephasing_factors(n_qubits: int, p: float, mu: float) -> np.ndarray:
    """Signed string-probability sums for every difference mask at once.

    ``out[m] = sum_s P(s) (-1)**(s . m)`` over words ``s`` in {I, Z}**N, computed
    by propagating a length-2 vector through one transfer matrix per qubit.
    """
    n_qubits = check_qubit_count(n_qubits)
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    probs = np.array([1.0 - p, p])
    # trans[j, i]: weight of symbol j (I or Z) after symbol i
    trans = (1.0 - mu) * probs[:, np.newaxis] + mu * np.eye(2)
    masks = np.arange(2 ** n_qubits)
    vec = None
    for pos in range(n_qubits):
        bit = (masks >> (n_qubits - 1 - pos)) & 1
        z_sign = 1.0 - 2.0 * bit
        if vec is None:
            vec = np.column_stack([np.full(len(masks), probs[0]), probs[1] * z_sign])
        else:
            vec = vec @ trans.T
            vec[:, 1] *= z_sign
    return vec.sum(axis=1)


def dephasing_factor(diff_mask: int, p: float, mu: float, n_qubits: int) -> float:
    """Multiplier of the off-diagonal element ``(x, y)`` with ``x ^ y == diff_mask``.

    Bit ``n_qubits - 1 - k`` of the mask refers to qubit ``k``.
    """
    n_qubits = check_qubit_count(n_qubits)
    if not 0 <= diff_mask < 2 ** n_qubits:
        raise ValidationError(f"mask {diff_mask} out of range for {n_qubits} qubits")
    p = check_probability("p", p)
    mu = check_probability("mu", mu)
    probs = (1.0 - p, p)
    vec = None
    for pos in range(n_qubits):
        z_sign = -1.0 if (diff_mask >> (n_qubits - 1 - pos)) & 1 else 1.0
        if vec is None:
            vec = [probs[0], probs[1] * z_sign]
            continue
        new = []
        for j in range(2):
            acc = 0.0
            for i in range(2):
                acc += vec[i] * ((1.0 - mu) * probs[j] + (mu if i == j else 0.0))
            new.append(acc)
        vec = [new[0], new[1] * z_sign]
    return vec[0] + vec[1]


def apply_phase_flip_fast(rho0: np.ndarray, channel: CorrelatedChannel) -> np.ndarray:
    """Correlated phase flip in O(4**N) time via per-mask dephasing factors."""
    if channel.kind is not ChannelKind.PHASE_FLIP:
        raise ValidationError(f"fast path only supports the phase flip channel, got {channel.kind}")
    rho0 = _check_state(rho0, channel.n_qubits)
    factors = dephasing_factors(channel.n_qubits, channel.p, channel.mu)
    basis = np.arange(rho0.shape[0])
    return rho0 * factors[np.bitwise_xor.outer(basis, basis)]


def evolve(rho0: np.ndarray, channel: CorrelatedChannel, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Channel output using the fast path when the channel allows it."""
    if channel.kind is ChannelKind.PHASE_FLIP:
        return apply_phase_flip_fast(rho0, channel)
    return apply_channel(rho0, channel, cap)
