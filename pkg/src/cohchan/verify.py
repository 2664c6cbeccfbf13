"""Self-test: closed forms and channel identities against brute-force density matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from cohchan import closedform
from cohchan.channel import (
    ChannelKind,
    CorrelatedChannel,
    apply_channel,
    apply_phase_flip_fast,
    string_table,
)
from cohchan.coherence import maximally_coherent_state, report
from cohchan.errors import ValidationError
from cohchan.linalg import binary_entropy, hermitian_eigenvalues
from cohchan.sweep import random_density_matrix

GRID_11 = tuple(k / 10 for k in range(11))
GRID_21 = tuple(k / 20 for k in range(21))
MU_5 = (0.0, 0.25, 0.5, 0.75, 1.0)
P_6 = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
REDUCTION_N_MAX = 5
RANDOM_N_MAX = 4


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst_deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst={self.worst_deviation:.3e} tol={self.tolerance:.0e}"


@dataclass
class VerificationReport:
    n_max: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        out.append(f"{'PASS' if self.passed else 'FAIL'} overall ({len(self.checks)} checks, n_max={self.n_max})")
        return out


class _Cache:
    """Memoised brute-force reports for the maximally coherent input."""

    def __init__(self):
        self._states: dict[int, np.ndarray] = {}
        self._reports: dict[tuple, object] = {}

    def state(self, n: int) -> np.ndarray:
        if n not in self._states:
            self._states[n] = maximally_coherent_state(n)
        return self._states[n]

    def output(self, kind, n, p, mu) -> np.ndarray:
        ch = CorrelatedChannel(kind, p, mu, n)
        if ch.kind is ChannelKind.PHASE_FLIP:
            return apply_phase_flip_fast(self.state(n), ch)
        return apply_channel(self.state(n), ch)

    def report(self, kind, n, p, mu):
        key = (ChannelKind.parse(kind), n, p, mu)
        if key not in self._reports:
            self._reports[key] = report(self.output(kind, n, p, mu))
        return self._reports[key]


def _worst(values: Iterator[float]) -> float:
    return max(values, default=0.0)


def verify(
    n_max: int = 5,
    table: Callable = closedform.coefficients,
    random_inputs: int = 10,
) -> VerificationReport:
    """Run every cross-check for systems of up to ``n_max`` qubits (1..7).

    ``table`` replaces the coefficient tables used by the l1 closed forms, so
    a deliberately corrupted table can be shown to be caught.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or not 1 <= n_max <= 7:
        raise ValidationError(f"n_max must be an integer in [1, 7], got {n_max!r}")
    n_max = int(n_max)
    ns = range(1, n_max + 1)
    small = range(1, min(n_max, REDUCTION_N_MAX) + 1)
    cache = _Cache()
    pf = ChannelKind.PHASE_FLIP
    result = VerificationReport(n_max)
    add = result.checks.append

    def prob_sums():
        for kind in ChannelKind:
            for n in ns:
                for p in GRID_11:
                    for mu in MU_5:
                        _, w = string_table(CorrelatedChannel(kind, p, mu, n))
                        yield abs(math.fsum(w) - 1.0)

    add(CheckResult("string_probabilities_sum_to_one", _worst(prob_sums()), 1e-12))

    def fast_vs_enum():
        for n in ns:
            inputs = (cache.state(n), random_density_matrix(n, 1234))
            for p in (0.0, 0.1, 0.3, 0.5, 0.8, 1.0):
                for mu in MU_5:
                    ch = CorrelatedChannel(pf, p, mu, n)
                    for rho in inputs:
                        yield float(np.max(np.abs(apply_phase_flip_fast(rho, ch) - apply_channel(rho, ch))))

    add(CheckResult("phase_flip_fast_path_matches_enumeration", _worst(fast_vs_enum()), 1e-12))

    def l1_dev(points):
        points = tuple(points)
        for n in ns:
            for p, mu in points:
                closed = closedform.l1_phase_flip(n, p, mu, table=table)
                yield abs(closed - cache.report(pf, n, p, mu).c_l1_normalized)

    add(CheckResult("l1_closed_form_uncorrelated", _worst(l1_dev((p, 0.0) for p in GRID_21)), 1e-10))
    add(CheckResult("l1_closed_form_fully_correlated", _worst(l1_dev((p, 1.0) for p in GRID_21)), 1e-10))
    add(CheckResult("l1_closed_form_half_correlated", _worst(l1_dev((p, 0.5) for p in GRID_21)), 1e-10))
    add(CheckResult("l1_closed_form_half_flip", _worst(l1_dev((0.5, mu) for mu in GRID_11)), 1e-10))

    def re_dev():
        for n in ns:
            for p in GRID_11:
                for mu in GRID_11:
                    closed = closedform.re_phase_flip(n, p, mu)
                    yield abs(closed - cache.report(pf, n, p, mu).c_re_normalized)

    add(CheckResult("re_closed_form", _worst(re_dev()), 1e-9))

    def k_routes():
        for p in GRID_11[1:-1]:
            h = binary_entropy(p)
            for mu in GRID_11:
                spectrum = np.clip(hermitian_eigenvalues(cache.output(pf, 2, p, mu)), 0.0, None)
                xlogx = sum(v * math.log2(v) for v in spectrum if v > 1e-15)
                yield abs(closedform.k_factor(p, mu) - (xlogx + 2.0 * h) / h)

    add(CheckResult("k_factor_matches_two_qubit_spectrum", _worst(k_routes()), 1e-9))

    def coeff_tables():
        for n in range(1, 21):
            alpha = table("alpha", n).values
            yield 0.0 if alpha == tuple(math.comb(n, k) for k in range(1, n + 1)) else math.inf
            if n >= 2:
                eta = table("eta", n).values
                yield 0.0 if eta == tuple(math.comb(n - 1, k) for k in range(1, n)) else math.inf

    add(CheckResult("coefficient_tables_match_binomials", _worst(coeff_tables()), 0.0))

    def reduction(kind, compare):
        for n in small:
            for p in P_6:
                for mu in MU_5:
                    yield compare(n, p, mu, cache.report(kind, n, p, mu))

    def frozen(n, p, mu, rep):
        return max(abs(rep.c_l1_normalized - 1.0), abs(rep.c_re_normalized - 1.0))

    def same_as(p_map):
        def compare(n, p, mu, rep):
            ref = cache.report(pf, n, p_map(p), mu)
            return max(abs(rep.c_l1_normalized - ref.c_l1_normalized),
                       abs(rep.c_re_normalized - ref.c_re_normalized),
                       abs(rep.uqc - ref.uqc))
        return compare

    add(CheckResult("bit_flip_frozen", _worst(reduction(ChannelKind.BIT_FLIP, frozen)), 1e-12))
    add(CheckResult("bit_phase_flip_equals_phase_flip",
                    _worst(reduction(ChannelKind.BIT_PHASE_FLIP, same_as(lambda p: p))), 1e-12))
    add(CheckResult("depolarizing_equals_phase_flip_at_two_thirds_p",
                    _worst(reduction(ChannelKind.DEPOLARIZING, same_as(lambda p: 2.0 * p / 3.0))), 1e-9))

    def uqc_mi():
        for kind in ChannelKind:
            yield from reduction(kind, lambda n, p, mu, rep: abs(rep.uqc - rep.mutual_information))

    add(CheckResult("uqc_equals_mutual_information", _worst(uqc_mi()), 1e-9))

    def uqc_full():
        for n in small:
            for p in GRID_11:
                yield abs(cache.report(pf, n, p, 1.0).uqc - (n - 1) * binary_entropy(p))

    add(CheckResult("uqc_fully_correlated_value", _worst(uqc_full()), 1e-9))

    def gain_identity():
        for n in range(2, min(n_max, RANDOM_N_MAX) + 1):
            for seed in range(random_inputs):
                rho0 = random_density_matrix(n, seed)
                before = report(rho0)
                p, mu = GRID_11[1 + seed % 9], MU_5[seed % 5]
                after = report(apply_phase_flip_fast(rho0, CorrelatedChannel(pf, p, mu, n)))
                yield abs((after.uqc - before.uqc) - (after.mutual_information - before.mutual_information))

    add(CheckResult("uqc_change_equals_correlation_gain", _worst(gain_identity()), 1e-9))

    def symmetry():
        for n in ns:
            for p in GRID_11:
                for mu in MU_5:
                    a, b = cache.report(pf, n, p, mu), cache.report(pf, n, 1.0 - p, mu)
                    yield max(abs(a.c_l1 - b.c_l1), abs(a.c_re - b.c_re),
                              abs(a.uqc - b.uqc), abs(a.mutual_information - b.mutual_information))

    add(CheckResult("phase_flip_symmetric_in_p", _worst(symmetry()), 1e-12))

    def monotone_mu():
        for n in small:
            for p in GRID_11[1:-1]:
                prev = None
                for mu in GRID_11:
                    rep = cache.report(pf, n, p, mu)
                    cur = (rep.c_l1_normalized, rep.c_re_normalized)
                    if prev is not None:
                        yield max(prev[0] - cur[0], prev[1] - cur[1], 0.0)
                    prev = cur

    add(CheckResult("phase_flip_coherence_nondecreasing_in_mu", _worst(monotone_mu()), 1e-12))
    return result
