"""Parameter sweeps over (channel, N, p, mu) grids and figure datasets."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from cohchan import closedform
from cohchan.channel import ChannelKind, CorrelatedChannel, check_probability, evolve
from cohchan.coherence import maximally_coherent_state, report
from cohchan.errors import CohchanError, ValidationError
from cohchan.linalg import binary_entropy, check_qubit_count

ENGINES = ("brute_force", "closed_form", "both")
FORMATS = ("csv", "json")
CLOSED_FORM_N_MAX = 64
COLUMNS = (
    "kind", "N", "p", "mu", "c_l1_norm", "c_re_norm",
    "uqc", "mutual_info", "engine", "abs_deviation",
)
ASYMPTOTIC = "asymptotic"

FIGURE_MU = {"a": 0.0, "b": 0.4, "c": 0.8, "d": 1.0}
FIGURE_N = tuple(range(2, 8))
FIGURE_P_POINTS = 201
FIGURE3_POINTS = 101
FIGURE1_LARGE_N = 100

Number = Union[int, float]


def random_density_matrix(n_qubits: int, seed: int) -> np.ndarray:
    """Seeded random state ``M M^dagger / tr`` with complex Gaussian ``M``."""
    n_qubits = check_qubit_count(n_qubits)
    dim = 2 ** n_qubits
    rng = np.random.default_rng([int(seed), n_qubits])
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


@dataclass(frozen=True)
class SweepConfig:
    kinds: tuple[ChannelKind, ...]
    p_grid: tuple[float, ...]
    mu_grid: tuple[float, ...]
    n_list: tuple[int, ...]
    seed: Optional[int] = None  # None means the maximally coherent input
    engine: str = "brute_force"
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        kinds = tuple(ChannelKind.parse(k) for k in self.kinds)
        if not kinds:
            raise ValidationError("sweep needs at least one channel kind")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "p_grid", tuple(check_probability("p", p) for p in self.p_grid))
        object.__setattr__(self, "mu_grid", tuple(check_probability("mu", m) for m in self.mu_grid))
        if not self.p_grid or not self.mu_grid or not self.n_list:
            raise ValidationError("p_grid, mu_grid and n_list must be non-empty")
        if self.engine not in ENGINES:
            raise ValidationError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")
        if self.format not in FORMATS:
            raise ValidationError(f"unknown format {self.format!r}; expected one of {FORMATS}")
        if self.seed is not None and self.engine != "brute_force":
            raise ValidationError("closed forms exist only for the maximally coherent input")
        n_list = []
        for n in self.n_list:
            if isinstance(n, bool) or int(n) != n or n < 1:
                raise ValidationError(f"qubit counts must be positive integers, got {n!r}")
            n = int(n)
            if self.engine == "closed_form":
                if n > CLOSED_FORM_N_MAX:
                    raise ValidationError(f"closed forms are evaluated up to N = {CLOSED_FORM_N_MAX}")
            else:
                check_qubit_count(n)
            n_list.append(n)
        object.__setattr__(self, "n_list", tuple(n_list))

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        allowed = {"kinds", "p_grid", "mu_grid", "n_list", "input", "engine", "output", "format"}
        unknown = set(data) - allowed
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        missing = {"kinds", "p_grid", "mu_grid", "n_list"} - set(data)
        if missing:
            raise ValidationError(f"missing config keys: {sorted(missing)}")
        seed = _parse_input(data.get("input", "maximally_coherent"))
        try:
            return cls(
                kinds=tuple(data["kinds"]),
                p_grid=tuple(data["p_grid"]),
                mu_grid=tuple(data["mu_grid"]),
                n_list=tuple(data["n_list"]),
                seed=seed,
                engine=data.get("engine", "brute_force"),
                output=data.get("output"),
                format=data.get("format", "csv"),
            )
        except TypeError as exc:
            raise ValidationError(f"malformed sweep config: {exc}") from None

    @classmethod
    def from_json(cls, path: str | Path) -> "SweepConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)


def _parse_input(value: Any) -> Optional[int]:
    if value == "maximally_coherent":
        return None
    if isinstance(value, dict) and set(value) == {"random_seeded"}:
        seed = value["random_seeded"]
        if isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0:
            return seed
    raise ValidationError(
        f"input must be 'maximally_coherent' or {{'random_seeded': <int>}}, got {value!r}"
    )


@dataclass(frozen=True)
class SweepRow:
    kind: str
    n: Number
    p: float
    mu: float
    c_l1_norm: Optional[float] = None
    c_re_norm: Optional[float] = None
    uqc: Optional[float] = None
    mutual_info: Optional[float] = None
    engine: str = "brute_force"
    abs_deviation: Optional[float] = None

    def sort_key(self):
        return (self.kind, self.n, self.p, self.mu, self.engine)

    def values(self) -> tuple:
        return (self.kind, self.n, self.p, self.mu, self.c_l1_norm, self.c_re_norm,
                self.uqc, self.mutual_info, self.engine, self.abs_deviation)


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def select(self, **criteria) -> list[SweepRow]:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in criteria.items())]


def closed_form_values(kind: ChannelKind | str, n: int, p: float, mu: float) -> dict[str, Optional[float]]:
    """Normalized coherences, uqc and mutual information for the maximally coherent input.

    ``uqc`` follows from the normalized relative-entropy coherence because
    each single-qubit marginal is a plain dephasing with the reduced
    parameter; for this input it coincides with the mutual information.
    """
    reduced = closedform.reduce_channel(kind, p)
    if reduced is closedform.FROZEN:
        return {"c_l1_norm": 1.0, "c_re_norm": 1.0, "uqc": 0.0, "mutual_info": 0.0}
    c_re = closedform.re_phase_flip(n, reduced, mu)
    uqc = max(n * (c_re - 1.0 + binary_entropy(reduced)), 0.0)
    return {
        "c_l1_norm": closedform.l1_phase_flip(n, reduced, mu),
        "c_re_norm": c_re,
        "uqc": uqc,
        "mutual_info": uqc,
    }


def _brute_values(state: np.ndarray, kind: ChannelKind, n: int, p: float, mu: float) -> dict[str, float]:
    out = evolve(state, CorrelatedChannel(kind, p, mu, n))
    rep = report(out)
    return {
        "c_l1_norm": rep.c_l1_normalized,
        "c_re_norm": rep.c_re_normalized,
        "uqc": rep.uqc,
        "mutual_info": rep.mutual_information,
    }


def _deviation(brute: dict, closed: dict) -> Optional[float]:
    devs = [abs(brute[k] - closed[k]) for k in ("c_l1_norm", "c_re_norm") if closed[k] is not None]
    return max(devs) if devs else None


def _run_point(config: SweepConfig, states: dict, point) -> SweepRow:
    kind, n, p, mu = point
    base = dict(kind=kind.value, n=n, p=p, mu=mu)
    try:
        if config.engine == "closed_form":
            return SweepRow(**base, **closed_form_values(kind, n, p, mu), engine="closed_form")
        brute = _brute_values(states[n], kind, n, p, mu)
        if config.engine == "brute_force":
            return SweepRow(**base, **brute, engine="brute_force")
        closed = closed_form_values(kind, n, p, mu)
        return SweepRow(**base, **brute, engine="both", abs_deviation=_deviation(brute, closed))
    except CohchanError as exc:
        return SweepRow(**base, engine=f"error({type(exc).__name__})")


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Evaluate every grid point; rows come back sorted by (kind, N, p, mu).

    Grid points are independent, so ``workers > 1`` evaluates them on a
    thread pool; results are merged in grid order and the output does not
    depend on the worker count.
    """
    # ChannelKind is not orderable; sort on its value instead
    points = sorted(
        ((kind, n, p, mu)
         for kind in set(config.kinds)
         for n in set(config.n_list)
         for p in set(config.p_grid)
         for mu in set(config.mu_grid)),
        key=lambda t: (t[0].value, t[1], t[2], t[3]),
    )
    states = {}
    if config.engine != "closed_form":
        for n in sorted(set(config.n_list)):
            states[n] = (maximally_coherent_state(n) if config.seed is None
                         else random_density_matrix(n, config.seed))

    def work(point):
        return _run_point(config, states, point)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(work, points))
    else:
        rows = [work(pt) for pt in points]
    return SweepResult(rows)


def _figure_p_grid() -> list[float]:
    return [k / (FIGURE_P_POINTS - 1) for k in range(FIGURE_P_POINTS)]


def reproduce_figure(fig_id: int, panel: Optional[str] = None, workers: int = 1) -> SweepResult:
    """Data for the standard coherence figures.

    Figures 1 and 2 share the brute-force phase-flip curves for N = 2..7 at
    mu in {0, 0.4, 0.8, 1} over a 201-point p grid.  Figure 1 adds the
    closed-form N = 100 curve (panel a) and the large-N limit (panel d);
    figure 3 is the 101 x 101 (p, mu) map of the large-N relative-entropy
    coherence.
    """
    if fig_id not in (1, 2, 3):
        raise ValidationError(f"figure id must be 1, 2 or 3, got {fig_id!r}")
    if fig_id == 3:
        if panel is not None:
            raise ValidationError("figure 3 has no panels")
        grid = [k / (FIGURE3_POINTS - 1) for k in range(FIGURE3_POINTS)]
        rows = [
            SweepRow(kind=ChannelKind.PHASE_FLIP.value, n=math.inf, p=p, mu=mu,
                     c_l1_norm=closedform.asymptotic_l1_fully_correlated(p) if mu == 1.0 else None,
                     c_re_norm=closedform.asymptotic_re(p, mu), engine=ASYMPTOTIC)
            for p in grid for mu in grid
        ]
        return SweepResult(sorted(rows, key=SweepRow.sort_key))

    if panel is None:
        panels = sorted(FIGURE_MU)
    elif panel in FIGURE_MU:
        panels = [panel]
    else:
        raise ValidationError(f"panel must be one of a, b, c, d; got {panel!r}")
    p_grid = _figure_p_grid()
    config = SweepConfig(
        kinds=(ChannelKind.PHASE_FLIP,),
        p_grid=tuple(p_grid),
        mu_grid=tuple(FIGURE_MU[x] for x in panels),
        n_list=FIGURE_N,
        engine="brute_force",
    )
    rows = list(run_sweep(config, workers=workers).rows)
    if fig_id == 1:
        kind = ChannelKind.PHASE_FLIP
        if "a" in panels:
            # only the uncorrelated l1 curve has a closed form this far out
            rows += [
                SweepRow(kind=kind.value, n=FIGURE1_LARGE_N, p=p, mu=0.0,
                         **closed_form_values(kind, FIGURE1_LARGE_N, p, 0.0), engine="closed_form")
                for p in p_grid
            ]
        if "d" in panels:
            rows += [
                SweepRow(kind=kind.value, n=math.inf, p=p, mu=1.0,
                         c_l1_norm=closedform.asymptotic_l1_fully_correlated(p),
                         c_re_norm=closedform.asymptotic_re(p, 1.0), engine=ASYMPTOTIC)
                for p in p_grid
            ]
    return SweepResult(sorted(rows, key=SweepRow.sort_key))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if math.isinf(value):
        return "inf"
    return format(float(value), ".12g")


def _row_record(row: SweepRow) -> dict[str, Any]:
    return dict(zip(COLUMNS, row.values()))


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in result.rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    records = []
    for row in result.rows:
        rec = {}
        for key, value in _row_record(row).items():
            if isinstance(value, float):
                value = "inf" if math.isinf(value) else float(format(value, ".12g"))
            rec[key] = value
        records.append(rec)
    return json.dumps(records, indent=1) + "\n"


def write_output(result: SweepResult, format: str = "csv", path: str | Path | None = None) -> None:
    """Serialize rows as CSV or JSON; ``path`` of ``None`` or ``"-"`` means stdout."""
    if format not in FORMATS:
        raise ValidationError(f"unknown format {format!r}; expected one of {FORMATS}")
    text = to_csv(result) if format == "csv" else to_json(result)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {path}: {exc.strerror or exc}") from exc


def _parse_number(text: str, integer: bool = False):
    if text == "":
        return None
    if text == "inf":
        return math.inf
    return int(text) if integer else float(text)


def _row_from_record(rec: dict[str, Any]) -> SweepRow:
    def num(key, integer=False):
        value = rec.get(key)
        if isinstance(value, str):
            return _parse_number(value, integer)
        return value

    return SweepRow(
        kind=rec["kind"], n=num("N", integer=True), p=num("p"), mu=num("mu"),
        c_l1_norm=num("c_l1_norm"), c_re_norm=num("c_re_norm"), uqc=num("uqc"),
        mutual_info=num("mutual_info"), engine=rec["engine"], abs_deviation=num("abs_deviation"),
    )


def parse_output(text: str, format: str = "csv") -> SweepResult:
    """Inverse of :func:`to_csv` / :func:`to_json`."""
    if format == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValidationError(f"unexpected CSV header {reader.fieldnames}")
        return SweepResult([_row_from_record(rec) for rec in reader])
    if format == "json":
        return SweepResult([_row_from_record(rec) for rec in json.loads(text)])
    raise ValidationError(f"unknown format {format!r}; expected one of {FORMATS}")


def read_output(path: str | Path, format: str = "csv") -> SweepResult:
    return parse_output(Path(path).read_text(), format)
