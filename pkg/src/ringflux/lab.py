"""Experiment orchestration: exhaustive checks, diagram sweeps and file output.

Every per-state check is a pure function of ``(rule, state)``, so a run can be
split into index ranges, evaluated in any order or in worker processes, and
merged back in enumeration order with identical results.
"""
from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .analysis import (
    BoundTooLarge,
    PhaseType,
    classify,
    discriminant,
    predict_q_ex1,
    predict_q_ex2,
    predict_q_rule1,
)
from .dynamics import (
    EX1,
    EX2,
    RULE1,
    FluxRule,
    NonBinaryState,
    StepBudgetExceeded,
    TransitionTable,
    cycle_of,
    default_budget,
    step,
    step_kernel,
    trajectory,
    transition_table,
)
from .lattice import (
    MIN_LENGTH,
    RingState,
    count_pattern,
    densities,
    make_state,
    one_star_zero_count,
    popcount,
    run_spectrum,
    run_starts,
)
from .statesmith import (
    PRNG_NAME,
    InvariantTarget,
    construct,
    derive_seeds,
    feasible,
    feasible_targets,
    random_state,
)

log = logging.getLogger(__name__)

VERIFY_BOUND = 14
ADJUDICATE_BOUND = 12
TABLE_MAX_LENGTH = 16
PREDICTORS = ("rule1", "ex1", "ex2", "none")
CSV_COLUMNS = (
    "L", "origin",
    "rho_num", "rho_den",
    "rho_aux_num", "rho_aux_den",
    "q_measured_num", "q_measured_den",
    "q_predicted_num", "q_predicted_den",
    "phase", "transient", "period",
)


# -- measurement ------------------------------------------------------------

class Stepper:
    """Successor and flow for one rule and ring length.

    Uses a precomputed transition table for small rings and the bit-sliced
    kernel otherwise; both raise ``NonBinaryState`` on an invalid update.
    """

    def __init__(self, rule: FluxRule, length: int, use_table: Optional[bool] = None):
        self.rule = rule
        self.length = length
        if use_table is None:
            use_table = length <= TABLE_MAX_LENGTH
        self.table: Optional[TransitionTable] = transition_table(rule, length) if use_table else None

    def next(self, x: int) -> int:
        if self.table is not None:
            return self.table.next(x)
        return step(self.rule, RingState(self.length, x)).bits

    def flow(self, x: int) -> int:
        if self.table is not None:
            return self.table.flow[x]
        _, _, p_in, n_in = step_kernel(self.rule.table, x, self.length)
        return popcount(p_in) - popcount(n_in)


@dataclass(frozen=True)
class DiagramPoint:
    L: int
    origin: str
    rho: Fraction
    rho_aux: Fraction
    q_measured: Fraction
    q_predicted: Optional[Fraction]
    phase: str
    transient: int
    period: int

    @property
    def agrees(self) -> bool:
        return self.q_predicted is not None and self.q_predicted == self.q_measured


def default_predictor(rule: FluxRule) -> str:
    return rule.name if rule.name in ("rule1", "ex1", "ex2") else "none"


def _cycle_phase(L: int, cycle: Sequence[int]) -> str:
    labels = {classify(RingState(L, c)) for c in cycle}
    return str(labels.pop() if len(labels) == 1 else PhaseType.Other)


def measure(
    rule: FluxRule,
    state: RingState,
    predictor: str,
    origin: Optional[str] = None,
    stepper: Optional[Stepper] = None,
    budget: Optional[int] = None,
) -> tuple[DiagramPoint, int, list[int]]:
    """Measure one initial state; also returns the transient and packed cycle."""
    L = state.length
    stepper = stepper or Stepper(rule, L)
    mu, cycle = cycle_of(stepper.next, state.bits, budget or default_budget(L))
    q = Fraction(sum(stepper.flow(c) for c in cycle), len(cycle) * L)
    d = densities(state)
    if predictor == "ex1":
        aux, pred = d.rho_odd, predict_q_ex1(d.rho, d.rho_odd)
    elif predictor == "ex2":
        aux = Fraction(one_star_zero_count(RingState(L, cycle[0])), L)
        pred = predict_q_ex2(d.rho, aux)
    elif predictor == "rule1":
        aux, pred = d.rho011, predict_q_rule1(d.rho, d.rho011)
    elif predictor == "none":
        aux, pred = d.rho011, None
    else:
        raise ValueError(f"unknown predictor {predictor!r}; choose from {PREDICTORS}")
    phase = _cycle_phase(L, cycle) if rule == RULE1 else "n/a"
    point = DiagramPoint(L, origin or state.word, d.rho, aux, q, pred, phase, mu, len(cycle))
    return point, mu, cycle


# -- verification -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    check: str
    state: str
    detail: str


_CATEGORIES = {
    "binariness": "binariness_violations",
    "conservation": "conservation_violations",
    "quasi-conservation": "conservation_violations",
    "phase": "theorem1_violations",
    "runs": "lemma_violations",
}


@dataclass
class VerifyReport:
    rule: str
    kind: str  # "verify" or "adjudicate"
    lengths: tuple[int, int]
    states_checked: int = 0
    agreements: int = 0
    theorem2_mismatches: list[DiagramPoint] = field(default_factory=list)
    theorem1_violations: list[Violation] = field(default_factory=list)
    conservation_violations: list[Violation] = field(default_factory=list)
    lemma_violations: list[Violation] = field(default_factory=list)
    binariness_violations: list[Violation] = field(default_factory=list)
    variant_agreements: Optional[int] = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def violations(self) -> list[Violation]:
        return (self.theorem1_violations + self.conservation_violations
                + self.lemma_violations + self.binariness_violations)

    @property
    def passed(self) -> bool:
        return not self.theorem2_mismatches and not self.violations

    @property
    def agreement_fraction(self) -> Fraction:
        return Fraction(self.agreements, self.states_checked or 1)

    def add(self, v: Violation) -> None:
        getattr(self, _CATEGORIES[v.check.split(":")[0]]).append(v)

    def merge(self, other: "VerifyReport") -> None:
        self.states_checked += other.states_checked
        self.agreements += other.agreements
        if other.variant_agreements is not None:
            self.variant_agreements = (self.variant_agreements or 0) + other.variant_agreements
        for name in ("theorem2_mismatches", "theorem1_violations", "conservation_violations",
                     "lemma_violations", "binariness_violations"):
            getattr(self, name).extend(getattr(other, name))

    def text(self, timing: bool = False) -> str:
        a, b = self.lengths
        frac = self.agreement_fraction
        lines = [
            f"{self.kind} {self.rule}  L={a}..{b}",
            f"states checked: {self.states_checked}",
            f"prediction agreement: {self.agreements}/{self.states_checked} ({float(frac):.4%})",
        ]
        if self.variant_agreements is not None:
            lines.append(
                f"diagnostic, min(2rho, 1-2rho_1*0, 2(1-rho)) agreement: "
                f"{self.variant_agreements}/{self.states_checked}"
            )
        lines += [
            f"prediction mismatches: {len(self.theorem2_mismatches)}",
            f"phase-classification violations: {len(self.theorem1_violations)}",
            f"conservation violations: {len(self.conservation_violations)}",
            f"run-dynamics (lemma) violations: {len(self.lemma_violations)}",
            f"non-binary updates: {len(self.binariness_violations)}",
        ]
        for v in self.violations[:20]:
            lines.append(f"  {v.check} {v.state}: {v.detail}")
        for p in self.theorem2_mismatches[:20]:
            lines.append(f"  prediction {p.origin}: measured {p.q_measured}, predicted {p.q_predicted}")
        lines.append(f"verdict: {'PASS' if self.passed else 'FAIL'}")
        if timing:
            lines.append(f"elapsed: {self.elapsed:.2f}s")
        return "\n".join(lines) + "\n"


def _long_runs(spectrum) -> dict[int, int]:
    return {k: c for k, c in spectrum.run_counts.items() if k >= 4}


def check_rule1_state(rule: FluxRule, state: RingState, stepper: Optional[Stepper] = None):
    """All per-state checks of the RULE1 verification.

    Returns ``(point_or_None, violations)``.  Edge checks look at the single
    step from ``state``; cycle checks run only when ``state`` lies on its own
    cycle, so every trajectory edge and every cycle state is examined exactly
    once over an exhaustive run.
    """
    L, x, w = state.length, state.bits, state.word
    stepper = stepper or Stepper(rule, L, use_table=False)
    out: list[Violation] = []
    try:
        nxt = RingState(L, stepper.next(x))
    except NonBinaryState as e:
        return None, [Violation("binariness", w, str(e))]

    if nxt.ones != state.ones:
        out.append(Violation("conservation:#1", w, f"{state.ones} -> {nxt.ones}"))
    c0, c1 = count_pattern(state, "011"), count_pattern(nxt, "011")
    if c0 != c1:
        out.append(Violation("conservation:#011", w, f"{c0} -> {c1}"))

    sp, tp = run_spectrum(state), run_spectrum(nxt)
    K = sp.longest
    if K >= 4:
        if tp.longest > K:
            out.append(Violation("runs:longest-grew", w, f"{K} -> {tp.longest}"))
        elif tp.longest == K and tp[K] > sp[K]:
            out.append(Violation("runs:count-grew", w, f"#0{K}0 {sp[K]} -> {tp[K]}"))

    try:
        point, mu, _ = measure(rule, state, "rule1", stepper=stepper)
    except (NonBinaryState, StepBudgetExceeded) as e:
        out.append(Violation("binariness", w, f"along trajectory: {e}"))
        return None, out

    if mu == 0:
        phase, disc = classify(state), discriminant(state)
        if phase is PhaseType.Other:
            out.append(Violation("phase:other", w, "cycle state is neither type A nor B"))
        elif (phase is PhaseType.TypeA) != (disc <= 0):
            out.append(Violation("phase:sign", w, f"{phase} with discriminant {disc}"))
        if _long_runs(sp) != _long_runs(tp):
            out.append(Violation("runs:cycle-not-constant", w, f"{_long_runs(sp)} -> {_long_runs(tp)}"))
        if phase is PhaseType.TypeA and sp.run_counts != tp.run_counts:
            out.append(Violation("runs:spectrum-not-constant", w, f"{dict(sp.run_counts)} -> {dict(tp.run_counts)}"))
        if K >= 4:
            before, after = run_starts(state), run_starts(nxt)
            for k, starts in before.items():
                if k >= 4 and sorted((p + 2) % L for p in starts) != after.get(k, []):
                    out.append(Violation("runs:shift", w, f"length-{k} starts {starts} -> {after.get(k, [])}"))
            if sp.zero_pair_count:
                out.append(Violation("runs:zeros-not-isolated", w, f"#00={sp.zero_pair_count}"))
    return point, out


def variant_ex2(point: DiagramPoint) -> Fraction:
    return min(2 * point.rho, 1 - 2 * point.rho_aux, 2 * (1 - point.rho))


def check_adjudicate_state(rule: FluxRule, predictor: str, state: RingState, stepper: Optional[Stepper] = None):
    L, x, w = state.length, state.bits, state.word
    stepper = stepper or Stepper(rule, L, use_table=False)
    out: list[Violation] = []
    try:
        nxt = RingState(L, stepper.next(x))
    except NonBinaryState as e:
        return None, [Violation("binariness", w, str(e))]
    if predictor == "ex1":
        a, b = run_spectrum(state).odd_runs, run_spectrum(nxt).odd_runs
        if a != b:
            out.append(Violation("conservation:odd-runs", w, f"{a} -> {b}"))
    try:
        point, mu, cycle = measure(rule, state, predictor, stepper=stepper)
    except (NonBinaryState, StepBudgetExceeded) as e:
        out.append(Violation("binariness", w, f"along trajectory: {e}"))
        return None, out
    if predictor == "ex2" and mu == 0:
        a, b = one_star_zero_count(state), one_star_zero_count(nxt)
        if a != b:
            out.append(Violation("quasi-conservation:1*0", w, f"on cycle {a} -> {b}"))
    return point, out


def _run_chunk(kind: str, rule: FluxRule, predictor: str, L: int, start: int, stop: int) -> VerifyReport:
    report = VerifyReport(rule.label, kind, (L, L))
    if kind == "adjudicate" and predictor == "ex2":
        report.variant_agreements = 0
    stepper = Stepper(rule, L)
    for x in range(start, stop):
        state = RingState(L, x)
        if kind == "verify":
            point, violations = check_rule1_state(rule, state, stepper)
        else:
            point, violations = check_adjudicate_state(rule, predictor, state, stepper)
        report.states_checked += 1
        for v in violations:
            report.add(v)
        if point is None:
            continue
        if point.agrees:
            report.agreements += 1
        else:
            report.theorem2_mismatches.append(point)
        if report.variant_agreements is not None and variant_ex2(point) == point.q_measured:
            report.variant_agreements += 1
    return report


def _chunks(L_min: int, L_max: int, size: int = 4096):
    for L in range(L_min, L_max + 1):
        n = 1 << L
        for start in range(0, n, size):
            yield L, start, min(n, start + size)


def _run(kind: str, rule: FluxRule, predictor: str, L_min: int, L_max: int, bound: int, workers: int) -> VerifyReport:
    if not MIN_LENGTH <= L_min <= L_max:
        raise ValueError(f"need {MIN_LENGTH} <= L_min <= L_max, got {L_min}, {L_max}")
    if L_max > bound:
        raise BoundTooLarge(f"L_max={L_max} exceeds exhaustive bound {bound}")
    t0 = time.perf_counter()
    total = VerifyReport(rule.label, kind, (L_min, L_max))
    if kind == "adjudicate" and predictor == "ex2":
        total.variant_agreements = 0
    jobs = list(_chunks(L_min, L_max))
    args = [(kind, rule, predictor, L, a, b) for L, a, b in jobs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, *zip(*args)))
    else:
        parts = [_run_chunk(*a) for a in args]
    for part in parts:
        total.merge(part)
    total.elapsed = time.perf_counter() - t0
    return total


def verify_rule1(L_min: int, L_max: int, rule: FluxRule = RULE1, bound: int = VERIFY_BOUND,
                 workers: int = 1) -> VerifyReport:
    """Exhaustively check the RULE1 diagram, phase classification, conservation
    and run dynamics on every ring of every length in ``L_min..L_max``.

    ``rule`` exists for negative controls; the checks are RULE1's.
    """
    return _run("verify", rule, "rule1", L_min, L_max, bound, workers)


def adjudicate(rule: FluxRule, L_min: int, L_max: int, bound: int = ADJUDICATE_BOUND,
               workers: int = 1) -> VerifyReport:
    """Compare measured momentum with the conjectured min-formula for EX1 or EX2."""
    predictor = {EX1: "ex1", EX2: "ex2"}.get(rule)
    if predictor is None:
        raise ValueError(f"adjudication is defined for ex1 and ex2, not {rule.label}")
    return _run("adjudicate", rule, predictor, L_min, L_max, bound, workers)


def replay(rule: FluxRule, violation: Violation) -> list[Violation]:
    """Re-run the per-state checks on a recorded violation's state (no tables)."""
    state = make_state(violation.state)
    if rule in (EX1, EX2):
        _, out = check_adjudicate_state(rule, "ex1" if rule == EX1 else "ex2", state)
    else:
        _, out = check_rule1_state(rule, state)
    return out


# -- sweeps -----------------------------------------------------------------

DEFAULT_P_GRID = tuple(Fraction(k, 10) for k in range(11))


def state_from_origin(origin: str, L: int) -> RingState:
    """Regenerate an initial state from a DiagramPoint's provenance string."""
    if origin.startswith("random:"):
        fields = dict(kv.split("=") for kv in origin.split(":")[1:])
        return random_state(L, Fraction(fields["p"]), int(fields["seed"]))
    if origin.startswith("constructed:"):
        fields = dict(kv.split("=") for kv in origin.split(":")[1:])
        target = InvariantTarget(L, int(fields["ones"]), int(fields["runs_ge2"]))
        return construct(target, int(fields["seed"]))
    state = make_state(origin)
    if state.length != L:
        raise ValueError(f"origin {origin!r} has {state.length} sites, expected {L}")
    return state


def sweep(
    rule: FluxRule,
    L: int,
    mode: str = "exhaustive",
    predictor: Optional[str] = None,
    *,
    samples: int = 0,
    seed: int = 0,
    p_grid: Sequence[Fraction] = DEFAULT_P_GRID,
    seeds_per_target: int = 3,
    targets: Optional[Iterable[InvariantTarget]] = None,
    bound: int = 16,
) -> list[DiagramPoint]:
    """Diagram points for one rule and ring length.

    ``exhaustive`` enumerates every ring; ``random`` draws ``samples`` Bernoulli
    rings, cycling through ``p_grid``; ``constructed`` realizes every feasible
    ``(ones, runs_ge2)`` target (or ``targets``) with ``seeds_per_target`` seeds.
    Child seeds come from ``seed`` in sample order, so output is reproducible.
    """
    if L < MIN_LENGTH:
        raise ValueError(f"ring needs at least {MIN_LENGTH} sites, got {L}")
    predictor = predictor or default_predictor(rule)
    if predictor not in PREDICTORS:
        raise ValueError(f"unknown predictor {predictor!r}; choose from {PREDICTORS}")
    if predictor != "none" and rule.name and predictor != rule.name:
        log.warning("predictor %s applied to rule %s", predictor, rule.label)

    if mode == "exhaustive":
        if L > bound:
            raise BoundTooLarge(f"L={L} exceeds exhaustive bound {bound}")
        origins = [(RingState(L, x), None) for x in range(1 << L)]
    elif mode == "random":
        child = derive_seeds(seed, samples)
        origins = []
        for i, s in enumerate(child):
            p = Fraction(p_grid[i % len(p_grid)])
            origins.append((random_state(L, p, s), f"random:p={p}:seed={s}"))
    elif mode == "constructed":
        targets = list(targets) if targets is not None else feasible_targets(L)
        child = iter(derive_seeds(seed, len(targets) * seeds_per_target))
        origins = []
        for t in targets:
            seeds = [next(child) for _ in range(seeds_per_target)]
            if not feasible(t):
                log.info("skipping infeasible target %s", t)
                continue
            for s in seeds:
                origins.append((construct(t, s), f"constructed:ones={t.ones}:runs_ge2={t.runs_ge2}:seed={s}"))
    else:
        raise ValueError(f"unknown sweep mode {mode!r}")

    stepper = Stepper(rule, L)
    return [measure(rule, state, predictor, origin, stepper)[0] for state, origin in origins]


# -- files ------------------------------------------------------------------

def _atomic_write(destination, data: bytes) -> None:
    destination = Path(destination)
    fd, tmp = tempfile.mkstemp(dir=destination.parent or ".", prefix=f".{destination.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, destination)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _frac_cells(v: Optional[Fraction]) -> list:
    return ["", ""] if v is None else [v.numerator, v.denominator]


def csv_text(points: Sequence[DiagramPoint], metadata: Optional[dict] = None) -> str:
    meta = {"tool": f"ringflux {__version__}", "prng": PRNG_NAME}
    meta.update(metadata or {})
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow(
            [p.L, p.origin, *_frac_cells(p.rho), *_frac_cells(p.rho_aux),
             *_frac_cells(p.q_measured), *_frac_cells(p.q_predicted),
             p.phase, p.transient, p.period]
        )
    return buf.getvalue()


def emit_csv(points: Sequence[DiagramPoint], destination, metadata: Optional[dict] = None) -> None:
    _atomic_write(destination, csv_text(points, metadata).encode())


def read_csv(path) -> tuple[dict, list[DiagramPoint]]:
    meta: dict[str, str] = {}
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                meta[key] = value
            else:
                rows.append(line)
    reader = csv.DictReader(rows)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected CSV columns {reader.fieldnames}")

    def frac(r, name):
        num, den = r[f"{name}_num"], r[f"{name}_den"]
        return None if num == "" else Fraction(int(num), int(den))

    points = [
        DiagramPoint(int(r["L"]), r["origin"], frac(r, "rho"), frac(r, "rho_aux"),
                     frac(r, "q_measured"), frac(r, "q_predicted"), r["phase"],
                     int(r["transient"]), int(r["period"]))
        for r in reader
    ]
    return meta, points


def emit_findings(report: VerifyReport, destination, metadata: Optional[dict] = None) -> None:
    """Prediction mismatches in the sweep CSV format, one replayable row each."""
    meta = {"kind": report.kind, "rule": report.rule,
            "lengths": f"{report.lengths[0]}..{report.lengths[1]}",
            "states_checked": report.states_checked,
            "agreement": f"{report.agreements}/{report.states_checked}"}
    meta.update(metadata or {})
    emit_csv(report.theorem2_mismatches, destination, meta)


_MPL_TEMPLATE = '''\
"""3D fundamental diagram: measured points over the sheets Q=2rho-1 and Q=2rho_aux."""
import csv
import sys
from fractions import Fraction

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

CSV_PATH = {csv_path!r}
OUT_PATH = sys.argv[1] if len(sys.argv) > 1 else {png_path!r}

rows = [line for line in open(CSV_PATH, newline="") if not line.startswith("#")]
points = list(csv.DictReader(rows))
colors = {{"TypeA": "tab:blue", "TypeB": "tab:red"}}

fig = plt.figure(figsize=(8, 6))
ax = fig.add_subplot(projection="3d")
for phase in sorted({{p["phase"] for p in points}}):
    sel = [p for p in points if p["phase"] == phase]
    xs = [float(Fraction(int(p["rho_num"]), int(p["rho_den"]))) for p in sel]
    ys = [float(Fraction(int(p["rho_aux_num"]), int(p["rho_aux_den"]))) for p in sel]
    zs = [float(Fraction(int(p["q_measured_num"]), int(p["q_measured_den"]))) for p in sel]
    ax.scatter(xs, ys, zs, s=8, color=colors.get(phase, "tab:gray"), label=phase)

rho, aux = np.meshgrid(np.linspace(0, 1, 41), np.linspace(0, 0.5, 41))
sheet_a = 2 * rho - 1
sheet_b = 2 * aux
# realizable rings have rho_011 <= rho/2 and rho_011 <= 1 - rho
ok = (aux <= rho / 2 + 1e-9) & (aux <= 1 - rho + 1e-9)
ax.plot_surface(rho, aux, np.where(ok & (sheet_a >= sheet_b), sheet_a, np.nan), alpha=0.25, color="tab:blue")
ax.plot_surface(rho, aux, np.where(ok & (sheet_b > sheet_a), sheet_b, np.nan), alpha=0.25, color="tab:red")
ax.view_init(elev=20, azim=-120)
ax.set_xlabel("rho")
ax.set_ylabel("rho_011")
ax.set_zlabel("Q")
ax.legend()
fig.savefig(OUT_PATH, dpi=120)
print(OUT_PATH)
'''

_GNUPLOT_TEMPLATE = '''\
# 3D fundamental diagram: measured points over the sheets Q=2rho-1 and Q=2rho_aux.
set datafile separator ","
set datafile commentschars "#"
set key autotitle columnhead
set xlabel "rho"
set ylabel "rho_011"
set zlabel "Q"
set xrange [0:1]
set yrange [0:0.5]
set isosamples 40
set terminal pngcairo size 900,700
set output {png_path!r}
data = {csv_path!r}
phaseA(x) = (strcol(11) eq "TypeA") ? x : NaN
phaseB(x) = (strcol(11) eq "TypeB") ? x : NaN
splot data every ::1 using ($3/$4):($5/$6):(phaseA($7/$8)) with points pt 7 ps 0.4 lc rgb "blue" title "TypeA", \\
      data every ::1 using ($3/$4):($5/$6):(phaseB($7/$8)) with points pt 7 ps 0.4 lc rgb "red" title "TypeB", \\
      (y <= x/2 && y <= 1-x && 2*x-1 >= 2*y ? 2*x-1 : 1/0) with lines lc rgb "blue" title "Q = 2rho - 1", \\
      (y <= x/2 && y <= 1-x && 2*y > 2*x-1 ? 2*y : 1/0) with lines lc rgb "red" title "Q = 2rho_011"
'''


def emit_plot_script(points_csv, destination, tool: Optional[str] = None) -> None:
    """Write a plotting script for a diagram CSV.

    ``tool`` is ``matplotlib`` (a Python script) or ``gnuplot``; by default it
    follows the destination suffix (``.gp``/``.gnuplot``/``.plt`` -> gnuplot).
    """
    points_csv = Path(points_csv)
    read_csv(points_csv)  # fails before anything is written
    destination = Path(destination)
    if tool is None:
        tool = "gnuplot" if destination.suffix in (".gp", ".gnuplot", ".plt") else "matplotlib"
    png = str(destination.with_suffix(".png"))
    template = {"matplotlib": _MPL_TEMPLATE, "gnuplot": _GNUPLOT_TEMPLATE}[tool]
    _atomic_write(destination, template.format(csv_path=str(points_csv.resolve()), png_path=png).encode())


def render_spacetime(rule: FluxRule, state: RingState, steps: int, format: str = "ascii"):
    """Rows are times 0..steps (top to bottom), columns are sites.

    ``ascii`` returns text with ``#`` for a particle; ``pbm`` returns the bytes
    of a plain (P1) portable bitmap with particles black.
    """
    rows = [s.word for s in trajectory(rule, state, steps)]
    if format == "ascii":
        return "".join(r.replace("1", "#").replace("0", ".") + "\n" for r in rows)
    if format == "pbm":
        lines = ["P1", f"# ringflux {rule.serialize()} init={state.word}", f"{state.length} {len(rows)}"]
        for r in rows:
            lines += [r[i:i + 70] for i in range(0, len(r), 70)]
        return ("\n".join(lines) + "\n").encode("ascii")
    raise ValueError(f"unknown format {format!r}; use ascii or pbm")
