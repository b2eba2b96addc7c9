"""Binary-arithmetic generalisation trials at the state level.

A parent task fixes an operation (add or mul) over all 2-bit operand pairs,
encoded as 8-bit strings: a1 a0 b1 b0 o3 o2 o1 o0, with the output the low
bits of the arithmetic result (position 0 is the leftmost character).
Deleting one string position from every correct string yields the parent
situations; a child samples m of the 16 correct strings.  Hypotheses are
cube covers constrained to match the child's decisions exactly on the
states reachable from its situations; prediction keeps the satisfying
states whose deleted-bit projection is a parent situation.

A 4-bit analogue (1-bit operands, 2-bit output) exists for brute-force
cross-checks.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import StateSet
from .minimize import (
    DEFAULT_NODE_BUDGET,
    Cover,
    exact_cover_of,
    max_weakness_cover,
    min_literal_cover,
)

OPS = ("add", "mul")
MODE_STATE = "state"
MODE_PENALIZED = "penalized"

Z95 = 1.96


def _op_fn(op: str):
    if op == "add":
        return lambda a, b: a + b
    if op == "mul":
        return lambda a, b: a * b
    raise ValueError(f"unknown operation {op!r}; expected one of {OPS}")


def encode(op: str, a: int, b: int, width: int = 8) -> int:
    """State integer for operand pair (a, b): operands then the low output
    bits of the arithmetic result."""
    operand_bits = width // 4
    output_bits = width // 2
    if not 0 <= a < 1 << operand_bits or not 0 <= b < 1 << operand_bits:
        raise ValueError("operand out of range")
    out = _op_fn(op)(a, b) & ((1 << output_bits) - 1)
    return (a << (operand_bits + output_bits)) | (b << output_bits) | out


def delete_position(state: int, pos: int, width: int) -> int:
    """Drop string position ``pos`` (0 = leftmost), giving a width-1 bit
    pattern."""
    j = width - 1 - pos
    high = state >> (j + 1)
    low = state & ((1 << j) - 1)
    return (high << j) | low


def completions(pattern: int, pos: int, width: int) -> tuple[int, int]:
    """The two states whose ``pos``-deleted projection is ``pattern``."""
    j = width - 1 - pos
    high = pattern >> j
    low = pattern & ((1 << j) - 1)
    base = (high << (j + 1)) | low
    return (base, base | (1 << j))


@dataclass(frozen=True)
class BinOpTask:
    """Parent task: all correct strings of one operation, one deleted bit."""

    op: str
    width: int
    deleted_bit: int
    decisions: tuple[int, ...]
    situations: tuple[int, ...]
    cand: dict[int, tuple[int, int]]
    decisions_mask: int
    reach_mask: int  # union of completion sets over all parent situations

    @property
    def n_states(self) -> int:
        return 1 << self.width

    @property
    def decision_set(self) -> StateSet:
        return StateSet(self.decisions_mask, self.n_states)


def gen_parent_task(op: str, deleted_bit: int, width: int = 8) -> BinOpTask:
    operand_bits = width // 4
    if width % 4 or width < 4:
        raise ValueError("width must be a positive multiple of 4")
    if not 0 <= deleted_bit < width:
        raise ValueError(f"deleted bit must be in 0..{width - 1}")
    decisions = tuple(
        sorted(
            encode(op, a, b, width)
            for a in range(1 << operand_bits)
            for b in range(1 << operand_bits)
        )
    )
    situations = tuple(sorted({delete_position(d, deleted_bit, width) for d in decisions}))
    cand = {s: completions(s, deleted_bit, width) for s in situations}
    d_mask = 0
    for d in decisions:
        d_mask |= 1 << d
    reach = 0
    for pair in cand.values():
        reach |= (1 << pair[0]) | (1 << pair[1])
    return BinOpTask(op, width, deleted_bit, decisions, situations, cand, d_mask, reach)


@dataclass(frozen=True)
class ChildSample:
    """m sampled correct strings and their projections."""

    m: int
    decisions: tuple[int, ...]
    situations: tuple[int, ...]
    decisions_mask: int
    reach_mask: int  # union of completion sets over the child's situations

    @property
    def on(self) -> int:
        return self.decisions_mask

    def off(self) -> int:
        return self.reach_mask & ~self.decisions_mask


def sample_child(
    task: BinOpTask, m: int, seed: int | str | random.Random
) -> ChildSample:
    """Uniform m-subset of the parent decisions; situations are its
    projections.  Deterministic for a fixed seed."""
    if not 1 <= m <= len(task.decisions):
        raise ValueError(f"m must be in 1..{len(task.decisions)}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    decisions = tuple(sorted(rng.sample(task.decisions, m)))
    situations = tuple(
        sorted({delete_position(d, task.deleted_bit, task.width) for d in decisions})
    )
    d_mask = 0
    for d in decisions:
        d_mask |= 1 << d
    reach = 0
    for s in situations:
        pair = task.cand[s]
        reach |= (1 << pair[0]) | (1 << pair[1])
    return ChildSample(m, decisions, situations, d_mask, reach)


@dataclass(frozen=True)
class StateHypothesis:
    """Cube cover acting as a state-level hypothesis."""

    mode: str
    cover: Cover
    width: int

    @property
    def sat(self) -> int:
        return self.cover.sat

    @property
    def sat_set(self) -> StateSet:
        return StateSet(self.cover.sat, 1 << self.width)

    @property
    def literal_count(self) -> int:
        return self.cover.literal_count

    @property
    def term_count(self) -> int:
        return self.cover.term_count

    @property
    def flagged(self) -> bool:
        return not self.cover.proven_optimal

    def satisfies_model_condition(self, child: ChildSample) -> bool:
        return self.sat & child.reach_mask == child.decisions_mask


def weakest_model_state(
    task: BinOpTask,
    child: ChildSample,
    mode: str = MODE_PENALIZED,
    tau: Fraction = Fraction(1),
    budget: int = DEFAULT_NODE_BUDGET,
) -> StateHypothesis:
    """Weakness-side hypothesis for the child.

    ``state`` mode returns the unique satisfaction-maximal model (the child
    decisions plus every state its situations cannot reach) as an exact
    prime cover.  ``penalized`` mode searches covers of the child decisions
    for the maximum of log2(|sat|) - tau*terms.
    """
    full = (1 << (1 << task.width)) - 1
    on = child.on
    off = child.off()
    if mode == MODE_STATE:
        target = on | (full & ~child.reach_mask)
        return StateHypothesis(mode, exact_cover_of(task.width, target), task.width)
    if mode == MODE_PENALIZED:
        cover = max_weakness_cover(task.width, on, off, tau=tau, budget=budget)
        return StateHypothesis(mode, cover, task.width)
    raise ValueError(f"unknown weakness mode {mode!r}")


def mdl_model_state(
    task: BinOpTask, child: ChildSample, budget: int = DEFAULT_NODE_BUDGET
) -> StateHypothesis:
    """Minimum total-literal cover of the child decisions, unreachable
    states free as don't-cares."""
    cover = min_literal_cover(task.width, child.on, child.off(), budget=budget)
    return StateHypothesis("mdl", cover, task.width)


def d_recon(task: BinOpTask, hyp: StateHypothesis) -> int:
    """States the hypothesis satisfies whose deleted-bit projection is a
    parent situation."""
    return hyp.sat & task.reach_mask


@dataclass(frozen=True)
class HypothesisOutcome:
    hypothesis: StateHypothesis
    d_recon_mask: int
    generalised: bool
    extent: Fraction
    flagged: bool


@dataclass(frozen=True)
class TrialResult:
    op: str
    width: int
    m: int
    deleted_bit: int
    seed: str
    weak: HypothesisOutcome
    mdl: HypothesisOutcome


def _outcome(task: BinOpTask, hyp: StateHypothesis) -> HypothesisOutcome:
    recon = d_recon(task, hyp)
    inter = (recon & task.decisions_mask).bit_count()
    return HypothesisOutcome(
        hypothesis=hyp,
        d_recon_mask=recon,
        generalised=recon == task.decisions_mask,
        extent=Fraction(inter, len(task.decisions)),
        flagged=hyp.flagged,
    )


def run_trial(
    op: str,
    deleted_bit: int,
    m: int,
    seed: int | str | random.Random,
    mode: str = MODE_PENALIZED,
    tau: Fraction = Fraction(1),
    budget: int = DEFAULT_NODE_BUDGET,
    width: int = 8,
    seed_label: str | None = None,
) -> TrialResult:
    """Training phase (parent, child, both hypotheses) then testing phase
    (reconstruction against the parent decisions).  Search fallbacks flag
    the trial; no trial is dropped."""
    if seed_label is None:
        if isinstance(seed, random.Random):
            seed_label = "external-rng"
        else:
            seed_label = str(seed)
    task = gen_parent_task(op, deleted_bit, width)
    child = sample_child(task, m, seed)
    hyp_w = weakest_model_state(task, child, mode=mode, tau=tau, budget=budget)
    hyp_mdl = mdl_model_state(task, child, budget=budget)
    return TrialResult(
        op=op,
        width=width,
        m=m,
        deleted_bit=deleted_bit,
        seed=seed_label,
        weak=_outcome(task, hyp_w),
        mdl=_outcome(task, hyp_mdl),
    )


# ---------------------------------------------------------------------------
# experiments


def wald_ci(rate: float, trials: int) -> float:
    """Half-width of the 95% Wald interval for a binomial rate."""
    if trials <= 0:
        return 0.0
    return Z95 * math.sqrt(rate * (1.0 - rate) / trials)


@dataclass(frozen=True)
class CellStats:
    trials: int
    rate: Fraction
    ci: float
    avg_extent: Fraction
    stderr: float
    flagged: int


@dataclass(frozen=True)
class CellRow:
    op: str
    dk: int
    trials: int
    weak: CellStats
    mdl: CellStats
    flagged: int  # trials where either search exhausted its budget


@dataclass
class ExperimentReport:
    master_seed: str
    mode: str
    tau: Fraction
    width: int
    rows: list[CellRow]
    trial_results: list[TrialResult]

    def to_csv(self) -> str:
        lines = [
            "op,dk,trials,rate_w,ci_w,ext_w,se_w,rate_mdl,ci_mdl,ext_mdl,se_mdl,flagged_trials"
        ]
        for r in self.rows:
            w, l = r.weak, r.mdl
            lines.append(
                f"{r.op},{r.dk},{r.trials},"
                f"{float(w.rate):.3f},{w.ci:.3f},{float(w.avg_extent):.3f},{w.stderr:.3f},"
                f"{float(l.rate):.3f},{l.ci:.3f},{float(l.avg_extent):.3f},{l.stderr:.3f},"
                f"{r.flagged}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def frac(x: Fraction) -> list[int]:
            return [x.numerator, x.denominator]

        def cell(c: CellStats) -> dict:
            return {
                "trials": c.trials,
                "rate": frac(c.rate),
                "ci95": c.ci,
                "avg_extent": frac(c.avg_extent),
                "stderr": c.stderr,
                "flagged": c.flagged,
            }

        return {
            "master_seed": self.master_seed,
            "mode": self.mode,
            "tau": [self.tau.numerator, self.tau.denominator],
            "width": self.width,
            "rows": [
                {
                    "op": r.op,
                    "dk": r.dk,
                    "trials": r.trials,
                    "weakness": cell(r.weak),
                    "mdl": cell(r.mdl),
                    "flagged_trials": r.flagged,
                }
                for r in self.rows
            ],
        }

    def to_table(self) -> str:
        lines = [
            f"mode={self.mode} tau={self.tau} seed={self.master_seed}",
            f"{'op':<4} {'|Dk|':>4} {'trials':>6} |"
            f" {'Rate':>5} {'+-95%':>6} {'AvgExt':>6} {'StdErr':>6} |"
            f" {'Rate':>5} {'+-95%':>6} {'AvgExt':>6} {'StdErr':>6} | {'flag':>4}",
            f"{'':<4} {'':<4} {'':<6} | {'weakness':^27} | {'mdl':^27} |",
        ]
        for r in self.rows:
            w, l = r.weak, r.mdl
            lines.append(
                f"{r.op:<4} {r.dk:>4} {r.trials:>6} |"
                f" {float(w.rate):>5.2f} {w.ci:>6.3f} {float(w.avg_extent):>6.2f} {w.stderr:>6.3f} |"
                f" {float(l.rate):>5.2f} {l.ci:>6.3f} {float(l.avg_extent):>6.2f} {l.stderr:>6.3f} |"
                f" {r.flagged:>4}"
            )
        return "\n".join(lines) + "\n"


def _cell_stats(outcomes: Sequence[HypothesisOutcome]) -> CellStats:
    n = len(outcomes)
    gen = sum(1 for o in outcomes if o.generalised)
    rate = Fraction(gen, n)
    ext_sum = sum((o.extent for o in outcomes), Fraction(0))
    avg = ext_sum / n
    if n > 1:
        sq = sum((o.extent * o.extent for o in outcomes), Fraction(0))
        var = (sq - ext_sum * ext_sum / n) / (n - 1)
        stderr = math.sqrt(float(var) / n) if var > 0 else 0.0
    else:
        stderr = 0.0
    return CellStats(
        trials=n,
        rate=rate,
        ci=wald_ci(float(rate), n),
        avg_extent=avg,
        stderr=stderr,
        flagged=sum(1 for o in outcomes if o.flagged),
    )


def trial_seed(master_seed: int | str, op: str, m: int, index: int) -> str:
    return f"{master_seed}|{op}|{m}|{index}"


def run_experiment(
    ops: Iterable[str],
    m_list: Iterable[int],
    trials: int,
    master_seed: int | str,
    mode: str = MODE_PENALIZED,
    tau: Fraction = Fraction(1),
    budget: int = DEFAULT_NODE_BUDGET,
    width: int = 8,
    keep_trials: bool = False,
) -> ExperimentReport:
    """Run ``trials`` seeded trials per (op, |D_k|) cell.

    The deleted bit is resampled uniformly per trial from the trial seed.
    Aggregation is exact-rational, so the report depends only on the seeds.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    kept: list[TrialResult] = []
    for op in ops:
        for m in m_list:
            cell: list[TrialResult] = []
            for i in range(trials):
                seed = trial_seed(master_seed, op, m, i)
                rng = random.Random(seed)
                deleted_bit = rng.randrange(width)
                cell.append(
                    run_trial(
                        op,
                        deleted_bit,
                        m,
                        rng,
                        mode=mode,
                        tau=tau,
                        budget=budget,
                        width=width,
                        seed_label=seed,
                    )
                )
            rows.append(
                CellRow(
                    op=op,
                    dk=m,
                    trials=trials,
                    weak=_cell_stats([t.weak for t in cell]),
                    mdl=_cell_stats([t.mdl for t in cell]),
                    flagged=sum(
                        1 for t in cell if t.weak.flagged or t.mdl.flagged
                    ),
                )
            )
            if keep_trials:
                kept.extend(cell)
    return ExperimentReport(
        master_seed=str(master_seed),
        mode=mode,
        tau=tau,
        width=width,
        rows=rows,
        trial_results=kept,
    )
