"""Limit learners: enumeration, amalgamation, shrinking sets, liminf.

All four learners produce guess streams judged by `run_to_limit`, which
declares convergence once a configured number of consecutive identical
guesses has been seen.  True limit convergence is out of reach at desk
scale; the stability window is the documented stand-in, and callers that
need certainty re-verify the final guess against the oracle.

Capped-halting conventions used by the learners:

  * enumeration: a candidate is abandoned when it halts with a wrong
    value OR exhausts the cap (the true learner consults the halting
    oracle; under a cap, budget exhaustion is read as divergence).
  * pocket elimination and set shrinking: an index is removed only on a
    halting disagreement; divergence keeps it (the dovetailed output
    program skips non-halting members on its own).

Emitted programs go through first_value_program, so final member sets
must stay tiny: an index's digit count doubles per instruction, and the
dovetailer costs max(members) + 3*len(members) + 10 instructions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from .numbering import Halted, Nat, ProgramIndex, encode, evaluate, first_value_program
from .oracles import Compatible, OracleConfig, compatible, window_verify
from .spaces import PARTIAL, SeqDescriptor, descriptor_get

# ---------------------------------------------------------------------------
# configuration, traces, outcomes


@dataclass(frozen=True)
class LearnerConfig:
    index_bound: Nat
    window: Nat
    cap: Nat
    stability_window: Nat
    max_steps: Nat

    def __post_init__(self):
        for name in ("index_bound", "window", "cap", "stability_window", "max_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def oracle(self) -> OracleConfig:
        return OracleConfig(self.cap, self.window, self.index_bound)


@dataclass(frozen=True)
class GuessTrace:
    guesses: tuple[Nat, ...]
    mind_changes: Nat
    stabilized_at: Optional[Nat]
    converged: bool


@dataclass(frozen=True)
class PromiseViolation:
    """The run's precondition did not hold (or caps were too small)."""

    learner: str
    reason: str
    survivors: tuple = ()


def _targets(p: SeqDescriptor, window: Nat) -> list[Nat]:
    out = []
    for n in range(window + 1):
        v = descriptor_get(p, n)
        if v is PARTIAL:
            raise ValueError(f"instance is partial at {n}; learners need totality")
        out.append(v)
    return out


def run_to_limit(guesses: Iterable[Nat], stability_window: Nat,
                 max_steps: Nat) -> GuessTrace:
    """Drive a guess stream and judge its convergence.

    Consumes at most max_steps guesses.  Convergence is declared as soon
    as stability_window consecutive equal guesses have been seen (the
    stream is then abandoned), or when the stream ends with a trailing
    equal block at least that long.  stabilized_at is the start of the
    maximal trailing equal block.
    """
    if stability_window < 1 or max_steps < 1:
        raise ValueError("stability_window and max_steps must be positive")
    trace: list[Nat] = []
    streak = 0
    converged = False
    for g in guesses:
        if trace and g == trace[-1]:
            streak += 1
        else:
            streak = 1
        trace.append(g)
        if streak >= stability_window:
            converged = True
            break
        if len(trace) >= max_steps:
            break
    mind_changes = sum(1 for a, b in zip(trace, trace[1:]) if a != b)
    stabilized_at = None
    if converged:
        at = len(trace) - 1
        while at > 0 and trace[at - 1] == trace[-1]:
            at -= 1
        stabilized_at = at
    return GuessTrace(tuple(trace), mind_changes, stabilized_at, converged)


# ---------------------------------------------------------------------------
# identification by enumeration


def _audit(candidate: ProgramIndex, targets: Sequence[Nat],
           cap: Nat) -> Optional[tuple[Nat, Nat, Optional[Nat]]]:
    """First disagreement of the candidate with the targets, or None.

    A disagreement is (n, expected, got) with got=None when the
    candidate exhausted the cap at n.
    """
    for n, want in enumerate(targets):
        out = evaluate(candidate, n, cap)
        if isinstance(out, Halted):
            if out.value != want:
                return (n, want, out.value)
        else:
            return (n, want, None)
    return None


def _enum_guesses(candidates: Iterable[ProgramIndex], targets: Sequence[Nat],
                  cfg: LearnerConfig, witnesses: list) -> Iterator[Nat]:
    for c in candidates:
        yield c
        hit = _audit(c, targets, cfg.cap)
        if hit is None:
            for _ in range(cfg.stability_window):
                yield c
            return
        witnesses.append((c,) + hit)
    # universe exhausted without a verified candidate: end uncommitted


def enum_learner_audit(p: SeqDescriptor, klass: str, cfg: LearnerConfig):
    """enum_learner plus the disagreement witnesses justifying each skip."""
    if klass == "full":
        candidates: Iterable[ProgramIndex] = range(cfg.index_bound + 1)
    elif klass == "total":
        from .numbering import default_loop_compiler

        candidates = default_loop_compiler.indices()
    else:
        raise ValueError("class must be 'full' or 'total'")
    targets = _targets(p, cfg.window)
    witnesses: list = []
    trace = run_to_limit(
        _enum_guesses(candidates, targets, cfg, witnesses),
        cfg.stability_window,
        cfg.max_steps,
    )
    return trace, tuple(witnesses)


def enum_learner(p: SeqDescriptor, klass: str, cfg: LearnerConfig) -> GuessTrace:
    """Gold-style identification: walk the universe, keep the first
    candidate that survives a full window audit."""
    trace, _ = enum_learner_audit(p, klass, cfg)
    return trace


# ---------------------------------------------------------------------------
# pockets and amalgamation


@dataclass(frozen=True)
class Pocket:
    anchor: ProgramIndex
    members: frozenset[ProgramIndex]
    internally_compatible: bool


@dataclass(frozen=True)
class PocketTable:
    pockets: tuple[Pocket, ...]
    survivors: tuple[Pocket, ...]


def build_pockets(m: Nat, cfg: LearnerConfig) -> PocketTable:
    """Pocket P_i = {j <= m : phi_i compatible with phi_j}, for i <= m."""
    if m < 0:
        raise ValueError("universe bound must be a natural")
    oracle = cfg.oracle()
    verdicts = {}
    for i in range(m + 1):
        for j in range(i, m + 1):
            verdicts[(i, j)] = isinstance(compatible(i, j, oracle), Compatible)

    def agree(a, b):
        return verdicts[(a, b) if a <= b else (b, a)]

    pockets = []
    for i in range(m + 1):
        members = frozenset(j for j in range(m + 1) if agree(i, j))
        internal = all(
            agree(a, b) for a in members for b in members if a < b
        )
        pockets.append(Pocket(i, members, internal))
    return PocketTable(tuple(pockets), ())


def prune_pockets(table: PocketTable) -> PocketTable:
    """Drop internally incompatible pockets and duplicate member sets."""
    seen = set()
    survivors = []
    for pocket in table.pockets:
        if not pocket.internally_compatible:
            continue
        if pocket.members in seen:
            continue
        seen.add(pocket.members)
        survivors.append(pocket)
    return PocketTable(table.pockets, tuple(survivors))


def _pocket_scan(targets: Sequence[Nat], survivors: Sequence[Pocket],
                 cap: Nat) -> tuple[list[Pocket], list[Nat]]:
    """Eliminate p-incompatible pockets along the instance's prefix.

    A pocket dies at position n when one of its members halts there with
    a value different from the target.  Emits the leading live anchor
    per stage as the guess stream.
    """
    alive = list(survivors)
    guesses = []
    for n, want in enumerate(targets):
        still = []
        for pocket in alive:
            dead = False
            for j in sorted(pocket.members):
                out = evaluate(j, n, cap)
                if isinstance(out, Halted) and out.value != want:
                    dead = True
                    break
            if not dead:
                still.append(pocket)
        alive = still
        if not alive:
            break
        guesses.append(alive[0].anchor)
    return alive, guesses


@dataclass(frozen=True)
class AmalgamationResult:
    index: ProgramIndex
    table: PocketTable
    trace: GuessTrace
    verified: bool


def amalgamation_learn(
    p: SeqDescriptor, m: Nat, cfg: LearnerConfig
) -> Union[AmalgamationResult, PromiseViolation]:
    """Pocket-amalgamation learner: pocket the universe 0..m, prune,
    eliminate pockets that contradict p, and dovetail the unique survivor.

    Requires the promise m >= min_index(p); with it, exactly one pocket
    survives and its dovetailed first-value program computes p on the
    window.  Zero or several survivors are reported as a promise
    violation, not an error.
    """
    targets = _targets(p, cfg.window)
    table = prune_pockets(build_pockets(m, cfg))
    alive, guesses = _pocket_scan(targets, table.survivors, cfg.cap)
    trace = run_to_limit(guesses, cfg.stability_window, cfg.max_steps)
    if len(alive) != 1:
        return PromiseViolation(
            "amalgamation",
            f"{len(alive)} pockets survive the scan; the promise needs exactly 1",
            tuple(alive),
        )
    final = PocketTable(table.pockets, tuple(alive))
    members = sorted(alive[0].members)
    index = encode(first_value_program(members))
    verified = window_verify(index, p, cfg.oracle())
    return AmalgamationResult(index, final, trace, verified)


# ---------------------------------------------------------------------------
# shrinking finite sets


def set_code(members, k: Nat) -> Nat:
    """Integer stand-in for d(A) = sum 2^-i: code(A, k) = sum 2^(k-i).

    Order-isomorphic to d on subsets of {0..k}, exact in integers.
    """
    if any(i < 0 or i > k for i in members):
        raise ValueError("members must lie in 0..k")
    return sum(2 ** (k - i) for i in set(members))


@dataclass(frozen=True)
class BoundedMinResult:
    index: ProgramIndex
    trace: GuessTrace
    sets: tuple[frozenset[ProgramIndex], ...]
    verified: bool


def bounded_min_learner(
    p: SeqDescriptor, k: Nat, cfg: LearnerConfig
) -> Union[BoundedMinResult, PromiseViolation]:
    """Shrinking-set learner: start from A_0 = {0..k} and shrink.

    An index leaves the set on a halting disagreement with p; the guess
    stream is the non-increasing code(A, k) sequence, and the final set
    is dovetailed into a first-value program.  The promise k >=
    min_index(p) makes the final program compute p; failure to
    window-verify is reported as a promise violation.
    """
    if k < 0:
        raise ValueError("k must be a natural")
    targets = _targets(p, cfg.window)
    members = set(range(k + 1))
    sets = [frozenset(members)]
    codes = [set_code(members, k)]
    for n, want in enumerate(targets):
        for j in sorted(members):
            out = evaluate(j, n, cfg.cap)
            if isinstance(out, Halted) and out.value != want:
                members.discard(j)
        sets.append(frozenset(members))
        codes.append(set_code(members, k))
        if not members:
            break
    trace = run_to_limit(codes, cfg.stability_window, cfg.max_steps)
    if not members:
        return PromiseViolation(
            "bounded_min", "every index of 0..k was refuted; promise k >= Kol(p) fails"
        )
    index = encode(first_value_program(sorted(members)))
    verified = window_verify(index, p, cfg.oracle())
    if not verified:
        return PromiseViolation(
            "bounded_min",
            "final dovetailed program fails window verification",
            (index,),
        )
    return BoundedMinResult(index, trace, tuple(sets), verified)


# ---------------------------------------------------------------------------
# liminf-style enumeration


def kol_liminf_enumerator(p: SeqDescriptor, cfg: LearnerConfig) -> tuple[tuple[Nat, ...], ...]:
    """Stage t emits every index validating p on positions 0..t.

    The emission sets shrink as stages lengthen; indices emitted at
    every late stage are exactly the window-verified ones, so the least
    final-stage emission is the capped Kolmogorov complexity of p.
    """
    targets = _targets(p, cfg.window)
    stages = []
    alive = list(range(cfg.index_bound + 1))
    for t in range(cfg.window + 1):
        still = []
        for i in alive:
            out = evaluate(i, t, cfg.cap)
            if isinstance(out, Halted) and out.value == targets[t]:
                still.append(i)
        alive = still
        stages.append(tuple(alive))
    return tuple(stages)


# ---------------------------------------------------------------------------
# trace export


def trace_to_csv(trace: GuessTrace) -> str:
    lines = ["step,guess,mind_change_flag"]
    prev = None
    for step, g in enumerate(trace.guesses):
        flag = 1 if prev is not None and g != prev else 0
        lines.append(f"{step},{g},{flag}")
        prev = g
    return "\n".join(lines) + "\n"


def run_summary(instance: str, learner: str, trace: GuessTrace,
                verified: Optional[bool]) -> str:
    payload = {
        "instance": instance,
        "learner": learner,
        "converged": trace.converged,
        "stabilized_at": trace.stabilized_at,
        "mind_changes": trace.mind_changes,
        "final_guess": trace.guesses[-1] if trace.guesses else None,
        "verified": verified,
    }
    return json.dumps(payload, sort_keys=True)
