"""Capped stand-ins for the halting oracle and the least-index map.

Every oracle here replaces an undecidable query by a step-capped one and
documents which way the approximation errs:

  * halts: budget exhaustion is reported, never silently treated as
    divergence by callers that care about the direction.
  * compatible: a disagreement witness is definitive; `Compatible` only
    means "no witness below the cap and window".
  * in_R: capping can only remove witnesses i, so a capped True may be a
    false positive of the true set R, never the other way around.
  * min_index: the scan is exact relative to the capped universe; the
    result can only drop when the cap grows.

All range bounds in this module are inclusive: window w means arguments
0..w, index_bound b means candidates 0..b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .numbering import EvalOutcome, Halted, Nat, ProgramIndex, evaluate
from .spaces import PARTIAL, SeqDescriptor, descriptor_get

# ---------------------------------------------------------------------------
# configuration and verdicts


@dataclass(frozen=True)
class OracleConfig:
    cap: Nat
    window: Nat
    index_bound: Nat

    def __post_init__(self):
        if self.cap < 1 or self.window < 1 or self.index_bound < 1:
            raise ValueError("cap, window, and index_bound must be positive")


@dataclass(frozen=True)
class Compatible:
    pass


@dataclass(frozen=True)
class Incompatible:
    witness_n: Nat
    v1: Nat
    v2: Nat


CompatibilityVerdict = Union[Compatible, Incompatible]


# ---------------------------------------------------------------------------
# halting and compatibility


def halts(i: ProgramIndex, n: Nat, cfg: OracleConfig) -> EvalOutcome:
    """The capped halting query: eval under cfg.cap."""
    return evaluate(i, n, cfg.cap)


def compatible(i: ProgramIndex, j: ProgramIndex, cfg: OracleConfig) -> CompatibilityVerdict:
    """Search 0..window for a joint-halting disagreement.

    A returned witness is final under any larger cap (halting runs
    replay identically); Compatible can flip to Incompatible when the
    cap or window grows, never back.
    """
    for n in range(cfg.window + 1):
        a = halts(i, n, cfg)
        if not isinstance(a, Halted):
            continue
        b = halts(j, n, cfg)
        if isinstance(b, Halted) and a.value != b.value:
            return Incompatible(n, a.value, b.value)
    return Compatible()


def _targets(d: SeqDescriptor, window: Nat) -> list[Nat]:
    out = []
    for n in range(window + 1):
        v = descriptor_get(d, n)
        if v is PARTIAL:
            raise ValueError(f"descriptor is partial at {n}; oracle needs totality")
        out.append(v)
    return out


def window_verify(i: ProgramIndex, d: SeqDescriptor, cfg: OracleConfig) -> bool:
    """Capped stand-in for phi_i = d: agreement on all of 0..window."""
    for n in range(cfg.window + 1):
        v = descriptor_get(d, n)
        if v is PARTIAL:
            raise ValueError(f"descriptor is partial at {n}; oracle needs totality")
        out = halts(i, n, cfg)
        if not isinstance(out, Halted) or out.value != v:
            return False
    return True


# ---------------------------------------------------------------------------
# the random set R


def in_R(k: Nat, n: Nat, cfg: OracleConfig) -> bool:
    """True iff no candidate i < n (within the universe) maps k to n.

    Exact relative to true halting whenever n <= cfg.index_bound, since
    the defining condition only quantifies over i < n.
    """
    if k < 0 or n < 0:
        raise ValueError("R is indexed by naturals")
    for i in range(min(n, cfg.index_bound + 1)):
        out = halts(i, k, cfg)
        if isinstance(out, Halted) and out.value == n:
            return False
    return True


def search_R(k: Nat, lower: Nat, cfg: OracleConfig, search_limit: Nat) -> Optional[Nat]:
    """Least n in [lower, search_limit] with in_R(k, n); None if none.

    None signals the search window was too small, a reported outcome
    rather than an error.
    """
    for n in range(lower, search_limit + 1):
        if in_R(k, n, cfg):
            return n
    return None


# ---------------------------------------------------------------------------
# brute-force least index

_min_cache: dict = {}


def clear_oracle_cache() -> None:
    _min_cache.clear()


def min_index(d: SeqDescriptor, cfg: OracleConfig) -> Optional[ProgramIndex]:
    """Least i <= index_bound window-verifying d; None when no index fits.

    The ground-truth answer for the whole Godel family at desk scale.
    Memoized per (descriptor, config); the cache is transparent because
    both the evaluator and the descriptor reads are deterministic.
    """
    key = (d, cfg)
    if key in _min_cache:
        return _min_cache[key]
    targets = _targets(d, cfg.window)
    found = None
    for i in range(cfg.index_bound + 1):
        ok = True
        for n, want in enumerate(targets):
            out = halts(i, n, cfg)
            if not isinstance(out, Halted) or out.value != want:
                ok = False
                break
        if ok:
            found = i
            break
    _min_cache[key] = found
    return found
