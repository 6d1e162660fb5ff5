"""Finitely presented sequences, stream pairing, and converging names.

A sequence is given either literally (a finite prefix followed by a
constant or periodic tail) or as a machine index run under a fixed step
budget.  Literal descriptors are the exactly-analyzable fragment: every
question asked about them downstream (is it the zero sequence, which
values occur, what is the limit) has a closed-form answer computed here.
Generated descriptors answer pointwise through the evaluator, with budget
exhaustion surfacing as an explicit PARTIAL marker rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence, Union

from .numbering import (
    EMIT_LENGTH_CEILING,
    Halted,
    Nat,
    ProgramIndex,
    encode,
    evaluate,
    pair,
    unpair,
    value_table_budget,
    value_table_program,
)

# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class Constant:
    value: Nat

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("tail constant must be a natural")


@dataclass(frozen=True)
class Periodic:
    word: tuple[Nat, ...]

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if not self.word:
            raise ValueError("periodic word must be nonempty")
        if any(v < 0 for v in self.word):
            raise ValueError("periodic word must hold naturals")


Tail = Union[Constant, Periodic]


@dataclass(frozen=True)
class Literal:
    prefix: tuple[Nat, ...]
    tail: Tail

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if any(v < 0 for v in self.prefix):
            raise ValueError("prefix must hold naturals")
        if not isinstance(self.tail, (Constant, Periodic)):
            raise ValueError("tail must be Constant or Periodic")


@dataclass(frozen=True)
class Generated:
    index: ProgramIndex
    budget: Nat

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("index must be a natural")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


SeqDescriptor = Union[Literal, Generated]


class _Partial:
    """Marker for a query the stored budget could not settle."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "PARTIAL"


PARTIAL = _Partial()


def _word_of(tail: Tail) -> tuple[Nat, ...]:
    return (tail.value,) if isinstance(tail, Constant) else tail.word


def literal_value(d: Literal, n: Nat) -> Nat:
    """d(n), exactly."""
    if n < 0:
        raise ValueError("position must be a natural")
    if n < len(d.prefix):
        return d.prefix[n]
    w = _word_of(d.tail)
    return w[(n - len(d.prefix)) % len(w)]


def descriptor_get(d: SeqDescriptor, n: Nat):
    """d(n), or PARTIAL when a Generated descriptor's budget runs out."""
    if isinstance(d, Literal):
        return literal_value(d, n)
    out = evaluate(d.index, n, d.budget)
    return out.value if isinstance(out, Halted) else PARTIAL


# ---------------------------------------------------------------------------
# exact analyses of Literal descriptors
#
# These closed forms are the ground truth the problem verifiers lean on;
# each one is a direct reading of "prefix then repeated word".


def literal_values(d: Literal) -> frozenset[Nat]:
    """All values the sequence ever takes."""
    return frozenset(d.prefix) | frozenset(_word_of(d.tail))


def cluster_values(d: Literal) -> frozenset[Nat]:
    """Values taken infinitely often: exactly the tail word's letters."""
    return frozenset(_word_of(d.tail))


def literal_is_zero(d: Literal) -> bool:
    return literal_values(d) == frozenset({0})


def literal_first_nonzero(d: Literal) -> Nat | None:
    """Least n with d(n) != 0, or None for the zero sequence."""
    for n, v in enumerate(d.prefix):
        if v:
            return n
    w = _word_of(d.tail)
    for k, v in enumerate(w):
        if v:
            return len(d.prefix) + k
    return None


def is_convergent(d: Literal) -> bool:
    """True iff d(n) is eventually constant."""
    return len(set(_word_of(d.tail))) == 1


def literal_limit(d: Literal) -> Nat:
    if not is_convergent(d):
        raise ValueError("sequence does not converge")
    return _word_of(d.tail)[0]


def literal_min(d: Literal) -> Nat:
    return min(literal_values(d))


def literal_sup(d: Literal) -> Nat:
    return max(literal_values(d))


def literal_liminf(d: Literal) -> Nat:
    return min(cluster_values(d))


def prepend_literal(values: Sequence[Nat], d: Literal) -> Literal:
    return Literal(tuple(values) + d.prefix, d.tail)


def interleave_literals(p: Literal, q: Literal) -> Literal:
    """The pairing <p,q>(2n) = p(n), <p,q>(2n+1) = q(n), again a Literal.

    Past position max(|prefix_p|, |prefix_q|) both inputs are in their
    tails, so the interleaving is periodic with period twice the lcm of
    the word lengths.
    """
    wp, wq = _word_of(p.tail), _word_of(q.tail)
    k = max(len(p.prefix), len(q.prefix))
    prefix = []
    for n in range(k):
        prefix.append(literal_value(p, n))
        prefix.append(literal_value(q, n))
    span = len(wp) * len(wq) // gcd(len(wp), len(wq))
    word = []
    for j in range(span):
        word.append(literal_value(p, k + j))
        word.append(literal_value(q, k + j))
    return Literal(tuple(prefix), Periodic(tuple(word)))


def subsample_literal(d: Literal, stride: Nat, offset: Nat) -> Literal:
    """The sequence n -> d(stride*n + offset), again a Literal.

    Sampling the tail with a fixed stride is periodic with period
    |word| / gcd(stride, |word|).  Component extraction of a pairing is
    the stride-2 case.
    """
    if stride < 1 or offset < 0:
        raise ValueError("need stride >= 1 and a natural offset")
    w = _word_of(d.tail)
    k = max(0, -(-(len(d.prefix) - offset) // stride))
    prefix = tuple(literal_value(d, stride * n + offset) for n in range(k))
    span = len(w) // gcd(stride, len(w))
    word = tuple(literal_value(d, stride * (k + j) + offset) for j in range(span))
    return Literal(prefix, Periodic(word))


def component_literal(d: Literal, i: int) -> Literal:
    """Component i of a stride-2 interleaved pair."""
    if i not in (0, 1):
        raise ValueError("pair component must be 0 or 1")
    return subsample_literal(d, 2, i)


# ---------------------------------------------------------------------------
# stream views


@dataclass(frozen=True)
class StreamView:
    """Deterministic query interface over a descriptor or a transform.

    `parts` is the view's provenance: a descriptor, a tuple of component
    views, or a Generated family head.  `kind` selects the query rule.
    """

    kind: str
    parts: tuple

    def at(self, n: Nat):
        if n < 0:
            raise ValueError("position must be a natural")
        if self.kind == "descriptor":
            return descriptor_get(self.parts[0], n)
        if self.kind == "pair":
            return self.parts[n % 2].at(n // 2)
        if self.kind == "tuple":
            which, k = unpair(n)
            if which >= len(self.parts):
                return PARTIAL
            return self.parts[which].at(k)
        # family: component `which` at k is eval(index, pair(which, k))
        fam = self.parts[0]
        which, k = unpair(n)
        out = evaluate(fam.index, pair(which, k), fam.budget)
        return out.value if isinstance(out, Halted) else PARTIAL


def stream(d: SeqDescriptor) -> StreamView:
    if not isinstance(d, (Literal, Generated)):
        raise ValueError("need a sequence descriptor")
    return StreamView("descriptor", (d,))


def stream_get(s: StreamView, n: Nat):
    return s.at(n)


def pair_streams(p: StreamView, q: StreamView) -> StreamView:
    return StreamView("pair", (p, q))


def tuple_streams(family) -> StreamView:
    """Countable tupling <p_0, p_1, ...>(pair(n, k)) = p_n(k).

    Accepts either a finite sequence of StreamViews (queries beyond the
    family are PARTIAL) or a Generated descriptor f with
    p_n(k) = phi_{f.index}(pair(n, k)).
    """
    if isinstance(family, Generated):
        return StreamView("family", (family,))
    views = tuple(family)
    if not all(isinstance(v, StreamView) for v in views):
        raise ValueError("family must be StreamViews or a Generated head")
    return StreamView("tuple", views)


# ---------------------------------------------------------------------------
# converging names (inputs delivered as limits)


@dataclass(frozen=True)
class ConvergingName:
    """A name that settles after finitely many switches.

    Each stage is (switch_time, descriptor); the descriptor is active
    from its switch time until the next one, and the final descriptor is
    the limit.  The first switch time must be 0 so every stage query has
    an active descriptor.
    """

    stages: tuple[tuple[Nat, SeqDescriptor], ...]

    def __post_init__(self):
        stages = tuple((t, d) for t, d in self.stages)
        object.__setattr__(self, "stages", stages)
        if not stages:
            raise ValueError("need at least one stage")
        if stages[0][0] != 0:
            raise ValueError("first stage must start at time 0")
        times = [t for t, _ in stages]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("switch times must be strictly increasing")
        for _, d in stages:
            if not isinstance(d, (Literal, Generated)):
                raise ValueError("stage payloads must be descriptors")


def name_at_stage(c: ConvergingName, t: Nat) -> SeqDescriptor:
    """The descriptor active at time t."""
    if t < 0:
        raise ValueError("time must be a natural")
    active = c.stages[0][1]
    for when, d in c.stages:
        if when <= t:
            active = d
        else:
            break
    return active


def limit_descriptor(c: ConvergingName) -> SeqDescriptor:
    return c.stages[-1][1]


# ---------------------------------------------------------------------------
# compiling literals to machine indices


def compile_literal(d: SeqDescriptor) -> ProgramIndex:
    """An index computing exactly the Literal's sequence, total.

    Generated descriptors are rejected: they already carry an index.
    Rejects literals whose table program would be too wide to own a
    usable index (the index digit count doubles per instruction).
    """
    if isinstance(d, Generated):
        raise ValueError("descriptor already carries an index")
    if not isinstance(d, Literal):
        raise ValueError("need a sequence descriptor")
    if isinstance(d.tail, Constant):
        prog = value_table_program(d.prefix, const=d.tail.value)
    else:
        prog = value_table_program(d.prefix, word=d.tail.word)
    if len(prog) > EMIT_LENGTH_CEILING:
        raise ValueError(
            f"literal needs a {len(prog)}-instruction table; indices are only "
            f"affordable up to {EMIT_LENGTH_CEILING} instructions"
        )
    return encode(prog)


def literal_eval_budget(d: Literal, n: Nat) -> Nat:
    """Budget under which the compiled index settles position n."""
    if isinstance(d.tail, Constant):
        return value_table_budget(d.prefix, d.tail.value, None, n)
    return value_table_budget(d.prefix, None, d.tail.word, n)


# ---------------------------------------------------------------------------
# text form


def format_descriptor(d: SeqDescriptor) -> str:
    if isinstance(d, Generated):
        return f"gen index={d.index} budget={d.budget}"
    fields = ["lit"]
    if d.prefix:
        fields.append("prefix=" + ",".join(str(v) for v in d.prefix))
    if isinstance(d.tail, Constant):
        fields.append(f"tail=const:{d.tail.value}")
    else:
        fields.append("tail=per:" + ",".join(str(v) for v in d.tail.word))
    return " ".join(fields)


def parse_descriptor(text: str) -> SeqDescriptor:
    """Inverse of format_descriptor; grammar used by corpus files."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty descriptor")
    kind, fields = tokens[0], {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ValueError(f"expected key=value, got {tok!r}")
        key, _, val = tok.partition("=")
        if key in fields:
            raise ValueError(f"duplicate field {key!r}")
        fields[key] = val
    if kind == "gen":
        if set(fields) != {"index", "budget"}:
            raise ValueError("gen descriptor needs exactly index= and budget=")
        return Generated(int(fields["index"]), int(fields["budget"]))
    if kind != "lit":
        raise ValueError(f"unknown descriptor kind {kind!r}")
    prefix = ()
    if "prefix" in fields:
        prefix = tuple(int(v) for v in fields.pop("prefix").split(","))
    tail_text = fields.pop("tail", None)
    if tail_text is None:
        raise ValueError("lit descriptor needs tail=")
    if fields:
        raise ValueError(f"unknown fields {sorted(fields)}")
    shape, _, body = tail_text.partition(":")
    if shape == "const":
        tail: Tail = Constant(int(body))
    elif shape == "per":
        tail = Periodic(tuple(int(v) for v in body.split(",")))
    else:
        raise ValueError(f"unknown tail shape {shape!r}")
    return Literal(prefix, tail)
