"""Total numbering of a small register machine, plus a budgeted evaluator.

The machine has five instructions over natural-valued registers:

    Z r        R[r] := 0
    S r        R[r] := R[r] + 1
    T a b      R[b] := R[a]
    J a b k    if R[a] == R[b] jump to instruction k, else fall through
    EVB i n s o   budgeted self-interpretation, see `evaluate`

A program is a finite instruction list.  Every natural number decodes to
exactly one program (index 0 is the empty program), so the index space is
a total numbering of all machine programs.  Input and output live in R0;
all other registers start at 0.  A jump target at or beyond the program
length halts the machine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable, Sequence, Union

Nat = int
ProgramIndex = int

# ---------------------------------------------------------------------------
# Cantor pairing


def pair(x: Nat, y: Nat) -> Nat:
    """Bijection N x N -> N: pair(x, y) = (x+y)(x+y+1)/2 + y."""
    if x < 0 or y < 0:
        raise ValueError("pair needs naturals")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(n: Nat) -> tuple[Nat, Nat]:
    """Inverse of `pair`."""
    if n < 0:
        raise ValueError("unpair needs a natural")
    w = (isqrt(8 * n + 1) - 1) // 2
    y = n - w * (w + 1) // 2
    return w - y, y


def encode_list(xs: Sequence[Nat]) -> Nat:
    """List code: empty -> 0, cons(x, t) -> pair(x, code(t)) + 1."""
    acc = 0
    for x in reversed(xs):
        acc = pair(x, acc) + 1
    return acc


def decode_list(n: Nat) -> list[Nat]:
    out = []
    while n:
        x, n = unpair(n - 1)
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# Instructions and programs

_OPS = ("Z", "S", "T", "J", "EVB")
_ARITY = {"Z": 1, "S": 1, "T": 2, "J": 3, "EVB": 4}


@dataclass(frozen=True)
class Instruction:
    op: str
    args: tuple[Nat, ...]

    def __post_init__(self):
        if self.op not in _ARITY:
            raise ValueError(f"unknown op {self.op!r}")
        if len(self.args) != _ARITY[self.op]:
            raise ValueError(f"{self.op} takes {_ARITY[self.op]} args")
        if any(a < 0 for a in self.args):
            raise ValueError("instruction args must be naturals")


@dataclass(frozen=True)
class Program:
    instructions: tuple[Instruction, ...] = ()

    def __len__(self) -> int:
        return len(self.instructions)


def encode_instruction(ins: Instruction) -> Nat:
    tag = _OPS.index(ins.op)
    a = ins.args
    if tag <= 1:
        payload = a[0]
    elif tag == 2:
        payload = pair(a[0], a[1])
    elif tag == 3:
        payload = pair(a[0], pair(a[1], a[2]))
    else:
        payload = pair(a[0], pair(a[1], pair(a[2], a[3])))
    return 5 * payload + tag


def decode_instruction(m: Nat) -> Instruction:
    tag = m % 5
    payload = m // 5
    if tag <= 1:
        return Instruction(_OPS[tag], (payload,))
    if tag == 2:
        return Instruction("T", unpair(payload))
    if tag == 3:
        a, rest = unpair(payload)
        b, k = unpair(rest)
        return Instruction("J", (a, b, k))
    a, rest = unpair(payload)
    b, rest = unpair(rest)
    c, d = unpair(rest)
    return Instruction("EVB", (a, b, c, d))


def encode(program: Program) -> ProgramIndex:
    return encode_list([encode_instruction(i) for i in program.instructions])


def decode(index: ProgramIndex) -> Program:
    return Program(tuple(decode_instruction(m) for m in decode_list(index)))


def format_program(program: Program) -> str:
    """One instruction per line, e.g. ``J 0 1 4``."""
    return "\n".join(f"{i.op} {' '.join(map(str, i.args))}" for i in program.instructions)


def parse_program(text: str) -> Program:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        op = parts[0].upper()
        if op not in _ARITY:
            raise ValueError(f"line {lineno}: unknown op {parts[0]!r}")
        try:
            args = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad argument in {line!r}") from exc
        if len(args) != _ARITY[op] or any(a < 0 for a in args):
            raise ValueError(f"line {lineno}: {op} takes {_ARITY[op]} natural args")
        out.append(Instruction(op, args))
    return Program(tuple(out))


# ---------------------------------------------------------------------------
# Evaluation outcomes


@dataclass(frozen=True)
class Halted:
    value: Nat
    steps: Nat


@dataclass(frozen=True)
class BudgetExceeded:
    budget: Nat


EvalOutcome = Union[Halted, BudgetExceeded]

# ---------------------------------------------------------------------------
# Budgeted evaluator.
#
# Every instruction costs one step, EVB included: the inner evaluation is
# free for the caller and runs under the budget read from R[s].  Results of
# completed evaluations are memoized per (index, input); the memo is
# transparent, it never changes an outcome.
#
# Re-entrant self-interpretation (an EVB chain reaching an (index, input)
# pair that is already being evaluated) has no consistent solution, so such
# inner calls are treated as divergent, as are chains nested deeper than
# _DEPTH_LIMIT.  Both cuts are independent of the outer budget, which keeps
# budget monotonicity intact.

_DEPTH_LIMIT = 64

# memo entries: (0, value, steps) halted | (1,) proven divergent
#             | (2, explored) no halt within `explored` steps
_memo: dict[tuple[int, int], tuple] = {}
_lower_cache: dict[int, tuple] = {}

_LIST_REG_LIMIT = 100_000


def clear_eval_cache() -> None:
    _memo.clear()
    _lower_cache.clear()


def _lowered(index: int) -> tuple:
    ent = _lower_cache.get(index)
    if ent is None:
        code = []
        maxreg = 0
        for m in decode_list(index):
            ins = decode_instruction(m)
            tag = _OPS.index(ins.op)
            a = ins.args
            if tag <= 1:
                maxreg = max(maxreg, a[0])
                code.append((tag, a[0]))
            elif tag == 2:
                maxreg = max(maxreg, a[0], a[1])
                code.append((tag, a[0], a[1]))
            elif tag == 3:
                maxreg = max(maxreg, a[0], a[1])
                code.append((tag, a[0], a[1], a[2]))
            else:
                maxreg = max(maxreg, a[0], a[1], a[2], a[3])
                code.append((tag, a[0], a[1], a[2], a[3]))
        ent = (tuple(code), maxreg + 1)
        _lower_cache[index] = ent
    return ent


def evaluate(index: ProgramIndex, arg: Nat, budget: Nat) -> EvalOutcome:
    """Run decode(index) on `arg` for at most `budget` steps.

    Returns Halted(value, steps) with steps <= budget, or
    BudgetExceeded(budget).  Deterministic and monotone in the budget:
    a Halted outcome is reproduced unchanged under any larger budget.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if index < 0 or arg < 0:
        raise ValueError("index and argument must be naturals")
    out, _ = _eval_impl(index, arg, budget, set())
    return out


def _eval_impl(index: int, arg: int, budget: int, chain: set) -> tuple[EvalOutcome, bool]:
    key = (index, arg)
    ent = _memo.get(key)
    if ent is not None:
        tag = ent[0]
        if tag == 0:
            if budget >= ent[2]:
                return Halted(ent[1], ent[2]), True
            return BudgetExceeded(budget), True
        if tag == 1:
            return BudgetExceeded(budget), True
        if budget <= ent[1]:
            return BudgetExceeded(budget), True

    code, nregs = _lowered(index)
    if not code:
        if ent is None:
            _memo[key] = (0, arg, 0)
        return Halted(arg, 0), True
    if nregs > _LIST_REG_LIMIT:
        return _eval_sparse(index, arg, budget, chain, code)

    regs = [0] * nregs
    regs[0] = arg
    pc = 0
    steps = 0
    ncode = len(code)
    pure = True
    snap_pc = -1
    snap_regs = None
    next_snap = 8

    chain.add(key)
    try:
        while True:
            if pc >= ncode:
                if pure:
                    _memo[key] = (0, regs[0], steps)
                return Halted(regs[0], steps), pure
            if steps >= budget:
                if pure and (ent is None or ent[1] < budget):
                    _memo[key] = (2, budget)
                return BudgetExceeded(budget), pure
            ins = code[pc]
            tag = ins[0]
            if tag == 0:
                regs[ins[1]] = 0
                pc += 1
            elif tag == 1:
                regs[ins[1]] += 1
                pc += 1
            elif tag == 2:
                regs[ins[2]] = regs[ins[1]]
                pc += 1
            elif tag == 3:
                pc = ins[3] if regs[ins[1]] == regs[ins[2]] else pc + 1
            else:
                sub = (regs[ins[1]], regs[ins[2]])
                if sub in chain or len(chain) >= _DEPTH_LIMIT:
                    regs[ins[4]] = 0
                    pure = False
                else:
                    out, sub_pure = _eval_impl(sub[0], sub[1], regs[ins[3]], chain)
                    if not sub_pure:
                        pure = False
                    regs[ins[4]] = out.value + 1 if type(out) is Halted else 0
                pc += 1
            steps += 1
            if pc == snap_pc and regs == snap_regs:
                if pure:
                    _memo[key] = (1,)
                return BudgetExceeded(budget), pure
            if steps == next_snap:
                snap_pc = pc
                snap_regs = regs.copy()
                next_snap <<= 1
    finally:
        chain.discard(key)


def _eval_sparse(index, arg, budget, chain, code):
    # fallback for programs naming absurdly large registers
    from collections import defaultdict

    key = (index, arg)
    regs = defaultdict(int)
    regs[0] = arg
    pc = 0
    steps = 0
    ncode = len(code)
    pure = True
    chain.add(key)
    try:
        while True:
            if pc >= ncode:
                if pure:
                    _memo[key] = (0, regs[0], steps)
                return Halted(regs[0], steps), pure
            if steps >= budget:
                ent = _memo.get(key)
                if pure and (ent is None or ent[0] != 2 or ent[1] < budget):
                    _memo[key] = (2, budget)
                return BudgetExceeded(budget), pure
            ins = code[pc]
            tag = ins[0]
            if tag == 0:
                regs[ins[1]] = 0
                pc += 1
            elif tag == 1:
                regs[ins[1]] += 1
                pc += 1
            elif tag == 2:
                regs[ins[2]] = regs[ins[1]]
                pc += 1
            elif tag == 3:
                pc = ins[3] if regs[ins[1]] == regs[ins[2]] else pc + 1
            else:
                sub = (regs[ins[1]], regs[ins[2]])
                if sub in chain or len(chain) >= _DEPTH_LIMIT:
                    regs[ins[4]] = 0
                    pure = False
                else:
                    out, sub_pure = _eval_impl(sub[0], sub[1], regs[ins[3]], chain)
                    if not sub_pure:
                        pure = False
                    regs[ins[4]] = out.value + 1 if type(out) is Halted else 0
                pc += 1
            steps += 1
    finally:
        chain.discard(key)


def run_program(program: Program, arg: Nat, budget: Nat) -> EvalOutcome:
    """Run a Program object directly, without going through its index.

    Semantics agree with evaluate(encode(program), arg, budget); the point
    is that wide programs (long unary loads) stay cheap because the
    astronomically large index is never materialized.  No memoization at
    the top level; EVB subcalls share the evaluator cache as usual.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if arg < 0:
        raise ValueError("argument must be a natural")
    code = [(_OPS.index(ins.op),) + ins.args for ins in program.instructions]
    regs = {0: arg}
    pc = 0
    steps = 0
    ncode = len(code)
    chain: set = set()
    while True:
        if pc >= ncode:
            return Halted(regs.get(0, 0), steps)
        if steps >= budget:
            return BudgetExceeded(budget)
        ins = code[pc]
        tag = ins[0]
        if tag == 0:
            regs[ins[1]] = 0
            pc += 1
        elif tag == 1:
            regs[ins[1]] = regs.get(ins[1], 0) + 1
            pc += 1
        elif tag == 2:
            regs[ins[2]] = regs.get(ins[1], 0)
            pc += 1
        elif tag == 3:
            pc = ins[3] if regs.get(ins[1], 0) == regs.get(ins[2], 0) else pc + 1
        else:
            sub = (regs.get(ins[1], 0), regs.get(ins[2], 0))
            if sub in chain or len(chain) >= _DEPTH_LIMIT:
                regs[ins[4]] = 0
            else:
                out, _ = _eval_impl(sub[0], sub[1], regs.get(ins[3], 0), chain)
                regs[ins[4]] = out.value + 1 if type(out) is Halted else 0
            pc += 1
        steps += 1


# ---------------------------------------------------------------------------
# A small assembler for emitted programs.  Jump targets may be label strings;
# a label placed after the last instruction resolves past the end (halt).


class _Asm:
    def __init__(self):
        self._items: list[tuple] = []
        self._labels: dict[str, int] = {}

    def label(self, name: str) -> None:
        if name in self._labels:
            raise ValueError(f"duplicate label {name}")
        self._labels[name] = len(self._items)

    def emit(self, op: str, *args) -> None:
        self._items.append((op, args))

    def assemble(self) -> Program:
        out = []
        for op, args in self._items:
            if op == "J":
                a, b, k = args
                if isinstance(k, str):
                    if k not in self._labels:
                        raise ValueError(f"unknown label {k}")
                    k = self._labels[k]
                out.append(Instruction("J", (a, b, k)))
            else:
                out.append(Instruction(op, tuple(args)))
        return Program(tuple(out))


def shift_jump_targets(program: Program, offset: int) -> Program:
    """Shift every jump target by `offset` (used when prefixing a macro)."""
    out = []
    for ins in program.instructions:
        if ins.op == "J":
            a, b, k = ins.args
            out.append(Instruction("J", (a, b, k + offset)))
        else:
            out.append(ins)
    return Program(tuple(out))


_label_counter = itertools.count()


def _fresh(stem: str) -> str:
    return f"{stem}{next(_label_counter)}"


# ---------------------------------------------------------------------------
# Index transformers.
#
# The list code squares roughly once per instruction, so an index has about
# 2^L digits for an L-instruction program.  Emitted programs therefore have
# a hard desk-scale length ceiling; beyond it the index is mathematically
# fine but cannot be materialized.  Macros use scratch registers above the
# suffix's register space, so no zeroing pass is needed before the original
# program runs.

EMIT_LENGTH_CEILING = 22


def _check_emit_length(n: int, what: str) -> None:
    if n > EMIT_LENGTH_CEILING:
        raise ValueError(
            f"{what} needs {n} instructions; indices beyond "
            f"{EMIT_LENGTH_CEILING} instructions are not representable at desk scale"
        )


def _prepend(macro: Program, suffix: Program) -> ProgramIndex:
    shifted = shift_jump_targets(suffix, len(macro))
    return encode(Program(macro.instructions + shifted.instructions))


def s_const(index: ProgramIndex, const: Nat) -> ProgramIndex:
    """Index of a program computing n -> decode(index)(pair(const, n)).

    Prepends a macro that replaces R0 by pair(const, R0) using the identity
    pair(c, n) = T_c + sum_{k<n} (c + 2 + k), with T_c triangular.
    """
    if const < 0:
        raise ValueError("const must be a natural")
    suffix = decode(index)
    _, nregs = _lowered(index)
    base = max(nregs, 1)
    k, b, acc, i = base, base + 1, base + 2, base + 3
    a = _Asm()
    for _ in range(const + 2):
        a.emit("S", b)
    for _ in range(const * (const + 1) // 2):
        a.emit("S", acc)
    a.label("lp")
    a.emit("J", k, 0, "fin")
    a.emit("Z", i)
    a.label("ad")
    a.emit("J", i, b, "nx")
    a.emit("S", acc)
    a.emit("S", i)
    a.emit("J", 0, 0, "ad")
    a.label("nx")
    a.emit("S", b)
    a.emit("S", k)
    a.emit("J", 0, 0, "lp")
    a.label("fin")
    a.emit("T", acc, 0)
    macro = a.assemble()
    _check_emit_length(len(macro) + len(suffix), f"s_const(..., {const})")
    return _prepend(macro, suffix)


def project_component(index: ProgramIndex, component: Nat) -> ProgramIndex:
    """Component extraction from a pair-tupled sequence.

    If decode(index) computes a tupled stream t with t(pair(n, k)) equal to
    the n-th member sequence at k, the returned index computes that member.
    Same transformation as `s_const`, kept under its own name because the
    call sites mean different things by it.
    """
    return s_const(index, component)


def s_const_budget(const: Nat, arg: Nat, inner: Nat) -> Nat:
    """Budget sufficient for evaluate(s_const(i, const), arg, .) given the
    original program halts within `inner` steps on pair(const, arg)."""
    return (2 * arg * arg + 4 * arg * const + 12 * arg
            + const * const + const + 8 + inner)


def precompose_affine(index: ProgramIndex, mul: Nat, add: Nat) -> ProgramIndex:
    """Index computing n -> decode(index)(mul * n + add)."""
    if mul < 0 or add < 0:
        raise ValueError("mul and add must be naturals")
    suffix = decode(index)
    a = _Asm()
    if mul == 1:
        for _ in range(add):
            a.emit("S", 0)
    else:
        _, nregs = _lowered(index)
        base = max(nregs, 1)
        k, acc = base, base + 1
        a.label("lp")
        a.emit("J", k, 0, "done")
        for _ in range(mul):
            a.emit("S", acc)
        a.emit("S", k)
        a.emit("J", 0, 0, "lp")
        a.label("done")
        for _ in range(add):
            a.emit("S", acc)
        a.emit("T", acc, 0)
    macro = a.assemble()
    _check_emit_length(len(macro) + len(suffix), f"precompose_affine(..., {mul}, {add})")
    return _prepend(macro, suffix)


def affine_budget(mul: Nat, add: Nat, arg: Nat, inner: Nat) -> Nat:
    if mul == 1:
        return add + inner
    return arg * (mul + 3) + add + 8 + inner


# ---------------------------------------------------------------------------
# First-value dovetailing over a fixed member set: the emitted program runs
# every member on the input under round-robin budgets 1, 2, 3, ... and halts
# with the first value any member produces.  Member constants are loaded as
# gaps in one register per round, so members must be strictly increasing and
# the emitted length is max(members) + 3*len(members) + 10.


def first_value_program(members: Sequence[ProgramIndex]) -> Program:
    if not members:
        raise ValueError("need at least one member")
    if any(b <= a for a, b in zip(members, members[1:])) or members[0] < 0:
        raise ValueError("members must be strictly increasing naturals")
    single = len(members) == 1
    length = members[-1] + 11 if single else members[-1] + 3 * len(members) + 10
    _check_emit_length(length, f"first-value program over {len(members)} members")
    a = _Asm()
    # R0 input, R1 inner budget, R2 evb result, R3 pinned zero,
    # R4/R5 decrement scratch, R6 member cursor
    if single:
        for _ in range(members[0]):
            a.emit("S", 6)
        a.emit("S", 1)
        a.label("round")
        a.emit("EVB", 6, 0, 1, 2)
        a.emit("J", 2, 3, "cont")
        # hit: R2 = value+1, count R4 up to value
        a.emit("S", 5)
        a.label("dec")
        a.emit("J", 5, 2, "fin")
        a.emit("S", 4)
        a.emit("S", 5)
        a.emit("J", 0, 0, "dec")
        a.label("cont")
        a.emit("S", 1)
        a.emit("J", 0, 0, "round")
        a.label("fin")
        a.emit("T", 4, 0)
        return a.assemble()
    a.emit("S", 1)
    a.label("round")
    prev = 0
    for t, j in enumerate(members):
        for _ in range(j - prev):
            a.emit("S", 6)
        prev = j
        a.emit("EVB", 6, 0, 1, 2)
        a.emit("J", 2, 3, f"nx{t}")
        a.emit("J", 0, 0, "out")
        a.label(f"nx{t}")
    a.emit("Z", 6)
    a.emit("S", 1)
    a.emit("J", 0, 0, "round")
    a.label("out")
    a.emit("S", 5)
    a.label("dec")
    a.emit("J", 5, 2, "fin")
    a.emit("S", 4)
    a.emit("S", 5)
    a.emit("J", 0, 0, "dec")
    a.label("fin")
    a.emit("T", 4, 0)
    return a.assemble()


def first_value_budget(members: Sequence[ProgramIndex], inner_steps: Nat, value_bound: Nat) -> Nat:
    """Budget sufficient when some member halts within `inner_steps` steps
    producing a value at most `value_bound`."""
    per_round = max(members) + 2 * len(members) + 3
    return (inner_steps + 1) * per_round + 4 * value_bound + 10


# ---------------------------------------------------------------------------
# A total sub-language: straight-line register programs with bounded loops.
# Every program halts; the compiler records emitted indices and can report
# an exact step count of the compiled code on a given input.


@dataclass(frozen=True)
class Inc:
    reg: int


@dataclass(frozen=True)
class ZeroR:
    reg: int


@dataclass(frozen=True)
class Copy:
    src: int
    dst: int


@dataclass(frozen=True)
class Loop:
    reg: int
    body: tuple


LoopStmt = Union[Inc, ZeroR, Copy, Loop]


def _loop_regs(stmts: Iterable[LoopStmt]) -> set[int]:
    regs: set[int] = set()
    for st in stmts:
        if isinstance(st, Inc) or isinstance(st, ZeroR):
            regs.add(st.reg)
        elif isinstance(st, Copy):
            regs.update((st.src, st.dst))
        else:
            regs.add(st.reg)
            regs |= _loop_regs(st.body)
    return regs


def run_loop(stmts: Sequence[LoopStmt], arg: Nat) -> Nat:
    """Reference interpreter; the loop count is fixed at loop entry."""
    regs: dict[int, int] = {0: arg}
    _run_loop_stmts(stmts, regs)
    return regs.get(0, 0)


def _run_loop_stmts(stmts, regs) -> None:
    for st in stmts:
        if isinstance(st, Inc):
            regs[st.reg] = regs.get(st.reg, 0) + 1
        elif isinstance(st, ZeroR):
            regs[st.reg] = 0
        elif isinstance(st, Copy):
            regs[st.dst] = regs.get(st.src, 0)
        else:
            for _ in range(regs.get(st.reg, 0)):
                _run_loop_stmts(st.body, regs)


def loop_step_bound(stmts: Sequence[LoopStmt], arg: Nat) -> Nat:
    """Exact step count of the compiled machine code on `arg`."""
    regs: dict[int, int] = {0: arg}
    return _cost_stmts(stmts, regs)


def _cost_stmts(stmts, regs) -> int:
    cost = 0
    for st in stmts:
        if isinstance(st, Inc):
            regs[st.reg] = regs.get(st.reg, 0) + 1
            cost += 1
        elif isinstance(st, ZeroR):
            regs[st.reg] = 0
            cost += 1
        elif isinstance(st, Copy):
            regs[st.dst] = regs.get(st.src, 0)
            cost += 1
        else:
            iters = regs.get(st.reg, 0)
            cost += 3
            for _ in range(iters):
                cost += 3 + _cost_stmts(st.body, regs)
    return cost


@dataclass(frozen=True)
class CompiledLoop:
    stmts: tuple
    program: Program
    index: ProgramIndex

    def step_bound(self, arg: Nat) -> Nat:
        return loop_step_bound(self.stmts, arg)


class LoopCompiler:
    """Compiles loop programs to machine indices and records the image."""

    def __init__(self):
        self._image: dict[ProgramIndex, CompiledLoop] = {}

    def compile(self, stmts: Sequence[LoopStmt]) -> CompiledLoop:
        stmts = tuple(stmts)
        base = max(_loop_regs(stmts), default=-1) + 1
        a = _Asm()
        self._emit(a, stmts, base, 0)
        program = a.assemble()
        index = encode(program)
        compiled = CompiledLoop(stmts, program, index)
        self._image[index] = compiled
        return compiled

    def _emit(self, a: _Asm, stmts, base: int, depth: int) -> None:
        for st in stmts:
            if isinstance(st, Inc):
                a.emit("S", st.reg)
            elif isinstance(st, ZeroR):
                a.emit("Z", st.reg)
            elif isinstance(st, Copy):
                a.emit("T", st.src, st.dst)
            else:
                snap = base + 2 * depth
                cnt = base + 2 * depth + 1
                top = _fresh("lt")
                end = _fresh("le")
                a.emit("T", st.reg, snap)
                a.emit("Z", cnt)
                a.label(top)
                a.emit("J", cnt, snap, end)
                self._emit(a, st.body, base, depth + 1)
                a.emit("S", cnt)
                a.emit("J", 0, 0, top)
                a.label(end)

    @property
    def image(self) -> dict[ProgramIndex, CompiledLoop]:
        return dict(self._image)

    def indices(self) -> list[ProgramIndex]:
        return sorted(self._image)


default_loop_compiler = LoopCompiler()


def compile_loop(stmts: Sequence[LoopStmt]) -> ProgramIndex:
    """Compile with the shared default compiler (records the image)."""
    return default_loop_compiler.compile(stmts).index


# ---------------------------------------------------------------------------
# Table programs: finite prefix dispatch with a constant or cyclic tail.
# These realize eventually periodic sequences as machine code.


def value_table_program(prefix: Sequence[Nat], const: Nat | None = None,
                        word: Sequence[Nat] | None = None) -> Program:
    if (const is None) == (word is None):
        raise ValueError("exactly one of const and word")
    if word is not None and not word:
        raise ValueError("word must be nonempty")
    if word is not None and len(word) == 1:
        const, word = word[0], None
    a = _Asm()

    def block(values: Nat, last: bool) -> None:
        a.emit("Z", 0)
        for _ in range(values):
            a.emit("S", 0)
        if not last:
            a.emit("J", 0, 0, "end")

    if word is not None:
        for _ in range(len(word)):
            a.emit("S", 3)
    for j in range(len(prefix)):
        a.emit("J", 0, 1, f"set{j}")
        a.emit("S", 1)
    if const is not None:
        block(const, last=not prefix)
    else:
        # position counter R1 == len(prefix); walk to n cycling R2 mod |word|
        a.label("cyc")
        a.emit("J", 1, 0, "disp")
        a.emit("S", 1)
        a.emit("S", 2)
        a.emit("J", 2, 3, "wrap")
        a.emit("J", 0, 0, "cyc")
        a.label("wrap")
        a.emit("Z", 2)
        a.emit("J", 0, 0, "cyc")
        a.label("disp")
        # R5 counts 0..w-2 as comparand; fallthrough lands in the last wset
        for t in range(len(word) - 1):
            if t:
                a.emit("S", 5)
            a.emit("J", 2, 5, f"wset{t}")
        a.label(f"wset{len(word) - 1}")
        block(word[-1], last=False)
        for t, v in enumerate(word[:-1]):
            a.label(f"wset{t}")
            block(v, last=not prefix and t == len(word) - 2)
    for j, v in enumerate(prefix):
        a.label(f"set{j}")
        block(v, last=j == len(prefix) - 1)
    a.label("end")
    return a.assemble()


def value_table_budget(prefix: Sequence[Nat], const: Nat | None,
                       word: Sequence[Nat] | None, arg: Nat) -> Nat:
    values = list(prefix) + ([const] if const is not None else list(word))
    top = max(values) if values else 0
    wlen = len(word) if word is not None else 0
    return 3 * wlen + 2 * len(prefix) + 8 * (arg + 1) + top + 12


# ---------------------------------------------------------------------------
# Two handmade programs over pair codes, used as tupled-family examples.


def unpair_first_program() -> Program:
    """Computes n -> unpair(n)[0] by walking pair codes in order."""
    a = _Asm()
    # R1 probe code, R2 diagonal, R3 offset within diagonal
    a.label("cell")
    a.emit("J", 1, 0, "found")
    a.emit("S", 1)
    a.emit("J", 3, 2, "newdiag")
    a.emit("S", 3)
    a.emit("J", 0, 0, "cell")
    a.label("newdiag")
    a.emit("S", 2)
    a.emit("Z", 3)
    a.emit("J", 0, 0, "cell")
    a.label("found")
    # R0 := R2 - R3
    a.emit("Z", 4)
    a.emit("T", 3, 5)
    a.label("sub")
    a.emit("J", 5, 2, "out")
    a.emit("S", 4)
    a.emit("S", 5)
    a.emit("J", 0, 0, "sub")
    a.label("out")
    a.emit("T", 4, 0)
    return a.assemble()


def diagonal_program() -> Program:
    """Computes n -> x + y where (x, y) = unpair(n)."""
    a = _Asm()
    a.label("cell")
    a.emit("J", 1, 0, "found")
    a.emit("S", 1)
    a.emit("J", 3, 2, "newdiag")
    a.emit("S", 3)
    a.emit("J", 0, 0, "cell")
    a.label("newdiag")
    a.emit("S", 2)
    a.emit("Z", 3)
    a.emit("J", 0, 0, "cell")
    a.label("found")
    a.emit("T", 2, 0)
    return a.assemble()


def pair_walk_budget(arg: Nat) -> Nat:
    return 10 * (arg + 1) + 16


# ---------------------------------------------------------------------------
# Stride tupling: t(s*k + j) = body_j applied to k.  The cheap alternative
# to pair tupling; component extraction composes with precompose_affine
# and stays representable, which the pair walker cannot (its 15
# instructions plus the s_const macro overrun the emission ceiling).


def stride_tuple_program(bodies: Sequence[Program]) -> Program:
    """Interleaves len(bodies) sequences at stride len(bodies).

    Each body computes one component from the cell number in R2 into R0
    and must be straight-line (no jumps) and keep off R1 and R2: the
    dispatch header walks R1 through 0, 1, 2, ... against the input to
    split it as s*k + j, counting k in R2.
    """
    s = len(bodies)
    if s < 1:
        raise ValueError("need at least one component body")
    written = {"Z": 0, "S": 0, "T": 1, "EVB": 3}
    for b in bodies:
        for ins in b.instructions:
            if ins.op == "J":
                raise ValueError("component bodies must be straight-line")
            if ins.args[written[ins.op]] in (1, 2):
                raise ValueError("component bodies must not write R1 or R2")
    length = (1 if s == 1 else 2 * s + 2) + sum(len(b) for b in bodies) + (s - 1)
    _check_emit_length(length, f"stride tuple over {s} components")
    a = _Asm()
    if s == 1:
        a.emit("T", 0, 2)
        for ins in bodies[0].instructions:
            a.emit(ins.op, *ins.args)
        return a.assemble()
    a.label("cell")
    for j in range(s):
        a.emit("J", 0, 1, f"b{j}")
        a.emit("S", 1)
    a.emit("S", 2)
    a.emit("J", 0, 0, "cell")
    for j, b in enumerate(bodies):
        a.label(f"b{j}")
        for ins in b.instructions:
            a.emit(ins.op, *ins.args)
        if j < s - 1:
            a.emit("J", 0, 0, "end")
    a.label("end")
    return a.assemble()


def stride_tuple_budget(stride: Nat, arg: Nat, body_bound: Nat) -> Nat:
    """Step bound for stride_tuple_program at input `arg`."""
    if stride == 1:
        return body_bound + 2
    return (arg // stride + 2) * (2 * stride + 2) + body_bound + 2
