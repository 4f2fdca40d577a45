"""Linear path schemes and cycle arithmetic.

A scheme is an expression ``a0 b1* a1 ... bk* ak`` over the transitions of an
automaton, where the ``a`` pieces are plain transition sequences and each
``b`` piece is a cycle.  A concrete path is shaped by the scheme if it
instantiates every star with a concrete repetition count.  Schemes are purely
syntactic: guard feasibility is checked only when a shaped path is walked
against a concrete starting counter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .oca import Configuration, Oca, ZERO


@dataclass(frozen=True)
class CycleStats:
    """Effect and length of a cycle; the slope is their ratio."""

    effect: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("cycle length must be positive")
        if abs(self.effect) > self.length:
            raise ValueError("effect cannot exceed length (steps are -1/0/+1)")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.effect, self.length)


@dataclass(frozen=True)
class Lps:
    """``alpha0`` then ``segments`` of (cycle, following path), all state-chained."""

    start_state: int
    alpha0: tuple[int, ...]
    segments: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def flat_length(self) -> int:
        return len(self.alpha0) + sum(len(b) + len(a) for b, a in self.segments)

    @property
    def size(self) -> int:
        return len(self.segments)

    def pieces(self) -> list[tuple[str, tuple[int, ...]]]:
        out: list[tuple[str, tuple[int, ...]]] = [("path", self.alpha0)]
        for beta, alpha in self.segments:
            out.append(("cycle", beta))
            out.append(("path", alpha))
        return out

    def end_state(self, oca: Oca) -> int:
        state = self.start_state
        for _, seq in self.pieces():
            for idx in seq:
                state = oca.transitions[idx].dst
        return state

    def check_chained(self, oca: Oca) -> None:
        """Raise if pieces are not state-compatible or a cycle does not close."""
        state = self.start_state
        for idx in self.alpha0:
            t = oca.transitions[idx]
            if t.src != state:
                raise ValueError("alpha0 breaks the state chain")
            state = t.dst
        for beta, alpha in self.segments:
            if not beta:
                raise ValueError("empty cycle")
            cyc_state = state
            for idx in beta:
                t = oca.transitions[idx]
                if t.src != cyc_state:
                    raise ValueError("cycle breaks the state chain")
                cyc_state = t.dst
            if cyc_state != state:
                raise ValueError("cycle does not return to its start state")
            for idx in alpha:
                t = oca.transitions[idx]
                if t.src != state:
                    raise ValueError("alpha breaks the state chain")
                state = t.dst

    def cycle_stats(self, oca: Oca) -> list[CycleStats]:
        out = []
        for beta, _ in self.segments:
            eff = sum(oca.transitions[i].effect for i in beta)
            out.append(CycleStats(eff, len(beta)))
        return out


def basic_slopes(b: int) -> list[Fraction]:
    """All distinct ratios x/y with |x| <= y <= b, ascending."""
    if b < 1:
        raise ValueError("b must be at least 1")
    values = {Fraction(x, y) for y in range(1, b + 1) for x in range(-y, y + 1)}
    return sorted(values)


def negative_basic_slopes(b: int) -> list[Fraction]:
    return [s for s in basic_slopes(b) if s < 0]


def combine_cycles_ratio(
    c1: CycleStats, c2: CycleStats, c3: CycleStats
) -> tuple[int, int]:
    """Repetition counts (k1, k3) of the outer cycles whose combined
    effect/length ratio equals the middle cycle's slope.

    Requires slope(c1) <= slope(c2) <= slope(c3); the result is reduced by the
    gcd and never both zero.
    """
    if not (c1.slope <= c2.slope <= c3.slope):
        raise ValueError("cycle slopes must be ordered")
    if c1.slope == c2.slope:
        return (1, 0)
    if c3.slope == c2.slope:
        return (0, 1)
    k1 = c2.length * c3.effect - c3.length * c2.effect
    k3 = c1.length * c2.effect - c2.length * c1.effect
    g = math.gcd(k1, k3)
    return (k1 // g, k3 // g)


def adjust_length(
    c1: CycleStats, c2: CycleStats, x: int, b: int | None = None
) -> tuple[int, int]:
    """Signed repetition deltas (k1, k2) that change a path's length by
    exactly ``x`` while keeping its net effect unchanged.

    Positive entries add copies, negative remove.  Requires strictly ordered
    slopes.  When ``b`` is given, enforces the stronger divisibility
    x = 0 mod lcm[1..2b^2] (which guarantees integrality); otherwise
    integrality itself is checked.
    """
    if not c1.slope < c2.slope:
        raise ValueError("cycle slopes must be strictly ordered")
    det = c2.effect * c1.length - c1.effect * c2.length
    assert det > 0
    if b is not None:
        if max(c1.length, c2.length) > b:
            raise ValueError("cycle longer than the configured bound")
        modulus = math.lcm(*range(1, 2 * b * b + 1))
        if x % modulus:
            raise ValueError(f"length delta must be divisible by lcm[1..{2 * b * b}]")
    if (x * c2.effect) % det or (x * c1.effect) % det:
        raise ValueError("length delta not divisible by the cycle determinant")
    k1 = x * c2.effect // det
    k2 = -x * c1.effect // det
    return (k1, k2)


def _simple_cycles(oca: Oca, state: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """Simple cycles at ``state`` (no repeated intermediate state), shortest-
    lexicographic order on transition index sequences."""
    by_src: dict[int, list[int]] = {}
    for i, t in enumerate(oca.transitions):
        by_src.setdefault(t.src, []).append(i)

    def dfs(current: int, path: list[int], visited: set[int]) -> Iterator[tuple[int, ...]]:
        if len(path) >= max_len:
            return
        for idx in by_src.get(current, ()):
            dst = oca.transitions[idx].dst
            if dst == state:
                yield tuple(path + [idx])
            elif dst not in visited:
                visited.add(dst)
                yield from dfs(dst, path + [idx], visited)
                visited.remove(dst)

    yield from dfs(state, [], {state})


def enumerate_lps(
    oca: Oca,
    start_state: int,
    end_state: int,
    flat_len_bound: int,
    size_bound: int,
) -> Iterator[Lps]:
    """Every scheme from start to end within both bounds, exactly once,
    in a deterministic depth-first order over transition indices."""
    by_src: dict[int, list[int]] = {}
    for i, t in enumerate(oca.transitions):
        by_src.setdefault(t.src, []).append(i)

    def rec(
        state: int, alpha0: list[int],
        segments: list[tuple[tuple[int, ...], list[int]]],
        flat_left: int, size_left: int,
    ) -> Iterator[Lps]:
        if state == end_state:
            yield Lps(
                start_state,
                tuple(alpha0),
                tuple((beta, tuple(alpha)) for beta, alpha in segments),
            )
        tail = alpha0 if not segments else segments[-1][1]
        if flat_left > 0:
            for idx in by_src.get(state, ()):
                tail.append(idx)
                yield from rec(oca.transitions[idx].dst, alpha0, segments, flat_left - 1, size_left)
                tail.pop()
        if size_left > 0:
            for beta in _simple_cycles(oca, state, flat_left):
                segments.append((beta, []))
                yield from rec(state, alpha0, segments, flat_left - len(beta), size_left - 1)
                segments.pop()

    yield from rec(start_state, [], [], flat_len_bound, size_bound)


def _walk(oca: Oca, config: Configuration, seq: tuple[int, ...]) -> Configuration | None:
    """Apply a transition sequence with guard checks; None if it is invalid."""
    state, counter = config
    for idx in seq:
        t = oca.transitions[idx]
        if t.src != state:
            return None
        if counter == 0:
            if t.guard != ZERO:
                return None
        elif t.guard == ZERO:
            return None
        state, counter = t.dst, counter + t.effect
        assert counter >= 0
    return Configuration(state, counter)


def shaped_reach(
    oca: Oca,
    scheme: Lps,
    start: Configuration,
    target_length: int,
    exp_cap: int,
) -> set[Configuration]:
    """End configurations of valid shaped paths of exactly ``target_length``,
    with every star instantiated at most ``exp_cap`` times."""
    if target_length < 0:
        raise ValueError("target length must be non-negative")
    scheme.check_chained(oca)
    pieces = scheme.pieces()
    results: set[Configuration] = set()

    def rec(i: int, config: Configuration, remaining: int) -> None:
        if i == len(pieces):
            if remaining == 0:
                results.add(config)
            return
        kind, seq = pieces[i]
        if kind == "path":
            if len(seq) <= remaining:
                nxt = _walk(oca, config, seq)
                if nxt is not None:
                    rec(i + 1, nxt, remaining - len(seq))
            return
        clen = len(seq)
        cur: Configuration | None = config
        e = 0
        while True:
            rec(i + 1, cur, remaining - e * clen)
            if e >= exp_cap or (e + 1) * clen > remaining:
                return
            cur = _walk(oca, cur, seq)
            if cur is None:
                return
            e += 1

    if scheme.start_state == start.state:
        rec(0, start, target_length)
    return results


def shaped_witness_exponents(
    oca: Oca,
    scheme: Lps,
    start: Configuration,
    target: Configuration,
    target_length: int,
    exp_cap: int,
) -> tuple[int, ...] | None:
    """One exponent vector whose shaped path reaches ``target``; None if none."""
    pieces = scheme.pieces()

    def rec(i: int, config: Configuration, remaining: int, exps: list[int]):
        if i == len(pieces):
            return tuple(exps) if remaining == 0 and config == target else None
        kind, seq = pieces[i]
        if kind == "path":
            if len(seq) > remaining:
                return None
            nxt = _walk(oca, config, seq)
            return rec(i + 1, nxt, remaining - len(seq), exps) if nxt else None
        clen = len(seq)
        cur: Configuration | None = config
        e = 0
        while True:
            found = rec(i + 1, cur, remaining - e * clen, exps + [e])
            if found:
                return found
            if e >= exp_cap or (e + 1) * clen > remaining:
                return None
            cur = _walk(oca, cur, seq)
            if cur is None:
                return None
            e += 1

    if scheme.start_state != start.state:
        return None
    return rec(0, start, target_length, [])


def analyze_cycle_repetitions(
    oca: Oca, scheme: Lps, exponents: list[int]
) -> dict[Fraction, int]:
    """Aggregate star instantiation counts per cycle slope."""
    if len(exponents) != scheme.size:
        raise ValueError("one exponent per cycle required")
    totals: dict[Fraction, int] = {}
    for (beta, _), e in zip(scheme.segments, exponents):
        eff = sum(oca.transitions[i].effect for i in beta)
        slope = Fraction(eff, len(beta))
        totals[slope] = totals.get(slope, 0) + e
    return totals


def compress_path_with_exponents(
    oca: Oca, start_state: int, path: tuple[int, ...]
) -> tuple[Lps, tuple[int, ...]]:
    """Fold maximal runs of immediately repeated cycles into stars.

    Returns the scheme together with the observed repetition count per star;
    instantiating the stars with those exponents reproduces the path, and the
    scheme's flat length is usually much smaller than the path's.
    """
    states = [start_state]
    for idx in path:
        states.append(oca.transitions[idx].dst)
    alpha0: list[int] = []
    segments: list[tuple[tuple[int, ...], list[int]]] = []
    exponents: list[int] = []
    tail = alpha0
    i = 0
    n = len(path)
    while i < n:
        folded = False
        for length in range(1, (n - i) // 2 + 1):
            if states[i] != states[i + length]:
                continue
            block = path[i : i + length]
            reps = 1
            while (
                i + (reps + 1) * length <= n
                and path[i + reps * length : i + (reps + 1) * length] == block
            ):
                reps += 1
            if reps >= 2:
                segments.append((block, []))
                exponents.append(reps)
                tail = segments[-1][1]
                i += reps * length
                folded = True
                break
        if not folded:
            tail.append(path[i])
            i += 1
    scheme = Lps(start_state, tuple(alpha0), tuple((b, tuple(a)) for b, a in segments))
    return scheme, tuple(exponents)


def compress_path(oca: Oca, start_state: int, path: tuple[int, ...]) -> Lps:
    return compress_path_with_exponents(oca, start_state, path)[0]
