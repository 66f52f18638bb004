"""Prefix codes, maximality, and the two-move block encodings.

A code is a finite set of words over symbols 0..k-1.  Maximality is
decided by two independent routes that must agree: the exact Kraft sum
and tree completeness.  The block encoding collapses each (mover,
responder) pair of a position into one symbol via a per-stage mixing
function; positions consistent with different mover strategies collapse
to equal words, which is what breaks maximality of the image.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .criteria import is_minimal_size
from .solver import DEFAULT_BUDGET, GameInstance, Strategy, solve
from .tree import Position, PositionSet, as_position, is_prefix

ENUMERATION_BUDGET = 1 << 20


class BudgetError(RuntimeError):
    """Enumeration budget exceeded."""


@dataclass(frozen=True)
class PrefixCode:
    """Finite word set over symbols 0..alphabet_size-1; prefix-free when validated."""

    words: frozenset[Position]
    alphabet_size: int

    def __post_init__(self) -> None:
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be at least 2")
        for w in self.words:
            if any(a >= self.alphabet_size for a in w):
                raise ValueError(f"symbol out of range in {w!r}")

    @classmethod
    def of(cls, words: Iterable[Iterable[int]], alphabet_size: int) -> "PrefixCode":
        return cls(frozenset(as_position(w) for w in words), alphabet_size)

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def sorted_words(self) -> list[Position]:
        return sorted(self.words)

    def __iter__(self) -> Iterator[Position]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)


def is_prefix_code(code: PrefixCode) -> bool:
    """True iff no word is a proper prefix of another word."""
    words = code.words
    for w in words:
        for j in range(len(w)):
            if w[:j] in words:
                return False
    return True


def is_bifix_code(code: PrefixCode) -> bool:
    """Prefix-free and suffix-free."""
    if not is_prefix_code(code):
        return False
    for w in code.words:
        for j in range(1, len(w) + 1):
            if w[j:] in code.words and w[j:] != w:
                return False
    return True


def _maximal_by_kraft(code: PrefixCode) -> bool:
    k = code.alphabet_size
    total = sum((Fraction(1, k ** len(w)) for w in code.words), Fraction(0))
    return total == 1


def _maximal_by_completeness(code: PrefixCode) -> bool:
    # every one-symbol extension of a proper prefix of a codeword must stay
    # comparable with the code, otherwise that extension could be added
    if not code.words:
        return False
    prefixes = {w[:j] for w in code.words for j in range(len(w))}
    cover = prefixes | code.words
    return all(
        p + (a,) in cover for p in prefixes for a in range(code.alphabet_size)
    )


def is_maximal(code: PrefixCode) -> bool:
    """Maximality of a prefix code, decided by two independent routes.

    Route (a): the exact Kraft sum equals 1.  Route (b): the codeword tree
    is complete.  Both run on every call; disagreement is an internal
    failure, not a result.
    """
    if not is_prefix_code(code):
        raise ValueError("is_maximal requires a prefix code")
    by_kraft = _maximal_by_kraft(code)
    by_tree = _maximal_by_completeness(code)
    if by_kraft != by_tree:
        raise AssertionError(
            f"maximality routes disagree: kraft={by_kraft} completeness={by_tree}"
        )
    return by_kraft


class XVector:
    """Per-stage symbol mixers for the block encoding.

    Coordinate i is a function on symbols given as a lookup table; the
    encoded symbol of block i is entries[i][mover] + responder (mod k).
    The normalized form fixes entry(0) = 0; the full function space is
    used only for cross-validation.
    """

    def __init__(self, entries: Iterable[Iterable[int]], alphabet_size: int | None = None):
        self.entries: tuple[tuple[int, ...], ...] = tuple(
            tuple(int(v) for v in e) for e in entries
        )
        if self.entries:
            k = len(self.entries[0])
        elif alphabet_size is not None:
            k = alphabet_size
        else:
            raise ValueError("alphabet size needed for a depth-0 vector")
        if alphabet_size is not None and alphabet_size != k:
            raise ValueError("entry tables do not match the declared alphabet size")
        for e in self.entries:
            if len(e) != k:
                raise ValueError("all entry tables must have alphabet size entries")
            if any(v < 0 or v >= k for v in e):
                raise ValueError(f"table value out of range in {e!r}")
        self.alphabet_size = k

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def is_normalized(self) -> bool:
        return all(e[0] == 0 for e in self.entries)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "XVector":
        """Binary shorthand: bit b is the table (0, b)."""
        return cls(tuple((0, int(b)) for b in bits), alphabet_size=2)

    @classmethod
    def zero(cls, depth: int, alphabet_size: int) -> "XVector":
        return cls(((0,) * alphabet_size,) * depth, alphabet_size=alphabet_size)

    def to_json_dict(self) -> dict:
        return {"depth": self.depth, "entries": [list(e) for e in self.entries]}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XVector):
            return NotImplemented
        return (self.entries, self.alphabet_size) == (other.entries, other.alphabet_size)

    def __hash__(self) -> int:
        return hash((self.entries, self.alphabet_size))

    def __repr__(self) -> str:
        return f"XVector({self.entries!r})"


def cx_encode(p: Position, x: XVector, k: int) -> Position:
    """Collapse each two-move block of p into one symbol: x_i(a) + b (mod k)."""
    blocks = len(p) // 2
    if x.depth < blocks:
        raise ValueError(f"vector depth {x.depth} too small for {blocks} blocks")
    return tuple((x.entries[i][p[2 * i]] + p[2 * i + 1]) % k for i in range(blocks))


def cx_code(Z: PositionSet, x: XVector, k: int) -> PrefixCode:
    """Image of the set under the block encoding; duplicates collapse."""
    return PrefixCode(frozenset(cx_encode(p, x, k) for p in Z), k)


def _tables(k: int, full: bool) -> list[tuple[int, ...]]:
    if full:
        return sorted(itertools.product(range(k), repeat=k))
    return sorted((0,) + rest for rest in itertools.product(range(k), repeat=k - 1))


def xvectors_enumerate(
    k: int, depth: int, full: bool = False, budget: int = ENUMERATION_BUDGET
) -> list[XVector]:
    """All mixing vectors of the given depth, normalized unless ``full``.

    Normalization keeps one representative per equivalence class (the
    table value at 0 can be absorbed into the encoded symbol), shrinking
    the space from k^(k*depth) to k^((k-1)*depth).
    """
    tables = _tables(k, full)
    count = len(tables) ** depth
    if count > budget:
        raise BudgetError(f"{count} vectors exceed the budget {budget}")
    return [
        XVector(combo, alphabet_size=k)
        for combo in itertools.product(tables, repeat=depth)
    ]


@dataclass
class EquivalenceReport:
    """Outcome of the winner/maximality equivalence check."""

    winner: int
    all_maximal: bool
    equiv_holds: bool
    witness: XVector | None
    checked: int

    def to_json_dict(self) -> dict:
        return {
            "winner": self.winner,
            "all_maximal": self.all_maximal,
            "equiv_holds": self.equiv_holds,
            "witness": self.witness.to_json_dict() if self.witness else None,
            "checked": self.checked,
        }


def equivalence_check(
    Z: PositionSet,
    k: int,
    full: bool = False,
    budget: int = ENUMERATION_BUDGET,
    solve_budget: int = DEFAULT_BUDGET,
) -> EquivalenceReport:
    """Compare the solved winner with maximality of every block-code image.

    Requires a minimal-size antichain.  The expected relation: Player 1
    wins iff the image is a maximal prefix code for every mixing vector.
    Vectors are checked in lexicographic table order, so a reported
    witness (an image that is not a maximal prefix code) is the least one.
    """
    if not Z.antichain:
        raise ValueError("equivalence_check requires an antichain")
    if not is_minimal_size(Z, k):
        raise ValueError("equivalence_check requires a minimal-size set")
    winner = solve(GameInstance(k, Z), budget=solve_budget).winner
    depth = max((len(p) // 2 for p in Z), default=0)
    witness = None
    checked = 0
    for x in xvectors_enumerate(k, depth, full=full, budget=budget):
        checked += 1
        image = cx_code(Z, x, k)
        if not (is_prefix_code(image) and is_maximal(image)):
            witness = x
            break
    all_maximal = witness is None
    return EquivalenceReport(
        winner=winner,
        all_maximal=all_maximal,
        equiv_holds=(winner == 1) == all_maximal,
        witness=witness,
        checked=checked,
    )


def build_Z_from_code(code: PrefixCode, s1: Strategy) -> PositionSet:
    """Interleave every codeword with the moves s1 prescribes along the way.

    The resulting position set has s1 as a winning strategy exactly when
    the code is maximal, and is minimal-size in that case.
    """
    out = []
    for word in code.words:
        p: Position = ()
        for symbol in word:
            p = p + (s1.move(p), symbol)
        out.append(p)
    return PositionSet(out)


def extract_generating_subset(
    Z: PositionSet, x: XVector, k: int, solve_budget: int = DEFAULT_BUDGET
) -> PositionSet:
    """Small subset whose block-code image already generates a finite-index subgroup.

    Requires a minimal-size Player-1 win.  Start from a maximal-length
    image word (lexicographic tie-break), include for each level j and
    each symbol a != c[j] a word extending c[:j] + (a,), and map the
    chosen words back to positions.  The subset has at most
    max_len * (k-1) + 1 elements.
    """
    if not is_minimal_size(Z, k):
        raise ValueError("extract_generating_subset requires a minimal-size set")
    report = solve(GameInstance(k, Z), budget=solve_budget)
    if report.winner != 1:
        raise ValueError("extract_generating_subset requires a Player-1 win")
    image = cx_code(Z, x, k)
    if not (is_prefix_code(image) and is_maximal(image)):
        raise AssertionError("image of a winning minimal-size set must be maximal")
    representative: dict[Position, Position] = {}
    for p in sorted(Z.positions):
        word = cx_encode(p, x, k)
        representative.setdefault(word, p)
    words = sorted(image.words)
    longest = max(len(w) for w in words)
    c1 = min(w for w in words if len(w) == longest)
    chosen = {c1}
    for j in range(len(c1), 0, -1):
        stem = c1[: j - 1]
        for a in range(k):
            if a == c1[j - 1]:
                continue
            extension = stem + (a,)
            candidates = [w for w in words if is_prefix(extension, w)]
            chosen.add(min(candidates))
    bound = longest * (k - 1) + 1
    if len(chosen) > bound:
        raise AssertionError(f"generating subset has {len(chosen)} words, bound {bound}")
    return PositionSet(representative[w] for w in chosen)


def brute_force_maximal(code: PrefixCode) -> bool:
    """Independent maximality oracle: try to adjoin any short word.

    A prefix code is non-maximal iff some word of length at most
    max_length + 1 can be added while staying prefix-free.
    """
    if not is_prefix_code(code):
        raise ValueError("brute_force_maximal requires a prefix code")
    k = code.alphabet_size
    for length in range(code.max_length + 2):
        for w in itertools.product(range(k), repeat=length):
            if not any(is_prefix(c, w) or is_prefix(w, c) for c in code.words):
                return False
    return True
