"""Greedy Fibonacci (Zeckendorf) numerals.

A natural number is written as a sum of pairwise non-adjacent Fibonacci
numbers taken from the sequence 1, 2, 3, 5, 8, ... (position j of a word
weighs ``fib(j)``, counting from 1 at the low end).  The greedy choice of
the largest term first makes the representation unique, and uniqueness is
equivalent to the word never containing two adjacent 1 digits.

Words are stored with the lowest digit first so that increment, decrement
and the low-to-high digit scans used by the tree navigation are natural
index arithmetic.  ``str()`` renders the usual high-to-low digit string,
with ``"0"`` for zero.

>>> str(encode(12))
'10101'
>>> decode(parse('10101'))
12
>>> str(succ(parse('1010')))
'10000'
"""

from __future__ import annotations

from dataclasses import dataclass

_FIBS = [1, 1, 2]  # _FIBS[j] = weight of digit position j; index 0 unused


def fib(j: int) -> int:
    """Weight of digit position j: fib(1)=1, fib(2)=2, fib(j)=fib(j-1)+fib(j-2)."""
    if j < 1:
        raise ValueError(f"digit positions start at 1, got {j}")
    while len(_FIBS) <= j:
        _FIBS.append(_FIBS[-1] + _FIBS[-2])
    return _FIBS[j]


@dataclass(frozen=True)
class FibWord:
    """An immutable digit word; ``bits[k]`` is the digit of weight fib(k+1)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if self.bits and self.bits[-1] != 1:
            raise ValueError("top digit of a non-empty word must be 1")
        for a, b in zip(self.bits, self.bits[1:]):
            if a == 1 and b == 1:
                raise ValueError("adjacent 1 digits are not a valid word")

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        return "".join(str(d) for d in reversed(self.bits))

    def digit(self, j: int) -> int:
        """Digit at position j (1-based from the low end); 0 beyond the top."""
        return self.bits[j - 1] if 1 <= j <= len(self.bits) else 0


ZERO = FibWord(())
ONE = FibWord((1,))


def parse(text: str) -> FibWord:
    """Read a high-to-low digit string; "0" and "" denote zero."""
    if text in ("", "0"):
        return ZERO
    if set(text) - {"0", "1"}:
        raise ValueError(f"not a binary digit string: {text!r}")
    if text[0] != "1":
        raise ValueError(f"leading zeros are not canonical: {text!r}")
    return FibWord(tuple(int(c) for c in reversed(text)))


def encode(n: int) -> FibWord:
    """Greedy representation of n >= 0: always take the largest fitting term."""
    if n < 0:
        raise ValueError(f"cannot encode negative {n}")
    if n == 0:
        return ZERO
    k = 1
    while fib(k + 1) <= n:
        k += 1
    bits = [0] * k
    rest = n
    for j in range(k, 0, -1):
        if fib(j) <= rest:
            bits[j - 1] = 1
            rest -= fib(j)
    return FibWord(tuple(bits))


def decode(w: FibWord) -> int:
    """Weighted digit sum of a valid word."""
    return sum(fib(j + 1) for j, d in enumerate(w.bits) if d)


def succ(w: FibWord) -> FibWord:
    """The word of decode(w) + 1, by local carry rewriting.

    Adding 1 touches only the two lowest digits; a created adjacent pair
    (j, j+1) merges upward into position j+2, so the rewrite is linear in
    the word length and never re-encodes.
    """
    bits = list(w.bits) + [0, 0]
    if bits[0] == 1:
        # ...01 + 1 = ...10 (two units make the weight-2 digit)
        bits[0], bits[1] = 0, 1
        carry_at = 1
    elif bits[1] == 1:
        # ...10 + 1: digits of weight 2 and 1 merge into weight 3
        bits[1], bits[2] = 0, 1
        carry_at = 2
    else:
        bits[0] = 1
        carry_at = 0
    # Merge any adjacent pair produced by the carry: fib(j) + fib(j+1) = fib(j+2).
    j = carry_at
    while j + 1 < len(bits) and bits[j] == 1 and bits[j + 1] == 1:
        bits[j] = bits[j + 1] = 0
        bits[j + 2] = 1
        j += 2
    while bits and bits[-1] == 0:
        bits.pop()
    return FibWord(tuple(bits))


def pred(w: FibWord) -> FibWord:
    """The word of decode(w) - 1; raises on the zero word."""
    if not w.bits:
        raise ValueError("cannot decrement zero")
    bits = list(w.bits)
    if bits[0] == 1:
        bits[0] = 0
    elif bits[1] == 1:
        # weight 2 becomes weight 1
        bits[1], bits[0] = 0, 1
    else:
        # Lowest set digit is at position k >= 3 (index k-1):
        # fib(k) - 1 = fib(k-1) + fib(k-3) + ... down to weight 2 or 1.
        k = bits.index(1) + 1
        bits[k - 1] = 0
        j = k - 1
        while j >= 1:
            bits[j - 1] = 1
            j -= 2
    while bits and bits[-1] == 0:
        bits.pop()
    return FibWord(tuple(bits))


def father(w: FibWord) -> FibWord:
    """Tree father of the node numbered decode(w); defined for values >= 2.

    A node ending in two zero digits is somebody's preferred son, and a node
    ending in a set low digit is the last son of its father: both drop their
    two lowest digits.  The remaining shape ends in 10 and is first son of
    the node above the next number, reached through one increment.
    """
    if decode(w) < 2:
        raise ValueError("the root and the zero word have no tree father")
    if w.digit(1) == 1 or w.digit(2) == 0:
        return FibWord(w.bits[2:])
    return FibWord(succ(w).bits[2:])


def preferred_son(w: FibWord) -> FibWord:
    """The son whose word is this word with two zero digits appended."""
    if not w.bits:
        raise ValueError("the zero word has no sons")
    return FibWord((0, 0) + w.bits)


def level_of(w: FibWord) -> int:
    """Tree depth of the node (root = 0).  Words of level n have 2n or 2n+1 digits."""
    return len(w.bits) // 2


def status_of(w: FibWord) -> str:
    """'white' or 'black' by the branching rules, read off the digits.

    A preferred son keeps its father's status, so trailing 00 pairs strip
    away; what remains ends in a set low digit (a last son, white) or in
    10 (a first son, black).  The bare root word is white.
    """
    bits = w.bits
    if not bits:
        raise ValueError("the zero word is not a tree node")
    while len(bits) >= 3 and bits[0] == 0 and bits[1] == 0:
        bits = bits[2:]
    return "white" if bits[0] == 1 else "black"


def branch_of(w: FibWord) -> str:
    """'root', 'left', 'right' or 'middle' position within the sector tree.

    The first node of level n is the single term fib(2n); the last is the
    alternating sum fib(2n+1) + fib(2n-1) + ... + fib(1).
    """
    bits = w.bits
    if not bits:
        raise ValueError("the zero word is not a tree node")
    if bits == (1,):
        return "root"
    set_positions = {j + 1 for j, d in enumerate(bits) if d}
    if set_positions == {len(bits)} and len(bits) % 2 == 0:
        return "left"
    if len(bits) % 2 == 1 and set_positions == set(range(1, len(bits) + 1, 2)):
        return "right"
    return "middle"
