"""
Named spaces used throughout the toolkit and the --builtin parser.

Labels follow the usual pictures: X1..X4 and S on points "1".."4", the
pseudocircles C_n on "1^k", "2^k" (k = 0..n-1, index order 1^0, 2^0, 1^1, ...),
chains O_n on "1".."n" with 1 < 2 < ... < n, and accordions on "1".."n"
numbered along the walk.
"""

import logging
from typing import List, Sequence

from common.errors import MalformedInput
from modules.poset.poset_core import Space, opposite_space, space_from_relations

logger = logging.getLogger(__name__)


def x1() -> Space:
    """4 below each of 1, 2, 3."""
    return space_from_relations(4, [(3, 0), (3, 1), (3, 2)])


def x2() -> Space:
    return opposite_space(x1())


def x3() -> Space:
    """1 and 2 above 3, 3 above 4."""
    return space_from_relations(4, [(2, 0), (2, 1), (3, 2)])


def x4() -> Space:
    return opposite_space(x3())


def pseudo_square() -> Space:
    """S: 1 on top, 4 at the bottom, 2 and 3 incomparable in between."""
    return space_from_relations(4, [(1, 0), (2, 0), (3, 1), (3, 2)])


def cycle_space(n: int) -> Space:
    """
    Pseudocircle C_n with minima 1^k and maxima 2^k.

    2^k lies above 1^k and 1^(k+1 mod n).
    """
    if n < 2:
        raise MalformedInput("C_n needs n >= 2")
    labels = []
    for k in range(n):
        labels.extend([f"1^{k}", f"2^{k}"])
    pairs = []
    for k in range(n):
        top = 2 * k + 1
        pairs.append((2 * k, top))
        pairs.append((2 * ((k + 1) % n), top))
    return space_from_relations(2 * n, pairs, labels)


def chain(n: int) -> Space:
    """Totally ordered space O_n."""
    if n < 1:
        raise MalformedInput("O_n needs n >= 1")
    return space_from_relations(n, [(i, i + 1) for i in range(n - 1)])


def accordion(ns: Sequence[int]) -> Space:
    """
    Accordion O_{n_1} v O_{n_2} v ... v O_{n_m} with points "1".."n" in walk order.

    Odd-numbered chains climb along the walk, even-numbered ones descend,
    consecutive chains share their end points.
    """
    ns = [int(x) for x in ns]
    m = len(ns)
    if m == 0 or m % 2:
        raise MalformedInput(f"accordion needs an even, positive number of chains, got {ns}")
    if any(x < 1 for x in ns) or any(x < 2 for x in ns[1:-1]):
        raise MalformedInput(f"accordion chain lengths must be >= 1, and >= 2 inside: {ns}")
    total = sum(ns) - (m - 1)
    pairs = []
    start = 0
    for i, size in enumerate(ns, start=1):
        for j in range(start, start + size - 1):
            pairs.append((j, j + 1) if i % 2 else (j + 1, j))
        start += size - 1
    return space_from_relations(total, pairs)


MODEL_NAMES = ("X1", "X2", "X3", "X4", "S")


def model_space(name: str) -> Space:
    return {"X1": x1, "X2": x2, "X3": x3, "X4": x4, "S": pseudo_square}[name]()


def parse_builtin(text: str) -> Space:
    """
    Parse X1|X2|X3|X4|S|Cn:<n>|On:<n>|W:<n1,...>.

    Raises:
        MalformedInput: unknown name or bad parameters
    """
    raw = text.strip()
    head, _, arg = raw.partition(":")
    key = head.strip().upper()
    try:
        if key in MODEL_NAMES and not arg:
            return model_space(key)
        if key == "CN":
            return cycle_space(int(arg))
        if key == "ON":
            return chain(int(arg))
        if key == "W":
            return accordion(_int_list(arg))
    except ValueError:
        raise MalformedInput(f"bad parameters in builtin space {raw!r}")
    raise MalformedInput(f"unknown builtin space {raw!r}")


def _int_list(arg: str) -> List[int]:
    return [int(x) for x in arg.replace(" ", "").split(",") if x]
