"""Pinned K-group tables and accordion shape generation shared by the tests."""

from typing import Dict, List, Tuple

from modules.kgroups.order_complex import GradedAbelianGroup, Z0, Z1, ZERO

# ── Expected groups in table notation ─────────────────────────────
GROUPS = {
    "0": ZERO,
    "Z": Z0,
    "Z1": Z1,
    "Z1^2": GradedAbelianGroup(odd_rank=2),
}


def parse_table(columns: List[str], rows: Dict[str, List[str]]) -> Dict[Tuple[str, str], GradedAbelianGroup]:
    """{(Y, Z): group} from a row-per-source listing."""
    out = {}
    for y, entries in rows.items():
        assert len(entries) == len(columns), f"row {y} has {len(entries)} entries"
        for z, text in zip(columns, entries):
            out[(y, z)] = GROUPS[text]
    return out


# S(Y, Z) is the union of open simplices with least vertex in Y and greatest in Z.
# For Y = 13 and Z = 1 that is the vertex 1 and the edge 3 < 1, a half-open edge,
# so the group vanishes; for Z = 2 only the open edge 3 < 2 is left, giving Z[1].
# Rows 23 and 123 follow the same way. Degree 0 agrees: {1} is not closed in 13.
X3_COLUMNS = ["4", "34", "134", "234", "3", "1234", "13", "23", "123", "1", "2"]
X3_TABLE = parse_table(X3_COLUMNS, {
    "4":    ["Z", "0", "0", "0", "Z1", "0", "Z1", "Z1", "Z1", "0", "0"],
    "34":   ["Z", "Z", "0", "0", "0", "Z1", "Z1", "Z1", "Z1^2", "Z1", "Z1"],
    "134":  ["Z", "Z", "Z", "0", "0", "0", "0", "Z1", "Z1", "0", "Z1"],
    "234":  ["Z", "Z", "0", "Z", "0", "0", "Z1", "0", "Z1", "Z1", "0"],
    "3":    ["0", "Z", "0", "0", "Z", "Z1", "0", "0", "Z1", "Z1", "Z1"],
    "1234": ["Z", "Z", "Z", "Z", "0", "Z", "0", "0", "0", "0", "0"],
    "13":   ["0", "Z", "Z", "0", "Z", "0", "Z", "0", "0", "0", "Z1"],
    "23":   ["0", "Z", "0", "Z", "Z", "0", "0", "Z", "0", "Z1", "0"],
    "123":  ["0", "Z", "Z", "Z", "Z", "Z", "Z", "Z", "Z", "0", "0"],
    "1":    ["0", "0", "Z", "0", "0", "Z", "Z", "0", "Z", "Z", "0"],
    "2":    ["0", "0", "0", "Z", "0", "Z", "0", "Z", "Z", "0", "Z"],
})

X1_COLUMNS = ["1234", "124", "134", "234", "34", "24", "14", "4", "1", "2", "3"]
X1_TABLE = parse_table(X1_COLUMNS, {
    "1234": ["Z", "Z", "Z", "Z", "Z", "Z", "Z", "Z", "0", "0", "0"],
    "124":  ["0", "Z", "0", "0", "0", "Z", "Z", "Z", "0", "0", "Z1"],
    "134":  ["0", "0", "Z", "0", "Z", "0", "Z", "Z", "0", "Z1", "0"],
    "234":  ["0", "0", "0", "Z", "Z", "Z", "0", "Z", "Z1", "0", "0"],
    "34":   ["Z1", "Z1", "0", "0", "Z", "0", "0", "Z", "Z1", "Z1", "0"],
    "24":   ["Z1", "0", "Z1", "0", "0", "Z", "0", "Z", "Z1", "0", "Z1"],
    "14":   ["Z1", "0", "0", "Z1", "0", "0", "Z", "Z", "0", "Z1", "Z1"],
    "4":    ["Z1^2", "Z1", "Z1", "Z1", "0", "0", "0", "Z", "Z1", "Z1", "Z1"],
    "1":    ["Z", "Z", "Z", "0", "0", "0", "Z", "0", "Z", "0", "0"],
    "2":    ["Z", "Z", "0", "Z", "0", "Z", "0", "0", "0", "Z", "0"],
    "3":    ["Z", "0", "Z", "Z", "Z", "0", "0", "0", "0", "0", "Z"],
})


def accordion_shapes(n_points: int) -> List[Tuple[int, ...]]:
    """Every chain-length tuple (n_1, ..., n_m) describing an accordion with n_points points."""
    shapes = []

    def grow(prefix: List[int], used: int):
        m = len(prefix)
        if m and m % 2 == 0 and used == n_points:
            shapes.append(tuple(prefix))
        if m > 1 and prefix[-1] == 1:
            return
        for size in range(1, n_points + 1):
            extra = size if m == 0 else size - 1
            if used + extra > n_points:
                break
            # a chain of length one only closes the accordion
            if m and size == 1 and m % 2 == 0:
                continue
            grow(prefix + [size], used + extra)

    grow([], 0)
    return sorted(set(shapes))
