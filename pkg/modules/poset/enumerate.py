"""
Finite T0-spaces up to isomorphism.

Every poset on n points arises from one on n-1 points by adjoining a new
maximal point whose strict down-set is a closed set, so spaces are grown one
point at a time and deduplicated by a degree invariant plus a Hasse-digraph
isomorphism test.
"""

import logging
from typing import Dict, Iterator, List, Tuple

from modules.poset.poset_core import Space, is_isomorphic, popcount

logger = logging.getLogger(__name__)


def _invariant(s: Space) -> Tuple:
    profile = sorted(
        (popcount(s.below[x]), popcount(s.above[x]),
         popcount(s.lower_covers[x]), popcount(s.upper_covers[x]))
        for x in range(s.n_points)
    )
    return s.n_points, len(s.hasse_edge_list), tuple(profile)


def _closed_sets(s: Space) -> List[int]:
    return [m for m in range(s.full + 1) if s.is_closed(m)]


def _extend(s: Space) -> Iterator[Space]:
    n = s.n_points
    labels = [str(i + 1) for i in range(n + 1)]
    for down in _closed_sets(s):
        yield Space(labels, list(s.below) + [down | (1 << n)])


def spaces_up_to_iso(n: int) -> List[Space]:
    """All T0-spaces with exactly n points, one per isomorphism class."""
    if n <= 0:
        return []
    layer = [Space(["1"], [1])]
    for size in range(2, n + 1):
        buckets: Dict[Tuple, List[Space]] = {}
        ordered: List[Space] = []
        for s in layer:
            for t in _extend(s):
                key = _invariant(t)
                bucket = buckets.setdefault(key, [])
                if any(is_isomorphic(t, u) for u in bucket):
                    continue
                bucket.append(t)
                ordered.append(t)
        layer = ordered
        logger.debug(f"{len(layer)} spaces with {size} points")
    return layer


def enumerate_spaces(max_points: int, connected_only: bool = False) -> Iterator[Space]:
    """Stream spaces with 1..max_points points in order of size."""
    for n in range(1, max_points + 1):
        for s in spaces_up_to_iso(n):
            if connected_only and not s.is_connected(s.full):
                continue
            yield s


def describe(s: Space) -> str:
    """Compact relation listing "a<b, ..." over Hasse edges."""
    parts = [f"{s.labels[x]}<{s.labels[y]}" for y, x in s.hasse_edge_list]
    return ", ".join(parts) if parts else "(discrete)"
