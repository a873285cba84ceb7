"""Incremental sparse row echelon form over Q with an optional companion row.

Columns are integers; the pivot of a row is its smallest column.  Each stored
row may carry a companion vector which undergoes the same row operations,
which is how solutions of ``A(eta) = v`` are transported to ``B(eta)``.
"""
from __future__ import annotations

import heapq
from typing import Dict, Optional, Tuple

from gmpy2 import mpq

Row = Dict[int, mpq]


def _axpy(target: Row, scale, source: Row, skip: int | None = None, heap=None) -> None:
    # target -= scale * source
    for c, v in source.items():
        if c == skip:
            continue
        old = target.get(c)
        if old is None:
            target[c] = -scale * v
            if heap is not None:
                heapq.heappush(heap, c)
        else:
            new = old - scale * v
            if new:
                target[c] = new
            else:
                del target[c]


class Echelon:
    def __init__(self):
        self.pivots: Dict[int, Tuple[Row, Optional[Row]]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def copy(self) -> "Echelon":
        e = Echelon()
        e.pivots = dict(self.pivots)
        return e

    def insert(self, row: Row, comp: Optional[Row] = None) -> bool:
        """Add a row; return True when it enlarged the span."""
        row = dict(row)
        comp = dict(comp) if comp is not None else None
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                inv = 1 / row[c]
                row = {k: v * inv for k, v in row.items()}
                if comp is not None:
                    comp = {k: v * inv for k, v in comp.items()}
                self.pivots[c] = (row, comp)
                return True
            v = row.pop(c)
            prow, pcomp = piv
            _axpy(row, v, prow, skip=c)
            if pcomp is not None:
                if comp is None:
                    comp = {}
                _axpy(comp, v, pcomp)
        return False

    def reduce(self, row: Row, track: bool = False) -> Tuple[Row, Row]:
        """Fully reduce; return (remainder on non-pivot columns, companion).

        With ``track`` the companion is minus the companion-combination used,
        so that ``row = sum(c_k row_k) + remainder`` and ``companion = -sum(c_k comp_k)``.
        """
        row = dict(row)
        comp: Row = {}
        heap = list(row)
        heapq.heapify(heap)
        rem: Row = {}
        while heap:
            c = heapq.heappop(heap)
            v = row.pop(c, None)
            if v is None:
                continue
            piv = self.pivots.get(c)
            if piv is None:
                rem[c] = v
                continue
            prow, pcomp = piv
            _axpy(row, v, prow, skip=c, heap=heap)
            if track and pcomp is not None:
                _axpy(comp, v, pcomp)
        return rem, comp
