"""Finite magmas given by Cayley tables, LA-semigroup laws and enumeration.

Elements are dense 0-based indices; labels only matter at the I/O boundary.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_ENUM_ORDER = 5


class SizeOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class CayleyTable:
    op: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = len(self.op)
        if n < 1:
            raise ValueError("carrier must have at least one element")
        if len(self.labels) != n:
            raise ValueError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise ValueError("labels must be pairwise distinct")
        if any(not lab for lab in self.labels):
            raise ValueError("labels must be nonempty")
        for i, row in enumerate(self.op):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if not (isinstance(v, int) and 0 <= v < n):
                    raise ValueError(f"entry ({i},{j})={v!r} outside [0,{n})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> "CayleyTable":
        """Build from 0-based rows; labels default to "1".."n" as in hand-written tables."""
        op = tuple(tuple(int(v) for v in row) for row in rows)
        if labels is None:
            labels = [str(i + 1) for i in range(len(op))]
        return cls(op, tuple(labels))

    @classmethod
    def from_labeled_rows(cls, rows: Sequence[Sequence[str]], labels: Sequence[str]) -> "CayleyTable":
        index = {lab: i for i, lab in enumerate(labels)}
        return cls(tuple(tuple(index[str(v)] for v in row) for row in rows), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.op)

    @property
    def elements(self) -> range:
        return range(len(self.op))

    def mul(self, a: int, b: int) -> int:
        return self.op[a][b]

    def label(self, a: int) -> str:
        return self.labels[a]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.op for v in row)

    def __str__(self):
        w = max(len(s) for s in self.labels)
        head = " " * w + " | " + " ".join(s.rjust(w) for s in self.labels)
        lines = [head, "-" * len(head)]
        for a, row in enumerate(self.op):
            lines.append(self.labels[a].rjust(w) + " | " + " ".join(self.labels[v].rjust(w) for v in row))
        return "\n".join(lines)


class Law(enum.Enum):
    LEFT_INVERTIVE = "left-invertive"
    MEDIAL = "medial"
    PARAMEDIAL = "paramedial"
    LAW4 = "law4"


@dataclass(frozen=True)
class LawWitness:
    law: Law
    elements: tuple[int, ...]
    lhs: int
    rhs: int


def _first_violation(law, arity, lhs_rhs, n):
    for tup in itertools.product(range(n), repeat=arity):
        lhs, rhs = lhs_rhs(*tup)
        if lhs != rhs:
            return LawWitness(law, tup, lhs, rhs)
    return None


def check_left_invertive(T: CayleyTable) -> LawWitness | None:
    """(xy)z = (zy)x for all x, y, z; returns the lexicographically first failing triple."""
    m = T.op
    return _first_violation(Law.LEFT_INVERTIVE, 3, lambda x, y, z: (m[m[x][y]][z], m[m[z][y]][x]), T.n)


def check_medial(T: CayleyTable) -> LawWitness | None:
    m = T.op
    return _first_violation(
        Law.MEDIAL, 4, lambda a, b, c, d: (m[m[a][b]][m[c][d]], m[m[a][c]][m[b][d]]), T.n
    )


def check_paramedial(T: CayleyTable) -> LawWitness | None:
    m = T.op
    return _first_violation(
        Law.PARAMEDIAL, 4, lambda a, b, c, d: (m[m[a][b]][m[c][d]], m[m[d][b]][m[c][a]]), T.n
    )


def check_law4(T: CayleyTable) -> LawWitness | None:
    """a(bc) = b(ac)."""
    m = T.op
    return _first_violation(Law.LAW4, 3, lambda a, b, c: (m[a][m[b][c]], m[b][m[a][c]]), T.n)


def is_la_semigroup(T: CayleyTable) -> bool:
    return check_left_invertive(T) is None


def find_left_identities(T: CayleyTable) -> frozenset[int]:
    return frozenset(e for e in T.elements if all(T.op[e][x] == x for x in T.elements))


def regular_witness(T: CayleyTable, a: int) -> int | None:
    m = T.op
    for x in T.elements:
        if m[m[a][x]][a] == a:
            return x
    return None


def intra_regular_witness(T: CayleyTable, a: int) -> tuple[int, int] | None:
    m = T.op
    aa = m[a][a]
    for x in T.elements:
        xaa = m[x][aa]
        for y in T.elements:
            if m[xaa][y] == a:
                return x, y
    return None


def is_regular(T: CayleyTable) -> bool:
    return all(regular_witness(T, a) is not None for a in T.elements)


def is_intra_regular(T: CayleyTable) -> bool:
    return all(intra_regular_witness(T, a) is not None for a in T.elements)


def subset_product(T: CayleyTable, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    B = tuple(B)
    return frozenset(T.op[a][b] for a in A for b in B)


# --- enumeration ---------------------------------------------------------

class EnumMode(enum.Enum):
    ALL = "all"
    UP_TO_ISO = "up-to-iso"


def _check_order(n: int) -> None:
    if not (isinstance(n, int) and 1 <= n <= MAX_ENUM_ORDER):
        raise SizeOutOfRange(f"order must be in [1, {MAX_ENUM_ORDER}], got {n!r}")


def relabel(T: CayleyTable, perm: Sequence[int]) -> tuple[int, ...]:
    """Flattened table of the isomorphic copy under old -> new map ``perm``."""
    n = T.n
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    m = T.op
    return tuple(perm[m[inv[r]][inv[c]]] for r in range(n) for c in range(n))


def canonical_form(T: CayleyTable) -> tuple[int, ...]:
    """Lexicographically least flattened table over all n! relabelings."""
    return min(relabel(T, p) for p in itertools.permutations(range(T.n)))


def _table(flat: Sequence[int], n: int) -> CayleyTable:
    return CayleyTable.from_rows([flat[i * n:(i + 1) * n] for i in range(n)])


def _backtrack(n: int, value_order=None) -> Iterator[tuple[int, ...]]:
    # cells assigned row-major; ascending values give lex sorted output
    N = n * n
    cells = [-1] * N
    if value_order is None:
        value_order = lambda k: range(n)

    def ok(k: int) -> bool:
        i, j = divmod(k, n)
        c = cells
        # cell (i,j) as (x,y) with triple (i,j,z), or as (z,y) with triple (x,j,i)
        for z in range(n):
            for x, y, zz in ((i, j, z), (z, j, i)):
                xy, zy = c[x * n + y], c[zz * n + y]
                if xy < 0 or zy < 0:
                    continue
                lhs, rhs = c[xy * n + zz], c[zy * n + x]
                if lhs >= 0 and rhs >= 0 and lhs != rhs:
                    return False
        # cell (i,j) as the outer product (xy)j with xy == i; the identity is
        # symmetric in x <-> z, so this also covers the (zy)x position
        for x in range(n):
            for y in range(n):
                if c[x * n + y] != i:
                    continue
                zy = c[j * n + y]
                if zy >= 0:
                    rhs = c[zy * n + x]
                    if rhs >= 0 and rhs != c[k]:
                        return False
        return True

    def rec(k: int):
        if k == N:
            yield tuple(cells)
            return
        for v in value_order(k):
            cells[k] = v
            if ok(k):
                yield from rec(k + 1)
        cells[k] = -1

    yield from rec(0)


def enumerate_la_semigroups(n: int, mode: EnumMode | str = EnumMode.ALL) -> Iterator[CayleyTable]:
    """Stream LA-semigroups of order n in lexicographic order of their flattened tables.

    With ``UP_TO_ISO`` only tables equal to their own canonical form are kept,
    so each isomorphism class appears exactly once.
    """
    _check_order(n)
    mode = EnumMode(mode)
    perms = list(itertools.permutations(range(n)))
    for flat in _backtrack(n):
        T = _table(flat, n)
        if mode is EnumMode.UP_TO_ISO and min(relabel(T, p) for p in perms) != flat:
            continue
        yield T


def brute_force_la_semigroups(n: int) -> Iterator[CayleyTable]:
    """Filter every one of the n^(n*n) tables through check_left_invertive (test oracle)."""
    _check_order(n)
    for flat in itertools.product(range(n), repeat=n * n):
        T = _table(flat, n)
        if check_left_invertive(T) is None:
            yield T


def random_la_semigroup(n: int, rng, node_budget: int = 5000) -> CayleyTable:
    """First leaf of a backtracking search with shuffled value order.

    The search restarts with a fresh shuffle whenever it visits more than
    ``node_budget`` nodes. Not uniform over labeled tables.
    """
    _check_order(n)
    while True:
        visited = 0

        def shuffled(_k):
            nonlocal visited
            visited += 1
            if visited > node_budget:
                return ()
            vals = list(range(n))
            rng.shuffle(vals)
            return vals

        flat = next(_backtrack(n, shuffled), None)
        if flat is not None:
            return _table(flat, n)
