"""Finite racks: tables, axioms, subracks, decompositions, powers, amalgams and embeddings."""
from __future__ import annotations

import enum
import json
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .perm import Permutation, conjugate

TABLE_THRESHOLD = 5000


class Outcome(enum.Enum):
    NOT_FOUND = "NOT_FOUND"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    INDECOMPOSABLE = "INDECOMPOSABLE"
    OVERFLOW = "OVERFLOW"


NOT_FOUND = Outcome.NOT_FOUND
BUDGET_EXCEEDED = Outcome.BUDGET_EXCEEDED
INDECOMPOSABLE = Outcome.INDECOMPOSABLE


class RackKind(enum.Enum):
    NOT_A_RACK = "not a rack"
    RACK = "rack"
    QUANDLE = "quandle"
    CROSSED_SET = "crossed set"


@dataclass
class RackReport:
    kind: RackKind
    violation: str | None = None

    @property
    def ok(self) -> bool:
        return self.kind is not RackKind.NOT_A_RACK


class FiniteRack:
    """Rack on {0..n-1}.

    Either table-backed (``table[x][y] = x▷y``) or backed by a list of
    permutations closed under conjugation, in which case ▷ is evaluated
    lazily and the table materialized only for small sizes.
    """

    def __init__(self, table: Sequence[Sequence[int]] | None = None,
                 labels: Sequence[Hashable] | None = None, *,
                 op: Callable[[int, int], int] | None = None, size: int | None = None):
        if table is not None:
            self.table: list[tuple[int, ...]] | None = [tuple(r) for r in table]
            self.size = len(self.table)
            self._op = None
        else:
            if op is None or size is None:
                raise ValueError("need a table or (op, size)")
            self.table = None
            self.size = size
            self._op = op
        self.labels = list(labels) if labels is not None else None
        self._index = None

    # -- constructors --
    @classmethod
    def from_permutations(cls, elements: Iterable[Permutation],
                          materialize: int = TABLE_THRESHOLD) -> "FiniteRack":
        """Conjugation rack x▷y = x y x⁻¹ on a conjugation-closed set of permutations."""
        elems = sorted(set(elements))
        index = {e: i for i, e in enumerate(elems)}

        def op(i: int, j: int) -> int:
            return index[conjugate(elems[i], elems[j])]

        r = cls(op=op, size=len(elems), labels=elems)
        r._index = index
        if len(elems) <= materialize:
            r.table = [tuple(op(i, j) for j in range(len(elems))) for i in range(len(elems))]
            r._op = None
        return r

    @classmethod
    def from_function(cls, elements: Sequence[Hashable], fn: Callable) -> "FiniteRack":
        elems = list(elements)
        index = {e: i for i, e in enumerate(elems)}
        table = [[index[fn(a, b)] for b in elems] for a in elems]
        r = cls(table, labels=elems)
        r._index = index
        return r

    # -- access --
    def op(self, x: int, y: int) -> int:
        if self.table is not None:
            return self.table[x][y]
        return self._op(x, y)

    def row(self, x: int) -> tuple[int, ...]:
        if self.table is not None:
            return self.table[x]
        return tuple(self._op(x, y) for y in range(self.size))

    def index_of(self, label: Hashable) -> int:
        if self._index is None:
            if self.labels is None:
                raise KeyError("rack has no labels")
            self._index = {e: i for i, e in enumerate(self.labels)}
        return self._index[label]

    def label(self, i: int):
        return self.labels[i] if self.labels is not None else i

    def materialized(self) -> "FiniteRack":
        if self.table is not None:
            return self
        return FiniteRack([self.row(x) for x in range(self.size)], self.labels)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteRack(size={self.size})"

    # -- serialization --
    def to_json(self) -> dict:
        d: dict = {"size": self.size, "table": [list(self.row(x)) for x in range(self.size)]}
        if self.labels is not None:
            d["labels"] = [str(l) for l in self.labels]
        return d

    @classmethod
    def from_json(cls, d: dict | str) -> "FiniteRack":
        if isinstance(d, str):
            d = json.loads(d)
        table = d["table"]
        if len(table) != d["size"]:
            raise ValueError("size does not match table")
        return cls(table, d.get("labels"))


# ---------------------------------------------------------------- axioms

def validate(r: FiniteRack) -> RackReport:
    n = r.size
    rows = [r.row(x) for x in range(n)]
    for x in range(n):
        if sorted(rows[x]) != list(range(n)):
            return RackReport(RackKind.NOT_A_RACK, f"phi_{x} is not a bijection")
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            ry = rows[y]
            rxy = rows[rx[y]]
            for z in range(n):
                if rx[ry[z]] != rxy[rx[z]]:
                    return RackReport(RackKind.NOT_A_RACK,
                                      f"self-distributivity fails at ({x},{y},{z})")
    if any(rows[x][x] != x for x in range(n)):
        return RackReport(RackKind.RACK)
    for x in range(n):
        for y in range(n):
            if rows[x][y] == y and rows[y][x] != x:
                return RackReport(RackKind.QUANDLE)
    return RackReport(RackKind.CROSSED_SET)


def is_faithful(r: FiniteRack) -> bool:
    rows = [r.row(x) for x in range(r.size)]
    return len(set(rows)) == len(rows)


# ---------------------------------------------------------------- subracks

@dataclass(frozen=True)
class SubrackHandle:
    parent: FiniteRack = field(repr=False)
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    def rack(self) -> FiniteRack:
        """The subrack as a standalone table rack (labels are parent indices or parent labels)."""
        pos = {x: i for i, x in enumerate(self.members)}
        table = [[pos[self.parent.op(a, b)] for b in self.members] for a in self.members]
        labels = [self.parent.label(x) for x in self.members]
        return FiniteRack(table, labels)


def subrack_closure(r: FiniteRack, seed: Iterable[int], cap: int | None = None):
    """Least subset containing ``seed`` closed under ▷; OVERFLOW past ``cap``.

    In a finite rack this is the orbit of the seed under the maps φ_s, s in the
    seed: φ_{φ_w(s)} = φ_w φ_s φ_w⁻¹ keeps products inside the orbit.
    """
    gens = list(dict.fromkeys(seed))
    if not gens:
        raise ValueError("seed must be nonempty")
    rows = [r.table[g] for g in gens] if r.table is not None else None
    seen = set(gens)
    queue = deque(gens)
    while queue:
        a = queue.popleft()
        for k, g in enumerate(gens):
            c = rows[k][a] if rows is not None else r.op(g, a)
            if c not in seen:
                seen.add(c)
                if cap is not None and len(seen) > cap:
                    return Outcome.OVERFLOW
                queue.append(c)
    return SubrackHandle(r, tuple(sorted(seen)))


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[SubrackHandle, ...]


def inner_orbits(r: FiniteRack) -> list[tuple[int, ...]]:
    """Orbits of the group generated by all φ_x."""
    parent = list(range(r.size))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(r.size):
        for y in range(r.size):
            a, b = find(y), find(r.op(x, y))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for y in range(r.size):
        groups.setdefault(find(y), []).append(y)
    return sorted(tuple(g) for g in groups.values())


def decompose(r: FiniteRack):
    """Finest decomposition into inner-group orbits, or INDECOMPOSABLE."""
    orbits = inner_orbits(r)
    if len(orbits) == 1:
        return INDECOMPOSABLE
    return Decomposition(tuple(SubrackHandle(r, o) for o in orbits))


def is_decomposition(r: FiniteRack, parts: Sequence[Iterable[int]]) -> bool:
    """Disjoint cover with X▷X_i = X_i for every part."""
    sets = [set(p) for p in parts]
    if sum(len(s) for s in sets) != r.size or set().union(*sets) != set(range(r.size)):
        return False
    return all(r.op(x, y) in s for s in sets for y in s for x in range(r.size))


# ---------------------------------------------------------------- constructions

def _row_power(row: Sequence[int], j: int) -> tuple[int, ...]:
    n = len(row)
    if j < 0:
        inv = [0] * n
        for i, v in enumerate(row):
            inv[v] = i
        row, j = inv, -j
    out = list(range(n))
    for _ in range(j):
        out = [row[v] for v in out]
    return tuple(out)


def power_rack(r: FiniteRack, j: int) -> FiniteRack:
    """X^[j]: x▷y = φ_x^j(y)."""
    if j == 0:
        raise ValueError("j must be nonzero")
    table = [_row_power(r.row(x), j) for x in range(r.size)]
    labels = [(l, j) for l in r.labels] if r.labels is not None else None
    return FiniteRack(table, labels)


def amalgam(r: FiniteRack, j: int) -> FiniteRack:
    """X^[1,j]: X ⊔ X^[j] with x▷y^[j] = (x▷y)^[j] and x^[j]▷y = φ_x^j(y)."""
    if j == 0:
        raise ValueError("j must be nonzero")
    n = r.size
    rows = [r.row(x) for x in range(n)]
    prow = [_row_power(rows[x], j) for x in range(n)]
    table = []
    for x in range(n):
        table.append(rows[x] + tuple(v + n for v in rows[x]))
    for x in range(n):
        table.append(prow[x] + tuple(v + n for v in prow[x]))
    base = r.labels if r.labels is not None else list(range(n))
    labels = [(l, 1) for l in base] + [(l, j) for l in base]
    return FiniteRack(table, labels)


def double(r: FiniteRack) -> FiniteRack:
    """X^(2) = X^[1,1]."""
    return amalgam(r, 1)


def product(r: FiniteRack, s: FiniteRack) -> FiniteRack:
    """Componentwise rack on X×Z, indexed x*|Z| + z."""
    m = s.size
    rr = [r.row(x) for x in range(r.size)]
    sr = [s.row(z) for z in range(m)]
    table = [[rr[a // m][b // m] * m + sr[a % m][b % m] for b in range(r.size * m)]
             for a in range(r.size * m)]
    la = r.labels or list(range(r.size))
    lb = s.labels or list(range(m))
    return FiniteRack(table, [(a, b) for a in la for b in lb])


def trivial_rack(n: int) -> FiniteRack:
    return FiniteRack([list(range(n)) for _ in range(n)], list(range(n)))


def dihedral_rack(n: int) -> FiniteRack:
    """Z/n with x▷y = 2x − y."""
    return FiniteRack([[(2 * x - y) % n for y in range(n)] for x in range(n)], list(range(n)))


def permutation_rack(n: int) -> FiniteRack:
    """Z/n with x▷y = y + 1."""
    return FiniteRack([[(y + 1) % n for y in range(n)] for _ in range(n)], list(range(n)))


# ---------------------------------------------------------------- embeddings

def generating_sequence(r: FiniteRack) -> list[int]:
    """Greedy irredundant generating sequence, chosen deterministically."""
    gens: list[int] = []
    covered: set[int] = set()
    while len(covered) < r.size:
        best = None
        for x in range(r.size):
            if x in covered:
                continue
            c = set(subrack_closure(r, gens + [x]).members)
            if best is None or len(c) > len(best[1]):
                best = (x, c)
        gens.append(best[0])
        covered = best[1]
    return gens


def _extend(pattern: FiniteRack, target: FiniteRack, f: dict[int, int],
            inv: dict[int, int], x: int, y: int) -> bool:
    """Add x↦y and propagate f(a▷b) = f(a)▷f(b); False on conflict or collision."""
    work = [(x, y)]
    while work:
        a, fa = work.pop()
        if a in f:
            if f[a] != fa:
                return False
            continue
        if fa in inv:
            return False
        f[a] = fa
        inv[fa] = a
        for b, fb in list(f.items()):
            for p, fp, q, fq in ((a, fa, b, fb), (b, fb, a, fa)):
                c = pattern.op(p, q)
                fc = target.op(fp, fq)
                if c in f:
                    if f[c] != fc:
                        return False
                else:
                    work.append((c, fc))
    return True


def is_morphism(pattern: FiniteRack, target: FiniteRack, f: dict[int, int]) -> bool:
    if len(set(f.values())) != len(f) or set(f) != set(range(pattern.size)):
        return False
    return all(f[pattern.op(a, b)] == target.op(f[a], f[b])
               for a in range(pattern.size) for b in range(pattern.size))


def find_embedding(pattern: FiniteRack, target: FiniteRack, budget: int = 10**6,
                   first_candidates: Sequence[int] | None = None,
                   candidates: Sequence[int] | None = None,
                   profile: Callable | None = None):
    """Injective rack morphism pattern → target by backtracking on a generating sequence.

    ``first_candidates`` restricts the image of the first generator; use a single
    representative when the target is homogeneous (e.g. a conjugacy class).
    Returns a dict, NOT_FOUND, or BUDGET_EXCEEDED.
    """
    if pattern.size > target.size:
        return NOT_FOUND
    gens = generating_sequence(pattern)
    pool = list(candidates) if candidates is not None else list(range(target.size))
    nodes = 0

    def rec(k: int, f: dict[int, int], inv: dict[int, int]):
        nonlocal nodes
        if k == len(gens):
            return dict(f)
        g = gens[k]
        if g in f:
            return rec(k + 1, f, inv)
        cands = first_candidates if (k == 0 and first_candidates is not None) else pool
        for c in cands:
            if c in inv:
                continue
            if profile is not None and profile[0][g] != profile[1][c]:
                continue
            nodes += 1
            if nodes > budget:
                raise _Budget
            f2, inv2 = dict(f), dict(inv)
            if _extend(pattern, target, f2, inv2, g, c):
                got = rec(k + 1, f2, inv2)
                if got is not None:
                    return got
        return None

    try:
        result = rec(0, {}, {})
    except _Budget:
        return BUDGET_EXCEEDED
    if result is None:
        return NOT_FOUND
    if not is_morphism(pattern, target, result):
        raise AssertionError("search produced a non-morphism")
    return result


class _Budget(Exception):
    pass


def _profile(r: FiniteRack) -> list[tuple]:
    """Isomorphism-invariant data per element: cycle type of φ_x, fixed points, orbit size."""
    rows = [r.row(x) for x in range(r.size)]
    orbit_size = {}
    for o in inner_orbits(r):
        for x in o:
            orbit_size[x] = len(o)
    out = []
    for x in range(r.size):
        seen, lens = set(), []
        for s in range(r.size):
            if s in seen:
                continue
            L, t = 0, s
            while t not in seen:
                seen.add(t)
                t = rows[x][t]
                L += 1
            lens.append(L)
        out.append((tuple(sorted(lens)), rows[x][x] == x, orbit_size[x]))
    return out


def is_isomorphic(a: FiniteRack, b: FiniteRack, budget: int = 10**6) -> bool:
    if a.size != b.size:
        return False
    pa, pb = _profile(a), _profile(b)
    if sorted(pa) != sorted(pb):
        return False
    got = find_embedding(a, b, budget, profile=(pa, pb))
    if got is BUDGET_EXCEEDED:
        raise RuntimeError("isomorphism test exceeded budget")
    return isinstance(got, dict)


def is_abelian(r: FiniteRack) -> bool:
    return all(r.op(x, y) == y for x in range(r.size) for y in range(r.size))


# ---------------------------------------------------------------- catalog

def _class_rack(cycle: str, m: int, alternating: bool) -> FiniteRack:
    from .group import alternating_group, class_orbit, symmetric_group
    grp = alternating_group(m) if alternating else symmetric_group(m)
    return FiniteRack.from_permutations(class_orbit(Permutation.parse(cycle, m), grp))


def catalog_rack(name: str) -> FiniteRack:
    """Named racks: D_n, trivial:n, tetrahedron, cube, dodecahedron, oct, oct2."""
    if name.startswith("trivial:"):
        return trivial_rack(int(name.split(":", 1)[1]))
    if name.startswith("D_"):
        return dihedral_rack(int(name[2:]))
    if name == "tetrahedron":
        return _class_rack("(1 2 3)", 4, alternating=True)
    if name == "cube":
        return _class_rack("(1 2 3)", 4, alternating=False)
    if name == "dodecahedron":
        return _class_rack("(1 2 3)", 5, alternating=True)
    if name == "oct":
        return _class_rack("(1 2 3 4)", 4, alternating=False)
    if name == "oct2":
        return double(catalog_rack("oct"))
    raise KeyError(f"unknown catalog rack {name!r}")


_CATALOG_BY_SIZE = {3: ["D_3"], 4: ["tetrahedron", "D_4"], 5: ["D_5"], 6: ["oct"],
                    8: ["cube"], 20: ["dodecahedron"]}


def name_rack(r: FiniteRack) -> str:
    """Catalog name of a small rack, else a descriptive fallback."""
    if is_abelian(r):
        return f"abelian:{r.size}"
    for name in _CATALOG_BY_SIZE.get(r.size, []):
        if is_isomorphic(r, catalog_rack(name)):
            return name
    if r.size > 2 and r.size % 2 == 0 and is_isomorphic(r, dihedral_rack(r.size)):
        return f"D_{r.size}"
    if r.size > 2 and r.size % 2 == 1 and is_isomorphic(r, dihedral_rack(r.size)):
        return f"D_{r.size}"
    kind = "indecomposable" if decompose(r) is INDECOMPOSABLE else "decomposable"
    return f"{kind}:{r.size}"


def two_generated_census(target: FiniteRack, homogeneous: bool = False) -> Counter:
    """Names of the proper subracks ⟨x,y⟩, counted over unordered pairs.

    With ``homogeneous`` (target acted on transitively by automorphisms, as a
    conjugacy class is) only pairs containing element 0 are scanned; the set of
    names found is the same.
    """
    names: Counter = Counter()
    memo: dict[tuple, str] = {}
    firsts = [0] if homogeneous else range(target.size)
    for x in firsts:
        for y in range(x + 1, target.size):
            sub = subrack_closure(target, [x, y])
            if len(sub) == target.size:
                continue
            key = sub.members
            if key not in memo:
                memo[key] = name_rack(sub.rack())
            names[memo[key]] += 1
    return names
