"""Permutation groups given by generators: closure, orbits, stabilizer chains, classes."""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import CycleType, Permutation, compose, conjugate, cycle_type, sign

DEFAULT_CAP = 10**6


class Overflow:
    """Sentinel returned when an enumeration exceeds its cap."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "OVERFLOW"

    def __bool__(self) -> bool:
        return False


OVERFLOW = Overflow()


class Tri(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


class Ambient(enum.Enum):
    SYM = "S"
    ALT = "A"


class SplitPart(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class GeneratedGroup:
    """Subgroup of S_m generated by a list of permutations."""

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for the trivial group")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = [g for g in gens if not g.is_identity()]
        self._elements: frozenset | None = None
        self._chain: _StabChain | None = None

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def closure(self, cap: int = DEFAULT_CAP):
        """All elements (frozenset) or OVERFLOW when more than ``cap``."""
        if cap < 1:
            raise ValueError("cap must be positive")
        if self._elements is not None:
            return self._elements if len(self._elements) <= cap else OVERFLOW
        if self._chain is not None and self._chain.order() > cap:
            return OVERFLOW
        e = self.identity()
        seen = {e}
        queue = deque([e])
        gens = [g.arr for g in self.generators]
        while queue:
            x = queue.popleft()
            xa = x.arr
            for ga in gens:
                y = Permutation._raw(tuple([ga[i] for i in xa]))
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        return OVERFLOW
                    queue.append(y)
        self._elements = frozenset(seen)
        return self._elements

    def _stab_chain(self) -> "_StabChain":
        if self._chain is None:
            self._chain = _StabChain(self.degree, self.generators)
        return self._chain

    def order(self) -> int:
        if self._elements is not None:
            return len(self._elements)
        return self._stab_chain().order()

    def contains(self, x: Permutation) -> bool:
        if x.degree != self.degree:
            return False
        if self._elements is not None:
            return x in self._elements
        return self._stab_chain().contains(x)

    def __contains__(self, x: Permutation) -> bool:
        return self.contains(x)


class _StabChain:
    """Deterministic Schreier-Sims; base points taken in increasing order."""

    def __init__(self, degree: int, gens: Sequence[Permutation]):
        self.degree = degree
        self.base: list[int] = []
        self.gens: list[list[Permutation]] = []
        self.trans: list[dict[int, Permutation]] = []
        for g in gens:
            self._extend(0, g)

    def _orbit(self, level: int) -> None:
        """Extend the transversal at ``level``; existing coset reps are kept."""
        b = self.base[level]
        tr = self.trans[level]
        if not tr:
            tr[b] = Permutation.identity(self.degree)
        queue = deque(tr)
        while queue:
            p = queue.popleft()
            for g in self.gens[level]:
                q = g.arr[p]
                if q not in tr:
                    tr[q] = compose(g, tr[p])
                    queue.append(q)

    def _sift(self, x: Permutation, start: int = 0) -> tuple[Permutation, int]:
        for lvl in range(start, len(self.base)):
            p = x.arr[self.base[lvl]]
            t = self.trans[lvl].get(p)
            if t is None:
                return x, lvl
            x = compose(t.inverse(), x)
        return x, len(self.base)

    def _extend(self, level: int, g: Permutation) -> None:
        residue, lvl = self._sift(g, level)
        if residue.is_identity():
            return
        if lvl == len(self.base):
            moved = next(i for i, v in enumerate(residue.arr) if i != v)
            self.base.append(moved)
            self.gens.append([])
            self.trans.append({})
        # residue fixes base[level..lvl-1]; it belongs at every level up to lvl
        for k in range(level, lvl + 1):
            self.gens[k].append(residue)
        for k in range(lvl, level - 1, -1):
            old = set(self.trans[k])
            self._orbit(k)
            # Schreier generators for new coset reps / new generator
            tr = self.trans[k]
            for p, u in list(tr.items()):
                for s in list(self.gens[k]):
                    if p in old and s is not residue:
                        continue
                    q = s.arr[p]
                    sch = compose(tr[q].inverse(), compose(s, u))
                    if not sch.is_identity():
                        self._extend(k + 1, sch)

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def add_generator(self, g: Permutation) -> bool:
        """Extend the group by g; False when g was already a member."""
        if self.contains(g):
            return False
        self._extend(0, g)
        return True

    def contains(self, x: Permutation) -> bool:
        r, _ = self._sift(x)
        return r.is_identity()


def class_orbit(x: Permutation, group: GeneratedGroup, cap: int = DEFAULT_CAP):
    """Conjugacy class of x in the group, by BFS under generator conjugation."""
    seen = {x}
    order = [x]
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in group.generators:
            z = conjugate(g, y)
            if z not in seen:
                seen.add(z)
                if len(seen) > cap:
                    return OVERFLOW
                order.append(z)
                queue.append(z)
    return frozenset(seen)


def are_conjugate_in(x: Permutation, y: Permutation, group: GeneratedGroup,
                     cap: int = DEFAULT_CAP) -> Tri:
    if x == y:
        return Tri.YES
    if cycle_type(x) != cycle_type(y):
        return Tri.NO
    orb = class_orbit(x, group, cap)
    if orb is OVERFLOW:
        return Tri.UNKNOWN
    return Tri.YES if y in orb else Tri.NO


def centralizer_order_formula(t: CycleType) -> int:
    return math.prod(j**n * math.factorial(n) for j, n in t.counts)


def centralizer_in_Sm(x: Permutation) -> GeneratedGroup:
    """Centralizer of x in S_m: its cycles plus swaps of consecutive equal-length cycles."""
    m = x.degree
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for c in x.cycles(include_fixed=True):
        by_len.setdefault(len(c), []).append(c)
    gens = []
    for j, cyc in sorted(by_len.items()):
        if j > 1:
            gens.extend(Permutation.from_cycles([c], m) for c in cyc)
        for a, b in zip(cyc, cyc[1:]):
            gens.append(Permutation.from_cycles([[a[i], b[i]] for i in range(j)], m))
    return GeneratedGroup(gens, degree=m)


def symmetric_group(m: int) -> GeneratedGroup:
    gens = []
    if m >= 2:
        gens.append(Permutation.from_cycles([[1, 2]], m))
    if m >= 3:
        gens.append(Permutation.from_cycles([list(range(1, m + 1))], m))
    return GeneratedGroup(gens, degree=m)


def alternating_group(m: int) -> GeneratedGroup:
    gens = [Permutation.from_cycles([[1, 2, k]], m) for k in range(3, m + 1)]
    return GeneratedGroup(gens, degree=m)


def splits_in_Am(t: CycleType) -> bool:
    """An even S_m class splits in A_m iff its cycle lengths are odd and pairwise distinct."""
    return all(j % 2 == 1 and n == 1 for j, n in t.counts)


@dataclass(frozen=True)
class ConjClassSpec:
    m: int
    type: CycleType
    ambient: Ambient = Ambient.SYM
    split_part: SplitPart | None = None

    def __post_init__(self):
        if self.type.degree > self.m:
            raise ValueError("cycle type exceeds degree")
        if self.type.degree < self.m:
            object.__setattr__(self, "type", self.type.pad(self.m))
        if self.ambient is Ambient.ALT and self.type.parity() != 1:
            raise ValueError("alternating ambient requires an even type")
        if self.split_part is not None and not (self.ambient is Ambient.ALT and splits_in_Am(self.type)):
            raise ValueError("split part only for A_m classes that split")
        if self.ambient is Ambient.ALT and splits_in_Am(self.type) and self.split_part is None:
            object.__setattr__(self, "split_part", SplitPart.PLUS)

    def representative(self) -> Permutation:
        rep = self.type.representative(self.m)
        if self.split_part is SplitPart.MINUS:
            rep = conjugate(Permutation.from_cycles([[1, 2]], self.m), rep)
        return rep

    def group(self) -> GeneratedGroup:
        return alternating_group(self.m) if self.ambient is Ambient.ALT else symmetric_group(self.m)

    def label(self) -> str:
        s = f"({self.type.label()}) in {self.ambient.value}_{self.m}"
        if self.split_part is not None:
            s += f" [{self.split_part.value}]"
        return s

    def to_json(self) -> dict:
        d = {"m": self.m, "type": self.type.label(), "group": self.ambient.value}
        if self.split_part is not None:
            d["split"] = self.split_part.value
        return d


def class_size(spec: ConjClassSpec) -> int:
    n = math.factorial(spec.m) // centralizer_order_formula(spec.type)
    return n // 2 if spec.split_part is not None else n


def class_elements(spec: ConjClassSpec, cap: int = DEFAULT_CAP):
    """Elements of the class, sorted canonically, or OVERFLOW past ``cap``."""
    if class_size(spec) > cap:
        return OVERFLOW
    m = spec.m
    rep = spec.type.representative(m)
    gens = symmetric_group(m).generators
    # BFS tracking conjugator parity; only matters for split classes
    parity = {rep: 1}
    queue = deque([rep])
    while queue:
        y = queue.popleft()
        py = parity[y]
        for g in gens:
            z = conjugate(g, y)
            if z not in parity:
                parity[z] = py * sign(g)
                queue.append(z)
    if spec.split_part is None:
        return sorted(parity)
    want = 1 if spec.split_part is SplitPart.PLUS else -1
    return sorted(z for z, s in parity.items() if s == want)


def all_class_specs(m: int) -> list[ConjClassSpec]:
    """Every nontrivial class: odd types in S_m, even types in A_m (both parts if split)."""
    out = []
    for part in _partitions(m):
        t = CycleType.from_lengths(part)
        if t.nontrivial().counts == ():
            continue
        if t.parity() == -1:
            out.append(ConjClassSpec(m, t, Ambient.SYM))
        elif splits_in_Am(t):
            out.append(ConjClassSpec(m, t, Ambient.ALT, SplitPart.PLUS))
            out.append(ConjClassSpec(m, t, Ambient.ALT, SplitPart.MINUS))
        else:
            out.append(ConjClassSpec(m, t, Ambient.ALT))
    return out


def _partitions(n: int, largest: int | None = None) -> Iterable[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest
