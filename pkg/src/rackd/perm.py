"""Permutations of {1..m}, cycle types and the number-theoretic helpers."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class DegreeMismatch(ValueError):
    pass


class Permutation:
    """Immutable bijection of {1..m}.

    Internally stored as a 0-indexed image tuple ``arr`` (``arr[i] = σ(i+1)-1``).
    Products are right-to-left: ``a * b`` applies ``b`` first.
    """

    __slots__ = ("arr", "_hash")

    def __init__(self, arr: Iterable[int]):
        a = tuple(arr)
        if sorted(a) != list(range(len(a))):
            raise ValueError(f"not a bijection: {a}")
        self.arr = a
        self._hash = hash(a)

    @classmethod
    def _raw(cls, arr: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.arr = arr
        p._hash = hash(arr)
        return p

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls._raw(tuple(range(m)))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-indexed images ``[σ(1), ..., σ(m)]``."""
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]], m: int) -> "Permutation":
        arr = list(range(m))
        seen: set[int] = set()
        for cyc in cycles:
            c = list(cyc)
            for i, x in enumerate(c):
                if not 1 <= x <= m or x in seen:
                    raise ValueError(f"bad point {x} in cycle {c}")
                seen.add(x)
                arr[x - 1] = c[(i + 1) % len(c)] - 1
        return cls._raw(tuple(arr))

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 4 5)"``; ``"()"`` is the identity."""
        body = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\)\s*)*", body):
            raise ValueError(f"bad cycle notation: {text!r}")
        cycles = [[int(t) for t in re.split(r"[\s,]+", g.strip()) if t]
                  for g in re.findall(r"\(([^)]*)\)", body)]
        cycles = [c for c in cycles if c]
        top = max((max(c) for c in cycles), default=1)
        if m is None:
            m = top
        if top > m:
            raise ValueError(f"point {top} exceeds degree {m}")
        return cls.from_cycles(cycles, m)

    # -- basic data --
    @property
    def degree(self) -> int:
        return len(self.arr)

    @property
    def images(self) -> tuple:
        return tuple(i + 1 for i in self.arr)

    def __call__(self, i: int) -> int:
        return self.arr[i - 1] + 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.arr == other.arr

    def __lt__(self, other: "Permutation") -> bool:
        return self.arr < other.arr

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.arr)
        for i, x in enumerate(self.arr):
            inv[x] = i
        return Permutation._raw(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.arr))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self.arr)
        out = []
        for start in range(len(self.arr)):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = self.arr[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self.arr else 1

    def sign(self) -> int:
        return sign(self)

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self.arr) if i != x]

    def __str__(self) -> str:
        return format_perm(self)

    def __repr__(self) -> str:
        return f"Permutation({format_perm(self)!r}, m={self.degree})"


def format_perm(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def _check(a: Permutation, b: Permutation) -> None:
    if len(a.arr) != len(b.arr):
        raise DegreeMismatch(f"degrees {len(a.arr)} and {len(b.arr)} differ")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a∘b)(i) = a(b(i))."""
    _check(a, b)
    aa = a.arr
    return Permutation._raw(tuple([aa[x] for x in b.arr]))


def conjugate(g: Permutation, x: Permutation) -> Permutation:
    """g x g⁻¹, which sends g(i) to g(x(i))."""
    _check(g, x)
    ga = g.arr
    out = [0] * len(ga)
    for i, xi in enumerate(x.arr):
        out[ga[i]] = ga[xi]
    return Permutation._raw(tuple(out))


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths as a sorted tuple of (length, count) pairs."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "CycleType":
        return cls(tuple(sorted((j, n) for j, n in d.items() if n > 0)))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleType":
        d: dict[int, int] = {}
        for L in lengths:
            d[L] = d.get(L, 0) + 1
        return cls.from_dict(d)

    @classmethod
    def parse(cls, text: str) -> "CycleType":
        """Parse ``"1^2,2^2"`` or ``"2,3"``; an empty or ``"()"`` string is invalid."""
        d: dict[int, int] = {}
        for tok in re.split(r"[,\s]+", text.strip().strip("()")):
            if not tok:
                continue
            j, _, n = tok.partition("^")
            d[int(j)] = d.get(int(j), 0) + (int(n) if n else 1)
        if not d or any(j < 1 or n < 0 for j, n in d.items()):
            raise ValueError(f"bad cycle type: {text!r}")
        return cls.from_dict(d)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def degree(self) -> int:
        return sum(j * n for j, n in self.counts)

    def parity(self) -> int:
        return -1 if sum((j - 1) * n for j, n in self.counts) % 2 else 1

    def lengths(self) -> list[int]:
        return [j for j, n in self.counts for _ in range(n)]

    def nontrivial(self) -> "CycleType":
        return CycleType(tuple((j, n) for j, n in self.counts if j > 1))

    def pad(self, m: int) -> "CycleType":
        """Add fixed points up to degree m."""
        d = self.as_dict()
        extra = m - self.degree
        if extra < 0:
            raise ValueError("degree too small")
        d[1] = d.get(1, 0) + extra
        return CycleType.from_dict(d)

    def representative(self, m: int | None = None) -> Permutation:
        """Canonical element: cycles of increasing length on consecutive points, fixed points first."""
        m = self.degree if m is None else m
        cycles, nxt = [], 1
        for j in sorted(self.pad(m).lengths()):
            cycles.append(list(range(nxt, nxt + j)))
            nxt += j
        return Permutation.from_cycles([c for c in cycles if len(c) > 1], m)

    def __str__(self) -> str:
        return "(" + ",".join(f"{j}" if n == 1 else f"{j}^{n}" for j, n in self.counts) + ")"

    def label(self) -> str:
        return ",".join(f"{j}" if n == 1 else f"{j}^{n}" for j, n in self.counts)


def cycle_type(x: Permutation) -> CycleType:
    return CycleType.from_lengths(len(c) for c in x.cycles(include_fixed=True))


def even_odd_parts(x: Permutation) -> tuple[Permutation, Permutation]:
    """Split x into the product of its even-length cycles and its odd-length (>1) cycles."""
    m = x.degree
    cyc = x.cycles()
    even = Permutation.from_cycles([c for c in cyc if len(c) % 2 == 0], m)
    odd = Permutation.from_cycles([c for c in cyc if len(c) % 2 == 1], m)
    return even, odd


def conjugator(a: Permutation, b: Permutation) -> Permutation:
    """Some g with g a g⁻¹ = b (cycles matched in canonical order)."""
    _check(a, b)
    ca = sorted(a.cycles(include_fixed=True), key=len)
    cb = sorted(b.cycles(include_fixed=True), key=len)
    if [len(c) for c in ca] != [len(c) for c in cb]:
        raise ValueError("different cycle types")
    g = [0] * a.degree
    for x, y in zip(ca, cb):
        for i, j in zip(x, y):
            g[i - 1] = j - 1
    return Permutation._raw(tuple(g))


def sign(x: Permutation) -> int:
    return -1 if sum(len(c) - 1 for c in x.cycles()) % 2 else 1


def lambda_k(m: int, k: int) -> Permutation:
    """Permutation of Z/m (point i ↔ residue i-1) given by multiplication by k.

    Conjugating the m-cycle (1 2 ... m) by it yields its k-th power.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError("m must be odd and positive")
    if math.gcd(k, m) != 1:
        raise ValueError(f"gcd({k},{m}) != 1")
    return Permutation._raw(tuple((k * i) % m for i in range(m)))


def long_cycle(m: int) -> Permutation:
    return Permutation._raw(tuple((i + 1) % m for i in range(m)))


def jacobi(k: int, m: int) -> int:
    """Jacobi symbol (k/m) for odd positive m."""
    if m <= 0 or m % 2 == 0:
        raise ValueError("m must be odd and positive")
    k %= m
    result = 1
    while k:
        while k % 2 == 0:
            k //= 2
            if m % 8 in (3, 5):
                result = -result
        k, m = m, k
        if k % 4 == 3 and m % 4 == 3:
            result = -result
        k %= m
    return result if m == 1 else 0


def all_permutations(m: int) -> Iterator[Permutation]:
    from itertools import permutations
    for a in permutations(range(m)):
        yield Permutation._raw(a)


def juxtapose(mu: Permutation, tau: Permutation) -> Permutation:
    """μ⊥τ: τ acting on the points after deg(μ)."""
    d = mu.degree
    return Permutation._raw(mu.arr + tuple(x + d for x in tau.arr))


def embed(x: Permutation, m: int) -> Permutation:
    if m < x.degree:
        raise ValueError("cannot shrink degree")
    return Permutation._raw(x.arr + tuple(range(x.degree, m)))
