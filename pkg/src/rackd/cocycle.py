"""Rack 2-cocycles with exact cyclotomic entries and the braid-equation check."""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Sequence

from .rack import FiniteRack

MAX_DEGREE = 4


@functools.lru_cache(maxsize=None)
def _cyclotomic_poly(N: int) -> tuple[int, ...]:
    """Coefficients of Φ_N, constant term first."""
    import sympy
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(N, x), x).all_coeffs()))


class Cyclotomic:
    """Element of Z[ζ_N] as an integer vector reduced modulo Φ_N."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs: Sequence[int]):
        self.N = N
        self.c = _reduce(N, list(coeffs))

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "Cyclotomic":
        v = [0] * N
        v[k % N] = 1
        return cls(N, v)

    @classmethod
    def one(cls, N: int) -> "Cyclotomic":
        return cls(N, [1])

    @classmethod
    def zero(cls, N: int) -> "Cyclotomic":
        return cls(N, [])

    def _lift(self, other) -> "Cyclotomic":
        if isinstance(other, int):
            return Cyclotomic(self.N, [other])
        if other.N != self.N:
            raise ValueError("different cyclotomic orders")
        return other

    def __add__(self, other) -> "Cyclotomic":
        o = self._lift(other)
        n = max(len(self.c), len(o.c))
        a = list(self.c) + [0] * (n - len(self.c))
        for i, x in enumerate(o.c):
            a[i] += x
        return Cyclotomic(self.N, a)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.N, [-x for x in self.c])

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-self._lift(other))

    def __mul__(self, other) -> "Cyclotomic":
        o = self._lift(other)
        if not self.c or not o.c:
            return Cyclotomic.zero(self.N)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    out[i + j] += x * y
        return Cyclotomic(self.N, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            inv = self.root_exponent()
            if inv is None:
                raise ValueError("only roots of unity are inverted")
            return Cyclotomic.zeta(self.N, -inv * (-k) % self.N)
        out, base = Cyclotomic.one(self.N), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Cyclotomic(self.N, [other])
        return isinstance(other, Cyclotomic) and self.N == other.N and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.N, self.c))

    def is_zero(self) -> bool:
        return not self.c

    def root_exponent(self) -> int | None:
        """k with self = ζ_N^k, or None."""
        for k in range(self.N):
            if self == Cyclotomic.zeta(self.N, k):
                return k
        return None

    def to_complex(self) -> complex:
        import cmath
        return sum(x * cmath.exp(2j * cmath.pi * i / self.N) for i, x in enumerate(self.c))

    def __repr__(self) -> str:
        k = self.root_exponent()
        if k is not None:
            return f"ζ{self.N}^{k}"
        return f"Cyclotomic({self.N}, {list(self.c)})"


def _reduce(N: int, a: list[int]) -> tuple[int, ...]:
    phi = _cyclotomic_poly(N)
    d = len(phi) - 1
    # Φ_N is monic
    for i in range(len(a) - 1, d - 1, -1):
        f = a[i]
        if f:
            for k in range(d + 1):
                a[i - d + k] -= f * phi[k]
    a = a[:d]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


# ---- small matrices over Z[ζ_N]

Mat = tuple[tuple[Cyclotomic, ...], ...]


def mat(N: int, rows: Sequence[Sequence]) -> Mat:
    """Matrix from entries given as Cyclotomic or as ζ-exponents (ints)."""
    return tuple(tuple(e if isinstance(e, Cyclotomic) else Cyclotomic.zeta(N, e) for e in r)
                 for r in rows)


def scalar(N: int, k: int) -> Mat:
    return ((Cyclotomic.zeta(N, k),),)


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k, m = len(a), len(b), len(b[0])
    N = a[0][0].N
    return tuple(tuple(sum((a[i][t] * b[t][j] for t in range(k)), Cyclotomic.zero(N))
                       for j in range(m)) for i in range(n))


# ---- cocycles

@dataclass
class Cocycle:
    """q(x, z) for x in X and z in X: a square matrix of size degrees[part(z)].

    One part gives a principal cocycle; several parts (a decomposition of X)
    give a non-principal one.
    """

    rack: FiniteRack
    N: int
    q: list[list[Mat]]
    parts: list[tuple[int, ...]] | None = None
    part_of: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.rack.size
        if self.parts is None:
            self.parts = [tuple(range(n))]
        self.part_of = [0] * n
        for i, p in enumerate(self.parts):
            for z in p:
                self.part_of[z] = i
        for x in range(n):
            for z in range(n):
                d = len(self.q[x][z])
                if d > MAX_DEGREE:
                    raise ValueError("matrix degree above cap")
                if d != self.degree(z):
                    raise ValueError(f"inconsistent degree at ({x},{z})")

    @property
    def principal(self) -> bool:
        return len(self.parts) == 1

    def degree(self, z: int) -> int:
        first = self.parts[self.part_of[z]][0]
        return len(self.q[0][first])

    def to_json(self) -> dict:
        return {
            "rack": self.rack.to_json(),
            "N": self.N,
            "parts": [list(p) for p in self.parts],
            "entries": [[[[list(e.c) for e in row] for row in m] for m in line] for line in self.q],
        }

    @classmethod
    def from_json(cls, d: dict | str) -> "Cocycle":
        if isinstance(d, str):
            d = json.loads(d)
        N = d["N"]
        q = [[tuple(tuple(Cyclotomic(N, e) for e in row) for row in m) for m in line]
             for line in d["entries"]]
        parts = [tuple(p) for p in d["parts"]] if d.get("parts") else None
        return cls(FiniteRack.from_json(d["rack"]), N, q, parts)


def constant_cocycle(r: FiniteRack, N: int, k: int) -> Cocycle:
    m = scalar(N, k)
    return Cocycle(r, N, [[m] * r.size for _ in range(r.size)])


def cocycle_from_exponents(r: FiniteRack, N: int, exps: Sequence[Sequence[int]],
                           parts=None) -> Cocycle:
    return Cocycle(r, N, [[scalar(N, e) for e in row] for row in exps], parts)


@dataclass
class CocycleReport:
    ok: bool
    violation: tuple | None = None


def validate_cocycle(c: Cocycle) -> CocycleReport:
    """q(x, y▷z) q(y, z) = q(x▷y, x▷z) q(x, z) for all x, y and z."""
    r, q = c.rack, c.q
    n = r.size
    for x in range(n):
        for y in range(n):
            xy = r.op(x, y)
            for z in range(n):
                lhs = mat_mul(q[x][r.op(y, z)], q[y][z])
                rhs = mat_mul(q[xy][r.op(x, z)], q[x][z])
                if lhs != rhs:
                    return CocycleReport(False, (x, y, z, c.part_of[z]))
    return CocycleReport(True)


def braiding_check(c: Cocycle) -> CocycleReport:
    """Braid equation for c(e_x v ⊗ e_y w) = e_{x▷y} q(x,y)w ⊗ e_x v on basis tensors."""
    r = c.rack
    n = r.size
    basis = [(x, a) for x in range(n) for a in range(c.degree(x))]
    zero = Cyclotomic.zero(c.N)

    def braid(u, v):
        """c on a pair of basis vectors: returns {(u', v'): coeff}."""
        (x, a), (y, b) = u, v
        z = r.op(x, y)
        m = c.q[x][y]
        return {((z, i), (x, a)): m[i][b] for i in range(len(m)) if not m[i][b].is_zero()}

    def apply(tensor: dict, pos: int) -> dict:
        out: dict = {}
        for key, coef in tensor.items():
            for pair, k in braid(key[pos], key[pos + 1]).items():
                nk = key[:pos] + pair + key[pos + 2:]
                out[nk] = out.get(nk, zero) + coef * k
        return {k: v for k, v in out.items() if not v.is_zero()}

    one = Cyclotomic.one(c.N)
    for u in basis:
        for v in basis:
            for w in basis:
                t = {(u, v, w): one}
                lhs = apply(apply(apply(t, 0), 1), 0)
                rhs = apply(apply(apply(t, 1), 0), 1)
                if lhs != rhs:
                    return CocycleReport(False, (u, v, w))
    return CocycleReport(True)


# ---- the map x ↦ g_x

def _g_action(c: Cocycle, x: int) -> dict:
    """g_x as a sparse matrix on the basis e_y ⊗ e_b: {(y,b): {(y',i): coeff}}."""
    r = c.rack
    out = {}
    for y in range(r.size):
        m = c.q[x][y]
        t = r.op(x, y)
        for b in range(len(m)):
            out[(y, b)] = {(t, i): m[i][b] for i in range(len(m)) if not m[i][b].is_zero()}
    return out


def _compose(f: dict, g: dict, zero: Cyclotomic) -> dict:
    """f∘g."""
    out = {}
    for key, col in g.items():
        acc: dict = {}
        for k1, c1 in col.items():
            for k2, c2 in f[k1].items():
                acc[k2] = acc.get(k2, zero) + c1 * c2
        out[key] = {k: v for k, v in acc.items() if not v.is_zero()}
    return out


def _freeze(f: dict):
    return tuple(sorted((k, tuple(sorted((kk, v.c) for kk, v in col.items()))) for k, col in f.items()))


def g_map_faithful(c: Cocycle) -> bool:
    """x ↦ g_x is injective; also asserts g_{x▷y} g_x = g_x g_y (a rack morphism)."""
    zero = Cyclotomic.zero(c.N)
    gs = [_g_action(c, x) for x in range(c.rack.size)]
    for x in range(c.rack.size):
        for y in range(c.rack.size):
            if _compose(gs[x], gs[y], zero) != _compose(gs[c.rack.op(x, y)], gs[x], zero):
                raise ValueError("g is not a rack morphism; the table is not a cocycle")
    frozen = [_freeze(g) for g in gs]
    return len(set(frozen)) == len(frozen)


def g_group_order(c: Cocycle, cap: int = 10**5) -> int | None:
    """Order of ⟨g_x⟩ by closure, or None past ``cap``."""
    zero = Cyclotomic.zero(c.N)
    gens = [_g_action(c, x) for x in range(c.rack.size)]
    ident = {k: {k: Cyclotomic.one(c.N)} for k in gens[0]}
    seen = {_freeze(ident)}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                p = _compose(g, h, zero)
                key = _freeze(p)
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        return None
                    nxt.append(p)
        frontier = nxt
    return len(seen)


# ---- Yetter-Drinfeld braiding of a class with a degree-one character

def least_conjugators(spec, cap: int = 10**5, prefer_even: bool = True) -> dict:
    """For each class element x, the least g in the ambient group with g σ g⁻¹ = x.

    With ``prefer_even`` the least even such g is taken whenever the coset has one.
    """
    from .group import OVERFLOW, centralizer_in_Sm, class_elements
    from .group import Ambient
    from .perm import conjugator, sign
    sigma = spec.representative()
    els = class_elements(spec, cap)
    cent = centralizer_in_Sm(sigma).closure(cap)
    if els is OVERFLOW or cent is OVERFLOW:
        raise ValueError("class or centralizer above cap")
    alt = spec.ambient is Ambient.ALT
    out = {}
    for x in els:
        c = conjugator(sigma, x)
        options = [c * z for z in cent]
        even = [g for g in options if sign(g) == 1]
        if alt or (prefer_even and even):
            options = even
        out[x] = min(options)
    return out


def yd_braiding(spec, rep, section: dict | None = None) -> Cocycle:
    """q(x, y) = ρ(g_{x▷y}⁻¹ x g_y) on the class rack; ρ must be a degree-one character.

    For an A_m class the character of the S_m-centralizer is restricted.
    """
    from .perm import conjugate
    from .reps import DegreeOneRep, rho_on_centralizer
    if not isinstance(rep, DegreeOneRep):
        raise TypeError("only degree-one characters are supported")
    sigma = spec.representative()
    g = section if section is not None else least_conjugators(spec)
    els = sorted(g)
    r = FiniteRack.from_permutations(els)
    N = rep.N
    q = []
    for x in els:
        row = []
        for y in els:
            c = g[conjugate(x, y)].inverse() * x * g[y]
            row.append(((rho_on_centralizer(sigma, rep, c),),))
        q.append(row)
    return Cocycle(r, N, q)


def exponent_table(c: Cocycle) -> list[list[int]] | None:
    """Degree-one cocycles with root-of-unity values as a table of ζ_N exponents."""
    out = []
    for row in c.q:
        line = []
        for m in row:
            if len(m) != 1:
                return None
            k = m[0][0].root_exponent()
            if k is None:
                return None
            line.append(k)
        out.append(line)
    return out
