"""Affine racks over F_p^t, their layered double racks, and the associated type-D tests."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .perm import Permutation
from .rack import FiniteRack, is_morphism

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


# ---- small linear algebra mod p

def mat_identity(t: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(t)) for i in range(t))


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    t = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(t)) % p for j in range(t))
                 for i in range(t))


def mat_add(a: Matrix, b: Matrix, p: int, sign: int = 1) -> Matrix:
    return tuple(tuple((x + sign * y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_pow(a: Matrix, k: int, p: int) -> Matrix:
    result, base = mat_identity(len(a)), a
    if k < 0:
        raise ValueError("use a nonnegative exponent reduced mod the order")
    while k:
        if k & 1:
            result = mat_mul(result, base, p)
        base = mat_mul(base, base, p)
        k >>= 1
    return result


def mat_vec(a: Matrix, v: Vector, p: int) -> Vector:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) % p for i in range(len(a)))


def mat_is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_rank(a: Matrix, p: int) -> int:
    rows = [list(r) for r in a]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c] % p:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def mat_invertible(a: Matrix, p: int) -> bool:
    return mat_rank(a, p) == len(a)


def as_matrix(T) -> Matrix:
    if isinstance(T, int):
        return ((T,),)
    return tuple(tuple(int(x) for x in row) for row in T)


def companion_matrix(poly: Sequence[int], p: int) -> Matrix:
    """Companion matrix of the monic polynomial with coefficients ``poly`` (constant term first, leading 1 omitted or included)."""
    c = [x % p for x in poly]
    if len(c) >= 2 and c[-1] == 1:
        c = c[:-1]
    t = len(c)
    rows = [[0] * t for _ in range(t)]
    for i in range(1, t):
        rows[i][i - 1] = 1
    for i in range(t):
        rows[i][t - 1] = (-c[i]) % p
    return tuple(tuple(r) for r in rows)


# ---- affine racks

@dataclass(frozen=True)
class AffineRack:
    """(F_p^t, T) with x▷y = (1−T)x + Ty."""

    p: int
    T: Matrix

    def __post_init__(self):
        object.__setattr__(self, "T", tuple(tuple(x % self.p for x in r) for r in as_matrix(self.T)))
        if not mat_invertible(self.T, self.p):
            raise ValueError("T must be invertible")

    @property
    def t(self) -> int:
        return len(self.T)

    @property
    def size(self) -> int:
        return self.p ** self.t

    def vectors(self) -> list[Vector]:
        return [tuple(reversed(v)) for v in itertools.product(range(self.p), repeat=self.t)]

    def order(self) -> int:
        """Least d ≥ 1 with T^d = id."""
        ident, M, d = mat_identity(self.t), self.T, 1
        while M != ident:
            M = mat_mul(M, self.T, self.p)
            d += 1
        return d

    def power(self, k: int) -> Matrix:
        return mat_pow(self.T, k % self.order(), self.p)

    def act(self, x: Vector, y: Vector) -> Vector:
        p, T = self.p, self.T
        Ty, Tx = mat_vec(T, y, p), mat_vec(T, x, p)
        return tuple((a - b + c) % p for a, b, c in zip(x, Tx, Ty))

    def rack(self) -> FiniteRack:
        return FiniteRack.from_function(self.vectors(), self.act)

    def fixed_space_trivial(self) -> bool:
        """A^T = 0, i.e. id − T invertible."""
        return mat_invertible(mat_add(mat_identity(self.t), self.T, self.p, -1), self.p)

    def permutation_images(self) -> list[Permutation]:
        """ψ(b) = (x ↦ Tx + b) as permutations of the p^t points (vector order, 1-indexed)."""
        vecs = self.vectors()
        idx = {v: i for i, v in enumerate(vecs)}
        out = []
        for b in vecs:
            out.append(Permutation._raw(tuple(
                idx[tuple((a + c) % self.p for a, c in zip(mat_vec(self.T, x, self.p), b))]
                for x in vecs)))
        return out


def make_affine(p: int, T) -> AffineRack:
    return AffineRack(p, as_matrix(T))


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    import sympy
    x = sympy.Symbol("x")
    expr = sum(int(c) * x**i for i, c in enumerate(poly))
    return bool(sympy.Poly(expr, x, modulus=p).is_irreducible)


def companion_affine(p: int, poly: Sequence[int]) -> AffineRack:
    """Simple affine rack from a monic irreducible polynomial other than X and X − 1."""
    c = [x % p for x in poly]
    if c[-1] != 1:
        raise ValueError("polynomial must be monic")
    if not is_irreducible(c, p):
        raise ValueError("polynomial is reducible")
    if len(c) == 2 and c[0] in (0, p - 1):
        raise ValueError("X and X − 1 are excluded")
    return AffineRack(p, companion_matrix(c, p))


def simple_affine_racks(q: int) -> list[AffineRack]:
    """All companion racks of order q = p^t (one per admissible irreducible polynomial)."""
    import sympy
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ValueError("q must be a prime power")
    (p, t), = fac.items()
    out = []
    for low in itertools.product(range(p), repeat=t):
        poly = list(low) + [1]
        if t == 1 and low[0] in (0, p - 1):
            continue
        if poly[0] == 0 or not is_irreducible(poly, p):
            continue
        out.append(AffineRack(p, companion_matrix(poly, p)))
    return out


# ---- double racks

@dataclass
class DoubleAffine:
    """Q^[1,j]: layers (v, T) and (w, T^j) with (v,T^h)▷(w,T^k) = (T^h w + (id − T^k)v, T^k)."""

    base: AffineRack
    j: int
    rack: FiniteRack = field(init=False, repr=False)

    def __post_init__(self):
        d = self.base.order()
        self.j %= d
        vecs = self.base.vectors()
        self.labels = [(v, 1) for v in vecs] + [(v, self.j) for v in vecs]
        n = len(vecs)
        idx = {v: i for i, v in enumerate(vecs)}
        p = self.base.p
        ident = mat_identity(self.base.t)

        def action(M: Matrix) -> list[int]:
            return [idx[mat_vec(M, v, p)] for v in vecs]

        add = [[idx[tuple((x + y) % p for x, y in zip(u, v))] for v in vecs] for u in vecs]
        exps = (1, self.j)
        rot = {h: action(self.base.power(h)) for h in exps}
        shear = {k: action(mat_add(ident, self.base.power(k), p, -1)) for k in exps}
        table = []
        for a in range(2 * n):
            h = exps[a >= n]
            va = a % n
            row = []
            for b in range(2 * n):
                k = exps[b >= n]
                res = add[rot[h][b % n]][shear[k][va]]
                row.append(res + (n if b >= n else 0))
            table.append(row)
        self.rack = FiniteRack(table, self.labels)

    @property
    def layers(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        n = self.base.size
        return tuple(range(n)), tuple(range(n, 2 * n))


@functools.lru_cache(maxsize=256)
def double_rack(base: AffineRack, j: int) -> DoubleAffine:
    return DoubleAffine(base, j)


def quantum_integer(base: AffineRack, j: int) -> Matrix:
    """(j)_T = Σ_{i<j} T^i."""
    p, acc, M = base.p, mat_identity(base.t), mat_identity(base.t)
    acc = tuple(tuple(0 for _ in r) for r in acc)
    for _ in range(j):
        acc = mat_add(acc, M, p)
        M = mat_mul(M, base.T, p)
    return acc


def layer_isomorphism(base: AffineRack, j: int) -> dict[int, int] | None:
    """Verified isomorphism (Q^1)^[1,j] → Q^[1,j] when (j)_T is invertible, else None."""
    from .rack import amalgam
    jj = j % base.order()
    if jj == 0:
        return None
    qj = quantum_integer(base, jj)
    if not mat_invertible(qj, base.p):
        return None
    dbl = double_rack(base, jj)
    src = amalgam(base.rack(), jj)
    vecs = base.vectors()
    idx = {v: i for i, v in enumerate(vecs)}
    n = len(vecs)
    f = {i: i for i in range(n)}
    for i, v in enumerate(vecs):
        f[n + i] = n + idx[mat_vec(qj, v, base.p)]
    if not is_morphism(src, dbl.rack, f):
        raise AssertionError("layer map is not a rack morphism")
    return f


# ---- type-D criteria

class _Fails:
    def __repr__(self) -> str:
        return "CONDITION_FAILS"

    def __bool__(self) -> bool:
        return False


CONDITION_FAILS = _Fails()


@dataclass(frozen=True)
class AffineWitness:
    double: DoubleAffine = field(repr=False)
    r: int
    s: int

    def labels(self):
        return self.double.labels[self.r], self.double.labels[self.s]


def collapse_matrix(base: AffineRack, j: int) -> Matrix:
    """(id + T^{j+1})(id − T)."""
    p, I = base.p, mat_identity(base.t)
    return mat_mul(mat_add(I, base.power(j + 1), p), mat_add(I, base.T, p, -1), p)


def inequality_holds(r: FiniteRack, a: int, b: int) -> bool:
    """a▷(b▷(a▷b)) ≠ b."""
    return r.op(a, r.op(b, r.op(a, b))) != b


def type_d_condition(base: AffineRack, j: int):
    """Witness r=(0,T), s=(v,T^j) when the collapse matrix is nonzero, else CONDITION_FAILS."""
    M = collapse_matrix(base, j)
    if mat_is_zero(M):
        return CONDITION_FAILS
    col = next(c for c in range(base.t) if any(M[i][c] for i in range(base.t)))
    v = tuple(int(i == col) for i in range(base.t))
    dbl = double_rack(base, j)
    n = base.size
    zero = base.vectors().index(tuple([0] * base.t))
    r, s = zero, n + base.vectors().index(v)
    if not inequality_holds(dbl.rack, r, s):
        raise AssertionError("algebraic witness failed direct evaluation")
    return AffineWitness(dbl, r, s)


def brute_force_witness(base: AffineRack, j: int) -> tuple[int, int] | None:
    dbl = double_rack(base, j)
    R, S = dbl.layers
    for a in R:
        for b in S:
            if inequality_holds(dbl.rack, a, b):
                return a, b
    return None


def predicted_exceptions(base: AffineRack) -> set[int]:
    """Exponents j mod d excluded for a simple affine rack: d/2 − 1 (p odd, d even) or d − 1 (p = 2)."""
    d = base.order()
    if base.p == 2:
        return {(d - 1) % d}
    return {d // 2 - 1} if d % 2 == 0 else set()


@dataclass
class CriterionReport:
    applicable: bool
    hypotheses: dict[str, bool]
    R: list[Permutation] = field(default_factory=list)
    S: list[Permutation] = field(default_factory=list)
    r: Permutation | None = None
    s: Permutation | None = None


def quasi_real_affine_criterion(in_class, base: AffineRack, j: int,
                                psi: Sequence[Permutation]) -> CriterionReport:
    """Given a monomorphism ψ of the affine rack into a class closed under x ↦ x^j,
    build ψ(A) ∪ ψ(A)^j and a witness pair, reporting each hypothesis.

    ``in_class`` is a membership predicate or a collection of class elements.
    """
    p, I = base.p, mat_identity(base.t)
    if not callable(in_class):
        members = set(in_class)
        in_class = members.__contains__
    images = list(psi)
    powers = [x ** j for x in images]
    hyp = {
        "psi_injective": len(set(images)) == len(images),
        "psi_morphism": _psi_is_morphism(base, images),
        "image_in_class": all(in_class(x) for x in images),
        "quasi_real": all(in_class(x) for x in powers) and all(x != y for x, y in zip(images, powers)),
        "id_minus_Tj_invertible": mat_invertible(mat_add(I, base.power(j), p, -1), p),
        "id_plus_Tj1_nonzero": not mat_is_zero(mat_add(I, base.power(j + 1), p)),
    }
    hyp["disjoint"] = not (set(images) & set(powers))
    if not all(hyp.values()):
        return CriterionReport(False, hyp)
    for a in images:
        for b in powers:
            if _conj3(a, b) != b:
                return CriterionReport(True, hyp, images, powers, a, b)
    hyp["witness_found"] = False
    return CriterionReport(False, hyp)


def _conj3(a: Permutation, b: Permutation) -> Permutation:
    from .perm import conjugate
    return conjugate(a, conjugate(b, conjugate(a, b)))


def _psi_is_morphism(base: AffineRack, images: Sequence[Permutation]) -> bool:
    from .perm import conjugate
    vecs = base.vectors()
    idx = {v: i for i, v in enumerate(vecs)}
    return all(conjugate(images[i], images[k]) == images[idx[base.act(x, y)]]
               for i, x in enumerate(vecs) for k, y in enumerate(vecs))
