"""Commuting triples in a conjugacy class, their 3×3 diagonal braiding, and the A_4 × Z/r embedding."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .cocycle import Cyclotomic
from .group import Ambient, ConjClassSpec, GeneratedGroup, alternating_group, centralizer_in_Sm, class_elements
from .group import OVERFLOW
from .perm import Permutation, conjugate, conjugator, sign


class Verdict3(enum.Enum):
    INFINITE_DIM_ALL_REPS = "INFINITE_DIM_ALL_REPS"
    INCONCLUSIVE = "INCONCLUSIVE"


class _NotFound:
    def __init__(self, stats: dict | None = None):
        self.stats = stats or {}

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"NOT_FOUND({self.stats})"


@dataclass
class CommutingTriple:
    sigma1: Permutation
    sigma2: Permutation
    sigma3: Permutation
    g2: Permutation
    g3: Permutation
    h: int
    group: GeneratedGroup
    label: str = ""

    @property
    def sigmas(self) -> tuple[Permutation, Permutation, Permutation]:
        return self.sigma1, self.sigma2, self.sigma3

    @property
    def conjugators(self) -> tuple[Permutation, Permutation, Permutation]:
        return Permutation.identity(self.sigma1.degree), self.g2, self.g3

    def gamma(self) -> list[list[Permutation]]:
        """γ_ij = g_j⁻¹ σ_i g_j."""
        return [[g.inverse() * s * g for g in self.conjugators] for s in self.sigmas]

    def expected_gamma(self) -> list[list[Permutation]]:
        s1, s2, s3, h = self.sigma1, self.sigma2, self.sigma3, self.h
        inv = s1.inverse()
        return [[s1, s3, s2], [s2, s1, s2 ** h * inv], [s3, s3 ** h * inv, s1]]

    def check(self) -> dict[str, bool]:
        s1, s2, s3 = self.sigmas
        c = {
            "in_group": all(self.group.contains(x) for x in (s1, s2, s3, self.g2, self.g3)),
            "distinct": len({s1, s2, s3}) == 3,
            "conjugates": all(conjugate(g, s1) == s for g, s in zip(self.conjugators, self.sigmas)),
            "h_odd": self.h % 2 == 1,
            "power": s1 ** self.h == s2 * s3,
            "g_products_centralize": all(_commute(x, s1) for x in (self.g3 * self.g2, self.g2 * self.g3)),
            "commuting": all(_commute(a, b) for a, b in itertools.combinations(self.sigmas, 2)),
        }
        gam = self.gamma()
        c["gamma_centralizes"] = all(_commute(x, s1) for row in gam for x in row)
        c["gamma_matches"] = gam == self.expected_gamma()
        return c

    def ok(self) -> bool:
        return all(self.check().values())

    def to_json(self) -> dict:
        return {
            "kind": "commuting_triple",
            "label": self.label,
            "sigma": [str(x) for x in self.sigmas],
            "g2": str(self.g2), "g3": str(self.g3), "h": self.h,
            "degree": self.sigma1.degree,
            "group_generators": [str(g) for g in self.group.generators],
            "checks": self.check(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "CommutingTriple":
        m = d["degree"]
        P = lambda s: Permutation.parse(s, m)
        s1, s2, s3 = (P(x) for x in d["sigma"])
        grp = GeneratedGroup([P(g) for g in d["group_generators"]], degree=m)
        return cls(s1, s2, s3, P(d["g2"]), P(d["g3"]), d["h"], grp, d.get("label", ""))


def _commute(a: Permutation, b: Permutation) -> bool:
    return a * b == b * a


# ---------------------------------------------------------------- diagram

@dataclass
class TriangleDiagram:
    """Braiding matrix of span{g_i w}; exponents of ζ_N.

    ``raw`` comes from the eigenvalues λ_i of σ_i on the common eigenvector w,
    with λ3 determined by λ1^h = λ2 λ3. ``dynkin`` holds the diagram data:
    vertices λ1 and edges q_ij q_ji.
    """

    N: int
    h: int
    l1: int
    l2: int
    raw: list[list[int]] = field(init=False)
    dynkin: dict = field(init=False)

    def __post_init__(self):
        N, h, l1, l2 = self.N, self.h, self.l1, self.l2
        l3 = (h * l1 - l2) % N
        self.raw = [[l1, l3, l2], [l2, l1, (h * l2 - l1) % N], [l3, (h * l3 - l1) % N, l1]]
        self.dynkin = {
            "vertices": [l1 % N] * 3,
            "edges": {(0, 1): h * l1 % N, (0, 2): h * l1 % N, (1, 2): (h * h - 2) * l1 % N},
        }

    def compatible(self) -> bool:
        q = self.raw
        diag_ok = all(q[i][i] == self.dynkin["vertices"][i] for i in range(3))
        return diag_ok and all((q[i][j] + q[j][i]) % self.N == e for (i, j), e in self.dynkin["edges"].items())

    def lambda1(self) -> Cyclotomic:
        return Cyclotomic.zeta(self.N, self.l1)


def finiteness_obstruction(l1: int, N: int, h: int) -> str:
    """Which step rules out a finite-dimensional Nichols algebra for this λ1 = ζ_N^l1.

    The last branch is an imported fact about diagonal braidings of this triangle shape:
    finite dimension would need λ1 = -1 and h even.
    """
    if l1 % N == 0:
        return "lambda1 = 1"
    if (h * l1) % N == 0:
        return "lambda1^h = 1: affine A1 subdiagram"
    return "cited: finite needs lambda1 = -1 and h even"


def triangle_verdict(t: CommutingTriple) -> Verdict3:
    if not t.ok():
        return Verdict3.INCONCLUSIVE
    # with h odd, every λ1 hits one of the obstructions above
    return Verdict3.INFINITE_DIM_ALL_REPS


# ---------------------------------------------------------------- searches

def _centralizer_elements(x: Permutation, ambient: Ambient) -> list[Permutation]:
    els = centralizer_in_Sm(x).closure(10**6)
    if els is OVERFLOW:
        raise ValueError("centralizer too large")
    if ambient is Ambient.ALT:
        els = [e for e in els if sign(e) == 1]
    return sorted(els)


def _least_odd_power(s1: Permutation, target: Permutation) -> int | None:
    n = s1.order()
    for h in range(1, 2 * n + 1, 2):
        if s1 ** h == target:
            return h
    return None


def find_triple(spec: ConjClassSpec, budget: int = 10**5) -> CommutingTriple | _NotFound:
    """Ordered scan over commuting pairs (σ2, σ3) in the class of the representative."""
    s1 = spec.representative()
    els = class_elements(spec, cap=budget)
    if els is OVERFLOW:
        return _NotFound({"reason": "class above budget"})
    group = spec.group()
    cent_sym = _centralizer_elements(s1, Ambient.SYM)
    candidates = [x for x in els if x != s1 and _commute(x, s1)]
    pairs = 0
    for s2, s3 in itertools.permutations(candidates, 2):
        if not _commute(s2, s3):
            continue
        h = _least_odd_power(s1, s2 * s3)
        if h is None:
            continue
        pairs += 1
        if pairs > budget:
            return _NotFound({"reason": "budget", "pairs": pairs})
        found = _conjugators(s1, s2, s3, cent_sym, spec.ambient)
        if found:
            g2, g3 = found
            t = CommutingTriple(s1, s2, s3, g2, g3, h, group, spec.label())
            if t.ok():
                return t
    return _NotFound({"pairs": pairs, "candidates": len(candidates)})


def _conjugators(s1, s2, s3, cent_sym, ambient):
    """g2, g3 in the ambient group with g_i σ1 g_i⁻¹ = σ_i and g3g2, g2g3 centralizing σ1."""
    in_group = (lambda g: sign(g) == 1) if ambient is Ambient.ALT else (lambda g: True)
    cent = [z for z in cent_sym if in_group(z)]
    c2 = conjugator(s1, s2)
    for z2 in cent_sym:
        g2 = c2 * z2
        if not in_group(g2):
            continue
        for z in cent:
            g3 = z * g2.inverse()
            if conjugate(g3, s1) == s3 and _commute(g2 * g3, s1):
                return g2, g3
    return None


# ---------------------------------------------------------------- A_4 × Z/r

def a4_times_cyclic(r: int) -> tuple[GeneratedGroup, Permutation]:
    """A_4 on points 1..4 and Z/r generated by an r-cycle on 5..4+r."""
    if r < 1 or r % 2 == 0:
        raise ValueError("r must be odd and positive")
    m = 4 + (r if r > 1 else 0)
    tau = Permutation.from_cycles([list(range(5, 5 + r))], m) if r > 1 else Permutation.identity(m)
    gens = [Permutation.from_cycles([[1, 2, 3]], m), Permutation.from_cycles([[2, 3, 4]], m)]
    if r > 1:
        gens.append(tau)
    return GeneratedGroup(gens, degree=m), tau


def canonical_a4_triple(r: int) -> CommutingTriple:
    G, tau = a4_times_cyclic(r)
    m = tau.degree
    P = lambda s: Permutation.parse(s, m)
    s1, s2, s3 = P("(1 2)(3 4)") * tau, P("(1 3)(2 4)") * tau, P("(1 4)(2 3)") * tau
    g2 = P("(1 3 2)")
    return CommutingTriple(s1, s2, s3, g2, g2.inverse(), r + 2, G, f"A_4 x Z/{r}")


def a4xcr_applies(spec: ConjClassSpec) -> bool:
    d = spec.type.as_dict()
    n2 = d.get(2, 0)
    return (spec.ambient is Ambient.ALT and spec.m >= 5 and n2 > 0 and n2 % 2 == 0
            and all(j % 2 == 1 for j in d if j != 2))


def a4xcr_embed(spec: ConjClassSpec) -> CommutingTriple:
    """Push the canonical triple of A_4 × Z/r into A_m: diagonally on the 2-cycle blocks, α(τ) = σ_o."""
    if not a4xcr_applies(spec):
        raise ValueError(f"type must be (1^n1, 2^n2, odd part) with n2 even and positive: {spec.label()}")
    m = spec.m
    d = spec.type.as_dict()
    n1, k = d.get(1, 0), d[2] // 2
    rep = spec.representative()
    sigma_o = Permutation.from_cycles([c for c in rep.cycles() if len(c) % 2 == 1], m)
    r = sigma_o.order()

    def delta(x: str) -> Permutation:
        """Diagonal image of an A_4 element given as cycle text on 1..4."""
        base = Permutation.parse(x, 4)
        cycles = []
        for b in range(k):
            off = n1 + 4 * b
            cycles.extend([[off + p for p in c] for c in base.cycles()])
        return Permutation.from_cycles(cycles, m)

    s1 = delta("(1 2)(3 4)") * sigma_o
    s2 = delta("(1 3)(2 4)") * sigma_o
    s3 = delta("(1 4)(2 3)") * sigma_o
    g2 = delta("(1 3 2)")
    t = CommutingTriple(s1, s2, s3, g2, g2.inverse(), r + 2, alternating_group(m), spec.label())
    if s1 != rep:
        raise AssertionError("embedding does not hit the class representative")
    if not t.ok():
        raise AssertionError(f"embedded triple fails re-verification: {t.check()}")
    return t
