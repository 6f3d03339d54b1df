"""Degree-one characters of centralizers in S_m, the scalar q_σσ, and the survivor tables."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

from .cocycle import Cyclotomic
from .group import Ambient, ConjClassSpec, all_class_specs
from .perm import CycleType, Permutation, cycle_type


class Mu(enum.Enum):
    EPSILON = "epsilon"
    SGN = "sgn"


@dataclass(frozen=True)
class DegreeOneRep:
    """χ⃗_{t_j} ⊗ μ_j for every cycle length j present in the type.

    ``mu`` only lists lengths with n_j ≥ 2; for n_j = 1 the symmetric factor is
    the trivial group and carries no choice.
    """

    type: CycleType
    t: tuple[tuple[int, int], ...]
    mu: tuple[tuple[int, Mu], ...] = ()

    def __post_init__(self):
        counts = self.type.as_dict()
        if sorted(j for j, _ in self.t) != sorted(counts):
            raise ValueError("one exponent per cycle length")
        for j, tj in self.t:
            if not 0 <= tj < j:
                raise ValueError(f"t_{j} out of range")
        if sorted(j for j, _ in self.mu) != sorted(j for j, n in counts.items() if n >= 2):
            raise ValueError("μ is given exactly for lengths with n_j ≥ 2")

    @property
    def N(self) -> int:
        return math.lcm(2, *(j for j, _ in self.t))

    def t_of(self, j: int) -> int:
        return dict(self.t)[j]

    def mu_of(self, j: int) -> Mu:
        return dict(self.mu).get(j, Mu.EPSILON)

    def label(self) -> str:
        parts = []
        mus = dict(self.mu)
        for j, tj in self.t:
            s = f"rho{j}=chi{tj}"
            if j in mus:
                s += f"(x){mus[j].value}"
            parts.append(s)
        return "; ".join(parts)

    def to_json(self) -> dict:
        return {"type": self.type.label(), "t": {str(j): tj for j, tj in self.t},
                "mu": {str(j): m.value for j, m in self.mu}}

    @classmethod
    def from_json(cls, d: dict) -> "DegreeOneRep":
        t = CycleType.parse(d["type"])
        return cls(t, tuple(sorted((int(j), v) for j, v in d["t"].items())),
                   tuple(sorted((int(j), Mu(v)) for j, v in d.get("mu", {}).items())))


def enumerate_degree_one(t: CycleType) -> list[DegreeOneRep]:
    counts = t.counts
    t_choices = [range(j) for j, _ in counts]
    mu_lengths = [j for j, n in counts if n >= 2]
    out = []
    for ts in itertools.product(*t_choices):
        for mus in itertools.product(list(Mu), repeat=len(mu_lengths)):
            out.append(DegreeOneRep(t, tuple((j, tj) for (j, _), tj in zip(counts, ts)),
                                    tuple(zip(mu_lengths, mus))))
    return out


def q_sigma_sigma(t: CycleType, rep: DegreeOneRep) -> Cyclotomic:
    """ρ(σ) = ∏ ω_j^{t_j n_j}; σ = ∏ A_{l,j} and μ is trivial on the cycles themselves."""
    N = rep.N
    k = sum(rep.t_of(j) * n * (N // j) for j, n in t.counts)
    return Cyclotomic.zeta(N, k)


def rho_on_centralizer(sigma: Permutation, rep: DegreeOneRep, c: Permutation) -> Cyclotomic:
    """Evaluate the character on an element c commuting with sigma.

    c permutes the cycles of sigma (each based at its least point). It factors as
    a product of cycle powers A^{e_l} times a cycle permutation π that respects
    base points, and ρ(c) = ∏_j ω_j^{t_j Σ e_l} μ_j(π_j).
    """
    if c * sigma != sigma * c:
        raise ValueError("element does not centralize sigma")
    if cycle_type(sigma) != rep.type:
        raise ValueError("representation is for a different cycle type")
    N = rep.N
    cycles_by_len: dict[int, list[tuple[int, ...]]] = {}
    for cyc in sigma.cycles(include_fixed=True):
        cycles_by_len.setdefault(len(cyc), []).append(cyc)
    k = 0
    negate = False
    for j, cycs in cycles_by_len.items():
        where = {p: (l, i) for l, cyc in enumerate(cycs) for i, p in enumerate(cyc)}
        pi = []
        for cyc in cycs:
            l2, e = where[c(cyc[0])]
            pi.append(l2)
            k += rep.t_of(j) * e * (N // j)
        if rep.mu_of(j) is Mu.SGN and _perm_sign(pi) == -1:
            negate = True
    k += N // 2 if negate else 0
    return Cyclotomic.zeta(N, k)


def _perm_sign(images: list[int]) -> int:
    seen, s = [False] * len(images), 1
    for i in range(len(images)):
        if not seen[i]:
            L, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = images[j]
                L += 1
            if L % 2 == 0:
                s = -s
    return s


# ---------------------------------------------------------------- tables

class Kill(enum.Enum):
    TYPE_D = "TYPE_D"
    ABELIAN_TRIPLE = "ABELIAN_TRIPLE"
    CITED_FACT = "CITED_FACT"


@dataclass
class PairStatus:
    """One row: a class with one degree-one rep, or with every rep when ``rep`` is None."""

    spec: ConjClassSpec
    rep: DegreeOneRep | None
    survives: bool
    reason: Kill | None = None
    source: str | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "class": self.spec.to_json(),
            "rep": self.rep.to_json() if self.rep else "all",
            "status": "SURVIVES" if self.survives else "KILLED",
            "reason": self.reason.value if self.reason else None,
            "source": self.source,
            "detail": self.detail,
        }

    def line(self) -> str:
        rep = self.rep.label() if self.rep else self.detail.get("scope", "all reps")
        if self.survives:
            return f"{self.spec.label():28s} {rep:40s} SURVIVES ({self.source})"
        tag = self.reason.value + (f" [{self.source}]" if self.source else "")
        return f"{self.spec.label():28s} {rep:40s} KILLED {tag}"


@dataclass(frozen=True)
class CitedFact:
    """A result imported from the literature: which classes it covers and its citation."""

    source: str
    ambient: Ambient
    covers: tuple[str, ...]
    note: str = ""

    def matches(self, spec: ConjClassSpec) -> bool:
        return spec.ambient is self.ambient and _pattern(spec) in self.covers


def _pattern(spec: ConjClassSpec) -> str:
    """Coarse class pattern used by the fact ledger, e.g. 'p', '1,p', '1^n,3', '3^2@6'."""
    d = spec.type.as_dict()
    n1 = d.pop(1, 0)
    if len(d) == 1 and list(d.values()) == [1]:
        (j,) = d
        if _is_prime(j) and j > 2 and n1 <= 1:
            return "1,p" if n1 else "p"
        if j == 3:
            return "1^n,3"
    return spec.type.label() + f"@{spec.m}"


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % q for q in range(2, math.isqrt(n) + 1))


CITED_FACTS = (
    CitedFact("AZ Th.1", Ambient.SYM, ("p", "1,p", "1^n,3", "3^2@6")),
    CitedFact("AZ Th.1", Ambient.SYM, ("1,2^2@5", "1^2,2^2@6", "2^2,3@7")),
    CitedFact("AF1 Th.1(B)(i)", Ambient.SYM, ("2^4@8",)),
    CitedFact("AF2 Th.2.3", Ambient.ALT, ("p", "1,p", "1^n,3", "3^2@6")),
)

# Imported restriction on the representations of the remaining odd classes:
# finite dimension forces q_σσ = -1, and only degree-one reps can remain.
AFZ_SOURCE = "afz"


def cited_fact_for(spec: ConjClassSpec) -> CitedFact | None:
    for f in CITED_FACTS:
        if f.matches(spec):
            return f
    return None


def _has_higher_degree_reps(t: CycleType) -> bool:
    """The centralizer is non-abelian: some n_j ≥ 3, or n_j = 2 with j ≥ 2."""
    return any(n >= 3 or (n == 2 and j >= 2) for j, n in t.counts)


def table_specs(m: int, ambient: Ambient) -> list[ConjClassSpec]:
    """Nontrivial classes of S_m (every type) or of A_m (even types, both parts when split)."""
    if ambient is Ambient.ALT:
        return [s for s in all_class_specs(m) if s.ambient is Ambient.ALT]
    out = []
    for s in all_class_specs(m):
        if s.ambient is Ambient.SYM:
            out.append(s)
        elif s.split_part is None or s.split_part.value == "plus":
            out.append(ConjClassSpec(m, s.type, Ambient.SYM))
    return sorted(out, key=lambda s: s.type.label())


def survivor_tables(m: int, ambient: Ambient | str = Ambient.SYM, budget: int = 5000) -> list[PairStatus]:
    """Join type-D verdicts, abelian triples and cited facts into one row per kill or survivor."""
    from .abelian import a4xcr_applies, a4xcr_embed, triangle_verdict, Verdict3
    from .typed import Status, classify

    ambient = Ambient(ambient) if isinstance(ambient, str) else ambient
    rows: list[PairStatus] = []
    for spec in table_specs(m, ambient):
        v = classify(spec, budget)
        if v.status is Status.TYPE_D:
            rows.append(PairStatus(spec, None, False, Kill.TYPE_D, v.witness.provenance))
            continue
        if ambient is Ambient.ALT and a4xcr_applies(spec):
            t3 = a4xcr_embed(spec)
            if triangle_verdict(t3) is Verdict3.INFINITE_DIM_ALL_REPS:
                rows.append(PairStatus(spec, None, False, Kill.ABELIAN_TRIPLE, "commuting triple",
                                       {"h": t3.h}))
                continue
        fact = cited_fact_for(spec)
        if fact is not None:
            rows.append(PairStatus(spec, None, False, Kill.CITED_FACT, fact.source))
            continue
        if ambient is Ambient.ALT:
            rows.append(PairStatus(spec, None, True, None, "no kill available"))
            continue
        rows.extend(_rep_rows(spec))
    return rows


def _rep_rows(spec: ConjClassSpec) -> list[PairStatus]:
    rows = []
    for rep in enumerate_degree_one(spec.type):
        q = q_sigma_sigma(spec.type, rep)
        if q == -1:
            rows.append(PairStatus(spec, rep, True, None, "q_sigma_sigma = -1"))
        else:
            rows.append(PairStatus(spec, rep, False, Kill.CITED_FACT, AFZ_SOURCE,
                                   {"q_sigma_sigma": repr(q)}))
    if _has_higher_degree_reps(spec.type):
        rows.append(PairStatus(spec, None, False, Kill.CITED_FACT, AFZ_SOURCE,
                               {"scope": "representations of degree > 1"}))
    return rows


def survivors(rows: list[PairStatus]) -> list[PairStatus]:
    return [r for r in rows if r.survives]


def abelianization_order(t: CycleType) -> int:
    """|C/[C,C]| for the S_m-centralizer of the canonical element; oracle for the rep count."""
    from .group import GeneratedGroup, centralizer_in_Sm
    sigma = t.representative()
    C = centralizer_in_Sm(sigma)
    gens = list(C.generators)
    if not gens:
        return 1
    comm = [a * b * a.inverse() * b.inverse() for a in gens for b in gens]
    # normal closure of the generator commutators
    D = GeneratedGroup([c for c in comm if not c.is_identity()] or [Permutation.identity(t.degree)],
                       degree=t.degree)
    changed = True
    while changed:
        changed = False
        for g in gens:
            for d in list(D.generators):
                x = g * d * g.inverse()
                if not D.contains(x):
                    D = GeneratedGroup(list(D.generators) + [x], degree=t.degree)
                    changed = True
    return C.order() // D.order()
