"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""
import itertools
import math
import time

import pytest

from conftest import ACCEPTANCE_LINES
from rackd.abelian import Verdict3, a4xcr_embed, triangle_verdict
from rackd.affine import (CONDITION_FAILS, brute_force_witness, collapse_matrix, mat_is_zero,
                          predicted_exceptions, simple_affine_racks, type_d_condition)
from rackd.cocycle import braiding_check, validate_cocycle
from rackd.group import (Ambient, ConjClassSpec, GeneratedGroup, SplitPart, all_class_specs,
                         class_elements, class_orbit)
from rackd.perm import CycleType, Permutation, all_permutations, conjugate, conjugator, jacobi, lambda_k, long_cycle, sign
from rackd.rack import FiniteRack
from rackd.reps import survivors, survivor_tables
from rackd.typed import (PAIR_FIXTURES, Status, TypeDWitness, check_witness, classify, embed_catalog_witness,
                         exception_tag, exhaustive_not_type_d, squares_differ, step_mersenne)


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def spec(m, t, group="S", split=None):
    return ConjClassSpec(m, CycleType.parse(t), Ambient(group), SplitPart(split) if split else None)


def test_criterion_01_classification_m5_to_m10():
    start = time.time()
    problems, certified_listed, n_classes, n_typed = [], [], 0, 0
    for m in range(5, 11):
        specs = list(all_class_specs(m))
        # even types in S_m as well; they contain the A_m class
        specs += [ConjClassSpec(m, s.type, Ambient.SYM) for s in specs
                  if s.ambient is Ambient.ALT and s.split_part in (None, SplitPart.PLUS)]
        for s in specs:
            n_classes += 1
            v = classify(s)
            if v.status is Status.UNKNOWN:
                problems.append(f"{s.label()} UNKNOWN")
                continue
            listed = exception_tag(ConjClassSpec(m, s.type, Ambient.ALT if s.type.parity() == 1
                                                 else Ambient.SYM)) is not None
            if v.status is Status.TYPE_D:
                n_typed += 1
                w = TypeDWitness.from_json(v.witness.to_json())
                if not check_witness(w).ok:
                    problems.append(f"{s.label()} certificate fails")
                if listed and s.ambient is Ambient.ALT:
                    if v.witness.provenance == "MERSENNE":
                        certified_listed.append(s.label())
                    else:
                        problems.append(f"{s.label()} listed but TYPE_D")
            elif not listed:
                problems.append(f"{s.label()} off the lists but {v.status.value}")
    elapsed = time.time() - start
    ok = not problems and elapsed < 600
    detail = (f"{n_classes} classes, {n_typed} TYPE_D with verified certificates, 0 UNKNOWN, "
              f"{elapsed:.1f}s; listed classes certified TYPE_D by the Mersenne construction: "
              f"{', '.join(certified_listed) or 'none'}")
    record(1, ok, detail if ok else "; ".join(problems[:5]))


PAIR_DEGREE = {"1^3,2^2": 7, "1,3^2": 7, "3^3": 9, "2^5": 10, "1,2^3": 7}
PAIR_EXACT_ORDERS = {"Z/7 x Z/3": 21, "A_4 x Z/3": 36}


def test_criterion_02_subgroup_pair_fixtures():
    ok, parts = True, []
    for label in sorted(PAIR_FIXTURES):
        s1, s2, h_label = PAIR_FIXTURES[label]
        m = PAIR_DEGREE[label]
        a, b = Permutation.parse(s1, m), Permutation.parse(s2, m)
        H = GeneratedGroup([a, b], degree=m)
        order = H.order()
        distinct = b not in class_orbit(a, H)
        row_ok = squares_differ(a, b) and distinct
        if h_label in PAIR_EXACT_ORDERS:
            row_ok &= order == PAIR_EXACT_ORDERS[h_label]
            parts.append(f"({label}) |H|={order}")
        else:
            parts.append(f"({label}) |H|={order} [label {h_label}: order 6 or 12 notation flagged]")
        ok &= row_ok
    record(2, ok, "; ".join(parts))


DOUBLED_CASES = [(6, "1,2,3", "D_3^(2)"), (9, "2^3,3", "D_3^(2)"), (6, "2,4", "oct^(2)"), (8, "4^2", "oct^(2)")]
# (3,4) is the smallest class of the (4, odd part) row; (2,4) has no odd part
DOUBLED_EXTRA = [(7, "3,4", "oct^(2)")]


def _embeds(m, t, name):
    w = embed_catalog_witness(spec(m, t), name)
    return bool(w) and check_witness(w).ok


def test_criterion_03_doubled_subrack_embeddings():
    results = {(m, t, name): _embeds(m, t, name) for m, t, name in DOUBLED_CASES + DOUBLED_EXTRA}
    parts = [f"{name} in ({t}) S_{m}: {'found' if hit else 'not present (search exhausted)'}"
             for (m, t, name), hit in results.items()]
    ok = all(results[c] for c in DOUBLED_CASES)
    line = f"criterion  3: {'PASS' if ok else 'FAIL'}  " + "; ".join(parts)
    ACCEPTANCE_LINES.append(line)
    print(line)
    # the three attainable embeddings and the extra row must hold
    assert all(hit for c, hit in results.items() if c != (6, "2,4", "oct^(2)")), line


@pytest.mark.xfail(strict=True, reason="oct^(2) does not embed in the (2,4) class of S_6: "
                                       "exhaustive search and an independent brute force both find none")
def test_criterion_03_oct_double_in_2_4():
    assert _embeds(6, "2,4", "oct^(2)")


def test_oct_double_absent_from_2_4_by_brute_force():
    """Every oct copy in (2,4) is 2-generated; none has a partner copy x ↦ x' as in oct^(2)."""
    from rackd.rack import catalog_rack, is_isomorphic, subrack_closure
    els = class_elements(spec(6, "2,4"))
    cls = set(els)
    R = FiniteRack.from_permutations(els)
    copies = {subrack_closure(R, [i, k]).members for i in range(len(els)) for k in range(len(els))}
    octs = [c for c in copies if len(c) == 6 and is_isomorphic(subrack_closure(R, list(c)).rack(),
                                                              catalog_rack("oct"))]
    assert len(octs) == 30
    perms = list(all_permutations(6))
    for c in octs:
        Y = [els[i] for i in c]
        # a partner x' must act like x on Y, lie in the class and avoid Y
        partners = [[x * z for z in perms if x * z in cls and x * z not in Y
                     and all(conjugate(x * z, y) == conjugate(x, y) for y in Y)] for x in Y]
        for choice in itertools.product(*partners):
            idx = {y: k for k, y in enumerate(Y)}
            assert not all(conjugate(choice[a], choice[b]) == choice[idx[conjugate(Y[a], Y[b])]]
                           for a in range(6) for b in range(6))


def test_criterion_04_affine_equivalence():
    orders = (3, 4, 5, 7, 8, 9, 16, 25, 27)
    ok, racks, pairs = True, 0, 0
    for q in orders:
        for A in simple_affine_racks(q):
            racks += 1
            vanishing = set()
            for j in range(A.order()):
                pairs += 1
                zero = mat_is_zero(collapse_matrix(A, j))
                if zero:
                    vanishing.add(j)
                    ok &= type_d_condition(A, j) is CONDITION_FAILS
                else:
                    w = type_d_condition(A, j)
                    ok &= w is not CONDITION_FAILS and brute_force_witness(A, j) is not None
            ok &= vanishing == predicted_exceptions(A)
    record(4, ok, f"{racks} simple affine racks, {pairs} (rack, j) pairs over q in {orders}")


def test_criterion_05_zolotarev_and_jacobi_conjugacy():
    start = time.time()
    ok, count = True, 0
    for m in range(3, 46, 2):
        for k in range(1, m):
            if math.gcd(k, m) == 1:
                count += 1
                ok &= sign(lambda_k(m, k)) == jacobi(k, m)
    for m in range(3, 14, 2):
        c = long_cycle(m)
        for k in range(1, m):
            if math.gcd(k, m) != 1:
                continue
            g0 = conjugator(c, c ** k)
            # every conjugator is g0 times a power of c
            even = [g for g in (g0 * c ** i for i in range(m)) if sign(g) == 1 and conjugate(g, c) == c ** k]
            ok &= bool(even) == (jacobi(k, m) == 1)
    elapsed = time.time() - start
    ok &= elapsed < 10
    record(5, ok, f"{count} (k, m) pairs with odd m <= 45; conjugator search for m <= 13; {elapsed:.2f}s")


def test_criterion_06_negative_results():
    parts, ok = [], True
    for m, t in ((5, "5"), (6, "1,5")):
        for part in ("plus", "minus"):
            s = spec(m, t, "A", part)
            els = class_elements(s)
            rep = exhaustive_not_type_d(FiniteRack.from_permutations(els))
            exhaustive = "enumerated" in rep.scope
            ok &= rep.status is Status.NOT_TYPE_D and (exhaustive or m == 6)
            parts.append(f"({t}) A_{m} {part} [{len(els)} elements]: {rep.status.value}, {rep.scope}")
    record(6, ok, "; ".join(parts))


def test_criterion_07_mersenne():
    ok, parts = True, []
    for part in ("plus", "minus"):
        s = spec(8, "1,7", "A", part)
        w = step_mersenne(s)
        good = bool(w) and check_witness(TypeDWitness.from_json(w.to_json())).ok
        ok &= good and classify(s).status is Status.TYPE_D
        parts.append(f"(1,7) A_8 {part}: {'certified' if good else 'no certificate'}")
    record(7, ok, "; ".join(parts))


def test_criterion_08_cocycle_braid_agreement():
    from cocycle_corpus import build_corpus
    corpus = build_corpus()
    agree = sum(validate_cocycle(c).ok == braiding_check(c).ok for _, c, _ in corpus)
    valid = sum(validate_cocycle(c).ok for _, c, _ in corpus)
    ok = len(corpus) >= 50 and agree == len(corpus) and max(c.rack.size for _, c, _ in corpus) <= 12
    record(8, ok, f"{agree}/{len(corpus)} tables agree ({valid} valid, {len(corpus) - valid} invalid)")


def test_criterion_09_commuting_triples():
    ok, parts = True, []
    for m, t in ((5, "1,2^2"), (6, "1^2,2^2"), (7, "2^2,3"), (8, "2^4")):
        s = spec(m, t, "A")
        tr = a4xcr_embed(s)
        d = s.type.as_dict()
        r = math.lcm(*[j for j in d if j % 2 == 1 and j > 1] or [1])
        good = tr.ok() and tr.h % 2 == 1 and tr.h == r + 2 and \
            triangle_verdict(tr) is Verdict3.INFINITE_DIM_ALL_REPS
        ok &= good
        parts.append(f"({t}) A_{m}: h={tr.h}")
    record(9, ok, "; ".join(parts))


EXPECTED_SURVIVORS = {
    5: [("1^3,2", "rho1=chi0(x)epsilon; rho2=chi1"), ("1^3,2", "rho1=chi0(x)sgn; rho2=chi1"),
        ("2,3", "rho2=chi1; rho3=chi0")],
    6: [("1^4,2", "rho1=chi0(x)epsilon; rho2=chi1"), ("1^4,2", "rho1=chi0(x)sgn; rho2=chi1"),
        ("2^3", "rho2=chi1(x)epsilon"), ("2^3", "rho2=chi1(x)sgn")],
    7: [("1^5,2", "rho1=chi0(x)epsilon; rho2=chi1"), ("1^5,2", "rho1=chi0(x)sgn; rho2=chi1")],
}


def test_criterion_10_survivor_tables():
    ok, parts = True, []
    for m, expected in EXPECTED_SURVIVORS.items():
        got = sorted((r.spec.type.label(), r.rep.label()) for r in survivors(survivor_tables(m, Ambient.SYM)))
        ok &= got == expected
        parts.append(f"S_{m}: {len(got)} survivors")
    for m in range(5, 11):
        rows = survivor_tables(m, Ambient.ALT)
        tagged = all(r.reason is not None and r.source for r in rows if not r.survives)
        ok &= not survivors(rows) and tagged
    parts.append("A_5..A_10: no survivors, every kill tagged")
    record(10, ok, "; ".join(parts))
