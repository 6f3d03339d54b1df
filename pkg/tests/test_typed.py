import json

import pytest

from rackd.group import Ambient, ConjClassSpec, SplitPart, all_class_specs, class_elements
from rackd.perm import CycleType, Permutation
from rackd.rack import FiniteRack
from rackd.typed import (PAIR_FIXTURES, Status, TypeDWitness, check_witness, classify, current_caps,
                         exception_tag, exhaustive_not_type_d, jordan_criterion, set_caps,
                         squares_differ, step_mersenne, tetrahedron_step_report, witness_from_pair)


def spec(m, t, group="S", split=None):
    return ConjClassSpec(m, CycleType.parse(t), Ambient(group), SplitPart(split) if split else None)


def test_squares_differ_is_the_type_d_identity():
    a = Permutation.parse("(1 2 3)", 4)
    b = Permutation.parse("(2 3 4)", 4)
    assert squares_differ(a, b) == ((a * b) ** 2 != (b * a) ** 2)
    assert not squares_differ(a, a)


def test_witness_from_pair_on_transpositions_in_s4():
    s = spec(4, "1^2,2")
    w = witness_from_pair(Permutation.parse("(1 2)", 4), Permutation.parse("(3 4)", 4), s, "T")
    assert not w  # commuting transpositions satisfy the identity
    w = witness_from_pair(Permutation.parse("(1 2)", 4), Permutation.parse("(2 3)", 4), s, "T")
    assert not w  # a single class of ⟨s1, s2⟩ = S_3


def test_witness_roundtrip_and_mutation():
    v = classify(spec(6, "2,4"))
    assert v.status is Status.TYPE_D
    w = v.witness
    d = json.loads(json.dumps(w.to_json()))
    w2 = TypeDWitness.from_json(d)
    assert check_witness(w2).ok
    assert w2.R == w.R and w2.S == w.S
    # move r into S: disjointness breaks
    d["S"] = d["S"] + [d["r"]]
    assert not check_witness(TypeDWitness.from_json(d)).ok


def test_mutated_witness_fails_closure():
    w = classify(spec(6, "2,4")).witness
    bad = TypeDWitness(w.ambient, w.R[:-1], w.S, w.r if w.r in w.R[:-1] else w.R[0], w.s, "X")
    chk = check_witness(bad)
    assert not chk.ok and chk.violation in ("closed", "members")


def test_witness_outside_class_rejected():
    w = classify(spec(6, "2,4")).witness
    d = w.to_json()
    d["ambient"] = spec(6, "1^2,4").to_json()
    assert check_witness(TypeDWitness.from_json(d)).violation == "in_ambient"


@pytest.mark.parametrize("m,t,group,split,tag", [
    (5, "2,3", "S", None, "a:(2,3)"),
    (6, "2^3", "S", None, "a:(2^3)"),
    (7, "1^5,2", "S", None, "a:(1^n,2)"),
    (6, "3^2", "A", None, "b:(3^2)"),
    (7, "2^2,3", "A", None, "b:(2^2,3)"),
    (8, "2^4", "A", None, "b:(2^4)"),
    (5, "1,2^2", "A", None, "b:(1,2^2)"),
    (6, "1^2,2^2", "A", None, "b:(1^2,2^2)"),
    (9, "1^6,3", "A", None, "b:(1^n,3)"),
    (7, "7", "A", "plus", "b:(p)"),
])
def test_exception_tags(m, t, group, split, tag):
    s = spec(m, t, group, split)
    assert exception_tag(s) == tag
    v = classify(s)
    assert v.status in (Status.EXCEPTION, Status.NOT_TYPE_D)
    assert v.tag == tag


def test_types_off_the_lists_have_no_tag():
    assert exception_tag(spec(6, "2,4")) is None
    assert exception_tag(spec(9, "1^3,2^3", "S")) is None
    assert exception_tag(spec(8, "1,7", "A", "plus")) == "b:(1,p)"


def test_prime_five_in_a5_is_exhaustively_not_type_d():
    v = classify(spec(5, "5", "A", "plus"))
    assert v.status is Status.NOT_TYPE_D
    assert "enumerated" in v.scope


def test_exhaustive_search_finds_witness_when_present():
    els = class_elements(spec(4, "1,3", "S"))
    rep = exhaustive_not_type_d(FiniteRack.from_permutations(els))
    # 3-cycles of S_4 form the two tetrahedra of A_4: no witness
    assert rep.status is Status.NOT_TYPE_D
    els = class_elements(spec(6, "2,4"))
    rep = exhaustive_not_type_d(FiniteRack.from_permutations(els), subrack_cap=5)
    assert rep.status is Status.TYPE_D


def test_exhaustive_two_generated_fallback_agrees():
    els = class_elements(spec(5, "1,2^2", "S"))
    r = FiniteRack.from_permutations(els)
    full = exhaustive_not_type_d(r)
    capped = exhaustive_not_type_d(r, subrack_cap=3, homogeneous=True)
    assert full.status is capped.status is Status.NOT_TYPE_D
    assert "cap" in capped.scope


def test_mersenne_construction_for_1_7():
    for part in ("plus", "minus"):
        s = spec(8, "1,7", "A", part)
        w = step_mersenne(s)
        assert w and w.provenance == "MERSENNE"
        assert check_witness(w).ok


def test_tetrahedron_step_hypothesis_report():
    rep = tetrahedron_step_report(5)
    assert not rep["applicable"]
    assert rep["hypotheses"]["id_plus_Tj1_nonzero"] is False


def test_jordan_criterion_on_15_cycle():
    rep = jordan_criterion(spec(15, "15", "A", "plus"))
    assert rep.applicable and (rep.N, rep.M) == (5, 3)
    assert check_witness(rep.witness).ok


def test_jordan_not_applicable_to_prime_cycle():
    assert not jordan_criterion(spec(7, "7", "A", "plus")).applicable


@pytest.mark.parametrize("label", sorted(PAIR_FIXTURES))
def test_fixed_pairs_satisfy_inequality(label):
    s1, s2, _ = PAIR_FIXTURES[label]
    m = 10 if label == "2^5" else 9 if label == "3^3" else 7
    a, b = Permutation.parse(s1, m), Permutation.parse(s2, m)
    assert squares_differ(a, b)


def test_caps_override_and_restore():
    before = current_caps()
    try:
        set_caps(embed=7)
        assert current_caps()["embed"] == 7
        with pytest.raises(KeyError):
            set_caps(bogus=1)
    finally:
        set_caps(**before)
    assert current_caps() == before


def test_sweep_m5_m6_has_no_unknown_and_all_verify():
    for m in (5, 6):
        for s in all_class_specs(m):
            v = classify(s)
            assert v.status is not Status.UNKNOWN, s.label()
            if v.status is Status.TYPE_D:
                assert check_witness(v.witness).ok
            else:
                assert exception_tag(s) is not None or v.scope == "trivial rack of size 1"


def test_exhaustive_agrees_with_constructions_on_small_classes():
    from rackd.group import class_size
    checked = 0
    for m in (5, 6, 7):
        for s in all_class_specs(m):
            if class_size(s) > 40:
                continue
            rep = exhaustive_not_type_d(FiniteRack.from_permutations(class_elements(s)))
            assert (rep.status is Status.TYPE_D) == (classify(s).status is Status.TYPE_D), s.label()
            checked += 1
    assert checked >= 5


def test_five_cycles_of_s5_are_type_d_although_listed():
    # list (b) concerns A_m classes; the full S_5 class is type D
    s = spec(5, "5")
    els = class_elements(s)
    rep = exhaustive_not_type_d(FiniteRack.from_permutations(els))
    assert rep.status is Status.TYPE_D
    a, b, R, S = rep.witness
    w = TypeDWitness(s, tuple(els[i] for i in R), tuple(els[i] for i in S), els[a], els[b], "EXHAUSTIVE")
    assert check_witness(w).ok
    assert classify(s).status is Status.EXCEPTION
