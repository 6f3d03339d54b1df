import json

import pytest

from rackd.abelian import (CommutingTriple, TriangleDiagram, Verdict3, a4_times_cyclic, a4xcr_applies,
                           a4xcr_embed, canonical_a4_triple, find_triple, finiteness_obstruction,
                           triangle_verdict)
from rackd.group import Ambient, ConjClassSpec
from rackd.perm import CycleType, Permutation

CLASSES = [(5, "1,2^2", 3), (6, "1^2,2^2", 3), (7, "2^2,3", 5), (8, "2^4", 3)]


def alt(m, t):
    return ConjClassSpec(m, CycleType.parse(t), Ambient.ALT)


@pytest.mark.parametrize("r", [1, 3, 5, 7])
def test_canonical_triple_in_a4_times_cyclic(r):
    t = canonical_a4_triple(r)
    assert t.ok(), t.check()
    assert t.h == r + 2
    G, _ = a4_times_cyclic(r)
    assert G.order() == 12 * r


def test_even_r_rejected():
    with pytest.raises(ValueError):
        a4_times_cyclic(2)


@pytest.mark.parametrize("m,t,h", CLASSES)
def test_embedded_triple(m, t, h):
    spec = alt(m, t)
    assert a4xcr_applies(spec)
    tr = a4xcr_embed(spec)
    assert tr.ok() and tr.h == h and tr.h % 2 == 1
    assert tr.sigma1 == spec.representative()
    assert triangle_verdict(tr) is Verdict3.INFINITE_DIM_ALL_REPS


@pytest.mark.parametrize("m,t,_h", CLASSES)
def test_search_finds_a_triple(m, t, _h):
    tr = find_triple(alt(m, t))
    assert tr and tr.ok() and tr.h % 2 == 1


def test_not_applicable_shapes():
    assert not a4xcr_applies(alt(6, "3^2"))
    assert not a4xcr_applies(ConjClassSpec(5, CycleType.parse("1,2^2"), Ambient.SYM))
    with pytest.raises(ValueError):
        a4xcr_embed(alt(6, "3^2"))


def test_triple_json_roundtrip():
    tr = a4xcr_embed(alt(7, "2^2,3"))
    d = json.loads(json.dumps(tr.to_json()))
    back = CommutingTriple.from_json(d)
    assert back.ok() and back.sigmas == tr.sigmas


def test_broken_triple_is_inconclusive():
    tr = a4xcr_embed(alt(5, "1,2^2"))
    bad = CommutingTriple(tr.sigma1, tr.sigma2, tr.sigma3, tr.g2, tr.g3, tr.h + 1, tr.group)
    chk = bad.check()
    assert not chk["h_odd"] and not chk["power"]
    assert triangle_verdict(bad) is Verdict3.INCONCLUSIVE
    swapped = CommutingTriple(tr.sigma1, tr.sigma3, tr.sigma2, tr.g2, tr.g3, tr.h, tr.group)
    assert not swapped.check()["conjugates"]


def test_odd_conjugator_fails_in_alternating_group():
    tr = a4xcr_embed(alt(5, "1,2^2"))
    odd = Permutation.parse("(1 2)", 5)
    bad = CommutingTriple(tr.sigma1, tr.sigma2, tr.sigma3, odd, tr.g3, tr.h, tr.group)
    assert not bad.check()["in_group"]


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6, 12])
@pytest.mark.parametrize("h", [3, 5, 7])
def test_diagram_matches_raw_matrix(N, h):
    for l1 in range(N):
        for l2 in range(N):
            assert TriangleDiagram(N, h, l1, l2).compatible()


def test_obstruction_branches():
    assert finiteness_obstruction(0, 6, 3) == "lambda1 = 1"
    assert finiteness_obstruction(2, 6, 3).startswith("lambda1^h = 1")
    assert finiteness_obstruction(1, 6, 3).startswith("cited")
    # λ1 = -1 with h even already has λ1^h = 1
    assert finiteness_obstruction(1, 2, 4).startswith("lambda1^h = 1")
