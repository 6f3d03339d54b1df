import math
import random

import pytest

from rackd.group import (OVERFLOW, Ambient, Tri, ConjClassSpec, GeneratedGroup, SplitPart, all_class_specs,
                         alternating_group, are_conjugate_in, centralizer_in_Sm, centralizer_order_formula,
                         class_elements, class_orbit, class_size, splits_in_Am, symmetric_group)
from rackd.perm import (CycleType, Permutation, all_permutations, conjugate, conjugator, cycle_type, jacobi,
                        long_cycle, sign)


def P(text, m):
    return Permutation.parse(text, m)


@pytest.mark.parametrize("m", range(1, 9))
def test_symmetric_and_alternating_orders(m):
    assert symmetric_group(m).order() == math.factorial(m)
    if m >= 3:
        assert alternating_group(m).order() == math.factorial(m) // 2


def test_stabilizer_chain_agrees_with_closure_on_random_groups():
    rng = random.Random(7)
    for _ in range(80):
        m = rng.randint(3, 7)
        gens = []
        for _ in range(rng.randint(1, 3)):
            pts = list(range(1, m + 1))
            rng.shuffle(pts)
            gens.append(Permutation.from_images(pts))
        G = GeneratedGroup(gens, degree=m)
        els = G.closure()
        assert G.order() == len(els)
        probe = Permutation.from_images(rng.sample(range(1, m + 1), m))
        assert G.contains(probe) == (probe in els)


def test_closure_overflow_sentinel():
    assert symmetric_group(7).closure(cap=100) is OVERFLOW
    assert not OVERFLOW


def test_class_orbit_of_transposition():
    orb = class_orbit(P("(1 2)", 5), symmetric_group(5))
    assert len(orb) == 10
    assert all(cycle_type(x) == CycleType.parse("1^3,2") for x in orb)


@pytest.mark.parametrize("text,m", [("2,3", 5), ("1,2^2", 5), ("3^2", 6), ("2^4", 8), ("1^2,5", 7)])
def test_centralizer_order_formula(text, m):
    t = CycleType.parse(text).pad(m)
    x = t.representative(m)
    C = centralizer_in_Sm(x)
    assert C.order() == centralizer_order_formula(t)
    assert all(g * x == x * g for g in C.generators)


def test_class_sizes_sum_to_group_order():
    for m in range(2, 8):
        total = 0
        from rackd.group import _partitions
        for part in _partitions(m):
            t = CycleType.from_lengths(part)
            total += class_size(ConjClassSpec(m, t))
        assert total == math.factorial(m)


def test_split_criterion_matches_orbit_count():
    for m in range(3, 8):
        A = alternating_group(m)
        from rackd.group import _partitions
        for part in _partitions(m):
            t = CycleType.from_lengths(part)
            if t.parity() != 1:
                continue
            rep = t.representative(m)
            orbit = class_orbit(rep, A)
            full = class_size(ConjClassSpec(m, t))
            assert (len(orbit) * 2 == full) == splits_in_Am(t), t


def test_split_parts_are_disjoint_classes():
    spec_plus = ConjClassSpec(5, CycleType.parse("5"), Ambient.ALT, SplitPart.PLUS)
    spec_minus = ConjClassSpec(5, CycleType.parse("5"), Ambient.ALT, SplitPart.MINUS)
    a, b = class_elements(spec_plus), class_elements(spec_minus)
    assert len(a) == len(b) == 12
    assert not set(a) & set(b)
    assert spec_plus.representative() in a and spec_minus.representative() in b
    A = alternating_group(5)
    assert are_conjugate_in(spec_plus.representative(), spec_minus.representative(), A) is Tri.NO
    assert are_conjugate_in(a[0], a[5], A) is Tri.YES


def test_power_conjugacy_in_alternating_group_follows_jacobi():
    # every conjugator of an m-cycle onto its k-th power has the same sign,
    # since the centralizer is generated by the (even) cycle itself
    for m in range(3, 14, 2):
        c = long_cycle(m)
        for k in range(1, m):
            if math.gcd(k, m) == 1:
                g = conjugator(c, c ** k)
                assert conjugate(g, c) == c ** k
                assert (sign(g) == 1) == (jacobi(k, m) == 1), (k, m)


def test_power_conjugacy_by_orbit_for_small_degrees():
    for m in (5, 7):
        c = long_cycle(m)
        orb = set(class_orbit(c, alternating_group(m)))
        for k in range(1, m):
            assert ((c ** k) in orb) == (jacobi(k, m) == 1)


def test_spec_validation_and_labels():
    s = ConjClassSpec(6, CycleType.parse("1,5"), Ambient.ALT)
    assert s.split_part is SplitPart.PLUS
    assert s.label() == "(1,5) in A_6 [plus]"
    assert s.to_json() == {"m": 6, "type": "1,5", "group": "A", "split": "plus"}
    with pytest.raises(ValueError):
        ConjClassSpec(5, CycleType.parse("2"), Ambient.ALT)
    with pytest.raises(ValueError):
        ConjClassSpec(5, CycleType.parse("1,2^2"), Ambient.ALT, SplitPart.MINUS)
    with pytest.raises(ValueError):
        ConjClassSpec(4, CycleType.parse("5"))


def test_all_class_specs_cover_each_nontrivial_type_once_per_part():
    specs = all_class_specs(6)
    odd = [s for s in specs if s.ambient is Ambient.SYM]
    assert all(s.type.parity() == -1 for s in odd)
    assert sum(1 for s in specs if s.type == CycleType.parse("1,5")) == 2
    assert len({s for s in specs}) == len(specs)


def test_class_elements_are_sorted_and_exact():
    spec = ConjClassSpec(5, CycleType.parse("1,2^2"), Ambient.ALT)
    els = class_elements(spec)
    assert els == sorted(els)
    assert len(els) == 15
    brute = sorted(x for x in all_permutations(5) if cycle_type(x) == spec.type)
    assert els == brute
    assert class_elements(ConjClassSpec(9, CycleType.parse("1,2^4")), cap=10) is OVERFLOW
