import itertools

import pytest
from hypothesis import given, strategies as st

from transversal_lab.groups import AbelianGroup, cyclic_group, parse_group


def all_small_groups(max_order=16):
    """Every direct product of cyclic factors (each >= 2) with order <= max_order,
    plus the trivial group."""
    out = [AbelianGroup((1,))]
    def rec(moduli, order):
        for m in range(2, max_order + 1):
            if order * m > max_order:
                break
            out.append(AbelianGroup(tuple(moduli + [m])))
            rec(moduli + [m], order * m)
    rec([], 1)
    return out


SMALL_GROUPS = all_small_groups()


def test_parse_group_literals():
    assert parse_group("Z6").moduli == (6,)
    assert parse_group("z2xz2").moduli == (2, 2)
    assert parse_group("Z4xZ3").moduli == (4, 3)
    assert str(parse_group("Z2xZ4")) == "Z2xZ4"


@pytest.mark.parametrize("bad", ["", "Z", "Z0x", "6", "Zx2", "Z2x", "Q8"])
def test_parse_group_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_group(bad)


def test_add_examples():
    z6 = cyclic_group(6)
    assert z6.add((4,), (5,)) == (3,)
    klein = parse_group("Z2xZ2")
    assert klein.add((1, 0), (1, 1)) == (0, 1)


def test_add_identity_law():
    for g in SMALL_GROUPS:
        for a in g.elements():
            assert g.add(a, g.identity()) == a


def test_add_rejects_component_mismatch():
    z6 = cyclic_group(6)
    with pytest.raises(ValueError):
        z6.add((4, 0), (5,))


def test_neg_examples():
    z8 = cyclic_group(8)
    assert z8.neg((3,)) == (5,)
    assert z8.neg((0,)) == (0,)
    klein = parse_group("Z2xZ2")
    assert klein.neg((1, 1)) == (1, 1)


def test_g_plus_examples():
    assert cyclic_group(5).g_plus() == (0,)
    assert cyclic_group(8).g_plus() == (4,)
    assert parse_group("Z2xZ2").g_plus() == (0, 0)


def test_g_plus_is_involution_or_identity():
    for g in SMALL_GROUPS:
        gp = g.g_plus()
        assert g.add(gp, gp) == g.identity()
        involutions = [a for a in g.elements() if a != g.identity() and g.add(a, a) == g.identity()]
        if len(involutions) == 1:
            assert gp == involutions[0]
        else:
            assert gp == g.identity()


def test_noncyclic_sylow2():
    assert not cyclic_group(12).has_noncyclic_sylow2()
    assert parse_group("Z2xZ2").has_noncyclic_sylow2()
    assert not parse_group("Z2xZ9").has_noncyclic_sylow2()
    assert parse_group("Z2xZ4").has_noncyclic_sylow2()
    assert not cyclic_group(7).has_noncyclic_sylow2()


def test_group_laws_exhaustive_small():
    for g in SMALL_GROUPS:
        elems = list(g.elements())
        for a in elems:
            assert g.add(a, g.neg(a)) == g.identity()
        for a, b in itertools.product(elems, repeat=2):
            assert g.add(a, b) == g.add(b, a)
        limit = elems if g.order <= 8 else elems[:5]
        for a, b, c in itertools.product(limit, repeat=3):
            assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))


def test_element_index_roundtrip():
    for g in SMALL_GROUPS:
        for i in range(g.order):
            assert g.index(g.element(i)) == i


def test_scalar_mul_matches_repeated_addition():
    g = parse_group("Z2xZ4")
    for a in g.elements():
        acc = g.identity()
        for k in range(5):
            assert g.scalar_mul(k, a) == acc
            acc = g.add(acc, a)


@given(
    data=st.data(),
    gi=st.integers(min_value=0, max_value=len(SMALL_GROUPS) - 1),
)
def test_commutativity_and_associativity_property(data, gi):
    g = SMALL_GROUPS[gi]
    pick = st.integers(min_value=0, max_value=g.order - 1)
    a = g.element(data.draw(pick))
    b = g.element(data.draw(pick))
    c = g.element(data.draw(pick))
    assert g.add(a, b) == g.add(b, a)
    assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))


def test_rejects_bad_moduli():
    with pytest.raises(ValueError):
        AbelianGroup(())
    with pytest.raises(ValueError):
        AbelianGroup((0,))
    with pytest.raises(ValueError):
        AbelianGroup((-2, 3))
