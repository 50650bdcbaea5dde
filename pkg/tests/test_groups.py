import pytest

from cyclochern.groups import (
    FiniteGroup,
    GAction,
    StructureError,
    conjugacy_analysis,
    cyclic_group,
    direct_product,
    symmetric_group,
    trivial_group,
)


def test_cyclic_group_tables():
    g = cyclic_group(4)
    assert g.order == 4
    assert g.id == 0
    assert g.inv[1] == 3
    assert g.compose(1, 1, 1, 1) == 0


def test_bad_table_rejected():
    with pytest.raises(StructureError):
        FiniteGroup(((0, 1), (1, 1)))


def test_action_validation():
    g = cyclic_group(2)
    with pytest.raises(StructureError):
        GAction(g, ("a", "b"), ((1, 0), (0, 1)))  # identity must act trivially


def test_trivial_group_conjugacy():
    g = trivial_group()
    act = GAction(g, ("a", "b"), ((0, 1),))
    data = conjugacy_analysis(act)
    assert data.classes == ((0,),)
    assert data.stabilizer[0] == (0,)
    assert data.fixed[0] == (0, 1)


def test_z2_swap_conjugacy():
    g = cyclic_group(2)
    act = GAction(g, ("a", "b"), ((0, 1), (1, 0)))
    data = conjugacy_analysis(act)
    assert data.classes == ((0,), (1,))
    assert data.fixed[1] == ()  # the swap has no fixed points


def test_s3_conjugacy_enumeration():
    group, act = symmetric_group(3)
    data = conjugacy_analysis(act)
    sizes = sorted(len(c) for c in data.classes)
    assert sizes == [1, 2, 3]
    # |<phi>| * |G_phi| = |G| for every element
    for g in range(group.order):
        cls = data.classes[data.class_of[g]]
        assert len(cls) * len(data.stabilizer[g]) == group.order
    # transpositions fix one point, 3-cycles none
    for g in range(group.order):
        cls_size = len(data.classes[data.class_of[g]])
        if cls_size == 3:
            assert len(data.fixed[g]) == 1
        elif cls_size == 2:
            assert len(data.fixed[g]) == 0


def test_direct_product_order():
    g = direct_product(cyclic_group(2), cyclic_group(2))
    assert g.order == 4
    assert all(g.mul[a][a] == g.id for a in range(4))  # exponent 2
