import pytest

from asaitwist.errors import CapExceeded, ParameterError
from asaitwist.fields import FieldTower
from asaitwist.grouplaw import builtin
from asaitwist.points import (
    centralizer,
    centralizer_counts,
    conjugacy_classes,
    enumerate_group,
)


@pytest.fixture(scope="module")
def ul3_f2():
    tower = FieldTower(2)
    law = builtin("ul", 2, 3)
    view = enumerate_group(law, tower, 2, 1)
    return law, tower, view, conjugacy_classes(view)


@pytest.fixture(scope="module")
def n2_f3():
    tower = FieldTower(3)
    law = builtin("n2", 3)
    view = enumerate_group(law, tower, 3, 1)
    return law, tower, view, conjugacy_classes(view)


def test_enumerate_sizes():
    t3 = FieldTower(3)
    ga1 = builtin("ga_power", 3, 1)
    assert enumerate_group(ga1, t3, 3, 1).order == 3
    t2 = FieldTower(2)
    assert enumerate_group(builtin("ul", 2, 3), t2, 2, 1).order == 8
    assert enumerate_group(builtin("n2", 3), t3, 3, 1).order == 9


def test_enumerate_identity_first_and_closure(ul3_f2):
    law, tower, view, _ = ul3_f2
    assert view.point(0).is_identity()
    ops = view.ops
    pts = list(view.points())
    seen = {view.index_of(p) for p in pts}
    assert seen == set(range(8))
    for a in pts:
        for b in pts:
            assert view.index_of(ops.mul(a, b)) in seen
        assert view.index_of(ops.inv(a)) in seen


def test_enumerate_cap():
    t2 = FieldTower(2)
    with pytest.raises(CapExceeded):
        enumerate_group(builtin("ul", 2, 3), t2, 2, 8, max_order=1000)


def test_ul3_f2_noncommutative_pair(ul3_f2):
    law, tower, view, _ = ul3_f2
    ops = view.ops
    pairs = [
        (a, b)
        for a in view.points()
        for b in view.points()
        if ops.mul(a, b) != ops.mul(b, a)
    ]
    assert pairs


def test_n2_f3_abelian_exhaustive(n2_f3):
    law, tower, view, table = n2_f3
    ops = view.ops
    for a in view.points():
        for b in view.points():
            assert ops.mul(a, b) == ops.mul(b, a)
    assert len(table) == 9 and table.sizes == [1] * 9


def test_class_examples(ul3_f2):
    t3 = FieldTower(3)
    ga1 = builtin("ga_power", 3, 1)
    t = conjugacy_classes(enumerate_group(ga1, t3, 3, 1))
    assert len(t) == 3 and t.sizes == [1, 1, 1]

    _, _, _, table = ul3_f2
    assert sorted(table.sizes) == [1, 1, 2, 2, 2]

    ul3 = builtin("ul", 3, 3)
    t33 = conjugacy_classes(enumerate_group(ul3, t3, 3, 1))
    assert len(t33) == 11
    assert sorted(t33.sizes) == [1, 1, 1] + [3] * 8


def test_class_invariants(ul3_f2):
    _, _, view, table = ul3_f2
    assert sum(table.sizes) == view.order
    for s in table.sizes:
        assert view.order % s == 0
    assert table.class_of[0] == 0 and table.sizes[0] == 1  # identity singleton
    # representatives are least members, classes ordered by least member
    for ci, members in enumerate(table.members):
        assert table.reps[ci] == members[0] == min(members)
    assert [int(r) for r in table.reps] == sorted(int(r) for r in table.reps)


def test_conjugation_preserves_partition(ul3_f2):
    _, _, view, table = ul3_f2
    ops = view.ops
    for h in view.points():
        for ci, members in enumerate(table.members):
            image = {view.index_of(ops.conj(h, view.point(int(i)))) for i in members}
            assert image == set(int(i) for i in members)


def test_centralizer_identity_is_whole_group(n2_f3):
    _, _, view, _ = n2_f3
    assert centralizer(view, view.point(0)).size == view.order


def test_centralizer_of_central_ul3_element(ul3_f2):
    law, tower, view, table = ul3_f2
    # the central element has only the far-corner entry set: coordinate 3
    z = view.point(view.index_of(view.point(1)))  # ordinal 1 = (0,0,1)
    assert [c.coeffs[0] for c in z.coords] == [0, 0, 1]
    assert centralizer(view, z).size == 8


def test_n2_centralizer_formula_across_levels():
    """Z((1,0)) at level F_{3^N} is {(c,d) : c in F_3, d in F_{3^N}}."""
    tower = FieldTower(3)
    law = builtin("n2", 3)
    base_view = enumerate_group(law, tower, 3, 1)
    g = base_view.point(base_view.index_of(base_view.point(3)))  # (1, 0)
    assert [c.coeffs[0] for c in g.coords] == [1, 0]
    for N in (1, 2):
        view = enumerate_group(law, tower, 3, N)
        ge = view.ops.embed(g, view.field)
        cent = set(centralizer(view, ge).tolist())
        expected = set()
        for i in range(view.order):
            h = view.point(i)
            first = h.coords[0]
            if tower.frobenius(first, 3) == first:  # c in F_3
                expected.add(i)
        assert cent == expected
        assert len(cent) == 3 ** (N + 1)


def test_orbit_stabilizer_everywhere(ul3_f2, n2_f3):
    for (_, _, view, table) in (ul3_f2, n2_f3):
        for i in range(view.order):
            ci = int(table.class_of[i])
            cent = centralizer(view, view.point(i))
            assert cent.size * table.sizes[ci] == view.order


def test_centralizer_counts_n2():
    tower = FieldTower(3)
    law = builtin("n2", 3)
    view = enumerate_group(law, tower, 3, 1)
    g = view.point(3)  # combined code 3 -> coords (1, 0)
    growth = centralizer_counts(law, tower, g, 3, 1, range(1, 4))
    assert growth.counts == [(1, 9), (2, 27), (3, 81)]
    assert growth.dimension == 1 and growth.components == 3 and growth.stable


def test_centralizer_counts_identity_and_ga():
    t2 = FieldTower(2)
    ul3 = builtin("ul", 2, 3)
    view = enumerate_group(ul3, t2, 2, 1)
    growth = centralizer_counts(ul3, t2, view.point(0), 2, 1, range(1, 4))
    assert growth.counts == [(1, 8), (2, 64), (3, 512)]
    assert growth.dimension == 3 and growth.components == 1 and growth.stable

    ga2 = builtin("ga_power", 2, 2)
    gview = enumerate_group(ga2, t2, 2, 1)
    g = gview.point(3)
    growth = centralizer_counts(ga2, t2, g, 2, 1, range(1, 4))
    assert growth.counts == [(1, 4), (2, 16), (3, 64)]
    assert growth.dimension == 2 and growth.components == 1 and growth.stable


def test_counts_nondecreasing_and_divisible():
    tower = FieldTower(3)
    law = builtin("n2", 3)
    view = enumerate_group(law, tower, 3, 1)
    for i in range(view.order):
        growth = centralizer_counts(law, tower, view.point(i), 3, 1, range(1, 3))
        counts = [c for _, c in growth.counts]
        assert counts == sorted(counts)
        assert counts[1] % counts[0] == 0


def test_point_index_round_trip(n2_f3):
    _, _, view, _ = n2_f3
    for i in range(view.order):
        assert view.index_of(view.point(i)) == i


def test_centralizer_wrong_level(n2_f3):
    law, tower, view, _ = n2_f3
    other = enumerate_group(law, tower, 3, 2)
    with pytest.raises(ParameterError):
        centralizer(view, other.point(1))


def test_digit_fallback_matches_table_kernels():
    """Views above the table threshold use digit kernels; forcing the
    fallback on a small view must reproduce the table-path results."""
    tower = FieldTower(2)
    law = builtin("ul", 2, 3)
    fast = enumerate_group(law, tower, 2, 1)
    slow = enumerate_group(law, tower, 2, 1)
    slow.tables = None
    import numpy as np

    for seed in range(fast.order):
        a = fast.conjugates_combined(fast.codes[seed])
        b = slow.conjugates_combined(slow.codes[seed])
        assert np.array_equal(a, b)
    for g in range(fast.order):
        for t in range(fast.order):
            ya = fast.find_conjugator(fast.codes[g], fast.codes[t])
            yb = slow.find_conjugator(slow.codes[g], slow.codes[t])
            assert ya == yb
        pa = centralizer(fast, fast.point(g))
        pb = centralizer(slow, slow.point(g))
        assert np.array_equal(pa, pb)
    ta = conjugacy_classes(fast)
    tb = conjugacy_classes(slow)
    assert list(ta.class_of) == list(tb.class_of)
