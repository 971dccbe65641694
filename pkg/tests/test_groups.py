import pytest

from roundness.errors import (
    EmptyAfterClosure,
    InvalidParameter,
    SpecMismatch,
    WordParseError,
)
from roundness.groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    Free,
    FreeAbelian,
    FreeProductOfCyclics,
    GeneratingSet,
    GroupElement,
    element_order,
    format_element,
    format_spec,
    identity,
    inverse,
    multiply,
    parse_element,
    parse_generators,
    parse_group,
    power,
    sort_key,
    symmetric_closure,
)

Z2 = FreeAbelian(2)
F2 = Free(2)
X = GroupElement(F2, ((0, 1),))
Y = GroupElement(F2, ((1, 1),))


def test_abelian_arithmetic():
    a = GroupElement(Z2, (1, 0))
    b = GroupElement(Z2, (0, 1))
    assert multiply(a, b).value == (1, 1)
    assert inverse(a).value == (-1, 0)
    assert multiply(a, inverse(a)) == identity(Z2)


def test_free_reduction():
    assert multiply(X, inverse(X)) == identity(F2)
    w = multiply(multiply(X, Y), inverse(Y))
    assert w == X
    assert (X * Y).value == ((0, 1), (1, 1))


def test_cyclic_arithmetic():
    c8 = Cyclic(8)
    five = GroupElement(c8, 5)
    assert multiply(five, five).value == 2
    assert inverse(five).value == 3


def test_spec_mismatch():
    with pytest.raises(SpecMismatch):
        multiply(GroupElement(Z2, (1, 0)), GroupElement(Cyclic(3), 1))


def test_dihedral_relations():
    d4 = Dihedral(4)
    r = GroupElement(d4, (1, 0))
    s = GroupElement(d4, (0, 1))
    assert multiply(s, s) == identity(d4)
    assert power(r, 4) == identity(d4)
    # s r s^-1 = r^-1
    assert multiply(multiply(s, r), inverse(s)) == inverse(r)


def test_direct_product_arithmetic():
    spec = DirectProduct((FreeAbelian(1), Cyclic(2)))
    g = GroupElement(spec, ((1,), 1))
    h = multiply(g, g)
    assert h.value == ((2,), 0)
    assert inverse(g).value == ((-1,), 1)


@pytest.mark.parametrize(
    "element,expected",
    [
        (GroupElement(Z2, (0, 0)), 1),
        (GroupElement(Z2, (2, -1)), 0),
        (GroupElement(Cyclic(8), 6), 4),
        (X, 0),
        (GroupElement(Dihedral(6), (2, 0)), 3),
        (GroupElement(Dihedral(6), (5, 1)), 2),
    ],
)
def test_element_orders(element, expected):
    assert element_order(element) == expected


def test_free_product_orders():
    zz = FreeProductOfCyclics((2, 3))
    a = GroupElement(zz, ((0, 1),))
    b = GroupElement(zz, ((1, 1),))
    assert element_order(a) == 2
    assert element_order(b) == 3
    assert element_order(multiply(a, b)) == 0  # infinite
    # conjugates of torsion elements stay torsion: b a b^-1
    conj = multiply(multiply(b, a), inverse(b))
    assert element_order(conj) == 2


def test_power():
    assert power(GroupElement(Cyclic(9), 2), 5).value == 1
    assert power(X, -2) == multiply(inverse(X), inverse(X))
    assert power(X, 0) == identity(F2)


def _brute_order(g, cap=64):
    acc = g
    for k in range(1, cap + 1):
        if acc == identity(g.spec):
            return k
        acc = multiply(acc, g)
    return 0


def test_free_product_orders_against_brute_force():
    # every word of length <= 3 in Z/2 * Z/4: cyclic-reduction order must
    # agree with repeated multiplication
    zz = FreeProductOfCyclics((2, 4))
    a = GroupElement(zz, ((0, 1),))
    b = GroupElement(zz, ((1, 1),))
    gens = [a, b, inverse(b)]
    words = {identity(zz)}
    frontier = {identity(zz)}
    for _ in range(3):
        frontier = {multiply(w, s) for w in frontier for s in gens}
        words |= frontier
    for w in words:
        got = element_order(w)
        brute = _brute_order(w)
        if brute == 0:
            assert got == 0 or got > 64
        else:
            assert got == brute, (w.value, got, brute)


def test_group_axioms_randomized():
    import random

    rng = random.Random(17)
    specs = [
        FreeAbelian(3),
        Cyclic(12),
        Free(2),
        FreeProductOfCyclics((2, 3)),
        Dihedral(5),
        DirectProduct((Cyclic(4), Free(1))),
    ]
    for spec in specs:
        # random elements as random generator words
        base = []
        if isinstance(spec, FreeAbelian):
            base = [GroupElement(spec, tuple(rng.randint(-2, 2) for _ in range(spec.rank)))
                    for _ in range(3)]
        elif isinstance(spec, Cyclic):
            base = [GroupElement(spec, rng.randrange(spec.modulus)) for _ in range(3)]
        elif isinstance(spec, Dihedral):
            base = [GroupElement(spec, (rng.randrange(spec.n), rng.randrange(2)))
                    for _ in range(3)]
        elif isinstance(spec, DirectProduct):
            base = [GroupElement(spec, (rng.randrange(4), ((0, rng.choice([-1, 1])),)))
                    for _ in range(3)]
        else:
            letters = spec.rank if isinstance(spec, Free) else len(spec.orders)
            base = []
            for _ in range(3):
                g = identity(spec)
                for _ in range(rng.randint(1, 4)):
                    g = multiply(g, GroupElement(spec, ((rng.randrange(letters),
                                                         rng.choice([-1, 1, 2])),)))
                base.append(g)
        e = identity(spec)
        for g in base:
            assert multiply(g, e) == g == multiply(e, g)
            assert multiply(g, inverse(g)) == e == multiply(inverse(g), g)
        for g in base:
            for h in base:
                for k in base:
                    assert multiply(multiply(g, h), k) == multiply(g, multiply(h, k))


def test_symmetric_closure_examples():
    gens = symmetric_closure(Z2, [GroupElement(Z2, (1, 0)), GroupElement(Z2, (0, 1))])
    assert {g.value for g in gens} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    z4 = Cyclic(4)
    gens4 = symmetric_closure(z4, [GroupElement(z4, 1)])
    assert {g.value for g in gens4} == {1, 3}
    z = multiply(inverse(Y), X)
    gens_f = symmetric_closure(F2, [X, Y, z])
    assert len(gens_f) == 6


def test_closure_drops_identity_and_can_empty():
    gens = symmetric_closure(Z2, [identity(Z2), GroupElement(Z2, (1, 1))])
    assert len(gens) == 2
    with pytest.raises(EmptyAfterClosure):
        symmetric_closure(Z2, [identity(Z2)])


def test_generating_set_validation():
    with pytest.raises(InvalidParameter):
        GeneratingSet(Z2, (GroupElement(Z2, (1, 0)),))  # not symmetric
    with pytest.raises(InvalidParameter):
        GeneratingSet(Z2, (identity(Z2),))


def test_generating_set_sorted_deterministic():
    gens = symmetric_closure(Z2, [GroupElement(Z2, (1, 1)), GroupElement(Z2, (1, 0))])
    assert [g.value for g in gens.elements] == sorted(g.value for g in gens.elements)


def test_sort_key_orders_words_by_length():
    assert sort_key(X) < sort_key(multiply(X, Y))


@pytest.mark.parametrize(
    "text,spec",
    [
        ("Z^2", FreeAbelian(2)),
        ("Z", FreeAbelian(1)),
        ("Z/4", Cyclic(4)),
        ("F_2", Free(2)),
        ("D_5", Dihedral(5)),
        ("Z/2 * Z/3 * Z", FreeProductOfCyclics((2, 3, 0))),
        ("Z^1 x Z/2", DirectProduct((FreeAbelian(1), Cyclic(2)))),
    ],
)
def test_parse_group(text, spec):
    assert parse_group(text) == spec


def test_parse_group_errors():
    for bad in ("Q", "Z/1", "F_0", "", "Z/2 * Q"):
        with pytest.raises(WordParseError):
            parse_group(bad)


def test_parse_and_format_elements_roundtrip():
    cases = [
        (Z2, "(1,0)"),
        (Z2, "(-3,7)"),
        (FreeAbelian(1), "5"),
        (Cyclic(6), "4"),
        (F2, "x*y^-1*x^2"),
        (F2, "e"),
        (Dihedral(4), "r^2*s"),
        (DirectProduct((FreeAbelian(1), Cyclic(2))), "(1|1)"),
    ]
    for spec, text in cases:
        g = parse_element(spec, text)
        assert parse_element(spec, format_element(g)) == g


def test_parse_word_reduces():
    assert parse_element(F2, "x*x^-1") == identity(F2)
    assert parse_element(F2, "y^-1*x") == multiply(inverse(Y), X)


def test_parse_generators_splits_top_level():
    gens = parse_generators(Z2, "(1,0),(0,1)")
    assert [g.value for g in gens] == [(1, 0), (0, 1)]
    words = parse_generators(F2, "x,y,y^-1*x")
    assert words[2] == multiply(inverse(Y), X)


def test_parse_element_errors():
    with pytest.raises(WordParseError):
        parse_element(Z2, "(1,2,3)")
    with pytest.raises(WordParseError):
        parse_element(F2, "q^2")
    with pytest.raises(WordParseError):
        parse_element(Cyclic(4), "abc")


def test_format_spec_roundtrip():
    for text in ("Z^2", "Z/4", "F_2", "D_5", "Z/2 * Z/3 * Z", "Z^1 x Z/2"):
        assert parse_group(format_spec(parse_group(text))) == parse_group(text)
