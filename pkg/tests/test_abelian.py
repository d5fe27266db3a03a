import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rouxlab.abelian import (AbelianGroup, Character, Cyclotomic, GroupRingElement, cyclotomic_polynomial,
                             decompose, eval_character, hat_c, make_group, parse_character, reduction_matrix,
                             subgroup_elements)
from rouxlab.roux import RouxParameters

GROUPS = [(1,), (2,), (3,), (4,), (2, 2), (2, 3), (3, 3), (4, 2), (2, 2, 2), (5,), (6,)]


@pytest.mark.parametrize("orders", GROUPS)
def test_group_tables_consistent(orders):
    G = make_group(orders)
    assert G.order == int(np.prod(orders))
    assert len(G.elements) == G.order
    e = G.index(G.identity)
    for a in range(G.order):
        assert G.mul_table[a, G.inv_table[a]] == e
        for b in range(G.order):
            assert G.mul_table[a, b] == G.mul_table[b, a]
            assert G.mul_table[G.div_table[a, b], b] == a


def test_elements_are_lexicographic():
    G = make_group([2, 3])
    assert G.elements == list(itertools.product(range(2), range(3)))


def test_exponent_and_element_order():
    G = make_group([4, 6])
    assert G.exponent == 12
    assert G.element_order((1, 0)) == 4
    assert G.element_order((2, 3)) == 2
    assert G.element_order((1, 1)) == 12


def test_c4_labels_round_trip():
    G = make_group([4])
    assert [G.label(g) for g in G.elements] == ["1", "i", "-1", "-i"]
    for g in G.elements:
        assert G.parse_label(G.label(g)) == g


def test_coerce_rejects_wrong_length():
    with pytest.raises(ValueError):
        make_group([4]).coerce((1, 2))


@pytest.mark.parametrize("orders", GROUPS)
def test_character_table_orthogonality(orders):
    G = make_group(orders)
    L = G.exponent
    roots = np.exp(2j * np.pi * G.char_table / L)
    gram = roots @ roots.conj().T
    assert np.allclose(gram, G.order * np.eye(G.order))


def test_character_arithmetic():
    G = make_group([4])
    a = Character(G, (1,))
    assert (a * a).exponents == (2,)
    assert a.inverse().exponents == (3,)
    assert (a ** 4).is_trivial()
    assert a.order() == 4
    assert complex(a((1,))) == pytest.approx(1j)


def test_parse_character_default_is_all_ones():
    G = make_group([3, 3])
    assert parse_character(G, None).exponents == (1, 1)
    assert parse_character(G, "0,2").exponents == (0, 2)


@pytest.mark.parametrize("L, poly", [(1, (-1, 1)), (2, (1, 1)), (4, (1, 0, 1)), (3, (1, 1, 1)),
                                     (6, (1, -1, 1)), (12, (1, 0, -1, 0, 1))])
def test_cyclotomic_polynomial(L, poly):
    assert tuple(cyclotomic_polynomial(L)) == poly


@pytest.mark.parametrize("L", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15])
def test_reduction_matrix_matches_complex_roots(L):
    R = reduction_matrix(L)
    z = np.exp(2j * np.pi / L)
    basis = z ** np.arange(R.shape[1])
    assert np.allclose(R @ basis, z ** np.arange(L))


def test_cyclotomic_identities():
    i = Cyclotomic.root(4, 1)
    assert i * i == -1
    assert i.conjugate() == -i
    w = Cyclotomic.root(3, 1)
    assert 1 + w + w * w == 0
    assert w ** 3 == 1
    # level promotion: -1 at level 2 equals zeta_4^2
    assert Cyclotomic.root(2, 1) == Cyclotomic.root(4, 2)
    assert hash(Cyclotomic.root(2, 1)) == hash(Cyclotomic.root(4, 2))


def test_cyclotomic_sqrt_and_reality():
    z8 = Cyclotomic.root(8, 1)
    s2 = z8 + z8.conjugate()
    assert s2.is_real() and not s2.is_rational()
    assert s2 * s2 == 2
    assert Cyclotomic.rational(9, 4).sqrt_if_integer() == 3
    assert Cyclotomic.rational(8, 4).sqrt_if_integer() is None


def test_cyclotomic_json_round_trip():
    x = Cyclotomic.root(12, 5) * Fraction(3, 7) + 2
    assert Cyclotomic.from_json(x.to_json()) == x


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 4, 5, 6, 8, 12]), st.lists(st.integers(-5, 5), min_size=12, max_size=12),
       st.lists(st.integers(-5, 5), min_size=12, max_size=12))
def test_cyclotomic_ring_matches_complex(L, a, b):
    x = Cyclotomic.from_counts(L, a[:L])
    y = Cyclotomic.from_counts(L, b[:L])
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), abs=1e-9)
    assert complex(x + y) == pytest.approx(complex(x) + complex(y), abs=1e-9)
    assert complex(x.conjugate()) == pytest.approx(complex(x).conjugate(), abs=1e-9)


def test_group_ring_product_and_star():
    G = make_group([4])
    a = GroupRingElement.delta(G, (1,))
    b = GroupRingElement(G, {(0,): 2, (3,): 1})
    prod = a * b
    assert prod == GroupRingElement(G, {(1,): 2, (0,): 1})
    assert a.star() == GroupRingElement.delta(G, (3,))
    alpha = Character(G, (1,))
    assert complex(eval_character(alpha, prod)) == pytest.approx(2j + 1)


def test_hat_c_on_conference_parameters():
    G = make_group([4])
    params = RouxParameters(G, (0, 1, 0, 1))
    values = [hat_c(params, a) for a in G.characters]
    assert values == [2, 0, -2, 0]


def test_subgroup_and_decompose():
    G = make_group([4, 2])
    H = subgroup_elements(G, [(2, 1)])
    assert sorted(H) == [(0, 0), (2, 1)]
    small, iso = decompose(G.elements, G.op, G.identity)
    assert sorted(small.orders, reverse=True) == [4, 2]
    assert set(iso.values()) == set(G.elements)


def test_trivial_group():
    G = make_group([])
    assert G.order == 1
    assert G.label(G.identity) == "e"
    assert isinstance(G, AbelianGroup)
