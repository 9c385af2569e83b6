import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from paranil.constructions import (companion_semidirect, direct_with_cyclic, free_nilpotent_class2,
                                   heisenberg)
from paranil.pcgroup import (CollectionError, GroupHom, PcPresentation, PresentationError,
                             verify_hom)


@pytest.fixture(scope="module")
def heis():
    return heisenberg()


def test_heisenberg_collect_examples(heis):
    # a^2 b^3 a b
    assert heis.collect([(0, 2), (1, 3), (0, 1), (1, 1)]) == (3, 4, 3)
    assert heis.collect([]) == (0, 0, 0)
    assert heis.collect([(1, 1), (0, 1)]) == (1, 1, 1)


def test_heisenberg_invert_power(heis):
    assert heis.invert((1, 1, 0)) == (-1, -1, 1)
    assert heis.invert((0, 0, 0)) == (0, 0, 0)
    assert heis.invert((0, 0, 5)) == (0, 0, -5)
    assert heis.power((1, 1, 0), 2) == (2, 2, 1)
    assert heis.power((4, -2, 7), 0) == (0, 0, 0)
    assert heis.power((4, -2, 7), 1) == (4, -2, 7)


def test_heisenberg_commutators(heis):
    # [u, v] = u^-1 v^-1 u v with b^a = b c gives [a, b] = c^-1
    a, b = heis.unit(0), heis.unit(1)
    assert heis.commutator(a, b) == (0, 0, -1)
    assert heis.commutator(b, a) == (0, 0, 1)
    assert heis.commutator(heis.power(a, 2), heis.power(b, 2)) == (0, 0, -4)
    u = (3, -1, 2)
    assert heis.commutator(u, u) == (0, 0, 0)


def _m(v):
    return oracles.heis_matrix(v)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
       st.lists(st.integers(-20, 20), min_size=3, max_size=3))
def test_heisenberg_matrix_oracle(u, v):
    P = heisenberg()
    u, v = tuple(u), tuple(v)
    assert _m(P.multiply(u, v)) == oracles.mat3(_m(u), _m(v))
    assert _m(P.invert(u)) == oracles.mat3_inv(_m(u))
    assert _m(P.commutator(u, v)) == oracles.mat3(
        oracles.mat3(oracles.mat3_inv(_m(u)), oracles.mat3_inv(_m(v))), oracles.mat3(_m(u), _m(v)))


def test_heisenberg_words_against_matrices(heis):
    rng = random.Random(11)
    for _ in range(200):
        word = [(rng.randrange(3), rng.randint(-5, 5)) for _ in range(rng.randint(0, 8))]
        m = oracles.heis_matrix((0, 0, 0))
        for i, e in word:
            g = oracles.heis_matrix(heis.unit(i))
            step = g if e >= 0 else oracles.mat3_inv(g)
            for _ in range(abs(e)):
                m = oracles.mat3(m, step)
        assert heis.collect(word) == oracles.heis_from_matrix(m)


def _all_elements(P):
    out = [()]
    for o in P.orders:
        out = [e + (x,) for e in out for x in range(o)]
    return out


def _check_against_table(P, to_oracle, mul):
    elems = _all_elements(P)
    images = {e: to_oracle(e) for e in elems}
    assert len(set(images.values())) == len(elems)
    for u in elems:
        for v in elems:
            assert images[P.multiply(u, v)] == mul(images[u], images[v])


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_dihedral_cayley_table(n):
    P = PcPresentation(["s", "r"], [2, n], None, {(1, 0): (0, n - 1)})
    assert P.check_consistency().passed
    _check_against_table(P, lambda e: (e[0], e[1]), oracles.dihedral_mul(n))


def test_quaternion_cayley_table():
    P = PcPresentation(["i", "j", "m"], [2, 2, 2], {0: (0, 0, 1), 1: (0, 0, 1)},
                       {(1, 0): (0, 1, 1)})
    assert P.check_consistency().passed
    _check_against_table(P, oracles.quat_of, oracles.quat_mul)


def test_heisenberg_mod3_cayley_table():
    P = PcPresentation(["a", "b", "c"], [3, 3, 3], None, {(1, 0): (0, 1, 1)})
    assert P.check_consistency().passed
    _check_against_table(P, lambda e: oracles.heis_matrix(e, 3),
                         lambda x, y: oracles.mat3(x, y, 3))


def test_cyclic_with_power_relation():
    P = PcPresentation(["g", "h"], [2, 2], {0: (0, 1)})
    _check_against_table(P, lambda e: (e[0] + 2 * e[1]) % 4, lambda x, y: (x + y) % 4)


def test_consistency_examples(heis):
    assert heis.check_consistency().passed
    bad = PcPresentation(["g1", "g2"], [2, 5], None, {(1, 0): (0, 2)})
    rep = bad.check_consistency()
    assert not rep.passed
    assert rep.summary == "inconsistent: overlap g2^(g1^2)"
    assert rep.witnesses["left"] != rep.witnesses["right"]
    c6 = PcPresentation(["g1", "g2"], [2, 3])
    assert c6.check_consistency().passed


def test_constructed_presentations_consistent():
    for P in [heisenberg(), companion_semidirect(3), companion_semidirect(5),
              free_nilpotent_class2(3), free_nilpotent_class2(4),
              direct_with_cyclic(companion_semidirect(3), 2)]:
        assert P.check_consistency().passed, P.name


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_group_axioms_random(data):
    P = data.draw(st.sampled_from([companion_semidirect(3), free_nilpotent_class2(3),
                                   direct_with_cyclic(heisenberg(), 3)]))
    vec = st.lists(st.integers(-5, 5), min_size=P.n, max_size=P.n).map(lambda v: P.normalize(tuple(v)))
    u, v, w = data.draw(vec), data.draw(vec), data.draw(vec)
    k = data.draw(st.integers(-4, 6))
    assert P.multiply(P.multiply(u, v), w) == P.multiply(u, P.multiply(v, w))
    assert P.multiply(u, P.invert(u)) == P.identity == P.multiply(P.invert(u), u)
    assert P.power(u, k + 1) == P.multiply(P.power(u, k), u)


def test_verify_hom_examples(heis):
    ident = GroupHom(heis, heis, [heis.unit(i) for i in range(3)])
    assert verify_hom(ident).passed and ident.verified
    a, c = heis.unit(0), heis.unit(2)
    # a, b -> a with c -> 1 does respect every relation (the image is abelian)
    assert verify_hom(GroupHom(heis, heis, [a, a, heis.identity])).passed
    bad = GroupHom(heis, heis, [a, a, c])
    rep = verify_hom(bad)
    assert not rep.passed and not bad.verified
    assert "not preserved" in rep.summary


def test_presentation_validation():
    with pytest.raises(PresentationError):
        PcPresentation(["a"], [1])
    with pytest.raises(PresentationError):
        PcPresentation(["a", "a"], [0, 0])
    with pytest.raises(PresentationError):
        PcPresentation(["a", "b"], [0, 0], None, {(1, 0): (1, 1)})


def test_step_budget():
    P = PcPresentation(["a", "b", "c"], [0, 0, 0], None, {(1, 0): (0, 1, 1)}, step_budget=3)
    with pytest.raises(CollectionError):
        for _ in range(50):
            P.collect([(1, 7), (0, 9), (1, -5), (0, 3)])
