import random

import numpy as np
import pytest

from brauerbox.errors import Inconclusive
from brauerbox.ffla import FpMatrix
from brauerbox.modrep import (MatRep, chop, direct_sum, dual, evaluate,
                              hom_space, indecomposable_summands, induce,
                              is_isomorphic, is_projective, parse_matrep,
                              perm_rep, radical_series, restrict, socle_series,
                              spin, tensor_linear, vertex)
from brauerbox.permgrp import (Subgroup, coset_action, make_group,
                               natural_action, normalizer, parse_cycles,
                               subsets_action, sylow)

from conftest import random_small_group, random_subgroup


@pytest.fixture(scope="module")
def v8(a8):
    return perm_rep(natural_action(a8), 3)


@pytest.fixture(scope="module")
def c3_regular():
    c3 = make_group([parse_cycles("(1,2,3)", 3)])
    return perm_rep(natural_action(c3), 3)


def trivial_rep(G, p=3):
    return MatRep(G, p, [np.eye(1, dtype=np.int64)] * len(G.gens), check=False)


def test_perm_rep_shapes(v8, a8):
    assert v8.dim == 8
    for m in v8.raw():
        assert ((m.sum(axis=0) == 1).all() and (m.sum(axis=1) == 1).all())
    point = coset_action(a8, Subgroup(a8, a8.gens))
    assert perm_rep(point, 3).dim == 1


def test_perm_rep_validates(v8):
    v8.validate(seed=1)


def test_evaluate(v8, a8):
    assert evaluate(v8, a8.identity).is_identity()
    for g, m in zip(a8.gens, v8.matrices):
        assert evaluate(v8, g) == m
    rng = random.Random(2)
    for _ in range(10):
        g, h = a8.random_element(rng), a8.random_element(rng)
        assert evaluate(v8, g * h) == evaluate(v8, g) @ evaluate(v8, h)
    with pytest.raises(ValueError):
        evaluate(v8, parse_cycles("(1,2)", 8))


def test_restrict_to_whole_group(v8, a8):
    res = restrict(v8, Subgroup(a8, a8.gens))
    assert res.dim == 8 and is_isomorphic(res, res) is not None


def test_restrict_fixed_space(v8, h_prime):
    # fixed space dimension = number of H'-orbits on the 8 points (two)
    res = restrict(v8, h_prime)
    from brauerbox.brauer import fixed_points
    fixed = fixed_points(res, Subgroup(h_prime.group, h_prime.gens))
    orbits = h_prime.orbits()
    assert fixed.rows == len(orbits) == 2


def test_induce_trivial_from_a7(v8, a8, a7):
    ind = induce(trivial_rep(a7.group), a8)
    assert ind.dim == 8
    assert is_isomorphic(ind, v8) is not None


def test_induce_from_whole_group(v8, a8):
    ind = induce(v8, a8)
    assert ind.dim == 8
    assert is_isomorphic(ind, v8) is not None


def test_induce_dimension_formula(a8, h_prime):
    ind = induce(trivial_rep(h_prime.group), a8)
    assert ind.dim == 280


def test_dual_involution(v8):
    assert is_isomorphic(dual(dual(v8)), v8) is not None


def test_perm_rep_self_dual(v8, a8):
    assert is_isomorphic(v8, dual(v8)) is not None
    v28 = perm_rep(subsets_action(a8, 2), 3)
    assert is_isomorphic(v28, dual(v28)) is not None


def test_tensor_linear(h_prime):
    from brauerbox.blocks import linear_characters, rep_of_character
    chars = linear_characters(h_prime.group, 3)
    assert len(chars) == 4
    trivial = next(c for c in chars if c.is_trivial())
    reps = [rep_of_character(c) for c in chars]
    base = reps[1]
    assert is_isomorphic(tensor_linear(base, trivial), base) is not None
    # tensoring permutes the four linear modules as a Klein four-group:
    # the product of any two characters is again one of the four
    value_set = {c.gen_values for c in chars}
    for c1 in chars:
        for c2 in chars:
            prod = tuple((a * b) % 3 for a, b in zip(c1.gen_values, c2.gen_values))
            assert prod in value_set
    # a nontrivial twist never fixes a one-dimensional module
    for c in chars:
        if c.is_trivial():
            continue
        assert is_isomorphic(tensor_linear(base, c), base) is None


def test_spin_examples(v8, sylow_p):
    ones = np.ones((1, 8), dtype=np.int64)
    assert spin(v8, ones).rows == 1
    res = restrict(v8, sylow_p)
    seed = np.zeros((1, 8), dtype=np.int64)
    seed[0, 6], seed[0, 7] = 1, 2  # e7 - e8
    closure = spin(res, seed)
    assert 1 <= closure.rows <= 8
    # closure oracle: the span is stable under each generator
    basis = closure.a
    for m in res.raw():
        for row in (basis @ m) % 3:
            aug = np.vstack([basis, row])
            from brauerbox.ffla import _rref_array
            assert _rref_array(aug, 3)[1] == basis.shape[0]


def test_spin_of_simple_vector(v8):
    cons = chop(v8, seed=1)
    seven = next(r for r, m in cons if r.dim == 7)
    rng = random.Random(3)
    v = np.array([[rng.randrange(3) for _ in range(7)]], dtype=np.int64)
    if not v.any():
        v[0, 0] = 1
    assert spin(seven, v).rows == 7


def test_chop_examples(v8, c3_regular, a8):
    cons = chop(v8, seed=1)
    assert cons.dims() == [1, 7]
    consc3 = chop(c3_regular, seed=0)
    assert len(consc3) == 1
    simple, mult = consc3.items[0]
    assert simple.dim == 1 and mult == 3
    assert all(m.is_identity() for m in simple.matrices)


def test_chop_dimension_conservation_random():
    rng = random.Random(21)
    for _ in range(6):
        G = random_small_group(rng, max_order=360)
        V = perm_rep(natural_action(G), 3)
        cons = chop(V, seed=rng.randrange(100))
        assert sum(r.dim * m for r, m in cons) == V.dim


def test_regular_c3_radical_chain_oracle(c3_regular):
    # brute oracle: powers of (g - 1) filter the module with 1-dim steps
    g = c3_regular.raw()[0]
    n = np.eye(3, dtype=np.int64)
    dims = []
    for k in range(4):
        from brauerbox.ffla import _rref_array
        dims.append(_rref_array(n, 3)[1])
        n = (n @ (g - np.eye(3, dtype=np.int64))) % 3
    assert dims == [3, 2, 1, 0]
    series = radical_series(c3_regular)
    assert series.layer_dims() == [1, 1, 1]


def test_hom_space_examples(v8, a8):
    triv = trivial_rep(a8)
    assert len(hom_space(v8, triv)) == 1
    assert len(hom_space(triv, v8)) == 1
    cons = chop(v8, seed=1)
    seven = next(r for r, m in cons if r.dim == 7)
    assert len(hom_space(seven, triv)) == 0
    assert is_isomorphic(seven, dual(seven)) is not None


def test_hom_space_group_mismatch(v8, c3_regular):
    with pytest.raises(ValueError):
        hom_space(v8, c3_regular)


def test_is_isomorphic_certified_negative(a8):
    triv = trivial_rep(a8)
    cons = chop(perm_rep(natural_action(a8), 3), seed=1)
    seven = next(r for r, m in cons if r.dim == 7)
    assert is_isomorphic(triv, seven) is None  # dimension mismatch
    one = next(r for r, m in cons if r.dim == 1)
    assert is_isomorphic(one, triv) is not None


def test_is_isomorphic_inconclusive():
    c2 = make_group([parse_cycles("(1,2)", 2)])
    eye = np.eye(5, dtype=np.int64)
    m1 = MatRep(c2, 3, [eye], check=False)  # five trivial summands
    twisted = eye.copy()
    twisted[4, 4] = 2
    m2 = MatRep(c2, 3, [twisted], check=False)  # four trivial and one sign
    with pytest.raises(Inconclusive):
        is_isomorphic(m1, m2)


def test_radical_series_semisimple(v8):
    series = radical_series(v8, seed=1)
    assert series.layer_dims() == [8]
    assert sorted(series.layers[0].dims()) == [1, 7]


def test_socle_vs_radical_duality(a8, h_prime, c3_regular):
    res = restrict(perm_rep(natural_action(a8), 3), h_prime)
    rad = radical_series(res, seed=2)
    soc = socle_series(res, seed=2)
    # independent socle oracle: the sum of all images of maps from simples
    from brauerbox.ffla import _rref_array
    images = np.zeros((0, res.dim), dtype=np.int64)
    for simple, _m in chop(res, seed=2):
        for f in hom_space(simple, res):
            images = np.vstack([images, f.a])
    soc_dim_direct = _rref_array(images, 3)[1]
    assert soc.layers[0].total_dim == soc_dim_direct
    # radical series of the dual matches the socle series layer by layer
    rad_dual = radical_series(dual(res), seed=2)
    assert rad_dual.layer_dims() == soc.layer_dims()
    for dual_layer, soc_layer in zip(rad_dual.layers, soc.layers):
        assert sorted(dual_layer.dims()) == sorted(soc_layer.dims())
        for simple, mult in soc_layer:
            assert any(m == mult and is_isomorphic(dual(s), simple) is not None
                       for s, m in dual_layer)
    # the permutation module is self-dual, so the two series have equal shape
    assert rad.layer_dims() == soc.layer_dims()
    assert socle_series(c3_regular).layer_dims() == [1, 1, 1]


def test_indecomposable_summands(v8, c3_regular):
    summands = indecomposable_summands(v8, seed=5)
    assert sorted(s.dim for s in summands) == [1, 7]
    rebuilt = summands[0]
    for s in summands[1:]:
        rebuilt = direct_sum(rebuilt, s)
    assert is_isomorphic(rebuilt, v8) is not None
    assert len(indecomposable_summands(c3_regular, seed=0)) == 1


def test_summand_bases_change_of_basis(v8):
    summands = indecomposable_summands(v8, seed=5)
    stacked = np.vstack([s.basis.a for s in summands])
    assert FpMatrix(3, stacked).rank() == 8


def test_is_projective(c3_regular):
    assert is_projective(c3_regular)
    c3 = c3_regular.group
    assert not is_projective(trivial_rep(c3))


def test_projective_over_p_prime_group():
    s3_gens = [parse_cycles("(1,2,3)", 3), parse_cycles("(1,2)", 3)]
    c2 = make_group([parse_cycles("(1,2)", 3)])
    assert is_projective(trivial_rep(c2))  # |C2| prime to 3


def test_vertex_examples(h_prime, c3_regular):
    triv = trivial_rep(h_prime.group)
    assert vertex(triv).order == 9  # Sylow 3-subgroup
    assert vertex(c3_regular).order == 1  # projective: trivial vertex


def test_frobenius_reciprocity_random():
    rng = random.Random(33)
    done = 0
    while done < 8:
        G = random_small_group(rng, max_order=120, max_degree=6)
        H = random_subgroup(rng, G)
        if G.order // H.order > 8:
            continue
        W = perm_rep(natural_action(H.group), 3)
        V = perm_rep(natural_action(G), 3)
        if (G.order // H.order) * W.dim > 36:
            continue
        ind = induce(W, G)
        res = restrict(V, H)
        assert len(hom_space(ind, V)) == len(hom_space(W, res))
        done += 1


def test_matrep_file_roundtrip(v8, a8):
    text = v8.to_text()
    back = parse_matrep(text, a8)
    assert back.dim == 8
    assert all((a == b).a.all() for a, b in
               zip(back.matrices, v8.matrices))
    from brauerbox.errors import ParseError
    with pytest.raises(ParseError):
        parse_matrep("matrep p=3 dim=2 gens=1\nfpmat p=3 rows=1 cols=1\n1\n", a8)


def test_singular_matrix_rejected(a8):
    bad = np.zeros((2, 2), dtype=np.int64)
    with pytest.raises(ValueError):
        MatRep(a8, 3, [bad, bad])
