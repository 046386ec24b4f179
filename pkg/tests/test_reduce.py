from __future__ import annotations

from collections import Counter

import pytest

from xorcert import (
    GenSpec,
    KXorInstance,
    SubsetDictionary,
    bipartite_matrix,
    brute_force_val,
    decompose,
    gen_kxor,
    gen_random_partitioned,
    heavy_sub_instance,
    heavy_value_dominates,
    kxor_to_partitioned,
)


def test_reduce_k3_singles_out_min_vertex():
    inst = KXorInstance(n=4, k=3, clauses=((0, 1, 2), (1, 2, 3)), signs=(1, -1))
    red = kxor_to_partitioned(inst)
    assert red.psi.ell == 4 and red.psi.n == 4
    assert red.psi.constraints == ((0, 1, 2, 1), (1, 2, 3, -1))
    # identity dictionary on singletons
    assert red.dictionary.subset_size == 1
    assert red.dictionary.index_of((2,)) == 2


def test_reduce_k2_is_identity_embedding():
    inst = KXorInstance(n=5, k=2, clauses=((0, 3), (1, 4)), signs=(-1, 1))
    red = kxor_to_partitioned(inst)
    assert red.psi.ell == 1 and red.psi.n == 5
    assert red.psi.constraints == ((0, 0, 3, -1), (0, 1, 4, 1))


def test_reduce_k4_splits_into_pairs():
    inst = KXorInstance(n=6, k=4, clauses=((0, 1, 2, 3), (0, 1, 4, 5)), signs=(1, 1))
    red = kxor_to_partitioned(inst)
    assert red.psi.ell == 1
    # halves registered in first-seen order; {0,1} shared by both clauses
    assert red.dictionary.subsets == ((0, 1), (2, 3), (4, 5))
    assert red.psi.constraints == ((0, 0, 1, 1), (0, 0, 2, 1))
    assert red.psi.n == 3


def test_reduce_rejects_empty():
    with pytest.raises(ValueError):
        kxor_to_partitioned(KXorInstance(n=4, k=2, clauses=(), signs=()))


@pytest.mark.parametrize("k,seed", [(2, 0), (3, 1), (4, 2), (5, 3)])
def test_reduce_never_loses_value(k, seed):
    inst = gen_kxor(GenSpec(kind="random", n=6, m=20, seed=seed, k=k))
    red = kxor_to_partitioned(inst)
    val_phi, _ = brute_force_val(inst)
    val_psi, _ = brute_force_val(red.psi, cap=20)
    assert val_psi >= val_phi


def test_subset_dictionary_validation():
    with pytest.raises(ValueError):
        SubsetDictionary(subset_size=0, subsets=())
    with pytest.raises(ValueError):
        SubsetDictionary(subset_size=2, subsets=((0,),))
    with pytest.raises(ValueError):
        SubsetDictionary(subset_size=2, subsets=((1, 0),))
    with pytest.raises(ValueError):
        SubsetDictionary(subset_size=2, subsets=((0, 1), (0, 1)))
    d = SubsetDictionary(subset_size=2, subsets=((0, 1), (2, 3)))
    with pytest.raises(KeyError):
        d.index_of((0, 2))


def test_subset_dictionary_json_round_trip():
    d = SubsetDictionary(subset_size=2, subsets=((0, 1), (1, 4)))
    assert SubsetDictionary.from_json_dict(d.to_json_dict()) == d


def _heavy_multiset(dec):
    rows = []
    for left, right, s in dec.heavy.constraints:
        part, vertex = dec.heavy.left_labels[left]
        rows.append((part, min(vertex, right), max(vertex, right), s))
    return Counter(rows)


@pytest.mark.parametrize("seed", range(6))
def test_decompose_accounting(seed):
    inst = gen_random_partitioned(8, 2, 120, seed=seed)
    eps = 0.3
    dec = decompose(inst, eps)
    assert dec.d_cap == 45  # ceil(4 / 0.09)
    assert dec.m_light + dec.m_heavy == inst.m
    # light side: every (part, vertex) group strictly below the cap
    counts: dict[tuple[int, int], int] = {}
    for p, u, v, _ in dec.light.constraints:
        counts[(p, u)] = counts.get((p, u), 0) + 1
        counts[(p, v)] = counts.get((p, v), 0) + 1
    assert all(c < dec.d_cap for c in counts.values())
    # each removed group carried >= d_cap constraints when removed
    assert len(dec.heavy.left_labels) * dec.d_cap <= dec.m_heavy or dec.m_heavy == 0
    # provenance partitions the constraint list, preserving multiplicity
    light_rows = [inst.constraints[j] for j, tag in enumerate(dec.provenance) if tag == ("light",)]
    assert Counter(light_rows) == Counter(dec.light.constraints)
    heavy_rows = [inst.constraints[j] for j, tag in enumerate(dec.provenance) if tag[0] == "heavy"]
    assert Counter(heavy_rows) == _heavy_multiset(dec)


def test_decompose_star_goes_all_heavy():
    phi = gen_kxor(GenSpec(kind="star", n=12, m=80, seed=4, k=2))
    psi = kxor_to_partitioned(phi).psi
    dec = decompose(psi, eps=0.3)  # d_cap = 45 < 80 = deg(0)
    assert dec.m_light == 0 and dec.m_heavy == 80
    assert dec.heavy.left_labels[0] == (0, 0)
    assert all(tag[0] == "heavy" for tag in dec.provenance)


def test_decompose_is_deterministic():
    inst = gen_random_partitioned(8, 2, 120, seed=9)
    assert decompose(inst, 0.3) == decompose(inst, 0.3)


def test_decompose_validation():
    inst = gen_random_partitioned(6, 1, 10, seed=0)
    with pytest.raises(ValueError):
        decompose(inst, eps=0.0)
    with pytest.raises(ValueError):
        decompose(inst, eps=0.2, c_split=-1.0)


def test_heavy_sub_instance_round_trip():
    phi = gen_kxor(GenSpec(kind="star", n=10, m=50, seed=2, k=2))
    dec = decompose(kxor_to_partitioned(phi).psi, eps=0.4)
    sub = heavy_sub_instance(dec)
    assert sub is not None and sub.m == dec.m_heavy
    assert Counter(sub.constraints) == _heavy_multiset(dec)
    mat = bipartite_matrix(dec.heavy)
    assert mat.rows == len(dec.heavy.left_labels) and mat.cols == dec.heavy.n_right


def test_heavy_sub_instance_none_when_all_light():
    inst = gen_random_partitioned(12, 3, 20, seed=1)
    dec = decompose(inst, eps=0.3)  # d_cap = 45 >> any degree here
    assert dec.m_heavy == 0 and heavy_sub_instance(dec) is None
    assert heavy_value_dominates(dec)


@pytest.mark.parametrize("family,seed", [("star", 0), ("heavy-group", 1), ("random", 2)])
def test_heavy_value_dominates(family, seed):
    phi = gen_kxor(GenSpec(kind=family, n=10, m=60, seed=seed, k=2))
    dec = decompose(kxor_to_partitioned(phi).psi, eps=0.4)
    assert heavy_value_dominates(dec)
