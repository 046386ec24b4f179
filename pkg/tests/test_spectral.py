from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import dupfree_partitioned
from xorcert import (
    ButterflyTable,
    PartitionedInstance,
    WeightClassPartition,
    block_r_bound,
    block_variance_bound,
    brute_force_val,
    build_block,
    build_blocks,
    build_part_block,
    butterfly,
    certify_dbounded,
    degree_profile,
    dup_correction,
    empirical_variance_norm,
    gen_random_partitioned,
    phi1_direct,
    phi1_from_blocks,
    phi2_term,
    phi_direct,
    spectral_norm,
    weight_classes,
)


def _signs(rng, n):
    return (2.0 * rng.integers(0, 2, size=n) - 1.0).astype(float)


def test_butterfly_hand_example():
    # one part, t = 2, edges {0,1} and {0,2}: deg = (2, 1, 1)
    inst = PartitionedInstance(n=3, ell=1, constraints=((0, 0, 1, 1), (0, 0, 2, -1)))
    table = butterfly(degree_profile(inst))
    assert table.value(0, 0) == pytest.approx(2.0)
    assert table.value(0, 1) == pytest.approx(1.0)
    assert table.value(1, 2) == pytest.approx(0.5)
    assert table.value(1, 1) == pytest.approx(0.5)
    assert table.total == pytest.approx(4 * inst.m)


@pytest.mark.parametrize("seed", range(5))
def test_butterfly_total_is_4m(seed):
    inst = gen_random_partitioned(9, 3, 70, seed=seed)
    table = butterfly(degree_profile(inst))
    assert table.total == pytest.approx(4 * inst.m, rel=1e-12)


def test_weight_class_boundaries():
    # n = 4, d = 1, ell = 1, eps = 0.4, m = 2500: alpha ~ 1, beta ~ 100, levels = 2
    gamma = {(0, 1): 0.5, (0, 2): 50.0, (1, 2): 5000.0, (1, 3): 1e8}
    table = ButterflyTable(n=4, gamma=gamma, total=sum(gamma.values()))
    partition = weight_classes(table, d=1, eps=0.4, m=2500, ell=1)
    assert partition.levels == 2
    assert partition.alpha == pytest.approx(1.0)
    assert partition.beta == pytest.approx(100.0)
    assert not partition.clamped
    assert partition.class_of((0, 1)) == 0
    assert partition.class_of((0, 2)) == 1
    assert partition.class_of((1, 2)) == 2
    assert partition.class_of((1, 3)) == 2  # above the top boundary: capped at levels
    assert partition.class_of((3, 3)) == 0  # absent pairs have gamma = 0
    assert sum(partition.sizes) == 16
    assert partition.sizes == (13, 1, 2)


def test_weight_class_clamping():
    table = ButterflyTable(n=4, gamma={(0, 1): 3.0}, total=4.0)
    partition = weight_classes(table, d=10, eps=0.1, m=1, ell=2)
    assert partition.clamped and partition.beta == 1.0
    assert partition.heavy == {}
    assert partition.sizes[0] == 16 and sum(partition.sizes) == 16


def test_weight_class_validation():
    table = ButterflyTable(n=4, gamma={}, total=0.0)
    with pytest.raises(ValueError):
        weight_classes(table, d=0, eps=0.2, m=10, ell=1)
    with pytest.raises(ValueError):
        weight_classes(table, d=1, eps=0.6, m=10, ell=1)
    with pytest.raises(ValueError):
        weight_classes(ButterflyTable(n=1, gamma={}, total=0.0), d=1, eps=0.2, m=10, ell=1)


def _all_s0(n):
    levels = math.ceil(math.log2(n))
    sizes = (n * n,) + (0,) * levels
    return WeightClassPartition(n=n, alpha=1e9, beta=1.0, levels=levels,
                                clamped=True, heavy={}, sizes=sizes)


def test_block_entries_hand_example():
    # edges {0,1} (+1) and {0,2} (-1) in one part of size 2:
    # entry at row pair (0,0), column pair (1,2) equals -1/sqrt(2)
    inst = PartitionedInstance(n=3, ell=1, constraints=((0, 0, 1, 1), (0, 0, 2, -1)))
    partition = _all_s0(3)
    block = build_blocks(inst, partition)[(0, 0)]
    n = 3
    dense = block.mat.to_dense()
    row = int(np.flatnonzero(block.row_pairs == 0 * n + 0)[0])
    col = int(np.flatnonzero(block.col_pairs == 1 * n + 2)[0])
    assert dense[row, col] == pytest.approx(-1.0 / math.sqrt(2.0))
    # two edge orders x four orientations = 8 entries, all -1/sqrt(2)
    assert block.mat.nnz == 8
    np.testing.assert_allclose(block.mat.v, -1.0 / math.sqrt(2.0))


def test_single_constraint_has_no_blocks():
    inst = PartitionedInstance(n=4, ell=2, constraints=((1, 2, 3, -1),))
    assert build_blocks(inst, _all_s0(4)) == {}
    mat = build_block(inst, _all_s0(4), 0, 0)
    assert mat.rows == 0 and mat.nnz == 0


@pytest.mark.parametrize("seed", range(4))
def test_phi_identities(seed):
    gen = np.random.default_rng(seed)
    inst = dupfree_partitioned(gen, n=8, ell=2, m=30)
    profile = degree_profile(inst)
    partition = _all_s0(8)
    blocks = build_blocks(inst, partition)
    c0 = dup_correction(inst, profile)
    assert c0 == pytest.approx(0.0, abs=1e-12)  # duplicate-free
    for _ in range(10):
        x = _signs(gen, 8)
        phi = phi_direct(inst, x)
        assert phi == pytest.approx(phi1_direct(inst, x) + phi2_term(profile), rel=1e-12)
        assert phi1_from_blocks(blocks, x, c0, 8) == pytest.approx(
            phi1_direct(inst, x), rel=1e-9, abs=1e-9)


def test_dup_correction_signs():
    doubled = PartitionedInstance(n=2, ell=1, constraints=((0, 0, 1, 1), (0, 0, 1, 1)))
    assert dup_correction(doubled) == pytest.approx(4 / math.sqrt(2) - math.sqrt(2))
    cancelled = PartitionedInstance(n=2, ell=1, constraints=((0, 0, 1, 1), (0, 0, 1, -1)))
    assert dup_correction(cancelled) == pytest.approx(-math.sqrt(2))


def test_potential_lemma_at_optimum():
    for seed in range(5):
        gen = np.random.default_rng(seed + 100)
        inst = dupfree_partitioned(gen, n=7, ell=2, m=25)
        val, asg = brute_force_val(inst)
        x = np.array(asg.x, dtype=float)
        eps_star = float(val) - 0.5
        ell_eff = len(degree_profile(inst).t)
        lemma = 4.0 * eps_star**2 * inst.m**1.5 / math.sqrt(ell_eff)
        assert phi_direct(inst, x) >= lemma - 1e-9 * max(1.0, lemma)


def test_analytic_bounds_dominate_empirical():
    gen = np.random.default_rng(7)
    inst = dupfree_partitioned(gen, n=8, ell=2, m=40)
    profile = degree_profile(inst)
    d = profile.max_degree()
    partition = weight_classes(butterfly(profile), d=d, eps=0.3, m=inst.m,
                               ell=len(profile.t))
    blocks = build_blocks(inst, partition)
    for (j, k), block in blocks.items():
        sigma2 = block_variance_bound(partition, j, k)
        assert empirical_variance_norm(inst, partition, j, k) <= sigma2 * (1 + 1e-9)
        r = block_r_bound(partition, j, k, d)
        for slot in range(len(profile.t)):
            part_mat = build_part_block(inst, partition, slot, j, k)
            if part_mat.nnz:
                assert spectral_norm(part_mat).upper <= r * (1 + 1e-9)


def test_empirical_variance_cap():
    inst = gen_random_partitioned(17, 1, 10, seed=0)
    with pytest.raises(ValueError):
        empirical_variance_norm(inst, _all_s0(17), 0, 0)


def test_certify_dbounded_report_fields():
    inst = gen_random_partitioned(10, 2, 300, seed=3)
    rep = certify_dbounded(inst, eps=0.45)
    assert rep.m == 300 and rep.n == 10 and rep.ell_eff == 2
    assert rep.phi_total_bound == pytest.approx(rep.phi1_bound + rep.phi2_term)
    assert rep.threshold == pytest.approx(4 * 0.45**2 * 300**1.5 / math.sqrt(2))
    assert (rep.status == "SUCCESS") == (rep.phi_total_bound <= rep.threshold)
    assert rep.implied_eps == pytest.approx(
        math.sqrt(rep.phi_total_bound * math.sqrt(2) / (4 * 300**1.5)))
    assert rep.val_upper <= 1.0
    assert sum(rep.class_sizes) == 100
    data = rep.to_json_dict()
    assert data["status"] == rep.status and len(data["blocks"]) == len(rep.blocks)


def test_certify_dbounded_bound_dominates_enumerated_phi():
    inst = gen_random_partitioned(8, 2, 60, seed=5)
    rep = certify_dbounded(inst, eps=0.3)
    worst = max(
        phi_direct(inst, np.array([1 - 2 * ((i >> j) & 1) for j in range(8)], dtype=float))
        for i in range(1 << 8)
    )
    assert rep.phi_total_bound >= worst - 1e-9 * max(1.0, worst)


def test_certify_dbounded_single_constraint():
    inst = PartitionedInstance(n=3, ell=1, constraints=((0, 1, 2, 1),))
    rep = certify_dbounded(inst, eps=0.45)
    assert rep.blocks == ()
    assert rep.phi_total_bound == pytest.approx(1.0)  # just Phi_2 = sqrt(1)
    assert rep.status == "UNKNOWN"  # a single constraint is always satisfiable


def test_certify_dbounded_degree_precondition():
    inst = gen_random_partitioned(6, 1, 40, seed=0)
    measured = degree_profile(inst).max_degree()
    with pytest.raises(ValueError):
        certify_dbounded(inst, eps=0.3, d_bound=measured - 1)
    rep = certify_dbounded(inst, eps=0.3, d_bound=measured + 5)
    assert rep.d_used == measured + 5


def test_certify_dbounded_validation():
    inst = gen_random_partitioned(6, 1, 10, seed=0)
    with pytest.raises(ValueError):
        certify_dbounded(inst, eps=0.0)
    with pytest.raises(ValueError):
        certify_dbounded(PartitionedInstance(n=3, ell=1, constraints=()), eps=0.3)
