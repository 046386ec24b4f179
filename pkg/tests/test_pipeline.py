from __future__ import annotations

import copy
import json

import pytest

from xorcert import (
    Certificate,
    GenSpec,
    PartitionedInstance,
    REFUTED,
    UNKNOWN,
    brute_force_val,
    gen_kxor,
    gen_random_partitioned,
    refute_kxor,
    refute_partitioned,
    verify_certificate,
    verify_certificate_detailed,
)


@pytest.fixture(scope="module")
def dense_kxor():
    inst = gen_kxor(GenSpec(kind="random", n=10, m=2000, seed=7, k=3))
    return inst, refute_kxor(inst, eps=0.25)


def _mutate(cert: Certificate, path: tuple, value) -> Certificate:
    payload = copy.deepcopy(cert.payload)
    node = payload
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    return Certificate(payload=payload)


def test_refute_partitioned_random_refutes():
    inst = gen_random_partitioned(30, 1, 4000, seed=2)
    cert = refute_partitioned(inst, eps=0.25)
    assert cert.outcome == REFUTED
    assert cert.kind == "p2xor" and cert.eps == 0.25
    assert cert.certified_val_upper <= 0.75 + 1e-12
    assert verify_certificate(cert, inst)


def test_refute_partitioned_validation():
    inst = gen_random_partitioned(6, 1, 10, seed=0)
    with pytest.raises(ValueError):
        refute_partitioned(inst, eps=0.0)
    with pytest.raises(ValueError):
        refute_partitioned(inst, eps=0.5)
    with pytest.raises(ValueError):
        refute_partitioned(PartitionedInstance(n=3, ell=1, constraints=()), eps=0.2)


def test_combination_case_heavy_small():
    # sparse duplicate-free-ish instance: nothing reaches the heavy cap
    inst = gen_random_partitioned(12, 3, 40, seed=1)
    cert = refute_partitioned(inst, eps=0.3)
    assert cert.payload["combination_case"] == "heavy-small"
    assert cert.payload["heavy"]["mode"] in ("empty", "trivial")
    assert cert.payload["heavy"]["side_bound"] == cert.payload["heavy"]["m"]
    assert verify_certificate(cert, inst)


def test_combination_case_light_small():
    # k = 2 star: every pair meets vertex 0, so one group swallows everything
    phi = gen_kxor(GenSpec(kind="star", n=16, m=300, seed=3, k=2))
    cert = refute_kxor(phi, eps=0.4)
    assert cert.payload["combination_case"] == "light-small"
    assert cert.payload["light"]["mode"] == "empty"
    assert cert.payload["heavy"]["mode"] == "sdp"
    assert verify_certificate(cert, phi)


def test_combination_case_both_large(dense_kxor):
    inst, cert = dense_kxor
    assert cert.payload["combination_case"] == "both-large"
    assert cert.payload["light"]["mode"] == "spectral"
    assert cert.payload["heavy"]["mode"] == "sdp"
    assert cert.outcome == REFUTED


def test_outcome_matches_combined_bound():
    for seed in range(4):
        inst = gen_random_partitioned(14, 2, 150, seed=seed)
        for eps in (0.1, 0.3):
            cert = refute_partitioned(inst, eps=eps)
            combined = (cert.payload["light"]["side_bound"]
                        + cert.payload["heavy"]["side_bound"]) / inst.m
            assert cert.certified_val_upper == pytest.approx(min(1.0, combined))
            assert (cert.outcome == REFUTED) == (combined <= 0.5 + eps)
            assert verify_certificate(cert, inst)


def test_unknown_on_satisfiable_instance():
    rows = ((0, 0, 1, 1),) * 40
    inst = PartitionedInstance(n=2, ell=1, constraints=rows)
    cert = refute_partitioned(inst, eps=0.3)
    assert cert.outcome == UNKNOWN
    assert cert.certified_val_upper > 0.8
    # the certificate is still internally consistent and verifies
    assert verify_certificate(cert, inst)
    val, _ = brute_force_val(inst)
    assert float(val) <= cert.certified_val_upper + 1e-12


def test_certificate_is_deterministic(dense_kxor):
    inst, cert = dense_kxor
    again = refute_kxor(inst, eps=0.25)
    assert cert.to_json() == again.to_json()


def test_certificate_save_load(tmp_path, dense_kxor):
    _, cert = dense_kxor
    path = tmp_path / "cert.json"
    cert.save(path)
    loaded = Certificate.load(path)
    assert loaded == cert
    assert json.loads(cert.to_json())["schema"] == "cert_v1"


def test_kxor_reduction_block(dense_kxor):
    inst, cert = dense_kxor
    red = cert.payload["reduction"]
    assert red["ell"] == inst.n and red["subset_size"] == 1
    assert cert.kind == "kxor"
    # soundness against the true optimum
    val, _ = brute_force_val(inst)
    assert float(val) <= cert.certified_val_upper + 1e-12


def test_verify_rejects_wrong_instance(dense_kxor):
    inst, cert = dense_kxor
    other = gen_kxor(GenSpec(kind="random", n=10, m=2000, seed=8, k=3))
    ok, errors = verify_certificate_detailed(cert, other)
    assert not ok and errors == ["instance digest mismatch"]


def test_verify_rejects_kind_mismatch(dense_kxor):
    inst, cert = dense_kxor
    psi = gen_random_partitioned(6, 2, 10, seed=0)
    ok, errors = verify_certificate_detailed(_mutate(cert, ("kind",), "p2xor"), psi)
    assert not ok


@pytest.mark.parametrize("path,value", [
    (("outcome",), "UNKNOWN"),
    (("certified_val_upper",), 0.5),
    (("eps",), 0.45),
    (("decomposition", "d_cap"), 9),
    (("decomposition", "m_light"), 0),
    (("light", "side_bound"), 0.0),
    (("heavy", "side_bound"), 0.0),
    (("light", "report", "phi_total_bound"), 0.0),
    (("light", "report", "val_upper"), 0.5),
    (("heavy", "report", "bound"), 0.0),
    (("heavy", "report", "dual", "slack"), 0.0),
    (("reduction", "psi_digest"), "0" * 64),
    (("schema",), "cert_v0"),
])
def test_verify_rejects_single_field_corruption(dense_kxor, path, value):
    inst, cert = dense_kxor
    bad = _mutate(cert, path, value)
    ok, errors = verify_certificate_detailed(bad, inst)
    assert not ok and errors


def test_verify_rejects_malformed_payload(dense_kxor):
    inst, cert = dense_kxor
    payload = copy.deepcopy(cert.payload)
    del payload["light"]
    ok, errors = verify_certificate_detailed(Certificate(payload=payload), inst)
    assert not ok and "malformed certificate" in errors[0]


def test_verify_rejects_padded_block_list(dense_kxor):
    inst, cert = dense_kxor
    payload = copy.deepcopy(cert.payload)
    blocks = payload["light"]["report"]["blocks"]
    blocks.append(dict(blocks[0]))
    ok, _ = verify_certificate_detailed(Certificate(payload=payload), inst)
    assert not ok
