"""End-to-end refutation: certify a random 3-XOR instance, verify, then tamper."""
from __future__ import annotations

import copy

from xorcert import (
    Certificate,
    GenSpec,
    brute_force_val,
    gen_kxor,
    refute_kxor,
    verify_certificate,
    verify_certificate_detailed,
)

# Dense semi-random 3-XOR: m = 2000 constraints on 10 variables.  Any fixed
# assignment satisfies about half, and the pipeline certifies that no
# assignment does much better.
inst = gen_kxor(GenSpec(kind="random", n=10, m=2000, seed=7, k=3))
eps = 0.25
cert = refute_kxor(inst, eps)

p = cert.payload
print("outcome:", p["outcome"], " certified val <=", round(p["certified_val_upper"], 6))
print("combination case:", p["combination_case"])
print("decomposition: d_cap", p["decomposition"]["d_cap"],
      "| light m =", p["decomposition"]["m_light"],
      "| heavy m =", p["decomposition"]["m_heavy"],
      "in", p["decomposition"]["heavy_groups"], "groups")
print("light side:", p["light"]["mode"], "bound", round(p["light"]["side_bound"], 2))
print("heavy side:", p["heavy"]["mode"], "bound", round(p["heavy"]["side_bound"], 2))

# The certificate is sound: the exact optimum sits below the certified bound.
val, _ = brute_force_val(inst)
print("exact value:", float(val), "<=", round(p["certified_val_upper"], 6),
      "<= 1/2 + eps =", 0.5 + eps)
assert float(val) <= p["certified_val_upper"] <= 0.5 + eps

# Verification re-derives the reduction, the decomposition, every block norm
# and the dual PSD check from the instance -- no trust in the prover.
assert verify_certificate(cert, inst)
print("verifier: accepted")

# Serialization round trip.
cert.save("/tmp/cert_demo.json")
assert verify_certificate(Certificate.load("/tmp/cert_demo.json"), inst)

# Tampering anywhere in the payload is caught.  Lower the certified bound:
bad = copy.deepcopy(cert.payload)
bad["certified_val_upper"] = 0.5
ok, errors = verify_certificate_detailed(Certificate(payload=bad), inst)
print("tampered bound ->", errors[0])
assert not ok

# Claim refutation at a tighter eps than the run used:
bad = copy.deepcopy(cert.payload)
bad["eps"] = 0.1
ok, errors = verify_certificate_detailed(Certificate(payload=bad), inst)
print("tampered eps   ->", errors[0])
assert not ok

# Swap in a different instance:
other = gen_kxor(GenSpec(kind="random", n=10, m=2000, seed=8, k=3))
ok, errors = verify_certificate_detailed(cert, other)
print("wrong instance ->", errors[0])
assert not ok
