"""Build XOR instances by hand, evaluate them exactly, round-trip them as JSON."""
from __future__ import annotations

from fractions import Fraction

from xorcert import (
    KXorInstance,
    PartitionedInstance,
    brute_force_val,
    from_json_dict,
    instance_digest,
    load_instance,
    save_instance,
    to_json_dict,
)

# A 3-XOR instance on 4 variables: clause i asks x[a] * x[b] * x[c] == signs[i]
# over x in {-1, +1}^n.  The first two clauses contradict each other, so at
# most 3 of the 4 can ever hold.
phi = KXorInstance(
    n=4,
    k=3,
    clauses=((0, 1, 2), (0, 1, 2), (1, 2, 3), (0, 2, 3)),
    signs=(+1, -1, +1, +1),
)

val, asg = brute_force_val(phi)
print("3-XOR value:", val, "=", float(val))
print("an optimal assignment:", asg.x)
assert val == Fraction(3, 4)

# A partitioned 2-XOR instance: constraints (part, u, v, sign) ask
# y[part] * x[u] * x[v] == sign, with an extra y in {-1, +1}^ell chosen per part.
psi = PartitionedInstance(
    n=3,
    ell=2,
    constraints=(
        (0, 0, 1, +1),
        (0, 0, 1, -1),  # the same pair with both signs: part 0 gets exactly 1/2
        (1, 1, 2, +1),
        (1, 1, 2, +1),  # duplicates are legal and count with multiplicity
    ),
)

val, asg = brute_force_val(psi)
print("partitioned value:", val, "with x =", asg.x, "y =", asg.y)
assert val == Fraction(3, 4)

# Instances serialize to plain dicts; the digest is stable across round trips,
# so certificates can pin the exact instance they talk about.
blob = to_json_dict(psi)
again = from_json_dict(blob)
assert again == psi
assert instance_digest(again) == instance_digest(psi)
print("digest:", instance_digest(psi)[:16], "...")

save_instance(psi, "/tmp/psi_demo.json")
assert load_instance("/tmp/psi_demo.json") == psi
print("JSON round trip ok")
