"""Certified spectral bounds: sandwich the norm, then check the certificate."""
from __future__ import annotations

import numpy as np

from xorcert import SparseMat, l1_norm_bound, min_eig_check, min_eig_lower_bound, spectral_norm

rng = np.random.default_rng(0)

# A sparse rectangular matrix with mixed signs.
dense = rng.standard_normal((40, 25))
dense[rng.random((40, 25)) > 0.15] = 0.0
m = SparseMat.from_dense(dense)
print("matrix:", m.rows, "x", m.cols, "with", len(m.v), "entries")

# spectral_norm returns a certified sandwich [lower, upper] around sigma_max.
# The lower bound is a Rayleigh quotient at an explicit vector; the upper bound
# is a residual-corrected power-iteration estimate (or an l1 fallback), so both
# sides hold without trusting the iteration converged.
nb = spectral_norm(m)
sigma = float(np.linalg.svd(dense, compute_uv=False)[0])
print(f"certified: [{nb.lower:.6f}, {nb.upper:.6f}]  ({nb.method})")
print(f"LAPACK svd: {sigma:.6f}")
assert nb.lower <= sigma <= nb.upper
assert nb.upper - nb.lower <= 1e-5 * max(1.0, sigma)

# The l1 bound sqrt(max row sum * max col sum) needs no iteration at all and
# is what the upper bound falls back to when iteration stalls.
print("l1 bound:", round(l1_norm_bound(m), 6))
assert l1_norm_bound(m) >= sigma

# Minimum eigenvalue of a symmetric matrix, again as a certified lower bound:
# used by the verifier to re-check PSD-ness of dual slack matrices.
sym = dense[:25, :25] + dense[:25, :25].T + 10.0 * np.eye(25)
s = SparseMat.from_dense(sym)
lb = min_eig_lower_bound(s)
true_min = float(np.linalg.eigvalsh(sym)[0])
print(f"min eigenvalue: certified >= {lb:.6f}, eigh says {true_min:.6f}")
assert lb <= true_min + 1e-12

# min_eig_check(m, slack) decides "m + slack*I is PSD" -- the form the dual
# certificates need.  A matrix with min eigenvalue near -0.5 needs slack 0.5.
shifted = SparseMat.from_dense(sym - (true_min + 0.5) * np.eye(25))
assert not min_eig_check(shifted, 0.0)
assert min_eig_check(shifted, 0.51)  # must clear the certification gap too
print("PSD slack check behaves")
