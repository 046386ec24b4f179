"""Sparse matrices with certified spectral bounds and matrix Bernstein tails.

Every upper bound produced here is sound by construction: either a row/column
l1 bound (Gershgorin applied to the symmetric dilation) or a Rayleigh quotient
plus its full residual norm.  Heuristics only ever tighten, never replace,
those certified quantities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# float-rounding guard on certified inequalities that hold in exact arithmetic
_ROUND_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class SparseMat:
    """Immutable COO sparse matrix with duplicate entries pre-merged."""

    rows: int
    cols: int
    r: np.ndarray
    c: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if not (len(self.r) == len(self.c) == len(self.v)):
            raise ValueError("coordinate arrays must have equal length")
        if len(self.r) and (self.r.min() < 0 or self.r.max() >= self.rows):
            raise ValueError("row index out of range")
        if len(self.c) and (self.c.min() < 0 or self.c.max() >= self.cols):
            raise ValueError("column index out of range")
        if len(self.v) and not np.all(np.isfinite(self.v)):
            raise ValueError("matrix entries must be finite")

    @classmethod
    def from_arrays(cls, rows: int, cols: int, r, c, v) -> "SparseMat":
        """Build from coordinate arrays, summing duplicates and dropping zeros."""
        r = np.asarray(r, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)
        v = np.asarray(v, dtype=np.float64)
        if len(r):
            order = np.lexsort((c, r))
            r, c, v = r[order], c[order], v[order]
            new_group = np.empty(len(r), dtype=bool)
            new_group[0] = True
            new_group[1:] = (r[1:] != r[:-1]) | (c[1:] != c[:-1])
            starts = np.flatnonzero(new_group)
            v = np.add.reduceat(v, starts)
            r, c = r[starts], c[starts]
            keep = v != 0.0
            r, c, v = r[keep], c[keep], v[keep]
        for arr in (r, c, v):
            arr.setflags(write=False)
        return cls(rows=rows, cols=cols, r=r, c=c, v=v)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries) -> "SparseMat":
        """Build from an iterable of (row, col, value) triples."""
        entries = list(entries)
        r = [e[0] for e in entries]
        c = [e[1] for e in entries]
        v = [e[2] for e in entries]
        return cls.from_arrays(rows, cols, r, c, v)

    @classmethod
    def from_dense(cls, a) -> "SparseMat":
        a = np.asarray(a, dtype=np.float64)
        r, c = np.nonzero(a)
        return cls.from_arrays(a.shape[0], a.shape[1], r, c, a[r, c])

    @property
    def nnz(self) -> int:
        return len(self.v)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return np.bincount(self.r, weights=self.v * x[self.c], minlength=self.rows)

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        return np.bincount(self.c, weights=self.v * x[self.r], minlength=self.cols)

    def transpose(self) -> "SparseMat":
        return SparseMat.from_arrays(self.cols, self.rows, self.c, self.r, self.v)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        np.add.at(out, (self.r, self.c), self.v)
        return out

    def row_l1(self) -> np.ndarray:
        return np.bincount(self.r, weights=np.abs(self.v), minlength=self.rows)

    def col_l1(self) -> np.ndarray:
        return np.bincount(self.c, weights=np.abs(self.v), minlength=self.cols)

    def abs_max(self) -> float:
        return float(np.abs(self.v).max()) if self.nnz else 0.0

    def is_symmetric(self, tol: float = 0.0) -> bool:
        if self.rows != self.cols:
            return False
        a = np.lexsort((self.c, self.r))
        b = np.lexsort((self.r, self.c))
        return (
            np.array_equal(self.r[a], self.c[b])
            and np.array_equal(self.c[a], self.r[b])
            and np.allclose(self.v[a], self.v[b], rtol=0.0, atol=tol)
        )


@dataclass(frozen=True)
class NormBound:
    """Certified sandwich lower <= ||M||_2 <= upper."""

    lower: float
    upper: float
    method: str

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid norm bound [{self.lower}, {self.upper}]")


def l1_norm_bound(m: SparseMat) -> float:
    """max(max row l1, max col l1): a Gershgorin bound on the spectral norm."""
    if m.nnz == 0:
        return 0.0
    return float(max(m.row_l1().max(), m.col_l1().max()))


def _dilation_apply(m: SparseMat, w: np.ndarray) -> np.ndarray:
    # symmetric dilation [[0, M], [M^T, 0]] applied to [top; bottom]
    return np.concatenate([m.matvec(w[m.rows:]), m.rmatvec(w[: m.rows])])


def _aligned_candidate(m: SparseMat, w: np.ndarray) -> tuple[float, float]:
    """(|rho|, residual) of the dilation at w after sign alignment.

    The dilation spectrum is symmetric (+/- each singular value), so a power
    iterate of the squared dilation mixes the two signed top eigenvectors;
    w <- s*w + Dw projects onto the + branch.  There is an eigenvalue within
    residual of +|rho|, so |rho| + residual upper-bounds the norm whenever w
    overlaps the top eigenspace.
    """
    u = _dilation_apply(m, w)
    s = float(np.linalg.norm(u))
    aligned = s * w + u
    norm = float(np.linalg.norm(aligned))
    if norm <= 1e-12 * max(1.0, s):
        aligned = s * w - u
        norm = float(np.linalg.norm(aligned))
    if norm == 0.0:
        return 0.0, 0.0
    aligned /= norm
    u2 = _dilation_apply(m, aligned)
    rho = float(aligned @ u2)
    res = float(np.linalg.norm(u2 - rho * aligned))
    return abs(rho), res


def _power_squared_run(m: SparseMat, w0: np.ndarray, max_iter: int, tol: float):
    """Iterate w <- D^2 w / ||.||; returns (s_best, w) or None if w hit the kernel.

    Iterating the squared dilation avoids the sign oscillation of the
    indefinite dilation spectrum; s_best = sqrt(max ||D^2 w||) is a sound
    lower bound for the spectral norm at every step.  Stops once the certified
    gap (|rho| + res) - s_best closes to tol, or the iteration fixes.
    """
    w = w0 / np.linalg.norm(w0)
    s_best = 0.0
    prev = -1.0
    for it in range(1, max_iter + 1):
        u = _dilation_apply(m, _dilation_apply(m, w))
        q = float(np.linalg.norm(u))
        if q == 0.0:
            return None
        s_best = max(s_best, math.sqrt(q))
        w = u / q
        if prev >= 0.0 and abs(q - prev) <= 1e-13 * max(1.0, q):
            break
        prev = q
        if it % 25 == 0:
            rho_abs, res = _aligned_candidate(m, w)
            if rho_abs + res - s_best <= tol * max(1.0, s_best):
                break
    return s_best, w


def spectral_norm(m: SparseMat, tol: float = 1e-8, max_iter: int = 1500,
                  restart_seed: int = 0x5EED) -> NormBound:
    """Certified two-sided spectral norm bound via power iteration.

    Runs on the squared dilation from a deterministic all-ones start plus one
    seeded random restart, aligns the final iterate with the dominant sign,
    and returns upper = min(l1 bound, |rho| + residual).
    """
    l1 = l1_norm_bound(m) * (1.0 + _ROUND_GUARD)
    if m.nnz == 0:
        return NormBound(0.0, 0.0, "exact-small")
    dim = m.rows + m.cols
    starts = [np.ones(dim)]
    rng = np.random.Generator(np.random.Philox(key=restart_seed))
    starts.append(rng.standard_normal(dim))

    lower = m.abs_max()  # every entry is a lower bound on the norm
    best = None  # (s, w)
    for w0 in starts:
        out = _power_squared_run(m, w0, max_iter, tol)
        if out is None:
            continue
        s, w = out
        lower = max(lower, s)
        if best is None or s > best[0]:
            best = (s, w)
    if best is None:
        # both starts landed exactly in the kernel; fall back to the l1 bound
        return NormBound(min(lower, l1), l1, "schur-l1")

    rho_abs, res = _aligned_candidate(m, best[1])
    lower = max(lower, rho_abs)
    cand = (rho_abs + res) * (1.0 + _ROUND_GUARD)
    if cand < lower:  # alignment failed; keep only the always-sound bound
        upper, method = l1, "schur-l1"
    elif cand < l1:
        upper, method = cand, "power-iteration-residual"
    else:
        upper, method = l1, "schur-l1"
    lower = min(lower * (1.0 - _ROUND_GUARD), upper)
    return NormBound(lower, upper, method)


def min_eig_lower_bound(s: SparseMat, tol: float = 1e-8, max_iter: int = 1500,
                        restart_seed: int = 0x5EED) -> float:
    """Certified lower bound on lambda_min of a symmetric matrix.

    Shifts by c = l1_norm_bound(s) so that lambda_max(cI - S) = c - lambda_min,
    then applies the certified spectral norm bound to the shifted matrix.
    """
    if s.rows != s.cols:
        raise ValueError("matrix must be square")
    if not s.is_symmetric(tol=0.0):
        raise ValueError("matrix must be symmetric")
    if s.rows == 0:
        return 0.0
    c = l1_norm_bound(s)
    n = s.rows
    shifted = SparseMat.from_arrays(
        n, n,
        np.concatenate([s.r, np.arange(n)]),
        np.concatenate([s.c, np.arange(n)]),
        np.concatenate([-s.v, np.full(n, c)]),
    )
    nb = spectral_norm(shifted, tol=tol, max_iter=max_iter, restart_seed=restart_seed)
    return c - nb.upper


def min_eig_check(s: SparseMat, slack: float, tol: float = 1e-8,
                  max_iter: int = 1500) -> bool:
    """True iff lambda_min(S) >= -slack is certified."""
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    return min_eig_lower_bound(s, tol=tol, max_iter=max_iter) >= -slack


def bernstein_tail(sigma2: float, r_bound: float, d1: int, d2: int, t: float) -> float:
    """Rectangular matrix Bernstein tail (d1+d2) exp(-(t^2/2)/(sigma2 + R t/3)), clamped to [0, 1]."""
    if min(sigma2, r_bound, t) < 0 or d1 < 0 or d2 < 0:
        raise ValueError("bernstein_tail arguments must be nonnegative")
    if t == 0.0:
        return min(1.0, float(d1 + d2))
    denom = sigma2 + r_bound * t / 3.0
    if denom == 0.0:
        return 0.0
    return min(1.0, (d1 + d2) * math.exp(-(t * t / 2.0) / denom))


def bernstein_threshold(sigma2: float, r_bound: float, d1: int, d2: int, delta: float) -> float:
    """Smallest t with bernstein_tail(...) <= delta, in closed form."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if min(sigma2, r_bound) < 0 or d1 < 0 or d2 < 0:
        raise ValueError("bernstein_threshold arguments must be nonnegative")
    if min(1.0, float(d1 + d2)) <= delta:
        return 0.0  # the clamped tail at t = 0 already meets delta
    big_l = math.log((d1 + d2) / delta)
    if big_l <= 0.0:
        return 0.0
    half = big_l * r_bound / 3.0
    t = half + math.sqrt(half * half + 2.0 * sigma2 * big_l)
    if t == 0.0:
        return math.ulp(0.0)  # sigma2 = R = 0: the sum vanishes a.s., any t > 0 works
    return t * (1.0 + 1e-12)  # guard the closed form against rounding
