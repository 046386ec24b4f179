"""Spectral certification for degree-bounded partitioned 2-XOR instances.

The potential Phi(x) = sum_i (1/sqrt(t_i)) (sum_e mu_i(e) x^e)^2 must reach
4 eps^2 m^{3/2} / sqrt(ell) whenever the instance value exceeds 1/2 + eps, so
any certified upper bound on max_x Phi(x) below that threshold refutes.

Phi splits as Phi = Phi_1 + Phi_2 with Phi_2 = sum_i sqrt(t_i) constant, and
Phi_1 is controlled through the canonical-pair block matrix M over ordered
vertex pairs: with Q = sum_i sum_e mu_i(e)^2 / sqrt(t_i),

    Phi_1(x) = (1/4) (x@x)^T M (x@x) + (Q - Phi_2),

an exact identity (entries of M pair distinct constraint pairs only; the
diagonal exclusion is on unordered pairs).  Weight classes split M into
blocks by butterfly degree, and each block norm is certified separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, RefuteConfig
from .instances import DegreeProfile, PartitionedInstance, degree_profile
from .linalg import SparseMat, bernstein_threshold, spectral_norm


@dataclass(frozen=True)
class ButterflyTable:
    """Butterfly degrees gamma(v, v') = sum_i deg_i(v) deg_i(v') / t_i over ordered pairs."""

    n: int
    gamma: dict[tuple[int, int], float]
    total: float

    def value(self, v: int, vp: int) -> float:
        return self.gamma.get((v, vp), 0.0)


def butterfly(profile: DegreeProfile) -> ButterflyTable:
    """Butterfly degree table; the total always equals 4m exactly."""
    gamma: dict[tuple[int, int], float] = {}
    for t, deg in zip(profile.t, profile.deg):
        support = sorted(deg)
        for v in support:
            for vp in support:
                key = (v, vp)
                gamma[key] = gamma.get(key, 0.0) + deg[v] * deg[vp] / t
    return ButterflyTable(n=profile.n, gamma=gamma, total=float(sum(gamma.values())))


@dataclass(frozen=True)
class WeightClassPartition:
    """Partition of all n^2 ordered vertex pairs into butterfly-weight classes.

    Class S_0 holds pairs with gamma <= alpha; class S_j (1 <= j <= levels)
    holds gamma in (alpha beta^{j-1}, alpha beta^j].  Pairs outside the table
    have gamma = 0 and belong to S_0, so only heavier classes are stored.
    """

    n: int
    alpha: float
    beta: float
    levels: int
    clamped: bool
    heavy: dict[tuple[int, int], int]
    sizes: tuple[int, ...]

    def class_of(self, pair: tuple[int, int]) -> int:
        return self.heavy.get(pair, 0)

    def class_matrix(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int64)
        for (v, vp), j in self.heavy.items():
            out[v, vp] = j
        return out


def weight_classes(table: ButterflyTable, *, d: int, eps: float, m: int, ell: int,
                   alpha_c: float = 1.0) -> WeightClassPartition:
    """Geometric weight classes with alpha = C d^2 ell log2(n)^6 / (eps^4 m)."""
    n = table.n
    if n < 2:
        raise ValueError("need n >= 2")
    if m < 1 or ell < 1 or d < 1:
        raise ValueError("m, ell, d must be positive")
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    lg = math.log2(n)
    levels = math.ceil(lg)
    alpha = alpha_c * d * d * ell * lg ** 6 / (eps ** 4 * m)
    ratio = 4.0 * m / alpha
    clamped = ratio < 1.0  # then every gamma <= 4m <= alpha lands in S_0
    beta = 1.0 if clamped else max(ratio ** (1.0 / lg), 1.0)
    heavy: dict[tuple[int, int], int] = {}
    if not clamped and beta > 1.0:
        log_beta = math.log(beta)
        for pair, g in table.gamma.items():
            if g > alpha:
                j = min(levels, math.ceil(math.log(g / alpha) / log_beta))
                heavy[pair] = max(j, 1)
    sizes = [0] * (levels + 1)
    for j in heavy.values():
        sizes[j] += 1
    sizes[0] = n * n - len(heavy)
    return WeightClassPartition(
        n=n, alpha=alpha, beta=beta, levels=levels, clamped=clamped,
        heavy=heavy, sizes=tuple(sizes),
    )


@dataclass(frozen=True, eq=False)
class Block:
    """One weight-class block of the canonical pair matrix, on its support."""

    j: int
    k: int
    mat: SparseMat
    row_pairs: np.ndarray  # flat encodings v * n + v' of the ordered row pairs
    col_pairs: np.ndarray


def _kept_mu(inst: PartitionedInstance, profile: DegreeProfile) -> list[dict]:
    tables = inst.mu_tables()
    return [tables[orig] for orig in profile.part_ids]


def _part_edge_arrays(table: dict) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    edges = sorted((e, w) for e, w in table.items() if w != 0)
    eu = np.array([e[0] for e, _ in edges], dtype=np.int64)
    ev = np.array([e[1] for e, _ in edges], dtype=np.int64)
    ew = np.array([w for _, w in edges], dtype=np.float64)
    return eu, ev, ew


def _accumulate_blocks(profile: DegreeProfile, mu: list[dict],
                       partition: WeightClassPartition) -> dict[tuple[int, int], Block]:
    n = profile.n
    cmat = partition.class_matrix()
    acc: dict[tuple[int, int], list[np.ndarray]] = {}
    for t, table in zip(profile.t, mu):
        eu, ev, ew = _part_edge_arrays(table)
        count = len(ew)
        if count < 2:
            continue  # entries need two distinct edges in the part
        scale = 1.0 / math.sqrt(t)
        ee, ff = np.meshgrid(np.arange(count), np.arange(count), indexing="ij")
        off = ee != ff
        ee, ff = ee[off], ff[off]
        vals = ew[ee] * ew[ff] * scale
        for p_e, q_e in ((eu, ev), (ev, eu)):
            for p_f, q_f in ((eu, ev), (ev, eu)):
                p1, p2 = p_e[ee], p_f[ff]
                q1, q2 = q_e[ee], q_f[ff]
                jcls = cmat[p1, p2]
                kcls = cmat[q1, q2]
                rows = p1 * n + p2
                cols = q1 * n + q2
                jk = jcls * (partition.levels + 1) + kcls
                for code in np.unique(jk):
                    sel = jk == code
                    key = (int(code) // (partition.levels + 1), int(code) % (partition.levels + 1))
                    acc.setdefault(key, []).append(
                        np.stack([rows[sel], cols[sel], vals[sel]]))
    blocks: dict[tuple[int, int], Block] = {}
    for key in sorted(acc):
        stacked = np.concatenate(acc[key], axis=1)
        rows, cols, vals = stacked[0].astype(np.int64), stacked[1].astype(np.int64), stacked[2]
        row_pairs, row_idx = np.unique(rows, return_inverse=True)
        col_pairs, col_idx = np.unique(cols, return_inverse=True)
        mat = SparseMat.from_arrays(len(row_pairs), len(col_pairs), row_idx, col_idx, vals)
        if mat.nnz == 0:
            continue  # all entries cancelled
        blocks[key] = Block(j=key[0], k=key[1], mat=mat, row_pairs=row_pairs, col_pairs=col_pairs)
    return blocks


def build_blocks(inst: PartitionedInstance, partition: WeightClassPartition,
                 profile: DegreeProfile | None = None) -> dict[tuple[int, int], Block]:
    """All nonzero weight-class blocks of the canonical pair matrix."""
    profile = profile or degree_profile(inst)
    return _accumulate_blocks(profile, _kept_mu(inst, profile), partition)


def build_block(inst: PartitionedInstance, partition: WeightClassPartition,
                j: int, k: int) -> SparseMat:
    """The (j, k) block alone (empty matrix when it has no entries)."""
    blocks = build_blocks(inst, partition)
    if (j, k) in blocks:
        return blocks[(j, k)].mat
    return SparseMat.from_arrays(0, 0, [], [], [])


def build_part_block(inst: PartitionedInstance, partition: WeightClassPartition,
                     slot: int, j: int, k: int) -> SparseMat:
    """Single-part contribution B_{i,j,k} (for bound cross-checks)."""
    profile = degree_profile(inst)
    sub = DegreeProfile(
        n=profile.n, part_ids=(profile.part_ids[slot],), t=(profile.t[slot],),
        deg=(profile.deg[slot],), dup=(profile.dup[slot],),
    )
    mu = [_kept_mu(inst, profile)[slot]]
    blocks = _accumulate_blocks(sub, mu, partition)
    if (j, k) in blocks:
        return blocks[(j, k)].mat
    return SparseMat.from_arrays(0, 0, [], [], [])


# ---------------------------------------------------------------------------
# Potential function evaluations (used by tests and the certificate assembly).
# ---------------------------------------------------------------------------

def part_biases(inst: PartitionedInstance, x: np.ndarray) -> list[float]:
    """b_i(x) = sum_e mu_i(e) x^e for each nonempty part."""
    profile = degree_profile(inst)
    out = []
    for table in _kept_mu(inst, profile):
        out.append(float(sum(w * x[u] * x[v] for (u, v), w in table.items())))
    return out


def phi_direct(inst: PartitionedInstance, x: np.ndarray) -> float:
    """Phi(x) = sum_i b_i(x)^2 / sqrt(t_i), evaluated directly."""
    profile = degree_profile(inst)
    out = 0.0
    for t, table in zip(profile.t, _kept_mu(inst, profile)):
        b = sum(w * x[u] * x[v] for (u, v), w in table.items())
        out += b * b / math.sqrt(t)
    return float(out)


def phi2_term(profile: DegreeProfile) -> float:
    """Phi_2 = sum_i sqrt(t_i)."""
    return float(sum(math.sqrt(t) for t in profile.t))


def dup_correction(inst: PartitionedInstance, profile: DegreeProfile | None = None) -> float:
    """c_0 = Q - Phi_2 with Q = sum_i sum_e mu_i(e)^2 / sqrt(t_i); zero when duplicate-free."""
    profile = profile or degree_profile(inst)
    q = 0.0
    for t, table in zip(profile.t, _kept_mu(inst, profile)):
        q += sum(w * w for w in table.values()) / math.sqrt(t)
    return float(q - phi2_term(profile))


def phi1_direct(inst: PartitionedInstance, x: np.ndarray) -> float:
    """Phi_1(x) = sum_i (b_i(x)^2 - t_i) / sqrt(t_i)."""
    profile = degree_profile(inst)
    return phi_direct(inst, x) - phi2_term(profile)


def phi1_from_blocks(blocks: dict[tuple[int, int], Block], x: np.ndarray,
                     c0: float, n: int) -> float:
    """Evaluate Phi_1 through the block quadratic form; exact identity check."""
    form = 0.0
    for block in blocks.values():
        zr = x[block.row_pairs // n] * x[block.row_pairs % n]
        zc = x[block.col_pairs // n] * x[block.col_pairs % n]
        form += float(zr @ block.mat.matvec(zc))
    return form / 4.0 + c0


# ---------------------------------------------------------------------------
# Analytic per-block bounds and their exact small-scale counterparts.
# ---------------------------------------------------------------------------

def block_variance_bound(partition: WeightClassPartition, j: int, k: int) -> float:
    """Analytic bound 2 alpha beta^{max(j,k)} on the block variance norm."""
    return 2.0 * partition.alpha * partition.beta ** max(j, k)


def block_r_bound(partition: WeightClassPartition, j: int, k: int, d: int) -> float:
    """Analytic bound d sqrt(alpha beta^{max(j,k)}) on each summand's norm."""
    return d * math.sqrt(partition.alpha * partition.beta ** max(j, k))


def _fourth_moment(groups: dict[tuple[int, int], int], dup: dict) -> float:
    # E[prod mu(e_i)] over independent signed multiplicities: odd powers vanish,
    # E[mu^2] = D, E[mu^4] = 3D^2 - 2D
    out = 1.0
    for pair, count in groups.items():
        d_val = dup.get(pair, 0)
        if count % 2 == 1:
            return 0.0
        if count == 2:
            out *= d_val
        elif count == 4:
            out *= 3.0 * d_val * d_val - 2.0 * d_val
        else:
            raise AssertionError("pair group count must be in {1, 2, 3, 4}")
    return out


def empirical_variance_norm(inst: PartitionedInstance, partition: WeightClassPartition,
                            j: int, k: int) -> float:
    """Exact ||sum_i E[B_i B_i^T]|| over random signs, from pair multiplicities.

    Small instances only: enumerates the class pairs directly.
    """
    n = inst.n
    if n > 16:
        raise ValueError("empirical variance check is for small instances")
    pairs_j = [(v, vp) for v in range(n) for vp in range(n)
               if partition.class_of((v, vp)) == j]
    pairs_k = [(w, wp) for w in range(n) for wp in range(n)
               if partition.class_of((w, wp)) == k]
    if not pairs_j or not pairs_k:
        return 0.0
    profile = degree_profile(inst)
    idx = {p: i for i, p in enumerate(pairs_j)}
    x = np.zeros((len(pairs_j), len(pairs_j)))
    for t, dup in zip(profile.t, profile.dup):
        for p_row in pairs_j:
            for p_col in pairs_j:
                total = 0.0
                for q in pairs_k:
                    e1 = tuple(sorted((p_row[0], q[0])))
                    e2 = tuple(sorted((p_row[1], q[1])))
                    e3 = tuple(sorted((p_col[0], q[0])))
                    e4 = tuple(sorted((p_col[1], q[1])))
                    if e1 == e2 or e3 == e4:  # excluded from the block matrix
                        continue
                    groups: dict[tuple[int, int], int] = {}
                    for e in (e1, e2, e3, e4):
                        groups[e] = groups.get(e, 0) + 1
                    total += _fourth_moment(groups, dup)
                x[idx[p_row], idx[p_col]] += total / t
    return float(np.abs(np.linalg.eigvalsh(x)).max())


# ---------------------------------------------------------------------------
# The d-bounded certification procedure.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockRecord:
    """Certified data for one weight-class block."""

    j: int
    k: int
    size_j: int
    size_k: int
    nnz: int
    norm_lower: float
    norm_upper: float
    contribution: float  # sqrt(size_j * size_k) * norm_upper
    sigma2: float
    r_bound: float
    bernstein_t: float

    def to_json_dict(self) -> dict:
        return {
            "j": self.j, "k": self.k, "size_j": self.size_j, "size_k": self.size_k,
            "nnz": self.nnz, "norm_lower": self.norm_lower, "norm_upper": self.norm_upper,
            "contribution": self.contribution, "sigma2": self.sigma2,
            "r_bound": self.r_bound, "bernstein_t": self.bernstein_t,
        }


@dataclass(frozen=True)
class DBoundedReport:
    """Certified Phi upper bound and refutation outcome for a d-bounded instance."""

    status: str  # "SUCCESS" | "UNKNOWN"
    m: int
    n: int
    ell_eff: int
    eps: float
    d_used: int
    alpha: float
    beta: float
    beta_clamped: bool
    levels: int
    class_sizes: tuple[int, ...]
    phi2_term: float
    dup_correction: float
    phi1_bound: float
    phi_total_bound: float
    threshold: float
    implied_eps: float
    val_upper: float
    blocks: tuple[BlockRecord, ...]

    def to_json_dict(self) -> dict:
        return {
            "status": self.status, "m": self.m, "n": self.n, "ell_eff": self.ell_eff,
            "eps": self.eps, "d_used": self.d_used, "alpha": self.alpha, "beta": self.beta,
            "beta_clamped": self.beta_clamped, "levels": self.levels,
            "class_sizes": list(self.class_sizes), "phi2_term": self.phi2_term,
            "dup_correction": self.dup_correction, "phi1_bound": self.phi1_bound,
            "phi_total_bound": self.phi_total_bound, "threshold": self.threshold,
            "implied_eps": self.implied_eps, "val_upper": self.val_upper,
            "blocks": [b.to_json_dict() for b in self.blocks],
        }


def certify_dbounded(inst: PartitionedInstance, eps: float,
                     config: RefuteConfig | None = None,
                     d_bound: int | None = None) -> DBoundedReport:
    """Certify max_x Phi(x) <= phi_total_bound; SUCCESS iff it beats the threshold.

    The certified bound is (1/4) sum_{j,k} sqrt(|S_j| |S_k|) ||M_{j,k}|| + Q,
    assembled from per-block certified norm uppers; the threshold
    4 eps^2 m^{3/2} / sqrt(ell) comes from the potential lower bound at any
    assignment of value >= 1/2 + eps.
    """
    config = config or DEFAULT_CONFIG
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if inst.m == 0:
        raise ValueError("empty instance")
    profile = degree_profile(inst)
    measured = profile.max_degree()
    d_used = measured if d_bound is None else d_bound
    if measured > d_used:
        raise ValueError(f"degree precondition violated: max group size {measured} > d={d_used}")
    m = inst.m
    ell_eff = len(profile.t)
    table = butterfly(profile)
    partition = weight_classes(table, d=d_used, eps=eps, m=m, ell=ell_eff,
                               alpha_c=config.alpha_c)
    blocks = _accumulate_blocks(profile, _kept_mu(inst, profile), partition)
    delta_block = config.block_delta / (partition.levels + 1) ** 2
    records = []
    blocksum = 0.0
    for key in sorted(blocks):
        block = blocks[key]
        j, k = key
        size_j = partition.sizes[j]
        size_k = partition.sizes[k]
        nb = spectral_norm(block.mat, tol=config.norm_tol, max_iter=config.norm_max_iter)
        contribution = math.sqrt(size_j * size_k) * nb.upper
        sigma2 = block_variance_bound(partition, j, k)
        r_bound = block_r_bound(partition, j, k, d_used)
        t_jk = bernstein_threshold(sigma2, r_bound, size_j, size_k, delta_block)
        records.append(BlockRecord(
            j=j, k=k, size_j=size_j, size_k=size_k, nnz=block.mat.nnz,
            norm_lower=nb.lower, norm_upper=nb.upper, contribution=contribution,
            sigma2=sigma2, r_bound=r_bound, bernstein_t=t_jk,
        ))
        blocksum += contribution
    phi2 = phi2_term(profile)
    c0 = dup_correction(inst, profile)
    phi1_bound = blocksum / 4.0 + c0
    phi_total = phi1_bound + phi2
    threshold = 4.0 * eps * eps * m ** 1.5 / math.sqrt(ell_eff)
    implied = math.sqrt(max(phi_total, 0.0) * math.sqrt(ell_eff) / (4.0 * m ** 1.5))
    val_upper = min(1.0, 0.5 + implied + 1e-12)
    status = "SUCCESS" if phi_total <= threshold else "UNKNOWN"
    return DBoundedReport(
        status=status, m=m, n=inst.n, ell_eff=ell_eff, eps=eps, d_used=d_used,
        alpha=partition.alpha, beta=partition.beta, beta_clamped=partition.clamped,
        levels=partition.levels, class_sizes=partition.sizes,
        phi2_term=phi2, dup_correction=c0, phi1_bound=phi1_bound,
        phi_total_bound=phi_total, threshold=threshold, implied_eps=implied,
        val_upper=val_upper, blocks=tuple(records),
    )
