"""Checking given degeneration indices and exhaustive search over {0, 1, inf}^n.

The exhaustive scan enumerates indices in base-3 lexicographic order (tet 0
is the most significant digit, 0 < 1 < inf).  The index space is cut into
chunks sharing a common prefix; each chunk is an independent unit of work,
so results do not depend on the worker count.

Two scan engines are available:

* the default modular engine computes every degeneration vector modulo a few
  31-bit primes with numpy (a column-by-column Gauss-Jordan elimination
  shared along the enumeration tree) and reconstructs the exact integers by
  Chinese remaindering.  The number of primes is chosen from a Hadamard bound
  so that the reconstruction is exact; no floating point is involved.
* ``prune=True`` runs a pure-Python depth-first search with exact integer
  elimination.  A prefix of columns that is already linearly dependent forces
  a zero maximal minor, so its whole subtree is skipped.

Every certified hit is recomputed with the exact path before it is reported.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt, prod
from typing import Sequence

import numpy as np

from .degeneration import (
    INF,
    degeneration_matrix,
    degeneration_vector,
    is_ideal_point,
)
from .peripheral import NoSlope, SlopeResult, Slope, boundary_slope, valuations

log = logging.getLogger(__name__)

SOFT_LIMIT = 16
HARD_LIMIT = 18
DEFAULT_CHUNK_DEPTH = 9

# Primes below 2**31, so that products of two residues fit in int64.
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
          2147483549, 2147483543, 2147483497, 2147483489, 2147483477)


class BudgetError(RuntimeError):
    """The requested exhaustive search is too large without an explicit override."""


class CertificationMismatch(AssertionError):
    """The fast engine and the exact recomputation disagree."""


@dataclass
class SearchReport:
    certified: list[SlopeResult] = field(default_factory=list)
    scanned: int = 0
    wall_time: float = 0.0
    total: int | None = None
    resume_token: str | None = None

    @property
    def distinct_slopes(self) -> list[Slope]:
        seen = {r.slope for r in self.certified if r.slope is not None}
        return sorted(seen, key=lambda s: (s.den == 0, s.num / s.den if s.den else 0, s))

    @property
    def complete(self) -> bool:
        return self.total is not None and self.scanned == self.total

    def to_json(self) -> dict:
        return {
            "scanned": self.scanned,
            "total": self.total,
            "certified": [r.to_json() for r in self.certified],
            "distinct_slopes": [str(s) for s in self.distinct_slopes],
            "resume_token": self.resume_token,
        }


def _rows(R) -> list[list[int]]:
    return [list(r) for r in (R.rows if hasattr(R, "rows") else R)]


def _coeffs(curve):
    return curve.coeffs if hasattr(curve, "coeffs") else tuple(curve)


def evaluate_index(R, m, l, index: Sequence[int], rank: int | None = None) -> SlopeResult:
    """Exact evaluation of one index: degeneration vector, and slope if certified."""
    index = tuple(index)
    dv = degeneration_vector(degeneration_matrix(R, index))
    if not is_ideal_point(dv):
        return SlopeResult(index, dv.d, certified=False, rank=rank)
    v_mu, v_lambda = valuations(_coeffs(m), _coeffs(l), index, dv)
    try:
        slope = boundary_slope(v_mu, v_lambda)
    except NoSlope:
        slope = None
    return SlopeResult(index, dv.d, v_mu, v_lambda, slope, rank=rank)


def verify_indices(R, m, l, indices) -> SearchReport:
    """Evaluate exactly the given indices; certified results keep input order."""
    t0 = time.perf_counter()
    rows = _rows(R)
    n = len(rows[0]) // 2 if rows else 1
    report = SearchReport(total=len(indices))
    for index in indices:
        if len(index) != n:
            raise ValueError(f"index {index} has length {len(index)}, expected {n}")
        res = evaluate_index(rows, m, l, index)
        report.scanned += 1
        if res.certified:
            report.certified.append(res)
    report.wall_time = time.perf_counter() - t0
    return report


def index_from_rank(rank: int, n: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        rank, d = divmod(rank, 3)
        digits.append(d)
    return tuple(reversed(digits))


def rank_of_index(index: Sequence[int]) -> int:
    rank = 0
    for d in index:
        rank = 3 * rank + d
    return rank


# --------------------------------------------------------------------------
# modular engine


def hadamard_square_bound(rows: list[list[int]]) -> int:
    """An integer B2 with (max |maximal minor of R(I)|)^2 <= B2 for every I."""
    n = len(rows[0]) // 2 if rows else 0
    bound = 1
    for row in rows:
        s = 0
        for k in range(n):
            a, b = row[2 * k], row[2 * k + 1]
            s += max(a * a, b * b, (a + b) ** 2)
        bound *= max(s, 1)
    return bound


def primes_for(rows: list[list[int]]) -> tuple[int, ...]:
    """Enough primes that symmetric residues mod their product recover every minor."""
    b2 = hadamard_square_bound(rows)
    need = 2 * isqrt(b2) + 3
    chosen: list[int] = []
    for p in PRIMES:
        chosen.append(p)
        if prod(chosen) > need:
            return tuple(chosen)
    raise ValueError("determinant bound exceeds the built-in prime budget")


def _inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


class _ModularScanner:
    """Degeneration vectors mod p for all indices sharing a prefix.

    States carry a transform T with T @ (pivot columns so far) = identity
    rows, the rank, the first dependent column (``free``), its coordinates
    ``vf`` in the pivot basis, and the product of pivots (with swap signs),
    which is det of the pivot columns.  Since the first dependent column is
    preceded only by pivot columns, pivot row j corresponds to column j.
    """

    def __init__(self, rows: list[list[int]], p: int):
        self.p = p
        self.r = len(rows)
        self.n = self.r + 1
        arr = np.array(rows, dtype=np.int64).reshape(self.r, 2 * self.n)
        self.zc = arr[:, 0::2].T.copy()  # (n, r)
        self.wc = arr[:, 1::2].T.copy()

    def _start(self):
        r = self.r
        return {
            "T": np.eye(r, dtype=np.int64)[None, :, :].copy(),
            "rank": np.zeros(1, dtype=np.int64),
            "free": np.full(1, -1, dtype=np.int64),
            "vf": np.zeros((1, r), dtype=np.int64),
            "det": np.ones(1, dtype=np.int64),
        }

    def _candidates(self, st, k, digit):
        p = self.p
        T = st["T"]
        a = np.einsum("sij,j->si", T, self.zc[k]) % p
        b = np.einsum("sij,j->si", T, self.wc[k]) % p
        if digit is not None:
            v = (a, b, (-a - b) % p)[digit]
            return v, st
        S = a.shape[0]
        v = np.stack([a, b, (-a - b) % p], axis=1).reshape(3 * S, self.r)
        st = {key: np.repeat(val, 3, axis=0) for key, val in st.items()}
        return v, st

    def _pivot(self, st, v, k):
        p, r = self.p, self.r
        T, rank, free, det = st["T"], st["rank"], st["free"], st["det"]
        alive = free != -2
        mask = (v != 0) & (np.arange(r)[None, :] >= rank[:, None]) & alive[:, None]
        has = mask.any(axis=1)
        idx = np.nonzero(has)[0]
        if idx.size:
            i = mask[idx].argmax(axis=1)
            t = rank[idx]
            swap = i != t
            det[idx[swap]] = (-det[idx[swap]]) % p
            Ti = T[idx, i].copy()
            T[idx, i] = T[idx, t]
            T[idx, t] = Ti
            vi = v[idx, i].copy()
            v[idx, i] = v[idx, t]
            v[idx, t] = vi
            pv = v[idx, t]
            det[idx] = det[idx] * pv % p
            inv = _inv_mod(pv, p)
            prow = T[idx, t] * inv[:, None] % p
            fac = v[idx].copy()
            fac[np.arange(idx.size), t] = 0
            Tsub = (T[idx] - fac[:, :, None] * prow[:, None, :]) % p
            Tsub[np.arange(idx.size), t] = prow
            T[idx] = Tsub
            rank[idx] += 1
        dep = alive & ~has
        first = dep & (free == -1)
        free[first] = k
        st["vf"][first] = v[first]
        free[dep & ~first] = -2

    def _leaf_vectors(self, st, v):
        """d mod p for the children of ``st`` after the last column ``v``."""
        p, r, n = self.p, self.r, self.n
        free, det, vf = st["free"].copy(), st["det"].copy(), st["vf"].copy()
        alive = free != -2
        full = alive & (free == -1)
        free[full] = n - 1
        if r:
            vf[full] = v[full]
            late = alive & (free >= 0) & ~full
            last = v[:, r - 1] if r else None
            piv_ok = late & (last != 0)
            det[piv_ok] = det[piv_ok] * last[piv_ok] % p
            alive = alive & (full | piv_ok)
        f = free
        sign = np.where(f % 2 == 0, 1, p - 1)
        df = det * sign % p
        d = np.zeros((v.shape[0], n), dtype=np.int64)
        cols = np.arange(n)[None, :]
        below = cols < f[:, None]
        vpad = np.zeros_like(d)
        vpad[:, :r] = vf
        d = np.where(below, (p - vpad) % p * df[:, None] % p, 0)
        d[np.arange(d.shape[0]), np.clip(f, 0, n - 1)] = df
        d[~alive] = 0
        return d

    def scan(self, prefix: Sequence[int], depth: int) -> np.ndarray:
        """Residues of d for all 3**depth completions of ``prefix`` (rank order)."""
        st = self._start()
        n = self.n
        for k, digit in enumerate(prefix):
            v, st = self._candidates(st, k, digit)
            if k == n - 1:
                return self._leaf_vectors(st, v)
            self._pivot(st, v, k)
        for k in range(len(prefix), n):
            v, child = self._candidates(st, k, None)
            if k == n - 1:
                return self._leaf_vectors(child, v)
            st = child
            self._pivot(st, v, k)
        raise AssertionError("unreachable")


def _crt_certify(residues: list[np.ndarray], primes: Sequence[int]):
    """Indices (rows) whose exact vector is sign-definite, plus the exact vectors."""
    k = len(primes)
    digits = [residues[0] % primes[0]]
    for i in range(1, k):
        pi = primes[i]
        t = residues[i] % pi
        for j in range(i):
            t = (t - digits[j]) % pi * pow(primes[j], -1, pi) % pi
        digits.append(t)
    M = prod(primes)
    half = (M - 1) // 2
    hd = []
    rest = half
    for p in primes:
        rest, dgt = divmod(rest, p)
        hd.append(dgt)
    zero = np.ones(digits[0].shape, dtype=bool)
    for dg in digits:
        zero &= dg == 0
    greater = np.zeros(digits[0].shape, dtype=bool)
    decided = np.zeros(digits[0].shape, dtype=bool)
    for i in range(k - 1, -1, -1):
        greater |= ~decided & (digits[i] > hd[i])
        decided |= digits[i] != hd[i]
    negative = greater
    positive = ~zero & ~negative
    hits = np.nonzero(positive.all(axis=1) | negative.all(axis=1))[0]
    exact = []
    for h in hits:
        vec = []
        for c in range(digits[0].shape[1]):
            x, base = 0, 1
            for i in range(k):
                x += int(digits[i][h, c]) * base
                base *= primes[i]
            vec.append(x - M if negative[h, c] else x)
        exact.append(tuple(vec))
    return hits, exact


# --------------------------------------------------------------------------
# pruned exact engine


def _reduce(basis: list[tuple[int, list[int]]], vec: list[int]) -> list[int]:
    v = list(vec)
    for piv, b in basis:
        if v[piv]:
            a, c = b[piv], v[piv]
            v = [a * x - c * y for x, y in zip(v, b)]
    return v


def _pruned_chunk(rows, m, l, prefix, depth, n):
    r = len(rows)
    cols = [[[row[2 * k] for row in rows], [row[2 * k + 1] for row in rows],
             [-row[2 * k] - row[2 * k + 1] for row in rows]] for k in range(n)]
    hits: list[SlopeResult] = []
    index = list(prefix)

    def descend(k, basis):
        if k == n:
            res = evaluate_index(rows, m, l, index, rank=rank_of_index(index))
            if res.certified:
                hits.append(res)
            return
        for digit in ((index[k],) if k < len(prefix) else (0, 1, INF)):
            if k >= len(prefix):
                index.append(digit)
            if k == n - 1:
                descend(k + 1, basis)
            else:
                v = _reduce(basis, cols[k][digit]) if r else []
                nz = next((i for i, x in enumerate(v) if x), None)
                if nz is not None:
                    descend(k + 1, basis + [(nz, v)])
            if k >= len(prefix):
                index.pop()

    descend(0, [])
    return hits


# --------------------------------------------------------------------------
# driver


def _chunk_job(args):
    rows, m, l, n, depth, chunk, prune, primes = args
    prefix = index_from_rank(chunk, n - depth) if n > depth else ()
    base = chunk * 3 ** depth
    if prune:
        return chunk, _pruned_chunk(rows, m, l, prefix, depth, n)
    if not rows:
        results = (evaluate_index(rows, m, l, (d,), rank=base + d) for d in (0, 1, INF))
        return chunk, [r for r in results if r.certified]
    residues = [_ModularScanner(rows, p).scan(prefix, depth) for p in primes]
    hits, exact = _crt_certify(residues, primes)
    out = []
    for h, vec in zip(hits, exact):
        rank = base + int(h)
        index = index_from_rank(rank, n)
        res = evaluate_index(rows, m, l, index, rank=rank)
        if res.d != vec:
            raise CertificationMismatch(f"index rank {rank}: fast engine {vec} != exact {res.d}")
        out.append(res)
    return chunk, out


def parse_resume_token(token: str) -> tuple[int, int]:
    """``"<first unscanned rank>,<chunk size>"`` -> (next chunk number, chunk depth)."""
    try:
        start, size = (int(x) for x in token.split(","))
    except ValueError:
        raise ValueError(f"bad resume token {token!r}") from None
    depth = 0
    while 3 ** depth < size:
        depth += 1
    if 3 ** depth != size or start % size:
        raise ValueError(f"bad resume token {token!r}")
    return start // size, depth


def make_resume_token(next_chunk: int, depth: int) -> str:
    return f"{next_chunk * 3 ** depth},{3 ** depth}"


def exhaustive_search(
    R,
    m,
    l,
    workers: int = 1,
    resume_token: str | None = None,
    prune: bool = False,
    chunk_depth: int | None = None,
    max_chunks: int | None = None,
    force: bool = False,
    progress=None,
) -> SearchReport:
    """Scan all 3**n degeneration indices and certify the sign-definite ones.

    ``max_chunks`` stops early (the report then carries a resume token);
    ``KeyboardInterrupt`` does the same.  Results are sorted by rank.
    """
    rows = _rows(R)
    n = len(rows[0]) // 2 if rows else 1
    if n > HARD_LIMIT and not force:
        raise BudgetError(f"3^{n} indices: refusing without force=True")
    if n > SOFT_LIMIT:
        log.warning("exhaustive search over 3^%d indices will take a long time", n)
    depth = min(n, DEFAULT_CHUNK_DEPTH if chunk_depth is None else chunk_depth)
    start = 0
    if resume_token:
        start, depth = parse_resume_token(resume_token)
    n_chunks = 3 ** (n - depth)
    stop = n_chunks if max_chunks is None else min(n_chunks, start + max_chunks)
    primes = () if prune or not rows else primes_for(rows)
    mc, lc = tuple(_coeffs(m)), tuple(_coeffs(l))
    jobs = [(rows, mc, lc, n, depth, c, prune, primes) for c in range(start, stop)]

    t0 = time.perf_counter()
    results: dict[int, list[SlopeResult]] = {}
    done = start
    try:
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for chunk, hits in pool.map(_chunk_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))):
                    results[chunk] = hits
                    done = chunk + 1
                    if progress:
                        progress(done, n_chunks)
        else:
            for job in jobs:
                chunk, hits = _chunk_job(job)
                results[chunk] = hits
                done = chunk + 1
                if progress:
                    progress(done, n_chunks)
    except KeyboardInterrupt:
        log.warning("interrupted after chunk %d of %d", done, n_chunks)

    report = SearchReport(total=3 ** n)
    for chunk in sorted(results):
        report.certified.extend(results[chunk])
    report.scanned = done * 3 ** depth
    if done < n_chunks:
        report.resume_token = make_resume_token(done, depth)
    report.wall_time = time.perf_counter() - t0
    return report


def merge_reports(first: SearchReport, second: SearchReport) -> SearchReport:
    """Combine a partial report with the report of its resumed continuation."""
    merged = SearchReport(
        certified=sorted(first.certified + second.certified, key=lambda r: r.rank or 0),
        scanned=max(first.scanned, second.scanned),
        wall_time=first.wall_time + second.wall_time,
        total=second.total,
        resume_token=second.resume_token,
    )
    return merged
