"""Exact verification: dot spectra, kissing checks, fiber decompositions, lattice invariants.

All pairwise dots are computed exactly from the integer form of a
configuration (see :class:`~hopflattice.configuration.IntegerForm`), in row
blocks so that memory stays bounded for the 4320-point sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .algebra import HALF, ExactScalar, Hyper
from .configuration import Configuration

BLOCK_ROWS = 256


class LatticeError(ValueError):
    pass


def _blocks(n: int, size: int = BLOCK_ROWS) -> Iterator[slice]:
    for start in range(0, n, size):
        yield slice(start, min(n, start + size))


def _key_blocks(config: Configuration):
    form = config.integer_form()
    codec = form.key_codec()
    for rows in _blocks(len(form)):
        R, I = form.dots(rows)
        yield rows, codec.encode(R, I)


# --------------------------------------------------------------------------
# reports


@dataclass
class AnalysisReport:
    point_count: int
    dot_spectrum: dict[ExactScalar, int]
    max_offdiag_dot: ExactScalar | None
    neighbor_counts: tuple[int, ...]
    point_spectra: dict[ExactScalar, tuple[int, ...]]
    decomposition: tuple[dict[str, int], ...]
    fiber_labels: tuple[str, ...]
    antipodal: bool
    ambient_dim: int = 0
    name: str = ""

    def uniform_point_spectrum(self) -> dict[ExactScalar, int] | None:
        """Per-point dot multiplicities if every point sees the same ones, else ``None``."""
        out = {}
        for v, counts in self.point_spectra.items():
            if len(set(counts)) > 1:
                return None
            if counts and counts[0]:
                out[v] = counts[0]
        return out

    def uniform_neighbor_count(self) -> int | None:
        s = set(self.neighbor_counts)
        return s.pop() if len(s) == 1 else None

    def fiber_profile(self, i: int) -> tuple[int, list[int]]:
        """``(own fiber count, sorted counts on the other fibers it touches)`` for point ``i``."""
        own = self.fiber_labels[i]
        d = self.decomposition[i]
        return d.get(own, 0), sorted((c for f, c in d.items() if f != own and c), reverse=True)

    def uniform_fiber_profile(self) -> tuple[int, list[int]] | None:
        profiles = {(o, tuple(rest)) for o, rest in map(self.fiber_profile, range(self.point_count))}
        if len(profiles) != 1:
            return None
        own, rest = profiles.pop()
        return own, list(rest)

    def to_json(self) -> dict:
        spectrum = self.uniform_point_spectrum()
        return {
            "name": self.name,
            "point_count": self.point_count,
            "ambient_dim": self.ambient_dim,
            "antipodal": self.antipodal,
            "max_offdiag_dot": str(self.max_offdiag_dot) if self.max_offdiag_dot is not None else None,
            "dot_spectrum": {str(k): v for k, v in sorted(self.dot_spectrum.items())},
            "uniform_neighbor_count": self.uniform_neighbor_count(),
            "uniform_point_spectrum": (
                {str(k): v for k, v in sorted(spectrum.items())} if spectrum is not None else None),
            "uniform_fiber_profile": self.uniform_fiber_profile(),
        }


def analyze(config: Configuration) -> AnalysisReport:
    """All-pairs exact dot analysis of ``config``."""
    n = len(config)
    form = config.integer_form()
    codec = form.key_codec()
    self_key = codec.self_key()

    per_point: dict[int, np.ndarray] = {}
    for rows, keys in _key_blocks(config):
        for key in np.unique(keys):
            key = int(key)
            counts = (keys == key).sum(axis=1)
            arr = per_point.setdefault(key, np.zeros(n, dtype=np.int64))
            arr[rows] += counts
    if self_key in per_point:
        per_point[self_key] = per_point[self_key] - 1
    per_point = {k: v for k, v in per_point.items() if v.any()}

    values = {k: codec.decode(k) for k in per_point}
    spectrum = {values[k]: int(v.sum()) // 2 for k, v in per_point.items()}
    if per_point:
        max_key = max(per_point, key=lambda k: values[k])
        max_dot = values[max_key]
        neighbor_counts = tuple(int(c) for c in per_point[max_key])
    else:
        max_key, max_dot, neighbor_counts = None, None, (0,) * n

    labels = config.labels
    label_index = {f: i for i, f in enumerate(labels)}
    own = np.array([label_index[f] for f in config.fiber_labels], dtype=np.int64)
    onehot = np.zeros((n, len(labels)), dtype=np.int64)
    onehot[np.arange(n), own] = 1
    decomp = np.zeros((n, len(labels)), dtype=np.int64)
    if max_key is not None:
        for rows, keys in _key_blocks(config):
            decomp[rows] = (keys == max_key).astype(np.int64) @ onehot
        if max_key == self_key:
            decomp[np.arange(n), own] -= 1
    decomposition = tuple({labels[j]: int(c) for j, c in enumerate(row) if c} for row in decomp)

    return AnalysisReport(
        point_count=n,
        dot_spectrum=spectrum,
        max_offdiag_dot=max_dot,
        neighbor_counts=neighbor_counts,
        point_spectra={values[k]: tuple(int(c) for c in v) for k, v in per_point.items()},
        decomposition=decomposition,
        fiber_labels=config.fiber_labels,
        antipodal=config.is_negation_closed(),
        ambient_dim=config.ambient_dim,
        name=config.name,
    )


def assert_kissing(config: Configuration,
                   bound: ExactScalar = HALF) -> tuple[bool, tuple[int, int, ExactScalar] | None]:
    """``(True, None)`` if every off-diagonal dot is at most ``bound``; else the first violating pair."""
    form = config.integer_form()
    codec = form.key_codec()
    verdict: dict[int, bool] = {}
    n = len(form)
    for rows, keys in _key_blocks(config):
        bad_keys = []
        for key in np.unique(keys):
            key = int(key)
            if key not in verdict:
                verdict[key] = codec.decode(key) > bound
            if verdict[key]:
                bad_keys.append(key)
        if not bad_keys:
            continue
        mask = np.isin(keys, np.array(bad_keys, dtype=keys.dtype))
        row_ids = np.arange(rows.start, rows.stop)[:, None]
        mask &= np.arange(n)[None, :] > row_ids
        hits = np.argwhere(mask)
        if len(hits):
            r, j = hits[0]
            i = rows.start + int(r)
            return False, (i, int(j), codec.decode(keys[r, j]))
    return True, None


def spectra_equal(a: Configuration, b: Configuration) -> bool:
    if len(a) != len(b):
        return False
    return analyze(a).dot_spectrum == analyze(b).dot_spectrum


# --------------------------------------------------------------------------
# lattices


@dataclass
class LatticeReport:
    rank: int
    basis: tuple[tuple[ExactScalar, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    determinant: int
    even: bool
    scale: ExactScalar = field(default_factory=lambda: ExactScalar(1))

    def summary(self) -> dict:
        return {"rank": self.rank, "determinant": self.determinant, "even": self.even}


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination determinant of an integer matrix."""
    m = [list(map(int, row)) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row-style HNF of the integer lattice spanned by ``rows``.

    Rows come back upper triangular with positive pivots and every entry above
    a pivot reduced into ``[0, pivot)``.  Zero rows are dropped.
    """
    basis: dict[int, list[int]] = {}

    def reduce_all():
        cols = sorted(basis)
        # left to right: reducing by a pivot row only touches columns at or after its pivot
        for idx in range(len(cols)):
            pc = cols[idx]
            prow = basis[pc]
            p = prow[pc]
            for above in cols[:idx]:
                r = basis[above]
                q = r[pc] // p
                if q:
                    basis[above] = [x - q * y for x, y in zip(r, prow)]

    inserted = 0
    for vec in rows:
        v = [int(x) for x in vec]
        for col in range(ncols):
            if not v[col]:
                continue
            b = basis.get(col)
            if b is None:
                basis[col] = v if v[col] > 0 else [-x for x in v]
                break
            a, c = b[col], v[col]
            if c % a == 0:
                q = c // a
                v = [x - q * y for x, y in zip(v, b)]
                continue
            g, x, y = _egcd(a, c)
            new_b = [x * bi + y * vi for bi, vi in zip(b, v)]
            v = [(a // g) * vi - (c // g) * bi for bi, vi in zip(b, v)]
            if new_b[col] < 0:
                new_b = [-t for t in new_b]
            basis[col] = new_b
        inserted += 1
        if inserted % 64 == 0:
            reduce_all()
    reduce_all()
    return [basis[c] for c in sorted(basis)]


def natural_scale(config: Configuration) -> ExactScalar:
    """Smallest ``s`` (with ``s^2`` an integer) making every scaled dot integral."""
    m = 1
    for v in analyze(config).dot_spectrum:
        if not v.is_rational():
            raise LatticeError(f"dot {v} is irrational; no rational Gram scaling exists")
        m = math.lcm(m, v.rat.denominator)
    return ExactScalar(m).sqrt() if _is_sq_or_twice_sq(m) else _raise_scale(m)


def _is_sq_or_twice_sq(m: int) -> bool:
    r = math.isqrt(m)
    h = math.isqrt(m // 2) if m % 2 == 0 else -1
    return r * r == m or (h >= 0 and 2 * h * h == m)


def _raise_scale(m: int):
    raise LatticeError(f"scale sqrt({m}) is outside Q(sqrt 2)")


def gram_and_basis(config: Configuration, scale) -> LatticeReport:
    """Integer lattice generated by ``scale * config``: HNF basis, Gram matrix, determinant, evenness."""
    scale = ExactScalar.coerce(scale)
    s2 = scale * scale
    if not s2.is_rational():
        raise LatticeError(f"scale^2 = {s2} must be rational")
    s2 = s2.rat
    form = config.integer_form()
    n, dim = form.A.shape
    d2 = form.denom ** 2
    num, den = s2.numerator, s2.denominator * d2

    def scaled(R, I) -> np.ndarray:
        if np.any(I != 0):
            raise LatticeError("non-integral Gram at this scale (irrational dot)")
        R = R.astype(object) * num
        if np.any(R % den != 0):
            raise LatticeError("non-integral Gram at this scale")
        return R // den

    # integrality of every pairwise dot
    for rows in _blocks(n):
        scaled(*form.dots(rows))

    # greedy maximal independent subset, tested through the Gram matrix
    chosen: list[int] = []
    ginv: list[list[Fraction]] = []
    gram_s: list[list[int]] = []
    diag = scaled(*form.self_dots())
    for v in range(n):
        if len(chosen) == dim:
            break
        if chosen:
            y = [int(x) for x in scaled(*form.dots(np.array(chosen), np.array([v])))[:, 0]]
            r = len(y)
            proj = sum(y[i] * ginv[i][j] * y[j] for i in range(r) for j in range(r))
            if diag[v] == proj:
                continue
        chosen.append(v)
        idx = np.array(chosen)
        gram_s = [[int(x) for x in row] for row in scaled(*form.dots(idx, idx))]
        ginv = _fraction_inverse(gram_s)
    rank = len(chosen)
    if rank == 0 or rank < dim:
        raise LatticeError(f"rank-deficient input: rank {rank} in dimension {dim}")

    # integer coefficients of every point against the chosen subset
    L = 1
    for row in ginv:
        for x in row:
            L = math.lcm(L, x.denominator)
    minv = np.array([[int(x * L) for x in row] for row in ginv], dtype=object)
    idx = np.array(chosen)
    Y = np.concatenate([scaled(*form.dots(rows, idx)) for rows in _blocks(n)], axis=0)
    K = Y @ minv.T  # n x rank, coefficients times L
    G = np.array(gram_s, dtype=object)
    lhs = ((K @ G) * K).sum(axis=1)
    if np.any(lhs != diag.astype(object) * (L * L)):
        raise LatticeError("point outside the span of the chosen subset")

    H = hermite_normal_form(K.tolist(), rank)
    Hm = np.array(H, dtype=object)
    gram_num = Hm @ G @ Hm.T
    if np.any(gram_num % (L * L) != 0):
        raise LatticeError("basis Gram matrix is not integral")
    gram = tuple(tuple(int(x) // (L * L) for x in row) for row in gram_num)

    det = bareiss_determinant(gram)
    even = all(gram[i][i] % 2 == 0 for i in range(rank))

    pts = config.points
    basis = []
    for row in H:
        coords = []
        for c in range(dim):
            acc = ExactScalar()
            for k, h in enumerate(row):
                if h:
                    x = pts[chosen[k]][c]
                    if x:
                        acc = acc + x * Fraction(h, L)
            coords.append(acc * scale)
        basis.append(tuple(coords))
    if det <= 0:
        raise LatticeError(f"Gram determinant {det} is not positive")
    return LatticeReport(rank, tuple(basis), gram, det, even, scale)


def _fraction_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# --------------------------------------------------------------------------
# the D5 lift experiment


def experiment_e5_lift(fiber_size: int,
                       offsets: Mapping[str, Hyper] | None = None) -> AnalysisReport:
    """Lift the 40 D5 kissing points to S^7 with ``fiber_size`` phases per fiber.

    Exploratory: the report records whatever maximal dot comes out.
    """
    from .constructions import base_label, circle_phases, d5_kissing_40, general_fiber_point
    from .algebra import cd_mul

    phases = circle_phases(fiber_size)
    offsets = dict(offsets or {})
    points, labels = [], []
    for b in d5_kissing_40():
        f = base_label(b)
        u = offsets.get(f)
        for q in phases:
            param = cd_mul(q, u) if u is not None else q
            points.append(general_fiber_point(b, param).vector())
            labels.append(f)
    config = Configuration(tuple(points), tuple(labels), name=f"d5-lift-{fiber_size}",
                           method="hopf", level=2, antipodal=False,
                           meta={"offsets": {f: [str(c) for c in u.coords] for f, u in offsets.items()}})
    return analyze(config)
