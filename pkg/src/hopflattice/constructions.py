"""Point configurations built by Hopf lifting, and canonical constructions to check them against.

The three lifts share one recipe: pick antipodal axis points on the base
sphere S^(2^n), and over each one place a copy of a known configuration
along its fiber.

* 24-cell: six octahedron points on S^2, four phases per circle.
* E8: ten axis points on S^4, a 24-cell of unit quaternions per fiber.
* Lambda16: eighteen axis points on S^8, the Hopf-built E8 per fiber.

Fibers over the two poles are rotated by a unit offset; without it the pole
circles sit at 45 degrees to the equatorial ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .algebra import (
    HALF,
    INV_SQRT2,
    ONE,
    ZERO,
    ExactScalar,
    FieldOverflowError,
    Hyper,
    basis_element,
    cd_mul,
    cd_norm2,
)
from .configuration import Configuration, ConstructionError
from .hopf import BasePoint, SpherePair, fiber_point, hopf_direct

# --------------------------------------------------------------------------
# base points


def base_label(b: BasePoint) -> str:
    """Fiber label of a base point: ``pole+``/``pole-``, or its signed nonzero axes.

    Axis points read ``e3-`` (``a = -e_3``); mixed points read e.g. ``e0+t-``.
    """
    if b.t == ONE:
        return "pole+"
    if b.t == -ONE:
        return "pole-"
    parts = [f"e{k}{'+' if c.sign() > 0 else '-'}" for k, c in enumerate(b.a.coords) if c]
    if b.t:
        parts.append("t+" if b.t.sign() > 0 else "t-")
    return "".join(parts)


def octahedron_base() -> list[BasePoint]:
    """The six octahedron vertices (0,1), (0,-1), (1,0), (-1,0), (i,0), (-i,0) of S^2."""
    one, i = basis_element(1, 0), basis_element(1, 1)
    zero = Hyper.zero(1)
    return [
        BasePoint(zero, ONE),
        BasePoint(zero, -ONE),
        BasePoint(one, ZERO),
        BasePoint(-one, ZERO),
        BasePoint(i, ZERO),
        BasePoint(-i, ZERO),
    ]


def axis_base(level: int) -> list[BasePoint]:
    """The ``2 (2^level + 1)`` antipodal axis points of S^(2^level)."""
    if level not in (1, 2, 3):
        raise ValueError(f"axis_base needs level 1..3, got {level}")
    pts = [BasePoint.north(level), BasePoint.south(level)]
    for k in range(1 << level):
        e = basis_element(level, k)
        pts.append(BasePoint(e, ZERO))
        pts.append(BasePoint(-e, ZERO))
    return pts


# --------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class LiftPlan:
    base: tuple[BasePoint, ...]
    fiber_set: tuple[Hyper, ...]
    offsets: Mapping[str, Hyper] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "fiber_set", tuple(self.fiber_set))
        labels = [base_label(b) for b in self.base]
        if len(set(labels)) != len(labels):
            raise ValueError("base points must be pairwise distinct")
        for q in self.fiber_set:
            if cd_norm2(q) != ONE:
                raise ValueError(f"fiber element {q} is not a unit")
        for f, u in self.offsets.items():
            if cd_norm2(u) != ONE:
                raise ValueError(f"offset for {f} is not a unit")


def lift(plan: LiftPlan, name: str = "lift", *, validate: bool = True) -> Configuration:
    points, labels = [], []
    for b in plan.base:
        f = base_label(b)
        u = plan.offsets.get(f)
        for q in plan.fiber_set:
            param = cd_mul(q, u) if u is not None else q
            points.append(fiber_point(b, param).vector())
            labels.append(f)
    level = plan.base[0].level if plan.base else None
    meta = {"offsets": {f: [str(c) for c in u.coords] for f, u in sorted(plan.offsets.items())},
            "base_count": len(plan.base), "fiber_size": len(plan.fiber_set)}
    config = Configuration(tuple(points), tuple(labels), name=name, method="hopf",
                           level=level, meta=meta)
    if validate:
        _check_distinct(config)
    return config


def _check_distinct(config: Configuration) -> None:
    pts = config.points
    for i in range(1, len(pts)):
        if pts[i] == pts[i - 1]:
            raise ConstructionError(
                f"{config.name}: lift produced duplicate point {i - 1}/{i} "
                f"on fibers {config.fiber_labels[i - 1]}, {config.fiber_labels[i]}",
                witness=(i - 1, i))


def check_fibers(config: Configuration) -> list[int]:
    """Indices of points whose Hopf image is not the base point named by their label."""
    bad = []
    for i, (p, f) in enumerate(zip(config.points, config.fiber_labels)):
        # a unit base point with a single signed nonzero axis is pinned by its label
        image = hopf_direct(SpherePair.from_vector(config.level, p))
        if base_label(image) != f:
            bad.append(i)
    return bad


def _hyper_from_vector(vec: Sequence[ExactScalar]) -> Hyper:
    level = (len(vec) - 1).bit_length()
    if 1 << level != len(vec):
        raise ValueError(f"vector length {len(vec)} is not a power of two")
    return Hyper(level, vec)


def pole_offset(level: int, k: int = 1) -> Hyper:
    """The unit ``(e_0 + e_k) / sqrt(2)``; at level 1 with k = 1 this is exp(i pi/4)."""
    return (basis_element(level, 0) + basis_element(level, k)) * INV_SQRT2


def _pole_offsets(u: Hyper) -> dict[str, Hyper]:
    return {"pole+": u, "pole-": u}


# --------------------------------------------------------------------------
# 24-cell


def cell24_standard() -> Configuration:
    """The 24 vectors with two coordinates ``±sqrt(2)/2`` and two zero."""
    h = INV_SQRT2
    pts = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [ZERO] * 4
            v[i], v[j] = h * si, h * sj
            pts.append(tuple(v))
    config = Configuration(tuple(pts), ("cell24",) * len(pts), name="cell24",
                           method="canonical", level=None)
    config.validate()
    return config


@lru_cache(maxsize=None)
def cell24_hopf() -> Configuration:
    phases = [basis_element(1, 0), basis_element(1, 1), -basis_element(1, 0), -basis_element(1, 1)]
    plan = LiftPlan(octahedron_base(), phases, _pole_offsets(pole_offset(1)))
    config = lift(plan, "cell24")
    config.validate()
    _kissing_gate(config)
    return config


def hurwitz_units() -> list[Hyper]:
    """±1, ±i, ±j, ±k and the sixteen (±1 ±i ±j ±k)/2."""
    units = []
    for k in range(4):
        e = basis_element(2, k)
        units += [e, -e]
    for signs in itertools.product((1, -1), repeat=4):
        units.append(Hyper(2, [HALF * s for s in signs]))
    return units


# --------------------------------------------------------------------------
# E8 and Lambda16


def _kissing_gate(config: Configuration) -> None:
    from .analysis import assert_kissing

    ok, witness = assert_kissing(config)
    if not ok:
        i, j, dot = witness
        raise ConstructionError(
            f"{config.name}: points {i} and {j} have dot {dot} > 1/2", witness=witness)


@lru_cache(maxsize=None)
def e8_hopf() -> Configuration:
    plan = LiftPlan(axis_base(2), hurwitz_units(), _pole_offsets(pole_offset(2)))
    config = lift(plan, "e8")
    config.validate()
    _kissing_gate(config)
    return config


def _lambda16_offset_candidates() -> Iterable[Hyper]:
    for k in range(1, 8):
        yield pole_offset(3, k)
    # Hurwitz-style octonion units (e0 + ea + eb + ec)/2
    for a, b, c in itertools.combinations(range(1, 8), 3):
        for signs in itertools.product((1, -1), repeat=3):
            coords = [ZERO] * 8
            coords[0] = HALF
            for idx, s in zip((a, b, c), signs):
                coords[idx] = HALF * s
            yield Hyper(3, coords)


@lru_cache(maxsize=None)
def lambda16_hopf() -> Configuration:
    fibers = [_hyper_from_vector(p) for p in e8_hopf().points]
    base = axis_base(3)
    tried = []
    for u in _lambda16_offset_candidates():
        config = lift(LiftPlan(base, fibers, _pole_offsets(u)), "lambda16")
        try:
            config.validate()
            _kissing_gate(config)
        except ConstructionError as exc:
            tried.append((u, exc))
            continue
        config.meta["offset_attempts"] = len(tried) + 1
        return config
    u, exc = tried[-1]
    raise ConstructionError(
        f"lambda16: no pole offset passed the kissing gate ({len(tried)} tried); last: {exc}",
        witness=exc.witness)


# --------------------------------------------------------------------------
# canonical oracles


def e8_canonical() -> Configuration:
    """E8 roots (±1,±1,0^6) and (±1/2)^8 with an even number of minus signs, scaled to unit."""
    s = INV_SQRT2
    pts = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [ZERO] * 8
            v[i], v[j] = s * si, s * sj
            pts.append(tuple(v))
    half = s * Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            pts.append(tuple(half * x for x in signs))
    config = Configuration(tuple(pts), ("e8",) * len(pts), name="e8", method="canonical")
    config.validate()
    return config


def reed_muller_1_4() -> list[tuple[int, ...]]:
    """The 32 codewords of RM(1,4): truth tables of affine functions on F_2^4."""
    words = set()
    for c0, *cs in itertools.product((0, 1), repeat=5):
        words.add(tuple((c0 + sum(c * ((x >> i) & 1) for i, c in enumerate(cs))) % 2
                        for x in range(16)))
    return sorted(words)


def _bw16_minimal_integer_vectors() -> list[tuple[int, ...]]:
    """Norm-8 vectors of {x in Z^16 : x mod 2 in RM(1,4), sum(x) = 0 mod 4}.

    Bounded search coset by coset: on a codeword's support the entries are odd,
    off it even, and every entry has |x| <= 2 because 3^2 > 8.
    """
    out = []
    for word in reed_muller_1_4():
        odd = [k for k in range(16) if word[k]]
        even = [k for k in range(16) if not word[k]]
        base_norm = len(odd)  # each odd entry contributes at least 1
        if base_norm > 8:
            continue
        # remaining norm must come from ±2 entries (4 each) or ±3 odd entries (excluded)
        n_twos = (8 - base_norm) // 4
        if base_norm + 4 * n_twos != 8:
            continue
        for twos in itertools.combinations(even, n_twos):
            for odd_signs in itertools.product((1, -1), repeat=len(odd)):
                for two_signs in itertools.product((2, -2), repeat=n_twos):
                    v = [0] * 16
                    for k, s in zip(odd, odd_signs):
                        v[k] = s
                    for k, s in zip(twos, two_signs):
                        v[k] = s
                    if sum(v) % 4 == 0:
                        out.append(tuple(v))
    return out


def bw16_canonical() -> Configuration:
    """Minimal vectors of the Barnes-Wall lattice, scaled from norm 8 to unit."""
    scale = ExactScalar(0, Fraction(1, 4))  # 1/(2 sqrt2)
    vecs = _bw16_minimal_integer_vectors()
    pts = [tuple(scale * x if x else ZERO for x in v) for v in vecs]
    config = Configuration(tuple(pts), ("bw16",) * len(pts), name="lambda16", method="canonical")
    if len(config) != 4320:
        raise ConstructionError(f"BW16 enumeration found {len(config)} minimal vectors, not 4320")
    config.validate()
    return config


# --------------------------------------------------------------------------
# D5 kissing arrangement and its (unsuccessful) lift


def d5_kissing_40() -> list[BasePoint]:
    """The 40 vectors (±e_i ± e_j)/sqrt(2) of R^5 as base points of S^4."""
    out = []
    for i, j in itertools.combinations(range(5), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [ZERO] * 5
            v[i], v[j] = INV_SQRT2 * si, INV_SQRT2 * sj
            out.append(BasePoint(Hyper(2, v[:4]), v[4]))
    return out


def _small_q_sqrt2(limit: int = 8) -> list[ExactScalar]:
    vals = set()
    for d in (1, 2, 4, 8):
        for p in range(-limit, limit + 1):
            for r in range(-limit, limit + 1):
                vals.add(ExactScalar(Fraction(p, d), Fraction(r, d)))
    return sorted(vals, key=lambda x: (abs(x.rat) + abs(x.irr), x.rat, x.irr))


def norm_root(level: int, value: ExactScalar) -> Hyper:
    """A Hyper ``s`` with ``|s|^2 == value``, preferring a real ``s``.

    When ``value`` has no square root in Q(sqrt 2) a small search writes it
    as a sum of up to ``2^level`` squares instead.
    """
    try:
        return Hyper.real(level, value.sqrt())
    except FieldOverflowError:
        pass
    if level >= 1:
        for x in _small_q_sqrt2():
            rest = value - x * x
            if rest.sign() < 0 or not rest.is_rational():
                continue
            for k in range(1, min(3, (1 << level) - 1) + 1):
                tail = _rational_squares(rest.rat, k)
                if tail is not None:
                    coords = [x] + [ExactScalar(c) for c in tail]
                    coords += [ZERO] * ((1 << level) - len(coords))
                    return Hyper(level, coords)
    raise FieldOverflowError(f"no exact root of norm {value} found at level {level}")


def _rational_squares(r: Fraction, k: int) -> list[Fraction] | None:
    """Write ``r`` as a sum of ``k`` squares of small fractions, if possible."""
    if k == 1:
        for d in (1, 2, 4, 8, 16):
            n = r * d * d
            if n.denominator == 1:
                m = n.numerator
                s = int(m ** 0.5)
                for c in (s - 1, s, s + 1):
                    if c >= 0 and c * c == m:
                        return [Fraction(c, d)]
        return None
    for d in (1, 2, 4, 8):
        for p in range(0, 17):
            x = Fraction(p, d)
            if x * x > r:
                break
            rest = _rational_squares(r - x * x, k - 1)
            if rest is not None:
                return [x] + rest
    return None


def general_fiber_point(base: BasePoint, q: Hyper) -> SpherePair:
    """Fiber point for bases whose radicals leave the field (associative levels only).

    Uses ``z = s q`` and ``w = a s q / (1 + t)`` with ``|s|^2 = (1 + t) / 2``.
    """
    if base.level > 2:
        raise ValueError("general_fiber_point relies on associativity (level <= 2)")
    try:
        return fiber_point(base, q)
    except FieldOverflowError:
        pass
    s = norm_root(base.level, (ONE + base.t) * HALF)
    z = cd_mul(s, q)
    w = cd_mul(base.a, z) / (ONE + base.t)
    return SpherePair(w, z)


def circle_phases(m: int, level: int = 2) -> list[Hyper]:
    """The m-th roots of unity in the complex subalgebra, for m in {1, 2, 4, 8}."""
    if m not in (1, 2, 4, 8):
        raise ValueError(f"fiber size must be 1, 2, 4 or 8 for exact phases, got {m}")
    one, i = basis_element(level, 0), basis_element(level, 1)
    eighth = [one, (one + i) * INV_SQRT2, i, (i - one) * INV_SQRT2,
              -one, -(one + i) * INV_SQRT2, -i, (one - i) * INV_SQRT2]
    step = 8 // m
    return eighth[::step]
