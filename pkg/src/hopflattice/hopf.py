"""Exact Hopf maps S^(2^(n+1)-1) -> S^(2^n) for n = 1, 2, 3.

Two routes are provided and agree exactly: the direct form
``(w, z) -> (2 w z*, |z|^2 - |w|^2)`` and the factored form ``h2(h1(w, z))``
where ``h1`` divides in the algebra and ``h2`` is an inverse stereographic
projection.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    ONE,
    ExactScalar,
    Hyper,
    cd_conj,
    cd_inv,
    cd_mul,
    cd_norm2,
)

HOPF_LEVELS = (1, 2, 3)


def _check_level(level: int) -> None:
    if level not in HOPF_LEVELS:
        raise ValueError(f"Hopf maps exist for levels 1..3, got {level}")


@dataclass(frozen=True)
class SpherePair:
    """A point ``(w, z)`` of the unit sphere in A_n x A_n."""

    w: Hyper
    z: Hyper

    def __post_init__(self):
        if self.w.level != self.z.level:
            raise ValueError("w and z must share a level")
        _check_level(self.w.level)
        if cd_norm2(self.w) + cd_norm2(self.z) != ONE:
            raise ValueError("|w|^2 + |z|^2 must equal 1")

    @property
    def level(self) -> int:
        return self.w.level

    def vector(self) -> tuple[ExactScalar, ...]:
        return self.w.coords + self.z.coords

    @classmethod
    def from_vector(cls, level: int, vec: Sequence[ExactScalar]) -> "SpherePair":
        n = 1 << level
        if len(vec) != 2 * n:
            raise ValueError(f"expected {2 * n} coordinates, got {len(vec)}")
        return cls(Hyper(level, vec[:n]), Hyper(level, vec[n:]))


@dataclass(frozen=True)
class BasePoint:
    """A point ``(a, t)`` of S^(2^n) with ``a`` in A_n and real ``t``."""

    a: Hyper
    t: ExactScalar

    def __post_init__(self):
        object.__setattr__(self, "t", ExactScalar.coerce(self.t))
        _check_level(self.a.level)
        if cd_norm2(self.a) + self.t * self.t != ONE:
            raise ValueError("|a|^2 + t^2 must equal 1")

    @property
    def level(self) -> int:
        return self.a.level

    def vector(self) -> tuple[ExactScalar, ...]:
        return self.a.coords + (self.t,)

    @classmethod
    def north(cls, level: int) -> "BasePoint":
        return cls(Hyper.zero(level), ONE)

    @classmethod
    def south(cls, level: int) -> "BasePoint":
        return cls(Hyper.zero(level), -ONE)


@dataclass(frozen=True)
class PointAtInfinity:
    level: int


def hopf_direct(p: SpherePair) -> BasePoint:
    a = cd_mul(p.w, cd_conj(p.z)) * 2
    return BasePoint(a, cd_norm2(p.z) - cd_norm2(p.w))


def h1(p: SpherePair) -> Hyper | PointAtInfinity:
    if not p.z:
        return PointAtInfinity(p.level)
    return cd_mul(p.w, cd_inv(p.z))


def h2(c: Hyper | PointAtInfinity) -> BasePoint:
    """Inverse stereographic projection oriented so that ``h2(h1(p)) == hopf_direct(p)``."""
    if isinstance(c, PointAtInfinity):
        return BasePoint.south(c.level)
    n2 = cd_norm2(c)
    denom = ONE + n2
    return BasePoint((c * 2) / denom, (ONE - n2) / denom)


def fiber_point(base: BasePoint, q: Hyper) -> SpherePair:
    """The point of the fiber over ``base`` selected by the unit ``q``.

    Away from the south pole this is ``(a q / sqrt(2(1+t)), q sqrt((1+t)/2))``;
    over the south pole it is ``(q, 0)``.  Raises
    :class:`~hopflattice.algebra.FieldOverflowError` when the radical is not
    in Q(sqrt 2).
    """
    if q.level != base.level:
        raise ValueError(f"fiber parameter level {q.level} != base level {base.level}")
    if cd_norm2(q) != ONE:
        raise ValueError(f"fiber parameter must be a unit, |q|^2 = {cd_norm2(q)}")
    t = base.t
    if t == -ONE:
        return SpherePair(q, Hyper.zero(q.level))
    root = ((ONE + t) * 2).sqrt()
    w = cd_mul(base.a, q) / root
    z = q * (root / 2)
    return SpherePair(w, z)


__all__ = [
    "BasePoint",
    "PointAtInfinity",
    "SpherePair",
    "fiber_point",
    "h1",
    "h2",
    "hopf_direct",
]
