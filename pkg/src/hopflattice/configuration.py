"""Labeled point sets on a sphere, plus an exact integer encoding for fast dot products."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .algebra import ONE, ExactScalar

Point = tuple[ExactScalar, ...]

_INT64_SAFE = 1 << 62


class ConstructionError(RuntimeError):
    """A builder produced a set that breaks a configuration invariant.

    ``witness`` carries the offending point indices (and dot value, if any).
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Configuration:
    """Finite point set on the unit sphere, each point tagged with its fiber label.

    Points are kept in lexicographic order of their exact coordinates so that
    any two equal sets serialize identically.
    """

    points: tuple[Point, ...]
    fiber_labels: tuple[str, ...]
    name: str = "unnamed"
    method: str = "hopf"
    level: int | None = None
    antipodal: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = [tuple(ExactScalar.coerce(c) for c in p) for p in self.points]
        labels = list(self.fiber_labels)
        if len(pts) != len(labels):
            raise ValueError(f"{len(pts)} points but {len(labels)} fiber labels")
        if pts and len({len(p) for p in pts}) != 1:
            raise ValueError("points have mixed dimensions")
        order = sorted(range(len(pts)), key=lambda i: pts[i])
        object.__setattr__(self, "points", tuple(pts[i] for i in order))
        object.__setattr__(self, "fiber_labels", tuple(labels[i] for i in order))

    def __len__(self):
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    @property
    def labels(self) -> list[str]:
        """Distinct fiber labels in sort order."""
        return sorted(set(self.fiber_labels))

    def integer_form(self) -> "IntegerForm":
        cached = self.__dict__.get("_iform")
        if cached is None:
            cached = IntegerForm.from_points(self.points)
            object.__setattr__(self, "_iform", cached)
        return cached

    def floats(self) -> np.ndarray:
        return np.array([[float(c) for c in p] for p in self.points], dtype=float)

    def validate(self) -> None:
        """Raise :class:`ConstructionError` unless points are unit, distinct and (if flagged) antipodal."""
        form = self.integer_form()
        norms_r, norms_i = form.self_dots()
        d2 = form.denom ** 2
        for i, (r, s) in enumerate(zip(norms_r, norms_i)):
            if r != d2 or s != 0:
                raise ConstructionError(f"point {i} is not a unit vector", witness=(i,))
        for i in range(1, len(self.points)):
            if self.points[i] == self.points[i - 1]:
                raise ConstructionError(
                    f"duplicate point at indices {i - 1} and {i}", witness=(i - 1, i))
        if self.antipodal:
            index = {p: i for i, p in enumerate(self.points)}
            for i, p in enumerate(self.points):
                if tuple(-c for c in p) not in index:
                    raise ConstructionError(
                        f"point {i} has no antipode in the set", witness=(i,))

    def is_negation_closed(self) -> bool:
        present = set(self.points)
        return all(tuple(-c for c in p) in present for p in self.points)

    def with_points(self, points: Iterable[Point], labels: Sequence[str] | None = None,
                    **changes) -> "Configuration":
        points = list(points)
        if labels is None:
            labels = self.fiber_labels
        kwargs = dict(name=self.name, method=self.method, level=self.level,
                      antipodal=self.antipodal, meta=dict(self.meta))
        kwargs.update(changes)
        return Configuration(tuple(points), tuple(labels), **kwargs)


class IntegerForm:
    """Points written as ``(A + B sqrt2) / denom`` with integer matrices ``A`` and ``B``.

    Pairwise dots are then ``(R + I sqrt2) / denom^2`` with
    ``R = A A' + 2 B B'`` and ``I = A B' + B A'``, computed blockwise in int64
    when the bounds allow it and with Python integers otherwise.
    """

    def __init__(self, A: np.ndarray, B: np.ndarray, denom: int):
        self.A = A
        self.B = B
        self.denom = denom

    @classmethod
    def from_points(cls, points: Sequence[Point]) -> "IntegerForm":
        denom = 1
        for p in points:
            for c in p:
                denom = math.lcm(denom, c.rat.denominator, c.irr.denominator)
        A = [[int(c.rat * denom) for c in p] for p in points]
        B = [[int(c.irr * denom) for c in p] for p in points]
        dim = len(points[0]) if points else 0
        big = max((abs(v) for row in A + B for v in row), default=0)
        bound = 3 * dim * big * big + 1
        dtype = np.int64 if bound < _INT64_SAFE else object
        shape = (len(points), dim)
        return cls(np.array(A, dtype=dtype).reshape(shape),
                   np.array(B, dtype=dtype).reshape(shape), denom)

    def __len__(self):
        return self.A.shape[0]

    def dots(self, rows: slice | np.ndarray, cols: slice | np.ndarray = slice(None)):
        """Integer numerators ``(R, I)`` of the dots between two row selections."""
        A, B = self.A, self.B
        a, b = A[rows], B[rows]
        at, bt = A[cols].T, B[cols].T
        return a @ at + 2 * (b @ bt), a @ bt + b @ at

    def self_dots(self):
        A, B = self.A, self.B
        return (A * A + 2 * B * B).sum(axis=1), (2 * A * B).sum(axis=1)

    def key_codec(self) -> "KeyCodec":
        return KeyCodec(self)

    def scalar(self, r: int, i: int) -> ExactScalar:
        d2 = self.denom ** 2
        return ExactScalar(Fraction(int(r), d2), Fraction(int(i), d2))


class KeyCodec:
    """Packs a dot numerator pair ``(R, I)`` into one integer key and back."""

    def __init__(self, form: IntegerForm):
        A, B = form.A, form.B
        dim = A.shape[1] if A.ndim == 2 else 0
        ma = int(np.abs(A).max()) if A.size else 0
        mb = int(np.abs(B).max()) if B.size else 0
        self.ibound = 2 * dim * ma * mb + 1
        rbound = dim * (ma * ma + 2 * mb * mb) + 1
        self.mult = 2 * self.ibound + 1
        self.form = form
        self.safe = (rbound + 1) * self.mult < _INT64_SAFE

    def encode(self, R, I):
        if not self.safe and R.dtype != object:
            R = R.astype(object)
            I = I.astype(object)
        return R * self.mult + (I + self.ibound)

    def decode(self, key) -> ExactScalar:
        key = int(key)
        r, rem = divmod(key, self.mult)
        return self.form.scalar(r, rem - self.ibound)

    def self_key(self) -> int:
        return self.form.denom ** 2 * self.mult + self.ibound


def unit_check(points: Sequence[Point]) -> list[int]:
    """Indices of points whose exact squared norm is not 1."""
    bad = []
    for i, p in enumerate(points):
        total = ExactScalar()
        for c in p:
            if c:
                total = total + c * c
        if total != ONE:
            bad.append(i)
    return bad
