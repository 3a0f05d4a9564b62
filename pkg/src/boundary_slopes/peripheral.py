"""Meridian/longitude exponent vectors, valuations and boundary slopes."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple, Sequence

from .degeneration import INF, DegenerationVector, is_ideal_point

RHO = {1: (1, 0), 0: (0, -1), INF: (-1, 1)}


class NotIdealPoint(ValueError):
    """The degeneration vector is not sign-definite, so no valuation is backed by it."""


class NoSlope(ValueError):
    """Both valuations vanish at the ideal point."""


@dataclass(frozen=True)
class PeripheralCurve:
    name: str
    coeffs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def padded(self, extra_tets: int = 1) -> "PeripheralCurve":
        return PeripheralCurve(self.name, self.coeffs + (0, 0) * extra_tets)


def parse_curves(text: str) -> tuple[PeripheralCurve, PeripheralCurve]:
    curves = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, _, body = line.partition(":")
        name = name.strip().lower()
        if name not in ("meridian", "longitude"):
            raise ValueError(f"unknown curve {name!r}")
        curves[name] = PeripheralCurve(name, tuple(int(x) for x in body.replace(",", " ").split()))
    if set(curves) != {"meridian", "longitude"}:
        raise ValueError("curve file needs both 'meridian:' and 'longitude:' lines")
    m, l = curves["meridian"], curves["longitude"]
    if len(m) != len(l) or len(m) % 2:
        raise ValueError(f"curve lengths {len(m)} and {len(l)} must be equal and even")
    return m, l


def format_curves(m: PeripheralCurve, l: PeripheralCurve) -> str:
    return (f"meridian: {' '.join(map(str, m.coeffs))}\n"
            f"longitude: {' '.join(map(str, l.coeffs))}\n")


class Slope(NamedTuple):
    """Reduced fraction num/den with den >= 0; ``Slope(1, 0)`` is the infinite slope."""

    num: int
    den: int

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        num, _, den = text.partition("/")
        return cls.of(int(num), int(den or 1))

    @classmethod
    def of(cls, num: int, den: int) -> "Slope":
        if den == 0:
            if num == 0:
                raise ValueError("0/0 is not a slope")
            return cls(1, 0)
        g = gcd(num, den)
        if den < 0:
            g = -g
        return cls(num // g, den // g)


def direction_vector(index: Sequence[int], dprime: Sequence[int]) -> list[int]:
    """Sum over tets of d'_k * rho(I_k), with the sign of d' kept.

    Flipping the sign of d' flips both valuations, so the slope does not
    depend on it, but the valuations themselves do.
    """
    if len(index) != len(dprime):
        raise ValueError("index and degeneration vector lengths differ")
    out: list[int] = []
    for i, d in zip(index, dprime):
        a, b = RHO[i]
        out += [d * a, d * b]
    return out


def wedge(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y) or len(x) % 2:
        raise ValueError(f"wedge needs equal even lengths, got {len(x)} and {len(y)}")
    return sum(x[k] * y[k + 1] - x[k + 1] * y[k] for k in range(0, len(x), 2))


def valuations(m, l, index: Sequence[int], d) -> tuple[int, int]:
    """``(v_mu, v_lambda)`` at the ideal point certified by ``d``."""
    vec = d if isinstance(d, DegenerationVector) else DegenerationVector(tuple(d))
    if not is_ideal_point(vec):
        raise NotIdealPoint(f"degeneration vector {list(vec.d)} is not sign-definite")
    delta = direction_vector(index, vec.primitive)
    mc = m.coeffs if isinstance(m, PeripheralCurve) else m
    lc = l.coeffs if isinstance(l, PeripheralCurve) else l
    return wedge(mc, delta), wedge(lc, delta)


def boundary_slope(v_mu: int, v_lambda: int) -> Slope:
    """``-v_lambda / v_mu`` in lowest terms."""
    if v_mu == 0 and v_lambda == 0:
        raise NoSlope("no slope certified at this ideal point (both valuations are 0)")
    return Slope.of(-v_lambda, v_mu)


def _json_int(v: int):
    return v if -(2**63) <= v < 2**63 else str(v)


@dataclass(frozen=True)
class SlopeResult:
    index: tuple[int, ...]
    d: tuple[int, ...]
    v_mu: int | None = None
    v_lambda: int | None = None
    slope: Slope | None = None
    certified: bool = True
    rank: int | None = field(default=None, compare=False)

    @property
    def ideal_point_count(self) -> int:
        return DegenerationVector(self.d).content

    c = ideal_point_count

    def to_json(self) -> dict:
        rec = {
            "index": [("inf" if v == INF else v) for v in self.index],
            "d": [_json_int(v) for v in self.d],
            "c": _json_int(self.ideal_point_count),
        }
        if self.certified:
            rec.update(v_mu=self.v_mu, v_lambda=self.v_lambda,
                       slope=str(self.slope) if self.slope is not None else None)
        else:
            rec["status"] = "not sign-definite"
        return rec
