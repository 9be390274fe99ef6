"""Priors on the unit interval and closed interval unions.

The state is one-dimensional. Everything downstream (action cells,
pooling segments, posterior means) is built from two primitives: a prior
with piecewise linear density on [0, 1], and finite unions of closed
subintervals of [0, 1]. All moments have closed forms per linear piece,
so the only iterative numerics in this module is one bracketed bisection
helper shared by every mean equation in the package.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence


class SpecError(ValueError):
    """Bad input: schema violations, failed preconditions, invalid objects."""


class SolverError(RuntimeError):
    """A numerical routine could not produce a valid answer."""


class ZeroMassError(SpecError):
    """Conditional moment requested on a set of zero prior mass."""


_EDGE_TOL = 1e-12


def _clip01(x: float, tol: float = _EDGE_TOL) -> float:
    if x < -tol or x > 1.0 + tol:
        raise SpecError(f"point {x!r} outside the unit interval")
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of closed intervals inside [0, 1].

    Pieces are kept sorted with disjoint interiors; touching or
    overlapping pieces are merged on construction. Degenerate pieces
    [a, a] are allowed and survive normalization unless swallowed by a
    neighbor.
    """

    pieces: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        cleaned = []
        for lo, hi in self.pieces:
            lo = _clip01(float(lo))
            hi = _clip01(float(hi))
            if hi < lo:
                raise SpecError(f"interval [{lo}, {hi}] is reversed")
            cleaned.append((lo, hi))
        cleaned.sort()
        merged: list[list[float]] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        object.__setattr__(self, "pieces", tuple((a, b) for a, b in merged))

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> "IntervalUnion":
        return cls(tuple(pairs))

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def lo(self) -> float:
        if self.is_empty:
            raise SpecError("empty interval union has no bounds")
        return self.pieces[0][0]

    @property
    def hi(self) -> float:
        if self.is_empty:
            raise SpecError("empty interval union has no bounds")
        return self.pieces[-1][1]

    @property
    def length(self) -> float:
        return sum(b - a for a, b in self.pieces)

    def hull(self) -> "IntervalUnion":
        if self.is_empty:
            return self
        return IntervalUnion(((self.lo, self.hi),))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(a - tol <= x <= b + tol for a, b in self.pieces)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self.pieces + other.pieces)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a, b in self.pieces:
            for c, d in other.pieces:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    out.append((lo, hi))
        return IntervalUnion(tuple(out))

    def subtract(self, other: "IntervalUnion") -> "IntervalUnion":
        """Closed remainder of self minus other.

        The result is the closure of the set difference, so removing a
        degenerate piece or an interior interval leaves closed pieces
        that share endpoints with the removed set. All downstream
        comparisons are up to null sets, which this convention respects.
        """
        out = []
        for a, b in self.pieces:
            cursor = a
            for c, d in other.pieces:
                if d <= cursor or c >= b:
                    continue
                if c > cursor:
                    out.append((cursor, c))
                cursor = max(cursor, d)
                if cursor >= b:
                    break
            if cursor < b or (cursor == b and not other.contains(b)):
                if cursor <= b:
                    out.append((cursor, b))
        # Drop zero-length slivers created purely by closed-endpoint
        # bookkeeping, except when self itself was degenerate there.
        keep = []
        for lo, hi in out:
            if hi > lo or any(a == b == lo for a, b in self.pieces):
                keep.append((lo, hi))
        return IntervalUnion(tuple(keep))

    def to_pairs(self) -> list[list[float]]:
        return [[a, b] for a, b in self.pieces]

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "IntervalUnion":
        return cls(tuple((float(p[0]), float(p[1])) for p in pairs))


def interval(lo: float, hi: float) -> IntervalUnion:
    return IntervalUnion(((lo, hi),))


@dataclass(frozen=True)
class Prior:
    """Piecewise linear density on [0, 1], normalized to integrate to one.

    kind is "uniform" or "plinear"; the uniform prior is stored as the
    constant-density special case so every moment shares one code path.
    """

    kind: str
    knots: tuple[float, ...]
    density: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "plinear"):
            raise SpecError(f"unknown prior kind {self.kind!r}")
        knots = tuple(float(k) for k in self.knots)
        dens = tuple(float(d) for d in self.density)
        if len(knots) != len(dens) or len(knots) < 2:
            raise SpecError("knots and density must align with length >= 2")
        if abs(knots[0]) > _EDGE_TOL or abs(knots[-1] - 1.0) > _EDGE_TOL:
            raise SpecError("knots must span [0, 1]")
        knots = (0.0,) + knots[1:-1] + (1.0,)
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise SpecError("knots must be strictly increasing")
        if any(d < 0.0 for d in dens):
            raise SpecError("density values must be nonnegative")
        total = sum(
            (b - a) * (da + db) / 2.0
            for a, b, da, db in zip(knots, knots[1:], dens, dens[1:])
        )
        if total <= 0.0:
            raise SpecError("density integrates to zero")
        dens = tuple(d / total for d in dens)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "density", dens)

    @cached_property
    def _cums(self) -> tuple[tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
        """Cumulative (cdf, first moment, integrated cdf) at the knots."""
        cf = [0.0]
        cm = [0.0]
        ct = [0.0]
        for a, b, da, db in zip(
            self.knots, self.knots[1:], self.density, self.density[1:]
        ):
            length = b - a
            slope = (db - da) / length
            cf.append(cf[-1] + length * (da + db) / 2.0)
            cm.append(
                cm[-1]
                + da * (a * length + length**2 / 2.0)
                + slope * (a * length**2 / 2.0 + length**3 / 3.0)
            )
            ct.append(
                ct[-1]
                + cf[-2] * length
                + da * length**2 / 2.0
                + slope * length**3 / 6.0
            )
        return tuple(cf), tuple(cm), tuple(ct)

    def _piece(self, x: float) -> int:
        i = bisect_right(self.knots, x) - 1
        return min(max(i, 0), len(self.knots) - 2)

    def pdf(self, x: float) -> float:
        x = _clip01(x)
        i = self._piece(x)
        a, b = self.knots[i], self.knots[i + 1]
        return self.density[i] + (self.density[i + 1] - self.density[i]) * (
            (x - a) / (b - a)
        )

    def cdf(self, x: float) -> float:
        x = _clip01(x)
        i = self._piece(x)
        a, b = self.knots[i], self.knots[i + 1]
        s = x - a
        slope = (self.density[i + 1] - self.density[i]) / (b - a)
        return self._cums[0][i] + self.density[i] * s + slope * s * s / 2.0

    def first_moment(self, x: float) -> float:
        """Integral of t * f(t) from 0 to x."""
        x = _clip01(x)
        i = self._piece(x)
        a, b = self.knots[i], self.knots[i + 1]
        s = x - a
        slope = (self.density[i + 1] - self.density[i]) / (b - a)
        return (
            self._cums[1][i]
            + self.density[i] * (a * s + s * s / 2.0)
            + slope * (a * s * s / 2.0 + s**3 / 3.0)
        )

    def integrated_cdf(self, x: float) -> float:
        """Integral of the cdf from 0 to x; convex and increasing."""
        x = _clip01(x)
        i = self._piece(x)
        a, b = self.knots[i], self.knots[i + 1]
        s = x - a
        slope = (self.density[i + 1] - self.density[i]) / (b - a)
        return (
            self._cums[2][i]
            + self._cums[0][i] * s
            + self.density[i] * s * s / 2.0
            + slope * s**3 / 6.0
        )

    @cached_property
    def mean(self) -> float:
        return self._cums[1][-1]

    def mass(self, region: IntervalUnion) -> float:
        return sum(self.cdf(b) - self.cdf(a) for a, b in region.pieces)

    def partial_mean(self, region: IntervalUnion) -> float:
        """Conditional expectation of the state given the region."""
        m = self.mass(region)
        if m <= 1e-14:
            raise ZeroMassError(f"region {region.pieces!r} carries no prior mass")
        num = sum(self.first_moment(b) - self.first_moment(a) for a, b in region.pieces)
        return num / m

    def to_obj(self) -> dict:
        if self.kind == "uniform":
            return {"kind": "uniform"}
        return {
            "kind": "plinear",
            "knots": list(self.knots),
            "density": list(self.density),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Prior":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SpecError("prior object must be a dict with a 'kind' field")
        kind = obj["kind"]
        if kind == "uniform":
            return uniform_prior()
        if kind == "plinear":
            try:
                return cls("plinear", tuple(obj["knots"]), tuple(obj["density"]))
            except KeyError as exc:
                raise SpecError(f"plinear prior missing field {exc}") from exc
        raise SpecError(f"unknown prior kind {kind!r}")


def uniform_prior() -> Prior:
    return Prior("uniform", (0.0, 1.0), (1.0, 1.0))


def plinear_prior(knots: Sequence[float], density: Sequence[float]) -> Prior:
    return Prior("plinear", tuple(knots), tuple(density))


def solve_mean_equation(
    prior: Prior,
    family: Callable[[float], IntervalUnion],
    target: float,
    bracket: tuple[float, float],
    *,
    max_iter: int = 200,
    residual_tol: float = 1e-10,
    param_tol: float = 1e-12,
) -> float:
    """Solve partial_mean(family(t)) = target for t by bracketed bisection.

    The residual must be weakly monotone across the bracket; a coarse
    pre-scan rejects non-monotone families and endpoints with the same
    strict sign raise a no-bracket error.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not a < b:
        # A collapsed bracket is fine when it already solves the equation.
        if abs(prior.partial_mean(family(a)) - target) <= residual_tol:
            return a
        raise SolverError(f"degenerate bracket ({a}, {b})")

    def res(t: float) -> float:
        return prior.partial_mean(family(t)) - target

    ra, rb = res(a), res(b)
    if abs(ra) <= residual_tol:
        return a
    if abs(rb) <= residual_tol:
        return b
    if (ra > 0) == (rb > 0):
        raise SolverError(
            f"no bracket: residual has the same sign at both endpoints "
            f"({ra:.3e} and {rb:.3e})"
        )
    direction = 1.0 if rb > ra else -1.0
    scan = [a + (b - a) * j / 16.0 for j in range(17)]
    values = [ra] + [res(t) for t in scan[1:-1]] + [rb]
    wiggle = 1e-9 * max(1.0, abs(ra), abs(rb))
    for lo, hi in zip(values, values[1:]):
        if direction * (hi - lo) < -wiggle:
            raise SolverError("mean equation is not monotone on the bracket")

    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        rm = res(mid)
        if abs(rm) <= residual_tol or (b - a) <= param_tol:
            return mid
        if (rm > 0) == (rb > 0):
            b, rb = mid, rm
        else:
            a, ra = mid, rm
    return 0.5 * (a + b)


def solve_h(prior: Prior, gamma_lo: float, gamma_hi: float) -> float:
    """Lower endpoint h with E[state | state in [h, gamma_hi]] = gamma_lo.

    The conditional mean of [h, gamma_hi] increases in h, starting from
    the mean of [0, gamma_hi]. When that starting value already exceeds
    gamma_lo no interior root exists and the function returns 0.
    """
    if not (0.0 <= gamma_lo < gamma_hi <= 1.0):
        raise SpecError(
            f"need 0 <= gamma_lo < gamma_hi <= 1, got ({gamma_lo}, {gamma_hi})"
        )
    if prior.partial_mean(interval(0.0, gamma_hi)) > gamma_lo:
        return 0.0
    return solve_mean_equation(
        prior,
        lambda h: interval(h, gamma_hi),
        gamma_lo,
        (0.0, gamma_lo),
    )


def simpson_integral(f: Callable[[float], float], a: float, b: float, n: int = 400) -> float:
    """Composite Simpson rule, used by tests as an independent oracle."""
    if n % 2:
        n += 1
    h = (b - a) / n
    total = f(a) + f(b)
    for k in range(1, n):
        total += f(a + k * h) * (4 if k % 2 else 2)
    return total * h / 3.0
