"""Deterministic signal representations and their structure checks.

A deterministic signal assigns each state to one cell per action; the
receiver hears the cell index, so the cell's conditional mean must sit
inside that action's cutoff interval (obedience) and every state must
weakly prefer its own cell to any lower-action cell it could imitate
(incentive compatibility, a coverage condition). Canonical optimal
structures use at most two intervals per cell, with the second interval
arising from one nested pair per bi-pooled segment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .game import GameSpec, MeanDistribution, require_valid
from .prior import IntervalUnion, Prior, SolverError, SpecError, interval

_NULL_MASS = 1e-12


@dataclass(frozen=True)
class DeterministicRepresentation:
    """One interval union per action, lowest action first.

    Skipped actions are represented by a degenerate anchor [g_i, g_i]
    at the action's own lower cutoff (or an empty union).
    """

    cells: tuple[IntervalUnion, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))

    @property
    def n_actions(self) -> int:
        return len(self.cells)

    def to_obj(self) -> dict:
        return {"cells": [c.to_pairs() for c in self.cells]}

    @classmethod
    def from_obj(cls, obj: dict) -> "DeterministicRepresentation":
        if not isinstance(obj, dict) or "cells" not in obj:
            raise SpecError("representation object needs a 'cells' field")
        return cls(tuple(IntervalUnion.from_pairs(c) for c in obj["cells"]))


def validate_representation(
    spec: GameSpec, rep: DeterministicRepresentation, atol: float = 1e-9
) -> list[str]:
    require_valid(spec)
    problems = []
    if rep.n_actions != spec.n_actions:
        problems.append("cell count does not match the action count")
        return problems
    covered = IntervalUnion.empty()
    for cell in rep.cells:
        covered = covered.union(cell)
    gap = interval(0.0, 1.0).subtract(covered)
    if spec.prior.mass(gap) > atol:
        problems.append(f"cells leave mass {spec.prior.mass(gap):.3e} uncovered")
    for i in range(rep.n_actions):
        for j in range(i + 1, rep.n_actions):
            overlap = spec.prior.mass(rep.cells[i].intersect(rep.cells[j]))
            if overlap > atol:
                problems.append(
                    f"cells {i} and {j} overlap with mass {overlap:.3e}"
                )
    return problems


def representation_payoff(spec: GameSpec, rep: DeterministicRepresentation) -> float:
    problems = validate_representation(spec, rep)
    if problems:
        raise SpecError("invalid representation: " + "; ".join(problems))
    return sum(
        v * spec.prior.mass(rep.cells[i]) for i, v in enumerate(spec.values)
    )


def induced_distribution(
    spec: GameSpec, rep: DeterministicRepresentation
) -> MeanDistribution:
    """Atoms at each nonnull cell's conditional mean."""
    atoms = []
    payoff = 0.0
    for i, cell in enumerate(rep.cells):
        m = spec.prior.mass(cell)
        if m <= _NULL_MASS:
            continue
        atoms.append((spec.prior.partial_mean(cell), m))
        payoff += spec.values[i] * m
    return MeanDistribution(tuple(atoms), revealed=None, payoff=payoff)


@dataclass(frozen=True)
class ObedienceRow:
    action: int
    mean: float
    lo: float
    hi: float
    ok: bool


@dataclass(frozen=True)
class ObedienceReport:
    ok: bool
    rows: tuple[ObedienceRow, ...]


def is_obedient(
    spec: GameSpec, rep: DeterministicRepresentation, atol: float = 1e-9
) -> ObedienceReport:
    """Each nonnull cell's conditional mean must lie in its own cutoff
    interval, so the named action is actually the receiver's reply."""
    require_valid(spec)
    rows = []
    for i, cell in enumerate(rep.cells):
        if spec.prior.mass(cell) <= _NULL_MASS:
            continue
        mean = spec.prior.partial_mean(cell)
        lo, hi = spec.cutoffs[i], spec.cutoffs[i + 1]
        rows.append(
            ObedienceRow(i, mean, lo, hi, lo - atol <= mean <= hi + atol)
        )
    return ObedienceReport(all(r.ok for r in rows), tuple(rows))


@dataclass(frozen=True)
class ICReport:
    ok: bool
    action: Optional[int] = None
    uncovered: Optional[IntervalUnion] = None


def is_incentive_compatible(
    spec: GameSpec, rep: DeterministicRepresentation, atol: float = 1e-9
) -> ICReport:
    """Coverage form of incentive compatibility.

    States in the cutoff cell of action i can always exhibit evidence
    of membership in that cell, so they must already be assigned an
    action at least as good: A_i must be covered, up to a null set, by
    the cells of actions i and above. Reports the first failing action
    with the uncovered subinterval.
    """
    require_valid(spec)
    for i in range(spec.n_actions):
        upper = IntervalUnion.empty()
        for j in range(i, spec.n_actions):
            upper = upper.union(rep.cells[j])
        missing = spec.cell(i).subtract(upper)
        if spec.prior.mass(missing) > atol:
            return ICReport(False, i, missing)
    return ICReport(True)


@dataclass(frozen=True)
class NestedPair:
    """A bi-pooled segment: outer region minus an inner interval forms
    the high cell, the inner interval the low one."""

    outer: IntervalUnion
    inner: IntervalUnion
    z_lo: float
    z_hi: float

    @property
    def remainder(self) -> IntervalUnion:
        return self.outer.subtract(self.inner)


def _bisect(f, a: float, b: float, iters: int = 120, tol: float = 1e-15) -> float:
    fa = f(a)
    if fa == 0.0:
        return a
    fb = f(b)
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise SolverError("bisection endpoints have the same sign")
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0 or (b - a) <= tol:
            return m
        if (fm > 0) == (fb > 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _window_mean(prior: Prior, outer: IntervalUnion, lo: float, hi: float, fallback: float) -> float:
    piece = outer.intersect(interval(lo, hi))
    if prior.mass(piece) <= 1e-14:
        return fallback
    return prior.partial_mean(piece)


def nested_interval_rep(
    prior: Prior,
    outer: IntervalUnion,
    z_lo: float,
    z_hi: float,
    *,
    atol: float = 1e-9,
) -> NestedPair:
    """Split outer into an inner window with conditional mean z_lo and a
    remainder with conditional mean z_hi.

    The inner mass is pinned in advance by the barycenter identity
    mass(inner) = mass(outer) * (z_hi - m) / (z_hi - z_lo) with m the
    outer mean, which reduces the problem to a single bisection over the
    window's left endpoint (window width then follows from its mass).
    """
    total = prior.mass(outer)
    if total <= _NULL_MASS:
        raise SpecError("outer region carries no prior mass")
    m = prior.partial_mean(outer)
    lo, hi = outer.lo, outer.hi
    if z_hi - z_lo <= 1e-13:
        if abs(m - z_lo) > atol:
            raise SolverError(
                f"degenerate targets need outer mean {m:.12g} equal to them"
            )
        return NestedPair(outer, outer, z_lo, z_hi)
    if not (lo - atol <= z_lo <= m + atol and m - atol <= z_hi <= hi + atol):
        raise SolverError(
            f"targets ({z_lo}, {z_hi}) incompatible with outer mean {m:.12g}"
        )
    mass_in = total * (z_hi - m) / (z_hi - z_lo)
    mass_in = min(max(mass_in, 0.0), total)
    if mass_in >= total - 1e-14:
        return NestedPair(outer, outer, z_lo, z_hi)
    if mass_in <= 1e-14:
        return NestedPair(outer, IntervalUnion.empty(), z_lo, z_hi)

    def window_hi(p: float) -> float:
        if prior.mass(outer.intersect(interval(p, hi))) <= mass_in:
            return hi
        return _bisect(
            lambda q: prior.mass(outer.intersect(interval(p, q))) - mass_in,
            p,
            hi,
        )

    p_max = _bisect(
        lambda p: prior.mass(outer.intersect(interval(p, hi))) - mass_in, lo, hi
    )

    def residual(p: float) -> float:
        return _window_mean(prior, outer, p, window_hi(p), p) - z_lo

    r_lo, r_hi = residual(lo), residual(p_max)
    if r_lo > atol or r_hi < -atol:
        raise SolverError(
            "no nested pair: the requested means are infeasible for this "
            f"outer region (residuals {r_lo:.3e}, {r_hi:.3e})"
        )
    if r_lo >= 0.0:
        p_star = lo
    elif r_hi <= 0.0:
        p_star = p_max
    else:
        p_star = _bisect(residual, lo, p_max)
    q_star = window_hi(p_star)
    inner = outer.intersect(interval(p_star, q_star))
    pair = NestedPair(outer, inner, z_lo, z_hi)
    rem = pair.remainder
    err_in = abs(prior.partial_mean(inner) - z_lo)
    err_out = (
        abs(prior.partial_mean(rem) - z_hi) if prior.mass(rem) > _NULL_MASS else 0.0
    )
    if err_in > atol or err_out > atol:
        raise SolverError(
            f"nested pair residuals too large ({err_in:.3e}, {err_out:.3e})"
        )
    return pair


def feasible_bipool(
    prior: Prior,
    outer: IntervalUnion,
    z_lo: float,
    z_hi: float,
    *,
    atol: float = 1e-9,
) -> bool:
    """Whether outer can be split into two parts with means z_lo and z_hi.

    Two conditions: the targets must straddle the outer mean inside the
    outer bounds, and the top part left after carving the lowest states
    with mean z_lo must still reach z_hi.
    """
    total = prior.mass(outer)
    if total <= _NULL_MASS:
        return False
    m = prior.partial_mean(outer)
    lo, hi = outer.lo, outer.hi
    if not (lo - atol <= z_lo <= m + atol and m - atol <= z_hi <= hi + atol):
        return False
    if z_hi - z_lo <= 1e-13:
        return True

    def low_mean(y: float) -> float:
        return _window_mean(prior, outer, lo, y, lo)

    if low_mean(lo) - z_lo >= 0.0:
        y = lo
    else:
        y = _bisect(lambda y: low_mean(y) - z_lo, lo, hi)
    top = outer.intersect(interval(y, hi))
    if prior.mass(top) <= _NULL_MASS:
        return z_hi <= low_mean(hi) + atol
    return prior.partial_mean(top) >= z_hi - atol


def is_laminar(rep: DeterministicRepresentation, atol: float = 1e-9) -> bool:
    """Every cell must equal the closure of its convex hull minus the
    hulls of all lower cells; null and degenerate cells pass vacuously."""
    hulls: list[Optional[IntervalUnion]] = []
    for cell in rep.cells:
        hulls.append(cell.hull() if cell.length > atol else None)
    for i, cell in enumerate(rep.cells):
        if hulls[i] is None:
            continue
        expected = hulls[i]
        for j in range(i):
            if hulls[j] is not None:
                expected = expected.subtract(hulls[j])
        mismatch = expected.subtract(cell).length + cell.subtract(expected).length
        if mismatch > atol:
            return False
    return True


@dataclass(frozen=True)
class Prop2Violation:
    kind: str  # "skipped-action" or "nested-pair"
    action: int
    cell: int
    sup: float
    bound: float

    def describe(self) -> str:
        if self.kind == "skipped-action":
            return (
                f"action {self.action} is skipped but cell {self.cell} "
                f"reaches {self.sup:.12g} > {self.bound:.12g}"
            )
        return (
            f"inner cell {self.cell} of the pair around action {self.action} "
            f"reaches {self.sup:.12g} > {self.bound:.12g}"
        )


@dataclass(frozen=True)
class Prop2Report:
    ok: bool
    violations: tuple[Prop2Violation, ...]


def _canonical_pairs(
    spec: GameSpec, rep: DeterministicRepresentation
) -> list[tuple[int, int]]:
    """Nested (inner, outer) index pairs; raises when not canonical."""
    problems = validate_representation(spec, rep)
    if problems:
        raise SpecError("representation not canonical: " + "; ".join(problems))
    if not is_laminar(rep):
        raise SpecError("representation not canonical: cells are not laminar")
    pairs = []
    for k, cell in enumerate(rep.cells):
        chunks = [p for p in cell.pieces if p[1] - p[0] > _NULL_MASS]
        if len(chunks) > 2:
            raise SpecError(
                f"representation not canonical: cell {k} has {len(chunks)} pieces"
            )
        if len(chunks) != 2:
            continue
        hole = interval(chunks[0][1], chunks[1][0])
        fillers = [
            j
            for j, other in enumerate(rep.cells)
            if j != k
            and other.length > _NULL_MASS
            and other.lo >= hole.lo - 1e-9
            and other.hi <= hole.hi + 1e-9
        ]
        if len(fillers) != 1:
            raise SpecError(
                f"representation not canonical: the gap in cell {k} is not "
                f"filled by exactly one other cell"
            )
        j = fillers[0]
        if len([p for p in rep.cells[j].pieces if p[1] - p[0] > _NULL_MASS]) != 1:
            raise SpecError(
                f"representation not canonical: inner cell {j} is not an interval"
            )
        if hole.subtract(rep.cells[j]).length > 1e-9:
            raise SpecError(
                f"representation not canonical: cell {j} does not fill the "
                f"gap in cell {k}"
            )
        if j >= k:
            raise SpecError(
                "representation not canonical: nested inner cell must belong "
                "to a lower action"
            )
        pairs.append((j, k))
    return pairs


def check_prop2(spec: GameSpec, rep: DeterministicRepresentation) -> Prop2Report:
    """Implementability conditions for a canonical representation.

    (i) when an action above the lowest is skipped, no lower cell may
    extend past the skipped action's cutoff; (ii) the inner cell of a
    nested pair may not extend past the outer action's cutoff. Together
    these are equivalent to incentive compatibility for canonical cells.
    """
    pairs = _canonical_pairs(spec, rep)
    masses = [spec.prior.mass(c) for c in rep.cells]
    violations = []
    for i in range(1, spec.n_actions):
        if masses[i] > _NULL_MASS:
            continue
        for j in range(i):
            if masses[j] <= _NULL_MASS:
                continue
            sup = rep.cells[j].hi
            if sup > spec.cutoffs[i] + 1e-9:
                violations.append(
                    Prop2Violation("skipped-action", i, j, sup, spec.cutoffs[i])
                )
    for j, k in pairs:
        sup = rep.cells[j].hi
        if sup > spec.cutoffs[k] + 1e-9:
            violations.append(
                Prop2Violation("nested-pair", k, j, sup, spec.cutoffs[k])
            )
    return Prop2Report(not violations, tuple(violations))
