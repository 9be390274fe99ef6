"""Equilibrium analysis of the disclosure game.

Decides whether the commitment outcome survives as an equilibrium
outcome, evaluates sufficient conditions on primitives, solves the
sender's preferred equilibrium for small games, and constructs an
equilibrium at any payoff between unraveling and the preferred one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .design import BiPoolingSolution, commitment_solution
from .game import GameSpec, require_valid, unraveling_payoff
from .prior import IntervalUnion, SolverError, SpecError, interval
from .representation import (
    DeterministicRepresentation,
    ICReport,
    ObedienceReport,
    Prop2Report,
    _bisect,
    check_prop2,
    is_incentive_compatible,
    is_laminar,
    is_obedient,
    representation_payoff,
)
from .prior import solve_h


@dataclass(frozen=True)
class ImplementabilityReport:
    implementable: bool
    canonical: DeterministicRepresentation
    violations: tuple
    commitment_payoff: float


def implementable(spec: GameSpec) -> ImplementabilityReport:
    """Whether the commitment outcome is an equilibrium outcome.

    Solves the commitment problem and checks the structural incentive
    conditions on its canonical representation.
"""
    require_valid(spec)
    sol = commitment_solution(spec)
    report: Prop2Report = check_prop2(spec, sol.canonical)
    return ImplementabilityReport(
        implementable=report.ok,
        canonical=sol.canonical,
        violations=report.violations,
        commitment_payoff=sol.payoff,
    )


def check_nam(spec: GameSpec) -> list[bool]:
    """Per-cutoff sufficient condition: no action is pooled away.

    For each interior comparison the marginal value of reaching the next
    action must beat the value lost below, with the reach measured by
    the worst pooling window. All-true implies the commitment outcome is
    implementable. Vacuously empty for two actions.
    """
    require_valid(spec)
    prior = spec.prior
    out = []
    for i in range(1, spec.n_actions - 1):
        g_prev, g_i, g_next = (
            spec.cutoffs[i - 1],
            spec.cutoffs[i],
            spec.cutoffs[i + 1],
        )
        v_prev, v_i, v_next = (
            spec.values[i - 1],
            spec.values[i],
            spec.values[i + 1],
        )
        h = solve_h(prior, g_i, g_next)
        denom = min(g_i - g_prev, g_i - h)
        if denom <= 0.0 or g_next - g_i <= 0.0:
            out.append(False)
            continue
        lhs = (v_next - v_i) / (g_next - g_i)
        rhs = (v_i - v_prev) / denom
        out.append(lhs > rhs)
    return out


def _density_nondecreasing(spec: GameSpec) -> bool:
    dens = spec.prior.density
    return all(b >= a - 1e-12 for a, b in zip(dens, dens[1:]))


def check_cni(spec: GameSpec) -> bool:
    """Increasing density with concentrating cutoffs and spreading values.

    Literal evaluation: the value-gap chain must be weakly increasing
    with at least one strict step, and the cutoff-gap chain weakly
    decreasing with at least one strict step; an empty chain passes.
    """
    require_valid(spec)
    if not _density_nondecreasing(spec):
        return False
    vals, cuts = spec.values, spec.cutoffs
    v_gaps = [b - a for a, b in zip(vals, vals[1:])]
    c_gaps = [b - a for a, b in zip(cuts, cuts[1:])]
    v_ok = all(b >= a - 1e-12 for a, b in zip(v_gaps, v_gaps[1:]))
    v_strict = any(b > a + 1e-12 for a, b in zip(v_gaps, v_gaps[1:]))
    c_ok = all(b <= a + 1e-12 for a, b in zip(c_gaps, c_gaps[1:]))
    c_strict = any(b < a - 1e-12 for a, b in zip(c_gaps, c_gaps[1:]))
    if len(v_gaps) > 1 and not (v_ok and v_strict):
        return False
    if len(c_gaps) > 1 and not (c_ok and c_strict):
        return False
    return True


def check_c3i(spec: GameSpec) -> bool:
    """Three-action shortcut: increasing density and v_2 > 2 v_1."""
    require_valid(spec)
    if spec.n_actions != 3:
        raise SpecError("check_c3i applies to three-action games only")
    return _density_nondecreasing(spec) and spec.values[2] > 2.0 * spec.values[1]


@dataclass(frozen=True)
class OREAudit:
    ok: bool
    obedience: ObedienceReport
    ic: ICReport
    payoff: float


def verify_ore(spec: GameSpec, rep: DeterministicRepresentation) -> OREAudit:
    """A representation backs an equilibrium iff it is obedient and
    incentive compatible; returns the full diagnostics either way."""
    require_valid(spec)
    obed = is_obedient(spec, rep)
    ic = is_incentive_compatible(spec, rep)
    payoff = representation_payoff(spec, rep)
    return OREAudit(obed.ok and ic.ok, obed, ic, payoff)


@dataclass(frozen=True)
class OREResult:
    rep: DeterministicRepresentation
    payoff: float
    coincides_with_commitment: bool


def _anchor(spec: GameSpec, i: int) -> IntervalUnion:
    return interval(spec.cutoffs[i], spec.cutoffs[i])


def _preferred_candidates(spec: GameSpec):
    """The two boundary families for a non-implementable three-action
    game: the interior one with a low revealed-as-pool cell [0, y], and
    the corner one with that cell empty."""
    prior = spec.prior
    g1, g2 = spec.cutoffs[1], spec.cutoffs[2]

    # interior family: B_1 = [h, g2] pinned to mean g1, top cell mean g2
    h = solve_h(prior, g1, g2)
    fam = lambda y: IntervalUnion(((y, h), (g2, 1.0)))
    if prior.mass(fam(0.0)) > 1e-13:
        r0 = prior.partial_mean(fam(0.0)) - g2
        if r0 <= 1e-13:
            if r0 >= 0.0:
                y = 0.0
            else:
                y = _bisect(lambda t: prior.partial_mean(fam(t)) - g2, 0.0, h)
            if h - y > 1e-12:
                top = IntervalUnion(((y, h), (g2, 1.0)))
            else:
                top = interval(g2, 1.0)
            cells = (
                interval(0.0, y) if y > 1e-12 else _anchor(spec, 0),
                interval(h, g2),
                top,
            )
            yield DeterministicRepresentation(cells)

    # corner family: no low cell, top cell [0, h'] + [g2, 1] at mean g2
    def corner_res(t: float) -> float:
        return prior.partial_mean(IntervalUnion(((0.0, t), (g2, 1.0)))) - g2

    if corner_res(0.0) > 0.0 and corner_res(g2) < 0.0:
        h2 = _bisect(corner_res, 0.0, g2)
        cells = (
            _anchor(spec, 0),
            interval(h2, g2),
            IntervalUnion(((0.0, h2), (g2, 1.0))),
        )
        yield DeterministicRepresentation(cells)


def preferred_ore(spec: GameSpec) -> OREResult:
    """The sender's best equilibrium outcome.

    When the commitment outcome is implementable this is just its
    canonical representation. Otherwise, for three actions, the top
    cell is pooled to exactly the upper cutoff and the best feasible
    variant of that family wins.
    """
    require_valid(spec)
    if spec.n_actions > 3:
        raise SpecError(
            "preferred equilibrium search supports up to three actions; "
            "use verify_ore to audit an externally supplied candidate"
        )
    report = implementable(spec)
    if report.implementable:
        return OREResult(report.canonical, report.commitment_payoff, True)
    best: Optional[tuple[float, DeterministicRepresentation]] = None
    for rep in _preferred_candidates(spec):
        audit = verify_ore(spec, rep)
        if not audit.ok:
            continue
        if best is None or audit.payoff > best[0] + 1e-12:
            best = (audit.payoff, rep)
    if best is None:
        raise SolverError("no obedient incentive-compatible candidate found")
    return OREResult(best[1], best[0], False)


def payoff_bounds(spec: GameSpec) -> tuple[float, float]:
    """Range of equilibrium payoffs: unraveling up to the preferred one."""
    return unraveling_payoff(spec), preferred_ore(spec).payoff


def sweep_representation(
    spec: GameSpec, base: DeterministicRepresentation, z: float
) -> DeterministicRepresentation:
    """Reveal the part of the state space below z, keep the rest of the
    base equilibrium; continuous in z and an equilibrium at every z."""
    low = interval(0.0, z)
    cells = []
    for i, cell in enumerate(base.cells):
        kept = cell.subtract(low)
        gained = spec.cell(i).intersect(low)
        merged = kept.union(gained)
        if merged.is_empty:
            merged = _anchor(spec, i)
        cells.append(merged)
    return DeterministicRepresentation(tuple(cells))


def ore_at_payoff(
    spec: GameSpec,
    target: float,
    preferred: Optional[DeterministicRepresentation] = None,
) -> DeterministicRepresentation:
    """An equilibrium representation with the given sender payoff.

    Sweeps a revelation threshold from the preferred equilibrium (no
    extra revelation) to full disclosure, then bisects the continuous
    payoff path inside the bracketing step.
    """
    require_valid(spec)
    if preferred is None:
        base = preferred_ore(spec).rep
    else:
        audit = verify_ore(spec, preferred)
        if not audit.ok:
            raise SpecError("supplied preferred representation is not an ORE")
        base = preferred
    r_u = unraveling_payoff(spec)
    r_s = representation_payoff(spec, base)
    if target < r_u - 1e-9 or target > r_s + 1e-9:
        raise SpecError(
            f"target {target:.12g} out of range [{r_u:.12g}, {r_s:.12g}]"
        )
    if abs(target - r_s) <= 1e-9:
        return base

    def payoff_at(z: float) -> float:
        return representation_payoff(spec, sweep_representation(spec, base, z))

    z_hi = spec.cutoffs[spec.n_actions - 1]
    step = 1e-3
    z_prev, p_prev = 0.0, r_s
    bracket = None
    z = step
    while z < z_hi + step:
        z_cur = min(z, z_hi)
        p_cur = payoff_at(z_cur)
        if (p_prev - target) * (p_cur - target) <= 0.0:
            bracket = (z_prev, z_cur, p_prev, p_cur)
            break
        z_prev, p_prev = z_cur, p_cur
        z += step
    if bracket is None:
        # continuity guarantees a crossing; the endpoint is the last resort
        bracket = (z_hi, z_hi, payoff_at(z_hi), payoff_at(z_hi))
    lo, hi, p_lo, p_hi = bracket
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        p_mid = payoff_at(mid)
        if (p_lo - target) * (p_mid - target) <= 0.0:
            hi, p_hi = mid, p_mid
        else:
            lo, p_lo = mid, p_mid
    out = sweep_representation(spec, base, 0.5 * (lo + hi))
    got = representation_payoff(spec, out)
    if abs(got - target) > 1e-7:
        raise SolverError(
            f"payoff sweep landed at {got:.12g}, target {target:.12g}"
        )
    return out
