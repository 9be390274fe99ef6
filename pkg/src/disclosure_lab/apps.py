"""Applications: quality disclosure by a seller, and amendment voting.

Both map onto the mean-based disclosure game. The seller's buyer picks
a quantity given the posterior mean quality, which makes the indifference
points p / (U(q) - U(q-1)) the cutoffs. The voting body reduces to its
median voter, whose two indifference cutoffs define a three-action game.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .equilibrium import preferred_ore
from .game import GameSpec, validate
from .prior import Prior, SpecError, uniform_prior


@dataclass(frozen=True)
class SellerModel:
    """Seller of a good of unknown quality, sold at a posted price.

    utility is either {"kind": "crra", "sigma": s} for U(q) = q^(1-s)
    or {"kind": "table", "values": [U(0), ..., U(Q)]} with U(0) = 0,
    strictly increasing and strictly concave.
    """

    utility: dict
    price: float
    cost: float = 0.0
    prior: Prior = field(default_factory=uniform_prior)

    def utility_values(self, q_max: int) -> list[float]:
        kind = self.utility.get("kind")
        if kind == "crra":
            sigma = float(self.utility["sigma"])
            if sigma <= 0.0:
                raise SpecError("crra sigma must be positive")
            return [float(q) ** (1.0 - sigma) if q else 0.0 for q in range(q_max + 1)]
        if kind == "table":
            vals = [float(v) for v in self.utility["values"]]
            if abs(vals[0]) > 1e-12:
                raise SpecError("utility table must start at zero")
            return vals[: q_max + 1]
        raise SpecError(f"unknown utility kind {kind!r}")


def _marginal_utilities(model: SellerModel) -> list[float]:
    """U(q) - U(q-1) for q = 1, 2, ... while positive and decreasing."""
    kind = model.utility.get("kind")
    if kind == "table":
        vals = model.utility_values(len(model.utility["values"]))
        gaps = [b - a for a, b in zip(vals, vals[1:])]
    elif kind == "crra":
        # expand the parametric utility until the marginal drops below
        # the price, which bounds the relevant quantity range
        sigma = float(model.utility["sigma"])
        if sigma <= 0.0:
            raise SpecError("crra sigma must be positive")
        gaps = []
        for q in range(1, 10_001):
            prev = float(q - 1) ** (1.0 - sigma) if q > 1 else 0.0
            gap = float(q) ** (1.0 - sigma) - prev
            gaps.append(gap)
            if gap < model.price:
                break
        else:
            raise SpecError("price too low: quantity range does not close")
    else:
        raise SpecError(f"unknown utility kind {kind!r}")
    if any(g <= 0.0 for g in gaps):
        raise SpecError("utility must be strictly increasing")
    if any(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:])):
        raise SpecError("utility must be strictly concave")
    return gaps


def seller_to_game(model: SellerModel) -> GameSpec:
    """Three-or-more-action game induced by the buyer's quantity choice.

    The buyer purchases q units when the expected quality passes
    price / marginal utility of the q-th unit, so those ratios are the
    interior cutoffs and the seller's values grow by price minus cost
    per unit sold.
    """
    if model.price <= 0.0:
        raise SpecError("price must be positive")
    if not 0.0 <= model.cost < model.price:
        raise SpecError("cost must lie in [0, price)")
    gaps = _marginal_utilities(model)
    thetas = [model.price / g for g in gaps]
    n = sum(1 for t in thetas if t < 1.0)
    if n == 0:
        raise SpecError("no unit is ever worth buying at this price")
    kept = thetas[:n]
    if kept[-1] >= 1.0 - 1e-12:
        warnings.warn(
            "top quantity cutoff reaches the state bound; truncating",
            stacklevel=2,
        )
        kept = [t for t in kept if t < 1.0 - 1e-12]
        n = len(kept)
    if any(b <= a + 1e-15 for a, b in zip(kept, kept[1:])):
        raise SpecError("quantity cutoffs must be strictly increasing")
    margin = model.price - model.cost
    cutoffs = (0.0, *kept, 1.0)
    values = tuple(margin * q for q in range(n + 1))
    spec = GameSpec(model.prior, cutoffs, values)
    problems = validate(spec)
    if problems:
        raise SpecError("; ".join(problems))
    return spec


@dataclass(frozen=True)
class PrudenceReport:
    """Both sufficient-condition readings for the seller, side by side.

    ok is the stated hypothesis: prudence more than twice absolute risk
    aversion on the quantity range, plus a non-decreasing density.
    gap_chain_ok is the literal cutoff-gap evaluation on the generated
    game, which includes the first gap and can disagree.
    """

    ok: bool
    prudent: bool
    density_ok: bool
    gap_chain_ok: bool

    def __bool__(self) -> bool:
        return self.ok


def _crra_prudence(sigma: float) -> bool:
    # A(x) = sigma / x and P(x) = (1 + sigma) / x, checked on a grid for
    # uniformity with the tabulated route
    for k in range(101):
        x = 1.0 + 3.0 * k / 100
        if (1.0 + sigma) / x <= 2.0 * sigma / x:
            return False
    return True


def _table_prudence(values: Sequence[float]) -> bool:
    if len(values) < 4:
        raise SpecError("utility table too short for curvature estimates")
    v = [float(x) for x in values]
    q_max = len(v) - 1
    third = [v[k + 3] - 3 * v[k + 2] + 3 * v[k + 1] - v[k] for k in range(q_max - 2)]
    for q in range(1, q_max):
        d1 = 0.5 * (v[q + 1] - v[q - 1])
        d2 = v[q + 1] - 2.0 * v[q] + v[q - 1]
        d3 = third[min(max(q - 1, 0), len(third) - 1)]
        if d1 <= 0 or d2 >= 0:
            return False
        a = -d2 / d1
        p = -d3 / d2
        if p <= 2.0 * a:
            return False
    return True


def check_prudence(model: SellerModel) -> PrudenceReport:
    """Does the seller's problem satisfy the commitment-equivalence test?

    Returns both the prudence-vs-risk-aversion hypothesis and the
    literal cutoff-gap chain on the generated game; they can disagree
    and neither is silently reconciled.
    """
    kind = model.utility.get("kind")
    if kind == "crra":
        prudent = _crra_prudence(float(model.utility["sigma"]))
    elif kind == "table":
        prudent = _table_prudence(model.utility["values"])
    else:
        raise SpecError(f"unknown utility kind {kind!r}")
    dens = model.prior.density
    density_ok = all(b >= a - 1e-12 for a, b in zip(dens, dens[1:]))
    try:
        spec = seller_to_game(model)
    except SpecError:
        gap_chain_ok = False
    else:
        gaps = [b - a for a, b in zip(spec.cutoffs, spec.cutoffs[1:])]
        gap_chain_ok = all(b < a - 1e-12 for a, b in zip(gaps, gaps[1:]))
    return PrudenceReport(
        ok=prudent and density_ok,
        prudent=prudent,
        density_ok=density_ok,
        gap_chain_ok=gap_chain_ok,
    )


@dataclass(frozen=True)
class Voter:
    alpha_ab: float
    alpha_b: float
    beta_ab: float
    beta_b: float

    @property
    def gamma1(self) -> float:
        return -self.alpha_ab / self.beta_ab

    @property
    def gamma2(self) -> float:
        return (self.alpha_ab - self.alpha_b) / (self.beta_b - self.beta_ab)


@dataclass(frozen=True)
class VotingModel:
    """Committee voting over a bill and its amended version, where
    rejecting both is the default outcome."""

    voters: tuple[Voter, ...]
    v_ab: float
    v_b: float
    prior: Prior = field(default_factory=uniform_prior)

    def problems(self) -> list[str]:
        out = []
        if len(self.voters) % 2 == 0 or not self.voters:
            out.append("voter count must be odd")
        if not self.v_b > self.v_ab > 0.0:
            out.append("expert values must satisfy v_b > v_ab > 0")
        for j, v in enumerate(self.voters):
            if not v.beta_b > v.beta_ab > 0.0:
                out.append(f"voter {j}: slopes must satisfy beta_b > beta_ab > 0")
                continue
            if not 0.0 > v.alpha_ab > v.alpha_b:
                out.append(f"voter {j}: intercepts must satisfy 0 > alpha_ab > alpha_b")
                continue
            if not 0.0 < v.gamma1 < v.gamma2 < 1.0:
                out.append(f"voter {j}: cutoffs fall outside (0, 1)")
        return out


def _median_voter(model: VotingModel) -> int:
    n = len(model.voters)
    g1s = sorted(v.gamma1 for v in model.voters)
    g2s = sorted(v.gamma2 for v in model.voters)
    med1, med2 = g1s[n // 2], g2s[n // 2]
    for j, v in enumerate(model.voters):
        if abs(v.gamma1 - med1) <= 1e-12 and abs(v.gamma2 - med2) <= 1e-12:
            return j
    raise SpecError(
        "no single voter is the median at both cutoffs; the ordering "
        "assumption fails for this profile"
    )


def voting_to_game(model: VotingModel) -> tuple[GameSpec, int]:
    """Game faced by the expert, and the index of the decisive voter."""
    problems = model.problems()
    if problems:
        raise SpecError("; ".join(problems))
    m = _median_voter(model)
    voter = model.voters[m]
    spec = GameSpec(
        model.prior,
        (0.0, voter.gamma1, voter.gamma2, 1.0),
        (0.0, model.v_ab, model.v_b),
    )
    bad = validate(spec)
    if bad:
        raise SpecError("; ".join(bad))
    return spec, m


@dataclass(frozen=True)
class SweepRow:
    parameter: float
    gamma2_m: float
    payoff: float
    implementable: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    payoff_decrease: bool


def voting_comparative_statics(
    model: VotingModel,
    deltas: Sequence[float],
    parameter: str = "beta_b",
) -> SweepResult:
    """Preferred-equilibrium payoff along a shift of one voter parameter.

    Each delta is added to the named field of every voter. The decrease
    flag records whether the payoff strictly falls anywhere along an
    increasing sweep, the possibility the voting application is about.
    """
    if parameter not in ("alpha_ab", "alpha_b", "beta_ab", "beta_b"):
        raise SpecError(f"unknown sweep parameter {parameter!r}")
    rows = []
    for d in deltas:
        voters = tuple(
            Voter(
                **{
                    name: getattr(v, name) + (d if name == parameter else 0.0)
                    for name in ("alpha_ab", "alpha_b", "beta_ab", "beta_b")
                }
            )
            for v in model.voters
        )
        variant = VotingModel(voters, model.v_ab, model.v_b, model.prior)
        spec, m = voting_to_game(variant)
        ore = preferred_ore(spec)
        rows.append(
            SweepRow(
                parameter=float(d),
                gamma2_m=variant.voters[m].gamma2,
                payoff=ore.payoff,
                implementable=ore.coincides_with_commitment,
            )
        )
    decrease = any(
        b.payoff < a.payoff - 1e-12 and b.parameter > a.parameter
        for a, b in zip(rows, rows[1:])
    )
    return SweepResult(tuple(rows), decrease)
