"""Game specifications and posterior-mean distributions.

A game is a prior together with an increasing step function for the
receiver: action i is taken when the posterior mean lands in the cell
[gamma_i, gamma_{i+1}), with ties at cutoffs resolved upward (the value
function is upper semicontinuous). The sender's payoff from any signal
depends on the induced distribution over posterior means only, so this
module also defines that distribution type and its feasibility test
(second-order stochastic dominance of integrated cdfs).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .prior import IntervalUnion, Prior, SpecError, interval


@dataclass(frozen=True)
class GameSpec:
    """Prior, cutoffs 0 = gamma_0 < ... < gamma_n = 1, and action values
    0 = v_0 < ... < v_{n-1}.

    Construction is deliberately lenient so that validate() can report
    violations on arbitrary inputs; everything that consumes a spec goes
    through require_valid first.
    """

    prior: Prior
    cutoffs: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cutoffs", tuple(float(c) for c in self.cutoffs))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def n_actions(self) -> int:
        return len(self.values)

    def cell(self, i: int) -> IntervalUnion:
        return interval(self.cutoffs[i], self.cutoffs[i + 1])

    def cells(self) -> list[IntervalUnion]:
        return [self.cell(i) for i in range(self.n_actions)]

    def to_obj(self) -> dict:
        return {
            "prior": self.prior.to_obj(),
            "cutoffs": list(self.cutoffs),
            "values": list(self.values),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "GameSpec":
        if not isinstance(obj, dict):
            raise SpecError("game spec must be a JSON object")
        missing = [k for k in ("prior", "cutoffs", "values") if k not in obj]
        if missing:
            raise SpecError(f"game spec missing fields: {', '.join(missing)}")
        spec = cls(
            Prior.from_obj(obj["prior"]),
            tuple(obj["cutoffs"]),
            tuple(obj["values"]),
        )
        require_valid(spec)
        return spec


def validate(spec: GameSpec) -> list[str]:
    """All violated invariants of a game spec; empty list means valid."""
    problems = []
    cuts, vals = spec.cutoffs, spec.values
    if len(vals) < 2:
        problems.append("need at least two actions")
    if len(cuts) != len(vals) + 1:
        problems.append("cutoff count must be action count plus one")
    if cuts:
        if abs(cuts[0]) > 1e-12 or abs(cuts[-1] - 1.0) > 1e-12:
            problems.append("cutoffs must start at 0 and end at 1")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        problems.append("cutoffs not ascending")
    if vals:
        if abs(vals[0]) > 1e-12:
            problems.append("lowest action value must be 0")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            problems.append("values not increasing")
    return problems


def require_valid(spec: GameSpec) -> GameSpec:
    problems = validate(spec)
    if problems:
        raise SpecError("invalid game spec: " + "; ".join(problems))
    return spec


def value_at(spec: GameSpec, x: float) -> float:
    """Receiver value when the posterior mean equals x.

    At an interior cutoff the receiver takes the higher action, and
    x = 1 selects the top one.
    """
    i = bisect_right(spec.cutoffs, x) - 1
    return spec.values[min(max(i, 0), spec.n_actions - 1)]


def action_at(spec: GameSpec, x: float) -> int:
    i = bisect_right(spec.cutoffs, x) - 1
    return min(max(i, 0), spec.n_actions - 1)


def unraveling_payoff(spec: GameSpec) -> float:
    """Sender payoff under full disclosure of the state."""
    return sum(
        v * spec.prior.mass(spec.cell(i)) for i, v in enumerate(spec.values)
    )


def cheap_talk_payoff(spec: GameSpec) -> float:
    """Sender payoff when no information is transmitted."""
    return value_at(spec, spec.prior.mean)


@dataclass(frozen=True)
class MeanDistribution:
    """Distribution over posterior means: atoms plus an optional region
    of full revelation where it coincides with the prior.

    pool_threshold, when set, upper-bounds every atom location that is
    not pinned to a cutoff; solvers fill it for diagnostics only.
    """

    atoms: tuple[tuple[float, float], ...]
    revealed: Optional[IntervalUnion] = None
    payoff: float = 0.0
    pool_threshold: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "atoms",
            tuple((float(x), float(p)) for x, p in self.atoms),
        )
        if any(p < -1e-12 for _, p in self.atoms):
            raise SpecError("atom probabilities must be nonnegative")

    def total_mass(self, prior: Prior) -> float:
        total = sum(p for _, p in self.atoms)
        if self.revealed is not None:
            total += prior.mass(self.revealed)
        return total

    def mean(self, prior: Prior) -> float:
        total = sum(x * p for x, p in self.atoms)
        if self.revealed is not None:
            for a, b in self.revealed.pieces:
                total += prior.first_moment(b) - prior.first_moment(a)
        return total

    def expected_value(self, spec: GameSpec) -> float:
        total = sum(p * value_at(spec, x) for x, p in self.atoms)
        if self.revealed is not None:
            for i, v in enumerate(spec.values):
                total += v * spec.prior.mass(self.revealed.intersect(spec.cell(i)))
        return total

    def integrated_cdf(self, prior: Prior, x: float) -> float:
        """Integral of this distribution's cdf from 0 to x."""
        total = sum(p * max(0.0, x - loc) for loc, p in self.atoms)
        if self.revealed is not None:
            for a, b in self.revealed.pieces:
                if x <= a:
                    continue
                hi = min(x, b)
                total += (
                    prior.integrated_cdf(hi)
                    - prior.integrated_cdf(a)
                    - prior.cdf(a) * (hi - a)
                )
                if x > b:
                    total += (prior.cdf(b) - prior.cdf(a)) * (x - b)
        return total

    def validate(self, prior: Prior) -> list[str]:
        problems = []
        if abs(self.total_mass(prior) - 1.0) > 1e-9:
            problems.append("probabilities do not sum to one")
        if abs(self.mean(prior) - prior.mean) > 1e-9:
            problems.append("mean does not match the prior mean")
        return problems


def dominance_gap(
    prior: Prior, dist: MeanDistribution, grid: int = 1001
) -> float:
    """Largest violation of integrated-cdf dominance on an even grid.

    Feasible distributions over posterior means are exactly the mean
    preserving contractions of the prior, i.e. those whose integrated
    cdf stays below the prior's with equality at 1. Returns the largest
    positive gap (0 when dominance holds everywhere on the grid).
    """
    worst = 0.0
    for j in range(grid):
        x = j / (grid - 1)
        gap = dist.integrated_cdf(prior, x) - prior.integrated_cdf(x)
        if gap > worst:
            worst = gap
    end_gap = abs(
        dist.integrated_cdf(prior, 1.0) - prior.integrated_cdf(1.0)
    )
    return max(worst, end_gap)


def is_mpc(prior: Prior, dist: MeanDistribution, grid: int = 1001, tol: float = 1e-8) -> bool:
    return dominance_gap(prior, dist, grid) <= tol and not dist.validate(prior)


@dataclass(frozen=True)
class Outcome:
    """A solved outcome: the induced mean distribution and its payoff."""

    distribution: MeanDistribution
    payoff: float

    def validate(self, spec: GameSpec) -> list[str]:
        problems = self.distribution.validate(spec.prior)
        if abs(self.payoff - self.distribution.expected_value(spec)) > 1e-9:
            problems.append("payoff does not match the distribution")
        return problems
