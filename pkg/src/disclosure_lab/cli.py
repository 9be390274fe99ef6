"""Command line front end for the disclosure game solvers.

Each verb maps onto one library operation. Results go to stdout as
JSON with a stable key order and every float printed at 12 significant
digits, so identical invocations produce byte-identical output. The
--csv flag additionally writes plot data (value function steps,
representation intervals, payoff sweep curves) into a directory.

Exit codes: 0 on success (a false "implementable" verdict is still
success), 2 when the input fails to parse or violates its schema, and
3 when a solver gives up.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from typing import Optional

from .apps import (
    SellerModel,
    SweepResult,
    Voter,
    VotingModel,
    check_prudence,
    seller_to_game,
    voting_comparative_statics,
    voting_to_game,
)
from .design import canonicalize, commitment_solution, solve_lp
from .equilibrium import (
    check_c3i,
    check_cni,
    check_nam,
    implementable,
    ore_at_payoff,
    preferred_ore,
    sweep_representation,
    verify_ore,
)
from .game import (
    GameSpec,
    MeanDistribution,
    cheap_talk_payoff,
    dominance_gap,
    unraveling_payoff,
)
from .prior import Prior, SolverError, SpecError
from .representation import DeterministicRepresentation, representation_payoff

log = logging.getLogger("disclosure_lab.cli")

_LOG_LEVELS = {
    "quiet": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_GAME_VERBS = (
    "solve",
    "implementable",
    "suffcond",
    "preferred",
    "payoff-set",
    "ore-at",
    "baselines",
)


def _fmt(x: float) -> str:
    """Floats at 12 significant digits; below solver tolerance and
    above round-trip noise."""
    out = format(float(x), ".12g")
    return "0" if out == "-0" else out


def _dump(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, fixed float format."""
    pad = "  " * indent
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_dump(v, indent + 1)}"
            for k, v in obj.items()
        )
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (bool, int, float, str, type(None))) for v in seq):
            return "[" + ", ".join(_dump(v) for v in seq) + "]"
        body = ",\n".join(f"{pad}  {_dump(v, indent + 1)}" for v in seq)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _load_json(arg: str):
    """Accept either a path to a JSON file or the JSON text itself."""
    text = arg.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as err:
            raise SpecError(f"inline JSON does not parse: {err}") from err
    if not os.path.exists(arg):
        raise SpecError(f"input file not found: {arg}")
    with open(arg, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as err:
            raise SpecError(f"{arg} does not parse as JSON: {err}") from err


def _load_spec(arg: str) -> GameSpec:
    try:
        return GameSpec.from_obj(_load_json(arg))
    except SpecError:
        raise
    except (TypeError, ValueError) as err:
        raise SpecError(f"malformed game spec: {err}") from err


def _load_seller(obj) -> SellerModel:
    if not isinstance(obj, dict):
        raise SpecError("seller model must be a JSON object")
    missing = [k for k in ("utility", "price") if k not in obj]
    if missing:
        raise SpecError(f"seller model missing fields: {', '.join(missing)}")
    try:
        prior = Prior.from_obj(obj["prior"]) if "prior" in obj else None
        kwargs = {"prior": prior} if prior is not None else {}
        return SellerModel(
            obj["utility"],
            price=float(obj["price"]),
            cost=float(obj.get("cost", 0.0)),
            **kwargs,
        )
    except SpecError:
        raise
    except (TypeError, ValueError) as err:
        raise SpecError(f"malformed seller model: {err}") from err


def _load_voting(obj) -> VotingModel:
    if not isinstance(obj, dict):
        raise SpecError("voting model must be a JSON object")
    missing = [k for k in ("voters", "v_ab", "v_b") if k not in obj]
    if missing:
        raise SpecError(f"voting model missing fields: {', '.join(missing)}")
    try:
        voters = tuple(
            Voter(
                alpha_ab=float(v["alpha_ab"]),
                alpha_b=float(v["alpha_b"]),
                beta_ab=float(v["beta_ab"]),
                beta_b=float(v["beta_b"]),
            )
            for v in obj["voters"]
        )
        prior = Prior.from_obj(obj["prior"]) if "prior" in obj else None
        kwargs = {"prior": prior} if prior is not None else {}
        return VotingModel(
            voters, v_ab=float(obj["v_ab"]), v_b=float(obj["v_b"]), **kwargs
        )
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise SpecError(f"malformed voting model: {err}") from err


def _dist_obj(dist: MeanDistribution) -> dict:
    revealed = None
    if dist.revealed is not None:
        revealed = [list(p) for p in dist.revealed.pieces]
    return {
        "atoms": [[loc, mass] for loc, mass in dist.atoms],
        "revealed": revealed,
        "pool_threshold": dist.pool_threshold,
        "payoff": dist.payoff,
    }


def _segments_obj(segments) -> list:
    return [
        {
            "span": [list(p) for p in seg.outer.pieces],
            "kind": seg.kind,
            "means": list(seg.means),
        }
        for seg in segments
    ]


def _violations_obj(violations) -> list:
    return [
        {
            "kind": v.kind,
            "action": v.action,
            "cell": v.cell,
            "sup": v.sup,
            "bound": v.bound,
            "detail": v.describe(),
        }
        for v in violations
    ]


def _csv_path(directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def _write_csv(path: str, header, rows) -> None:
    def cell(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return _fmt(v)
        return str(v)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell(v) for v in row])
    log.info("wrote %s", path)


def _write_steps(directory: str, spec: GameSpec) -> None:
    rows = []
    for i in range(spec.n_actions):
        rows.append((spec.cutoffs[i], spec.values[i]))
        rows.append((spec.cutoffs[i + 1], spec.values[i]))
    _write_csv(_csv_path(directory, "steps.csv"), ("x", "u"), rows)


def _write_intervals(
    directory: str, spec: GameSpec, rep: DeterministicRepresentation
) -> None:
    rows = []
    for i, cell in enumerate(rep.cells):
        if cell.is_empty:
            g = spec.cutoffs[i]
            rows.append((i, g, g, g, "skipped"))
            continue
        if spec.prior.mass(cell) > 1e-12:
            mean = spec.prior.partial_mean(cell)
        else:
            mean = cell.lo
        for lo, hi in cell.pieces:
            note = "skipped" if hi - lo <= 0.0 else ""
            rows.append((i, lo, hi, mean, note))
    _write_csv(
        _csv_path(directory, "intervals.csv"),
        ("cell", "lo", "hi", "mean", "note"),
        rows,
    )


def _write_payoff_sweep(directory: str, spec: GameSpec) -> None:
    base = preferred_ore(spec).rep
    z_hi = spec.cutoffs[spec.n_actions - 1]
    rows = []
    for j in range(101):
        z = z_hi * j / 100.0
        rep = sweep_representation(spec, base, z)
        rows.append((z, representation_payoff(spec, rep)))
    _write_csv(_csv_path(directory, "sweep.csv"), ("z", "payoff"), rows)


def _write_voting_sweep(directory: str, result: SweepResult) -> None:
    rows = [
        (r.parameter, r.gamma2_m, r.payoff, r.implementable)
        for r in result.rows
    ]
    _write_csv(
        _csv_path(directory, "sweep.csv"),
        ("parameter", "gamma2_m", "payoff", "implementable_flag"),
        rows,
    )


def _solve_out(spec: GameSpec, args) -> dict:
    if spec.n_actions <= 3:
        log.info("structural solver, %d actions", spec.n_actions)
    else:
        log.info("LP solver on a %d point grid", args.grid)
    sol = commitment_solution(spec, grid_size=args.grid)
    gap = dominance_gap(spec.prior, sol.distribution)
    out = {
        "verb": "solve",
        "n_actions": spec.n_actions,
        "payoff": sol.payoff,
        "distribution": _dist_obj(sol.distribution),
        "segments": _segments_obj(sol.segments),
        "canonical": sol.canonical.to_obj(),
        "dominance_gap": gap,
        "feasible": gap <= args.tol,
    }
    if args.csv:
        _write_steps(args.csv, spec)
        _write_intervals(args.csv, spec, sol.canonical)
    return out


def _implementable_out(spec: GameSpec, args) -> dict:
    report = implementable(spec)
    out = {
        "verb": "implementable",
        "implementable": report.implementable,
        "commitment_payoff": report.commitment_payoff,
        "canonical": report.canonical.to_obj(),
        "violations": _violations_obj(report.violations),
    }
    if args.csv:
        _write_steps(args.csv, spec)
        _write_intervals(args.csv, spec, report.canonical)
    return out


def _suffcond_out(spec: GameSpec, args) -> dict:
    nam = check_nam(spec)
    out = {
        "verb": "suffcond",
        "nam": list(nam),
        "nam_all": all(nam),
        "cni": check_cni(spec),
        "c3i": check_c3i(spec) if spec.n_actions == 3 else None,
    }
    if args.csv:
        _write_steps(args.csv, spec)
    return out


def _preferred_out(spec: GameSpec, args) -> dict:
    result = preferred_ore(spec)
    audit = verify_ore(spec, result.rep)
    out = {
        "verb": "preferred",
        "payoff": result.payoff,
        "coincides_with_commitment": result.coincides_with_commitment,
        "equilibrium_ok": audit.ok,
        "representation": result.rep.to_obj(),
    }
    if args.csv:
        _write_steps(args.csv, spec)
        _write_intervals(args.csv, spec, result.rep)
    return out


def _payoff_set_out(spec: GameSpec, args) -> dict:
    low = unraveling_payoff(spec)
    high = preferred_ore(spec).payoff
    out = {
        "verb": "payoff-set",
        "unraveling": low,
        "preferred": high,
        "bounds": [low, high],
    }
    if args.csv:
        _write_steps(args.csv, spec)
        _write_payoff_sweep(args.csv, spec)
    return out


def _ore_at_out(spec: GameSpec, args) -> dict:
    if args.target is None:
        raise SpecError("ore-at requires --target")
    rep = ore_at_payoff(spec, args.target)
    audit = verify_ore(spec, rep)
    out = {
        "verb": "ore-at",
        "target": args.target,
        "payoff": audit.payoff,
        "equilibrium_ok": audit.ok,
        "representation": rep.to_obj(),
    }
    if args.csv:
        _write_steps(args.csv, spec)
        _write_intervals(args.csv, spec, rep)
    return out


def _baselines_out(spec: GameSpec, args) -> dict:
    out = {
        "verb": "baselines",
        "unraveling": unraveling_payoff(spec),
        "cheap_talk": cheap_talk_payoff(spec),
    }
    if args.csv:
        _write_steps(args.csv, spec)
    return out


_GAME_HANDLERS = {
    "solve": _solve_out,
    "implementable": _implementable_out,
    "suffcond": _suffcond_out,
    "preferred": _preferred_out,
    "payoff-set": _payoff_set_out,
    "ore-at": _ore_at_out,
    "baselines": _baselines_out,
}


def _cmd_game(args) -> dict:
    return _GAME_HANDLERS[args.verb](_load_spec(args.input), args)


def _cmd_app_seller(args) -> dict:
    model = _load_seller(_load_json(args.input))
    spec = seller_to_game(model)
    prudence = check_prudence(model)
    out = {
        "verb": "app-seller",
        "game": spec.to_obj(),
        "n_actions": spec.n_actions,
        "prudence": {
            "ok": prudence.ok,
            "hypothesis": prudence.prudent,
            "density_increasing": prudence.density_ok,
            "cutoff_gap_chain": prudence.gap_chain_ok,
        },
    }
    if args.csv:
        _write_steps(args.csv, spec)
    if args.then:
        log.info("running %s on the generated game", args.then)
        out["result"] = _GAME_HANDLERS[args.then](spec, args)
    return out


def _cmd_app_voting(args) -> dict:
    model = _load_voting(_load_json(args.input))
    spec, median = voting_to_game(model)
    out = {
        "verb": "app-voting",
        "game": spec.to_obj(),
        "median_voter": median,
        "gamma1": spec.cutoffs[1],
        "gamma2": spec.cutoffs[2],
    }
    if args.csv:
        _write_steps(args.csv, spec)
    if args.sweep is not None:
        try:
            deltas = [float(t) for t in args.sweep.split(",") if t.strip()]
        except ValueError as err:
            raise SpecError(f"bad --sweep list: {err}") from err
        result = voting_comparative_statics(
            model, deltas, parameter=args.sweep_parameter
        )
        out["sweep"] = {
            "parameter": args.sweep_parameter,
            "rows": [
                {
                    "parameter": r.parameter,
                    "gamma2_m": r.gamma2_m,
                    "payoff": r.payoff,
                    "implementable": r.implementable,
                }
                for r in result.rows
            ],
            "payoff_decrease": result.payoff_decrease,
        }
        if args.csv:
            _write_voting_sweep(args.csv, result)
    if args.then:
        log.info("running %s on the generated game", args.then)
        out["result"] = _GAME_HANDLERS[args.then](spec, args)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disclosure-lab",
        description="Solvers for verifiable disclosure games driven by "
        "posterior means.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "input", help="path to a JSON file, or the JSON text itself"
    )
    common.add_argument(
        "--grid",
        type=int,
        default=481,
        help="LP grid size for games with more than three actions",
    )
    common.add_argument(
        "--tol",
        type=float,
        default=1e-10,
        help="tolerance for the feasibility audit of emitted distributions",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for randomized suites; the verbs here are deterministic",
    )
    common.add_argument(
        "--csv", default=None, metavar="DIR", help="write plot data into DIR"
    )

    sub = parser.add_subparsers(dest="verb", required=True)
    helps = {
        "solve": "commitment solution and its canonical representation",
        "implementable": "whether the commitment outcome is an equilibrium",
        "suffcond": "sufficient-condition table for implementability",
        "preferred": "sender-preferred equilibrium representation",
        "payoff-set": "range of equilibrium payoffs",
        "ore-at": "equilibrium hitting a given payoff (--target)",
        "baselines": "unraveling and cheap talk payoffs",
    }
    for verb in _GAME_VERBS:
        p = sub.add_parser(verb, parents=[common], help=helps[verb])
        if verb == "ore-at":
            p.add_argument(
                "--target", type=float, required=True, help="payoff to hit"
            )

    seller = sub.add_parser(
        "app-seller",
        parents=[common],
        help="map a seller model onto a game and report prudence",
    )
    voting = sub.add_parser(
        "app-voting",
        parents=[common],
        help="map a voting model onto a game via the median voter",
    )
    for p in (seller, voting):
        p.add_argument(
            "--then",
            choices=_GAME_VERBS,
            default=None,
            help="also run this verb on the generated game",
        )
        p.add_argument(
            "--target",
            type=float,
            default=None,
            help="payoff to hit when --then ore-at",
        )
    voting.add_argument(
        "--sweep",
        default=None,
        metavar="DELTAS",
        help="comma separated shifts applied to every voter",
    )
    voting.add_argument(
        "--sweep-parameter",
        choices=("alpha_ab", "alpha_b", "beta_ab", "beta_b"),
        default="beta_b",
        help="voter field the sweep shifts",
    )
    return parser


def _setup_logging() -> None:
    name = os.environ.get("DISCLOSURE_LAB_LOG", "quiet").lower()
    level = _LOG_LEVELS.get(name)
    if level is None:
        print(
            f"warning: unknown DISCLOSURE_LAB_LOG value {name!r}, "
            "using quiet",
            file=sys.stderr,
        )
        level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(message)s"
    )
    log.setLevel(level)


_DISPATCH = dict(
    {verb: _cmd_game for verb in _GAME_VERBS},
    **{"app-seller": _cmd_app_seller, "app-voting": _cmd_app_voting},
)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging()
    if getattr(args, "seed", None) is not None:
        log.debug("seed %d accepted; output does not depend on it", args.seed)
    try:
        out = _DISPATCH[args.verb](args)
    except SpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SolverError as err:
        print(f"solver error: {err}", file=sys.stderr)
        return 3
    print(_dump(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
