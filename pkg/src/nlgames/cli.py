"""Command-line interface: ``nlgames analyze | reproduce | zeta``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .classical import classical_max
from .errors import BudgetExceededError, InvariantViolation, NlgamesError
from .fur import FurMeasurement, FurScenario, zeta
from .games import XorGameSpec, as_game, game_from_json
from .nosignal import ns_max
from .quantum import OptimizerConfig, PureState, named_state, optimize_game
from .reproduce import reproduction_rows

SCHEMA_VERSION = 1
HIERARCHY_TOL = 1e-9

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4

log = logging.getLogger("nlgames")


class ParseError(NlgamesError):
    pass


def _load_game(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        return game_from_json(obj)
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"cannot load game from {path}: {exc}") from exc


def _load_state(token: str, n_parties: int) -> tuple[str, PureState]:
    """A named state (``ghz``, ``w``, ``bell``) or a JSON file ``{"amplitudes": [...]}``.

    Amplitudes are reals or ``[re, im]`` pairs.
    """
    if not token.endswith(".json"):
        try:
            return token, named_state(token, n_parties)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    try:
        with open(token, encoding="utf-8") as fh:
            obj = json.load(fh)
        amps = [complex(*a) if isinstance(a, list) else complex(a) for a in obj["amplitudes"]]
        return str(obj.get("name", Path(token).stem)), PureState(n_parties, np.array(amps))
    except (OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"cannot load state from {token}: {exc}") from exc


def _default_states(n_parties: int) -> list[str]:
    return ["bell"] if n_parties == 2 else ["ghz", "w"]


def analyze(target, states: list[tuple[str, PureState]], config: OptimizerConfig, timings: bool = False) -> dict:
    game = as_game(target)
    clock: dict[str, float] = {}

    t0 = time.perf_counter()
    c_value, strategy = classical_max(game)
    clock["classical"] = time.perf_counter() - t0

    quantum = []
    for label, state in states:
        t0 = time.perf_counter()
        res = optimize_game(target, state, config)
        clock[f"quantum:{label}"] = time.perf_counter() - t0
        entry = {"state": label}
        if isinstance(target, XorGameSpec):
            n_set = target.n_settings**target.n_parties
            entry["value"] = 0.5 * (1.0 + res.best_value / n_set)
            entry["operator_value"] = res.best_value
        else:
            entry["value"] = res.best_value
        entry.update(
            {
                "angles": res.best_setup.as_lists(),
                "restarts": res.restarts_run,
                "best_restart": res.best_restart,
                "stationarity_residual": res.stationarity_residual,
            }
        )
        quantum.append(entry)

    t0 = time.perf_counter()
    ns_value, _ = ns_max(game)
    clock["no_signaling"] = time.perf_counter() - t0

    for entry in quantum:
        if not (c_value <= entry["value"] + HIERARCHY_TOL and entry["value"] <= ns_value + HIERARCHY_TOL):
            raise InvariantViolation(
                f"hierarchy violated for state {entry['state']}: "
                f"classical {c_value}, quantum {entry['value']}, no-signaling {ns_value}"
            )

    report = {
        "schema_version": SCHEMA_VERSION,
        "game": {
            "name": game.name,
            "parties": game.n_parties,
            "settings": game.n_settings,
            "outcomes": game.n_outcomes,
            "xor_f": target.f.tolist() if isinstance(target, XorGameSpec) else None,
        },
        "seed": config.seed,
        "classical": {"value": c_value, "strategy": [list(t) for t in strategy.table]},
        "quantum": quantum,
        "no_signaling": {"value": ns_value},
    }
    if timings:
        report["timings"] = clock
    return report


def _analysis_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["game", "theory", "state", "value", "operator_value"])
    name = report["game"]["name"]
    w.writerow([name, "classical", "", repr(report["classical"]["value"]), ""])
    for q in report["quantum"]:
        w.writerow([name, "quantum", q["state"], repr(q["value"]), repr(q.get("operator_value", ""))])
    w.writerow([name, "no-signaling", "", repr(report["no_signaling"]["value"]), ""])
    return buf.getvalue()


def _rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["game", "theory", "state", "quantity", "computed", "reference", "tolerance", "pass"])
    for r in rows:
        w.writerow([r.game, r.theory, r.state, r.quantity, repr(r.computed), repr(r.reference), repr(r.tolerance), r.passed])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def cmd_analyze(args) -> int:
    target = _load_game(args.game_file)
    tokens = args.states.split(",") if args.states else _default_states(target.n_parties)
    states = [_load_state(t.strip(), target.n_parties) for t in tokens if t.strip()]
    config = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    report = analyze(target, states, config, timings=args.timings)
    _emit(_dump(report) if args.format == "json" else _analysis_csv(report), args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = reproduction_rows(seed=args.seed, restarts=args.restarts)
    ok = all(r.passed for r in rows)
    if args.format == "json":
        text = _dump(
            {
                "schema_version": SCHEMA_VERSION,
                "seed": args.seed,
                "restarts": args.restarts,
                "all_pass": ok,
                "rows": [r.as_dict() for r in rows],
            }
        )
    else:
        text = _rows_csv(rows)
    _emit(text, args.out)
    for r in rows:
        if not r.passed:
            log.warning("FAIL %s/%s/%s %s: %r vs %r (tol %g)", r.game, r.theory, r.state, r.quantity, r.computed, r.reference, r.tolerance)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_measurements(text: str) -> FurScenario:
    try:
        items = json.loads(text)
        ms = []
        for it in items:
            if isinstance(it, dict):
                ms.append(FurMeasurement(float(it["p"]), float(it["theta"]), float(it["phi"]), int(it["x"])))
            else:
                p, theta, phi, x = it
                ms.append(FurMeasurement(float(p), float(theta), float(phi), int(x)))
        return FurScenario(tuple(ms))
    except (json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"bad --measurements: {exc}") from exc


def cmd_zeta(args) -> int:
    scenario = _parse_measurements(args.measurements)
    value, state = zeta(scenario)
    report = {
        "schema_version": SCHEMA_VERSION,
        "zeta": value,
        "state": [[float(a.real), float(a.imag)] for a in state],
    }
    _emit(_dump(report), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlgames", description="Classical, quantum and no-signaling values of nonlocal games.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--restarts", type=int, default=100)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write output here instead of stdout")

    p = sub.add_parser("analyze", help="analyze a game described in a JSON file")
    p.add_argument("game_file")
    p.add_argument("--states", default=None, help="comma-separated: ghz, w, bell, or path to a state .json")
    p.add_argument("--timings", action="store_true", help="include wall-clock time per stage")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reproduce", help="recompute all reference values with pass/fail")
    common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("zeta", help="fine-grained uncertainty bound for one qubit")
    p.add_argument("--measurements", required=True, help='JSON list of {"p","theta","phi","x"} or [p, theta, phi, x]')
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_zeta)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "restarts", 1) < 1:
        log.error("--restarts must be at least 1")
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        log.error("%s", exc)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
