"""``concmon``: command-line front end.

Exit codes: 0 success, 1 property failure (including a violated bound),
2 invalid input, 3 numerical failure. Reports are JSON; every numeric
quantity is wrapped as ``{"value": ..., "provenance": ...}`` with provenance
``exact-formula``, ``decomposition-average`` or ``upper_bound_estimate``.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import monotones as mono
from .errors import NumericalError
from .formats import (
    FormatError,
    dumps,
    ensemble_to_json,
    parse_decomposition,
    parse_matrix,
    parse_state,
    read_json,
)
from .red import (
    BoundReport,
    KrausSet,
    chain_compose,
    check_bound,
    random_kraus,
    resolve_strategy,
    supplier_measure,
)
from .roof import RoofProblem, ensemble_average, resolve_k, roof_minimize
from .rpbes import (
    PhaseMatrix,
    c2_final,
    c2_general,
    c2_normalization_factor,
    canonical_phases,
    design_phases,
    final_state,
    g_product,
    outcome_agreement,
    run_protocol,
    scaled_phases,
    zero_phases,
)
from .sampling import random_pure_state, rng_for
from .selftest import format_table, run_selftest
from .states import DensityMatrix, Ensemble, PureState, embed, schmidt


EXACT = "exact-formula"
DECOMP = "decomposition-average"
ESTIMATE = "upper_bound_estimate"


@dataclass
class RunConfig:
    seed: int = 0
    tol: float = 1e-9
    restarts: int = 32
    log_base: float = 2.0
    output: str | None = None
    trials: int | None = None


def q(value, provenance: str) -> dict:
    return {"value": float(value), "provenance": provenance}


def qs(values, provenance: str) -> dict:
    return {"values": [float(v) for v in values], "provenance": provenance}


# ---------------------------------------------------------------- monotones


def _square(state: PureState) -> PureState:
    return state if state.is_square else embed(state)


def _pure_report(state: PureState, cfg: RunConfig) -> dict:
    sq = _square(state)
    vec = mono.monotone_vector(sq)
    return {
        "type": "pure",
        "dims": list(state.dims),
        "d": sq.dim_a,
        "schmidt": qs(schmidt(state).lambdas, EXACT),
        "monotones": {"k": list(range(1, sq.dim_a + 1)), **qs(vec.values, EXACT)},
        "g_concurrence": q(mono.g_concurrence(sq), EXACT),
        "entropy": {**q(mono.entropy_entanglement(state, cfg.log_base), EXACT), "base": cfg.log_base},
    }


def _roof_entry(rho: DensityMatrix, k: int, cfg: RunConfig) -> dict:
    res = roof_minimize(RoofProblem(rho, k, restarts=cfg.restarts, seed=cfg.seed))
    return {
        "k": k,
        **q(res.value, ESTIMATE),
        "upper_bound_estimate": True,
        "converged": res.converged,
        "ensemble_size": len(res.ensemble),
    }


def _mixed_report(state, ks, cfg: RunConfig) -> dict:
    if isinstance(state, Ensemble):
        rho = state.density()
        kind = "ensemble"
    else:
        rho = state
        kind = "density"
    dims = rho.dims
    if dims is None or len(dims) != 2 or dims[0] != dims[1]:
        raise ValueError(f"mixed-state monotones need square bipartite dims, got {dims}")
    d = dims[0]
    ks = list(range(2, d + 1)) if not ks else [resolve_k(k, d) for k in ks]
    report = {"type": kind, "dims": list(dims), "d": d, "roof": [_roof_entry(rho, k, cfg) for k in ks]}
    if kind == "ensemble":
        report["given_decomposition"] = [{"k": k, **q(ensemble_average(state, k), DECOMP)} for k in ks]
    if d == 2:
        report["wootters_concurrence"] = q(mono.wootters_concurrence(rho), EXACT)
    return report


def cmd_monotones(doc, cfg: RunConfig, ks=None) -> dict:
    state = parse_state(doc)
    if isinstance(state, PureState):
        return _pure_report(state, cfg)
    return _mixed_report(state, ks, cfg)


def cmd_roof(doc, cfg: RunConfig, monotone="2") -> dict:
    state = parse_state(doc)
    if isinstance(state, PureState):
        state = Ensemble.pure(_square(state))
    rho = state.density() if isinstance(state, Ensemble) else state
    if rho.dims is None or len(rho.dims) != 2:
        raise ValueError("roof needs bipartite dims")
    k = resolve_k(monotone, rho.dims[0])
    res = roof_minimize(RoofProblem(rho, k, restarts=cfg.restarts, seed=cfg.seed))
    return {
        "k": k,
        "roof": {**q(res.value, ESTIMATE), "upper_bound_estimate": True},
        "iterations": res.iterations,
        "converged": res.converged,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
        "ensemble": ensemble_to_json(res.ensemble),
    }


# ---------------------------------------------------------------------- red


def parse_kraus(spec, d: int, where: str):
    """A Kraus source: inline operators, a seeded generator, or a named strategy."""
    if isinstance(spec, str):
        if spec in ("rpbes-canonical", "computational"):
            return spec
        raise FormatError(where, f"unknown strategy {spec!r}")
    if not isinstance(spec, dict) or "type" not in spec:
        raise FormatError(where, "expected a strategy name or an object with a 'type'")
    kind = spec["type"]
    try:
        if kind == "inline":
            ops = spec.get("ops")
            if not isinstance(ops, list) or not ops:
                raise FormatError(f"{where}.ops", "expected a non-empty list of matrices")
            return KrausSet(tuple(parse_matrix(m, f"{where}.ops[{i}]") for i, m in enumerate(ops)))
        if kind == "generator":
            count = int(spec.get("count", d * d))
            return random_kraus(d, count, spec.get("ranks"), int(spec.get("seed", 0)))
    except FormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise FormatError(where, str(exc)) from exc
    raise FormatError(f"{where}.type", f"expected 'inline' or 'generator', got {kind!r}")


def bound_json(rep: BoundReport, tol: float) -> dict:
    return {
        "g14": q(rep.g14, DECOMP),
        "g12": q(rep.g12, DECOMP),
        "g34": q(rep.g34, DECOMP),
        "bound": q(rep.bound, DECOMP),
        "slack": q(rep.slack, DECOMP),
        "satisfied": bool(rep.slack >= -tol),
    }


def _run_pair(sc: dict, where: str, cfg: RunConfig) -> dict:
    rho12 = parse_decomposition(sc.get("rho12"), f"{where}.rho12")
    rho34 = parse_decomposition(sc.get("rho34"), f"{where}.rho34")
    if rho12.dims[0] != rho12.dims[1] or rho12.dims != rho34.dims:
        raise FormatError(where, "rho12 and rho34 must be d x d states of the same d")
    d = rho12.dims[0]
    kraus = parse_kraus(sc.get("kraus"), d, f"{where}.kraus")
    outcomes = supplier_measure(rho12, rho34, resolve_strategy(kraus, rho12, rho34))
    rep = check_bound(rho12, rho34, outcomes, cfg.tol)
    return {
        "kind": "pair",
        **bound_json(rep, cfg.tol),
        "outcomes": [
            {"label": str(o.label), **q(o.prob, EXACT), "g_average": q(o.g_average, DECOMP)}
            for o in outcomes
        ],
    }


def _run_chain(sc: dict, where: str, cfg: RunConfig) -> dict:
    links_doc = sc.get("links")
    if not isinstance(links_doc, list) or len(links_doc) < 2:
        raise FormatError(f"{where}.links", "expected at least two link states")
    links = [parse_decomposition(x, f"{where}.links[{i}]") for i, x in enumerate(links_doc)]
    d = links[0].dims[0]
    strat_doc = sc.get("strategies")
    if not isinstance(strat_doc, list) or len(strat_doc) != len(links) - 1:
        raise FormatError(f"{where}.strategies", f"expected {len(links) - 1} strategies")
    strategies = [parse_kraus(s, d, f"{where}.strategies[{i}]") for i, s in enumerate(strat_doc)]
    rep = chain_compose(links, strategies, cfg.tol)
    return {
        "kind": "chain",
        "g0N": q(rep.g14, DECOMP),
        "link_g": qs(rep.link_g, DECOMP),
        "bound": q(rep.bound, DECOMP),
        "slack": q(rep.slack, DECOMP),
        "satisfied": bool(rep.slack >= -cfg.tol),
    }


def _run_randomized(sc: dict, where: str, cfg: RunConfig) -> dict:
    spec = sc["randomized"]
    if not isinstance(spec, dict):
        raise FormatError(f"{where}.randomized", "expected an object")
    try:
        d = int(spec.get("d", 2))
        trials = int(spec.get("trials", 100)) if cfg.trials is None else cfg.trials
        seed = int(spec.get("seed", cfg.seed))
        count = spec.get("count")
        ranks = spec.get("ranks")
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}.randomized", str(exc)) from exc
    min_slack = math.inf
    violations = []
    for t in range(trials):
        rng = rng_for(seed, t)
        a = Ensemble.pure(random_pure_state(d, d, rng))
        b = Ensemble.pure(random_pure_state(d, d, rng))
        n_ops = int(count) if count is not None else 1 + t % (d * d)
        try:
            kraus = random_kraus(d, n_ops, ranks, int(rng.integers(2**31)))
        except ValueError as exc:
            raise FormatError(f"{where}.randomized", str(exc)) from exc
        rep = check_bound(a, b, supplier_measure(a, b, kraus), cfg.tol)
        min_slack = min(min_slack, rep.slack)
        if rep.slack < -cfg.tol:
            violations.append(t)
    return {
        "kind": "randomized",
        "d": d,
        "trials": trials,
        "seed": seed,
        "min_slack": q(min_slack if trials else 0.0, DECOMP),
        "violations": violations,
        "satisfied": not violations,
    }


def cmd_red(doc, cfg: RunConfig) -> dict:
    if isinstance(doc, dict) and "scenarios" in doc:
        scenarios = doc["scenarios"]
    elif isinstance(doc, list):
        scenarios = doc
    else:
        scenarios = [doc]
    if not isinstance(scenarios, list) or not scenarios:
        raise FormatError("$.scenarios", "expected a non-empty list")
    reports = []
    for i, sc in enumerate(scenarios):
        where = f"$.scenarios[{i}]"
        if not isinstance(sc, dict):
            raise FormatError(where, "expected an object")
        if "randomized" in sc:
            rep = _run_randomized(sc, where, cfg)
        elif "links" in sc:
            rep = _run_chain(sc, where, cfg)
        elif "rho12" in sc:
            rep = _run_pair(sc, where, cfg)
        else:
            raise FormatError(where, "scenario needs 'rho12'/'rho34', 'links' or 'randomized'")
        reports.append({"name": str(sc.get("name", f"scenario-{i}")), **rep})
    return {"reports": reports, "all_satisfied": all(r["satisfied"] for r in reports)}


# -------------------------------------------------------------------- rpbes


def parse_theta(spec: str, lam, eta):
    """Returns ``(PhaseMatrix, extra report fields)``."""
    d = len(lam)
    name, _, arg = spec.partition(":")
    try:
        if spec == "zero":
            return zero_phases(d), {}
        if spec == "canonical":
            return canonical_phases(d), {}
        if name == "scaled":
            alpha = float(arg)
            return scaled_phases(d, alpha), {"alpha": alpha}
        if name == "matrix":
            m = np.real(parse_matrix(read_json(arg), f"{arg}"))
            return PhaseMatrix(m), {}
        if name == "target-g":
            th, alpha = design_phases(lam, eta, float(arg))
            return th, {"alpha": alpha, "target_g": float(arg)}
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError("--theta", str(exc)) from exc
    raise FormatError("--theta", f"unknown phase spec {spec!r}")


def cmd_rpbes(lam, eta, theta_spec: str, cfg: RunConfig) -> dict:
    lam = [float(x) for x in lam]
    eta = [float(x) for x in eta]
    if len(lam) != len(eta) or len(lam) < 2:
        raise FormatError("--lambda/--eta", "spectra must have the same length d >= 2")
    th, extra = parse_theta(theta_spec, lam, eta)
    run = run_protocol(lam, eta, th)
    target = final_state(lam, eta, th)
    d = len(lam)
    g12 = d * float(np.prod(lam)) ** (1 / d)
    g34 = d * float(np.prod(eta)) ** (1 / d)
    return {
        "d": d,
        "theta": th.theta.tolist(),
        **extra,
        "outcomes": [{"j": o.j, "jp": o.jp, **q(o.prob, EXACT)} for o in run.outcomes],
        "min_fidelity_to_final": q(outcome_agreement(run, target), EXACT),
        "g_final": q(mono.g_concurrence(target), EXACT),
        "g12": q(g12, EXACT),
        "g34": q(g34, EXACT),
        "g_bound": q(g_product(lam, eta), EXACT),
        "c2_interference_formula": q(c2_final(lam, eta, th), EXACT),
        "c2_final": q(c2_general(lam, eta, th), EXACT),
        "c2_normalization_factor": c2_normalization_factor(d),
        "classical_bits": {"to_bob": run.classical_bits[0], "to_alice": run.classical_bits[1]},
    }


# ----------------------------------------------------------------- selftest


def cmd_selftest(cfg: RunConfig) -> tuple[dict, str]:
    trials = 20 if cfg.trials is None else cfg.trials
    results = run_selftest(trials, cfg.seed, cfg.tol)
    report = {
        "trials": trials,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "properties": [
            {
                "name": r.name,
                "worst": r.worst if math.isfinite(r.worst) else None,
                "limit": r.limit,
                "passed": r.passed,
            }
            for r in results
        ],
        "failed": [r.name for r in results if not r.passed],
        "passed": all(r.passed for r in results),
    }
    return report, format_table(results)


# --------------------------------------------------------------------- main


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=1e-9)
    g.add_argument("--restarts", type=int, default=32)
    g.add_argument("--log-base", type=float, default=2.0)
    g.add_argument("--output", default=None, help="write JSON here instead of stdout")
    g.add_argument("--trials", type=int, default=None)
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="concmon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monotones", parents=[common], help="monotones of a state file")
    p.add_argument("state", help="state JSON file ('-' for stdin)")
    p.add_argument("--k", nargs="+", default=None, help="monotones for mixed inputs (ints or G)")

    p = sub.add_parser("roof", parents=[common], help="convex-roof estimate with its decomposition")
    p.add_argument("state")
    p.add_argument("--monotone", default="2", help="k or G")

    p = sub.add_parser("red", parents=[common], help="remote entanglement distribution scenarios")
    p.add_argument("scenario")

    p = sub.add_parser("rpbes", parents=[common], help="run the RPBES protocol")
    p.add_argument("--lambda", dest="lam", nargs="+", type=float, required=True)
    p.add_argument("--eta", nargs="+", type=float, required=True)
    p.add_argument("--theta", default="canonical",
                   help="zero | canonical | scaled:ALPHA | matrix:FILE | target-g:X")

    sub.add_parser("selftest", parents=[common], help="randomized property suite")
    return parser


def _diag(message: str) -> None:
    sys.stderr.write(f"concmon: {message}\n")


def _emit(report: dict, cfg: RunConfig) -> None:
    text = dumps(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(args.seed, args.tol, args.restarts, args.log_base, args.output, args.trials)
    try:
        if args.command == "monotones":
            report = cmd_monotones(read_json(args.state), cfg, args.k)
        elif args.command == "roof":
            report = cmd_roof(read_json(args.state), cfg, args.monotone)
        elif args.command == "red":
            report = cmd_red(read_json(args.scenario), cfg)
        elif args.command == "rpbes":
            report = cmd_rpbes(args.lam, args.eta, args.theta, cfg)
        else:
            report, table = cmd_selftest(cfg)
            sys.stderr.write(table)
            _emit(report, cfg)
            if not report["passed"]:
                sys.stderr.write("failing properties: " + ", ".join(report["failed"]) + "\n")
                return 1
            return 0
    except FormatError as exc:
        _diag(f"invalid input: {exc}")
        return 2
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        _diag(f"numerical failure: {exc}")
        return 3
    except ValueError as exc:
        _diag(f"invalid input: {exc}")
        return 2
    _emit(report, cfg)
    if args.command == "red" and not report["all_satisfied"]:
        _diag("bound violated in: " + ", ".join(r["name"] for r in report["reports"] if not r["satisfied"]))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
