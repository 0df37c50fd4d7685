"""Command-line driver: orbit atlas, experiment sweeps, plan export, checks.

Every output file is deterministic byte-for-byte for a fixed config: rows
derive from explicit seeds, floats print via repr, and no timestamps are
written. Files begin with a commented header echoing the resolved config
and tool version so a result can always be traced back to its inputs.

Exit codes: 0 success, 1 usage or config error, 2 runtime failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import __version__, annealer, graphstate, network, orbit, planner, verify
from .annealer import SAConfig
from .errors import ConfigError, LcdistError
from .graphstate import GraphState
from .network import NoiseParams
from .rng import SplitMix64, child_seed

_MODELS = ("er", "ba", "ws")
_DETECTIONS = ("endpoint", "midpoint")


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment settings; config-file keys equal the field names.

    `targets` picks the per-q target set for the sweep commands:
    `all` (every connected edge set), `orbit-reps` (one root per labeled
    orbit), `random:<n>` (n distinct seeded connected samples), sums of
    those joined with `+`, or `auto` (all for q <= 5, else
    orbit-reps+random:200).
    """

    model: str = "er"
    nodes: int = 12
    seed: int = 8
    qubits: tuple[int, ...] = (3, 4, 5)
    targets: str = "auto"
    detection: str = "endpoint"
    bsm_per_hop: bool = False
    t0: float = 1.0
    tn: float = 1e-3
    beta: float = 0.95
    restarts: int = 5
    eta1: float = 0.9
    alpha: float = 0.2
    epsilon_d: float = 0.1
    p_bsm: float = 0.5
    f_dc: float = 1000.0
    epsilon_1g: float = 0.01
    epsilon_2g: float = 0.05
    p_y_msr: float = 0.99
    er_p: float = 0.3
    ba_m: int = 2
    ws_k: int = 4
    ws_rewire: float = 0.1
    out: str = "."


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _parse_qubits(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in raw.split(","))
    except ValueError:
        raise ConfigError(f"qubits must be comma-separated integers, got {raw!r}")
    if not values:
        raise ConfigError("qubits must not be empty")
    return values


def _parse_value(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if key == "qubits":
        return _parse_qubits(raw)
    if kind == "bool":
        low = raw.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigError(f"{key} must be true or false, got {raw!r}")
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a {kind}, got {raw!r}")
    return raw


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config_text(text: str) -> dict:
    """key = value lines, # comments; unknown or repeated keys rejected."""
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def _validate(config: ExperimentConfig) -> ExperimentConfig:
    if config.model not in _MODELS:
        raise ConfigError(f"model must be one of {_MODELS}, got {config.model!r}")
    if config.detection not in _DETECTIONS:
        raise ConfigError(
            f"detection must be one of {_DETECTIONS}, got {config.detection!r}"
        )
    if config.nodes < 2:
        raise ConfigError("nodes must be at least 2")
    if config.restarts < 1:
        raise ConfigError("restarts must be at least 1")
    if not 0.0 < config.tn < config.t0:
        raise ConfigError("need 0 < tn < t0")
    if not 0.0 < config.beta < 1.0:
        raise ConfigError("beta must lie in (0, 1)")
    for q in config.qubits:
        if not 2 <= q <= graphstate.MAX_QUBITS:
            raise ConfigError(f"qubits entries must lie in 2..{graphstate.MAX_QUBITS}")
    return config


def load_config(path: str | None, overrides: dict) -> tuple[ExperimentConfig, set]:
    """Resolved config plus the set of explicitly provided keys."""
    values: dict = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        values.update(parse_config_text(text))
    values.update(overrides)
    return _validate(ExperimentConfig(**values)), set(values)


def noise_from(config: ExperimentConfig) -> NoiseParams:
    return NoiseParams(
        eta1=config.eta1,
        alpha=config.alpha,
        epsilon_d=config.epsilon_d,
        p_bsm=config.p_bsm,
        f_dc=config.f_dc,
        epsilon_1g=config.epsilon_1g,
        epsilon_2g=config.epsilon_2g,
        p_y_msr=config.p_y_msr,
        detection=config.detection,
    )


def build_network(config: ExperimentConfig) -> network.PhysicalNetwork:
    params = {
        "er": {"p": config.er_p},
        "ba": {"m": config.ba_m},
        "ws": {"k": config.ws_k, "rewire": config.ws_rewire},
    }[config.model]
    return network.generate(
        config.model, config.nodes, params, config.seed, noise_from(config)
    )


# -- target selection ------------------------------------------------------


def _all_connected_masks(q: int) -> list[int]:
    if q > 7:
        raise ConfigError("targets=all enumerates every connected edge set; q <= 7")
    n = 1 << graphstate.mask_bit_count(q)
    return [m for m in range(n) if orbit._mask_connected(m, q)]


def _random_connected_masks(q: int, count: int, seed: int) -> set[int]:
    rng = SplitMix64(seed)
    space = 1 << graphstate.mask_bit_count(q)
    picked: set[int] = set()
    while len(picked) < count:
        mask = rng.randrange(space)
        if orbit._mask_connected(mask, q):
            picked.add(mask)
    return picked


def resolve_targets(
    config: ExperimentConfig,
    q: int,
    censuses: dict | None = None,
    all_up_to: int = 5,
) -> tuple[str, list[int]]:
    """Resolved (policy, ascending target masks) for one qubit count.

    `auto` exhausts the population up to `all_up_to` qubits and falls back
    to orbit representatives plus a seeded sample above it (sweeping every
    labeled state per q stops being feasible around q = 7).
    """
    policy = config.targets
    if policy == "auto":
        policy = "all" if q <= all_up_to else "orbit-reps+random:200"
    masks: set[int] = set()
    for part in policy.split("+"):
        if part == "all":
            masks.update(_all_connected_masks(q))
        elif part == "orbit-reps":
            if censuses is not None and q in censuses:
                census = censuses[q]
            else:
                census = orbit.full_census(q)
                if censuses is not None:
                    censuses[q] = census
            masks.update(int(root) for root in census.orbit_roots)
        elif part.startswith("random:"):
            try:
                count = int(part[len("random:") :])
            except ValueError:
                raise ConfigError(f"bad sample count in targets part {part!r}")
            if count < 1:
                raise ConfigError("random target count must be positive")
            masks.update(
                _random_connected_masks(
                    q, count, child_seed(child_seed(config.seed, 2), q)
                )
            )
        else:
            raise ConfigError(f"unknown targets part {part!r}")
    return policy, sorted(masks)


def _target_seed(config: ExperimentConfig, mask: int) -> int:
    # keyed by the mask itself so the stream survives target-set changes
    return child_seed(child_seed(config.seed, 1), mask)


# -- output ----------------------------------------------------------------


def _header(config: ExperimentConfig, command: str, extra=()) -> list[str]:
    lines = [f"# lcdist {__version__} {command}"]
    for f in fields(config):
        lines.append(f"# {f.name} = {_format_value(getattr(config, f.name))}")
    lines.extend(f"# {item}" for item in extra)
    return lines


def _emit(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _out_path(config: ExperimentConfig, args, default_name: str) -> str:
    if args.out is not None:
        return args.out
    return str(Path(config.out) / default_name)


# -- subcommands -----------------------------------------------------------


def _single_qubit_arg(config: ExperimentConfig, provided: set, fallback: int | None):
    """Commands that act on one q: the sole --qubits entry, else fallback."""
    if "qubits" in provided:
        if len(config.qubits) != 1:
            raise ConfigError("this command takes exactly one --qubits value")
        return config.qubits[0]
    if fallback is None:
        raise ConfigError("this command requires --qubits")
    return fallback


def cmd_atlas(config: ExperimentConfig, args, provided: set) -> int:
    q = _single_qubit_arg(config, provided, None)
    if not orbit.CENSUS_MIN_QUBITS <= q <= orbit.CENSUS_MAX_QUBITS:
        raise ConfigError(
            f"atlas covers q in {orbit.CENSUS_MIN_QUBITS}..{orbit.CENSUS_MAX_QUBITS}"
        )
    census = orbit.full_census(q)
    lines = _header(config, f"atlas q={q}")
    lines.append(
        "q,class_id,labeled_orbit_count,labeled_size_min,labeled_size_max,"
        "min_edges,representative_mask"
    )
    for cls in census.classes:
        lines.append(
            f"{q},{cls.class_id},{cls.labeled_orbit_count},{cls.labeled_size_min},"
            f"{cls.labeled_size_max},{cls.min_edges},{cls.representative_mask}"
        )
    _emit(_out_path(config, args, "atlas.csv"), lines)
    return 0


def best_product_anneal(
    target: GraphState, probs, config: ExperimentConfig, tseed: int
) -> annealer.SAResult:
    """Best product objective over the restarts; ties keep the earliest
    restart. Sub-seeding mirrors anneal_multi so restart r sees the same
    pivot stream in both selection modes."""
    best = None
    for r in range(config.restarts):
        sub = SAConfig(
            t0=config.t0,
            tn=config.tn,
            beta=config.beta,
            restarts=1,
            seed=child_seed(tseed, r),
        )
        result = annealer.anneal(target, probs, sub)
        if best is None or result.objective > best.objective:
            best = result
    return best


def cmd_gain_report(config: ExperimentConfig, args, provided: set) -> int:
    net = build_network(config)
    censuses: dict = {}
    extra: list[str] = []
    rows: list[str] = []
    for q in config.qubits:
        if q < 3:
            raise ConfigError("gain-report needs qubits entries of at least 3")
        policy, targets = resolve_targets(config, q, censuses)
        extra.append(f"targets q={q}: {policy} ({len(targets)} states)")
        mapping = {i: i for i in range(q)}
        network.validate_mapping(mapping, q, net.node_count)
        probs = network.pair_probabilities(net, mapping, config.bsm_per_hop)
        for mask in targets:
            target = GraphState(q, mask)
            direct = annealer.objective(target, probs)
            chosen = best_product_anneal(target, probs, config, _target_seed(config, mask))
            optimum, _ = orbit.orbit_optimum(
                target, lambda s: annealer.objective(s, probs), "max"
            )
            gain = math.log10(chosen.objective / direct)
            gap = math.log10(annealer.objective(optimum, probs) / chosen.objective)
            _, m2 = planner.recovery_gates(target, list(chosen.witness))
            rows.append(
                f"{q},{mask},{config.model},{config.seed},{gain!r},{gap!r},"
                f"{len(chosen.witness)},{m2}"
            )
    lines = _header(config, "gain-report", extra)
    lines.append("q,target_mask,model,seed,gain_exponent,gap_exponent,witness_len,m2")
    lines.extend(rows)
    _emit(_out_path(config, args, "gain_report.csv"), lines)
    return 0


def cmd_cdf_compare(config: ExperimentConfig, args, provided: set) -> int:
    q = _single_qubit_arg(config, provided, 6)
    if q < 3:
        raise ConfigError("cdf-compare needs at least 3 qubits")
    net = build_network(config)
    noise = noise_from(config)
    # the reference comparison sweeps the whole q = 6 population
    policy, targets = resolve_targets(config, q, all_up_to=6)
    mapping = {i: i for i in range(q)}
    network.validate_mapping(mapping, q, net.node_count)
    probs = network.pair_probabilities(net, mapping, config.bsm_per_hop)
    sa_conf = SAConfig(t0=config.t0, tn=config.tn, beta=config.beta, restarts=config.restarts)
    lines = _header(
        config,
        f"cdf-compare q={q}",
        [f"targets q={q}: {policy} ({len(targets)} states)"],
    )
    lines.append("p_overall_base,p_overall_sacc")
    for mask in targets:
        target = GraphState(q, mask)
        sa = annealer.anneal_multi(
            target, probs, replace(sa_conf, seed=_target_seed(config, mask)), noise
        )
        sacc = planner.plan(target, sa, net, mapping, config.bsm_per_hop)
        base = planner.direct_plan(target, net, mapping, config.bsm_per_hop)
        lines.append(f"{base.p_overall!r},{sacc.p_overall!r}")
    _emit(_out_path(config, args, "cdf_compare.csv"), lines)
    return 0


def cmd_epr_compare(config: ExperimentConfig, args, provided: set) -> int:
    max_q = _single_qubit_arg(config, provided, orbit.CENSUS_MAX_QUBITS)
    if not orbit.CENSUS_MIN_QUBITS <= max_q <= orbit.CENSUS_MAX_QUBITS:
        raise ConfigError(
            f"epr-compare covers q in {orbit.CENSUS_MIN_QUBITS}.."
            f"{orbit.CENSUS_MAX_QUBITS}"
        )
    lines = _header(config, f"epr-compare max_q={max_q}")
    lines.append("q,ours,edcg,reduction_pct")
    for q, ours, edcg, reduction in planner.epr_comparison(max_q):
        lines.append(f"{q},{ours},{edcg},{100.0 * reduction!r}")
    _emit(_out_path(config, args, "epr_compare.csv"), lines)
    return 0


def cmd_run_sa(config: ExperimentConfig, args, provided: set) -> int:
    try:
        graph_text = Path(args.graph).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read graph {args.graph}: {exc}")
    target = graphstate.parse_graph(graph_text)
    if args.network is not None:
        try:
            net_text = Path(args.network).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read network {args.network}: {exc}")
        net = network.parse_network(net_text, noise_from(config))
    else:
        net = build_network(config)
    if target.labels is not None:
        mapping = target.label_map()
    else:
        mapping = {i: i for i in range(target.qubit_count)}
    network.validate_mapping(mapping, target.qubit_count, net.node_count)
    probs = network.pair_probabilities(net, mapping, config.bsm_per_hop)
    sa = annealer.anneal_multi(
        target,
        probs,
        SAConfig(
            t0=config.t0,
            tn=config.tn,
            beta=config.beta,
            restarts=config.restarts,
            seed=config.seed,
        ),
        noise_from(config),
    )
    result = planner.plan(target, sa, net, mapping, config.bsm_per_hop)
    lines = _header(config, "run-sa")
    lines.extend(planner.format_plan(result).splitlines())
    _emit(args.out, lines)
    return 0


def cmd_verify(config: ExperimentConfig, args, provided: set) -> int:
    if args.cases < 1:
        raise ConfigError("--cases must be at least 1")
    results = verify.run_all(seed=config.seed, cases=args.cases)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail}")
        failed += not res.passed
    if failed:
        print(f"{failed} of {len(results)} suites failed")
        return 3
    print(f"all {len(results)} suites passed")
    return 0


# -- entry point -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--config", help="key = value config file")
    shared.add_argument("--seed", type=int, help="experiment seed")
    shared.add_argument("--qubits", help="qubit count, or comma list for sweeps")
    shared.add_argument("--model", choices=_MODELS, help="network model")
    shared.add_argument("--nodes", type=int, help="network node count")
    shared.add_argument("--out", help="output path ('-' = stdout)")
    shared.add_argument("--detection", choices=_DETECTIONS, help="loss accounting mode")
    shared.add_argument("--restarts", type=int, help="annealing restarts")

    parser = _Parser(prog="lcdist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lcdist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("atlas", parents=[shared], help="orbit census table for one q")
    sub.add_parser(
        "gain-report", parents=[shared], help="annealing gain and optimality gap sweep"
    )
    sub.add_parser(
        "cdf-compare",
        parents=[shared],
        help="overall success probability, direct vs annealed",
    )
    sub.add_parser(
        "epr-compare", parents=[shared], help="worst-case EPR cost vs edge-count baseline"
    )
    run_sa = sub.add_parser(
        "run-sa", parents=[shared], help="plan one target end to end"
    )
    run_sa.add_argument("--graph", required=True, help="target graph state file")
    run_sa.add_argument("--network", help="network file (default: generated)")
    ver = sub.add_parser("verify", parents=[shared], help="run the property suites")
    ver.add_argument("--cases", type=int, default=100, help="fuzz cases per qubit count")
    return parser


_COMMANDS = {
    "atlas": cmd_atlas,
    "gain-report": cmd_gain_report,
    "cdf-compare": cmd_cdf_compare,
    "epr-compare": cmd_epr_compare,
    "run-sa": cmd_run_sa,
    "verify": cmd_verify,
}


def _overrides(args) -> dict:
    values: dict = {}
    for name in ("seed", "model", "nodes", "detection", "restarts"):
        value = getattr(args, name)
        if value is not None:
            values[name] = value
    if args.qubits is not None:
        values["qubits"] = _parse_qubits(args.qubits)
    return values


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        config, provided = load_config(args.config, _overrides(args))
        return _COMMANDS[args.command](config, args, provided)
    except ConfigError as exc:
        print(f"lcdist: {exc}", file=sys.stderr)
        return 1
    except LcdistError as exc:
        print(f"lcdist: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
