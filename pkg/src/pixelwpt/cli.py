"""Command-line front end.

Subcommands: gen-antenna, decompose, optimize, sweep, selftest. A JSON
config file can predefine any flag; explicit flags win. Exit codes:
0 success, 2 configuration or schema problems, 3 numerical failures.
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .channel import ArrayGeometry, uniform_azimuth_grid
from .datasets import (
    SyntheticAntennaSpec,
    emit_csv,
    generate_synthetic_antenna,
    load_antenna,
    save_antenna,
)
from .errors import (
    DimensionError,
    InfeasibleSpec,
    PixelWptError,
    SchemaError,
)
from .multiport import beamspace_decompose
from .optimizer import OptimizerConfig
from .rectenna import RectennaParams
from .simulation import (
    SCHEMES,
    ExperimentConfig,
    dbm_from_watts,
    realization_seed,
    run_realization,
    run_sweep,
)

CONFIG_ERRORS = (SchemaError, DimensionError, InfeasibleSpec, ValueError, OSError)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--config", default=None, help="JSON file with default flag values")
    common.add_argument("--antenna", default=None, help="antenna dataset path")
    common.add_argument("--tx", default="1", help="transmit antenna count(s), e.g. 2 or 1,2,4")
    common.add_argument("--rx", default="1", help="receive antenna count(s), e.g. 2 or 1,2,4")
    common.add_argument("--realizations", type=int, default=200)
    common.add_argument("--power-dbm", type=float, default=36.0, help="transmit power (dBm)")
    common.add_argument("--path-loss-db", type=float, default=66.0)
    common.add_argument(
        "--scheme",
        default="all",
        help=f"comma-separated subset of {','.join(SCHEMES)}, or 'all'",
    )
    common.add_argument("--out", default=None, help="output file path")
    common.add_argument("--energy-fraction", type=float, default=0.998)

    parser = argparse.ArgumentParser(
        prog="pixelwpt",
        description="MIMO wireless power transfer with reconfigurable pixel antennas",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser(
        "gen-antenna", parents=[common], help="generate a synthetic antenna dataset"
    )
    gen.add_argument("--switches", type=int, default=39, help="pixel switch count Q")
    gen.add_argument("--angles", type=int, default=72, help="azimuth sample count K")
    gen.add_argument("--target-neff", type=int, default=7, help="effective pattern count")
    gen.add_argument("--impedance-scale", type=float, default=50.0)
    gen.add_argument("--frequency-hz", type=float, default=2.4e9)

    commands.add_parser(
        "decompose", parents=[common], help="print the singular spectrum of an antenna"
    )
    commands.add_parser(
        "optimize", parents=[common], help="solve one realization and print the trace"
    )
    commands.add_parser(
        "sweep", parents=[common], help="run the Monte Carlo sweep and emit CSV"
    )
    commands.add_parser(
        "selftest", parents=[common], help="run the built-in oracle cross-checks"
    )
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _dispatch(args)
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PixelWptError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def _apply_config_file(parser: argparse.ArgumentParser, argv) -> None:
    """Hoist JSON config values into parser defaults before parsing."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return
    try:
        with open(path, "r", encoding="utf-8") as handle:
            values = json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON config (line {exc.lineno}: {exc.msg})")
    if not isinstance(values, dict):
        raise SchemaError(f"{path}: config must be a JSON object")
    parser.set_defaults(**{key.replace("-", "_"): value for key, value in values.items()})


def _dispatch(args) -> int:
    handlers = {
        "gen-antenna": _cmd_gen_antenna,
        "decompose": _cmd_decompose,
        "optimize": _cmd_optimize,
        "sweep": _cmd_sweep,
        "selftest": _cmd_selftest,
    }
    return handlers[args.command](args)


def _parse_counts(text) -> tuple:
    if isinstance(text, int):
        return (text,)
    counts = tuple(int(token) for token in str(text).split(",") if token)
    if not counts or any(c < 1 for c in counts):
        raise ValueError(f"antenna counts must be positive integers, got {text!r}")
    return counts


def _parse_schemes(text) -> tuple:
    if text == "all":
        return SCHEMES
    schemes = tuple(token for token in str(text).split(",") if token)
    unknown = set(schemes) - set(SCHEMES)
    if unknown:
        raise ValueError(f"unknown schemes {sorted(unknown)}; valid: {SCHEMES}")
    return schemes


def _require(args, attribute: str, flag: str):
    value = getattr(args, attribute)
    if value is None:
        raise ValueError(f"{flag} is required for this command")
    return value


def _experiment_config(args) -> ExperimentConfig:
    return ExperimentConfig(
        tx_counts=_parse_counts(args.tx),
        rx_counts=_parse_counts(args.rx),
        realizations=args.realizations,
        transmit_power_dbm=args.power_dbm,
        path_loss_db=args.path_loss_db,
        schemes=_parse_schemes(args.scheme),
        base_seed=args.seed,
        antenna_source=_require(args, "antenna", "--antenna"),
        energy_fraction=args.energy_fraction,
        optimizer=OptimizerConfig(rng_seed=args.seed),
    )


def _cmd_gen_antenna(args) -> int:
    spec = SyntheticAntennaSpec(
        q_switches=args.switches,
        k_angles=args.angles,
        target_n_eff=args.target_neff,
        seed=args.seed,
        impedance_scale=args.impedance_scale,
    )
    net = generate_synthetic_antenna(spec)
    out = _require(args, "out", "--out")
    save_antenna(net, out, frequency_hz=args.frequency_hz)
    basis = beamspace_decompose(net, args.energy_fraction)
    print(f"wrote {out}: Q={net.q_switches}, K={net.k_angles}, "
          f"n_eff={basis.n_eff} at {args.energy_fraction:.3%} energy")
    return 0


def _cmd_decompose(args) -> int:
    net = load_antenna(_require(args, "antenna", "--antenna"))
    s = np.linalg.svd(net.e_oc, compute_uv=False)
    total = float(np.sum(s**2))
    cumulative = np.cumsum(s**2) / total
    basis = beamspace_decompose(net, args.energy_fraction)
    print(f"antenna: Q={net.q_switches}, K={net.k_angles}")
    print("index  singular_value  cumulative_energy")
    for i, (value, fraction) in enumerate(zip(s, cumulative), start=1):
        marker = " <- n_eff" if i == basis.n_eff else ""
        print(f"{i:5d}  {value:.8e}  {fraction:.9f}{marker}")
    print(f"n_eff = {basis.n_eff} at energy fraction {args.energy_fraction}")
    return 0


def _cmd_optimize(args) -> int:
    config = _experiment_config(args)
    m, n = config.tx_counts[0], config.rx_counts[0]
    seed = realization_seed(config.base_seed, m, n, 0)
    for scheme in config.schemes:
        power = run_realization(config, m, n, scheme, seed)
        print(f"{scheme:>10s}: {power:.6e} W ({dbm_from_watts(power):+.2f} dBm)")
    return 0


def _cmd_sweep(args) -> int:
    config = _experiment_config(args)
    out = _require(args, "out", "--out")
    result = run_sweep(config)
    emit_csv(result, out)
    print(f"wrote {out}: {len(result.rows)} rows "
          f"({len(config.tx_counts) * len(config.rx_counts)} sweep points, "
          f"{config.realizations} realizations each)")
    return 0


def _cmd_selftest(args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check(args.seed)
            print(f"PASS  {name}")
        except AssertionError as exc:
            failures += 1
            print(f"FAIL  {name}: {exc}")
    if failures:
        print(f"{failures} selftest check(s) failed")
        return 3
    print("all selftest checks passed")
    return 0


def _selftest_checks():
    return [
        ("switch semantics vs finite-load oracle", _check_switch_semantics),
        ("channel path equivalence", _check_channel_paths),
        ("rectenna constants vs exact arithmetic", _check_rectenna_constants),
        ("analytic gradient vs central differences", _check_gradient),
        ("single-block SEBO vs exhaustive search", _check_sebo_exact),
    ]


def _selftest_antenna(seed: int, q: int = 6, k: int = 4, target: int = 3):
    return generate_synthetic_antenna(
        SyntheticAntennaSpec(q_switches=q, k_angles=k, target_n_eff=target, seed=seed)
    )


def _check_switch_semantics(seed: int) -> None:
    from .multiport import AntennaCoder, pixel_currents, pixel_currents_finite_load

    net = _selftest_antenna(seed)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        coder = AntennaCoder.random(net.q_switches, rng)
        exact = pixel_currents(net, coder, 1.0)
        oracle = pixel_currents_finite_load(net, coder, 1.0)
        open_ports = np.flatnonzero(coder.bits == 1)
        short_ports = np.flatnonzero(coder.bits == 0)
        assert np.all(exact.i_pixels[open_ports] == 0), "open-port current not exactly zero"
        if short_ports.size:
            gap = np.linalg.norm(exact.i_pixels[short_ports] - oracle.i_pixels[short_ports])
            scale = np.linalg.norm(oracle.i_pixels[short_ports])
            assert gap <= 1e-6 * max(scale, 1e-30), f"reduced solve off by {gap / scale:.2e}"


def _check_channel_paths(seed: int) -> None:
    from .channel import virtual_channel_consistency
    from .multiport import AntennaCoder

    rng = np.random.default_rng(seed)
    net = _selftest_antenna(seed, q=2, k=4, target=3)
    basis = beamspace_decompose(net, 0.998)
    k2 = net.e_oc.shape[0]
    h_v = rng.standard_normal((k2, k2)) + 1j * rng.standard_normal((k2, k2))
    geom = ArrayGeometry(n_elements=2, azimuth_samples=uniform_azimuth_grid(4))
    coders = [AntennaCoder.random(2, rng) for _ in range(2)]
    h_pattern, h_beamspace = virtual_channel_consistency(
        h_v, net, basis, geom, geom, coders, coders
    )
    gap = np.linalg.norm(h_pattern - h_beamspace) / max(np.linalg.norm(h_pattern), 1e-30)
    assert gap < 1e-10, f"channel paths disagree by {gap:.2e}"


def _check_rectenna_constants(seed: int) -> None:
    from scipy.integrate import quad

    from .rectenna import moment_weights, taylor_coefficients

    params = RectennaParams()
    betas = taylor_coefficients(params)
    diode = Fraction(105, 100) * Fraction(25, 1000)
    exact2 = Fraction(50) / (2 * diode)
    exact4 = Fraction(50) ** 2 / (24 * diode**3)
    assert abs(betas[0] - float(exact2)) <= 1e-9 * float(exact2)
    assert abs(betas[1] - float(exact4)) <= 1e-9 * float(exact4)
    for order in (2, 4):
        integral, _ = quad(lambda t: np.sin(t) ** order, 0.0, 2.0 * np.pi)
        assert abs(moment_weights(order) - integral / (2.0 * np.pi)) < 1e-9


def _check_gradient(seed: int) -> None:
    from .optimizer import BeamformingObjective, numerical_gradient

    rng = np.random.default_rng(seed)
    h = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    objective = BeamformingObjective(h, RectennaParams(), power_budget=1.0)
    for _ in range(5):
        x = rng.standard_normal(8)
        _, analytic = objective.value_and_gradient(x)
        numeric = numerical_gradient(objective.value, x)
        gap = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), 1e-30)
        assert gap < 1e-5, f"gradient mismatch {gap:.2e}"


def _check_sebo_exact(seed: int) -> None:
    from .multiport import AntennaCoder
    from .optimizer import sebo

    rng = np.random.default_rng(seed)
    q = 4
    table = rng.standard_normal(2**q)

    def lookup(coders_t, coders_r) -> float:
        return float(table[int("".join(map(str, coders_t[0].bits)), 2)])

    config = OptimizerConfig(sebo_block_size=q, sebo_restarts=0)
    initial = ([AntennaCoder.random(q, rng)], [])
    coders = sebo(lookup, initial, config, rng)
    # One antenna, one block: the cyclic search is a full enumeration.
    assert lookup(*coders) == table.max(), "single-block search missed the optimum"


if __name__ == "__main__":
    sys.exit(main())
