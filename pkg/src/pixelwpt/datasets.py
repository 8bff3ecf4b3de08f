"""Antenna dataset files, synthetic antenna generation, and CSV output.

The dataset format is a single self-describing JSON document so toy
antennas stay diffable and hand-editable. Complex numbers are stored as
[real, imag] pairs; floats round-trip bit-exactly through the shortest
decimal representation. A full-wave solver export would populate the same
fields; the synthetic generator substitutes for one by constructing a
reciprocal, well-conditioned impedance matrix and a pattern matrix with a
prescribed number of effective orthogonal patterns.
"""

import json
import os
import tempfile
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionError, InfeasibleSpec, SchemaError
from .multiport import MultiportNetwork

if TYPE_CHECKING:
    from .simulation import SweepResult

SCHEMA_NAME = "pixel-antenna-dataset"
SCHEMA_VERSION = 1
DEFAULT_FREQUENCY_HZ = 2.4e9

# Total energy assigned to the non-retained tail of the synthetic
# singular spectrum; must stay below the 0.2% retention slack.
TAIL_ENERGY = 5e-4
CSV_HEADER = "M,N,scheme,mean_dc_power_w,mean_dc_power_dbm,std_error,realizations,seed"


@dataclass(frozen=True)
class SyntheticAntennaSpec:
    """Recipe for a synthetic pixel antenna with a prescribed pattern rank."""

    q_switches: int
    k_angles: int
    target_n_eff: int
    seed: int = 0
    impedance_scale: float = 50.0

    def __post_init__(self):
        if self.q_switches < 1 or self.k_angles < 1:
            raise InfeasibleSpec("q_switches and k_angles must be positive")
        if not 1 <= self.target_n_eff <= min(2 * self.k_angles, self.q_switches + 1):
            raise InfeasibleSpec(
                f"target_n_eff must lie in [1, {min(2 * self.k_angles, self.q_switches + 1)}]"
            )
        if self.impedance_scale <= 0:
            raise InfeasibleSpec("impedance_scale must be positive")


def generate_synthetic_antenna(spec: SyntheticAntennaSpec) -> MultiportNetwork:
    """Build a deterministic synthetic antenna matching the spec.

    The pixel impedance block is symmetric with strictly dominant
    positive-real diagonals, so every switch configuration yields a
    well-conditioned reduced system. The pattern matrix is assembled from
    random orthonormal factors and a designed singular spectrum whose
    99.8% cumulative-energy knee sits exactly at ``target_n_eff``.
    """
    rng = np.random.default_rng(spec.seed)
    q = spec.q_switches
    scale = spec.impedance_scale

    diag = scale * (1.0 + 0.3 * rng.uniform(size=q)) + 1j * scale * 0.3 * rng.standard_normal(q)
    off = rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))
    off = 0.5 * (off + off.T)
    np.fill_diagonal(off, 0.0)
    # Strict diagonal dominance keeps every reduced subsystem invertible.
    row_sums = np.abs(off).sum(axis=1)
    if q > 1 and row_sums.max() > 0:
        off *= 0.45 * np.abs(diag).min() / row_sums.max()
    z_pp = np.diag(diag) + off

    # Strong antenna-to-pixel coupling: switch states must reshape the
    # currents appreciably or coders barely change the pattern.
    z_ap = scale * rng.uniform(0.8, 1.6, size=q) * np.exp(2j * np.pi * rng.uniform(size=q))
    z_aa = complex(scale * (1.0 + 0.2 * rng.uniform()), scale * 0.2 * rng.standard_normal())

    energies = _spectrum_energies(spec.target_n_eff, min(2 * spec.k_angles, q + 1))
    singulars = np.sqrt(energies)
    u = _random_semi_unitary(rng, 2 * spec.k_angles, singulars.size)
    v = _random_semi_unitary(rng, q + 1, singulars.size)
    e_oc = (u * singulars) @ v.conj().T

    return MultiportNetwork(q_switches=q, z_aa=z_aa, z_ap=z_ap, z_pp=z_pp, e_oc=e_oc)


def _spectrum_energies(target: int, max_rank: int) -> np.ndarray:
    """Squared singular values summing to one whose 99.8% cumulative-energy
    knee falls exactly at ``target`` retained directions.

    The retained directions share the energy equally: a flat head keeps
    every orthogonal pattern equally usable by the antenna coders, and the
    knee condition still pins the retained count because the tail carries
    less than the 0.2% slack while dropping the last flat direction loses
    1/target of the energy.
    """
    tail_count = max_rank - target
    tail_total = TAIL_ENERGY if tail_count else 0.0
    if (target - 1) * (1.0 - tail_total) / target >= 0.998:
        raise InfeasibleSpec(
            f"target_n_eff={target} is too large for a flat retained spectrum"
        )
    head = np.full(target, (1.0 - tail_total) / target)
    parts = [head]
    if tail_count:
        tail_decay = 0.8 ** np.arange(tail_count)
        parts.append(tail_total * tail_decay / tail_decay.sum())
    return np.concatenate(parts)


def _random_semi_unitary(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    gaussian = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, _ = np.linalg.qr(gaussian)
    return q[:, :cols]


def save_antenna(net: MultiportNetwork, path, frequency_hz: float = DEFAULT_FREQUENCY_HZ):
    """Write an antenna dataset atomically (temp file plus rename)."""
    document = {
        "schema": SCHEMA_NAME,
        "version": SCHEMA_VERSION,
        "q_switches": net.q_switches,
        "k_angles": net.k_angles,
        "frequency_hz": frequency_hz,
        "z_aa": _complex_to_pair(net.z_aa),
        "z_ap": _complex_array_to_pairs(net.z_ap),
        "z_pp": _complex_array_to_pairs(net.z_pp),
        "e_oc": _complex_array_to_pairs(net.e_oc),
    }
    _atomic_write_text(path, json.dumps(document, indent=1) + "\n")


def load_antenna(path) -> MultiportNetwork:
    """Read an antenna dataset written by :func:`save_antenna`.

    Raises:
        SchemaError: missing file structure, unknown schema, bad field types.
        DimensionError: declared dimensions disagree with the array shapes.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not a valid dataset document (line {exc.lineno}: {exc.msg})")
    if not isinstance(document, dict):
        raise SchemaError(f"{path}: top level must be an object")
    if document.get("schema") != SCHEMA_NAME:
        raise SchemaError(f"{path}: field 'schema' must be '{SCHEMA_NAME}'")
    if document.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported dataset version {document.get('version')!r}")
    for field_name in ("q_switches", "k_angles", "z_aa", "z_ap", "z_pp", "e_oc"):
        if field_name not in document:
            raise SchemaError(f"{path}: missing field '{field_name}'")

    q = document["q_switches"]
    k = document["k_angles"]
    if not isinstance(q, int) or not isinstance(k, int) or q < 1 or k < 1:
        raise SchemaError(f"{path}: 'q_switches' and 'k_angles' must be positive integers")
    try:
        z_aa = _pair_to_complex(document["z_aa"])
        z_ap = _pairs_to_complex_array(document["z_ap"])
        z_pp = _pairs_to_complex_array(document["z_pp"])
        e_oc = _pairs_to_complex_array(document["e_oc"])
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: malformed complex array ({exc})")

    if z_ap.shape != (q,):
        raise DimensionError(f"{path}: field 'z_ap' must have length {q}, got {z_ap.shape}")
    if z_pp.shape != (q, q):
        raise DimensionError(f"{path}: field 'z_pp' must be {q} x {q}, got {z_pp.shape}")
    if e_oc.shape != (2 * k, q + 1):
        raise DimensionError(
            f"{path}: field 'e_oc' must be {2 * k} x {q + 1}, got {e_oc.shape}"
        )
    return MultiportNetwork(q_switches=q, z_aa=z_aa, z_ap=z_ap, z_pp=z_pp, e_oc=e_oc)


def resolve_antenna(source) -> MultiportNetwork:
    """Turn an antenna source descriptor into a network.

    Accepts a ready MultiportNetwork, a SyntheticAntennaSpec, or a dataset
    path.
    """
    if isinstance(source, MultiportNetwork):
        return source
    if isinstance(source, SyntheticAntennaSpec):
        return generate_synthetic_antenna(source)
    if isinstance(source, (str, os.PathLike)):
        return load_antenna(source)
    raise SchemaError(f"cannot interpret antenna source {source!r}")


def emit_csv(result: "SweepResult", path) -> None:
    """Write sweep rows as CSV with full-precision scientific notation."""
    lines = [CSV_HEADER]
    for row in result.rows:
        lines.append(
            ",".join(
                [
                    str(row.m),
                    str(row.n),
                    row.scheme,
                    _format_float(row.mean_dc_power_w),
                    _format_float(row.mean_dc_power_dbm),
                    _format_float(row.std_error),
                    str(row.realizations),
                    str(row.seed),
                ]
            )
        )
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _format_float(x: float) -> str:
    return format(x, ".17e")


def _atomic_write_text(path, text: str) -> None:
    directory = os.path.dirname(os.fspath(path)) or "."
    handle, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as stream:
            stream.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def _complex_to_pair(value: complex) -> list:
    return [float(np.real(value)), float(np.imag(value))]


def _complex_array_to_pairs(array: np.ndarray):
    if array.ndim == 1:
        return [_complex_to_pair(v) for v in array]
    return [_complex_array_to_pairs(row) for row in array]


def _pair_to_complex(pair) -> complex:
    real, imag = pair
    return complex(float(real), float(imag))


def _pairs_to_complex_array(nested) -> np.ndarray:
    data = np.asarray(nested, dtype=float)
    if data.ndim < 2 or data.shape[-1] != 2:
        raise ValueError("complex entries must be [real, imag] pairs")
    return data[..., 0] + 1j * data[..., 1]
