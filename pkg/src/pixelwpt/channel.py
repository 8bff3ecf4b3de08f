"""Beamspace MIMO channel construction for arrays of pixel antennas.

Each array element reuses the single-antenna beamspace basis, rotated by
the element's azimuth-dependent phase shift. Stacking the per-element
bases turns the physical array into an equivalent array of
``n_elements * n_eff`` virtual antennas; the compact channel couples the
virtual antennas of both sides, and the block-diagonal pattern-coder
banks collapse it back to one complex gain per physical antenna pair.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroPattern
from .multiport import (
    CODER_EXCITATION,
    RECEIVE,
    TRANSMIT,
    AntennaCoder,
    BeamspaceBasis,
    MultiportNetwork,
    pattern_coder,
    pixel_currents,
    radiation_pattern,
)

DEFAULT_K_ANGLES = 72
DEFAULT_SPACING_WAVELENGTHS = 0.5
DEFAULT_WAVELENGTH_M = 0.125  # 2.4 GHz


def uniform_azimuth_grid(k_angles: int = DEFAULT_K_ANGLES) -> np.ndarray:
    """K azimuth samples uniformly covering [0, 2*pi)."""
    return np.linspace(0.0, 2.0 * np.pi, num=k_angles, endpoint=False)


@dataclass(frozen=True)
class ArrayGeometry:
    """Linear array layout and the azimuth sampling grid.

    Attributes:
        n_elements: Number of pixel antennas in the array.
        spacing: Element spacing in wavelengths.
        wavelength: Carrier wavelength in meters (metadata; the phase
            shifts depend only on spacing measured in wavelengths).
        azimuth_samples: K azimuth angles in radians.
    """

    n_elements: int
    spacing: float = DEFAULT_SPACING_WAVELENGTHS
    wavelength: float = DEFAULT_WAVELENGTH_M
    azimuth_samples: np.ndarray = None

    def __post_init__(self):
        if self.azimuth_samples is None:
            object.__setattr__(self, "azimuth_samples", uniform_azimuth_grid())
        if self.n_elements < 1:
            raise ValueError("array needs at least one element")
        if self.spacing <= 0.0:
            raise ValueError("element spacing must be positive")

    @property
    def k_angles(self) -> int:
        return self.azimuth_samples.size


@dataclass(frozen=True)
class ArrayBasis:
    """Per-element beamspace bases and their columnwise concatenation."""

    per_element: tuple
    stacked: np.ndarray


@dataclass(frozen=True)
class CoderBank:
    """Pattern coders of one array side as a block-diagonal matrix.

    ``pattern_bank`` has shape (n_elements * n_eff, n_elements): column m
    holds element m's unit-norm pattern coder in its own block row range
    and zeros elsewhere, so the bank has exactly orthonormal columns.
    """

    coders: tuple
    pattern_bank: np.ndarray


@dataclass(frozen=True)
class ChannelSet:
    """A compact channel together with the coder banks that realize it."""

    h_compact: np.ndarray
    amplitude_scale: float
    h_effective: np.ndarray

    @classmethod
    def assemble(
        cls,
        h_compact: np.ndarray,
        amplitude_scale: float,
        bank_t: CoderBank,
        bank_r: CoderBank,
    ) -> "ChannelSet":
        h = effective_channel(h_compact, amplitude_scale, bank_t, bank_r)
        return cls(h_compact=h_compact, amplitude_scale=amplitude_scale, h_effective=h)


def array_phase_shifts(geom: ArrayGeometry, element_index: int) -> np.ndarray:
    """Unit-modulus phase shifts of element ``element_index`` (1-based).

    Element 1 is the phase reference. The same azimuth-dependent phase
    applies to both polarization halves, so the K-vector is stacked twice
    into a 2K-vector.
    """
    if not 1 <= element_index <= geom.n_elements:
        raise ValueError(
            f"element_index must be in [1, {geom.n_elements}], got {element_index}"
        )
    phase = (
        2.0
        * np.pi
        * (element_index - 1)
        * geom.spacing
        * np.sin(geom.azimuth_samples)
    )
    shifts = np.exp(1j * phase)
    return np.concatenate([shifts, shifts])


def build_array_basis(base: BeamspaceBasis, geom: ArrayGeometry) -> ArrayBasis:
    """Replicate the single-antenna basis across the array with per-element
    phase shifts, and stack the copies columnwise."""
    if base.u.shape[0] != 2 * geom.k_angles:
        raise DimensionMismatch(
            f"basis has {base.u.shape[0]} pattern rows, geometry implies {2 * geom.k_angles}"
        )
    per_element = tuple(
        array_phase_shifts(geom, m)[:, None] * base.u for m in range(1, geom.n_elements + 1)
    )
    return ArrayBasis(per_element=per_element, stacked=np.concatenate(per_element, axis=1))


def build_coder_bank(
    net: MultiportNetwork,
    basis: BeamspaceBasis,
    coders: list[AntennaCoder],
    side: str,
) -> CoderBank:
    """Evaluate every element's pattern coder and arrange them block-diagonally."""
    n_eff = basis.n_eff
    n_elements = len(coders)
    bank = np.zeros((n_elements * n_eff, n_elements), dtype=complex)
    for m, coder in enumerate(coders):
        try:
            w = pattern_coder(basis, pixel_currents(net, coder, CODER_EXCITATION), side)
        except ZeroPattern as exc:
            raise ZeroPattern(f"element {m} of the {side} bank: {exc}") from exc
        bank[m * n_eff : (m + 1) * n_eff, m] = w
    return CoderBank(coders=tuple(coders), pattern_bank=bank)


def sample_compact_channel(n_r: int, n_t: int, rng_seed) -> np.ndarray:
    """Draw an i.i.d. circularly-symmetric unit-variance Gaussian channel.

    ``rng_seed`` may be an integer seed, a SeedSequence, or a Generator;
    the same seed always reproduces the same matrix.
    """
    if n_r < 1 or n_t < 1:
        raise ValueError("channel dimensions must be positive")
    rng = np.random.default_rng(rng_seed)
    return (
        rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t))
    ) / np.sqrt(2.0)


def effective_channel(
    h_compact: np.ndarray,
    amplitude_scale: float,
    bank_t: CoderBank,
    bank_r: CoderBank,
) -> np.ndarray:
    """Collapse the compact channel through both coder banks.

    Returns the n_rx x n_tx matrix of complex gains between physical
    antennas for the configured coders, with the path-loss amplitude
    applied to the compact channel.
    """
    w_t = bank_t.pattern_bank
    w_r = bank_r.pattern_bank
    if h_compact.shape != (w_r.shape[0], w_t.shape[0]):
        raise DimensionMismatch(
            f"compact channel {h_compact.shape} does not couple banks "
            f"({w_r.shape[0]} receive rows, {w_t.shape[0]} transmit rows)"
        )
    return w_r.conj().T @ (amplitude_scale * h_compact) @ w_t


def path_loss_amplitude(path_loss_db: float) -> float:
    """Amplitude factor equivalent to the given power path loss in dB."""
    return float(np.sqrt(10.0 ** (-path_loss_db / 10.0)))


def virtual_channel_consistency(
    h_v: np.ndarray,
    net: MultiportNetwork,
    basis: BeamspaceBasis,
    geom_t: ArrayGeometry,
    geom_r: ArrayGeometry,
    coders_t: list[AntennaCoder],
    coders_r: list[AntennaCoder],
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the channel along two independent routes for equality testing.

    Route one contracts the angular virtual channel directly with the
    normalized, phase-shifted physical patterns of each element. Route two
    goes through the stacked beamspace bases, the compact channel, and the
    coder banks. On an antenna whose pattern matrix has rank at most n_eff
    the two agree to roundoff; the gap otherwise is the truncation
    residual. Test-support operation.
    """
    two_k = 2 * geom_t.k_angles
    if h_v.shape != (two_k, two_k):
        raise DimensionMismatch(
            f"virtual channel must be {two_k} x {two_k}, got {h_v.shape}"
        )

    def physical_columns(geom, coders):
        cols = []
        for m, coder in enumerate(coders, start=1):
            e = radiation_pattern(net, coder, CODER_EXCITATION)
            cols.append(array_phase_shifts(geom, m) * e / np.linalg.norm(e))
        return np.column_stack(cols)

    e_t = physical_columns(geom_t, coders_t)
    e_r = physical_columns(geom_r, coders_r)
    h_pattern = e_r.T @ h_v @ e_t

    bank_t = build_coder_bank(net, basis, coders_t, TRANSMIT)
    bank_r = build_coder_bank(net, basis, coders_r, RECEIVE)
    stacked_t = build_array_basis(basis, geom_t).stacked
    stacked_r = build_array_basis(basis, geom_r).stacked
    h_compact = stacked_r.T @ h_v @ stacked_t
    h_beamspace = effective_channel(h_compact, 1.0, bank_t, bank_r)
    return h_pattern, h_beamspace
