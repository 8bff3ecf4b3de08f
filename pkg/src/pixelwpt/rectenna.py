"""Nonlinear rectenna model and DC-combined output power.

Each receive antenna feeds its own diode rectifier, modelled by a Taylor
expansion of the diode characteristic around the zero quiescent point and
truncated at an even order. The rectified outputs are summed by an ideal
DC combiner, so the figure of merit is the sum of squared per-branch DC
voltages over the load resistance.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import DimensionMismatch, UnsupportedOrder


@dataclass(frozen=True)
class RectennaParams:
    """Diode rectifier parameters.

    Defaults describe a 50 ohm antenna into a 5 kilo-ohm load with a
    Schottky diode at room temperature; fourth-order truncation keeps the
    lowest-order nonlinearity that rewards amplitude peaking. Setting
    ``taylor_order=2`` reduces the model to a linear energy harvester.
    """

    r_ant: float = 50.0
    r_load: float = 5e3
    ideality: float = 1.05
    thermal_voltage: float = 25e-3
    taylor_order: int = 4

    def __post_init__(self):
        for name in ("r_ant", "r_load", "ideality", "thermal_voltage"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.taylor_order < 2 or self.taylor_order % 2 != 0:
            raise ValueError("taylor_order must be an even integer >= 2")

    @property
    def orders(self) -> tuple:
        """The even expansion orders 2, 4, ..., taylor_order."""
        return tuple(range(2, self.taylor_order + 1, 2))


@dataclass(frozen=True)
class HarvestResult:
    """Per-branch DC voltages and the combined output power."""

    per_antenna_voltage: np.ndarray
    total_dc_power: float


def taylor_coefficients(params: RectennaParams) -> np.ndarray:
    """Diode expansion coefficients for each retained even order.

    Entry k corresponds to order 2(k+1) and equals
    r_ant**(i/2) / (i! * (ideality * thermal_voltage)**(i-1)).
    """
    diode_scale = params.ideality * params.thermal_voltage
    return np.array(
        [
            params.r_ant ** (i / 2) / (factorial(i) * diode_scale ** (i - 1))
            for i in params.orders
        ]
    )


def moment_weights(order: int, max_order: int | None = None) -> float:
    """Closed-form time average of sin(t)**order over one carrier period.

    Equals C(order, order/2) / 2**order for even orders; the second and
    fourth moments are 1/2 and 3/8.

    Raises:
        UnsupportedOrder: ``order`` is odd, below 2, or beyond ``max_order``.
    """
    if order < 2 or order % 2 != 0:
        raise UnsupportedOrder(f"moment weights are defined for even orders >= 2, got {order}")
    if max_order is not None and order > max_order:
        raise UnsupportedOrder(f"order {order} exceeds the Taylor truncation {max_order}")
    return comb(order, order // 2) / 2.0**order


def output_dc_voltage(params: RectennaParams, received_amplitude: float) -> float:
    """DC voltage of one rectifier fed a sinusoid of the given amplitude."""
    if received_amplitude < 0:
        raise ValueError("received amplitude must be nonnegative")
    return float(dc_voltages_from_amplitudes(params, np.array([received_amplitude]))[0])


@lru_cache(maxsize=None)
def _voltage_terms(params: RectennaParams) -> tuple:
    """Per-order products of diode coefficient and carrier moment."""
    betas = taylor_coefficients(params)
    return tuple(
        (order, float(beta * moment_weights(order, params.taylor_order)))
        for beta, order in zip(betas, params.orders)
    )


def dc_voltages_from_amplitudes(params: RectennaParams, amplitudes: np.ndarray) -> np.ndarray:
    """Vectorized per-branch DC voltage for an array of received amplitudes."""
    v = np.zeros_like(amplitudes, dtype=float)
    for order, coefficient in _voltage_terms(params):
        v += coefficient * amplitudes**order
    return v


def dc_power_from_amplitudes(params: RectennaParams, amplitudes: np.ndarray) -> float:
    """Combined DC power for an array of per-branch received amplitudes."""
    voltages = dc_voltages_from_amplitudes(params, amplitudes)
    return float(np.sum(voltages**2) / params.r_load)


def dc_power_per_column(params: RectennaParams, amplitudes: np.ndarray) -> np.ndarray:
    """Combined DC power of each column of a branches-by-candidates matrix.

    Batched form of :func:`dc_power_from_amplitudes` for search loops that
    score many candidate configurations at once.
    """
    voltages = dc_voltages_from_amplitudes(params, amplitudes)
    return np.sum(voltages**2, axis=0) / params.r_load


def total_dc_power(params: RectennaParams, h_effective: np.ndarray, p: np.ndarray) -> HarvestResult:
    """Harvest of the whole receive array under DC combining.

    Each branch sees the amplitude of its channel output under beamformer
    ``p``; the combined power is the sum of squared branch voltages over
    the load resistance.
    """
    h = np.asarray(h_effective)
    p = np.asarray(p)
    if h.ndim != 2 or p.shape != (h.shape[1],):
        raise DimensionMismatch(
            f"beamformer of length {p.shape} does not match channel {h.shape}"
        )
    amplitudes = np.abs(h @ p)
    voltages = dc_voltages_from_amplitudes(params, amplitudes)
    return HarvestResult(
        per_antenna_voltage=voltages,
        total_dc_power=float(np.sum(voltages**2) / params.r_load),
    )


def average_rf_power(received_amplitude: float) -> float:
    """Diagnostic mean RF power of one branch, i.e. half the squared amplitude."""
    return 0.5 * received_amplitude**2
