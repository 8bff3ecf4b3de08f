"""Multiport model of a single pixel antenna.

A pixel antenna with Q RF switches is a (Q+1)-port network: one antenna
port plus Q pixel ports. A binary antenna coder opens or shorts each
pixel port, which reshapes the port currents and hence the radiated
pattern. The beamspace basis is the truncated SVD of the open-circuit
pattern matrix; its column count is the number of orthogonal patterns
the antenna can synthesize.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyPattern, SingularSystem, ZeroPattern

# Singular values below this multiple of the largest one are treated as
# numerical noise and never retained, whatever the energy fraction.
SVD_NOISE_FLOOR = 1e-12

# Reciprocal condition number below which a reduced impedance block is
# declared singular instead of being solved.
RCOND_FLOOR = 1e-12

TRANSMIT = "transmit"
RECEIVE = "receive"

# Antenna-port drive used when evaluating a coder; any scale cancels in
# the unit-norm pattern coder.
CODER_EXCITATION = 1.0 + 0.0j


@dataclass(frozen=True)
class MultiportNetwork:
    """Impedance and open-circuit pattern data of one pixel antenna.

    Attributes:
        q_switches: Number of pixel ports Q.
        z_aa: Self impedance of the antenna port (ohm).
        z_ap: Trans-impedance between antenna port and pixel ports,
            length Q. Reciprocity makes this equal to the pixel-to-antenna
            coupling, so a single vector covers both directions.
        z_pp: Pixel-port impedance block, Q x Q symmetric.
        e_oc: Open-circuit radiation patterns, 2K x (Q+1). Column 0 is the
            antenna port; columns 1..Q are the pixel ports. Rows stack the
            two polarization components over K azimuth samples.
    """

    q_switches: int
    z_aa: complex
    z_ap: np.ndarray
    z_pp: np.ndarray
    e_oc: np.ndarray

    def __post_init__(self):
        q = self.q_switches
        if self.z_ap.shape != (q,):
            raise DimensionMismatch(f"z_ap must have shape ({q},), got {self.z_ap.shape}")
        if self.z_pp.shape != (q, q):
            raise DimensionMismatch(f"z_pp must have shape ({q}, {q}), got {self.z_pp.shape}")
        if self.e_oc.ndim != 2 or self.e_oc.shape[1] != q + 1:
            raise DimensionMismatch(
                f"e_oc must have {q + 1} columns, got shape {self.e_oc.shape}"
            )
        if self.e_oc.shape[0] % 2 != 0:
            raise DimensionMismatch("e_oc must stack two polarizations: row count must be even")
        scale = np.abs(self.z_pp).max() if q else 0.0
        if q and not np.allclose(self.z_pp, self.z_pp.T, atol=1e-9 * max(scale, 1.0)):
            raise ValueError("z_pp must be symmetric (reciprocal network)")

    @property
    def k_angles(self) -> int:
        return self.e_oc.shape[0] // 2


@dataclass(frozen=True, eq=False)
class AntennaCoder:
    """Binary switch states of one pixel antenna: 1 opens a port, 0 shorts it."""

    bits: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.bits)
        if raw.ndim != 1:
            raise ValueError("coder bits must be a flat vector")
        if raw.dtype == np.uint8:
            if raw.size and raw.max() > 1:
                raise ValueError("coder bits must be exactly 0 or 1")
            bits = raw
        else:
            if raw.size and not np.all((raw == 0) | (raw == 1)):
                raise ValueError("coder bits must be exactly 0 or 1")
            bits = raw.astype(np.uint8)
        object.__setattr__(self, "bits", bits)
        # Hashable identity of the switch configuration, used as cache key.
        object.__setattr__(self, "key", bits.tobytes())

    def __len__(self) -> int:
        return self.bits.size

    @classmethod
    def all_short(cls, q: int) -> "AntennaCoder":
        return cls(np.zeros(q, dtype=np.uint8))

    @classmethod
    def all_open(cls, q: int) -> "AntennaCoder":
        return cls(np.ones(q, dtype=np.uint8))

    @classmethod
    def random(cls, q: int, rng: np.random.Generator) -> "AntennaCoder":
        return cls(rng.integers(0, 2, size=q, dtype=np.uint8))


@dataclass(frozen=True)
class PortCurrents:
    """Currents at every port under a given coder and antenna excitation."""

    i_antenna: complex
    i_pixels: np.ndarray

    @property
    def full(self) -> np.ndarray:
        """All Q+1 port currents with the antenna port first."""
        return np.concatenate(([self.i_antenna], self.i_pixels))


@dataclass(frozen=True)
class BeamspaceBasis:
    """Truncated SVD of the open-circuit pattern matrix.

    u has orthonormal columns spanning the retained radiation subspace,
    s holds the retained singular values in descending order, and v maps
    port currents into that subspace.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    n_eff: int
    energy_fraction: float


def switch_load(coder: AntennaCoder) -> tuple[np.ndarray, np.ndarray]:
    """Partition pixel-port indices into (open, short) per the coder bits."""
    bits = coder.bits
    return np.flatnonzero(bits == 1), np.flatnonzero(bits == 0)


def pixel_currents(
    net: MultiportNetwork, coder: AntennaCoder, i_antenna: complex
) -> PortCurrents:
    """Solve for the pixel-port currents induced by the antenna-port drive.

    Open ports carry exactly zero current and are removed from the linear
    system; the shorted ports see the reduced pixel impedance block. This
    avoids the conditioning blow-up of modelling an open switch as a huge
    finite load.

    Raises:
        SingularSystem: the reduced impedance block cannot be solved.
    """
    if len(coder) != net.q_switches:
        raise DimensionMismatch(
            f"coder has {len(coder)} bits, network has {net.q_switches} switches"
        )
    i_pixels = np.zeros(net.q_switches, dtype=complex)
    _, short = switch_load(coder)
    if short.size:
        z_ss = net.z_pp[np.ix_(short, short)]
        if _reciprocal_condition(z_ss) < RCOND_FLOOR:
            raise SingularSystem(
                f"reduced z_pp block for short ports {short.tolist()} is singular"
            )
        i_pixels[short] = -np.linalg.solve(z_ss, net.z_ap[short]) * i_antenna
    return PortCurrents(i_antenna=complex(i_antenna), i_pixels=i_pixels)


def pixel_currents_finite_load(
    net: MultiportNetwork,
    coder: AntennaCoder,
    i_antenna: complex,
    open_impedance: float = 1e12,
) -> PortCurrents:
    """Validation oracle: model open switches as a large finite impedance.

    Solves the full Q x Q system with the open ports loaded by
    ``open_impedance`` ohms instead of being removed. Production code uses
    :func:`pixel_currents`; this path exists so the exact-elimination solve
    can be cross-checked against the limiting formula.
    """
    open_ports, _ = switch_load(coder)
    z_load = np.zeros(net.q_switches, dtype=complex)
    z_load[open_ports] = open_impedance
    i_pixels = -np.linalg.solve(net.z_pp + np.diag(z_load), net.z_ap) * i_antenna
    return PortCurrents(i_antenna=complex(i_antenna), i_pixels=i_pixels)


def radiation_pattern(
    net: MultiportNetwork, coder: AntennaCoder, i_antenna: complex
) -> np.ndarray:
    """Radiated pattern of the coded antenna: open-circuit patterns weighted
    by the port currents."""
    currents = pixel_currents(net, coder, i_antenna)
    return net.e_oc @ currents.full


def beamspace_decompose(net: MultiportNetwork, energy_fraction: float) -> BeamspaceBasis:
    """Truncate the SVD of the pattern matrix at the requested energy capture.

    Retains the smallest leading set of singular values whose squared sum
    reaches ``energy_fraction`` of the total pattern energy. Values below
    ``SVD_NOISE_FLOOR`` times the largest are dropped unconditionally.

    Raises:
        EmptyPattern: every pattern entry is zero.
    """
    if not 0.0 < energy_fraction <= 1.0:
        raise ValueError(f"energy_fraction must be in (0, 1], got {energy_fraction}")
    u, s, vh = np.linalg.svd(net.e_oc, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        raise EmptyPattern("open-circuit pattern matrix is zero")
    total = float(np.sum(s**2))
    keep = s > SVD_NOISE_FLOOR * s[0]
    s_kept = s[keep]
    cumulative = np.cumsum(s_kept**2)
    # Slack absorbs roundoff when the target fraction is met exactly.
    target = energy_fraction * total * (1.0 - 1e-12)
    n_eff = int(np.searchsorted(cumulative, target) + 1)
    n_eff = min(n_eff, s_kept.size)
    return BeamspaceBasis(
        u=u[:, :n_eff],
        s=s_kept[:n_eff].copy(),
        v=vh[:n_eff].conj().T,
        n_eff=n_eff,
        energy_fraction=energy_fraction,
    )


def pattern_coder(basis: BeamspaceBasis, currents: PortCurrents, side: str) -> np.ndarray:
    """Project a coded excitation onto the beamspace basis and normalize.

    The transmit side weights the basis by the port currents directly;
    the receive side uses the conjugate currents so that the conjugate
    transpose in the channel composition cancels back to the physical
    pattern.

    Returns a unit-norm vector of length n_eff.

    Raises:
        ZeroPattern: the excitation radiates nothing in the retained subspace.
    """
    i = currents.full
    if i.shape[0] != basis.v.shape[0]:
        raise DimensionMismatch(
            f"current vector length {i.shape[0]} does not match basis ports {basis.v.shape[0]}"
        )
    if side == TRANSMIT:
        w = basis.s * (basis.v.conj().T @ i)
    elif side == RECEIVE:
        w = basis.s * (basis.v.T @ i.conj())
    else:
        raise ValueError(f"side must be '{TRANSMIT}' or '{RECEIVE}', got {side!r}")
    norm = float(np.linalg.norm(w))
    if not norm > 0.0:
        raise ZeroPattern("coder produces no radiation in the retained subspace")
    return w / norm


def _reciprocal_condition(a: np.ndarray) -> float:
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])
