"""Joint optimization of transmit beamforming and binary antenna coders.

The DC-power objective couples a complex beamformer with the binary
switch states of every antenna. The beamformer subproblem becomes
unconstrained through the norm reparametrization p = sqrt(2P) p0/||p0||
and is solved by a BFGS quasi-Newton iteration with analytic gradients.
The coder subproblem is attacked by successive exhaustive Boolean
optimization (SEBO): cyclic exhaustive search over bit blocks plus
random-flip restarts warm-started from the incumbent. An alternating
loop interleaves the two, never discarding the incumbent, so the
objective trace is non-decreasing by construction.
"""

from dataclasses import dataclass

import numpy as np

from .channel import CoderBank
from .errors import DimensionMismatch, ZeroChannel, ZeroPattern
from .multiport import (
    CODER_EXCITATION,
    RECEIVE,
    TRANSMIT,
    AntennaCoder,
    BeamspaceBasis,
    MultiportNetwork,
    pattern_coder,
    pixel_currents,
)
from .rectenna import (
    RectennaParams,
    dc_power_from_amplitudes,
    dc_power_per_column,
    dc_voltages_from_amplitudes,
    moment_weights,
    taylor_coefficients,
)

ARMIJO_SLOPE = 1e-4
MIN_LINE_STEP = 1e-18
CURVATURE_FLOOR = 1e-12


@dataclass(frozen=True)
class Beamformer:
    """Complex per-antenna transmit weights under a total power budget."""

    weights: np.ndarray
    power_budget: float

    @property
    def transmit_power(self) -> float:
        """Allocated power, half the squared weight norm."""
        return 0.5 * float(np.linalg.norm(self.weights) ** 2)


@dataclass(frozen=True)
class OptimizerConfig:
    """Tuning knobs for the beamformer, coder, and alternating loops.

    ``sebo_flip_count=None`` derives the restart perturbation size from the
    coder length as ceil(Q/8).
    """

    sebo_block_size: int = 4
    sebo_max_iters: int = 50
    sebo_restarts: int = 3
    sebo_flip_count: int | None = None
    ao_tolerance: float = 1e-6
    ao_max_iters: int = 20
    qn_gradient_tolerance: float = 1e-8
    qn_max_iters: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if self.sebo_block_size < 1:
            raise ValueError("sebo_block_size must be >= 1")
        if self.ao_tolerance <= 0 or self.qn_gradient_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.ao_max_iters < 1 or self.sebo_max_iters < 1:
            raise ValueError("iteration caps must be >= 1")

    def flip_count_for(self, q_switches: int) -> int:
        if self.sebo_flip_count is not None:
            return self.sebo_flip_count
        return -(-q_switches // 8)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one alternating-optimization run."""

    objective_trace: np.ndarray
    final_beamformer: Beamformer
    final_coders: tuple[CoderBank, CoderBank]
    iterations: int
    converged: bool


@dataclass(frozen=True)
class WptProblem:
    """One power-transfer instance: antenna, channel draw, and budgets."""

    net: MultiportNetwork
    basis: BeamspaceBasis
    h_compact: np.ndarray
    amplitude_scale: float
    rect: RectennaParams
    power_budget: float
    n_tx: int
    n_rx: int

    def __post_init__(self):
        n_eff = self.basis.n_eff
        expected = (self.n_rx * n_eff, self.n_tx * n_eff)
        if self.h_compact.shape != expected:
            raise DimensionMismatch(
                f"compact channel {self.h_compact.shape} does not match "
                f"{self.n_rx} x {self.n_tx} antennas with {n_eff} patterns each"
            )


class ProblemEvaluator:
    """Caches pattern coders of one problem and evaluates its objective.

    Every candidate coder met during a search is projected once; repeat
    visits hit the cache. All channel assembly for a fixed problem should
    go through a single evaluator so the search sees one consistent
    objective.
    """

    def __init__(self, problem: WptProblem):
        self.problem = problem
        self.scaled_h = problem.amplitude_scale * problem.h_compact
        n_eff = problem.basis.n_eff
        self.scaled_blocks = self.scaled_h.reshape(problem.n_rx, n_eff, problem.n_tx, n_eff)
        self._cache = {TRANSMIT: {}, RECEIVE: {}}
        self._receive_conj = {}

    def coder_vector(self, coder: AntennaCoder, side: str) -> np.ndarray:
        cache = self._cache[side]
        w = cache.get(coder.key)
        if w is None:
            currents = pixel_currents(self.problem.net, coder, CODER_EXCITATION)
            w = pattern_coder(self.problem.basis, currents, side)
            cache[coder.key] = w
            if side == RECEIVE:
                self._receive_conj[coder.key] = w.conj()
        return w

    def receive_vector_conj(self, coder: AntennaCoder) -> np.ndarray:
        w = self._receive_conj.get(coder.key)
        if w is None:
            self.coder_vector(coder, RECEIVE)
            w = self._receive_conj[coder.key]
        return w

    def gather_vectors(self, coders, side: str) -> tuple[np.ndarray, np.ndarray]:
        """Stack pattern coders row-wise, flagging zero-pattern entries.

        Returns (matrix, valid_mask); invalid rows are zero-filled. The
        receive side is returned conjugated, ready for projection.
        """
        n_eff = self.problem.basis.n_eff
        matrix = np.zeros((len(coders), n_eff), dtype=complex)
        valid = np.ones(len(coders), dtype=bool)
        fetch = self.receive_vector_conj if side == RECEIVE else (
            lambda c: self.coder_vector(c, TRANSMIT)
        )
        for i, coder in enumerate(coders):
            try:
                matrix[i] = fetch(coder)
            except ZeroPattern:
                valid[i] = False
        return matrix, valid

    def banks(self, coders_t, coders_r) -> tuple[CoderBank, CoderBank]:
        return (
            self._assemble_bank(coders_t, TRANSMIT),
            self._assemble_bank(coders_r, RECEIVE),
        )

    def effective_channel(self, coders_t, coders_r) -> np.ndarray:
        """Per-antenna channel for the given coders, path loss included.

        Contracts the compact channel blockwise with the cached pattern
        coders; equal to collapsing through the assembled banks.
        """
        w_t = np.stack([self.coder_vector(c, TRANSMIT) for c in coders_t])
        w_r_conj = np.stack([self.receive_vector_conj(c) for c in coders_r])
        return np.einsum("na,namb,mb->nm", w_r_conj, self.scaled_blocks, w_t)

    def transmit_stack(self, coders_t, weights: np.ndarray) -> np.ndarray:
        """Weighted concatenation of the transmit pattern coders."""
        n_eff = self.problem.basis.n_eff
        t = np.empty(self.problem.n_tx * n_eff, dtype=complex)
        for m, coder in enumerate(coders_t):
            t[m * n_eff : (m + 1) * n_eff] = weights[m] * self.coder_vector(coder, TRANSMIT)
        return t

    def received_amplitudes(self, coders_t, coders_r, weights: np.ndarray) -> np.ndarray:
        """Per-branch received amplitude |[H p]_n| without assembling H."""
        n_eff = self.problem.basis.n_eff
        u = self.scaled_h @ self.transmit_stack(coders_t, weights)
        y = np.empty(self.problem.n_rx, dtype=complex)
        for n, coder in enumerate(coders_r):
            block = u[n * n_eff : (n + 1) * n_eff]
            y[n] = self.receive_vector_conj(coder) @ block
        return np.abs(y)

    def fixed_beamformer_objective(self, weights: np.ndarray) -> "FixedBeamformerObjective":
        """DC-power objective over coders with the beamformer held fixed."""
        return FixedBeamformerObjective(self, weights)

    def _assemble_bank(self, coders, side: str) -> CoderBank:
        n_eff = self.problem.basis.n_eff
        bank = np.zeros((len(coders) * n_eff, len(coders)), dtype=complex)
        for m, coder in enumerate(coders):
            bank[m * n_eff : (m + 1) * n_eff, m] = self.coder_vector(coder, side)
        return CoderBank(coders=tuple(coders), pattern_bank=bank)


class FixedBeamformerObjective:
    """DC-power objective over coders with the beamformer held fixed.

    Callable on (coders_t, coders_r); candidates whose pattern projection
    vanishes score -inf so searches never accept them. Also provides the
    batched per-block evaluation the coder search exploits: replacing one
    antenna's coder perturbs one slice of the transmit stack or one output
    branch, so a whole candidate block is scored with a couple of matrix
    products.
    """

    def __init__(self, evaluator: ProblemEvaluator, weights: np.ndarray):
        self.evaluator = evaluator
        self.weights = np.asarray(weights)

    def __call__(self, coders_t, coders_r) -> float:
        try:
            amplitudes = self.evaluator.received_amplitudes(coders_t, coders_r, self.weights)
        except ZeroPattern:
            return -np.inf
        return dc_power_from_amplitudes(self.evaluator.problem.rect, amplitudes)

    def block_candidates(self, antenna: int, candidates, coders_t, coders_r) -> np.ndarray:
        """Objective value for each candidate coder of one antenna.

        ``antenna`` indexes transmit antennas first, then receive.
        """
        ev = self.evaluator
        problem = ev.problem
        n_eff = problem.basis.n_eff
        n_tx = problem.n_tx
        t = ev.transmit_stack(coders_t, self.weights)
        u = ev.scaled_h @ t
        if antenna < n_tx:
            m = antenna
            sub = ev.scaled_h[:, m * n_eff : (m + 1) * n_eff]
            u_rest = u - sub @ t[m * n_eff : (m + 1) * n_eff]
            w_cand, valid = ev.gather_vectors(candidates, TRANSMIT)
            u_cand = u_rest[:, None] + sub @ (self.weights[m] * w_cand.T)
            w_r_conj = np.stack([ev.receive_vector_conj(c) for c in coders_r])
            stacked = u_cand.reshape(problem.n_rx, n_eff, len(candidates))
            amplitudes = np.abs(np.einsum("na,naC->nC", w_r_conj, stacked))
        else:
            n = antenna - n_tx
            y = np.empty(problem.n_rx, dtype=complex)
            for i, coder in enumerate(coders_r):
                y[i] = ev.receive_vector_conj(coder) @ u[i * n_eff : (i + 1) * n_eff]
            w_cand, valid = ev.gather_vectors(candidates, RECEIVE)
            amplitudes = np.repeat(np.abs(y)[:, None], len(candidates), axis=1)
            amplitudes[n] = np.abs(w_cand @ u[n * n_eff : (n + 1) * n_eff])
        values = dc_power_per_column(problem.rect, amplitudes)
        values[~valid] = -np.inf
        return values


class BeamformingObjective:
    """DC power as a smooth function of unconstrained real parameters.

    A complex weight vector p0 is flattened into 2M reals; the feasible
    beamformer is p = sqrt(2 * power_budget) * p0 / ||p0||, which makes the
    power constraint implicit and the objective invariant to positive
    rescaling of p0. Gradients are analytic via the chain rule through the
    per-branch amplitudes and the normalization map.
    """

    def __init__(self, h_effective: np.ndarray, params: RectennaParams, power_budget: float):
        self.h = np.asarray(h_effective)
        self.params = params
        self.scale = float(np.sqrt(2.0 * power_budget))
        self.m = self.h.shape[1]
        orders = np.array(params.orders, dtype=float)
        self._orders = orders
        self._gammas = taylor_coefficients(params) * np.array(
            [moment_weights(int(i), params.taylor_order) for i in orders]
        )

    def beamformer(self, x: np.ndarray) -> np.ndarray:
        p0 = x[: self.m] + 1j * x[self.m :]
        return self.scale * p0 / np.linalg.norm(p0)

    def initial_point(self, weights: np.ndarray) -> np.ndarray:
        return np.concatenate([weights.real, weights.imag])

    def value(self, x: np.ndarray) -> float:
        amplitudes = np.abs(self.h @ self.beamformer(x))
        return dc_power_from_amplitudes(self.params, amplitudes)

    def value_and_gradient(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        p0 = x[: self.m] + 1j * x[self.m :]
        r = np.linalg.norm(p0)
        p = self.scale * p0 / r
        c = self.h @ p
        a = np.abs(c)
        v = dc_voltages_from_amplitudes(self.params, a)
        value = float(np.sum(v**2) / self.params.r_load)
        # dv/da divided by a stays polynomial because orders start at 2.
        slope_over_a = np.zeros_like(a)
        for gamma, order in zip(self._gammas, self._orders):
            slope_over_a += gamma * order * a ** (order - 2.0)
        branch_weight = (2.0 / self.params.r_load) * v * slope_over_a * c
        grad_p = self.h.conj().T @ branch_weight
        radial = np.real(np.vdot(p0, grad_p)) / r**2
        grad_p0 = (self.scale / r) * (grad_p - radial * p0)
        return value, np.concatenate([grad_p0.real, grad_p0.imag])


def numerical_gradient(fn, x: np.ndarray, rel_step: float = 1e-6) -> np.ndarray:
    """Central finite differences with per-coordinate relative steps."""
    grad = np.empty_like(x)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        forward = x.copy()
        backward = x.copy()
        forward[i] += h
        backward[i] -= h
        grad[i] = (fn(forward) - fn(backward)) / (2.0 * h)
    return grad


def init_beamformer_svd(h_effective: np.ndarray, power_budget: float) -> Beamformer:
    """Beamformer along the dominant right singular direction of the channel.

    Optimal for average received RF power; the starting point for the
    nonlinearity-aware refinement.

    Raises:
        ZeroChannel: the channel has no energy to steer along.
    """
    h = np.asarray(h_effective)
    if not np.linalg.norm(h) > 0.0:
        raise ZeroChannel("cannot initialize beamformer on an all-zero channel")
    _, _, vh = np.linalg.svd(h, full_matrices=False)
    v1 = vh[0].conj()
    return Beamformer(weights=np.sqrt(2.0 * power_budget) * v1, power_budget=power_budget)


def optimize_beamformer(
    h_effective: np.ndarray,
    params: RectennaParams,
    power_budget: float,
    init: Beamformer,
    config: OptimizerConfig,
) -> Beamformer:
    """Refine a beamformer by quasi-Newton ascent of the DC-power objective.

    Returns a beamformer meeting the power budget exactly whose objective is
    never below the initial point's.
    """
    weights, _ = _optimize_weights(h_effective, params, power_budget, init.weights, config)
    return Beamformer(weights=weights, power_budget=power_budget)


def _optimize_weights(h, params, power_budget, init_weights, config):
    """BFGS with backtracking line search on the reparametrized objective.

    Minimizes the negated objective normalized by its starting value, so
    the gradient tolerance acts relative to the problem's power scale. The
    objective is invariant to rescaling of the parameter vector, which is
    exploited twice: the starting point is normalized, and the iterate is
    renormalized (an exact gauge transform of gradient and inverse Hessian)
    whenever its norm drifts, keeping the parametrization conditioned.
    Returns the best weights seen and their objective value.
    """
    if not np.linalg.norm(h) > 0.0:
        raise ZeroChannel("cannot optimize a beamformer on an all-zero channel")
    objective = BeamformingObjective(h, params, power_budget)
    x = objective.initial_point(init_weights)
    x = x / np.linalg.norm(x)
    f0, g0 = objective.value_and_gradient(x)
    ref = f0 if f0 > 0.0 else 1.0

    def phi(point):
        value, grad = objective.value_and_gradient(point)
        return value, -value / ref, -grad / ref

    value, f, g = f0, -f0 / ref, -g0 / ref
    best_x, best_value = x.copy(), value
    identity = np.eye(x.size)
    h_inv = identity.copy()
    first_pair = True
    for _ in range(config.qn_max_iters):
        if np.max(np.abs(g)) <= config.qn_gradient_tolerance:
            break
        direction = -h_inv @ g
        slope = float(direction @ g)
        if slope >= 0.0:
            direction = -g
            slope = -float(g @ g)
        step = 1.0
        accepted = False
        while step >= MIN_LINE_STEP:
            x_new = x + step * direction
            value_new, f_new, g_new = phi(x_new)
            if value_new > best_value:
                best_x, best_value = x_new.copy(), value_new
            if np.isfinite(f_new) and f_new <= f + ARMIJO_SLOPE * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > CURVATURE_FLOOR * np.linalg.norm(s) * np.linalg.norm(y):
            if first_pair:
                # Shanno-Phua scaling absorbs the objective's curvature
                # scale before the first secant update.
                h_inv = (sy / float(y @ y)) * identity
                first_pair = False
            rho = 1.0 / sy
            left = identity - rho * np.outer(s, y)
            h_inv = left @ h_inv @ left.T + rho * np.outer(s, s)
        x, f, g = x_new, f_new, g_new
        radius = float(np.linalg.norm(x))
        if radius > 4.0 or radius < 0.25:
            x = x / radius
            g = g * radius
            h_inv = h_inv / radius**2
    return objective.beamformer(best_x), best_value


def sebo(objective, initial, config: OptimizerConfig, rng=None):
    """Successive exhaustive Boolean optimization over both coder sets.

    Stage one sweeps fixed-size bit blocks cyclically across every antenna
    on both sides, exhaustively enumerating each active block and accepting
    only strict improvements, until a full cycle stalls or the cycle cap is
    hit. Stage two flips a few random bits and reruns stage one, keeping
    the better of incumbent and candidate; the flip rounds warm-start from
    the incumbent.

    Args:
        objective: callable (coders_t, coders_r) -> float, higher is better.
            If it exposes ``block_candidates(antenna, candidates, coders_t,
            coders_r) -> scores``, whole blocks are scored in one batched
            call; acceptance still goes through the scalar objective.
        initial: tuple of transmit and receive AntennaCoder lists.
        config: search parameters.
        rng: generator for the flip positions; defaults to config.rng_seed.

    Returns:
        (coders_t, coders_r) with objective >= the initial objective.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    coders_t, coders_r = initial
    n_tx = len(coders_t)
    bits = [c.bits.copy() for c in coders_t] + [c.bits.copy() for c in coders_r]
    coders = list(coders_t) + list(coders_r)
    positions = [(antenna, offset) for antenna, b in enumerate(bits) for offset in range(b.size)]
    flips = config.flip_count_for(bits[0].size) if bits else 0

    def rebuild(antenna):
        coders[antenna] = AntennaCoder(bits[antenna].copy())

    def evaluate() -> float:
        return objective(coders[:n_tx], coders[n_tx:])

    blocks = []
    for antenna, b in enumerate(bits):
        for start in range(0, b.size, config.sebo_block_size):
            blocks.append((antenna, start, min(start + config.sebo_block_size, b.size)))

    batch_hook = getattr(objective, "block_candidates", None)

    def search_block(antenna, start, stop, value):
        """Exhaust one block; returns the improved value or None.

        Leaves ``bits``/``coders`` at the accepted pattern on improvement
        and restored otherwise. Lexicographic enumeration plus strict
        acceptance keeps the smallest pattern among ties.
        """
        width = stop - start
        saved = bits[antenna][start:stop].copy()
        saved_key = saved.tobytes()
        if batch_hook is not None and value > -np.inf:
            patterns = []
            trials = []
            for code in range(1 << width):
                pattern = _pattern_bits(code, width)
                if pattern.tobytes() == saved_key:
                    continue
                candidate = bits[antenna].copy()
                candidate[start:stop] = pattern
                patterns.append(pattern)
                trials.append(AntennaCoder(candidate))
            scores = batch_hook(antenna, trials, coders[:n_tx], coders[n_tx:])
            best = int(np.argmax(scores))
            if scores[best] > value:
                bits[antenna][start:stop] = patterns[best]
                rebuild(antenna)
                # Accept on the scalar objective's value so the ascent
                # guarantee is independent of batched rounding.
                confirmed = evaluate()
                if confirmed > value:
                    return confirmed
            bits[antenna][start:stop] = saved
            rebuild(antenna)
            return None
        best_value, best_pattern = value, None
        for code in range(1 << width):
            pattern = _pattern_bits(code, width)
            if pattern.tobytes() == saved_key:
                continue
            bits[antenna][start:stop] = pattern
            rebuild(antenna)
            candidate = evaluate()
            if candidate > best_value:
                best_value, best_pattern = candidate, pattern
        bits[antenna][start:stop] = saved if best_pattern is None else best_pattern
        rebuild(antenna)
        return best_value if best_pattern is not None else None

    def stage_one(value):
        # Cycle over blocks until a full round of consecutive searches
        # yields no improvement, or the cycle cap is exhausted.
        stale = 0
        searches = 0
        cap = config.sebo_max_iters * max(len(blocks), 1)
        while blocks and stale < len(blocks) and searches < cap:
            antenna, start, stop = blocks[searches % len(blocks)]
            searches += 1
            improved = search_block(antenna, start, stop, value)
            if improved is None:
                stale += 1
            else:
                value = improved
                stale = 0
        return value

    value = stage_one(evaluate())
    incumbent = [b.copy() for b in bits]
    for _ in range(config.sebo_restarts):
        if not positions or flips == 0:
            break
        chosen = rng.choice(len(positions), size=min(flips, len(positions)), replace=False)
        touched = set()
        for index in chosen:
            antenna, offset = positions[int(index)]
            bits[antenna][offset] ^= 1
            touched.add(antenna)
        for antenna in touched:
            rebuild(antenna)
        candidate_value = stage_one(evaluate())
        if candidate_value > value:
            value = candidate_value
            incumbent = [b.copy() for b in bits]
        else:
            for antenna in range(len(bits)):
                bits[antenna][:] = incumbent[antenna]
                rebuild(antenna)
    return (
        [AntennaCoder(b.copy()) for b in incumbent[:n_tx]],
        [AntennaCoder(b.copy()) for b in incumbent[n_tx:]],
    )


_PATTERN_TABLES: dict = {}


def _pattern_bits(code: int, width: int) -> np.ndarray:
    """Bit pattern of ``code`` with the first position most significant."""
    table = _PATTERN_TABLES.get(width)
    if table is None:
        table = [
            np.array([(c >> (width - 1 - t)) & 1 for t in range(width)], dtype=np.uint8)
            for c in range(1 << width)
        ]
        _PATTERN_TABLES[width] = table
    return table[code]


def alternating_optimize(
    problem: WptProblem,
    config: OptimizerConfig,
    initial_coders=None,
    rng=None,
) -> SolveReport:
    """Alternate quasi-Newton beamforming and SEBO coder search to a fixed point.

    Each iteration rebuilds the channel for the current coders, refines the
    beamformer (quasi-Newton from the better of the SVD initialization and
    the incumbent), then reoptimizes the coders with the beamformer fixed.
    Sub-steps are accepted only when they improve the recorded objective,
    so the trace never decreases. Stops when the relative objective change
    drops below the tolerance or the iteration cap is reached.
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    q = problem.net.q_switches
    if initial_coders is None:
        coders_t = [AntennaCoder.random(q, rng) for _ in range(problem.n_tx)]
        coders_r = [AntennaCoder.random(q, rng) for _ in range(problem.n_rx)]
    else:
        coders_t, coders_r = (list(initial_coders[0]), list(initial_coders[1]))

    evaluator = ProblemEvaluator(problem)
    weights = None
    current = -np.inf
    trace = []
    converged = False
    iterations = 0
    for iterations in range(1, config.ao_max_iters + 1):
        h = evaluator.effective_channel(coders_t, coders_r)
        start = init_beamformer_svd(h, problem.power_budget).weights
        if weights is not None:
            fixed = evaluator.fixed_beamformer_objective(weights)
            svd_obj = evaluator.fixed_beamformer_objective(start)
            if fixed(coders_t, coders_r) > svd_obj(coders_t, coders_r):
                start = weights
        new_weights, new_value = _optimize_weights(
            h, problem.rect, problem.power_budget, start, config
        )
        if new_value > current:
            weights, current = new_weights, new_value
        elif weights is None:
            weights = start

        coder_objective = evaluator.fixed_beamformer_objective(weights)
        new_t, new_r = sebo(coder_objective, (coders_t, coders_r), config, rng)
        coder_value = coder_objective(new_t, new_r)
        if coder_value > current:
            coders_t, coders_r, current = new_t, new_r, coder_value

        trace.append(current)
        if len(trace) >= 2:
            previous = trace[-2]
            if abs(trace[-1] - previous) < config.ao_tolerance * max(abs(previous), 1e-300):
                converged = True
                break

    bank_t, bank_r = evaluator.banks(coders_t, coders_r)
    return SolveReport(
        objective_trace=np.array(trace),
        final_beamformer=Beamformer(weights=weights, power_budget=problem.power_budget),
        final_coders=(bank_t, bank_r),
        iterations=iterations,
        converged=converged,
    )
