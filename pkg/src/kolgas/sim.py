"""Event-driven collisionless gas in a box with stochastic walls.

Particles fly ballistically between exact wall crossings; all interaction
with the world happens at the walls.  Wall models:

``specular_random_sites``  mirror reflection about a site normal tilted by
                           an RNG draw (speed preserved); the tilt stands
                           in for randomly placed wall atoms
``langmuir_thermal``       re-emission with flux-weighted thermal speed at
                           the wall temperature and cosine-law direction
``smooth_specular``        exact mirror reflection, the non-mixing control

Everything is driven by one ``numpy`` generator seeded from the config,
so a given (config, seed) reproduces event logs and traces bit for bit
in single-threaded use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .calibration import Calibration, load_calibration
from .constants import CODATA, SpeciesSpec
from .errors import DomainError, NoPlateauError
from .randomness import default_width, encode_list, estimate_complexity, quantize
from .thermo import GasSpec, rms_speed, state_equations

_KB = CODATA.k_B

WALL_MODELS = ("specular_random_sites", "langmuir_thermal", "smooth_specular")
INIT_MODES = ("equilibrium", "beam", "half_box")

N_PARTICLES_CAP = 10**5

_ORIENT_BINS = 16
_POS_BINS = 8


@dataclass(frozen=True)
class SimConfig:
    """Run description: particle count, box edges (m), wall temperature
    (K), species, wall model, RNG seed, output cadence and duration (s).

    ``perturbation`` is the site-normal tilt scale (radians-like, the
    standard deviation of the tangential normal components) used by
    ``specular_random_sites``.
    """

    n_particles: int
    box: tuple[float, float, float]
    T_wall: float
    species: SpeciesSpec
    wall_model: str
    seed: int
    dt_out: float
    duration: float
    perturbation: float = 0.8

    def __post_init__(self) -> None:
        if not (1 <= self.n_particles <= N_PARTICLES_CAP):
            raise DomainError(
                f"n_particles must be in 1..{N_PARTICLES_CAP}"
            )
        if len(self.box) != 3 or min(self.box) <= 0.0:
            raise DomainError("box must be three positive edge lengths")
        if self.T_wall <= 0.0:
            raise DomainError("T_wall must be positive")
        if self.wall_model not in WALL_MODELS:
            raise DomainError(f"wall_model must be one of {WALL_MODELS}")
        if self.seed < 0 or self.seed >= 2**64:
            raise DomainError("seed must fit in 64 bits")
        if self.dt_out <= 0.0 or self.duration < 0.0:
            raise DomainError("need dt_out > 0 and duration >= 0")
        if self.perturbation < 0.0:
            raise DomainError("perturbation must be nonnegative")

    @property
    def volume(self) -> float:
        return self.box[0] * self.box[1] * self.box[2]

    @property
    def v_th(self) -> float:
        return rms_speed(self.T_wall, self.species.mass)

    @property
    def t_b(self) -> float:
        """Vessel transit time (cube-equivalent side over thermal speed)."""
        return self.volume ** (1.0 / 3.0) / self.v_th


def member_seed(base_seed: int, index: int) -> int:
    """Fixed splitting rule for seed batches: member ``index`` of a batch
    rooted at ``base_seed``."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass
class SimState:
    """Mutable particle state plus the wall-event log."""

    config: SimConfig
    time: float
    pos: np.ndarray        # (n, 3), m
    vel: np.ndarray        # (n, 3), m/s
    rng: np.random.Generator
    _event_chunks: list = field(default_factory=list)
    n_events: int = 0

    def events(self) -> dict[str, np.ndarray]:
        """Wall events so far as column arrays: t, particle_id,
        exit_theta, exit_phi, speed."""
        if not self._event_chunks:
            empty = np.empty(0)
            return {"t": empty, "particle_id": np.empty(0, dtype=np.int64),
                    "exit_theta": empty, "exit_phi": empty, "speed": empty}
        cols = list(zip(*self._event_chunks))
        return {
            "t": np.concatenate(cols[0]),
            "particle_id": np.concatenate(cols[1]),
            "exit_theta": np.concatenate(cols[2]),
            "exit_phi": np.concatenate(cols[3]),
            "speed": np.concatenate(cols[4]),
        }


def _maxwell_velocities(rng: np.random.Generator, n: int, T: float,
                        mass: float) -> np.ndarray:
    sigma = math.sqrt(_KB * T / mass)
    return rng.normal(0.0, sigma, size=(n, 3))


def _lattice_positions(n: int, box: tuple[float, float, float]) -> np.ndarray:
    side = math.ceil(n ** (1.0 / 3.0))
    idx = np.arange(side**3)[:n]
    coords = np.stack(
        [idx // (side * side), (idx // side) % side, idx % side], axis=1
    ).astype(np.float64)
    return (coords + 0.5) / side * np.asarray(box)


def init_sim(config: SimConfig, mode: str) -> SimState:
    """Build the initial state.

    equilibrium   Maxwell velocities at T_wall, uniform positions
    beam          every velocity +x at the thermal speed, lattice positions
                  (maximally structured in both lists)
    half_box      Maxwell velocities, positions confined to the lower
                  half of the x extent
    """
    if mode not in INIT_MODES:
        raise DomainError(f"init mode must be one of {INIT_MODES}")
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    n = config.n_particles
    box = np.asarray(config.box)
    if mode == "equilibrium":
        pos = rng.uniform(0.0, 1.0, size=(n, 3)) * box
        vel = _maxwell_velocities(rng, n, config.T_wall, config.species.mass)
    elif mode == "beam":
        pos = _lattice_positions(n, config.box)
        vel = np.zeros((n, 3))
        vel[:, 0] = config.v_th
    else:
        pos = rng.uniform(0.0, 1.0, size=(n, 3)) * box
        pos[:, 0] *= 0.5
        vel = _maxwell_velocities(rng, n, config.T_wall, config.species.mass)
    return SimState(config=config, time=0.0, pos=pos, vel=vel, rng=rng)


def _perturbed_normals(rng: np.random.Generator, m: int, axis: int,
                       sign: float, sigma: float) -> np.ndarray:
    """Inward unit normals tilted by Gaussian tangential components."""
    normals = np.zeros((m, 3))
    normals[:, axis] = sign
    if sigma > 0.0:
        t_axes = [a for a in range(3) if a != axis]
        normals[:, t_axes[0]] = sigma * rng.normal(size=m)
        normals[:, t_axes[1]] = sigma * rng.normal(size=m)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return normals


def wall_scatter(state: SimState, idx: np.ndarray, axis: int,
                 high_side: bool, t_event: np.ndarray) -> None:
    """Apply the configured wall model to particles ``idx`` hitting the
    given wall, and append the outgoing events to the log."""
    cfg = state.config
    m = idx.size
    sign = -1.0 if high_side else 1.0  # inward normal direction on this axis
    v = state.vel[idx]

    if cfg.wall_model == "smooth_specular":
        v[:, axis] = -v[:, axis]
    elif cfg.wall_model == "specular_random_sites":
        pending = np.arange(m)
        # Resample the site tilt until the reflected ray points back inside.
        while pending.size:
            normals = _perturbed_normals(state.rng, pending.size, axis, sign,
                                         cfg.perturbation)
            vv = v[pending]
            refl = vv - 2.0 * np.sum(vv * normals, axis=1, keepdims=True) * normals
            ok = refl[:, axis] * sign > 0.0
            v[pending[ok]] = refl[ok]
            pending = pending[~ok]
            if cfg.perturbation == 0.0:
                break  # mirror reflection cannot fail the inward check
    else:  # langmuir_thermal
        sigma = math.sqrt(_KB * cfg.T_wall / cfg.species.mass)
        t_axes = [a for a in range(3) if a != axis]
        v[:, axis] = sign * sigma * np.sqrt(-2.0 * np.log(state.rng.uniform(size=m)))
        v[:, t_axes[0]] = sigma * state.rng.normal(size=m)
        v[:, t_axes[1]] = sigma * state.rng.normal(size=m)

    state.vel[idx] = v
    speed = np.linalg.norm(v, axis=1)
    theta = np.arccos(np.clip(v[:, 2] / speed, -1.0, 1.0))
    phi = np.arctan2(v[:, 1], v[:, 0])
    state._event_chunks.append(
        (t_event.copy(), idx.astype(np.int64), theta, phi, speed)
    )
    state.n_events += m


def step_to(state: SimState, t_target: float) -> SimState:
    """Advance every particle to absolute time ``t_target``, resolving
    each wall crossing exactly (no time discretisation error)."""
    if t_target < state.time:
        raise DomainError("cannot step backwards in time")
    box = np.asarray(state.config.box)
    pos, vel = state.pos, state.vel
    remaining = np.full(state.config.n_particles, t_target - state.time)

    while True:
        with np.errstate(divide="ignore", invalid="ignore"):
            t_low = np.where(vel < 0.0, -pos / vel, np.inf)
            t_high = np.where(vel > 0.0, (box - pos) / vel, np.inf)
        t_wall = np.minimum(t_low, t_high)          # (n, 3)
        axis_hit = np.argmin(t_wall, axis=1)
        t_next = t_wall[np.arange(t_wall.shape[0]), axis_hit]
        hits = t_next < remaining
        if not hits.any():
            pos += vel * remaining[:, None]
            break
        dt = np.where(hits, t_next, remaining)
        pos += vel * dt[:, None]
        remaining = remaining - dt
        # Scatter per wall so each batch shares one normal direction.
        for axis in range(3):
            sel = hits & (axis_hit == axis)
            if not sel.any():
                continue
            idx = np.flatnonzero(sel)
            high = vel[idx, axis] > 0.0
            for high_side in (False, True):
                part = idx[high == high_side]
                if part.size == 0:
                    continue
                pos[part, axis] = box[axis] if high_side else 0.0
                wall_scatter(state, part, axis, high_side,
                             t_target - remaining[part])

    state.time = t_target
    return state


def kinetic_energy(state: SimState) -> float:
    """Total kinetic energy, J."""
    return 0.5 * state.config.species.mass * float(np.sum(state.vel**2))


# ---------------------------------------------------------------------------
# disorder trace

@dataclass
class DisorderTrace:
    """Per-sample disorder estimates of a run.

    ``d_hat`` is the summed description length of the two intrinsic lists
    (velocity orientations and nearest-neighbour distances), an estimator
    stand-in for the net disorder; the package checks its sign and
    monotonicity, not its absolute scale.  ``l_total`` is the combined
    literal length of the two lists in bits.
    """

    t: np.ndarray
    d_hat: np.ndarray
    k_orient: np.ndarray
    k_nn: np.ndarray
    chi2_orient: np.ndarray
    chi2_pos: np.ndarray
    l_total: int


def _chi2_uniform(values: np.ndarray, lo: float, hi: float, bins: int) -> float:
    counts, _ = np.histogram(values, bins=bins, range=(lo, hi))
    expected = values.size / bins
    return float(np.sum((counts - expected) ** 2) / expected)


def sample_disorder(state: SimState,
                    reference_box: tuple[float, float, float] | None = None,
                    ) -> tuple[float, float, float, float, float]:
    """One trace row for the current state:
    (d_hat, k_orient, k_nn, chi2_orient, chi2_pos).

    ``reference_box`` fixes the quantization scale of the neighbour list;
    pass the largest box of a multi-stage run so samples are comparable
    across stages.
    """
    cfg = state.config
    k = default_width(cfg.n_particles)
    ref = np.asarray(reference_box if reference_box is not None else cfg.box)
    diag = float(np.linalg.norm(ref))

    speed = np.linalg.norm(state.vel, axis=1)
    u = state.vel[:, 2] / np.where(speed > 0.0, speed, 1.0)
    enc_o = encode_list(quantize(u, k, bounds=(-1.0, 1.0)), k=k,
                        source_tag="orientation")
    k_orient = estimate_complexity(enc_o).k_hat

    _, nbr = cKDTree(state.pos).query(state.pos, k=2)
    nn_dist = np.linalg.norm(state.pos - state.pos[nbr[:, 1]], axis=1)
    enc_nn = encode_list(quantize(nn_dist, k, bounds=(0.0, diag)), k=k,
                         source_tag="nn-distance")
    k_nn = estimate_complexity(enc_nn).k_hat

    chi_o = _chi2_uniform(u, -1.0, 1.0, _ORIENT_BINS)
    chi_p = sum(
        _chi2_uniform(state.pos[:, a], 0.0, cfg.box[a], _POS_BINS)
        for a in range(3)
    )
    return k_orient + k_nn, k_orient, k_nn, chi_o, chi_p


@dataclass
class SimRun:
    """A completed run: its trace, the final state, and the transit time."""

    trace: DisorderTrace
    final_state: SimState
    t_b: float


def simulate(config: SimConfig, init_mode: str,
             reference_box: tuple[float, float, float] | None = None,
             state: SimState | None = None) -> SimRun:
    """Run for ``config.duration`` seconds, sampling the disorder trace
    every ``config.dt_out``.  Pass an existing ``state`` to continue a
    run (e.g. after swapping the box)."""
    if state is None:
        state = init_sim(config, init_mode)
    t0 = state.time
    n_samples = int(round(config.duration / config.dt_out)) + 1
    times = t0 + np.arange(n_samples) * config.dt_out
    rows = []
    for t_k in times:
        step_to(state, float(t_k))
        rows.append(sample_disorder(state, reference_box))
    cols = np.array(rows)
    k = default_width(config.n_particles)
    trace = DisorderTrace(
        t=times - t0,
        d_hat=cols[:, 0],
        k_orient=cols[:, 1],
        k_nn=cols[:, 2],
        chi2_orient=cols[:, 3],
        chi2_pos=cols[:, 4],
        l_total=2 * config.n_particles * k,
    )
    return SimRun(trace=trace, final_state=state, t_b=config.t_b)


def relaxation_time(trace: DisorderTrace, threshold: float = 0.95,
                    calibration: Calibration | None = None) -> float:
    """First sample time at which d_hat reaches ``threshold`` times its
    plateau (the mean over the last quarter of the trace).

    Raises NoPlateauError when the tail has not stabilised or never rises
    above the calibrated floor, as for non-mixing walls.
    """
    calib = calibration or load_calibration()
    d = trace.d_hat
    m = d.size
    if m < 8:
        raise DomainError("trace too short to locate a plateau")
    q3 = d[m // 2: 3 * m // 4]
    q4 = d[3 * m // 4:]
    plateau = float(q4.mean())
    floor = calib.plateau_floor_fraction * trace.l_total
    if plateau < floor:
        raise NoPlateauError(
            f"trace plateau {plateau:.0f} bits is below the floor "
            f"{floor:.0f} bits; the run never disordered"
        )
    if abs(float(q3.mean()) - plateau) > calib.plateau_stability_fraction * plateau:
        raise NoPlateauError("trace tail is still drifting; no plateau")
    crossing = np.flatnonzero(d >= threshold * plateau)
    if crossing.size == 0:
        raise NoPlateauError("trace never reaches the requested level")
    return float(trace.t[crossing[0]])


# ---------------------------------------------------------------------------
# irreversible experiment

@dataclass(frozen=True)
class JouleReport:
    """Free expansion bookkeeping: measured disorder change and the
    closed-form entropy change across the same pair of equilibria."""

    volume_ratio: float
    d_hat_before: float
    d_hat_after: float
    delta_d_hat: float
    delta_s_per_particle_kb: float   # closed form, units of k_B
    ln_ratio: float                  # classical expectation
    trace_before: DisorderTrace
    trace_after: DisorderTrace


def run_joule_expansion(config: SimConfig, volume_ratio: float,
                        settle_transits: float = 4.0,
                        measure_samples: int = 4) -> JouleReport:
    """Equilibrate, stretch the box x-edge by ``volume_ratio`` (removing a
    partition), re-equilibrate, and compare disorder before and after.

    Both stages quantize against the expanded box, so the measured
    disorder change reflects the state and not the ruler.  Ratio 1 is the
    degenerate no-op and reports zero change identically.
    """
    if volume_ratio < 1.0:
        raise DomainError("volume_ratio must be >= 1 (free expansion only)")
    expanded = (config.box[0] * volume_ratio, config.box[1], config.box[2])

    stage1 = SimConfig(
        n_particles=config.n_particles, box=config.box, T_wall=config.T_wall,
        species=config.species, wall_model=config.wall_model, seed=config.seed,
        dt_out=config.dt_out, duration=settle_transits * config.t_b,
        perturbation=config.perturbation,
    )
    run1 = simulate(stage1, "equilibrium", reference_box=expanded)
    d1 = float(run1.trace.d_hat[-measure_samples:].mean())

    spec1 = GasSpec(config.T_wall, stage1.volume, float(config.n_particles),
                    config.species, "fermi")
    s1 = state_equations(spec1)

    if volume_ratio == 1.0:
        return JouleReport(
            volume_ratio=1.0, d_hat_before=d1, d_hat_after=d1,
            delta_d_hat=0.0, delta_s_per_particle_kb=0.0, ln_ratio=0.0,
            trace_before=run1.trace, trace_after=run1.trace,
        )

    t_b_expanded = (stage1.volume * volume_ratio) ** (1.0 / 3.0) / config.v_th
    stage2 = SimConfig(
        n_particles=config.n_particles, box=expanded, T_wall=config.T_wall,
        species=config.species, wall_model=config.wall_model, seed=config.seed,
        dt_out=config.dt_out, duration=(settle_transits + 2.0) * t_b_expanded,
        perturbation=config.perturbation,
    )
    state = run1.final_state
    state.config = stage2
    run2 = simulate(stage2, "equilibrium", reference_box=expanded, state=state)
    d2 = float(run2.trace.d_hat[-measure_samples:].mean())

    spec2 = GasSpec(config.T_wall, stage2.volume, float(config.n_particles),
                    config.species, "fermi")
    s2 = state_equations(spec2)
    delta_s = ((s2.kappa + 1.5 * s2.gamma) - (s1.kappa + 1.5 * s1.gamma))

    return JouleReport(
        volume_ratio=volume_ratio,
        d_hat_before=d1,
        d_hat_after=d2,
        delta_d_hat=d2 - d1,
        delta_s_per_particle_kb=delta_s,
        ln_ratio=math.log(volume_ratio),
        trace_before=run1.trace,
        trace_after=run2.trace,
    )
