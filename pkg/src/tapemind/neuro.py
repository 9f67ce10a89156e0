"""Continuous-time three-layer associative network with a reciprocal-
inhibition winner-take-all middle layer.

The middle layer integrates tau*du/dt + u = s - x_inh - beta*sum(r) +
kappa*r + noise, with r the rectified, saturated output. kappa = beta
gives the inhibit-everyone-but-itself wiring; kappa = alpha the
inhibit-everyone-and-excite-itself variant (identical dynamics when
alpha = beta). With beta > 1 and a unique maximum input the layer settles
with exactly one active neuron; with equal maxima, per-step noise picks
the winner at random. Programmed with binary two-rail rows the network
behaves as an AND/OR logic array; run step-wise with a long step the
whole network is equivalent to the discrete associative field's
decode/choose/encode cycle.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from tapemind.field import AssociativeField, FieldConfig
from tapemind.session import SessionRng
from tapemind.symbols import Symbol


def stable_dt(n2: int, beta: float, tau: float) -> float:
    """Integration step that keeps explicit Euler stable for the layer's
    fastest mode: the collective-inhibition eigenvalue is
    -(1 + beta*(n2-1))/tau, so the step must stay well under
    2*tau/(1 + beta*(n2-1)). Returns a quarter of that bound, capped at
    tau/20."""
    return min(tau / 20.0, 0.5 * tau / (1.0 + beta * n2))


def neuron_step(inputs: Sequence[float], gains: Sequence[float],
                u: float, tau: float, dt: float) -> tuple[float, float]:
    """One Euler step of a single linear-threshold neuron: returns the new
    potential and the rectified output."""
    if dt > tau / 20:
        raise ValueError("dt must not exceed tau/20")
    i_net = float(np.dot(np.asarray(inputs, dtype=float),
                         np.asarray(gains, dtype=float)))
    u_next = u + dt * (i_net - u) / tau
    return u_next, max(u_next, 0.0)


@dataclass
class Ann0Params:
    n1: int
    n2: int
    n3: int
    beta: float = 1.5
    alpha: Optional[float] = None   # defaults to beta (the equivalent wiring)
    tau: float = 1.0
    dt: float = 0.05
    u0: float = 10.0
    noise_amp: float = 0.0          # per-step uniform noise in (0, noise_amp)
    x_inh: float = 0.0

    def validate(self) -> None:
        if self.dt > self.tau / 20:
            raise ValueError("dt must not exceed tau/20")
        if min(self.n1, self.n2, self.n3) <= 0:
            raise ValueError("layer sizes must be positive")
        if self.u0 <= 0:
            raise ValueError("saturation level must be positive")
        if self.noise_amp < 0:
            raise ValueError("noise amplitude must be non-negative")

    def kappa(self, variant: str) -> float:
        if variant == "a":
            return self.beta
        if variant == "b":
            return self.beta if self.alpha is None else self.alpha
        raise ValueError("variant must be 'a' or 'b'")


@dataclass
class Ann0State:
    u: np.ndarray                   # (n2,) postsynaptic potentials
    r: np.ndarray                   # (n2,) rectified, saturated outputs
    gx: np.ndarray                  # (n1, n2) input weights
    gy: np.ndarray                  # (n3, n2) output weights

    @classmethod
    def zeros(cls, params: Ann0Params) -> "Ann0State":
        return cls(
            u=np.zeros(params.n2),
            r=np.zeros(params.n2),
            gx=np.zeros((params.n1, params.n2)),
            gy=np.zeros((params.n3, params.n2)),
        )

    def reset_activity(self) -> None:
        self.u[:] = 0.0
        self.r[:] = 0.0


def ann0_step(state: Ann0State, x: np.ndarray, params: Ann0Params,
              variant: str = "a", noise: Optional[np.ndarray] = None,
              x_inh: Optional[float] = None) -> np.ndarray:
    """One Euler step of the whole network; mutates state, returns y."""
    kappa = params.kappa(variant)
    inh = params.x_inh if x_inh is None else x_inh
    s = x @ state.gx
    if noise is None:
        noise = 0.0
    drive = s - inh - params.beta * state.r.sum() + kappa * state.r + noise
    state.u += (params.dt / params.tau) * (drive - state.u)
    if not np.all(np.isfinite(state.u)):
        raise FloatingPointError("network state left the finite range")
    state.r = np.clip(state.u, 0.0, params.u0)
    return state.gy @ state.r


def run_wta_cycle(state: Ann0State, x: np.ndarray, params: Ann0Params,
                  rng: Optional[np.random.Generator] = None,
                  variant: str = "a",
                  budget: Optional[int] = None,
                  settle: float = 1e-9,
                  reset: bool = True) -> Optional[int]:
    """One discrete choice cycle: integrate at the baseline inhibition
    (params.x_inh, normally released to zero) until the outputs settle
    (change below ``settle`` per unit time) or the step budget runs out,
    read the winner, then reassert inhibition to reset the layer. The
    caller provides a quiet layer (fresh state or a completed reset).
    Returns the winning index, or None when nothing fires."""
    params.validate()
    s_front = x @ state.gx
    if budget is None:
        # The two-leaders difference mode grows like e^((beta-1)t/tau), so
        # near beta=1 with a small input gap the decision takes
        # ~tau/(beta-1) * log(gap ratio); size the default budget for it.
        horizon = 50.0 * params.tau
        if params.noise_amp == 0 and params.beta > 1.0 and s_front.size >= 2:
            top = np.sort(s_front)[::-1]
            gap = top[0] - top[1]
            if top[0] > params.x_inh and 0.0 < gap < top[0]:
                t_sep = (params.tau / (params.beta - 1.0)
                         * math.log1p((params.beta - 1.0) * top[0] / gap))
                horizon += 3.0 * t_sep
        budget = int(round(horizon / params.dt))
    threshold = settle * params.dt
    for _ in range(budget):
        noise = None
        if params.noise_amp > 0:
            if rng is None:
                raise ValueError("a generator is required when noise_amp > 0")
            noise = rng.uniform(0.0, params.noise_amp, size=params.n2)
        r_before = state.r.copy()
        ann0_step(state, x, params, variant=variant, noise=noise)
        if params.noise_amp == 0:
            if np.max(np.abs(state.r - r_before)) < threshold:
                break
        else:
            # The choice is locked once a lone winner's inhibition exceeds
            # every loser's input plus the noise bound: no loser can
            # re-enter, so the cycle is decided.
            active = np.flatnonzero(state.r > 0.0)
            if active.size == 1:
                w = active[0]
                losers = np.delete(s_front - params.x_inh, w)
                if (losers.size == 0
                        or params.beta * state.r[w] > np.max(losers) + params.noise_amp):
                    break
    active = np.flatnonzero(state.r > 0.0)
    winner: Optional[int]
    if active.size == 1:
        winner = int(active[0])
    elif active.size == 0:
        winner = None
    else:
        raise RuntimeError(f"no single winner after {budget} steps "
                           f"({active.size} still active)")
    if reset:
        reset_layer(state, x, params, variant=variant)
    return winner


def reset_layer(state: Ann0State, x: np.ndarray, params: Ann0Params,
                variant: str = "a", duration: Optional[float] = None) -> None:
    """Reassert global inhibition above the strongest input until the layer
    is quiet; each choice cycle is then independent of the last."""
    if duration is None:
        duration = 10 * params.tau
    s = x @ state.gx
    level = float(np.max(s, initial=0.0)) + 1.0
    steps = int(round(duration / params.dt))
    for _ in range(steps):
        ann0_step(state, x, params, variant=variant, x_inh=level)


# -- logic-array mode ----------------------------------------------------------

def pla_encode_bit(b: int) -> tuple[int, int]:
    """Two-rail encoding: 0 -> (0,1), 1 -> (1,0)."""
    if b not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    return (b, 1 - b)


def pla_encode(bits: Sequence[int]) -> np.ndarray:
    out: list[int] = []
    for b in bits:
        out.extend(pla_encode_bit(b))
    return np.asarray(out, dtype=float)


def pla_program(table: dict[tuple[int, ...], tuple[int, ...]],
                params: Ann0Params) -> Ann0State:
    """One middle-layer neuron per table row: the input weights carry the
    two-rail row pattern, the output weights the row's output bits."""
    rows = sorted(table.items())
    n_rows = len(rows)
    if params.n2 != n_rows:
        raise ValueError(f"need n2={n_rows} for this table")
    state = Ann0State.zeros(params)
    for i, (bits, out_bits) in enumerate(rows):
        state.gx[:, i] = pla_encode(bits)
        state.gy[:, i] = np.asarray(out_bits, dtype=float)
    return state


def pla_mode_check(table: dict[tuple[int, ...], tuple[int, ...]],
                   beta: float = 1.5, tau: float = 1.0) -> bool:
    """Drive every input row through a WTA cycle and compare the thresholded
    output against the table."""
    rows = sorted(table.items())
    m = len(rows[0][0])
    n_out = len(rows[0][1])
    params = Ann0Params(n1=2 * m, n2=len(rows), n3=n_out,
                        beta=beta, tau=tau, dt=stable_dt(len(rows), beta, tau))
    state = pla_program(table, params)
    for bits, expected in rows:
        x = pla_encode(bits)
        winner = run_wta_cycle(state, x, params, reset=False)
        if winner is None:
            return False
        y = state.gy @ state.r
        got = tuple(int(v > 0.0) for v in y)
        state.reset_activity()
        if got != expected:
            return False
    return True


# -- equivalence with the discrete field ----------------------------------------

def one_hot_embedding(alphabet: Sequence[Symbol], width: int
                      ) -> Callable[[Sequence[Symbol]], np.ndarray]:
    """Per-position one-hot numeric embedding; blanks embed to zeros. The
    scalar product of embedded vectors counts matching non-blank positions,
    so argmax sets agree with the symbolic similarity for a fixed probe."""
    index = {sym: k for k, sym in enumerate(alphabet)}
    n = len(alphabet)

    def embed(vec: Sequence[Symbol]) -> np.ndarray:
        out = np.zeros(width * n)
        for pos, sym in enumerate(vec):
            if sym in index:
                out[pos * n + index[sym]] = 1.0
        return out

    return embed


@dataclass
class ProbeReport:
    probe: tuple[Symbol, ...]
    network_freq: dict[int, float]
    field_freq: dict[int, float]
    agree: bool


def ann0_vs_af0_equivalence(
    pairs: Sequence[tuple[Sequence[Symbol], Sequence[Symbol]]],
    probes: Sequence[Sequence[Symbol]],
    alphabet: Sequence[Symbol],
    trials: int = 1000,
    seed: int = 0,
    noise_amp: float = 0.05,
    sigma_bound: float = 5.0,
) -> list[ProbeReport]:
    """Program the same associations into the network (one-hot) and the
    discrete field, then compare winner distributions probe by probe.
    Frequencies must agree within ``sigma_bound`` binomial deviations."""
    nx = len(pairs[0][0])
    ny = len(pairs[0][1])
    embed_x = one_hot_embedding(alphabet, nx)
    embed_y = one_hot_embedding(alphabet, ny)

    params = Ann0Params(n1=nx * len(alphabet), n2=len(pairs),
                        n3=ny * len(alphabet), beta=1.5, tau=1.0,
                        dt=stable_dt(len(pairs), 1.5, 1.0),
                        noise_amp=noise_amp)
    state = Ann0State.zeros(params)
    for i, (gx, gy) in enumerate(pairs):
        state.gx[:, i] = embed_x(gx)
        state.gy[:, i] = embed_y(gy)

    field = AssociativeField(nx, ny, FieldConfig(capacity=len(pairs),
                                                 select_source="memory"))
    for i, (gx, gy) in enumerate(pairs):
        field.set_slot(i, tuple(gx), tuple(gy))

    np_rng = np.random.default_rng(seed)
    field_rng = SessionRng(seed)
    reports = []
    for probe in probes:
        probe = tuple(probe)
        net_counts: dict[int, int] = {}
        x = embed_x(probe)
        for _ in range(trials):
            winner = run_wta_cycle(state, x, params, rng=np_rng, reset=False)
            state.reset_activity()
            if winner is not None:
                net_counts[winner] = net_counts.get(winner, 0) + 1
        field_counts: dict[int, int] = {}
        for _ in range(trials):
            s = field.decode(probe)
            i_read, _ = field.choose(field.bias(s), field_rng)
            field_counts[i_read] = field_counts.get(i_read, 0) + 1
        keys = sorted(set(net_counts) | set(field_counts))
        agree = True
        for k in keys:
            p_net = net_counts.get(k, 0) / trials
            p_field = field_counts.get(k, 0) / trials
            p_hat = (p_net + p_field) / 2
            sigma = np.sqrt(max(p_hat * (1 - p_hat), 1e-12) * 2 / trials)
            if abs(p_net - p_field) > sigma_bound * sigma:
                agree = False
        reports.append(ProbeReport(
            probe=probe,
            network_freq={k: net_counts.get(k, 0) / trials for k in keys},
            field_freq={k: field_counts.get(k, 0) / trials for k in keys},
            agree=agree,
        ))
    return reports


def trajectory_csv(times: Sequence[float], us: Sequence[np.ndarray],
                   rs: Sequence[np.ndarray]) -> str:
    """CSV export: t,u_0..u_{n2-1},r_0..r_{n2-1}."""
    n2 = len(us[0])
    header = ",".join(["t"] + [f"u_{i}" for i in range(n2)]
                      + [f"r_{i}" for i in range(n2)])
    lines = [header]
    for t, u, r in zip(times, us, rs):
        vals = [f"{t:.6g}"] + [f"{v:.6g}" for v in u] + [f"{v:.6g}" for v in r]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"
