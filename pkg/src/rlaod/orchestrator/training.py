"""Training loops for the two agents.

Each agent trains alone on episodes degraded along its own attribute
(80% degraded starts by default), while the other attribute stays at its
initial level. One environment step and one gradient step per iteration.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..agent import (
    AdamState,
    ReplayBuffer,
    Transition,
    forward,
    init_params,
    select_action,
    sync_target,
    train_step,
)
from ..environment import (
    DegradeKind,
    degrade,
    generate_scene,
    reset_episode,
    sample_op,
    step_episode,
)
from ..features import STATE_DIM, StateKind
from ..imaging import BRIGHTNESS_ACTIONS, SCALE_ACTIONS
from .config import RunConfig, build_detector
from .pipeline import AgentBundle, agent_state

_DEGRADE_KINDS = {
    StateKind.BRIGHTNESS: (DegradeKind.OVER_EXPOSE, DegradeKind.UNDER_EXPOSE),
    StateKind.SCALE: (DegradeKind.ZOOM_IN, DegradeKind.ZOOM_OUT),
}


@dataclass
class LogRow:
    iteration: int
    loss: float | None
    epsilon: float
    mean_episode_reward: float | None


def _write_log(rows: list[LogRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "loss", "epsilon", "mean_episode_reward"])
        for r in rows:
            writer.writerow(
                [
                    r.iteration,
                    "" if r.loss is None else f"{r.loss:.6f}",
                    f"{r.epsilon:.4f}",
                    "" if r.mean_episode_reward is None else f"{r.mean_episode_reward:.4f}",
                ]
            )


class _EpisodeStream:
    """Deterministic supply of (possibly degraded) training episodes."""

    def __init__(self, kind: StateKind, cfg: RunConfig, detector, seed: int):
        self.kind = kind
        self.cfg = cfg
        self.detector = detector
        self.rng = np.random.default_rng([seed, 0xE9])
        self.count = 0

    def next_episode(self):
        scene_seed = int(self.rng.integers(0, 2**62))
        scene = generate_scene(scene_seed, self.cfg.scene)
        if self.rng.random() < self.cfg.degraded_fraction:
            kinds = _DEGRADE_KINDS[self.kind]
            op = sample_op(kinds[int(self.rng.integers(0, len(kinds)))], self.rng)
            scene = degrade(scene, op)
        self.count += 1
        return reset_episode(
            scene, self.detector, self.cfg.horizon, self.cfg.literal_scale_rule
        )


def train_agent(
    kind: StateKind,
    cfg: RunConfig,
    seed: int | None = None,
    log_path: str | Path | None = None,
):
    """Train one agent; returns (params, log rows)."""
    seed = cfg.train_seed if seed is None else seed
    total = (
        cfg.train.iterations_brightness
        if kind is StateKind.BRIGHTNESS
        else cfg.train.iterations_scale
    )
    actions = BRIGHTNESS_ACTIONS if kind is StateKind.BRIGHTNESS else SCALE_ACTIONS

    online = init_params(cfg.train.layer_sizes(STATE_DIM), seed)
    target = online.copy()
    opt = AdamState.for_params(online, lr=cfg.train.learning_rate)
    buffer = ReplayBuffer(cfg.train.buffer_capacity, STATE_DIM)
    rng_agent = np.random.default_rng([seed, 0xA6])
    rng_batch = np.random.default_rng([seed, 0xB7])

    detector = build_detector(cfg)
    stream = _EpisodeStream(kind, cfg, detector, seed)

    ep = stream.next_episode()
    state = agent_state(ep, kind)
    ep_reward = 0.0
    recent_rewards: deque[float] = deque(maxlen=100)
    rows: list[LogRow] = []

    min_fill = max(cfg.train.batch_size, cfg.train.warmup)
    for it in range(total):
        epsilon = cfg.train.epsilon_at(it, total)
        q, _ = forward(online, state.values)
        a_idx = select_action(q, epsilon, rng_agent)
        action = actions[a_idx]
        if kind is StateKind.BRIGHTNESS:
            ep, r, _, terminal = step_episode(ep, action, None)
        else:
            ep, _, r, terminal = step_episode(ep, None, action)
        next_state = agent_state(ep, kind)
        buffer.push(
            Transition(
                state=state.values,
                action=a_idx,
                reward=float(r),
                next_state=next_state.values,
                terminal=terminal,
            )
        )
        ep_reward += r
        if terminal:
            recent_rewards.append(ep_reward)
            ep_reward = 0.0
            ep = stream.next_episode()
            state = agent_state(ep, kind)
        else:
            state = next_state

        loss = train_step(buffer, online, target, opt, cfg.train, rng_batch) if len(buffer) >= min_fill else None
        if (it + 1) % cfg.train.target_sync_every == 0:
            sync_target(online, target)

        rows.append(
            LogRow(
                iteration=it,
                loss=loss,
                epsilon=epsilon,
                mean_episode_reward=(
                    float(np.mean(recent_rewards)) if recent_rewards else None
                ),
            )
        )

    if log_path is not None:
        _write_log(rows, Path(log_path))
    return online, rows


def train_agents(cfg: RunConfig, out_dir: str | Path | None = None) -> AgentBundle:
    """Train the brightness agent, then the scale agent; optionally persist
    weights and CSV logs."""
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    brightness, _ = train_agent(
        StateKind.BRIGHTNESS,
        cfg,
        log_path=out / "train_brightness.csv" if out else None,
    )
    scale, _ = train_agent(
        StateKind.SCALE,
        cfg,
        log_path=out / "train_scale.csv" if out else None,
    )
    bundle = AgentBundle(brightness=brightness, scale=scale)
    if out is not None:
        bundle.save(out)
    return bundle
