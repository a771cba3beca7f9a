"""Double DQN machinery: replay buffer, action selection, training step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mlp import AdamState, MlpParams, backward, forward, adam_step


@dataclass(frozen=True)
class Transition:
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool


@dataclass(frozen=True)
class Batch:
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray


class ReplayBuffer:
    """Fixed-capacity FIFO transition store with uniform sampling."""

    def __init__(self, capacity: int, state_dim: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.state_dim = state_dim
        self._states = np.zeros((capacity, state_dim), dtype=np.float32)
        self._next_states = np.zeros((capacity, state_dim), dtype=np.float32)
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity, dtype=np.float32)
        self._terminals = np.zeros(capacity, dtype=bool)
        self._cursor = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, tr: Transition) -> None:
        i = self._cursor
        self._states[i] = tr.state
        self._next_states[i] = tr.next_state
        self._actions[i] = tr.action
        self._rewards[i] = tr.reward
        self._terminals[i] = tr.terminal
        self._cursor = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample_indices(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self._size, size=batch_size)

    def gather(self, idx: np.ndarray) -> Batch:
        return Batch(
            states=self._states[idx].astype(np.float64),
            actions=self._actions[idx],
            rewards=self._rewards[idx].astype(np.float64),
            next_states=self._next_states[idx].astype(np.float64),
            terminals=self._terminals[idx],
        )

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        return self.gather(self.sample_indices(batch_size, rng))


@dataclass
class TrainConfig:
    gamma: float = 0.9
    epsilon_start: float = 1.0
    epsilon_final: float = 0.1
    epsilon_anneal_frac: float = 0.2  # fraction of iterations spent annealing
    batch_size: int = 32
    target_sync_every: int = 500
    buffer_capacity: int = 50_000
    iterations_brightness: int = 20_000  # paper-scale setting: 120_000
    iterations_scale: int = 10_000  # paper-scale setting: 40_000
    hidden_width: int = 128  # paper-scale setting: 512
    hidden_layers: int = 5
    learning_rate: float = 0.001
    warmup: int = 500

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma {self.gamma} outside [0, 1)")
        for name in ("epsilon_start", "epsilon_final"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} {v} outside [0, 1]")

    def layer_sizes(self, input_dim: int, n_actions: int = 2) -> tuple[int, ...]:
        return (input_dim, *([self.hidden_width] * self.hidden_layers), n_actions)

    def epsilon_at(self, iteration: int, total_iterations: int) -> float:
        """Linear anneal from start to final over the first anneal fraction."""
        anneal = max(1, int(total_iterations * self.epsilon_anneal_frac))
        if iteration >= anneal:
            return self.epsilon_final
        frac = iteration / anneal
        return self.epsilon_start + frac * (self.epsilon_final - self.epsilon_start)


def select_action(q: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy over Q-values; greedy ties go to the lower index."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon {epsilon} outside [0, 1]")
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(0, len(q)))
    return int(np.argmax(q))


def double_dqn_target(
    tr: Transition, online: MlpParams, target: MlpParams, gamma: float
) -> float:
    """Bootstrap value: online net picks the action, target net prices it."""
    if tr.terminal:
        return float(tr.reward)
    q_online, _ = forward(online, tr.next_state)
    a_star = int(np.argmax(q_online))
    q_target, _ = forward(target, tr.next_state)
    return float(tr.reward + gamma * q_target[a_star])


def huber(diff: np.ndarray, delta: float = 1.0) -> np.ndarray:
    a = np.abs(diff)
    return np.where(a <= delta, 0.5 * diff * diff, delta * (a - 0.5 * delta))


def train_step(
    buffer: ReplayBuffer,
    online: MlpParams,
    target: MlpParams,
    opt: AdamState,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> float | None:
    """One minibatch update; returns the mean Huber loss, or None if the
    buffer cannot fill a batch yet."""
    if len(buffer) < cfg.batch_size:
        return None
    batch = buffer.sample(cfg.batch_size, rng)
    n = cfg.batch_size
    rows = np.arange(n)

    q, cache = forward(online, batch.states)
    q_taken = q[rows, batch.actions]

    q_next_online, _ = forward(online, batch.next_states)
    a_star = np.argmax(q_next_online, axis=1)
    q_next_target, _ = forward(target, batch.next_states)
    targets = batch.rewards + cfg.gamma * q_next_target[rows, a_star] * ~batch.terminals

    diff = q_taken - targets
    loss = float(np.mean(huber(diff)))

    grad_q = np.zeros_like(q)
    grad_q[rows, batch.actions] = np.clip(diff, -1.0, 1.0) / n
    grads = backward(online, cache, grad_q)
    adam_step(online, grads, opt)
    return loss


def sync_target(online: MlpParams, target: MlpParams) -> None:
    """Copy online parameters into the target network, in place."""
    for tw, ow in zip(target.weights, online.weights):
        np.copyto(tw, ow)
    for tb, ob in zip(target.biases, online.biases):
        np.copyto(tb, ob)
