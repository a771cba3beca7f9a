"""Greedy inference: run trained agents over images, step by step."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..agent import MlpParams, forward, load_params, save_params
from ..environment import (
    EpisodeState,
    Scene,
    reset_episode,
    step_episode,
)
from ..errors import ConfigError
from ..features import (
    StateKind,
    StateVector,
    area_histogram,
    assemble_state,
    brightness_histogram,
    gaussian_smooth,
    reduce_context,
)
from ..imaging import BRIGHTNESS_ACTIONS, SCALE_ACTIONS, AttributeAction, RgbImage
from ..metrics import Box2D, Detection

BRIGHTNESS_FILE = "brightness.rlw"
SCALE_FILE = "scale.rlw"


@dataclass
class AgentBundle:
    """The two independent trained networks."""

    brightness: MlpParams
    scale: MlpParams

    def save(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_params(self.brightness, out / BRIGHTNESS_FILE)
        save_params(self.scale, out / SCALE_FILE)

    @classmethod
    def load(cls, weights_dir: str | Path) -> "AgentBundle":
        d = Path(weights_dir)
        for name in (BRIGHTNESS_FILE, SCALE_FILE):
            if not (d / name).exists():
                raise ConfigError(f"missing weight file {d / name}")
        return cls(
            brightness=load_params(d / BRIGHTNESS_FILE),
            scale=load_params(d / SCALE_FILE),
        )


def agent_state(ep: EpisodeState, kind: StateKind) -> StateVector:
    """Assemble one agent's 576-value state from the episode's last pass."""
    ctx = reduce_context(ep.last_output.context)
    if kind is StateKind.BRIGHTNESS:
        return assemble_state(ctx, brightness_histogram(ep.current_v), kind)
    return assemble_state(
        ctx, gaussian_smooth(area_histogram(ep.last_output.detections)), kind
    )


def greedy_action(params: MlpParams, state: StateVector, actions) -> AttributeAction:
    q, _ = forward(params, state.values)
    return actions[int(np.argmax(q))]


@dataclass(frozen=True)
class StepRecord:
    step: int
    action_b: str | None
    action_s: str | None
    level_b: float
    level_s: float
    p: float
    detections: list[Detection]  # in the step's own (resized) frame

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "action_b": self.action_b,
            "action_s": self.action_s,
            "level_b": self.level_b,
            "level_s": self.level_s,
            "p": self.p,
            "detections": [
                {
                    "bbox": [d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max],
                    "score": d.score,
                }
                for d in self.detections
            ],
        }


@dataclass
class EpisodeResult:
    scene_id: int
    initial_p: float
    final_p: float
    final_image: RgbImage
    final_detections: list[Detection]  # mapped back to the input frame
    cumulative_scale_factor: float
    trajectory: list[StepRecord]


def map_detections_back(
    detections: Sequence[Detection], factor: float, width: int, height: int
) -> list[Detection]:
    """Undo the episode's cumulative resize so boxes live in the input frame."""
    inv = 1.0 / factor
    out = []
    for d in detections:
        b = d.box
        out.append(
            Detection(
                box=Box2D(
                    x_min=min(max(b.x_min * inv, 0.0), width - 1e-6),
                    y_min=min(max(b.y_min * inv, 0.0), height - 1e-6),
                    x_max=max(min(b.x_max * inv, float(width)), 1e-6),
                    y_max=max(min(b.y_max * inv, float(height)), 1e-6),
                ),
                score=d.score,
                category=d.category,
            )
        )
    return out


def run_episode(
    scene: Scene,
    bundle: AgentBundle | None,
    detector,
    horizon: int,
    use_brightness: bool = True,
    use_scale: bool = True,
    literal_scale_rule: bool = False,
) -> EpisodeResult:
    """Run one greedy episode; with both agents off this is a plain detector pass."""
    ep = reset_episode(scene, detector, max(horizon, 1), literal_scale_rule)
    initial_p = ep.last_p
    trajectory: list[StepRecord] = []
    if (use_brightness or use_scale) and bundle is None:
        raise ConfigError("agent mode requested but no weights were provided")

    for _ in range(horizon if (use_brightness or use_scale) else 0):
        a_b = a_s = None
        if use_brightness:
            a_b = greedy_action(
                bundle.brightness, agent_state(ep, StateKind.BRIGHTNESS), BRIGHTNESS_ACTIONS
            )
        if use_scale:
            a_s = greedy_action(bundle.scale, agent_state(ep, StateKind.SCALE), SCALE_ACTIONS)
        ep, _, _, _ = step_episode(ep, a_b, a_s)
        trajectory.append(
            StepRecord(
                step=ep.step,
                action_b=a_b.value if a_b else None,
                action_s=a_s.value if a_s else None,
                level_b=ep.brightness.level,
                level_s=ep.scale.level,
                p=ep.last_p,
                detections=list(ep.last_output.detections),
            )
        )

    return EpisodeResult(
        scene_id=scene.seed,
        initial_p=initial_p,
        final_p=ep.last_p,
        final_image=ep.current_image,
        final_detections=map_detections_back(
            ep.last_output.detections,
            ep.cumulative_scale_factor,
            scene.image.width,
            scene.image.height,
        ),
        cumulative_scale_factor=ep.cumulative_scale_factor,
        trajectory=trajectory,
    )


def run_rl_aod(
    scenes: Sequence[Scene],
    bundle: AgentBundle,
    detector,
    horizon: int,
    literal_scale_rule: bool = False,
) -> list[EpisodeResult]:
    """Adjust every image with both agents acting greedily for `horizon` steps."""
    return [
        run_episode(scene, bundle, detector, horizon, literal_scale_rule=literal_scale_rule)
        for scene in scenes
    ]
