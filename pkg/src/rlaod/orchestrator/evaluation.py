"""Mode-matrix evaluation over a degraded test set.

Each test scene contributes five images: the clean original plus one per
degradation operation. Every mode runs over the same set (starred modes
restrict to the clean originals) and is scored with the COCO-style AP
report plus the mean final performance score.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..environment import DegradeKind, Scene, degrade, generate_scene, sample_op
from ..errors import ConfigError
from ..metrics import ApReport, evaluate_ap
from .config import EvalMode, RunConfig, build_detector
from .pipeline import AgentBundle, run_episode

_DEGRADE_ORDER = (
    DegradeKind.OVER_EXPOSE,
    DegradeKind.UNDER_EXPOSE,
    DegradeKind.ZOOM_OUT,
    DegradeKind.ZOOM_IN,
)


@dataclass(frozen=True)
class EvalImage:
    scene: Scene
    origin: str  # "clean" or the degradation kind


@dataclass(frozen=True)
class ModeResult:
    mode: EvalMode
    report: ApReport
    mean_p: float
    n_images: int

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d["mean_p"] = self.mean_p
        d["n_images"] = self.n_images
        return d


def build_eval_set(cfg: RunConfig, scenes: Sequence[Scene] | None = None) -> list[EvalImage]:
    """Clean scenes plus their four degradations (five images per scene)."""
    if scenes is None:
        scenes = [
            generate_scene(cfg.seed + 1_000_000 + i, cfg.scene)
            for i in range(cfg.n_eval_scenes)
        ]
    images: list[EvalImage] = []
    for scene in scenes:
        images.append(EvalImage(scene=scene, origin="clean"))
        rng = np.random.default_rng([scene.seed, 0xDE6])
        for kind in _DEGRADE_ORDER:
            op = sample_op(kind, rng)
            images.append(EvalImage(scene=degrade(scene, op), origin=kind.value))
    return images


def evaluate_mode(
    mode: EvalMode,
    images: Sequence[EvalImage],
    bundle: AgentBundle | None,
    detector,
    literal_scale_rule: bool = False,
) -> ModeResult:
    if (mode.uses_brightness or mode.uses_scale) and bundle is None:
        raise ConfigError(f"mode {mode.value} needs trained weights")
    subset = [im for im in images if not mode.clean_only or im.origin == "clean"]

    dets_per_image = []
    truths_per_image = []
    ps = []
    for im in subset:
        result = run_episode(
            im.scene,
            bundle if (mode.uses_brightness or mode.uses_scale) else None,
            detector,
            horizon=mode.horizon,
            use_brightness=mode.uses_brightness,
            use_scale=mode.uses_scale,
            literal_scale_rule=literal_scale_rule,
        )
        dets_per_image.append(result.final_detections)
        truths_per_image.append(im.scene.truths)
        ps.append(result.final_p)

    return ModeResult(
        mode=mode,
        report=evaluate_ap(dets_per_image, truths_per_image),
        mean_p=float(np.mean(ps)) if ps else 0.0,
        n_images=len(subset),
    )


def evaluate_modes(
    cfg: RunConfig,
    modes: Sequence[EvalMode],
    bundle: AgentBundle | None = None,
    scenes: Sequence[Scene] | None = None,
) -> dict[EvalMode, ModeResult]:
    detector = build_detector(cfg)
    images = build_eval_set(cfg, scenes)
    return {
        mode: evaluate_mode(mode, images, bundle, detector, cfg.literal_scale_rule)
        for mode in modes
    }
