"""Dataset files: images plus a JSON manifest of boxes.

Manifest layout:
    {"images": [{"id", "file", "width", "height"}, ...],
     "annotations": [{"image_id", "bbox": [x, y, w, h], "category"}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from ..environment import Scene, SceneParams, generate_scene
from ..errors import ConfigError
from ..imaging import estimate_brightness_level, read_ppm, rgb_to_hsv, write_ppm
from ..imaging.png import read_png, write_png
from ..metrics import Box2D, GroundTruthBox

MANIFEST_NAME = "manifest.json"


def _manifest_dict(scenes: Sequence[Scene], files: Sequence[str]) -> dict:
    images = []
    annotations = []
    for scene, fname in zip(scenes, files):
        images.append(
            {
                "id": scene.seed,
                "file": fname,
                "width": scene.image.width,
                "height": scene.image.height,
            }
        )
        for t in scene.truths:
            b = t.box
            annotations.append(
                {
                    "image_id": scene.seed,
                    "bbox": [b.x_min, b.y_min, b.x_max - b.x_min, b.y_max - b.y_min],
                    "category": t.category,
                }
            )
    return {"images": images, "annotations": annotations}


def write_dataset(
    scenes: Sequence[Scene], out_dir: str | Path, image_format: str = "ppm"
) -> Path:
    """Write scene images and the manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for scene in scenes:
        fname = f"scene_{scene.seed:08d}.{image_format}"
        if image_format == "ppm":
            write_ppm(scene.image, out / fname)
        elif image_format == "png":
            write_png(scene.image, out / fname)
        else:
            raise ConfigError(f"unsupported image format {image_format!r}")
        files.append(fname)
    manifest = out / MANIFEST_NAME
    manifest.write_text(json.dumps(_manifest_dict(scenes, files), indent=2, sort_keys=True) + "\n")
    return manifest


def generate_dataset(
    out_dir: str | Path,
    seed: int,
    count: int,
    params: SceneParams | None = None,
    image_format: str = "ppm",
) -> Path:
    """Generate `count` scenes with seeds seed..seed+count-1 and write them."""
    params = params or SceneParams()
    scenes = [generate_scene(seed + i, params) for i in range(count)]
    return write_dataset(scenes, out_dir, image_format)


def load_dataset(manifest_path: str | Path) -> list[Scene]:
    """Read a manifest back into Scene values (nominal stats recomputed)."""
    manifest_path = Path(manifest_path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    try:
        data = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {manifest_path}: {exc}") from exc

    by_image: dict[int, list[GroundTruthBox]] = {}
    for ann in data.get("annotations", []):
        x, y, w, h = ann["bbox"]
        by_image.setdefault(ann["image_id"], []).append(
            GroundTruthBox(
                box=Box2D(float(x), float(y), float(x) + float(w), float(y) + float(h)),
                category=int(ann.get("category", 0)),
            )
        )

    scenes = []
    for entry in data.get("images", []):
        path = manifest_path.parent / entry["file"]
        image = read_png(path) if path.suffix == ".png" else read_ppm(path)
        truths = by_image.get(entry["id"], [])
        mean_area = (
            float(sum(t.box.area for t in truths) / len(truths)) if truths else 0.0
        )
        scenes.append(
            Scene(
                image=image,
                truths=truths,
                seed=int(entry["id"]),
                nominal_level_b=estimate_brightness_level(rgb_to_hsv(image).v),
                nominal_mean_area=mean_area,
            )
        )
    return scenes
