"""Synthetic layered scenes and a brute-force z-buffer reference renderer.

Scenes are stacks of fronto-parallel planes: one full-frame background plus
optional rectangular foreground planes, each with a constant disparity and a
procedural texture (constant color, checkerboard, or hashed value noise).
The reference renderer evaluates, per target pixel, every plane's coverage
at the source point ``x - view * d`` and keeps the plane with the highest
disparity. Textures are evaluated analytically at real coordinates — no
image resampling is involved anywhere, so the renderer is an independent
check for the warping pipeline rather than a re-implementation of it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .io import LightField, LightFieldDataset

__all__ = [
    "ConstantTexture",
    "CheckerTexture",
    "NoiseTexture",
    "PlaneSpec",
    "SceneSpec",
    "oracle_render",
    "generate_lightfield",
    "random_scene",
    "scene_from_json",
    "scene_to_json",
]


def _hash01(ix: np.ndarray, iy: np.ndarray, seed: int) -> np.ndarray:
    """Deterministic per-lattice-point value in [0, 1) from integer coords."""
    seed_term = np.uint64(((seed & 0xFFFFFFFF) * 0x165667B19E3779F9) % (1 << 64))
    with np.errstate(over="ignore"):  # uint64 wraparound is the point
        h = (
            ix.astype(np.int64).astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
            ^ iy.astype(np.int64).astype(np.uint64) * np.uint64(0xC2B2AE3D27D4EB4F)
            ^ seed_term
        )
        h ^= h >> np.uint64(33)
        h *= np.uint64(0xFF51AFD7ED558CCD)
        h ^= h >> np.uint64(33)
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


@dataclass(frozen=True)
class ConstantTexture:
    color: tuple

    kind = "constant"

    def sample(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.empty(x.shape + (3,), dtype=np.float64)
        out[:] = np.asarray(self.color, dtype=np.float64)
        return out


@dataclass(frozen=True)
class CheckerTexture:
    period: int
    color_a: tuple
    color_b: tuple

    kind = "checker"

    def sample(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        parity = (np.floor(x / self.period) + np.floor(y / self.period)).astype(np.int64) % 2
        a = np.asarray(self.color_a, dtype=np.float64)
        b = np.asarray(self.color_b, dtype=np.float64)
        return np.where(parity[..., None] == 0, a, b)


@dataclass(frozen=True)
class NoiseTexture:
    seed: int

    kind = "noise"

    def sample(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        # Piecewise constant over unit cells: exact under integer translation.
        ix = np.floor(x).astype(np.int64)
        iy = np.floor(y).astype(np.int64)
        channels = [_hash01(ix, iy, self.seed * 3 + c) for c in range(3)]
        return np.stack(channels, axis=-1)


@dataclass(frozen=True)
class PlaneSpec:
    """A fronto-parallel textured plane.

    ``region`` is a half-open rectangle (x0, y0, x1, y1) in the canonical
    (view 0) frame, or None for a full-frame plane.
    """

    disparity: float
    texture: object
    region: tuple | None = None

    def covers(self, src_x: np.ndarray, src_y: np.ndarray, width: int, height: int) -> np.ndarray:
        if self.region is None:
            x0, y0, x1, y1 = 0, 0, width, height
        else:
            x0, y0, x1, y1 = self.region
        return (src_x >= x0) & (src_x < x1) & (src_y >= y0) & (src_y < y1)


@dataclass(frozen=True)
class SceneSpec:
    width: int
    height: int
    planes: tuple

    def __post_init__(self):
        if not any(p.region is None for p in self.planes):
            raise ValueError("scene needs at least one full-frame (background) plane")
        disparities = [p.disparity for p in self.planes]
        if len(set(disparities)) != len(disparities):
            raise ValueError("plane disparities must be pairwise distinct")


def oracle_render(spec: SceneSpec, view: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reference rendering of the scene as seen from angular position ``view``.

    Per target pixel every plane is tested for coverage at its source point
    ``(x - view * d, y)``; the covering plane with the highest disparity
    (nearest) wins and its texture is evaluated at that source point.
    Returns ``(image, disparity, mask)``; mask is False only where no plane
    covers (the background source point left the frame).
    """
    h, w = spec.height, spec.width
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)

    best_disp = np.full((h, w), -np.inf)
    winner = np.full((h, w), -1, dtype=np.int64)
    for idx, plane in enumerate(spec.planes):
        src_x = xs - view * plane.disparity
        cover = plane.covers(src_x, ys, w, h)
        better = cover & (plane.disparity > best_disp)
        best_disp[better] = plane.disparity
        winner[better] = idx

    image = np.zeros((h, w, 3), dtype=np.float64)
    disparity = np.zeros((h, w), dtype=np.float64)
    mask = winner >= 0
    for idx, plane in enumerate(spec.planes):
        sel = winner == idx
        if not sel.any():
            continue
        src_x = xs[sel] - view * plane.disparity
        image[sel] = plane.texture.sample(src_x, ys[sel])
        disparity[sel] = plane.disparity
    return image, disparity, mask


def generate_lightfield(spec: SceneSpec, M: int) -> LightFieldDataset:
    """Render the 2M+1 reference views with exact disparity and unit confidence."""
    if M < 0:
        raise ValueError("baseline radius M must be >= 0")
    views, disparities, confidences = [], [], []
    for v in range(-M, M + 1):
        img, disp, _ = oracle_render(spec, v)
        views.append(img)
        disparities.append(disp)
        confidences.append(np.ones((spec.height, spec.width)))
    return LightFieldDataset(
        lightfield=LightField(views=tuple(views), M=M),
        disparities=tuple(disparities),
        confidences=tuple(confidences),
    )


# ---------------------------------------------------------------------------
# Randomized desk-scale scenes

def _random_texture(rng: np.random.Generator):
    kind = rng.integers(0, 3)
    if kind == 0:
        return ConstantTexture(color=tuple(np.round(rng.uniform(0.05, 0.95, size=3), 3)))
    if kind == 1:
        return CheckerTexture(
            period=int(rng.choice([2, 4, 8])),
            color_a=tuple(np.round(rng.uniform(0.05, 0.95, size=3), 3)),
            color_b=tuple(np.round(rng.uniform(0.05, 0.95, size=3), 3)),
        )
    return NoiseTexture(seed=int(rng.integers(0, 2**31 - 1)))


def random_scene(rng: np.random.Generator, width: int = 64, height: int = 64,
                 max_planes: int = 4) -> SceneSpec:
    """Sample a random layered scene: static background + 1..3 foreground rectangles.

    Foreground regions are pairwise disjoint in the canonical frame, so the
    central view sees every surface and the reference renderer agrees with
    single-view warping everywhere outside true occlusion gaps. Disparities
    are distinct integers: 0 for the background, {1, 2, 3} for foregrounds.
    """
    planes = [PlaneSpec(disparity=0.0, texture=_random_texture(rng), region=None)]
    n_fg = int(rng.integers(1, max_planes - 1 + 1))
    disparities = rng.permutation([1.0, 2.0, 3.0])[:n_fg]
    taken: list[tuple] = []
    for d in disparities:
        for _ in range(64):
            rw = int(rng.integers(8, 25))
            rh = int(rng.integers(8, 25))
            x0 = int(rng.integers(0, width - rw))
            y0 = int(rng.integers(0, height - rh))
            region = (x0, y0, x0 + rw, y0 + rh)
            overlap = any(
                not (region[2] <= r[0] or r[2] <= region[0] or region[3] <= r[1] or r[3] <= region[1])
                for r in taken
            )
            if not overlap:
                taken.append(region)
                planes.append(PlaneSpec(disparity=float(d), texture=_random_texture(rng), region=region))
                break
    return SceneSpec(width=width, height=height, planes=tuple(planes))


# ---------------------------------------------------------------------------
# JSON serialization

def _texture_to_dict(tex) -> dict:
    if isinstance(tex, ConstantTexture):
        return {"kind": "constant", "color": list(tex.color)}
    if isinstance(tex, CheckerTexture):
        return {"kind": "checker", "period": tex.period,
                "colors": [list(tex.color_a), list(tex.color_b)]}
    if isinstance(tex, NoiseTexture):
        return {"kind": "noise", "seed": tex.seed}
    raise ValueError(f"unknown texture {tex!r}")


def _texture_from_dict(d: dict, fallback_seed: int):
    kind = d.get("kind")
    if kind == "constant":
        return ConstantTexture(color=tuple(d["color"]))
    if kind == "checker":
        colors = d.get("colors", [[0.0] * 3, [1.0] * 3])
        return CheckerTexture(period=int(d["period"]),
                              color_a=tuple(colors[0]), color_b=tuple(colors[1]))
    if kind == "noise":
        return NoiseTexture(seed=int(d.get("seed", fallback_seed)))
    raise ValueError(f"unknown texture kind {kind!r}")


def scene_to_json(spec: SceneSpec, path) -> None:
    doc = {
        "width": spec.width,
        "height": spec.height,
        "planes": [
            {
                "disparity": p.disparity,
                "region": list(p.region) if p.region is not None else None,
                "texture": _texture_to_dict(p.texture),
            }
            for p in spec.planes
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def scene_from_json(path, noise_seed: int = 0) -> SceneSpec:
    """Parse a scene description; noise textures without a "seed" entry take
    ``noise_seed`` offset by their plane index."""
    doc = json.loads(Path(path).read_text())
    planes = tuple(
        PlaneSpec(
            disparity=float(p["disparity"]),
            region=tuple(p["region"]) if p.get("region") is not None else None,
            texture=_texture_from_dict(p["texture"], fallback_seed=noise_seed + i),
        )
        for i, p in enumerate(doc["planes"])
    )
    return SceneSpec(width=int(doc["width"]), height=int(doc["height"]), planes=planes)
