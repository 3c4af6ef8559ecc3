"""File I/O for images, disparity/confidence maps, and light-field datasets.

Formats
-------
* Images and label maps: PNG, 8- or 16-bit. Intensities are scaled to
  [0, 1] on load (v / 255 or v / 65535) and re-quantized on save, so a
  save/load round trip is exact to within half a quantization step.
* Disparity and confidence: PFM (portable float map), single channel.
  Rows are stored bottom-to-top and the scale sign encodes endianness,
  following the format convention.
* Dataset directory layout: ``view_{v}.png``, ``disp_{v}.pfm``,
  ``conf_{v}.pfm`` for signed view indices v = -M..M.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import (
    DimensionMismatchError,
    MissingViewError,
    NonFiniteValuesError,
    UnsupportedFormatError,
)
from .validation import as_image, as_labels, as_map, as_mask

__all__ = [
    "LightField",
    "LightFieldDataset",
    "load_image",
    "save_image",
    "load_pfm",
    "save_pfm",
    "load_disparity",
    "write_disparity",
    "load_confidence",
    "write_confidence",
    "save_mask",
    "load_mask",
    "save_labels",
    "load_labels",
    "save_labels_vis",
    "save_id_map",
    "load_id_map",
    "load_lightfield",
    "load_dataset",
    "save_dataset",
    "view_filename",
    "disparity_filename",
    "confidence_filename",
]


# ---------------------------------------------------------------------------
# PNG images

def load_image(path) -> np.ndarray:
    """Load an 8- or 16-bit PNG as an (H, W, C) float64 image in [0, 1].

    Grayscale files give C=1, RGB files C=3. Values are clamped to [0, 1]
    after scaling.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("L", "RGB"):
                arr = np.asarray(im, dtype=np.float64) / 255.0
            elif mode in ("I", "I;16", "I;16B", "I;16L"):
                arr = np.asarray(im, dtype=np.float64) / 65535.0
            elif mode in ("LA", "RGBA", "P", "1"):
                arr = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
            else:
                raise UnsupportedFormatError(f"unsupported PNG mode {mode!r} in {path}")
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise UnsupportedFormatError(f"cannot decode image {path}: {exc}") from exc
    arr = np.clip(arr, 0.0, 1.0)
    return as_image(arr, "loaded image")


def save_image(image, path, bit_depth: int = 8) -> None:
    """Save an image to PNG, clamping to [0, 1] and quantizing.

    16-bit output is supported for single-channel images only.
    """
    img = as_image(image)
    img = np.clip(img, 0.0, 1.0)
    path = Path(path)
    if bit_depth == 8:
        data = np.rint(img * 255.0).astype(np.uint8)
        if data.shape[2] == 1:
            PILImage.fromarray(data[:, :, 0], mode="L").save(path, format="PNG")
        else:
            PILImage.fromarray(data, mode="RGB").save(path, format="PNG")
    elif bit_depth == 16:
        if img.shape[2] != 1:
            raise UnsupportedFormatError("16-bit PNG export supports single-channel images only")
        data = np.rint(img[:, :, 0] * 65535.0).astype(np.uint16)
        PILImage.fromarray(data).save(path, format="PNG")
    else:
        raise UnsupportedFormatError(f"unsupported bit depth {bit_depth}")


# ---------------------------------------------------------------------------
# PFM scalar maps

def load_pfm(path) -> np.ndarray:
    """Load a single-channel PFM file as an (H, W) float64 array.

    Raises UnsupportedFormatError for color PFMs or malformed headers and
    NonFiniteValuesError if the payload contains NaN/inf.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such PFM file: {path}")
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic == b"PF":
            raise UnsupportedFormatError(f"{path}: color PFM not supported (expected single channel)")
        if magic != b"Pf":
            raise UnsupportedFormatError(f"{path}: not a PFM file (magic {magic!r})")
        dims = fh.readline().split()
        if len(dims) != 2:
            raise UnsupportedFormatError(f"{path}: malformed PFM dimension line")
        try:
            width, height = int(dims[0]), int(dims[1])
            scale = float(fh.readline().strip())
        except ValueError as exc:
            raise UnsupportedFormatError(f"{path}: malformed PFM header") from exc
        endian = "<" if scale < 0 else ">"
        count = width * height
        payload = fh.read(count * 4)
        if len(payload) != count * 4:
            raise UnsupportedFormatError(f"{path}: truncated PFM payload")
        data = np.frombuffer(payload, dtype=endian + "f4").reshape(height, width)
    if not np.all(np.isfinite(data)):
        raise NonFiniteValuesError(f"{path}: PFM contains non-finite values")
    # PFM rows run bottom-to-top.
    return data[::-1].astype(np.float64)


def save_pfm(data, path) -> None:
    """Save an (H, W) array as a little-endian single-channel PFM."""
    arr = as_map(data)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValuesError("refusing to write non-finite values to PFM")
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(b"Pf\n")
        fh.write(f"{w} {h}\n".encode("ascii"))
        fh.write(b"-1.0\n")
        fh.write(arr[::-1].astype("<f4").tobytes())


def load_disparity(path) -> np.ndarray:
    """Load a disparity map (PFM, single channel, finite values)."""
    return load_pfm(path)


def write_disparity(disparity, path) -> None:
    """Write a disparity map as PFM. float32-representable values round-trip exactly."""
    save_pfm(disparity, path)


def load_confidence(path) -> np.ndarray:
    """Load a confidence map (PFM) and clip to [0, 1]."""
    return np.clip(load_pfm(path), 0.0, 1.0)


def write_confidence(confidence, path) -> None:
    save_pfm(np.clip(as_map(confidence), 0.0, 1.0), path)


# ---------------------------------------------------------------------------
# Masks and label maps

def save_mask(mask, path) -> None:
    """Save a boolean mask as an 8-bit PNG (255 = valid)."""
    m = as_mask(mask)
    PILImage.fromarray(np.where(m, 255, 0).astype(np.uint8), mode="L").save(path, format="PNG")


def load_mask(path) -> np.ndarray:
    return load_image(path)[:, :, 0] > 0.5


def save_labels(labels, path) -> None:
    """Save a label map with raw label values as 8-bit PNG (labels must be <= 255)."""
    lab = as_labels(labels)
    if lab.max(initial=0) > 255:
        raise UnsupportedFormatError("label values exceed 8-bit range")
    PILImage.fromarray(lab.astype(np.uint8), mode="L").save(path, format="PNG")


def load_labels(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such label file: {path}")
    with PILImage.open(path) as im:
        arr = np.asarray(im.convert("L"))
    return arr.astype(np.int64)


def save_labels_vis(labels, layer_count: int, path) -> None:
    """Save a label map scaled by floor(255 / L) for visual inspection."""
    lab = as_labels(labels)
    step = 255 // max(int(layer_count), 1)
    PILImage.fromarray(np.clip(lab * step, 0, 255).astype(np.uint8), mode="L").save(path, format="PNG")


def save_id_map(ids, path) -> None:
    """Save an integer id raster (e.g. superpixel labels) as 16-bit PNG."""
    arr = as_labels(ids, "ids")
    if arr.max(initial=0) > 65535:
        raise UnsupportedFormatError("id values exceed 16-bit range")
    PILImage.fromarray(arr.astype(np.uint16)).save(path, format="PNG")


def load_id_map(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such id map: {path}")
    with PILImage.open(path) as im:
        arr = np.asarray(im)
    return arr.astype(np.int64)


# ---------------------------------------------------------------------------
# Light-field dataset layout

def view_filename(v: int) -> str:
    return f"view_{v}.png"


def disparity_filename(v: int) -> str:
    return f"disp_{v}.pfm"


def confidence_filename(v: int) -> str:
    return f"conf_{v}.pfm"


@dataclass(frozen=True)
class LightField:
    """A horizontal array of 2M+1 views with indices -M..M, equal dimensions.

    ``views[i]`` holds the image for view index ``i - M``.
    """

    views: tuple
    M: int

    def __post_init__(self):
        if self.M < 0:
            raise ValueError("baseline radius M must be >= 0")
        if len(self.views) != 2 * self.M + 1:
            raise ValueError(
                f"expected {2 * self.M + 1} views for M={self.M}, got {len(self.views)}"
            )
        shape = self.views[0].shape
        for i, v in enumerate(self.views):
            if v.shape != shape:
                raise DimensionMismatchError(
                    f"view {i - self.M} has shape {v.shape}, expected {shape}"
                )

    @property
    def indices(self) -> range:
        return range(-self.M, self.M + 1)

    def view(self, v: int) -> np.ndarray:
        if not -self.M <= v <= self.M:
            raise IndexError(f"view index {v} outside [-{self.M}, {self.M}]")
        return self.views[v + self.M]

    @property
    def height(self) -> int:
        return self.views[0].shape[0]

    @property
    def width(self) -> int:
        return self.views[0].shape[1]


@dataclass(frozen=True)
class LightFieldDataset:
    """A light field plus per-view disparity and confidence maps."""

    lightfield: LightField
    disparities: tuple
    confidences: tuple

    def __post_init__(self):
        n = len(self.lightfield.views)
        if len(self.disparities) != n or len(self.confidences) != n:
            raise DimensionMismatchError("dataset needs one disparity and confidence map per view")
        h, w = self.lightfield.height, self.lightfield.width
        for d in list(self.disparities) + list(self.confidences):
            if d.shape != (h, w):
                raise DimensionMismatchError(f"map shape {d.shape} does not match views ({h}, {w})")

    @property
    def M(self) -> int:
        return self.lightfield.M

    def disparity(self, v: int) -> np.ndarray:
        return self.disparities[v + self.M]

    def confidence(self, v: int) -> np.ndarray:
        return self.confidences[v + self.M]


def load_lightfield(directory, M: int) -> LightField:
    """Load views view_{-M}.png .. view_{M}.png from a directory."""
    directory = Path(directory)
    views = []
    for v in range(-M, M + 1):
        path = directory / view_filename(v)
        if not path.exists():
            raise MissingViewError(v, path)
        views.append(load_image(path))
    return LightField(views=tuple(views), M=M)


def infer_baseline_radius(directory) -> int:
    """Infer M from the view files present in a dataset directory."""
    directory = Path(directory)
    indices = []
    for p in directory.glob("view_*.png"):
        stem = p.stem[len("view_"):]
        try:
            indices.append(int(stem))
        except ValueError:
            continue
    if not indices:
        raise FileNotFoundError(f"no view_*.png files in {directory}")
    M = max(abs(min(indices)), abs(max(indices)))
    return M


def load_dataset(directory, M: int | None = None) -> LightFieldDataset:
    """Load a full dataset (views + disparity + confidence) from a directory."""
    directory = Path(directory)
    if M is None:
        M = infer_baseline_radius(directory)
    lf = load_lightfield(directory, M)
    disparities, confidences = [], []
    for v in range(-M, M + 1):
        disparities.append(load_disparity(directory / disparity_filename(v)))
        conf_path = directory / confidence_filename(v)
        if conf_path.exists():
            confidences.append(load_confidence(conf_path))
        else:
            confidences.append(np.ones((lf.height, lf.width)))
    return LightFieldDataset(
        lightfield=lf, disparities=tuple(disparities), confidences=tuple(confidences)
    )


def save_dataset(dataset: LightFieldDataset, directory) -> None:
    """Write a dataset in the standard directory layout."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    M = dataset.M
    for v in range(-M, M + 1):
        save_image(dataset.lightfield.view(v), directory / view_filename(v))
        write_disparity(dataset.disparity(v), directory / disparity_filename(v))
        write_confidence(dataset.confidence(v), directory / confidence_filename(v))
