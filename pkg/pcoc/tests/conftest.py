import json

import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from pcocnet.lft import save_png, write_tensor


@pytest.fixture(scope="session")
def toy_dataset(tmp_path_factory):
    """A one-sample rendered dataset written through the file interfaces.

    The ground truth is a smooth random image; the base rendering carries a
    global color distortion plus a zeroed occlusion gap, so the generator
    must learn both a parallax-style correction and a completion. Channels:
    0-2 informative difference, 3-5 noise, 6 a label-like gradient.
    """
    root = tmp_path_factory.mktemp("toy")
    rng = np.random.default_rng(3)
    gt = rng.uniform(0, 1, size=(32, 32, 3)).astype(np.float32)
    gt = gaussian_filter(gt, sigma=(1.5, 1.5, 0)).astype(np.float32)

    vd = gt.copy()
    gap = np.zeros((32, 32), dtype=bool)
    gap[10:20, 8:18] = True
    vd[gap] = 0.0
    vd = vd * 0.7

    t3 = np.linspace(-0.5, 0.5, 32, dtype=np.float32)[:, None].repeat(32, axis=1)
    feats = np.concatenate([
        gt - vd,
        rng.normal(0, 0.1, size=(32, 32, 3)).astype(np.float32),
        t3[:, :, None],
    ], axis=2)

    write_tensor(feats, root / "features.lft")
    save_png(gt, root / "target.png")
    save_png(vd, root / "render_avg.png")
    manifest = [{
        "tensor": "features.lft",
        "ground_truth": "target.png",
        "vd": "render_avg.png",
        "scene": "toy",
        "t": 20.0,
        "alpha": 5.0,
    }]
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return {
        "root": root,
        "manifest": root / "manifest.json",
        "gt": gt,
        "vd": vd,
        "features": feats,
        "gap": gap,
    }
