"""Command-line pipeline driver.

Subcommands
-----------
synth   render a synthetic layered scene into the reference dataset layout
render  run the full synthesis pipeline for one target angular position
eval    tabulate PSNR/SSIM for (prediction, ground truth) pairs as CSV

Exit codes: 0 success, 1 usage error, 2 data error. Flag values override a
``--config`` JSON file, which overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

import numpy as np

from .errors import LfStrataError
from .features import write_manifest, write_tensor
from .io import (
    load_dataset,
    load_image,
    load_mask,
    save_dataset,
    save_id_map,
    save_image,
    save_labels,
    save_labels_vis,
    save_mask,
    save_pfm,
)
from .metrics import psnr, ssim
from .pipeline import NovelViewSynthesizer
from .sdr import DEFAULT_LAYER_COUNT
from .synthdata import generate_lightfield, oracle_render, scene_from_json

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems with exit code 1."""

    def error(self, message):
        print(f"usage error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lfstrata", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic light-field dataset")
    p_synth.add_argument("scene", help="scene description JSON")
    p_synth.add_argument("out_dir", help="output dataset directory")
    p_synth.add_argument("--m", type=int, default=4, help="baseline radius (2M+1 views)")
    p_synth.add_argument("--targets", default=None,
                         help="comma-separated target positions to render ground truth for")
    p_synth.add_argument("--seed", type=int, default=0,
                         help="fallback seed for noise textures whose JSON omits one")

    p_render = sub.add_parser("render", help="synthesize a novel view and its artifacts")
    p_render.add_argument("dataset", help="dataset directory (view_{v}.png, disp_{v}.pfm, conf_{v}.pfm)")
    p_render.add_argument("--t", type=float, required=True, help="target angular position")
    p_render.add_argument("--out", required=True, help="output directory")
    p_render.add_argument("--layers", type=int, default=None, help=f"stratification layers (default {DEFAULT_LAYER_COUNT})")
    p_render.add_argument("--sp-sizes", default=None, help="comma-separated superpixel sizes (default 100,400)")
    p_render.add_argument("--avg-mode", choices=["paper", "masked"], default=None,
                          help="multi-reference averaging mode (default masked)")
    p_render.add_argument("--conf-threshold", type=float, default=None,
                          help="confidence threshold for segment disparity votes (default 0.5)")
    p_render.add_argument("--window", type=int, default=None, help="label dilation window (default 3)")
    p_render.add_argument("--config", default=None, help="JSON config file; flags take precedence")
    p_render.add_argument("--debug-sp", action="store_true",
                          help="also export superpixel label maps as 16-bit PNG")

    p_eval = sub.add_parser("eval", help="compute PSNR/SSIM rows as CSV")
    p_eval.add_argument("pred", nargs="?", help="predicted image (PNG)")
    p_eval.add_argument("gt", nargs="?", help="ground-truth image (PNG)")
    p_eval.add_argument("--pairs", default=None,
                        help="JSON list of {pred, gt, scene, t, m, method[, mask]} entries")
    p_eval.add_argument("--scene", default="scene")
    p_eval.add_argument("--t", type=float, default=0.0)
    p_eval.add_argument("--m", type=int, default=4)
    p_eval.add_argument("--method", default="pipeline")
    p_eval.add_argument("--mask", default=None, help="optional validity mask PNG for PSNR")
    p_eval.add_argument("--out", default=None, help="CSV output path (default stdout)")
    return parser


def _merge_config(args, config_path, keys):
    """flags > config file > defaults."""
    defaults = {
        "layers": DEFAULT_LAYER_COUNT,
        "sp_sizes": "100,400",
        "avg_mode": "masked",
        "conf_threshold": 0.5,
        "window": 3,
    }
    config = {}
    if config_path:
        config = json.loads(Path(config_path).read_text())
    merged = {}
    for key in keys:
        flag = getattr(args, key)
        if flag is not None:
            merged[key] = flag
        elif key in config:
            merged[key] = config[key]
        else:
            merged[key] = defaults[key]
    return merged


def _parse_sizes(value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    return tuple(int(v) for v in str(value).split(",") if v.strip())


# ---------------------------------------------------------------------------
# Subcommands

def cmd_synth(args) -> int:
    spec = scene_from_json(args.scene, noise_seed=args.seed)
    dataset = generate_lightfield(spec, args.m)
    out = Path(args.out_dir)
    save_dataset(dataset, out)
    if args.targets:
        for token in str(args.targets).split(","):
            t = float(token)
            image, _, mask = oracle_render(spec, t)
            name = f"{t:g}"
            save_image(image, out / f"target_{name}.png")
            save_mask(mask, out / f"target_{name}_mask.png")
    print(f"wrote {2 * args.m + 1} views to {out}")
    return 0


def cmd_render(args) -> int:
    cfg = _merge_config(args, args.config, ["layers", "sp_sizes", "avg_mode", "conf_threshold", "window"])
    sizes = _parse_sizes(cfg["sp_sizes"])

    dataset = load_dataset(args.dataset)
    synth = NovelViewSynthesizer(
        layers=int(cfg["layers"]),
        sp_sizes=sizes,
        avg_mode=str(cfg["avg_mode"]),
        conf_threshold=float(cfg["conf_threshold"]),
        fill_window=int(cfg["window"]),
    ).fit(dataset)
    art = synth.predict(args.t)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_image(np.clip(art.avg[0], 0, 1), out / "render_avg.png")
    save_mask(art.avg[1], out / "render_avg_mask.png")
    for size, (img, mask) in sorted(art.sp.items()):
        save_image(np.clip(img, 0, 1), out / f"render_sp{size}.png")
        save_mask(mask, out / f"render_sp{size}_mask.png")
    save_pfm(art.target_disparity[0], out / "target_disparity.pfm")
    save_mask(art.target_disparity[1], out / "target_disparity_mask.png")
    save_labels(art.labels, out / "labels.png")
    save_labels_vis(art.labels, int(cfg["layers"]), out / "labels_vis.png")
    save_labels(art.labels_filled, out / "labels_filled.png")
    save_labels_vis(art.labels_filled, int(cfg["layers"]), out / "labels_filled_vis.png")
    save_mask(art.features.gap_mask, out / "gap_mask.png")
    save_image(np.clip(art.completed, 0, 1), out / "completed.png")
    write_tensor(art.features.data, out / "features.lft")
    if args.debug_sp:
        for size, sp in sorted(synth.superpixels_.items()):
            save_id_map(sp.labels, out / f"superpixels_{size}.png")

    scene_name = Path(args.dataset).resolve().name
    gt_name = f"target_{args.t:g}.png"
    gt_path = Path(args.dataset) / gt_name
    write_manifest(
        [{
            "tensor": "features.lft",
            "ground_truth": str(gt_path.resolve()) if gt_path.exists() else None,
            "vd": "render_avg.png",
            "scene": scene_name,
            "t": args.t,
            "alpha": art.alpha,
        }],
        out / "manifest.json",
    )
    print(f"rendered t={args.t:g} (alpha={art.alpha:g}) into {out}")
    return 0


def _eval_entries(args) -> list:
    if args.pairs:
        doc = json.loads(Path(args.pairs).read_text())
        if not isinstance(doc, list):
            raise LfStrataError("--pairs file must hold a JSON list")
        return doc
    if not args.pred or not args.gt:
        raise SystemExit(USAGE_ERROR)
    return [{
        "pred": args.pred, "gt": args.gt, "scene": args.scene,
        "t": args.t, "m": args.m, "method": args.method, "mask": args.mask,
    }]


def cmd_eval(args) -> int:
    rows = []
    for entry in _eval_entries(args):
        pred = load_image(entry["pred"])
        gt = load_image(entry["gt"])
        mask = load_mask(entry["mask"]) if entry.get("mask") else None
        m = int(entry.get("m", 4))
        t = float(entry.get("t", 0.0))
        alpha = abs(t) / m if m > 0 else float("inf")
        rows.append({
            "scene": str(entry.get("scene", "scene")),
            "t": t,
            "alpha": alpha,
            "method": str(entry.get("method", "pipeline")),
            "psnr_db": psnr(pred, gt, mask),
            "ssim": ssim(pred, gt),
        })
    rows.sort(key=lambda r: (r["scene"], r["alpha"], r["method"]))

    buf = _io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["scene", "t", "alpha", "method", "psnr_db", "ssim"])
    for r in rows:
        writer.writerow([r["scene"], f"{r['t']:g}", f"{r['alpha']:g}", r["method"],
                         f"{r['psnr_db']:.4f}", f"{r['ssim']:.6f}"])
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    handlers = {"synth": cmd_synth, "render": cmd_render, "eval": cmd_eval}
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (LfStrataError, FileNotFoundError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
