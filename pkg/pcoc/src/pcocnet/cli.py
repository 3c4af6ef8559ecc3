"""Command-line entry points: ``pcoc train`` and ``pcoc predict``."""

from __future__ import annotations

import argparse
import sys

from .data import EmptyManifestError
from .train import TrainConfig, export_predictions, train


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcoc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train on a rendered-dataset manifest")
    p_train.add_argument("manifest", help="JSON manifest written by the renderer")
    p_train.add_argument("--out", default=None, help="output directory (default: manifest dir)")
    p_train.add_argument("--lambda-gan", type=float, default=0.001)
    p_train.add_argument("--batch-size", type=int, default=4)
    p_train.add_argument("--lr", type=float, default=1e-4)
    p_train.add_argument("--pretrain-steps", type=int, default=200)
    p_train.add_argument("--adversarial-steps", type=int, default=200)
    p_train.add_argument("--patch", type=int, default=32)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--resume", default=None, help="checkpoint to continue from")

    p_pred = sub.add_parser("predict", help="write corrected predictions as PNGs")
    p_pred.add_argument("checkpoint")
    p_pred.add_argument("manifest")
    p_pred.add_argument("--out", default=None, help="output directory (default: manifest dir)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainConfig(
                lambda_gan=args.lambda_gan,
                batch_size=args.batch_size,
                lr=args.lr,
                pretrain_epochs=args.pretrain_steps,
                adversarial_steps=args.adversarial_steps,
                patch=args.patch,
                seed=args.seed,
            )
            path = train(args.manifest, config, out_dir=args.out, resume_from=args.resume)
            print(f"checkpoint written to {path}")
        else:
            written = export_predictions(args.checkpoint, args.manifest, out_dir=args.out)
            for p in written:
                print(f"wrote {p}")
        return 0
    except (EmptyManifestError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
