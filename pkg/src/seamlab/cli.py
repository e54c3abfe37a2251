"""Command-line interface exposing every pipeline stage.

Subcommands: mask-gen, simulate, refine, pool, blend, tonemap-fit,
tonemap-apply, eval. All state flows through argv and files; the default seed
is 0 so every run is reproducible without flags.

Exit codes: 0 success, 1 usage/parameter error, 2 I/O error (missing or
corrupt file), 3 numeric failure (solver non-convergence, degenerate fit or
generation). Failures print one JSON object {code, message, context} on
stderr.

Batch mode: simulate, refine, pool and eval accept ``--manifest`` (a JSON
array of per-item file mappings, paths relative to the manifest) plus
``--out-dir`` / ``--out``; items are processed with ``--jobs`` workers and
item i always uses random stream i, so output bytes are independent of
scheduling.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .blending import SolverParams, poisson_blend
from .errors import ConfigError, ConvergenceError, NumericError, ShapeError
from .imops import JitterParams
from .io import load_image, load_mask, save_image, save_mask
from .maskgen import MaskGenParams, generate_mask
from .metrics import evaluate
from .refine import PoolParams, SubprocessRefiner, classical_refine, pool_refine
from .rng import make_rng
from .simulate import SimConfig, simulate
from .tonemap import AmplifyParams, ToneMap, apply_tonemap, fit_tonemap

METRIC_KEYS = ("l1_full", "l1_masked", "psnr", "disc_l1")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _emit_error(code: str, message: str, context: dict) -> None:
    sys.stderr.write(json.dumps({"code": code, "message": message, "context": context}) + "\n")


def _add_batch_flags(sub):
    sub.add_argument("--manifest", help="JSON array of per-item file mappings")
    sub.add_argument("--out-dir", help="output directory for batch mode")
    sub.add_argument("--jobs", type=int, default=1, help="batch workers (default 1)")


def _add_amplify_flags(sub):
    sub.add_argument("--degree", type=int, default=5, help="polynomial degree (default 5)")
    sub.add_argument("--beta-min", type=float, default=20.0, help="amplification low (default 20)")
    sub.add_argument("--beta-max", type=float, default=40.0, help="amplification high (default 40)")
    sub.add_argument(
        "--samples", type=int, default=4096, help="pixel samples per mask side (default 4096)"
    )


def _add_refiner_flags(sub):
    sub.add_argument("--ring-width", type=float, default=8.0, help="ring width in px (default 8)")
    sub.add_argument("--degree", type=int, default=3, help="correction polynomial degree (default 3)")
    sub.add_argument(
        "--feather-sigma", type=float, default=2.0, help="feathering sigma in px (default 2)"
    )
    sub.add_argument("--quantiles", type=int, default=64, help="matched quantiles (default 64)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seamlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="seamlab 0.1.0")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("mask-gen", help="generate a random free-form binary mask")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--out", required=True, help="output mask PNG")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coverage", type=float, nargs=2, default=(0.05, 0.5), metavar=("LO", "HI"))
    p.add_argument("--strokes", type=int, nargs=2, default=(1, 4), metavar=("LO", "HI"))
    p.add_argument(
        "--stroke-width", type=float, nargs=2, default=(0.03, 0.12), metavar=("LO", "HI"),
        help="stroke width as a fraction of min(height, width)",
    )
    p.add_argument("--rects", type=int, nargs=2, default=(0, 2), metavar=("LO", "HI"))
    p.set_defaults(func=cmd_mask_gen)

    p = subs.add_parser("simulate", help="synthesize a degraded/target pair")
    p.add_argument("--in", dest="image", help="clean input PNG")
    p.add_argument("--mask", help="binary mask PNG")
    p.add_argument("--config", help="JSON simulation config (defaults built in)")
    p.add_argument(
        "--quality", type=int, help="pin the config's JPEG quality range to one value"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="degraded output PNG")
    p.add_argument("--out-gt", help="target output PNG")
    p.add_argument("--out-mask", help="composited (possibly soft) mask PNG")
    p.add_argument("--out-json", help="sidecar JSON: seed, applied families, parameters")
    _add_batch_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("refine", help="classical quantile-matching refinement")
    p.add_argument("--in", dest="image", help="edited input PNG")
    p.add_argument("--mask", help="binary mask PNG")
    p.add_argument("--out", help="refined output PNG")
    _add_refiner_flags(p)
    _add_batch_flags(p)
    p.set_defaults(func=cmd_refine)

    p = subs.add_parser("pool", help="pooled refinement over jittered variants")
    p.add_argument("--in", dest="image", help="edited input PNG")
    p.add_argument("--mask", help="binary mask PNG")
    p.add_argument("--out", help="refined output PNG")
    p.add_argument("--n", type=int, default=8, help="variant count (default 8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--brightness", type=float, nargs=2, default=(0.95, 1.05), metavar=("LO", "HI")
    )
    p.add_argument("--contrast", type=float, nargs=2, default=(0.95, 1.05), metavar=("LO", "HI"))
    p.add_argument(
        "--saturation", type=float, nargs=2, default=(1.0, 1.0), metavar=("LO", "HI")
    )
    p.add_argument("--hue", type=float, nargs=2, default=(0.0, 0.0), metavar=("LO", "HI"))
    p.add_argument(
        "--refiner-cmd",
        help="external refiner command with {input} {mask} {output} placeholders "
        "(default: built-in classical refiner)",
    )
    _add_refiner_flags(p)
    _add_batch_flags(p)
    p.set_defaults(func=cmd_pool)

    p = subs.add_parser("blend", help="gradient-domain compositing")
    p.add_argument("--src", required=True, help="gradient source PNG")
    p.add_argument("--dst", required=True, help="destination/boundary PNG")
    p.add_argument("--mask", required=True, help="binary mask PNG")
    p.add_argument("--out", required=True, help="output PNG")
    p.add_argument("--tol", type=float, default=1e-6, help="relative residual (default 1e-6)")
    p.add_argument("--max-iter", type=int, default=10_000, help="iteration cap (default 10000)")
    p.add_argument(
        "--method", choices=("cg", "gauss-seidel"), default="cg", help="solver (default cg)"
    )
    p.add_argument(
        "--oracle-gradients",
        action="store_true",
        help="take the guidance field from --gt instead of --src (reference-leaking "
        "comparison mode, never a default)",
    )
    p.add_argument("--gt", help="ground-truth PNG, required with --oracle-gradients")
    p.set_defaults(func=cmd_blend)

    p = subs.add_parser("tonemap-fit", help="fit the discriminative tone map")
    p.add_argument("--pred", required=True, help="prediction PNG")
    p.add_argument("--gt", required=True, help="ground-truth PNG")
    p.add_argument("--mask", required=True, help="binary mask PNG")
    p.add_argument("--out", required=True, help="output tone-map JSON")
    p.add_argument("--seed", type=int, default=0)
    _add_amplify_flags(p)
    p.set_defaults(func=cmd_tonemap_fit)

    p = subs.add_parser("tonemap-apply", help="apply a fitted tone map to an image")
    p.add_argument("--in", dest="image", required=True, help="input PNG")
    p.add_argument("--tonemap", required=True, help="tone-map JSON from tonemap-fit")
    p.add_argument("--out", required=True, help="output PNG")
    p.set_defaults(func=cmd_tonemap_apply)

    p = subs.add_parser("eval", help="metrics report for a prediction/ground-truth pair")
    p.add_argument("--pred", help="prediction PNG")
    p.add_argument("--gt", help="ground-truth PNG")
    p.add_argument("--mask", help="binary mask PNG")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="batch mode: output JSON array")
    p.add_argument("--out-csv", help="batch mode: CSV summary (mean per metric)")
    _add_amplify_flags(p)
    _add_batch_flags(p)
    p.set_defaults(func=cmd_eval)

    return parser


def _require(args, names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) in (None,)]
    if missing:
        raise _UsageError(f"missing required arguments: {', '.join(missing)}")


def _load_sim_config(path) -> SimConfig:
    if path is None:
        return SimConfig()
    return SimConfig.from_json(Path(path).read_text())


def _amplify_from_args(args) -> AmplifyParams:
    return AmplifyParams(
        beta_range=(args.beta_min, args.beta_max),
        samples_per_side=args.samples,
        degree=args.degree,
    )


def _load_manifest(path):
    items = json.loads(Path(path).read_text())
    if not isinstance(items, list):
        raise ConfigError("manifest must be a JSON array")
    base = Path(path).parent
    resolved = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise ConfigError(f"manifest item {i} must be an object")
        resolved.append({k: str(base / v) for k, v in item.items()})
    return resolved


def _run_batch(worker, payloads, jobs: int):
    if jobs <= 1:
        return [worker(p) for p in payloads]
    results = [None] * len(payloads)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(worker, p): i for i, p in enumerate(payloads)}
        for future, i in futures.items():
            results[i] = future.result()
    return results


def cmd_mask_gen(args) -> int:
    params = MaskGenParams(
        stroke_count=tuple(args.strokes),
        stroke_width_frac=tuple(args.stroke_width),
        rect_count=tuple(args.rects),
        coverage=tuple(args.coverage),
    )
    mask = generate_mask(args.height, args.width, params, make_rng(args.seed))
    save_mask(args.out, mask)
    return 0


def _simulate_item(payload: dict):
    cfg = SimConfig.from_json(payload["config"])
    rng = make_rng(payload["seed"], payload["stream"])
    clean = load_image(payload["image"])
    mask = load_mask(payload["mask"])
    pair = simulate(clean, mask, cfg, rng)
    if payload.get("out"):
        save_image(payload["out"], pair.degraded)
    if payload.get("out_gt"):
        save_image(payload["out_gt"], pair.target)
    if payload.get("out_mask"):
        save_mask(payload["out_mask"], pair.mask)
    if payload.get("out_json"):
        sidecar = {
            "seed": payload["seed"],
            "stream": payload["stream"],
            "applied": pair.applied,
            "params": pair.params,
        }
        Path(payload["out_json"]).write_text(json.dumps(sidecar, indent=2) + "\n")
    return None


def cmd_simulate(args) -> int:
    cfg = _load_sim_config(args.config)
    if args.quality is not None:
        cfg = replace(cfg, jpeg_quality=(args.quality, args.quality))
    if args.manifest:
        _require(args, ["out_dir"])
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payloads = []
        for i, item in enumerate(_load_manifest(args.manifest)):
            payloads.append(
                {
                    "config": cfg.to_json(),
                    "seed": args.seed,
                    "stream": i,
                    "image": item["image"],
                    "mask": item["mask"],
                    "out": str(out_dir / f"{i:05d}_degraded.png"),
                    "out_gt": str(out_dir / f"{i:05d}_target.png"),
                    "out_mask": str(out_dir / f"{i:05d}_mask.png"),
                    "out_json": str(out_dir / f"{i:05d}_meta.json"),
                }
            )
        _run_batch(_simulate_item, payloads, args.jobs)
        return 0
    _require(args, ["image", "mask", "out"])
    _simulate_item(
        {
            "config": cfg.to_json(),
            "seed": args.seed,
            "stream": 0,
            "image": args.image,
            "mask": args.mask,
            "out": args.out,
            "out_gt": args.out_gt,
            "out_mask": args.out_mask,
            "out_json": args.out_json,
        }
    )
    return 0


def _refine_item(payload: dict):
    img = load_image(payload["image"])
    mask = load_mask(payload["mask"])
    refined = classical_refine(
        img,
        mask,
        degree=payload["degree"],
        ring_width=payload["ring_width"],
        feather_sigma=payload["feather_sigma"],
        quantiles=payload["quantiles"],
    )
    save_image(payload["out"], refined)
    return None


def _refine_payload(args, image, mask, out) -> dict:
    return {
        "image": image,
        "mask": mask,
        "out": out,
        "degree": args.degree,
        "ring_width": args.ring_width,
        "feather_sigma": args.feather_sigma,
        "quantiles": args.quantiles,
    }


def cmd_refine(args) -> int:
    if args.manifest:
        _require(args, ["out_dir"])
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payloads = [
            _refine_payload(args, item["image"], item["mask"], str(out_dir / f"{i:05d}_refined.png"))
            for i, item in enumerate(_load_manifest(args.manifest))
        ]
        _run_batch(_refine_item, payloads, args.jobs)
        return 0
    _require(args, ["image", "mask", "out"])
    _refine_item(_refine_payload(args, args.image, args.mask, args.out))
    return 0


def _pool_item(payload: dict):
    img = load_image(payload["image"])
    mask = load_mask(payload["mask"])
    if payload["refiner_cmd"]:
        refiner = SubprocessRefiner(shlex.split(payload["refiner_cmd"]))
    else:
        def refiner(image, m):
            return classical_refine(
                image,
                m,
                degree=payload["degree"],
                ring_width=payload["ring_width"],
                feather_sigma=payload["feather_sigma"],
                quantiles=payload["quantiles"],
            )

    params = PoolParams(
        n=payload["n"],
        jitter=JitterParams(
            brightness=tuple(payload["brightness"]),
            contrast=tuple(payload["contrast"]),
            saturation=tuple(payload["saturation"]),
            hue_degrees=tuple(payload["hue"]),
        ),
    )
    out = pool_refine(refiner, img, mask, params, make_rng(payload["seed"], payload["stream"]))
    save_image(payload["out"], out)
    return None


def _pool_payload(args, image, mask, out, stream) -> dict:
    return {
        "image": image,
        "mask": mask,
        "out": out,
        "n": args.n,
        "seed": args.seed,
        "stream": stream,
        "brightness": list(args.brightness),
        "contrast": list(args.contrast),
        "saturation": list(args.saturation),
        "hue": list(args.hue),
        "refiner_cmd": args.refiner_cmd,
        "degree": args.degree,
        "ring_width": args.ring_width,
        "feather_sigma": args.feather_sigma,
        "quantiles": args.quantiles,
    }


def cmd_pool(args) -> int:
    if args.manifest:
        _require(args, ["out_dir"])
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payloads = [
            _pool_payload(args, item["image"], item["mask"], str(out_dir / f"{i:05d}_refined.png"), i)
            for i, item in enumerate(_load_manifest(args.manifest))
        ]
        _run_batch(_pool_item, payloads, args.jobs)
        return 0
    _require(args, ["image", "mask", "out"])
    _pool_item(_pool_payload(args, args.image, args.mask, args.out, 0))
    return 0


def cmd_blend(args) -> int:
    src = load_image(args.src)
    dst = load_image(args.dst)
    mask = load_mask(args.mask)
    if args.oracle_gradients:
        if not args.gt:
            raise _UsageError("--oracle-gradients requires --gt")
        src = load_image(args.gt)
    params = SolverParams(tolerance=args.tol, max_iterations=args.max_iter, method=args.method)
    save_image(args.out, poisson_blend(src, dst, mask, params))
    return 0


def cmd_tonemap_fit(args) -> int:
    pred = load_image(args.pred)
    gt = load_image(args.gt)
    mask = load_mask(args.mask)
    tm = fit_tonemap(pred, gt, mask, _amplify_from_args(args), make_rng(args.seed))
    Path(args.out).write_text(tm.to_json() + "\n")
    return 0


def cmd_tonemap_apply(args) -> int:
    tm = ToneMap.from_json(Path(args.tonemap).read_text())
    save_image(args.out, apply_tonemap(tm, load_image(args.image)))
    return 0


def _eval_item(payload: dict) -> dict:
    pred = load_image(payload["pred"])
    gt = load_image(payload["gt"])
    mask = load_mask(payload["mask"])
    amplify = AmplifyParams(
        beta_range=tuple(payload["beta_range"]),
        samples_per_side=payload["samples"],
        degree=payload["degree"],
    )
    digest = hashlib.sha256(
        json.dumps(
            {"beta": payload["beta_range"], "samples": payload["samples"], "degree": payload["degree"]}
        ).encode()
    ).hexdigest()[:12]
    report = evaluate(
        pred,
        gt,
        mask,
        amplify,
        make_rng(payload["seed"], payload["stream"]),
        metadata={
            "pred": payload["pred"],
            "gt": payload["gt"],
            "mask": payload["mask"],
            "seed": payload["seed"],
            "stream": payload["stream"],
            "config_digest": digest,
        },
    )
    return report.to_json_dict()


def _eval_payload(args, item, stream) -> dict:
    return {
        "pred": item["pred"],
        "gt": item["gt"],
        "mask": item["mask"],
        "seed": args.seed,
        "stream": stream,
        "beta_range": [args.beta_min, args.beta_max],
        "samples": args.samples,
        "degree": args.degree,
    }


def _write_csv_summary(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "mean", "count"])
        for key in METRIC_KEYS:
            values = [r[key] for r in reports if r[key] is not None and math.isfinite(r[key])]
            mean = sum(values) / len(values) if values else ""
            writer.writerow([key, mean, len(values)])


def cmd_eval(args) -> int:
    if args.manifest:
        _require(args, ["out"])
        payloads = [
            _eval_payload(args, item, i) for i, item in enumerate(_load_manifest(args.manifest))
        ]
        reports = _run_batch(_eval_item, payloads, args.jobs)
        Path(args.out).write_text(json.dumps(reports, indent=2) + "\n")
        if args.out_csv:
            _write_csv_summary(args.out_csv, reports)
        return 0
    _require(args, ["pred", "gt", "mask"])
    report = _eval_item(_eval_payload(args, {"pred": args.pred, "gt": args.gt, "mask": args.mask}, 0))
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _emit_error("usage", str(exc), {})
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        _emit_error("usage", str(exc), {"command": args.command})
        return 1
    except json.JSONDecodeError as exc:
        _emit_error("io", f"corrupt JSON: {exc}", {"command": args.command})
        return 2
    except (ConfigError, ShapeError, ValueError) as exc:
        _emit_error("usage", str(exc), {"command": args.command})
        return 1
    except ConvergenceError as exc:
        _emit_error("numeric", str(exc), {"command": args.command, "residual": exc.residual})
        return 3
    except NumericError as exc:
        _emit_error("numeric", str(exc), {"command": args.command})
        return 3
    except OSError as exc:
        _emit_error("io", str(exc), {"command": args.command})
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
