"""Command-line front end: analyze | detect | monitor | synth | selfcheck.

Exit codes: 0 success, 1 pipeline failure, 2 unusable input.  Channels of a
multi-channel signal file are processed independently, each into its own
subdirectory of the output directory.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

import numpy as np

from . import sigio, synth
from .config import PipelineConfig, load_config
from .detection import feature_length
from .errors import InputError, PipelineError
from .pipeline import analyze_signal, detect_signal, monitor_signal
from .selfcheck import run_selfcheck


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="signal CSV (header row of channel names)")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--reducer", choices=["pca", "maxpool"], help="override the reducer")
    parser.add_argument("--seed", type=int, help="override the clustering seed")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatdetect",
        description="Scattering-based sparse representation and transient detection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="export the representation of each channel")
    _add_common(p)
    p.add_argument("--dump-tensors", action="store_true",
                   help="also dump the full second-layer tensors as raw binary")
    p.add_argument("--dump-banks", action="store_true",
                   help="also export the filter banks as matrix CSV")

    p = sub.add_parser("detect", help="cluster frames and extract transient intervals")
    _add_common(p)
    p.add_argument("--cluster-on", choices=["lx", "features"], default="lx",
                   help="cluster the reduced map (default) or full feature vectors")

    p = sub.add_parser("monitor", help="sliding-window band-score trajectory")
    _add_common(p)

    p = sub.add_parser("synth", help="generate a deterministic synthetic fixture")
    p.add_argument("kind", choices=["noise", "burst", "chirp", "regime"])
    p.add_argument("--out", required=True, help="output signal CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="generator parameter, repeatable")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("selfcheck", help="run the built-in verification suite")
    p.add_argument("--quiet", action="store_true")
    return parser


def _load_pipeline_config(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if getattr(args, "reducer", None):
        config.reducer = args.reducer
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    config.validate()
    return config


def _sanitize(name: str) -> str:
    clean = re.sub(r"[^A-Za-z0-9_.-]", "_", name.strip())
    return clean or "channel"


def _read_channels(path):
    names, data = sigio.read_signal_csv(path)
    seen: dict[str, int] = {}
    unique = []
    for name in map(_sanitize, names):
        if name in seen:
            seen[name] += 1
            name = f"{name}_{seen[name]}"
        seen.setdefault(name, 0)
        unique.append(name)
    return unique, data


def _run_analyze(args) -> int:
    config = _load_pipeline_config(args)
    names, data = _read_channels(args.input)
    os.makedirs(args.out, exist_ok=True)
    emitted: list[str] = []
    for channel, name in enumerate(names):
        coeffs, rep = analyze_signal(data[:, channel], config)
        chan_dir = os.path.join(args.out, name)
        os.makedirs(chan_dir, exist_ok=True)
        sigio.write_matrix_csv(os.path.join(chan_dir, "lx.csv"), rep.lx)
        sigio.write_matrix_csv(os.path.join(chan_dir, "m.csv"), rep.thresholds)
        theta = [] if rep.theta is None else [float(v) for v in rep.theta]
        sigio.write_json(os.path.join(chan_dir, "theta.json"), theta)
        emitted += [f"{name}/lx.csv", f"{name}/m.csv", f"{name}/theta.json"]
        for band in range(coeffs.s2.shape[2]):
            rel = f"{name}/s2_{band}.csv"
            sigio.write_matrix_csv(os.path.join(args.out, rel), coeffs.s2[:, :, band])
            emitted.append(rel)
        if args.dump_tensors:
            for rel_name, tensor in (("u2.f64", coeffs.u2), ("s2.f64", coeffs.s2)):
                rel = f"{name}/{rel_name}"
                sigio.write_binary(os.path.join(args.out, rel), tensor)
                emitted += [rel, f"{rel}.json"]
        if args.dump_banks:
            from .pipeline import banks_for_signal

            banks = banks_for_signal(data.shape[0], config)
            for tag, bank in zip(("bank1", "bank2"), banks):
                for rel_name, matrix in ((f"{tag}_psi.csv", bank.psi_hat), (f"{tag}_phi.csv", bank.phi_hat)):
                    rel = f"{name}/{rel_name}"
                    sigio.write_matrix_csv(os.path.join(args.out, rel), matrix)
                    emitted.append(rel)
        if not args.quiet:
            print(f"analyzed channel {name} -> {chan_dir}")
    extra = {
        "channels": names,
        "feature_dim": feature_length(config.j1, config.q1, config.j2, config.q2, config.reducer),
    }
    sigio.write_manifest(args.out, config.as_dict(), emitted, extra)
    return 0


def _run_detect(args) -> int:
    config = _load_pipeline_config(args)
    names, data = _read_channels(args.input)
    os.makedirs(args.out, exist_ok=True)
    emitted: list[str] = []
    for channel, name in enumerate(names):
        result = detect_signal(data[:, channel], config, cluster_on=args.cluster_on)
        chan_dir = os.path.join(args.out, name)
        os.makedirs(chan_dir, exist_ok=True)
        sigio.write_matrix_csv(os.path.join(chan_dir, "labels.csv"),
                               np.asarray(result.labels, dtype=np.float64))
        payload = {
            "k": int(result.k),
            "labels_path": "labels.csv",
            "intervals": [
                {"start": start, "end": end, "cluster": cluster}
                for start, end, cluster in result.intervals
            ],
            "config_echo": config.as_dict(),
        }
        sigio.write_json(os.path.join(chan_dir, "detection.json"), payload)
        interval_lines = ["start_sample,end_sample"]
        interval_lines += [f"{start},{end}" for start, end, _ in result.intervals]
        sigio._atomic_write_text(os.path.join(chan_dir, "intervals.csv"),
                                 "\n".join(interval_lines) + "\n")
        emitted += [f"{name}/labels.csv", f"{name}/detection.json", f"{name}/intervals.csv"]
        if not args.quiet:
            seconds = [
                (start / config.sample_rate_hz, end / config.sample_rate_hz)
                for start, end, _ in result.intervals
            ]
            print(f"channel {name}: k={result.k}, {len(result.intervals)} interval(s) {seconds}")
    sigio.write_manifest(args.out, config.as_dict(), emitted, {"channels": names})
    return 0


def _run_monitor(args) -> int:
    config = _load_pipeline_config(args)
    names, data = _read_channels(args.input)
    os.makedirs(args.out, exist_ok=True)
    emitted: list[str] = []
    for channel, name in enumerate(names):
        plan, trajectory = monitor_signal(data[:, channel], config)
        chan_dir = os.path.join(args.out, name)
        os.makedirs(chan_dir, exist_ok=True)
        sigio.write_matrix_csv(os.path.join(chan_dir, "theta_trajectory.csv"), trajectory)
        emitted.append(f"{name}/theta_trajectory.csv")
        if not args.quiet:
            print(f"channel {name}: {plan.count} windows of {plan.window_len} samples")
    sigio.write_manifest(args.out, config.as_dict(), emitted, {"channels": names})
    return 0


def _run_synth(args) -> int:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise InputError(f"--param expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        params[key.strip()] = value.strip()
    signal, truth = synth.generate(args.kind, params, args.seed)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    sigio.write_signal_csv(args.out, [args.kind], signal)
    base, _ = os.path.splitext(args.out)
    sidecar = f"{base}.truth.json"
    sigio.write_json(sidecar, truth)
    if not args.quiet:
        print(f"wrote {args.out} ({signal.shape[0]} samples) and {sidecar}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _run_analyze(args)
        if args.command == "detect":
            return _run_detect(args)
        if args.command == "monitor":
            return _run_monitor(args)
        if args.command == "synth":
            return _run_synth(args)
        if args.command == "selfcheck":
            return 0 if run_selfcheck(quiet=args.quiet) else 1
        raise PipelineError(f"unknown command {args.command!r}")
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (PipelineError, ValueError) as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
