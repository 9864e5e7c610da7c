"""Command line entry point: ``walls {build,check,cubulate,render,all}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .complex_core import SpecError, load_spec
from .cover import CellCapExceeded, DEFAULT_CAP, build_ball
from .report import CHECKS, ConfigError, PipelineConfig, run_pipeline, write_atomic

DEFAULTS = {"radius": 3, "base": "v0", "cap": DEFAULT_CAP, "buffer": 1, "checks": ",".join(CHECKS)}


def _parser():
    p = argparse.ArgumentParser(prog="walls", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("build", "check", "cubulate", "render", "all"):
        s = sub.add_parser(name)
        s.add_argument("--spec", help="complex specification file")
        s.add_argument("--config", help="JSON file with default options")
        s.add_argument("--radius", type=int)
        s.add_argument("--base")
        s.add_argument("--cap", type=int)
        s.add_argument("--buffer", type=int)
        s.add_argument("--report", help="write the JSON report here")
        s.add_argument("--svg", help="directory for SVG figures")
        if name == "check":
            s.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}")
    return p


def _options(args) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            opts.update(json.load(fh))
    for k in ("spec", "radius", "base", "cap", "buffer", "report", "svg", "checks"):
        v = getattr(args, k, None)
        if v is not None:
            opts[k] = v
    if not opts.get("spec"):
        raise ConfigError("--spec is required")
    return opts


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        opts = _options(args)
        checks = opts["checks"]
        if isinstance(checks, str):
            checks = [c.strip() for c in checks.split(",") if c.strip()]
        if args.command == "cubulate":
            checks = ["cubulate"]
        elif args.command == "render":
            checks = ["walls"]
        elif args.command == "all":
            checks = list(CHECKS)
        cfg = PipelineConfig(spec_path=opts["spec"], radius=opts["radius"], base=opts["base"],
                             checks=checks, report_path=opts.get("report"), svg_dir=opts.get("svg"),
                             cap=opts["cap"], buffer=opts["buffer"])
        cfg.validate()
        if args.command == "build":
            ball = build_ball(load_spec(cfg.spec_path), cfg.radius, cfg.base, cfg.cap)
            text = ball.export_json()
            if cfg.report_path:
                write_atomic(cfg.report_path, text)
            print(f"ball radius {cfg.radius}: {ball.n_vertices} vertices, {ball.n_edges} edges, "
                  f"{ball.n_faces} faces, {sum(ball.vert_complete)} interior vertices")
            return 0
        report = run_pipeline(cfg)
    except (ConfigError, SpecError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CellCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    body = report["body"]
    for name, res in body["results"].items():
        line = f"{name:<11} {'PASS' if res['pass'] else 'FAIL'}"
        if not res["pass"] and res.get("witness"):
            line += f"  witness {res['witness'][:5]}"
        print(line)
    print(f"body sha256 {report['body_sha256']}")
    return 0 if body["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
