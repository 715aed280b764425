"""Command-line entry point: ``report``, ``scan``, ``eval`` and ``oracle``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import correlation as corr
from .channels import CHANNELS, UnknownChannelError, get_channel
from .config import ConfigError, RunConfig, load_config
from .oracle import oracle_report
from .regression import ANCHORS, format_table, groups, run_report
from .results import ChannelResult
from .scan import scan

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_UNKNOWN_CHANNEL = 3

ODD_TERM_LIMIT = 1e-4


class OverrideError(ValueError):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, help="write machine-readable output here")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--case", choices=("standard", "case1", "case2"))
    common.add_argument("--lambda", dest="lam", type=float, help="collapse rate, s^-1")
    common.add_argument("--rc", type=float, help="correlation length, cm")
    common.add_argument("--tol-scale", type=float)
    common.add_argument("--workers", type=int)

    ap = argparse.ArgumentParser(
        prog="cslbounds",
        description="Constraint channels on the collapse parameters (lambda, r_C).",
        epilog="Any model parameter can be overridden with --<key> <value> or --<section>.<key> <value>.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    rep = sub.add_parser("report", parents=[common], help="recompute every quoted number")
    rep.add_argument("--channel", action="append", default=[], help="restrict to a group or anchor id")
    sc = sub.add_parser("scan", parents=[common], help="exclusion grid over (lambda, r_C)")
    sc.add_argument("--channel", action="append", default=[], help="channel id (repeatable)")
    ev = sub.add_parser("eval", parents=[common], help="evaluate one channel")
    ev.add_argument("channel_id", nargs="?")
    ev.add_argument("--channel", action="append", default=[])
    sub.add_parser("oracle", parents=[common], help="closed forms versus numerical kernel routes")
    return ap


def _coerce(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(extra: Sequence[str], models: dict, prefer: Sequence[str] = ()) -> dict:
    """Turn leftover ``--key value`` tokens into a nested ``models`` override.

    A bare key must name a field in exactly one model section, unless one of
    the ``prefer``-ed sections (the evaluated channel's) settles it.
    """
    out: dict = {}
    toks = list(extra)
    while toks:
        flag = toks.pop(0)
        if not flag.startswith("--") or len(flag) < 3:
            raise OverrideError(f"unexpected argument {flag!r}")
        key = flag[2:]
        if "=" in key:
            key, raw = key.split("=", 1)
        elif toks:
            raw = toks.pop(0)
        else:
            raise OverrideError(f"{flag} needs a value")
        if "." in key:
            section, field = key.split(".", 1)
            if section not in models or field not in models[section]:
                raise OverrideError(f"unknown model parameter {key!r}")
        else:
            field = key
            hits = [s for s in models if field in models[s]]
            preferred = [s for s in hits if s in prefer]
            if len(preferred) == 1:
                hits = preferred
            if not hits:
                raise OverrideError(f"unknown model parameter {key!r}")
            if len(hits) > 1:
                raise OverrideError(f"{key!r} is ambiguous; use one of " + ", ".join(f"--{s}.{key}" for s in hits))
            section = hits[0]
        out.setdefault(section, {})[field] = _coerce(raw)
    return {"models": out} if out else {}


def _build_config(args, extra: Sequence[str], prefer: Sequence[str] = ()) -> RunConfig:
    base = load_config(args.config)
    over = parse_overrides(extra, base.models, prefer)
    flags = {
        "case": args.case,
        "lambda": args.lam,
        "rc": args.rc,
        "format": args.format,
        "tol_scale": args.tol_scale,
        "workers": args.workers,
    }
    over.update({k: v for k, v in flags.items() if v is not None})
    if getattr(args, "channel", None) and args.command == "scan":
        over["channels"] = list(args.channel)
    return load_config(args.config, over)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from None


def _pretty(r: ChannelResult) -> str:
    lines = [
        f"channel      {r.channel_id} ({r.kind} bound)",
        f"evaluated at lambda = {r.evaluated_at.lam.value:.4g} s^-1, r_C = {r.evaluated_at.r_C.value:.4g} cm",
        f"bound        {r.lambda_bound.value:.4g} s^-1  (x{r.multiplier_vs_standard:.3g} standard, "
        f"x{r.factor_vs_input:.3g} input, +/- {r.uncertainty_decades:g} decades)",
    ]
    for o in r.observables:
        lines.append(f"  {o.name:22s} {o.magnitude():.4g} {o.unit}")
    if r.flags:
        lines.append("flags        " + ", ".join(r.flags))
    if r.notes:
        lines.append("notes        " + r.notes)
    return "\n".join(lines) + "\n"


def cmd_report(args, extra) -> int:
    cfg = _build_config(args, extra)
    if args.channel:
        known = set(groups()) | {a.id for a in ANCHORS}
        unknown = [c for c in args.channel if c not in known]
        if unknown:
            raise UnknownChannelError(", ".join(unknown))
    rows = run_report(cfg.models, cfg.tol_scale, args.channel or None)
    sys.stdout.write(format_table(rows))
    if args.out is not None:
        _emit(json.dumps([r.as_dict() for r in rows], indent=1) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def cmd_scan(args, extra) -> int:
    cfg = _build_config(args, extra)
    for c in cfg.channels:
        get_channel(c)
    grid = cfg.grid
    # an explicit lambda or r_C pins that axis to a single value
    pinned = dict(vars(grid))
    if cfg.lam is not None or cfg.case != "standard":
        lam = cfg.params().lam.value
        pinned.update(lambda_min=lam, lambda_max=lam, lambda_points=1)
    if cfg.rc is not None or cfg.case != "standard":
        rc = cfg.params().r_C.value
        pinned.update(rc_min=rc, rc_max=rc, rc_points=1)
    grid = type(grid)(**pinned)
    result = scan(cfg.channels, grid, cfg.models, cfg.workers)
    _emit(result.render(cfg.format), args.out)
    return EXIT_OK


def cmd_eval(args, extra) -> int:
    cid = args.channel_id or (args.channel[0] if args.channel else None)
    if cid is None:
        raise ConfigError("eval needs a channel id")
    ch = get_channel(cid)
    cfg = _build_config(args, extra, prefer=ch.sections)
    result = ch.build(cfg.params(), cfg.models)
    if cfg.format == "json" and args.out is None:
        sys.stdout.write(json.dumps(result.as_dict(), indent=1) + "\n")
    else:
        sys.stdout.write(_pretty(result))
        if args.out is not None:
            _emit(json.dumps(result.as_dict(), indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args, extra) -> int:
    cfg = _build_config(args, extra)
    rows = oracle_report(cfg.params())
    for name, kind in (("gaussian", corr.gaussian), ("exponential", corr.exponential)):
        coef = corr.small_s_coefficients(kind(cfg.params().r_C))
        worst = max(abs(coef[1]), abs(coef[3]))
        rows.append(
            {"check": f"{name}_odd_terms", "oracle": worst, "reference": 0.0, "rel_err": worst,
             "tol": ODD_TERM_LIMIT, "pass": worst < ODD_TERM_LIMIT}
        )
    for r in rows:
        sys.stdout.write(
            f"{r['check']:32s} {r['oracle']:14.6g} {r['reference']:14.6g} {r['rel_err']:10.2e} "
            f"{'PASS' if r['pass'] else 'FAIL'}\n"
        )
    if args.out is not None:
        _emit(json.dumps(rows, indent=1) + "\n", args.out)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL


COMMANDS = {"report": cmd_report, "scan": cmd_scan, "eval": cmd_eval, "oracle": cmd_oracle}


def main(argv: Sequence[str] | None = None) -> int:
    args, extra = _parser().parse_known_args(argv)
    try:
        return COMMANDS[args.command](args, extra)
    except UnknownChannelError as exc:
        known = ", ".join(sorted(CHANNELS))
        print(f"error: unknown channel {exc.args[0]!r} (known: {known})", file=sys.stderr)
        return EXIT_UNKNOWN_CHANNEL
    except (ConfigError, OverrideError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # model parameters that pass the schema but not the physics checks
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
