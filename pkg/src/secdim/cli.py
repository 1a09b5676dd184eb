"""Command-line front end.

Subcommands map one-to-one onto the library: ``dim`` (one cohomology
report), ``sweep`` (critical-region sweep), ``verify`` (recompute a shipped
claim table), ``horace`` (one specialization step), ``pairs`` (critical
pair enumeration).  Every output embeds the effective configuration and
the package version so a report can be replayed exactly; JSON output is
byte-stable for fixed inputs apart from the timestamp field.

Exit codes: 0 success (and, for verify, all claims confirmed), 1
computation failure, 2 configuration error, 3 verification found a
discrepancy.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import io
import json
import os
import sys
import time

from . import __version__
from .ambient import AmbientSpace, DivisorKind, DivisorSpec, Multidegree
from .cache import RankCache
from .dimension import (
    SamplingProtocol,
    cohomology,
    is_tangential_defective,
    secant_dimension,
)
from .exactlin import DEFAULT_PRIME, SECOND_PRIME
from .horace import critical_pairs, horace_step
from .schemes import (
    ComponentKind,
    DirectionMode,
    PlacementConstraint,
    RealizationError,
    SchemeGroup,
    SchemeSpec,
)
from .sweep import TABLE_IDS, sweep_region, verify_published

CACHE_ENV = "SECDIM_CACHE_DIR"

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2
EXIT_DISCREPANCY = 3


class ConfigError(ValueError):
    pass


_KIND_ALIASES = {
    "simple": ComponentKind.SIMPLE,
    "point": ComponentKind.SIMPLE,
    "tangent": ComponentKind.TANGENT_VECTOR,
    "tangent-vector": ComponentKind.TANGENT_VECTOR,
    "double": ComponentKind.DOUBLE_POINT,
    "double-point": ComponentKind.DOUBLE_POINT,
    "tangential": ComponentKind.TANGENTIAL,
}


def parse_int_list(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(x) for x in str(text).split(",") if x.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from exc


def parse_spec_string(text: str, divisor: DivisorSpec | None) -> SchemeSpec:
    """Parse the ``[count*]kind[:support[:direction]]`` mini-language.

    Example: ``2*double,tangential:on-divisor:inside``.  Items on a divisor
    attach the command's --divisor (or its default).
    """
    groups = []
    for raw in text.split(","):
        item = raw.strip()
        if not item:
            continue
        count = 1
        if "*" in item:
            head, item = item.split("*", 1)
            try:
                count = int(head)
            except ValueError as exc:
                raise ConfigError(f"bad count in spec item {raw!r}") from exc
        parts = item.split(":")
        kind = _KIND_ALIASES.get(parts[0].strip())
        if kind is None:
            raise ConfigError(f"unknown component kind {parts[0]!r}")
        support = parts[1].strip() if len(parts) > 1 else "generic"
        direction = parts[2].strip() if len(parts) > 2 else "generic"
        if support not in ("generic", "on-divisor"):
            raise ConfigError(f"unknown support {support!r}")
        div = None
        if support == "on-divisor":
            if divisor is None:
                raise ConfigError("spec item needs a divisor but none is defined")
            div = divisor
        try:
            mode = DirectionMode(direction)
        except ValueError as exc:
            raise ConfigError(f"unknown direction {direction!r}") from exc
        groups.append(SchemeGroup(kind, PlacementConstraint(div, mode), count))
    if not groups:
        raise ConfigError("empty scheme spec")
    return SchemeSpec(tuple(groups))


def parse_divisor(text: str | None, space: AmbientSpace) -> DivisorSpec:
    """Parse ``INDEX[:kind]``; the default divisor sits on factor 0 with the
    kind the factor dimension dictates."""
    if text is None:
        idx, kind = 0, None
    else:
        parts = str(text).split(":")
        try:
            idx = int(parts[0])
        except ValueError as exc:
            raise ConfigError(f"bad divisor {text!r}") from exc
        kind = parts[1].strip() if len(parts) > 1 else None
    if not 0 <= idx < space.num_factors:
        raise ConfigError(f"no factor {idx} in {space}")
    if kind in (None, "auto"):
        chosen = (
            DivisorKind.HYPERPLANE
            if space.factor_dims[idx] >= 2
            else DivisorKind.FACTOR_POINT
        )
    else:
        aliases = {
            "hyperplane": DivisorKind.HYPERPLANE,
            "point": DivisorKind.FACTOR_POINT,
            "factor-point": DivisorKind.FACTOR_POINT,
            "factor_point": DivisorKind.FACTOR_POINT,
        }
        if kind not in aliases:
            raise ConfigError(f"unknown divisor kind {kind!r}")
        chosen = aliases[kind]
    div = DivisorSpec(idx, chosen)
    try:
        div.check_against(space)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return div


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=("text", "json", "csv"), default=None)
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
    parser.add_argument("--seeds", type=int, default=None, help="number of seeds (default 3)")
    parser.add_argument("--primes", default=None, help="comma-separated primes")
    parser.add_argument("--cache-dir", default=None, help=f"rank cache directory (env {CACHE_ENV})")
    parser.add_argument("--config", default=None, help="JSON config file mirroring the flags")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secdim",
        description="Exact interpolation dimensions of joins of secant and tangential varieties.",
    )
    parser.add_argument("--version", action="version", version=f"secdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="cohomology / join dimension of one instance")
    p.add_argument("--factors", default=None)
    p.add_argument("--degree", default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--spec", default=None, help="scheme spec overriding --a/--b")
    p.add_argument("--divisor", default=None)
    _add_common(p)

    p = sub.add_parser("sweep", help="sweep the critical region of one system")
    p.add_argument("--factors", default=None)
    p.add_argument("--degree", default=None)
    p.add_argument("--pairs", choices=("refined", "base"), default=None)
    p.add_argument("--only-tangential", action="store_true")
    _add_common(p)

    p = sub.add_parser("verify", help="recompute a shipped claim table")
    p.add_argument("table_id", choices=TABLE_IDS)
    _add_common(p)

    p = sub.add_parser("horace", help="verify one divisor-specialization step")
    p.add_argument("--factors", default=None)
    p.add_argument("--degree", default=None)
    p.add_argument("--spec", required=True)
    p.add_argument("--divisor", default=None)
    _add_common(p)

    p = sub.add_parser("pairs", help="list critical pairs for (N, n)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("refined", "base"), default="refined")
    p.add_argument("--prune-lower", action="store_true")
    _add_common(p)
    return parser


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    return cfg


def _setting(args, name, cfg, default=None):
    val = getattr(args, name, None)
    if val is None:
        val = cfg.get(name, default)
    return val


def _protocol(args, cfg) -> SamplingProtocol:
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    seeds = args.seeds if args.seeds is not None else cfg.get("seeds", 3)
    primes = args.primes if args.primes is not None else cfg.get(
        "primes", [DEFAULT_PRIME, SECOND_PRIME]
    )
    primes = parse_int_list(primes)
    try:
        return SamplingProtocol(num_seeds=int(seeds), primes=primes, base_seed=int(seed))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cache(args, cfg):
    path = args.cache_dir or cfg.get("cache_dir") or os.environ.get(CACHE_ENV)
    return RankCache(path) if path else None


def _space_degree(args, cfg) -> tuple[AmbientSpace, Multidegree]:
    factors = _setting(args, "factors", cfg)
    degree = _setting(args, "degree", cfg)
    if factors is None or degree is None:
        raise ConfigError("--factors and --degree are required")
    try:
        space = AmbientSpace(parse_int_list(factors))
        deg = Multidegree(parse_int_list(degree))
        deg.check_against(space)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return space, deg


def _scheme_spec(args, cfg, space) -> SchemeSpec:
    spec_setting = _setting(args, "spec", cfg)
    if spec_setting is not None:
        divisor = parse_divisor(_setting(args, "divisor", cfg), space)
        if isinstance(spec_setting, str):
            return parse_spec_string(spec_setting, divisor)
        try:
            return SchemeSpec.from_json(spec_setting)
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad scheme spec: {exc}") from exc
    a = _setting(args, "a", cfg)
    b = _setting(args, "b", cfg)
    if a is None and b is None:
        raise ConfigError("either --spec or --a/--b is required")
    return SchemeSpec.generic_union(int(a or 0), int(b or 0))


# ---------------------------------------------------------------------------
# rendering


def _payload(command, config_echo, result) -> dict:
    return {
        "command": command,
        "config": config_echo,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "result": result,
    }


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(payload)
    return _render_text(payload)


def _render_csv(payload) -> str:
    cmd, result = payload["command"], payload["result"]
    if cmd == "pairs":
        return _csv_text(("a", "b", "slack"), [(r["a"], r["b"], r["slack"]) for r in result["pairs"]])
    if cmd == "sweep":
        if "rows" in result:
            return _csv_text(
                ("a", "b", "slack", "N", "deg_z", "rank", "h0", "h1", "defect", "verdict"),
                [
                    (r["a"], r["b"], r["slack"], r["N"], r["deg_z"], r["rank_star"],
                     r["h0"], r["h1"], r["defect"], r["verdict"])
                    for r in result["rows"]
                ],
            )
        return _csv_text(
            ("b", "defective"),
            [(b, int(b in result["defective_b"])) for b in result["tested_b"]],
        )
    if cmd == "dim":
        r = result["report"]
        return _csv_text(
            ("N", "deg_z", "rank", "h0", "h1", "defect", "verdict"),
            [(r["N"], r["deg_z"], r["rank_star"], r["h0"], r["h1"], r["defect"], r["verdict"])],
        )
    if cmd == "verify":
        rows = [
            (
                ",".join(map(str, c["entry"]["factors"])),
                ",".join(map(str, c["entry"]["degree"])),
                c["entry"]["a"],
                c["entry"]["b"],
                c["status"],
                c["note"],
            )
            for c in result["checks"]
        ]
        return _csv_text(("factors", "degree", "a", "b", "status", "note"), rows)
    if cmd == "horace":
        r = result
        return _csv_text(
            ("deg_full", "deg_trace", "deg_residual", "h0_full", "h0_trace",
             "h0_residual", "inequality_ok"),
            [(r["deg_full"], r["deg_trace"], r["deg_residual"], r["h0_full"],
              r["h0_trace"], r["h0_residual"], int(r["inequality_ok"]))],
        )
    raise ConfigError(f"no csv renderer for {cmd}")


def _render_text(payload) -> str:
    cmd, result = payload["command"], payload["result"]
    lines = [f"secdim {payload['version']} :: {cmd}"]
    if cmd == "dim":
        r = result["report"]
        lines.append(
            f"N={r['N']} degZ={r['deg_z']} rank={r['rank_star']} "
            f"h0={r['h0']} h1={r['h1']} defect={r['defect']} -> {r['verdict']}"
        )
        if "dim" in result:
            lines.append(f"join dimension {result['dim']} (expected {result['expected']})")
        lines.append("samples: " + ", ".join(
            f"(seed={s[0]}, p={s[1]}, rank={s[2]})" for s in r["samples"]))
    elif cmd == "sweep":
        if "rows" in result:
            for r in result["rows"]:
                flag = "  <-- defective" if r["defect"] > 0 else ""
                lines.append(
                    f"(a={r['a']:>3}, b={r['b']:>3})  rank={r['rank_star']:>5} "
                    f"h0={r['h0']:>4} h1={r['h1']:>4} defect={r['defect']}{flag}"
                )
            lines.append(f"defective pairs: {result['defective_pairs'] or 'none'}")
        else:
            lines.append(f"tested b: {result['tested_b']}")
            lines.append(f"defective b: {result['defective_b'] or 'none'}")
    elif cmd == "verify":
        for c in result["checks"]:
            e = c["entry"]
            spot = f"factors={e['factors']} degree={e['degree']} (a={e['a']}, b={e['b']})"
            note = f"  [{c['note']}]" if c["note"] else ""
            lines.append(f"{c['status']:<13} {spot}{note}")
        for x in result["extras"]:
            lines.append(
                f"EXTRA         factors={x['factors']} degree={x['degree']} "
                f"(a={x['a']}, b={x['b']}): {x['note']}"
            )
        lines.append("clean" if result["clean"] else "discrepancies found")
    elif cmd == "horace":
        r = result
        lines.append(
            f"degrees: full={r['deg_full']} trace={r['deg_trace']} residual={r['deg_residual']}"
        )
        lines.append(
            f"h0: full={r['h0_full']} trace={r['h0_trace']} residual={r['h0_residual']} "
            f"inequality_ok={r['inequality_ok']}"
        )
    elif cmd == "pairs":
        for r in result["pairs"]:
            lines.append(f"a={r['a']:>3} b={r['b']:>3} slack={r['slack']:>3}")
        lines.append(f"{len(result['pairs'])} pairs")
    return "\n".join(lines) + "\n"


def _emit(payload, fmt, out_path):
    text = _render(payload, fmt)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def _cmd_dim(args) -> int:
    cfg = _load_config(args)
    space, deg = _space_degree(args, cfg)
    protocol = _protocol(args, cfg)
    cache = _cache(args, cfg)
    spec = _scheme_spec(args, cfg, space)
    a = _setting(args, "a", cfg)
    b = _setting(args, "b", cfg)
    echo = {
        "factors": list(space.factor_dims),
        "degree": list(deg.degrees),
        "spec": spec.to_json(),
        "protocol": protocol.to_dict(),
    }
    use_join = _setting(args, "spec", cfg) is None and (a or b)
    if use_join:
        sec = secant_dimension(space, deg, int(a or 0), int(b or 0), protocol, cache=cache)
        result = {"dim": sec.dim, "expected": sec.expected, "report": sec.report.to_dict()}
    else:
        rep = cohomology(space, deg, spec, protocol, cache=cache)
        result = {"report": rep.to_dict()}
    _emit(_payload("dim", echo, result), args.format or cfg.get("format", "text"), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    space, deg = _space_degree(args, cfg)
    protocol = _protocol(args, cfg)
    cache = _cache(args, cfg)
    mode = _setting(args, "pairs", cfg, "refined")
    echo = {
        "factors": list(space.factor_dims),
        "degree": list(deg.degrees),
        "pairs": mode,
        "only_tangential": bool(args.only_tangential),
        "protocol": protocol.to_dict(),
    }
    if args.only_tangential:
        scan = is_tangential_defective(space, deg, protocol, cache=cache)
        result = scan.to_dict()
    else:
        result = sweep_region(space, deg, mode, protocol, cache=cache).to_dict()
    _emit(_payload("sweep", echo, result), args.format or cfg.get("format", "text"), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    protocol = _protocol(args, cfg)
    cache = _cache(args, cfg)
    report = verify_published(args.table_id, protocol, cache=cache)
    echo = {"table_id": args.table_id, "protocol": protocol.to_dict()}
    _emit(
        _payload("verify", echo, report.to_dict()),
        args.format or cfg.get("format", "text"),
        args.out,
    )
    return EXIT_OK if report.clean else EXIT_DISCREPANCY


def _cmd_horace(args) -> int:
    cfg = _load_config(args)
    space, deg = _space_degree(args, cfg)
    protocol = _protocol(args, cfg)
    divisor = parse_divisor(_setting(args, "divisor", cfg), space)
    spec_setting = _setting(args, "spec", cfg)
    if isinstance(spec_setting, str):
        spec = parse_spec_string(spec_setting, divisor)
    else:
        spec = SchemeSpec.from_json(spec_setting)
    echo = {
        "factors": list(space.factor_dims),
        "degree": list(deg.degrees),
        "divisor": {"factor": divisor.factor_index, "kind": divisor.kind.value},
        "spec": spec.to_json(),
        "protocol": protocol.to_dict(),
    }
    report = horace_step(space, deg, spec, divisor, protocol)
    _emit(
        _payload("horace", echo, report.to_dict()),
        args.format or cfg.get("format", "text"),
        args.out,
    )
    return EXIT_OK


def _cmd_pairs(args) -> int:
    cfg = _load_config(args)
    if args.N < 1 or args.n < 1:
        raise ConfigError("--N and --n must be >= 1")
    pairs = critical_pairs(args.N, args.n, args.mode, prune_lower=args.prune_lower)
    echo = {"N": args.N, "n": args.n, "mode": args.mode, "prune_lower": args.prune_lower}
    result = {"pairs": [{"a": p.a, "b": p.b, "slack": p.slack} for p in pairs]}
    _emit(_payload("pairs", echo, result), args.format or cfg.get("format", "text"), args.out)
    return EXIT_OK


_DISPATCH = {
    "dim": _cmd_dim,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "horace": _cmd_horace,
    "pairs": _cmd_pairs,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"secdim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RealizationError, OverflowError, ValueError, RuntimeError) as exc:
        print(f"secdim: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
