"""Command-line front end.

    ltonets ring validate|dims|pointed|triples (--ring NAME | --file PATH)
    ltonets classify [--ring NAME | --file PATH]
    ltonets state canonical|markov|unit|regular-q|kms-check|trace-check --ring NAME --level N
    ltonets toric reduce|boundary-dim|iso-verify|lto-verify ...
    ltonets k0 sequence|pairing|infinitesimal|uhf|summary --ring NAME

Every command prints a text report, or with --json a sorted-key JSON report
that embeds the run configuration.  Failures exit with the code of their
error class: parse 2, validation 3, resource 4, inconclusive 5.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from . import exact_oracle, fusion_ring, k_theory, path_net, type_classifier
from .errors import LtoError, ParseError, ResourceError, ValidationError
from .toric import boundary, reduction
from .toric.lattice import ROUGH, SMOOTH, CompletelySurrounds, parse_region, region_relation
from .toric.pauli import format_monomial, parse_monomial


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a report."""

    command: str
    action: str | None
    ring: str | None
    file: str | None
    precision: int
    level: int | None
    sites: int | None
    seed: int
    window: int
    bound: int

    def as_dict(self) -> dict:
        return asdict(self)


# -- helpers ---------------------------------------------------------------


def _num(x, digits: int = 50):
    """JSON-friendly exact or decimal rendering of a scalar."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, mpmath.mpc) or isinstance(x, complex):
        if x.imag == 0:
            return _num(mpmath.mpf(x.real) if isinstance(x, mpmath.mpc) else float(x.real), digits)
        return {"re": _num(x.real, digits), "im": _num(x.imag, digits)}
    if isinstance(x, float):
        return repr(x)
    return type_classifier.decimal_string(x, digits)


def _text(x, digits: int = 50) -> str:
    v = _num(x, digits)
    if isinstance(v, dict):
        return f"{v['re']}{'' if str(v['im']).startswith('-') else '+'}{v['im']}i"
    return str(v)


def _load_ring(cfg: RunConfig) -> fusion_ring.FusionRing:
    if cfg.ring and cfg.file:
        raise ValidationError("give either --ring or --file, not both")
    if cfg.file:
        try:
            text = Path(cfg.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read {cfg.file}: {exc.strerror}") from None
        return fusion_ring.load_fusion_ring(text).with_dimensions(cfg.precision)
    if cfg.ring:
        return fusion_ring.builtin_ring(cfg.ring, cfg.precision)
    raise ValidationError("a ring is required (--ring NAME or --file PATH)")


def _require(value, flag: str):
    if value is None:
        raise ValidationError(f"{flag} is required for this action")
    return value


# -- ring ------------------------------------------------------------------


def cmd_ring(cfg: RunConfig, args) -> tuple[dict, str]:
    ring = _load_ring(cfg)
    digits = cfg.precision
    report: dict = {"ring": ring.name, "simples": list(ring.simples)}
    if cfg.action == "validate":
        report["valid"] = True
        report["rank"] = ring.rank
        text = f"ok: {ring.name} with {ring.rank} simples ({', '.join(ring.simples)})"
    elif cfg.action == "dims":
        dims = fusion_ring.fp_dimensions(ring, cfg.precision)
        report["dims"] = [_num(d, digits) for d in dims]
        report["global_dimension"] = _num(fusion_ring.global_dimension(ring), digits)
        report["exact"] = ring.exact
        lines = [f"d({s}) = {_text(d, digits)}" for s, d in zip(ring.simples, dims)]
        lines.append(f"D^2 = {report['global_dimension']}")
        text = "\n".join(lines)
    elif cfg.action == "pointed":
        report["pointed"] = fusion_ring.is_pointed(ring)
        text = f"pointed={'true' if report['pointed'] else 'false'}"
    else:
        triples = fusion_ring.admissible_triples(ring)
        report["triples"] = [list(t) for t in triples]
        names = ring.simples
        text = "\n".join(f"({names[a]}, {names[b]}, {names[c]})" for a, b, c in triples)
    return report, text


# -- classify --------------------------------------------------------------


def cmd_classify(cfg: RunConfig, args) -> tuple[dict, str]:
    if cfg.ring or cfg.file:
        ring = _load_ring(cfg)
        label = type_classifier.classify_type(ring)
        return type_classifier.type_report(ring, label), type_classifier.type_text(label, cfg.precision)
    rows = []
    lines = []
    for name in fusion_ring.BUILTIN_NAMES:
        ring = fusion_ring.builtin_ring(name, cfg.precision)
        label = type_classifier.classify_type(ring)
        rows.append(type_classifier.type_report(ring, label))
        lines.append(f"{name:8} {type_classifier.type_text(label, min(cfg.precision, 20))}")
    return {"rings": rows}, "\n".join(lines)


# -- state -----------------------------------------------------------------

_STATES = {
    "canonical": path_net.canonical_state,
    "markov": path_net.markov_trace,
    "unit": path_net.unit_state,
    "regular-q": path_net.regular_q_state,
}


def cmd_state(cfg: RunConfig, args) -> tuple[dict, str]:
    ring = _load_ring(cfg)
    level = _require(cfg.level, "--level")
    graph = path_net.fusion_graph(ring)
    digits = cfg.precision
    report: dict = {"ring": ring.name, "level": level}
    if cfg.action == "kms-check":
        graph.check_level(level)
        defect = path_net.kms_sweep(graph, level)
        report["max_kms_defect"] = _num(defect, digits)
        return report, f"max KMS-1 defect at level {level}: {_text(defect, 10)}"
    if cfg.action == "trace-check":
        defect = path_net.traciality_defect(graph, level)
        report["traciality_defect"] = _num(defect, digits)
        return report, f"traciality defect at level {level}: {_text(defect, digits)}"
    if args.operator:
        try:
            text = Path(args.operator).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(f"cannot read {args.operator}: {exc.strerror}") from None
        op = path_net.operator_from_json(graph, text)
        if op.level != level:
            raise ValidationError(f"operator level {op.level} differs from --level {level}")
    else:
        graph.check_level(level)
        op = path_net.PathPairOperator.identity(graph, level)
    value = _STATES[cfg.action](op)
    report["operator"] = args.operator or "identity"
    report["state"] = cfg.action
    report["value"] = _num(value, digits)
    return report, f"{cfg.action}({report['operator']}) = {_text(value, digits)}"


# -- toric -----------------------------------------------------------------


def cmd_toric(cfg: RunConfig, args) -> tuple[dict, str]:
    if cfg.action == "boundary-dim":
        n = _require(cfg.sites, "--sites")
        if not 1 <= n <= boundary.MAX_SITES:
            raise ResourceError(f"--sites must lie in [1, {boundary.MAX_SITES}]")
        rep = boundary.boundary_algebra(n, args.kind)
        return rep.as_dict(), rep.summary()
    if cfg.action == "iso-verify":
        n = _require(cfg.sites, "--sites")
        rep = boundary.fusion_net_iso(n, args.kind)
        text = f"iso {'ok' if rep.ok else 'FAILED'} sites={n} kind={args.kind}"
        return rep.as_dict(), text
    if cfg.action == "reduce":
        return _toric_reduce(args)
    return _toric_lto(cfg, args)


def _toric_reduce(args) -> tuple[dict, str]:
    inner = parse_region(_require(args.inner, "--inner"))
    outer = parse_region(_require(args.outer, "--outer"))
    p = parse_monomial(_require(args.monomial, "--monomial"))
    result = reduction.pauli_reduce(p, inner, outer, args.surround)
    report: dict = {"monomial": format_monomial(p), "inner": str(inner), "outer": str(outer), "surround": args.surround}
    if isinstance(result, reduction.NotCommuting):
        report["commutes"] = False
        report["witness"] = result.witness.name
        return report, f"0 (anticommutes with {result.witness.name})"
    names = [g.name for g in result.word]
    mono = boundary.format_canonical(result.boundary)
    report.update(commutes=True, word=names, phase=result.phase, boundary=mono)
    if result.interval is not None:
        report["side"] = result.interval.side
        report["sites"] = [list(s) for s in result.interval.sites]
    factor = ("1", "i", "-1", "-i")[result.phase]
    text = f"{' '.join(names) or '1'} ; phase {factor} ; boundary {mono}"
    return report, text


def _toric_lto(cfg: RunConfig, args) -> tuple[dict, str]:
    """Exact-diagonalization check of the LTO axioms on small windows."""
    cap = cfg.window
    if args.inner or args.outer:
        inner = parse_region(_require(args.inner, "--inner"))
        outer = parse_region(_require(args.outer, "--outer"))
        rel = region_relation(inner, outer, args.surround)
        if rel is None:
            raise ValidationError("regions are not in a surrounding relation")
        if isinstance(rel, CompletelySurrounds):
            rep = exact_oracle.verify_lto1(inner, outer, args.surround, cap)
        else:
            rep = exact_oracle.verify_lto234(inner, outer, seed=cfg.seed, cap=cap, samples=args.samples)
        return rep, f"{'ok' if rep['ok'] else 'FAILED'} {inner} in {outer}"
    configs = exact_oracle.enumerate_configurations(cap, args.surround)
    results = []
    for inner, outer in configs["completely_surrounds"]:
        results.append(exact_oracle.verify_lto1(inner, outer, args.surround, cap))
    for inner, outer in configs["shared_boundary"]:
        results.append(exact_oracle.verify_lto234(inner, outer, seed=cfg.seed, cap=cap, samples=args.samples))
    failed = [r for r in results if not r["ok"]]
    report = {
        "surround": args.surround,
        "completely_surrounds": len(configs["completely_surrounds"]),
        "shared_boundary": len(configs["shared_boundary"]),
        "failed": len(failed),
        "results": results,
        "ok": not failed,
    }
    text = (
        f"{len(results)} windows (surrounded {report['completely_surrounds']}, "
        f"shared {report['shared_boundary']}) with <= {cap} edges: {len(failed)} failed"
    )
    return report, text


# -- k0 --------------------------------------------------------------------


def _af_data(cfg: RunConfig, args) -> k_theory.StationaryAFData:
    if args.matrix:
        try:
            matrix = json.loads(args.matrix)
            unit = json.loads(args.unit) if args.unit else [1] + [0] * (len(matrix) - 1)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return k_theory.stationary_data(matrix, unit, label="user matrix")
    ring = _load_ring(cfg)
    return k_theory.ring_af_data(ring, coarse=args.coarse)


def cmd_k0(cfg: RunConfig, args) -> tuple[dict, str]:
    if cfg.action == "summary":
        rep = k_theory.ring_k0_summary(_load_ring(cfg), cfg.bound)
        lines = [f"{rep['ring']} pointed={'true' if rep['pointed'] else 'false'}"]
        for key in ("one_sided", "two_sided"):
            part = rep[key]
            inf = part["infinitesimal"]
            found = "none" if inf["witness"] is None else inf["witness"]
            lines.append(f"{key}: {part['uhf']}; infinitesimal {found} ({inf['certificate']})")
        return rep, "\n".join(lines)
    data = _af_data(cfg, args)
    report: dict = {"label": data.label, "matrix": [list(r) for r in data.matrix], "e": list(data.e)}
    if cfg.action == "sequence":
        seq = k_theory.dimension_sequence(data, cfg.level if cfg.level is not None else 4)
        report["sequence"] = [list(v) for v in seq]
        return report, "\n".join(" ".join(str(x) for x in v) for v in seq)
    if cfg.action == "pairing":
        try:
            v = json.loads(_require(args.vector, "--vector"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        value = k_theory.trace_pairing(data, v)
        report["vector"] = v
        report["tau"] = [_num(t, cfg.precision) for t in data.tau]
        report["pairing"] = _num(value, cfg.precision)
        return report, f"tau.v = {_text(value, cfg.precision)}"
    if cfg.action == "infinitesimal":
        res = k_theory.find_infinitesimal(data, cfg.bound)
        report["witness"] = None if res.witness is None else list(res.witness)
        report["certificate"] = res.certificate
        report["determinant"] = res.determinant
        if res.witness is None:
            return report, f"no infinitesimals: {res.certificate}"
        return report, f"infinitesimal {list(res.witness)}: {res.certificate} (det A = {res.determinant})"
    uhf = k_theory.uhf_report(data)
    report.update(rank_one=uhf.rank_one, q=uhf.q, primes=list(uhf.primes), description=uhf.description)
    return report, uhf.description


# -- parser ----------------------------------------------------------------

_COMMANDS = {
    "ring": (cmd_ring, ("validate", "dims", "pointed", "triples")),
    "classify": (cmd_classify, None),
    "state": (cmd_state, ("canonical", "markov", "unit", "regular-q", "kms-check", "trace-check")),
    "toric": (cmd_toric, ("reduce", "boundary-dim", "iso-verify", "lto-verify")),
    "k0": (cmd_k0, ("sequence", "pairing", "infinitesimal", "uhf", "summary")),
}


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help=f"built-in ring ({', '.join(fusion_ring.BUILTIN_NAMES)})")
    common.add_argument("--file", help="fusion-ring JSON document")
    common.add_argument("--precision", type=_positive, default=fusion_ring.DEFAULT_PRECISION, help="decimal digits")
    common.add_argument("--level", type=int, help="path level")
    common.add_argument("--sites", type=_positive, help="number of boundary sites")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--window", type=_positive, default=exact_oracle.DEFAULT_CAP, help="edge cap for exact windows")
    common.add_argument("--bound", type=_positive, default=1, help="sup-norm bound of the infinitesimal search")

    parser = argparse.ArgumentParser(prog="ltonets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, actions) in _COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        if actions:
            p.add_argument("action", choices=actions)
        if name == "state":
            p.add_argument("--operator", help="serialized path-pair operator (default: identity)")
        if name == "toric":
            p.add_argument("--kind", choices=(ROUGH, SMOOTH), default=ROUGH, help="boundary kind")
            p.add_argument("--monomial", help="Pauli monomial, e.g. 'X@(3,4,e) Z@(4,4,n)'")
            p.add_argument("--inner", help="Lambda, e.g. 'rect 2 2 5 5 rough'")
            p.add_argument("--outer", help="Delta")
            p.add_argument("--surround", type=_positive, default=reduction.SURROUND, help="surround depth s")
            p.add_argument("--samples", type=_positive, default=64, help="sampled monomials per window")
        if name == "k0":
            p.add_argument("--coarse", action="store_true", help="use the two-sided step")
            p.add_argument("--matrix", help="integer matrix as JSON instead of a ring")
            p.add_argument("--unit", help="unit class as JSON")
            p.add_argument("--vector", help="K_0 vector as JSON")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        action=getattr(args, "action", None),
        ring=args.ring,
        file=args.file,
        precision=args.precision,
        level=args.level,
        sites=args.sites,
        seed=args.seed,
        window=args.window,
        bound=args.bound,
    )


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute a command; returns (exit code, stdout text)."""
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    handler = _COMMANDS[cfg.command][0]
    report, text = handler(cfg, args)
    if args.json:
        report = dict(report)
        report["config"] = cfg.as_dict()
        return 0, json.dumps(report, indent=2, sort_keys=True, default=str)
    return 0, text


def main(argv: list[str] | None = None) -> int:
    try:
        code, out = run(argv)
    except LtoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
