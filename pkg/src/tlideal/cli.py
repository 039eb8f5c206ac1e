"""
``tl``: command-line driver.

Exit codes: 0 success / PASS, 1 verification FAIL, 2 usage error, 3 not evaluable at the chosen root of unity.
Errors are reported on stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import __version__
from .diagram import enumerate_diagrams, hom_dimension
from .errors import NotEvaluable, TLError, VerificationFailed
from .exactscalar import GENERIC, Cyclo, Ring
from .ideal import (
    certify_generic_gram,
    constancy_check,
    generic_sweep,
    gram_matrix,
    ideal_truncation_report,
    negligible_basis,
    verify_even_subcategory,
    verify_main_theorem,
)
from .morphism import (
    Morphism,
    cap_morphism,
    compose,
    cup_morphism,
    generator_morphism,
    identity_morphism,
    tensor,
    trace,
)
from .rootspec import block_report, evaluate_morphism, z_left, z_reg_nil
from .tower import (
    BratteliPath,
    IdempotentCache,
    YoungDiagram,
    bratteli_graph,
    default_cache_dir,
    jones_wenzl,
    path_idempotent,
    set_cache,
)

COMMANDS = (
    "dim", "compose", "tensor", "trace", "jw", "pathidem", "zleft", "bratteli", "gram", "neg", "ideal", "verify",
    "verify-even", "constancy", "cache",
)


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    ell: int | None = None
    max_n: int = 4
    mode: str = "exact"
    seed: int = 0
    out: str = "text"
    cache_dir: Path | None = None
    jobs: int | None = 1

    def __post_init__(self):
        if self.ell is not None and self.ell < 3:
            raise UsageError("--ell must be at least 3")
        if self.max_n < 1:
            raise UsageError("--max-n must be at least 1")

    @property
    def ring(self) -> Ring:
        return GENERIC if self.ell is None else Cyclo(self.ell)


# ---------------------------------------------------------------------------------------------------------------------
# Morphism expressions


def _lambda(text: str) -> YoungDiagram:
    parts = [int(p) for p in text.replace("[", "").replace("]", "").split(",") if p.strip()]
    if len(parts) == 1:
        parts.append(0)
    if len(parts) != 2:
        raise UsageError(f"bad Young diagram {text!r}; use 'l1,l2'")
    return YoungDiagram(*parts)


def parse_morphism(expr: str) -> Morphism:
    """
    Inline expressions: ``e:I@N`` (generator e_I of T_N), ``id:N``, ``cap``, ``cup``, ``jw:N``, ``p:W0-W1-...``
    (path idempotent by widths), ``zreg:N@L``, ``zleft:L1,L2@L``; anything else is read as a JSON morphism file.
    """
    kind, _, arg = expr.partition(":")
    try:
        if expr == "cap":
            return cap_morphism()
        if expr == "cup":
            return cup_morphism()
        if kind == "e":
            i, _, n = arg.partition("@")
            return generator_morphism(int(i), int(n))
        if kind == "id":
            return identity_morphism(int(arg))
        if kind == "jw":
            return jones_wenzl(int(arg))
        if kind == "p":
            return path_idempotent(BratteliPath.parse(arg))
        if kind == "zreg":
            n, _, ell = arg.partition("@")
            return z_reg_nil(int(n), int(ell))[0]
        if kind == "zleft":
            lam, _, ell = arg.partition("@")
            return z_left(_lambda(lam), int(ell))
    except ValueError as exc:
        raise UsageError(f"bad morphism expression {expr!r}: {exc}") from None
    path = Path(expr)
    if not path.exists():
        raise UsageError(f"unknown morphism expression or missing file {expr!r}")
    with open(path) as fh:
        return Morphism.from_json(json.load(fh))


def _maybe_evaluate(a: Morphism, cfg: RunConfig) -> Morphism:
    return a if cfg.ell is None or not a.ring.is_generic else evaluate_morphism(a, cfg.ell)


def _morphism_text(a: Morphism) -> str:
    if a.is_zero():
        return f"0 in Hom({a.dom},{a.cod})"
    lines = [f"Hom({a.dom},{a.cod}) over {a.ring}:"]
    for x, c in a.sorted_terms():
        lines.append(f"  ({c}) {list(x.match)}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------------------------------------------------
# Commands


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_dim(cfg, args):
    m, n = _need(args.m, "--m"), _need(args.n, "--n")
    d = hom_dimension(m, n)
    return {"m": m, "n": n, "dim": d}, str(d)


def cmd_compose(cfg, args):
    if len(args.exprs) < 2:
        raise UsageError("compose needs at least two morphisms (X Y means X∘Y, Y applied first)")
    ms = [parse_morphism(e) for e in args.exprs]
    result = ms[-1]
    for f in reversed(ms[:-1]):
        result = compose(f, result)
    result = _maybe_evaluate(result, cfg)
    return result.to_json(), _morphism_text(result)


def cmd_tensor(cfg, args):
    if len(args.exprs) < 2:
        raise UsageError("tensor needs at least two morphisms")
    ms = [parse_morphism(e) for e in args.exprs]
    result = ms[0]
    for f in ms[1:]:
        result = tensor(result, f)
    result = _maybe_evaluate(result, cfg)
    return result.to_json(), _morphism_text(result)


def cmd_trace(cfg, args):
    if len(args.exprs) != 1:
        raise UsageError("trace needs exactly one morphism")
    a = _maybe_evaluate(parse_morphism(args.exprs[0]), cfg)
    t = trace(a)
    return {"trace": t.to_json(), "ring": a.ring.to_json()}, str(t)


def cmd_jw(cfg, args):
    n = _need(args.n, "--n")
    a = jones_wenzl(n, cfg.ring)
    return a.to_json(), _morphism_text(a)


def cmd_pathidem(cfg, args):
    path = BratteliPath.parse(_need(args.path, "--path"))
    a = path_idempotent(path, cfg.ring)
    return a.to_json(), _morphism_text(a)


def cmd_zleft(cfg, args):
    ell = _need(cfg.ell, "--ell")
    if args.lam is None:
        n = _need(args.n, "--n or --lambda")
        report = block_report(n, ell)
        text = "\n".join(f"{b['lambda']} {b['kind']} paths={b['path_count']} evaluable={b['evaluable']}"
                         for b in report["blocks"])
        return report, text
    z = evaluate_morphism(z_left(_lambda(args.lam), ell), ell)
    return z.to_json(), _morphism_text(z)


def cmd_bratteli(cfg, args):
    g = bratteli_graph(cfg.max_n)
    if cfg.out == "dot":
        return None, g.to_dot()
    text = "\n".join(f"level {k}: " + " ".join(lam.label() for lam in level) for k, level in enumerate(g.levels))
    return g.to_json(), text


def cmd_gram(cfg, args):
    m, n = _need(args.m, "--m"), _need(args.n, "--n")
    if cfg.mode == "certify-generic":
        if cfg.ell is not None:
            raise UsageError("--mode certify-generic applies to the generic ring only")
        cert = certify_generic_gram(m, n, cfg.seed)
        return {"m": m, "n": n, "ring": "generic", "size": cert["size"], "certificate": cert}, json.dumps(cert)
    g = gram_matrix(m, n, cfg.ring)
    report = g.to_json(with_entries=g.size <= 42)
    report["rank"] = g.rank()
    text = f"Gram({m},{n}) over {g.ring}: size {g.size}, rank {report['rank']}"
    return report, text


def cmd_neg(cfg, args):
    m, n = _need(args.m, "--m"), _need(args.n, "--n")
    neg = negligible_basis(m, n, cfg.ring)
    return neg.to_json(), f"dim Neg({m},{n}) = {neg.dim} (of {hom_dimension(m, n)})"


def cmd_ideal(cfg, args):
    ell = _need(cfg.ell, "--ell")
    m, n = _need(args.m, "--m"), _need(args.n, "--n")
    g = parse_morphism(args.generator) if args.generator else jones_wenzl(ell - 1)
    g = _maybe_evaluate(g, cfg)
    rep = ideal_truncation_report(g, m, n)
    out = rep.to_json()
    out["ell"] = ell
    out["basis"] = rep.subspace.to_json()
    return out, f"dim J({m},{n}) = {rep.subspace.dim}; dims by j: {rep.dims_by_j}"


def _cells_text(report: dict) -> str:
    lines = [f"ell={report.get('ell', 'generic')} N={report['N']} verdict={report['verdict']}"]
    for c in report["cells"]:
        extra = f" ideal={c['ideal_dim']} equal={c['equal']}" if "ideal_dim" in c else ""
        lines.append(f"  ({c['m']},{c['n']}) neg={c['neg_dim']}{extra}")
    return "\n".join(lines)


def cmd_verify(cfg, args):
    if cfg.ell is None:
        report = generic_sweep(cfg.max_n)
    else:
        report = verify_main_theorem(cfg.ell, cfg.max_n, seed=cfg.seed, samples=args.samples,
                                     closure_samples=args.samples, jobs=cfg.jobs, raise_on_fail=False)
    return report, _cells_text(report)


def cmd_verify_even(cfg, args):
    ell = _need(cfg.ell, "--ell")
    report = verify_even_subcategory(ell, cfg.max_n, seed=cfg.seed, samples=args.samples, jobs=cfg.jobs,
                                     raise_on_fail=False)
    return report, _cells_text(report)


def cmd_constancy(cfg, args):
    ell = _need(cfg.ell, "--ell")
    e = parse_morphism(_need(args.e, "--e"))
    f = parse_morphism(_need(args.f, "--f"))
    m, n = f.dom, e.dom
    report = constancy_check(e, f, enumerate_diagrams(m, n), ell, raise_on_fail=False)
    report["verdict"] = "PASS" if report["equal"] else "FAIL"
    return report, f"generic dim {report['generic_dim']}, specialized dim {report['specialized_dim']}: " \
                    f"{report['verdict']}"


def cmd_cache(cfg, args):
    cache = IdempotentCache(cfg.cache_dir)
    if args.action == "clear":
        removed = cache.clear()
        return {"cache_dir": str(cfg.cache_dir), "removed": removed}, f"removed {removed} files"
    entries = cache.entries()
    info = {"cache_dir": str(cfg.cache_dir), "entries": len(entries),
            "bytes": sum(p.stat().st_size for p in entries)}
    return info, f"{cfg.cache_dir}: {len(entries)} idempotents, {info['bytes']} bytes"


HANDLERS = {
    "dim": cmd_dim, "compose": cmd_compose, "tensor": cmd_tensor, "trace": cmd_trace, "jw": cmd_jw,
    "pathidem": cmd_pathidem, "zleft": cmd_zleft, "bratteli": cmd_bratteli, "gram": cmd_gram, "neg": cmd_neg,
    "ideal": cmd_ideal, "verify": cmd_verify, "verify-even": cmd_verify_even, "constancy": cmd_constancy,
    "cache": cmd_cache,
}


# ---------------------------------------------------------------------------------------------------------------------
# Parsing and dispatch


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--ell", type=int, help="root of unity order (q = tau^2 of order ell); omit for generic t")
    common.add_argument("--max-n", type=int, default=4, help="largest object label in sweeps")
    common.add_argument("--m", type=int, help="domain object")
    common.add_argument("--n", type=int, help="codomain object")
    common.add_argument("--mode", choices=("exact", "certify-generic"), default="exact")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", choices=("json", "dot", "text"), default="text")
    common.add_argument("--cache-dir", type=Path, help="idempotent cache (TL_CACHE_DIR overrides)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")

    parser = _Parser(prog="tl", description="Temperley-Lieb category calculator and ideal verifier")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("compose", "tensor", "trace"):
            p.add_argument("exprs", nargs="+", help="morphism expressions or JSON files")
        if name == "pathidem":
            p.add_argument("--path", help="width sequence, e.g. 1-2-1-2")
        if name == "zleft":
            p.add_argument("--lambda", dest="lam", help="two-row diagram 'l1,l2'")
        if name == "ideal":
            p.add_argument("--generator", help="generator expression (default JW_{ell-1})")
        if name in ("verify", "verify-even"):
            p.add_argument("--samples", type=int, default=2, help="random samples per cell")
        if name == "constancy":
            p.add_argument("--e", help="idempotent in T_n (expression)")
            p.add_argument("--f", help="idempotent in T_m (expression)")
        if name == "cache":
            p.add_argument("action", choices=("info", "clear"), nargs="?", default="info")
    return parser


def _config(args) -> RunConfig:
    env = os.environ.get("TL_CACHE_DIR")
    cache_dir = Path(env) if env else (args.cache_dir or default_cache_dir())
    return RunConfig(args.command, args.ell, args.max_n, args.mode, args.seed, args.out, cache_dir, args.jobs)


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": kind, "message": message, **extra}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; choose one of: " + ", ".join(COMMANDS))
        cfg = _config(args)
        if cfg.out == "dot" and cfg.command != "bratteli":
            raise UsageError("--out dot is only available for bratteli")
        set_cache(IdempotentCache(cfg.cache_dir))
        obj, text = HANDLERS[cfg.command](cfg, args)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except NotEvaluable as exc:
        extra = {"diagram": exc.diagram.to_json()} if exc.diagram is not None else {}
        _emit_error("not_evaluable", str(exc), **extra)
        return 3
    except VerificationFailed as exc:
        _emit_error("verification_failed", str(exc))
        return 1
    except (TLError, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 2
    if cfg.out == "json":
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if isinstance(obj, dict) and obj.get("verdict") == "FAIL":
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
