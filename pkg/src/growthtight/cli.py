"""Command-line front end.

Exit codes: 0 success, 1 a validator reported a failure (or a computation
could not finish), 2 usage or input errors, 3 file errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields, is_dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import embedding, growth, metric, nets, orbit
from .errors import GrowthTightError, UnsupportedModel, WindowTooSmall
from .free_product import FreeProductWord
from .models import CyclicFreeProduct, FreeAbelianGroup, FreeGroup, GroupModel, quotient_model
from .report import CheckReport
from .words import ALPHABET, Word, format_word, free_reduce, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class IoError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization -------------------------------------------------------------


def to_jsonable(x: Any) -> Any:
    """Exact numbers stay exact: ints as ints, other Fractions as "p/q".
    Floats keep 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if hasattr(x, "item") and not isinstance(x, (list, tuple, dict)):  # numpy scalars
        return to_jsonable(x.item())
    if isinstance(x, CheckReport):
        return to_jsonable(x.as_dict())
    if is_dataclass(x):
        return {f.name: to_jsonable(getattr(x, f.name)) for f in fields(x)
                if not f.name.startswith("_")}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in x]
    return str(x)


def emit_report(report: Any, fmt: str, path: str | None) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "count"])
        for r, c in enumerate(report.counts):
            w.writerow([r, c])
        text = buf.getvalue()
    else:
        text = json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


# -- inputs ----------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(str(exc)) from exc


def parse_words_for(gens: Sequence[str], text: str) -> Word:
    """Parse a word written in the generator names of a presentation."""
    table = {g: ALPHABET[i] for i, g in enumerate(gens)}
    if text.strip() in ("", "1") or (text.strip() == "e" and "e" not in table):
        return ()
    out = []
    for ch in text:
        if ch.lower() in table:
            mapped = table[ch.lower()]
            out.append(mapped if ch.islower() else mapped.upper())
        elif ch in "^+-0123456789 ":
            out.append(ch)
        else:
            raise UsageError(f"letter {ch!r} is not a generator")
    return parse_word("".join(out))


def parse_presentation(text: str) -> Presentation:
    """``generators: a b`` and ``relators: aa abAB`` lines; ``#`` starts a comment."""
    gens: list[str] | None = None
    rel_text: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise UsageError(f"bad presentation line {raw!r}")
        key = key.strip().lower()
        items = rest.replace(",", " ").split()
        if key == "generators":
            gens = items
        elif key == "relators":
            rel_text += items
        else:
            raise UsageError(f"unknown presentation key {key!r}")
    if not gens:
        raise UsageError("presentation has no generators")
    for g in gens:
        if len(g) != 1 or not g.islower() or not g.isalpha():
            raise UsageError(f"generator names must be single lowercase letters, got {g!r}")
    if len(set(gens)) != len(gens):
        raise UsageError("duplicate generator names")
    return Presentation(tuple(gens), tuple(free_reduce(parse_words_for(gens, r)) for r in rel_text))


def load_presentation(path: str) -> Presentation:
    return parse_presentation(_read_text(path))


def parse_model(source: str) -> GroupModel:
    """``builtin:free:N``, ``builtin:abelian:N``, ``builtin:cyclic-product:2,inf``
    or the path of a presentation file."""
    if source.startswith("builtin:"):
        parts = source.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad model {source!r}")
        kind, arg = parts[1], parts[2]
        try:
            if kind == "free":
                return FreeGroup(int(arg))
            if kind == "abelian":
                return FreeAbelianGroup(int(arg))
            if kind == "cyclic-product":
                orders = [0 if o.strip() in ("inf", "0") else int(o) for o in arg.split(",")]
                return CyclicFreeProduct(orders)
        except ValueError as exc:
            raise UsageError(f"bad model {source!r}: {exc}") from exc
        raise UsageError(f"unknown builtin model {kind!r}")
    p = load_presentation(source)
    return quotient_model(p.rank, p.relators)


def parse_space(source: str) -> metric.FiniteMetricSpace:
    if source.startswith("builtin:"):
        try:
            return metric.builtin_space(source)
        except (ValueError, IndexError) as exc:
            raise UsageError(f"bad space {source!r}: {exc}") from exc
    return metric.edge_list_space(_read_text(source).splitlines(), name=source)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _word(text: str) -> Word:
    try:
        return free_reduce(parse_word(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("window must be LO:HI")
    return int(lo), int(hi)


def _fp_word(text: str) -> FreeProductWord:
    """``"e*aaaa"``: blocks separated by ``*`` (one separator between blocks)."""
    return FreeProductWord(tuple(free_reduce(parse_word(b)) for b in text.split("*")))


# -- subcommands -----------------------------------------------------------------


def cmd_growth(args) -> tuple[Any, int]:
    model = parse_model(args.model)
    table, how = embedding.ball_table(model, args.radius)
    if args.format == "csv":
        return table, EXIT_OK
    try:
        est = growth.growth_rate(table, args.window)
    except WindowTooSmall:
        if args.window is not None:
            raise UsageError("the window needs at least 3 radii")
        est = None
    return {
        "model": model.model_id,
        "radius": args.radius,
        "method": how,
        "counts": list(table.counts),
        "omega": est.omega if est else None,
        "window": list(est.window) if est else None,
        "residual": est.residual if est else None,
    }, EXIT_OK


def cmd_delta(args) -> tuple[Any, int]:
    S = parse_space(args.space)
    if args.mode == "exhaustive":
        est = metric.four_point_delta(S, "exhaustive")
    elif args.mode.startswith("sample:"):
        try:
            n = int(args.mode.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad mode {args.mode!r}") from exc
        est = metric.four_point_delta(S, "sampled", n, args.seed)
    else:
        raise UsageError(f"bad mode {args.mode!r}")
    out = to_jsonable(est)
    out.update(space=S.name, points=len(S), seed=args.seed)
    return out, EXIT_OK


_SCANS = {
    "tripod": metric.scan_tripod_band,
    "projection": metric.scan_projection_lemma,
    "chain": metric.scan_chain_lemma,
    "neighborhood": metric.scan_neighborhood_lemma,
}


def cmd_tripod(args) -> tuple[Any, int]:
    S = parse_space(args.space)
    delta = args.delta if args.delta is not None else metric.four_point_delta(S).delta
    names = list(_SCANS) if args.check == "all" else [args.check]
    reports = [_SCANS[n](S, delta) for n in names]
    ok = all(r.ok for r in reports)
    return {"space": S.name, "points": len(S), "delta": delta, "ok": ok,
            "reports": reports}, EXIT_OK if ok else EXIT_FAIL


def cmd_net(args) -> tuple[Any, int]:
    model = parse_model(args.model)
    net = nets.build_rho_net(model, args.rho, args.radius, args.Delta)
    if args.format == "csv":
        return net.table(), EXIT_OK
    check = nets.check_net(net)
    out = {
        "model": model.model_id,
        "rho": net.rho,
        "radius": net.radius,
        "Delta": net.Delta,
        "theta": net.theta,
        "members": [format_word(m) or "e" for m in net.members],
        "check": check,
    }
    ok = check["separated"] and check["covered"] and check["identity_member"]
    if args.compare_radius is not None:
        if args.lam is None or args.lam_prime is None:
            raise UsageError("--compare-radius needs --lambda and --lambda-prime")
        sigma = 3 * (net.Delta + net.rho) if args.sigma is None else args.sigma
        reach = max(args.compare_radius + args.lam + args.lam_prime, sigma)
        blocks = embedding.ball_table(model, math.floor(reach))[0]
        cmp_ = nets.verify_rho_comparison(blocks, net, args.lam, args.lam_prime,
                                          args.compare_radius, args.sigma, args.r_sigma)
        out["comparison"] = cmp_
        ok = ok and cmp_.holds
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_orbit(args) -> tuple[Any, int]:
    ctx = orbit.OrbitContext.create(args.xi, args.rank)
    consts = orbit.make_constants(ctx, args.kappa)
    if args.check == "cells":
        rep = orbit.check_cells(ctx, args.max_len, min(args.max_len, args.exhaustive_len))
    elif args.check == "symmetric":
        rep = orbit.sweep_symmetric(ctx, consts, args.samples, args.max_len, args.seed)
    elif args.check == "twisted":
        rep = orbit.sweep_twisted(ctx, consts, args.samples, args.max_len, args.seed)
    elif args.check == "separation":
        rep = orbit.sweep_separation(ctx, consts, args.samples, args.max_len, args.seed)
    else:
        rep = orbit.check_kappa_exhaustive(ctx, args.max_len)
    return {"xi": format_word(ctx.xi), "L": ctx.L, "epsilon": ctx.epsilon,
            "Delta_minus": consts.Delta_minus, "Delta_star": consts.Delta_star,
            "seed": args.seed, "samples": args.samples, "report": rep}, \
        EXIT_OK if rep.ok else EXIT_FAIL


def _quotient_from_args(args) -> tuple[int, list[Word]]:
    p = load_presentation(args.presentation)
    if p.relators:
        raise UnsupportedModel("the ambient group must be free: put relators in --normal-closure")
    rels = [free_reduce(parse_words_for(p.generators, w)) for w in args.normal_closure]
    if not any(rels):
        raise UnsupportedModel("N is trivial; growth tightness concerns infinite N")
    return p.rank, rels


def cmd_embed(args) -> tuple[Any, int]:
    rank, rels = _quotient_from_args(args)
    quotient = quotient_model(rank, rels)
    xi = embedding.find_xi(quotient) if args.xi is None else args.xi
    ctx = orbit.OrbitContext.create(xi, rank)
    consts = orbit.make_constants(ctx, args.kappa, args.lam, args.rho, scaled=args.scaled)
    cfg = embedding.EmbeddingConfig(quotient, ctx, consts)
    out: dict[str, Any] = {"xi": format_word(ctx.xi), "constants": consts,
                           "hypotheses": consts.hypotheses()}
    if args.word:
        out["images"] = {w: format_word(embedding.build_phi(cfg, _fp_word(w))) or "e"
                         for w in args.word}
        return out, EXIT_OK
    net = nets.build_rho_net(quotient, consts.rho, args.net_radius)
    cfg.net_members = net.member_set
    bound = args.max_norm if args.max_norm is not None else 2 * consts.lam + args.net_radius
    words = list(embedding.net_words([(m, net.norms[m]) for m in net.members], consts.lam,
                                     args.blocks, bound))
    nonexp = embedding.check_phi_nonexpanding(cfg, words)
    inj = embedding.check_phi_injective(cfg, words)
    out.update(net_members=len(net.members), words=len(words),
               nonexpanding=nonexp, injective=inj)
    ok = nonexp.ok and inj.ok
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_tightness(args) -> tuple[Any, int]:
    rank, rels = _quotient_from_args(args)
    rep = embedding.tightness_report(
        rank, rels, args.radius_g, args.radius_q, xi=args.xi, kappa=args.kappa,
        lam=args.lam, rho=args.rho, scaled=args.scaled, net_radius=args.net_radius)
    out = to_jsonable(rep)
    out["xi"] = format_word(rep.xi)
    ok = rep.strict_gap_observed and rep.phi_injective_on_sample and rep.phi_nonexpanding_on_sample
    return out, EXIT_OK if ok else EXIT_FAIL


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="growthtight", description="Growth tightness toolkit.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, formats=("json",)):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    g = sub.add_parser("growth", help="ball counts and growth rate")
    g.add_argument("--model", required=True)
    g.add_argument("--radius", type=int, required=True)
    g.add_argument("--window", type=_window, default=None)
    common(g, ("json", "csv"))
    g.set_defaults(func=cmd_growth)

    d = sub.add_parser("delta", help="four-point hyperbolicity constant")
    d.add_argument("--space", required=True)
    d.add_argument("--mode", default="exhaustive")
    d.add_argument("--seed", type=int, default=0)
    common(d)
    d.set_defaults(func=cmd_delta)

    t = sub.add_parser("tripod", help="tripod, projection, chain and neighborhood scans")
    t.add_argument("--space", required=True)
    t.add_argument("--check", choices=[*_SCANS, "all"], default="all")
    t.add_argument("--delta", type=_fraction, default=None)
    common(t)
    t.set_defaults(func=cmd_tripod)

    n = sub.add_parser("net", help="greedy rho-net of a group ball")
    n.add_argument("--model", required=True)
    n.add_argument("--rho", type=_fraction, required=True)
    n.add_argument("--radius", type=int, required=True)
    n.add_argument("--Delta", type=_fraction, default=Fraction(1, 2))
    n.add_argument("--compare-radius", type=_fraction, default=None)
    n.add_argument("--lambda", dest="lam", type=_fraction, default=None)
    n.add_argument("--lambda-prime", dest="lam_prime", type=_fraction, default=None)
    n.add_argument("--sigma", type=_fraction, default=None)
    n.add_argument("--r-sigma", type=_fraction, default=None)
    common(n, ("json", "csv"))
    n.set_defaults(func=cmd_net)

    o = sub.add_parser("orbit", help="Voronoi cells, symmetric elements, twisted products")
    o.add_argument("--xi", type=_word, required=True)
    o.add_argument("--rank", type=int, default=2)
    o.add_argument("--check", choices=["cells", "symmetric", "twisted", "insert", "separation"],
                   required=True)
    o.add_argument("--max-len", type=int, default=6)
    o.add_argument("--exhaustive-len", type=int, default=8)
    o.add_argument("--samples", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--kappa", type=int, default=160)
    common(o)
    o.set_defaults(func=cmd_orbit)

    def quotient_args(sp):
        sp.add_argument("--presentation", required=True)
        sp.add_argument("--normal-closure", nargs="+", required=True)
        sp.add_argument("--xi", type=_word, default=None)
        sp.add_argument("--kappa", type=int, default=160)
        sp.add_argument("--lambda", dest="lam", type=_fraction, default=None)
        sp.add_argument("--rho", type=_fraction, default=None)
        sp.add_argument("--scaled", action="store_true")

    e = sub.add_parser("embed", help="the map Phi on net words")
    quotient_args(e)
    e.add_argument("--word", nargs="+", default=None, help="free-product words like e*aaaa")
    e.add_argument("--net-radius", type=int, default=20)
    e.add_argument("--blocks", type=int, default=3)
    e.add_argument("--max-norm", type=_fraction, default=None)
    common(e)
    e.set_defaults(func=cmd_embed)

    ti = sub.add_parser("tightness", help="end-to-end growth tightness report")
    quotient_args(ti)
    ti.add_argument("--radius-g", type=int, default=12)
    ti.add_argument("--radius-q", type=int, default=30)
    ti.add_argument("--net-radius", type=int, default=None)
    common(ti)
    ti.set_defaults(func=cmd_tightness)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report, code = args.func(args)
        emit_report(report, args.format, args.output)
        return code
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IoError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UnsupportedModel, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GrowthTightError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
