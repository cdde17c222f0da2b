"""Command-line interface: file-based access to every subsystem.

Exit codes: 0 success, 2 certification inconclusive, 1 input error or
failed scenario expectation. JSON reports are deterministic for a fixed
seed; timings are suppressed with --no-timings.
"""

import argparse
import sys
from pathlib import Path

from . import meataxe
from .blocks import (classify_linear_labels, character_of_one_dim,
                     idempotent_from_character, label_of_character,
                     linear_characters, parse_group_algebra_element, project,
                     rep_of_character)
from .brauer import (brauer_quotient, green_correspondent,
                     green_trivial_source, marks_count)
from .errors import BoundExceeded, Inconclusive, ParseError
from .modrep import (MatRep, chop, dual, hom_space, indecomposable_summands,
                     induce, is_isomorphic, parse_matrep, parse_matrep_raw,
                     perm_rep, radical_series, restrict, socle_series,
                     tensor_linear)
from .permgrp import (DEFAULT_BOUND, Subgroup, coset_action, format_group,
                      normalizer, parse_group, sylow)
from .scenarios import (SCENARIO_NAMES, Report, data_directory, run_scenario)


def _read(path):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return p.read_text()


def _load_group(path, seed=0):
    return parse_group(_read(path), filename=str(path), seed=seed)


def _load_subgroup(G, path):
    H = parse_group(_read(path), filename=str(path))
    if H.degree != G.degree:
        raise ValueError(f"{path}: degree {H.degree} does not match the group")
    return Subgroup(G, H.gens)


def _load_rep(path, group):
    return parse_matrep(_read(path), group, filename=str(path))


def _emit(report, args, lines):
    for line in lines:
        print(line)
    if args.json:
        Path(args.json).write_text(
            report.to_json(include_timings=not args.no_timings) + "\n")


# -- group commands --------------------------------------------------------------


def cmd_group(args):
    G = _load_group(args.group, seed=args.seed)
    report = Report(f"group {args.action}", args.seed)
    if args.action == "info":
        report.results.update({
            "degree": G.degree, "order": G.order,
            "generators": len(G.gens),
            "base": [b + 1 for b in G.base()],
        })
        lines = [f"degree {G.degree}, order {G.order}, "
                 f"{len(G.gens)} generators, base {report.results['base']}"]
    elif args.action == "sylow":
        P = sylow(G, args.p, seed=args.seed)
        report.results.update({"order": P.order,
                               "generators": format_group(P.group).splitlines()[1:]})
        lines = [f"sylow {args.p}-subgroup of order {P.order}"]
        lines += [f"  {g}" for g in report.results["generators"]]
    elif args.action == "normalizer":
        K = _load_subgroup(G, args.sub)
        N = normalizer(G, K, bound=args.bound)
        report.results.update({"order": N.order,
                               "generators": format_group(N.group).splitlines()[1:]})
        lines = [f"normalizer of order {N.order}"]
        lines += [f"  {g}" for g in report.results["generators"]]
    elif args.action == "cosets":
        H = _load_subgroup(G, args.sub)
        act = coset_action(G, H)
        report.results.update({"points": act.n})
        lines = [f"{act.n} cosets; point stabilizer order {H.order}"]
    else:
        raise ValueError(f"unknown group action {args.action!r}")
    _emit(report.finish(), args, lines)
    return 0


# -- module commands --------------------------------------------------------------


def _constituents_lines(cons):
    return [f"  dim {r.dim} (multiplicity {m})" for r, m in cons]


def cmd_mod(args):
    report = Report(f"mod {args.action}", args.seed)
    if args.action == "chop" and not args.group:
        p, dim, mats = parse_matrep_raw(_read(args.rep), filename=args.rep)
        simples = meataxe.chop([m.a for m in mats], dim, p, seed=args.seed)
        report.results["constituents"] = [
            {"dim": s.dim, "multiplicity": s.multiplicity} for s in simples]
        lines = [f"{len(simples)} constituents of a {dim}-dimensional module:"]
        lines += [f"  dim {s.dim} (multiplicity {s.multiplicity})" for s in simples]
        _emit(report.finish(), args, lines)
        return 0
    G = _load_group(args.group, seed=args.seed)
    rep = _load_rep(args.rep, G)
    if args.action == "chop":
        cons = chop(rep, seed=args.seed)
        report.results["constituents"] = [
            {"dim": r.dim, "multiplicity": m} for r, m in cons]
        lines = [f"{len(cons)} constituents:"] + _constituents_lines(cons)
    elif args.action in ("radseries", "socseries"):
        series = (radical_series if args.action == "radseries"
                  else socle_series)(rep, seed=args.seed)
        report.results["layer_dims"] = series.layer_dims()
        order = "top to bottom" if args.action == "radseries" else "bottom to top"
        lines = [f"layer dimensions ({order}): {series.layer_dims()}"]
    elif args.action == "decompose":
        summands = indecomposable_summands(rep, seed=args.seed)
        report.results["summand_dims"] = sorted(s.dim for s in summands)
        lines = [f"indecomposable summand dimensions: {report.results['summand_dims']}"]
    elif args.action == "hom":
        rep2 = _load_rep(args.rep2, G)
        homs = hom_space(rep, rep2)
        report.results["dim_hom"] = len(homs)
        iso = None
        if rep.dim == rep2.dim:
            iso = is_isomorphic(rep, rep2, seed=args.seed) is not None
        report.results["isomorphic"] = iso
        lines = [f"dim Hom = {len(homs)}; isomorphic: {iso}"]
    elif args.action == "induce":
        H = _load_subgroup(G, args.sub)
        sub_rep = _load_rep(args.rep, H.group)
        ind = induce(sub_rep, G)
        report.results["dim"] = ind.dim
        lines = [f"induced module of dimension {ind.dim}"]
        _maybe_write(ind, args, lines)
    elif args.action == "restrict":
        H = _load_subgroup(G, args.sub)
        res = restrict(rep, H)
        report.results["dim"] = res.dim
        lines = [f"restricted module of dimension {res.dim}"]
        _maybe_write(res, args, lines)
    elif args.action == "dual":
        d = dual(rep)
        report.results["dim"] = d.dim
        lines = [f"dual module of dimension {d.dim}"]
        _maybe_write(d, args, lines)
    elif args.action == "tensor":
        values = [int(v) for v in args.char_values.split(",")]
        from .blocks import LinearCharacter
        lam = LinearCharacter(G, rep.p, values)
        tw = tensor_linear(rep, lam)
        report.results["dim"] = tw.dim
        lines = [f"twisted module of dimension {tw.dim}"]
        _maybe_write(tw, args, lines)
    else:
        raise ValueError(f"unknown mod action {args.action!r}")
    _emit(report.finish(), args, lines)
    return 0


def _maybe_write(rep, args, lines):
    if args.out:
        Path(args.out).write_text(rep.to_text())
        lines.append(f"written to {args.out}")


# -- brauer commands ---------------------------------------------------------------


def cmd_brauer(args):
    report = Report(f"brauer {args.action}", args.seed)
    G = _load_group(args.group, seed=args.seed)
    if args.action == "marks":
        H = _load_subgroup(G, args.sub)
        K = _load_subgroup(G, args.k)
        count = marks_count(G, H, K, bound=args.bound)
        report.results["fixed_points"] = count
        lines = [f"|Omega^K| = {count}"]
        _emit(report.finish(), args, lines)
        return 0
    rep = _load_rep(args.rep, G)
    P = _load_subgroup(G, args.sub)
    if args.action == "fixed":
        from .brauer import fixed_points
        basis = fixed_points(rep, P)
        report.results["dim"] = basis.rows
        lines = [f"fixed space of dimension {basis.rows}"]
    elif args.action == "quotient":
        N = (_load_subgroup(G, args.normalizer) if args.normalizer
             else normalizer(G, P, bound=args.bound))
        bq = brauer_quotient(rep, P, N)
        report.results.update({
            "quotient_dim": bq.dim,
            "fixed_dim": bq.fixed_basis.rows,
            "traced_dim": bq.traced_subspace.rows,
            "normalizer_order": N.order,
        })
        lines = [f"brauer quotient of dimension {bq.dim} "
                 f"(fixed {bq.fixed_basis.rows}, traced {bq.traced_subspace.rows})"]
    elif args.action == "green":
        N = (_load_subgroup(G, args.normalizer) if args.normalizer
             else normalizer(G, P, bound=args.bound))
        if args.method == "trivial-source":
            out = green_trivial_source(rep, P, N)
        else:
            out = green_correspondent(rep, P, N, seed=args.seed)
        report.results["dim"] = out.dim
        lines = [f"green correspondent of dimension {out.dim}"]
        _maybe_write(out, args, lines)
    else:
        raise ValueError(f"unknown brauer action {args.action!r}")
    _emit(report.finish(), args, lines)
    return 0


# -- blocks commands ---------------------------------------------------------------


def cmd_blocks(args):
    report = Report(f"blocks {args.action}", args.seed)
    G = _load_group(args.group, seed=args.seed)
    if args.action == "chars":
        chars = linear_characters(G, args.p)
        report.results["count"] = len(chars)
        report.results["values"] = [list(c.gen_values) for c in chars]
        lines = [f"{len(chars)} linear characters over F_{args.p}:"]
        lines += [f"  {list(c.gen_values)}" for c in chars]
    elif args.action == "idem":
        E = Subgroup(G, G.gens)
        chars = linear_characters(G, args.p)
        idx = args.char_index
        if not 0 <= idx < len(chars):
            raise ValueError(f"char index {idx} out of range [0, {len(chars)})")
        e = idempotent_from_character(E, chars[idx])
        text = e.to_text()
        report.results["support_size"] = len(e.support)
        lines = [text.rstrip("\n")]
        if args.out:
            Path(args.out).write_text(text)
            lines.append(f"written to {args.out}")
    elif args.action == "project":
        rep = _load_rep(args.rep, G)
        e = parse_group_algebra_element(_read(args.idem), G, filename=args.idem)
        S = _load_subgroup(G, args.sub)
        W = project(rep, e, S)
        report.results["dim"] = W.dim
        lines = [f"projected module of dimension {W.dim}"]
        _maybe_write(W, args, lines)
    else:
        raise ValueError(f"unknown blocks action {args.action!r}")
    _emit(report.finish(), args, lines)
    return 0


# -- scenario and bootstrap ----------------------------------------------------------


def cmd_scenario(args):
    if args.name not in SCENARIO_NAMES:
        raise ValueError(f"unknown scenario {args.name!r}; "
                         f"choose from {', '.join(SCENARIO_NAMES)}")
    report = run_scenario(args.name, seed=args.seed, data_dir=args.data)
    lines = [f"scenario {args.name}:"] + report.summary_lines()
    _emit(report, args, lines)
    return 0 if report.passed else 1


def cmd_bootstrap(args):
    from .bootstrap import write_datasets
    out = args.out or str(data_directory())
    written = write_datasets(out, seed=args.seed)
    for path in written:
        print(f"wrote {path}")
    return 0


# -- argument parsing ------------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--p", type=int, default=3, help="field characteristic (default 3)")
    sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sp.add_argument("--json", help="write a JSON report to this path")
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                    help="hard bound for backtrack searches")
    sp.add_argument("--no-timings", action="store_true",
                    help="omit timings from the JSON report")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="brauerbox",
        description="exact modular representation theory over small prime fields")
    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("group", help="permutation group queries")
    g.add_argument("action", choices=["info", "sylow", "normalizer", "cosets"])
    g.add_argument("--group", required=True, help="group file")
    g.add_argument("--sub", help="subgroup file")
    _add_common(g)
    g.set_defaults(func=cmd_group)

    m = subs.add_parser("mod", help="module operations")
    m.add_argument("action", choices=["chop", "radseries", "socseries",
                                      "decompose", "hom", "induce",
                                      "restrict", "dual", "tensor"])
    m.add_argument("--rep", required=True, help="representation file")
    m.add_argument("--rep2", help="second representation file (hom)")
    m.add_argument("--group", help="group file")
    m.add_argument("--sub", help="subgroup file (induce/restrict)")
    m.add_argument("--char-values", help="comma-separated character values (tensor)")
    m.add_argument("--out", help="write the resulting representation here")
    _add_common(m)
    m.set_defaults(func=cmd_mod)

    b = subs.add_parser("brauer", help="fixed points and Brauer quotients")
    b.add_argument("action", choices=["fixed", "quotient", "marks", "green"])
    b.add_argument("--group", required=True, help="group file")
    b.add_argument("--sub", required=True, help="p-subgroup (or H for marks) file")
    b.add_argument("--rep", help="representation file")
    b.add_argument("--k", help="subgroup K file (marks)")
    b.add_argument("--normalizer", help="normalizer file (optional)")
    b.add_argument("--method", choices=["trivial-source", "correspondent"],
                   default="trivial-source", help="green computation path")
    b.add_argument("--out", help="write the resulting representation here")
    _add_common(b)
    b.set_defaults(func=cmd_brauer)

    bl = subs.add_parser("blocks", help="linear characters and idempotents")
    bl.add_argument("action", choices=["chars", "idem", "project"])
    bl.add_argument("--group", required=True, help="group file")
    bl.add_argument("--rep", help="representation file (project)")
    bl.add_argument("--idem", help="idempotent file (project)")
    bl.add_argument("--sub", help="designated subgroup file (project)")
    bl.add_argument("--char-index", type=int, default=0,
                    help="index into the character list (idem)")
    bl.add_argument("--out", help="output file")
    _add_common(bl)
    bl.set_defaults(func=cmd_blocks)

    s = subs.add_parser("scenario", help="run a shipped scenario")
    s.add_argument("verb", choices=["run"])
    s.add_argument("name", help="scenario name")
    s.add_argument("--data", help="data directory override")
    _add_common(s)
    s.set_defaults(func=cmd_scenario)

    boot = subs.add_parser("bootstrap", help="regenerate the shipped datasets")
    boot.add_argument("--out", help="output directory (default: packaged data)")
    _add_common(boot)
    boot.set_defaults(func=cmd_bootstrap)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Inconclusive as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return 2
    except (ParseError, FileNotFoundError, BoundExceeded, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
