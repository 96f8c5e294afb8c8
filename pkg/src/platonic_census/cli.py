"""Command line interface.

    platonic-census enumerate --schlafli 3,4,4 --max-solids 2 --orientable yes
    platonic-census properties FILE_OR_SIGNATURE ...
    platonic-census group CENSUS
    platonic-census subdivide CENSUS --mode two-coloring|appendix
    platonic-census augktg N

Tallies and summaries go to standard output, data to files.  Exit codes:
0 success, 2 invalid input, 3 resource budget exceeded.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from .canonical import (
    SignatureError,
    automorphisms,
    dual_classes,
    is_self_dual,
    parse_sig,
    serialize_sig,
    triangulation_from_sig,
)
from .search import MemoryBudgetExceeded, SearchConfig, census_text, read_census, search
from .solids import SchlafliType

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3

log = logging.getLogger("platonic_census")


class InputError(Exception):
    pass


class CensusStore:
    """Directory of census files keyed by type, orientability and size."""

    def __init__(self, root):
        self.root = Path(root)

    def path(self, schlafli, orientable, max_solids):
        s = schlafli.triple
        return self.root / f"{s[0]}{s[1]}{s[2]}-{'o' if orientable else 'n'}-{max_solids}.census"

    def write(self, schlafli, orientable, max_solids, sigs):
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path(schlafli, orientable, max_solids)
        path.write_text(census_text(sigs, schlafli, max_solids, orientable))
        return path


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("PLATONIC_THREADS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise InputError(f"PLATONIC_THREADS must be an integer, got {env!r}") from None
    if n < 1:
        raise InputError("PLATONIC_THREADS must be positive")
    return n


def _tally_text(counts):
    return " ".join(f"{k}:{v}" for k, v in sorted(counts.items())) or "-"


def _merged_tally(sigs):
    counts = {}
    for rep, _ in dual_classes(sigs):
        counts[rep.num_solids] = counts.get(rep.num_solids, 0) + 1
    return counts


def cmd_enumerate(args):
    try:
        schlafli = SchlafliType.parse(args.schlafli)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.max_solids < 1:
        raise InputError("--max-solids must be positive")
    choices = {"yes": [True], "no": [False], "both": [True, False]}[args.orientable]
    store = CensusStore(args.out) if args.out else None
    threads = _threads(args.threads)
    reports = []
    for orientable in choices:
        config = SearchConfig(schlafli, args.max_solids, orientable, threads, args.memory_budget)
        reports.append(search(config))
    # files are written once everything is computed
    for rep in reports:
        kind = "orientable" if rep.config.orientable else "non-orientable"
        line = f"{{{schlafli}}} {kind} {_tally_text(rep.tallies)}"
        if schlafli.self_dual:
            line += f" (up to duality {_tally_text(_merged_tally(rep.signatures))})"
        print(line)
        if rep.rejected_nonmanifold:
            print(f"  rejected non-manifolds: {rep.rejected_nonmanifold}")
        if store is not None:
            path = store.write(schlafli, rep.config.orientable, args.max_solids, rep.signatures)
            print(f"  wrote {path}")
    return EXIT_OK


def _load_signatures(items):
    sigs = []
    for item in items:
        if item.startswith("ptsig1:"):
            try:
                sigs.append(parse_sig(item))
            except SignatureError as exc:
                raise InputError(f"malformed signature: {exc}") from None
            continue
        path = Path(item)
        if not path.exists():
            raise InputError(f"{item}: no such file and not a signature")
        try:
            _, found = read_census(path)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        sigs.extend(found)
    return sigs


def properties_line(sig):
    from .invariants import is_homology_link, num_cusps
    from .homology import first_homology

    t = triangulation_from_sig(sig)
    try:
        self_dual = "yes" if is_self_dual(t) else "no"
    except ValueError:
        self_dual = "no"
    aut = automorphisms(t)
    chiral = "-" if aut.orientation_reversing_exists is None else ("yes" if aut.chiral else "no")
    h1 = first_homology(t)
    cusps = num_cusps(t)
    if sig.schlafli.cusped and aut.orientation_reversing_exists is not None:
        link = "yes" if is_homology_link(t) else "no"
    else:
        link = "-"
    return (f"{serialize_sig(sig)} self_dual={self_dual} regular={'yes' if aut.regular else 'no'} "
            f"chiral={chiral} aut={aut.order} h1={h1.compact()} cusps={cusps} "
            f"homology_link={link}")


def cmd_properties(args):
    for sig in _load_signatures(args.items):
        print(properties_line(sig))
    return EXIT_OK


def cmd_group(args):
    from .invariants import group_by_profile, partition_text, profile_line

    sigs = _load_signatures([args.census])
    if not args.keep_duals:
        # a tessellation and its dual have the same manifold; keep one
        sigs = [rep for rep, _ in dual_classes(sigs)]
    groups, profiles = group_by_profile(sigs, threads=_threads(args.threads))
    print(f"{len(sigs)} tessellations, {len(groups)} groups")
    text = "\n".join(profile_line(s, profiles[s]) for s in sorted(profiles)) + "\n\n"
    text += partition_text(groups, profiles)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_subdivide(args):
    from .cubulation import CubeComplex, subdivide_appendix, two_coloring_signatures
    from .general import serialize_general, validate_general
    from .homology import first_homology
    from .invariants import num_cusps

    sigs = _load_signatures([args.census])
    out = []
    counts = {}
    for sig in sigs:
        if (sig.schlafli.p, sig.schlafli.q) != (4, 3):
            raise InputError(f"{serialize_sig(sig)} is not cubical")
        t = triangulation_from_sig(sig)
        if args.mode == "two-coloring":
            if sig.schlafli.r != 6:
                raise InputError("two-coloring subdivision needs cusped cubical tessellations")
            found = two_coloring_signatures(t)
            counts[len(found)] = counts.get(len(found), 0) + 1
            out.append(f"{serialize_sig(sig)} cusps={num_cusps(t)} outputs={len(found)}")
            out.extend(f"  {serialize_sig(s)}" for s in found)
        else:
            cx = CubeComplex.from_triangulation(t)
            gt = subdivide_appendix(cx)
            rep = validate_general(gt)
            same_h1 = first_homology(gt) == first_homology(t)
            ok = rep.valid and rep.closed and len(gt) == 6 * cx.num_cubes and same_h1
            counts[ok] = counts.get(ok, 0) + 1
            out.append(f"{serialize_sig(sig)} tetrahedra={len(gt)} valid={'yes' if rep.valid else 'no'} "
                       f"closed={'yes' if rep.closed else 'no'} h1_preserved={'yes' if same_h1 else 'no'}")
            out.append(serialize_general(gt).rstrip("\n"))
    if args.mode == "two-coloring":
        print("outputs per tessellation: " + " ".join(f"{k}:{v}" for k, v in sorted(counts.items())))
    else:
        print(f"passed {counts.get(True, 0)} failed {counts.get(False, 0)}")
    text = "\n".join(out) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_augktg(args):
    from .augktg import augktg_text, enumerate_augktg

    if args.num_a_moves < 0:
        raise InputError("number of A-moves must be non-negative")
    entries = enumerate_augktg(args.num_a_moves, threads=_threads(args.threads))
    text = augktg_text(args.num_a_moves, entries)
    print(text.splitlines()[-1].lstrip("# "))
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="platonic-census",
                                     description="Census of hyperbolic Platonic tessellations")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate tessellations of one type")
    p.add_argument("--schlafli", required=True, help="p,q,r")
    p.add_argument("--max-solids", type=int, required=True)
    p.add_argument("--orientable", choices=("yes", "no", "both"), default="both")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="census directory")
    p.add_argument("--memory-budget", type=int, help="bytes for the seen-set")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("properties", help="symmetry and homology of tessellations")
    p.add_argument("items", nargs="+", help="signatures or census files")
    p.set_defaults(func=cmd_properties)

    p = sub.add_parser("group", help="partition a census by invariant profile")
    p.add_argument("census")
    p.add_argument("--threads", type=int)
    p.add_argument("--keep-duals", action="store_true",
                   help="do not merge dual pairs of self-dual types")
    p.add_argument("--out")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("subdivide", help="subdivide cubical tessellations")
    p.add_argument("census")
    p.add_argument("--mode", choices=("two-coloring", "appendix"), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("augktg", help="enumerate AugKTG diagrams")
    p.add_argument("num_a_moves", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_augktg)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise InputError("--threads must be positive")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MemoryBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
