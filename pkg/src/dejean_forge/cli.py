"""Command-line entry point ``dejean-forge``.

Machine output is JSON on stdout; a one-line summary goes to stderr.
Exit codes: 0 pass, 2 violation found, 1 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Optional

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
CONDITIONS = ("l1", "l2", "c1", "c2", "c3", "C3", "uf")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("epsilon must be non-negative")
    return value


def _int_set(text: str) -> frozenset:
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _emit(obj, summary: str, out: Optional[str] = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    sys.stderr.write(summary + "\n")


def _read_word(args) -> list:
    from .words import parse_word
    if (args.word is None) == (args.file is None):
        raise UsageError("give exactly one of --word or --file")
    if args.word is not None:
        text = args.word
    else:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}")
    try:
        return parse_word(text, args.n)
    except ValueError as exc:
        raise UsageError(str(exc))


def _profile(args, default_eps=Fraction(0)):
    from .words import DEFAULT_EXEMPT, EpsProfile
    eps = default_eps if args.eps is None else args.eps
    exempt = DEFAULT_EXEMPT if args.exempt is None else args.exempt
    return EpsProfile(eps, exempt)


def _check_n(n: int, low: int = 2) -> None:
    if n < low:
        raise UsageError(f"n must be >= {low}")


# -- subcommands ------------------------------------------------------------------

def cmd_check(args) -> int:
    from .fastcheck import check_fast_report
    _check_n(args.n)
    w = _read_word(args)
    rep = check_fast_report(w, args.n, _profile(args), jobs=args.jobs)
    out = rep.to_json()
    out["length"] = len(w)
    verdict = "threshold" if rep.threshold else f"forbidden factor {rep.witness.to_json()}"
    _emit(out, f"check: n={args.n} |w|={len(w)}: {verdict}", args.output)
    return EXIT_OK if rep.threshold else EXIT_FAIL


def cmd_construct(args) -> int:
    from . import pansiot
    from .bccode import Flavor
    from .constructions import SuffixClosureError, build_roots, family_dump, materialize
    _check_n(args.n, 5)
    if args.k is not None and args.k < 3:
        raise UsageError("k must be >= 3")
    try:
        rf = build_roots(args.n, args.k, Flavor[args.flavor.upper()])
    except ValueError as exc:
        raise UsageError(str(exc))
    status = EXIT_OK
    if args.self_check:
        try:
            images = materialize(rf)
            check = {"suffix_closure": True}
        except SuffixClosureError as exc:
            images = [tuple(pansiot.decode(rf.premise, rf.code(i) * rf.k)[rf.n:]) for i in range(len(rf.roots))]
            check = {"suffix_closure": False, "error": str(exc)}
            status = EXIT_FAIL
    else:
        images = [tuple(pansiot.decode(rf.premise, rf.code(i) * rf.k)[rf.n:]) for i in range(len(rf.roots))]
        check = None
    dump = family_dump(rf, images)
    dump["w0_blocks"] = len(rf.w0_blocks)
    dump["offsets"] = rf.offsets
    if check is not None:
        dump["self_check"] = check
    _emit(dump, f"construct: n={rf.n} k={rf.k} {len(images)} images of length {dump['L']}"
          f" from {len(rf.w0_blocks)} q-blocks", args.output)
    return status


def _load_family(args):
    from .substitution import ImageFamily
    from .verify import construction_family
    if (args.n is None) == (args.family is None):
        raise UsageError("give exactly one of --n or --family")
    if args.family is None:
        _check_n(args.n, 5)
        try:
            return construction_family(args.n, args.k, args.select)
        except ValueError as exc:
            raise UsageError(str(exc))
    try:
        with open(args.family) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read family {args.family}: {exc}")
    try:
        if "images_by_letter" in data:
            return ImageFamily.from_json(data)
        from .words import parse_word
        n = int(data["n"])
        images = [parse_word(s, n) for s in data["images"]]
        return ImageFamily.from_images(images, n, 3, letters=len(images) // 3)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad family file: {exc}")


def cmd_verify(args) -> int:
    from .substitution import DeltaRelation
    from .verify import (VerificationReport, c3_report, check_l1, check_l2, check_uf,
                         family_stats)
    from .words import EpsProfile
    wanted = [c.strip() for c in args.conditions.split(",") if c.strip()]
    unknown = [c for c in wanted if c not in CONDITIONS]
    if unknown:
        raise UsageError(f"unknown conditions {unknown}; choose from {list(CONDITIONS)}")
    fam = _load_family(args)
    n = fam.n
    stats = family_stats(fam)
    eps = stats.epsilon if args.eps is None else args.eps
    rep = VerificationReport()
    l2_parts = {"c1", "c2", "c3"} & set(wanted)
    if "l2" in wanted:
        l2_parts = {"c1", "c2", "c3"}
    if l2_parts:
        full = check_l2(fam, n, window=args.window, jobs=args.jobs, epsilon=eps)
        for v in full.verdicts:
            if v.name == "l2.pre" or v.name.split(".")[1] in l2_parts:
                rep.verdicts.append(v)
    if "l1" in wanted:
        rep.extend(check_l1(fam, n, len(fam.images) - n, window=args.window, jobs=args.jobs))
    if "C3" in wanted:
        rep.extend(c3_report(fam, n))
    if "uf" in wanted:
        rep.extend(check_uf(fam, DeltaRelation.full(fam), EpsProfile(eps)))
    out = {"n": n, "images": len(fam.images), "L": fam.L, "stats": stats.to_json(),
           "epsilon": str(eps), "report": rep.to_json()}
    failed = [v.name for v in rep.verdicts if not v.passed]
    _emit(out, f"verify: {len(rep.verdicts)} verdicts, failed: {failed or 'none'}", args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_conjugacy(args) -> int:
    from .conjugacy import ConjInstance, canonical_conjugate, conjugate_oracle, same_class
    if args.words:
        if len(args.words) != 2 or args.shifts:
            raise UsageError("give two words, or --shifts P Q with --n")
        u, v = args.words
        out = {"conjugate": conjugate_oracle(u, v), "method": "oracle"}
    else:
        if not args.shifts or args.n is None:
            raise UsageError("give two words, or --shifts P Q with --n")
        from .constructions import build_roots, materialize_root
        _check_n(args.n, 5)
        rf = build_roots(args.n, args.k)
        p, q = args.shifts
        if not (0 <= p < len(rf.roots) and 0 <= q < len(rf.roots)):
            raise UsageError(f"shift indices must lie in [0, {len(rf.roots)})")
        a = ConjInstance(rf.w0, rf.flavor, rf.k, rf.offsets[p], rf.n)
        b = ConjInstance(rf.w0, rf.flavor, rf.k, rf.offsets[q], rf.n)
        orbit = same_class(a, b)
        oracle = conjugate_oracle(materialize_root(rf, p), materialize_root(rf, q))
        ca, cb = canonical_conjugate(a), canonical_conjugate(b)
        out = {"conjugate": orbit, "method": "orbit", "oracle": oracle,
               "labels": [rf.labels[p], rf.labels[q]],
               "canonical": [list(ca), list(cb)], "agree": orbit == oracle == (ca == cb)}
    _emit(out, f"conjugacy: {'conjugate' if out['conjugate'] else 'not conjugate'}", args.output)
    return EXIT_OK


def _toy_family(n: int, L: int, rng: random.Random):
    from .substitution import ImageFamily
    from .words import is_primitive
    seen, images = set(), []
    while len(images) < 3 * n:
        img = tuple(rng.randrange(n) for _ in range(L))
        if img not in seen and is_primitive(img):
            seen.add(img)
            images.append(img)
    return ImageFamily.from_images(images, n)


def cmd_grow(args) -> int:
    from .substitution import DeltaRelation, enumerate_generalized_images
    from .words import parse_word
    rng = random.Random(args.seed)
    if args.family:
        fam = _load_family(argparse.Namespace(n=None, family=args.family, k=None, select="all"))
    else:
        _check_n(args.n, 3)
        fam = _toy_family(args.n, args.length, rng)
    try:
        w = parse_word(args.word, fam.n)
    except ValueError as exc:
        raise UsageError(str(exc))
    prof = _profile(args, Fraction(1, fam.n - 1) if args.eps is None else args.eps)
    try:
        rep = enumerate_generalized_images(w, fam, DeltaRelation.full(fam), prof, cap=args.cap)
    except ValueError as exc:
        raise UsageError(str(exc))
    out = rep.to_json()
    _emit(out, f"grow: |w|={len(w)} final count {rep.counts.get(len(w))}, bound_ok={rep.bound_ok}", args.output)
    return EXIT_OK if rep.bound_ok and not rep.defects else EXIT_FAIL


def cmd_fuzz(args) -> int:
    from .fastcheck import check_fast
    from .words import DEFAULT_EXEMPT, EpsProfile, find_forbidden_naive, threshold_ratio
    rng = random.Random(args.seed)
    mismatches = []
    for i in range(args.count):
        n = rng.randint(2, 10)
        w = [rng.randrange(n) for _ in range(rng.randint(0, args.max_len))]
        for eps in (Fraction(0), Fraction(1, max(n - 1, 1))):
            prof = EpsProfile(eps, DEFAULT_EXEMPT)
            fast = check_fast(w, n, prof) is None
            slow = find_forbidden_naive(w, threshold_ratio(n), prof) is None
            if fast != slow:
                mismatches.append({"case": i, "n": n, "eps": str(eps), "fast": fast, "naive": slow})
    out = {"seed": args.seed, "count": args.count, "mismatches": mismatches}
    _emit(out, f"fuzz: {args.count} words, {len(mismatches)} mismatches", args.output)
    return EXIT_OK if not mismatches else EXIT_FAIL


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dejean-forge", description="Threshold words: construct, check, verify, grow.")
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=int, default=None,
                        help="worker threads for pair checks (default: $DEJEAN_FORGE_JOBS or 1)")
    common.add_argument("--output", "-o", default=None, help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    c = sub.add_parser("check", parents=[common], help="look for a forbidden factor in a word")
    c.add_argument("--n", type=int, required=True, help="alphabet size")
    c.add_argument("--word", help="word as letters a.., digits, or separated integers")
    c.add_argument("--file", help="read the word from this file")
    c.add_argument("--eps", type=_fraction, default=None, help="slack for non-exempt repeats, e.g. 1/4 (default 0)")
    c.add_argument("--exempt", type=_int_set, default=None, help="exempt repeat lengths (default 1,2)")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("construct", parents=[common], help="build and materialize the root family")
    c.add_argument("--n", type=int, required=True, help="alphabet size, >= 5")
    c.add_argument("--k", type=int, default=None, help="root power (default: least valid multiple >= 3)")
    c.add_argument("--flavor", choices=["rbc", "nbc", "lbc"], default="rbc", help="bc-code flavor")
    c.add_argument("--self-check", action="store_true", help="require every image to end with the premise")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("verify", parents=[common], help="check family conditions")
    c.add_argument("--n", type=int, default=None, help="build the n-letter construction family")
    c.add_argument("--family", default=None, help="family JSON from 'construct' or an image-family dump")
    c.add_argument("--k", type=int, default=None, help="root power when building with --n")
    c.add_argument("--select", choices=["all", "classes"], default="all",
                   help="with --n: all images, or 3n images with one per conjugacy class first")
    c.add_argument("--conditions", default="l2,C3,uf",
                   help=f"comma list from {','.join(CONDITIONS)} (c1..c3 are the l2 parts, C3 the aggregate)")
    c.add_argument("--window", type=int, default=None, help="check only this many letters on each side of a pair joint")
    c.add_argument("--eps", type=_fraction, default=None, help="override the family epsilon")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("conjugacy", parents=[common], help="decide whether two words are rotations")
    c.add_argument("words", nargs="*", help="two words to compare directly")
    c.add_argument("--n", type=int, default=None, help="alphabet size of the construction for --shifts")
    c.add_argument("--k", type=int, default=None, help="root power for --shifts")
    c.add_argument("--shifts", type=int, nargs=2, metavar=("P", "Q"), help="indices of two construction roots")
    c.set_defaults(func=cmd_conjugacy)

    c = sub.add_parser("grow", parents=[common], help="count generalized images of a seed word")
    c.add_argument("--word", required=True, help="seed word")
    c.add_argument("--n", type=int, default=5, help="alphabet size of the random toy family")
    c.add_argument("--length", type=int, default=30, help="image length of the toy family")
    c.add_argument("--family", default=None, help="use this family JSON instead of a toy family")
    c.add_argument("--eps", type=_fraction, default=None, help="epsilon (default 1/(n-1))")
    c.add_argument("--exempt", type=_int_set, default=None, help="exempt repeat lengths (default 1,2)")
    c.add_argument("--cap", type=int, default=10 ** 6, help="stop enumerating past this many images")
    c.add_argument("--seed", type=int, default=0, help="seed for the toy family")
    c.set_defaults(func=cmd_grow)

    c = sub.add_parser("fuzz", parents=[common], help="compare the fast checker with the naive one")
    c.add_argument("--count", type=int, default=200, help="number of random words")
    c.add_argument("--max-len", type=int, default=200, help="maximum word length")
    c.add_argument("--seed", type=int, default=0, help="random seed")
    c.set_defaults(func=cmd_fuzz)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is not None:
        if args.jobs < 1:
            sys.stderr.write("dejean-forge: error: --jobs must be >= 1\n")
            return EXIT_USAGE
        os.environ["DEJEAN_FORGE_JOBS"] = str(args.jobs)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"dejean-forge {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
