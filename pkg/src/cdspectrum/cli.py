"""Command-line front end.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 a
property failed, 2 bad input, 3 a cap, budget or k_max was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import conditions as cond
from . import relations as rel
from .algebra import direct_product, load_algebra, nonindexed_product, serialize_algebra
from .errors import AlgebraError, BudgetExceeded, CapExceeded, ParseError
from .free import DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_WIDTH, DEFAULT_MAX_WORK, FreeAlgebra
from .verify import THEOREMS, PreconditionError, run_theorem

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EXCEEDED = 0, 1, 2, 3

SPECTRUM_VARIANTS = ("j", "jconv", "jr", "jrconv", "day", "tschantz")
TERM_SCHEMES = ("jonsson", "directed", "gumm", "pj")


class InputError(Exception):
    pass


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _positive(text):
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _add_caps(p):
    g = p.add_argument_group("caps")
    g.add_argument("--max-elements", type=_positive, default=DEFAULT_MAX_ELEMENTS)
    g.add_argument("--max-width", type=_positive, default=DEFAULT_MAX_WIDTH)
    g.add_argument("--max-work", type=_positive, default=DEFAULT_MAX_WORK)


def _add_common(p, files="+"):
    p.add_argument("--format", choices=("json", "text"), default="json")
    if files:
        p.add_argument("algebras", nargs=files, metavar="ALG", help=".alg file")


def build_parser():
    parser = _Parser(prog="cdspectrum", description="Congruence distributivity spectra of finite algebras.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("spectrum", help="J, J-converse, relational, Day and Tschantz levels")
    p.add_argument("--variant", choices=SPECTRUM_VARIANTS, default="j")
    p.add_argument("--m", type=_nonneg, default=1)
    p.add_argument("--k-max", type=_nonneg, default=6)
    p.add_argument("--budget", type=_nonneg, default=None,
                   help="generating pairs per relation (relational variants)")
    p.add_argument("--alpha-kind", choices=("congruence", "tolerance"), default="congruence")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    _add_caps(p)
    _add_common(p)

    p = sub.add_parser("terms", help="shortest Jonsson, directed, Gumm or pj terms")
    p.add_argument("--scheme", choices=TERM_SCHEMES, default="jonsson")
    p.add_argument("--max-len", type=_nonneg, default=8)
    _add_caps(p)
    _add_common(p)

    p = sub.add_parser("free-algebra", help="size of a free algebra")
    p.add_argument("--n", type=_positive, default=2, help="number of generators")
    p.add_argument("--provenance", action="store_true", help="list parent op and children of each element")
    _add_caps(p)
    _add_common(p)

    p = sub.add_parser("congruences", help="congruence lattice of one algebra")
    _add_common(p, files=1)

    p = sub.add_parser("check", help="decide a congruence inclusion for the variety")
    p.add_argument("--identity", required=True)
    _add_caps(p)
    _add_common(p)

    p = sub.add_parser("product", help="direct or non-indexed product of two algebras")
    p.add_argument("--kind", choices=("direct", "nonindexed"), default="direct")
    p.add_argument("--rename", default=None, help="rename map for the second factor, e.g. f=g,h=k")
    p.add_argument("--name", default=None)
    _add_common(p, files=2)

    p = sub.add_parser("verify", help="theorem checks; without files the shipped corpus is used")
    p.add_argument("theorem", choices=THEOREMS + ("all",))
    _add_caps(p)
    _add_common(p, files="*")
    return parser


# ---------------------------------------------------------------- commands

def _caps(args):
    return {"max_elements": args.max_elements, "max_width": args.max_width, "max_work": args.max_work}


def _load(paths):
    out = []
    for path in paths:
        try:
            out.append(load_algebra(path))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    return out


def _single(bases, what):
    if len(bases) != 1:
        raise InputError(f"{what} needs exactly one algebra file")
    return bases[0]


def cmd_spectrum(args, bases):
    caps = _caps(args)
    v = args.variant
    if v in ("j", "jconv"):
        res = cond.jonsson_level(bases, args.m, args.k_max, "standard" if v == "j" else "converse", caps)
    elif v in ("jr", "jrconv"):
        A = _single(bases, "a relational level")
        res = cond.relational_level(A, args.m, args.k_max, args.alpha_kind, args.budget,
                                    "standard" if v == "jr" else "converse")
        res.details["alpha_kind"] = args.alpha_kind
    elif v == "day":
        if args.m < 1:
            raise InputError("day needs --m >= 1")
        res = cond.day_function(bases, args.m, args.k_max, caps)
    else:
        if args.m < 2:
            raise InputError("tschantz needs --m >= 2")
        res = cond.tschantz_function(bases, args.m, args.k_max, caps)
    out = {"command": "spectrum"}
    out.update(res.to_dict(timings=args.timings))
    text = f"{res.variant}({res.m}) = {out['value']}  [{', '.join(res.algebras)}]"
    if res.terms:
        text += "\n" + "\n".join(f"  {t}" for t in res.terms)
    return out, text, EXIT_EXCEEDED if res.exceeded else EXIT_OK


def cmd_terms(args, bases):
    if args.max_len < 2:
        raise InputError("--max-len must be at least 2")
    chain = cond.find_terms(bases, args.scheme, max_len=args.max_len, caps=_caps(args))
    out = {"command": "terms", "caps": _caps(args)}
    out.update(chain.to_dict())
    if chain.found:
        return out, "\n".join(str(t) for t in chain.terms), EXIT_OK
    if chain.scheme == "pj":
        # the pj search is complete: no such pair exists
        return out, "no pj terms", EXIT_FAIL
    return out, f"no {chain.scheme} chain of length <= {args.max_len}", EXIT_EXCEEDED


def cmd_free(args, bases):
    F = FreeAlgebra(bases, args.n, **_caps(args)).build()
    out = {"command": "free-algebra", "algebras": [A.name for A in bases], "n": args.n,
           "size": len(F), "caps": _caps(args)}
    lines = [str(len(F))]
    if args.provenance:
        prov = []
        for e in range(len(F)):
            p = F.provenance(e)
            if isinstance(p, int):
                prov.append({"index": e, "op": None, "generator": p, "children": []})
                lines.append(f"{e} x{p}")
            else:
                prov.append({"index": e, "op": p[0], "children": [int(c) for c in p[1]]})
                lines.append(f"{e} {p[0]} {' '.join(str(c) for c in p[1])}".rstrip())
        out["provenance"] = prov
    return out, "\n".join(lines), EXIT_OK


def cmd_congruences(args, bases):
    A = bases[0]
    congs = rel.all_congruences(A)
    out = {"command": "congruences", "algebra": A.name, "size": A.size, "count": len(congs),
           "congruences": [c.blocks() for c in congs]}
    return out, "\n".join(str(c) for c in congs), EXIT_OK


def cmd_check(args, bases):
    res = cond.check_identity_generic(bases, args.identity, caps=_caps(args))
    out = {"command": "check", "caps": _caps(args)}
    out.update(res.to_dict())
    if res.holds:
        return out, f"holds: {res.scheme}", EXIT_OK
    out["counterexample"] = {
        "free_generators": res.scheme.m + 1,
        "pair": [0, res.scheme.m],
        "elements": res.prefix,
    }
    return out, f"fails in F({res.scheme.m + 1}): {res.scheme}", EXIT_FAIL


def _rename_map(text):
    if not text:
        return None
    out = {}
    for item in text.split(","):
        if item.count("=") != 1 or not all(item.split("=")):
            raise InputError(f"bad rename entry {item!r}; expected old=new")
        old, new = item.split("=")
        out[old.strip()] = new.strip()
    return out


def cmd_product(args, bases):
    A, B = bases
    if args.kind == "direct":
        P = direct_product(A, B, name=args.name)
    else:
        P = nonindexed_product(A, B, rename=_rename_map(args.rename), name=args.name)
    out = {"command": "product", "kind": args.kind, "factors": [A.name, B.name],
           "name": P.name, "size": P.size,
           "ops": [{"symbol": s, "arity": a, "table": P.tables[s].tolist()} for s, a in P.signature.ops]}
    return out, serialize_algebra(P).rstrip("\n"), EXIT_OK


def _summary(reports):
    rows = [("theorem", "inputs", "status", "level")]
    for r in reports:
        inputs = r.inputs.get("algebras") or r.inputs.get("algebra") or ""
        if isinstance(inputs, list):
            inputs = ",".join(inputs)
        extra = {k: v for k, v in r.inputs.items() if k in ("m", "ell", "alpha_kind")}
        if extra:
            inputs += " " + " ".join(f"{k}={v}" for k, v in sorted(extra.items()))
        rows.append((r.theorem, inputs, r.status, r.level))
    widths = [max(len(str(row[i])) for row in rows) for i in range(4)]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)


def cmd_verify(args, bases):
    reports = run_theorem(args.theorem, bases or None, caps=_caps(args))
    out = {"command": "verify", "theorem": args.theorem, "caps": _caps(args),
           "reports": [r.to_dict() for r in reports]}
    states = {r.status for r in reports}
    code = EXIT_FAIL if "fail" in states else EXIT_EXCEEDED if "cap-exceeded" in states else EXIT_OK
    return out, _summary(reports), code


COMMANDS = {
    "spectrum": cmd_spectrum,
    "terms": cmd_terms,
    "free-algebra": cmd_free,
    "congruences": cmd_congruences,
    "check": cmd_check,
    "product": cmd_product,
    "verify": cmd_verify,
}


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args, extra = build_parser().parse_known_args(argv)
        # argparse binds an empty "*" positional next to the theorem id, so
        # files given after options arrive here
        if extra and args.command == "verify" and not any(e.startswith("-") for e in extra):
            args.algebras = list(args.algebras) + extra
        elif extra:
            raise InputError(f"unrecognized arguments: {' '.join(extra)}")
        if args.command is None:
            raise InputError(f"missing subcommand; expected one of {', '.join(COMMANDS)}")
        bases = _load(getattr(args, "algebras", []) or [])
        out, text, code = COMMANDS[args.command](args, bases)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (CapExceeded, BudgetExceeded) as exc:
        print(f"exceeded: {exc}", file=stderr)
        return EXIT_EXCEEDED
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=stderr)
        return EXIT_INPUT
    except (ParseError, AlgebraError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.format == "json":
        print(dumps(out), file=stdout)
        if args.command == "verify":
            print(text, file=stderr)
    else:
        print(text, file=stdout)
    if code == EXIT_EXCEEDED:
        print("exceeded: no answer within the given limits", file=stderr)
    elif code == EXIT_FAIL:
        print("property failed", file=stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
