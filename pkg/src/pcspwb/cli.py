"""Command-line front end.

Exit codes: 0 yes / found, 1 no / none, 2 usage or parse error, 3 resource
limit. ``PCSPWB_LIMITS`` (e.g. ``max_cells=100000,max_nodes=5000``)
overrides the resource caps.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
from fractions import Fraction

from . import formats, pcsp13, polymorphisms, ppcon, proof_lab
from .core import BUILTIN_NAMES, Instance, Limits, RelationalStructure, builtin_template
from .errors import LimitExceeded, ParseError, ResourceLimitExceeded, UnknownName, WorkbenchError
from .hom_solver import SolverConfig, find_homomorphism

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_template(spec: str) -> RelationalStructure:
    """A builtin template name or a structure file path."""
    try:
        return builtin_template(spec)
    except UnknownName:
        if os.path.exists(spec):
            return formats.parse_structure(_read(spec))
        raise UnknownName(f"{spec!r} is neither a builtin template ({', '.join(BUILTIN_NAMES)}) "
                          "nor a readable structure file") from None


def _operation(args, p: int) -> proof_lab.BlackBoxOperation:
    if args.table:
        table = polymorphisms.OperationTable.from_text(_read(args.table))
        if table.arity != p:
            raise ValueError(f"table arity {table.arity} does not match p = {p}")
        return proof_lab.BlackBoxOperation.from_table(table)
    if args.op == "parity":
        return proof_lab.BlackBoxOperation.parity(p)
    if args.op == "threshold":
        return proof_lab.BlackBoxOperation.threshold(p, Fraction(args.fraction))
    if args.op == "projection":
        return proof_lab.BlackBoxOperation.projection(p)
    raise ValueError(f"unknown operation {args.op!r}")


def _print_relation(rel) -> None:
    for t in sorted(rel):
        print(" ".join(map(str, t)))


# -- commands -----------------------------------------------------------------

def cmd_solve_csp(args) -> int:
    A = load_template(args.template)
    X = formats.parse_instance(_read(args.instance), A.signature)
    if isinstance(X, pcsp13.TripleInstance):
        X = X.to_instance()
    cfg = SolverConfig(seed=args.seed)
    h = find_homomorphism(X, A, cfg)
    if h is None:
        print("no")
        return EXIT_NO
    print("yes")
    print(formats.format_assignment(h), end="")
    return EXIT_YES


def cmd_solve_pcsp(args) -> int:
    X = formats.parse_instance(_read(args.instance))
    if isinstance(X, Instance):
        if set(X.signature) != {"R"} or X.signature["R"] != 3:
            raise ValueError("instance must consist of ternary R constraints")
        X = pcsp13.TripleInstance(X.variables, [s for _, s in X.constraints])
    ans = pcsp13.solve_pcsp(X, args.method)
    print(ans.label)
    if ans.verdict:
        assert pcsp13.verify_assignment(X, ans.assignment, "nae")
        print(formats.format_assignment(ans.assignment), end="")
        return EXIT_YES
    return EXIT_NO


def cmd_gen_planted(args) -> int:
    X, plant = pcsp13.gen_planted(args.n, args.m, args.seed)
    print(formats.format_instance(X, f"planted-n{args.n}-m{args.m}-s{args.seed}"), end="")
    if args.plant:
        with open(args.plant, "w", encoding="utf-8") as fh:
            fh.write(formats.format_assignment(plant))
    return EXIT_YES


def cmd_poly_find(args) -> int:
    A = load_template(args.template)
    B = load_template(args.target) if args.target else A
    s = polymorphisms.find_polymorphism(A, B, args.arity, "cyclic" if args.cyclic else "none")
    if s is None:
        print("none")
        return EXIT_NO
    print(s.to_text(), end="")
    return EXIT_YES


def cmd_poly_check(args) -> int:
    A = load_template(args.template)
    B = load_template(args.target) if args.target else A
    s = polymorphisms.OperationTable.from_text(_read(args.table))
    ok = polymorphisms.is_pcsp_polymorphism(s, A, B)
    print(f"polymorphism = {'yes' if ok else 'no'}")
    if s.arity >= 2:
        cyc = polymorphisms.is_cyclic(s)
        print(f"cyclic = {'yes' if cyc else 'no'}")
        if args.cyclic:
            ok = ok and cyc
    print(f"block_symmetric_on_pairs = {'yes' if polymorphisms.check_block_symmetric_on_pairs(s) else 'no'}")
    return EXIT_YES if ok else EXIT_NO


def cmd_poly_survey(args) -> int:
    A = load_template(args.template)
    B = load_template(args.target) if args.target else A
    found = False
    for p, s in polymorphisms.cyclic_survey(A, B, args.max_prime).items():
        print(f"arity {p} = {'found' if s is not None else 'none'}")
        found = found or s is not None
    return EXIT_YES if found else EXIT_NO


def cmd_poly_siggers(args) -> int:
    C = load_template(args.template)
    w = polymorphisms.pseudo_siggers_search(C)
    if w is None:
        print("none")
        return EXIT_NO
    print("alpha = " + " ".join(map(str, w.alpha)))
    print("beta = " + " ".join(map(str, w.beta)))
    print(w.s.to_text(), end="")
    return EXIT_YES


def cmd_pp_eval(args) -> int:
    A = load_template(args.template)
    phi = ppcon.PpFormula.from_text(_read(args.formula))
    rel = ppcon.evaluate_pp(phi, A)
    print(f"relation {len(phi.free)} {len(rel)}")
    _print_relation(rel)
    return EXIT_YES if rel else EXIT_NO


def cmd_pp_power(args) -> int:
    A = load_template(args.template)
    B = load_template(args.target) if args.target else A
    spec = ppcon.PpPowerSpec.from_text(_read(args.spec))
    A2, B2 = ppcon.pp_power(spec, A, B)
    print(formats.format_structure(A2, "power-A"), end="")
    print(formats.format_structure(B2, "power-B"), end="")
    return EXIT_YES


def cmd_pp_relax(args) -> int:
    A2, B2, A, B = (load_template(t) for t in (args.a2, args.b2, args.a, args.b))
    w = ppcon.check_relaxation(A2, B2, A, B)
    if w is None:
        print("none")
        return EXIT_NO
    print("f = " + " ".join(str(w.f[a]) for a in A2.domain))
    print("g = " + " ".join(str(w.g[b]) for b in B.domain))
    return EXIT_YES


def cmd_pp_gadget(args) -> int:
    spec = ppcon.PpPowerSpec.from_text(_read(args.spec))
    X = formats.parse_instance(_read(args.instance), spec.signature)
    if isinstance(X, pcsp13.TripleInstance):
        X = X.to_instance()
    print(formats.format_instance(ppcon.gadget_reduce(X, spec), "gadget"), end="")
    return EXIT_YES


def cmd_prooflab_t(args) -> int:
    X = proof_lab.parse_matrix(_read(args.matrix))
    s = _operation(args, X.shape[0])
    print(f"t = {proof_lab.eval_t(s, X)}")
    return EXIT_YES


def cmd_prooflab_area(args) -> int:
    X = proof_lab.parse_matrix(_read(args.matrix))
    lam = proof_lab.area(X)
    third = Fraction(1, 3)
    side = "below" if lam < third else "above" if lam > third else "equal"
    print(f"area = {lam}")
    print(f"side = {side}")
    return EXIT_YES


def cmd_prooflab_cover(args) -> int:
    Ms = [proof_lab.parse_matrix(_read(f)) for f in args.matrices]
    ok = proof_lab.is_cover(*Ms)
    print(f"cover = {'yes' if ok else 'no'}")
    return EXIT_YES if ok else EXIT_NO


def cmd_prooflab_tame(args) -> int:
    X = proof_lab.parse_matrix(_read(args.matrix))
    s = _operation(args, X.shape[0])
    v = proof_lab.is_tame(X, s)
    print(f"area = {v.area}")
    print(f"side = {v.side}")
    print(f"tame = {'yes' if v.tame else 'no'}")
    return EXIT_YES if v.tame else EXIT_NO


def cmd_prooflab_refute(args) -> int:
    s = _operation(args, args.p)
    report = proof_lab.refute_cyclic(s, args.c_size, allow_small_p=args.allow_small_p)
    print(report.to_text(), end="")
    return EXIT_YES if all(report.checks.values()) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcspwb", description="Constraint satisfaction workbench.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve-csp", help="find a homomorphism instance -> template")
    p.add_argument("instance")
    p.add_argument("--template", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve_csp)

    p = sub.add_parser("solve-pcsp13nae", help="PCSP(1-in-3, NAE) via x+y+z=1")
    p.add_argument("instance")
    p.add_argument("--method", choices=["z", "q"], default="z")
    p.set_defaults(func=cmd_solve_pcsp)

    gen = sub.add_parser("gen").add_subparsers(dest="what", parser_class=_Parser)
    gen.required = True
    p = gen.add_parser("planted", help="random instance with a planted 1-in-3 assignment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plant", help="also write the planted assignment to this file")
    p.set_defaults(func=cmd_gen_planted)

    poly = sub.add_parser("poly").add_subparsers(dest="what", parser_class=_Parser)
    poly.required = True
    p = poly.add_parser("find")
    p.add_argument("--template", required=True)
    p.add_argument("--target")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--cyclic", action="store_true")
    p.set_defaults(func=cmd_poly_find)
    p = poly.add_parser("check")
    p.add_argument("--template", required=True)
    p.add_argument("--target")
    p.add_argument("--table", required=True)
    p.add_argument("--cyclic", action="store_true")
    p.set_defaults(func=cmd_poly_check)
    p = poly.add_parser("survey")
    p.add_argument("--template", required=True)
    p.add_argument("--target")
    p.add_argument("--max-prime", type=int, default=5)
    p.set_defaults(func=cmd_poly_survey)
    p = poly.add_parser("pseudo-siggers")
    p.add_argument("--template", required=True)
    p.set_defaults(func=cmd_poly_siggers)

    pp = sub.add_parser("pp").add_subparsers(dest="what", parser_class=_Parser)
    pp.required = True
    p = pp.add_parser("eval")
    p.add_argument("formula")
    p.add_argument("--template", required=True)
    p.set_defaults(func=cmd_pp_eval)
    p = pp.add_parser("power")
    p.add_argument("spec")
    p.add_argument("--template", required=True)
    p.add_argument("--target")
    p.set_defaults(func=cmd_pp_power)
    p = pp.add_parser("relax", help="is (A2, B2) a homomorphic relaxation of (A, B)?")
    for name in ("a2", "b2", "a", "b"):
        p.add_argument(name)
    p.set_defaults(func=cmd_pp_relax)
    p = pp.add_parser("gadget")
    p.add_argument("instance")
    p.add_argument("spec")
    p.set_defaults(func=cmd_pp_gadget)

    lab = sub.add_parser("prooflab").add_subparsers(dest="what", parser_class=_Parser)
    lab.required = True

    def op_args(q):
        q.add_argument("--op", choices=["parity", "threshold", "projection"], default="parity")
        q.add_argument("--fraction", default="1/2", help="cut for --op threshold")
        q.add_argument("--table", help="operation table file instead of --op")

    p = lab.add_parser("t")
    p.add_argument("--matrix", required=True)
    op_args(p)
    p.set_defaults(func=cmd_prooflab_t)
    p = lab.add_parser("area")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_prooflab_area)
    p = lab.add_parser("cover")
    p.add_argument("matrices", nargs=3)
    p.set_defaults(func=cmd_prooflab_cover)
    p = lab.add_parser("tame")
    p.add_argument("--matrix", required=True)
    op_args(p)
    p.set_defaults(func=cmd_prooflab_tame)
    p = lab.add_parser("refute")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--c-size", type=int, required=True)
    p.add_argument("--allow-small-p", action="store_true")
    op_args(p)
    p.set_defaults(func=cmd_prooflab_refute)
    return parser


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, stdout_text)``."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        try:
            Limits.from_env()
            args = build_parser().parse_args(argv)
            code = args.func(args)
        except SystemExit as exc:
            code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        except _UsageError as exc:
            print(f"error: {exc}")
            code = EXIT_USAGE
        except (ResourceLimitExceeded, LimitExceeded) as exc:
            print(f"resource limit: {exc}")
            code = EXIT_LIMIT
        except (ParseError, UnknownName, WorkbenchError, ValueError, OSError) as exc:
            print(f"error: {exc}")
            code = EXIT_USAGE
    return code, out.getvalue()


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
