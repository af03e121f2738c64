"""Command-line front end.

Exit codes: 0 success or equivalent, 1 invalid input, 2 decided negative,
3 numerical or internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import coxeter, fixtures, pencil, projpair
from .errors import CapabilityError, InputError, NumericalError
from .linalg import matrix_to_dict
from .pencil import MatrixTuple
from .poly import MultiPoly, canonical_equal, max_coeff_diff
from .projpair import ProjectionPair

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_charpoly(args):
    t = MatrixTuple.from_dict(_load(args.tuple))
    if args.method == "ps":
        _emit(pencil.charpoly_ps(t).to_dict(), args.out)
        return EXIT_OK
    q = pencil.charpoly_det(t)
    out = q.to_dict()
    if args.method == "both":
        if not canonical_equal(q, pencil.charpoly_ps(t), args.tol):
            raise NumericalError("determinant and trace-power algorithms disagree")
        out["agreement"] = True
    _emit(out, args.out)
    return EXIT_OK


def _factor_dict(f):
    return {
        "poly": f.poly.to_dict(),
        "multiplicity": f.multiplicity,
        "kind": f.kind,
        "irreducible": f.irreducible,
        "x": f.x,
    }


def cmd_projpair_analyze(args):
    pp = ProjectionPair.from_dict(_load(args.pair))
    inv = projpair.halmos_invariants(pp)
    closed = projpair.cpp_polynomial(inv)
    direct = pencil.charpoly_det(pp.as_tuple())
    out = {
        "invariants": dict(inv.to_dict(), sigma_IH=list(inv.sigma_IH)),
        "factors": [_factor_dict(f) for f in projpair.factorization(inv)],
        "generic": inv.corners() == (0, 0, 0, 0),
        "reconstruction_residual": max_coeff_diff(closed, direct),
        "near_degenerate": inv.near_degenerate,
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_projpair_equiv(args):
    a = ProjectionPair.from_dict(_load(args.pair_a))
    b = ProjectionPair.from_dict(_load(args.pair_b))
    verdict = projpair.equivalent_pairs(a, b)
    if verdict.equivalent and args.witness_out:
        _emit(matrix_to_dict(verdict.witness), args.witness_out)
    _emit(verdict.to_dict(), args.out)
    return EXIT_OK if verdict.equivalent else EXIT_NEGATIVE


def cmd_coxeter(args):
    data = _load(args.file)
    if args.action == "recover":
        _emit(coxeter.recover_coxeter(MultiPoly.from_dict(data)).to_dict(), args.out)
        return EXIT_OK
    cm = coxeter.CoxeterMatrix.from_dict(data)
    if args.action == "tits":
        out = coxeter.tits_representation(cm).as_tuple().to_dict()
    elif args.action == "charpoly":
        out = coxeter.coxeter_charpoly(cm).to_dict()
    else:
        out = coxeter.hyperplane_projections(cm).to_dict()
    _emit(out, args.out)
    return EXIT_OK


def cmd_gen(args):
    if args.k < 1 or args.n < 1:
        raise InputError("--k and --n must be at least 1")
    rng = fixtures.make_rng(args.seed)
    if args.kind == "random-projection-pair":
        out = fixtures.random_projection_pair(rng, args.k).to_dict()
    elif args.kind == "random-tuple":
        out = fixtures.random_tuple(rng, args.n, args.k).to_dict()
    else:
        if not args.input:
            raise InputError("gen conjugate needs --input")
        data = _load(args.input)
        if "p" in data:
            pp = ProjectionPair.from_dict(data)
            out = pp.conjugate(fixtures.random_unitary(rng, pp.k)).to_dict()
        else:
            t = MatrixTuple.from_dict(data)
            out = t.conjugate(fixtures.random_unitary(rng, t.k)).to_dict()
    _emit(out, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument(
        "--tol", type=_positive_float, default=1e-8,
        help="relative coefficient tolerance for agreement checks (default: 1e-8)",
    )

    parser = _Parser(prog="projchar", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("charpoly", parents=[common], help="characteristic polynomial of a tuple file")
    p.add_argument("tuple")
    p.add_argument("--method", choices=["det", "ps", "both"], default="det")
    p.set_defaults(func=cmd_charpoly)

    pp = sub.add_parser("projpair", help="projection pair tools")
    ppsub = pp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = ppsub.add_parser("analyze", parents=[common], help="invariants and factorization of a pair file")
    a.add_argument("pair")
    a.set_defaults(func=cmd_projpair_analyze)
    e = ppsub.add_parser("equiv", parents=[common], help="decide unitary equivalence (exit 0 yes, 2 no)")
    e.add_argument("pair_a")
    e.add_argument("pair_b")
    e.add_argument("--witness-out", help="write the witness unitary here when equivalent")
    e.set_defaults(func=cmd_projpair_equiv)

    c = sub.add_parser("coxeter", parents=[common], help="Coxeter matrix tools")
    c.add_argument("action", choices=["tits", "charpoly", "recover", "hyperplanes"])
    c.add_argument("file")
    c.set_defaults(func=cmd_coxeter)

    g = sub.add_parser("gen", parents=[common], help="deterministic random fixtures (PCG64)")
    g.add_argument("kind", choices=["random-projection-pair", "random-tuple", "conjugate"])
    g.add_argument("--k", type=int, default=4, help="matrix size (default: 4)")
    g.add_argument("--n", type=int, default=2, help="tuple length for random-tuple (default: 2)")
    g.add_argument("--seed", type=int, default=0, help="64-bit seed (default: 0)")
    g.add_argument("--input", help="pair or tuple file to conjugate")
    g.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
