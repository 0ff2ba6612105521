"""Batch command-line front end: construction, enumeration, verification, export.

Exit codes are a stable contract for CI: 0 = pass, 1 = verification failure,
2 = usage or input error (including an exceeded enumeration budget).
Identical seed and configuration produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from itertools import product

import numpy as np

from . import oracle, phases, sigma_algebra, su2
from .errors import BudgetExceededError, DomainError
from .matrices import BlockCyclicMatrix, sigma
from .phases import Q12

_DEF_SEED = 42
_DEF_TOL = 1e-12


# ---------------------------------------------------------------------------
# cayley


def _cayley_rows(family: str, n: int, q: int):
    """Yield (operand labels, result fields) in canonical enumeration order."""
    if family == "pauli":
        labels = phases.pauli_labels(q)
        for a, b in product(labels, repeat=2):
            res = phases.pauli_mul(a, b)
            yield (a, b), (str(res.j), "", str(res.r))
    elif family == "full":
        labels = phases.full_labels(n, q)
        for ops in product(labels, repeat=n):
            res = phases.full_nary_mul(list(ops), n)
            yield ops, (str(res.j), "", str(res.r))
    elif family == "elementary":
        labels = phases.elementary_labels(n, q)
        for ops in product(labels, repeat=n):
            res = phases.elementary_nary_mul(list(ops), n)
            if isinstance(res, phases.ZeroLabel):
                yield ops, ("Z", "", "")
            else:
                yield ops, (str(res.j), str(res.k), str(res.r))
    elif family == "het":
        labels = phases.het_phased_labels(n, q)
        for ops in product(labels, repeat=n):
            res = phases.het_nary_mul(list(ops), n)
            js = ".".join(str(j) for j in res.js)
            rs = ".".join(str(r) for r in res.rs)
            yield ops, (js, "", rs)
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown family {family!r}")


def _cayley_row_count(family: str, n: int, q: int) -> int:
    if family == "pauli":
        return (4 * q) ** 2
    if family == "full":
        return (4 * q) ** n
    if family == "elementary":
        return (4 * q * (n - 1) + 1) ** n
    return phases.het_order_enumerated(n, q) ** n


def cmd_cayley(args) -> int:
    rows = _cayley_row_count(args.family, args.n, args.q)
    if rows > args.budget:
        print(
            f"error: {rows} table rows exceed the budget of {args.budget}; "
            f"raise --budget to proceed",
            file=sys.stderr,
        )
        return 2
    n_ops = 2 if args.family == "pauli" else args.n
    if args.format == "csv":
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"op{i + 1}" for i in range(n_ops)]
                       + ["result_j", "result_k", "result_r"])
            for ops, res in _cayley_rows(args.family, args.n, args.q):
                w.writerow([o.token() for o in ops] + list(res))
    else:  # dense-json
        entries = []
        for ops, res in _cayley_rows(args.family, args.n, args.q):
            prod_mat = ops[0].dense()
            for o in ops[1:]:
                prod_mat = prod_mat @ o.dense()
            entries.append({
                "operands": [o.token() for o in ops],
                "result": list(res),
                "dense": [[[z.real, z.imag] for z in row] for row in prod_mat.tolist()],
            })
        payload = {"family": args.family, "n": args.n, "q": args.q, "entries": entries}
        with open(args.out, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    print(f"wrote {rows} rows to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    kwargs = dict(seed=args.seed, tol=args.tol, mode=args.mode)
    if args.family == "pauli":
        report = phases.build_pauli_group(
            args.q, closure_budget=args.budget, **kwargs)
    elif args.family == "elementary":
        report = phases.build_elementary_semigroup(
            args.n, args.q, closure_budget=args.budget, **kwargs)
    elif args.family == "full":
        report = phases.build_full_group(
            args.n, args.q, closure_budget=args.budget, **kwargs)
    else:
        report = phases.build_het_group(args.n, args.q, cap=args.budget, **kwargs)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.junit:
        summary = oracle.SweepSummary(
            family=report.family, n=report.n, q=report.q,
            tuple_len=2 if report.family == "pauli" else report.n,
            kind="structure", total=report.closure_checked,
            checked=report.closure_checked, passed=report.passed,
            max_abs_deviation=report.closure_max_deviation,
            witness=None, exhaustive=report.closure_exhaustive,
            tolerance=report.tolerance, seed=report.seed,
        )
        with open(args.junit, "w") as fh:
            fh.write(oracle.summaries_to_junit([summary]))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# param-mul


def _random_tuple(rng: np.random.Generator, n: int) -> list[su2.PolyadicSU2Element]:
    return [su2.PolyadicSU2Element.random(rng, n) for _ in range(n)]


def _param_mul_one(elems: list[su2.PolyadicSU2Element], n: int):
    if n == 2:
        p, q = elems[0].params[0], elems[1].params[0]
        result = su2.binary_param_mul(p, q)
        dense = su2.binary_su2_matrix(p) @ su2.binary_su2_matrix(q)
        dev = float(np.abs(dense - su2.binary_su2_matrix(result)).max())
        out = su2.PolyadicSU2Element(2, (result,))
    elif n == 3:
        pairs = [tuple(e.params) for e in elems]
        result = su2.ternary_param_mul(*pairs)
        out = su2.PolyadicSU2Element(3, result)
        dense = elems[0].matrix().dense()
        for e in elems[1:]:
            dense = dense @ e.matrix().dense()
        dev = float(np.abs(dense - out.matrix().dense()).max())
    else:
        raise DomainError(f"closed-form parameter products exist for n=2 and n=3, got {n}")
    return out, dev


def cmd_param_mul(args) -> int:
    n = args.n
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        tuples = [_random_tuple(rng, n) for _ in range(args.random)]
    else:
        with open(args.infile) as fh:
            data = json.load(fh)
        if data.get("arity") != n:
            raise DomainError(f"input arity {data.get('arity')} != --n {n}")
        tuples = [
            [su2.PolyadicSU2Element.from_dict(e) for e in tup]
            for tup in data["tuples"]
        ]
        for tup in tuples:
            if len(tup) != n:
                raise DomainError(f"each tuple must list {n} elements")
    results = []
    max_dev = 0.0
    for tup in tuples:
        out, dev = _param_mul_one(tup, n)
        max_dev = max(max_dev, dev)
        results.append({"element": out.to_dict(), "oracle_deviation": dev})
    payload = {
        "arity": n,
        "count": len(results),
        "max_deviation": max_dev,
        "results": results,
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if max_dev <= args.tol else 1


# ---------------------------------------------------------------------------
# trace


def _relaxed_element(data: dict) -> BlockCyclicMatrix:
    """Cyclic block matrix from {"arity", "blocks"} without the unit-norm
    check, so identity-coefficient elements are accepted."""
    arity = int(data["arity"])
    blocks = []
    for b in data["blocks"]:
        x0 = float(b["x0"])
        x1, x2, x3 = (float(v) for v in b["x"])
        blocks.append(
            x0 * sigma(0) + 1j * (x1 * sigma(1) + x2 * sigma(2) + x3 * sigma(3))
        )
    return BlockCyclicMatrix(arity, tuple(blocks))


def cmd_trace(args) -> int:
    with open(args.infile) as fh:
        data = json.load(fh)
    mat = _relaxed_element(data)
    ordinary = complex(np.trace(mat.dense()))
    poly = su2.polyadic_trace(mat)
    payload = {
        "arity": mat.arity,
        "ordinary_trace": [ordinary.real, ordinary.imag],
        "polyadic_trace": [poly.real, poly.imag],
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    print(f"ordinary trace:  {ordinary.real:+.12g}{ordinary.imag:+.12g}j")
    print(f"polyadic trace:  {poly.real:+.12g}{poly.imag:+.12g}j")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


# ---------------------------------------------------------------------------
# rules


def cmd_rules(args) -> int:
    count = sigma_algebra.write_rule_csv(args.out, args.kind)
    print(f"wrote {count} rows to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysigma",
        description="Cyclic-shift Sigma matrix algebra: Cayley tables, "
                    "structure verification, parameter products, traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_n=True):
        if with_n:
            p.add_argument("--n", type=int, default=3, help="arity (default 3)")
        p.add_argument("--q", type=int, default=4, choices=Q12,
                       help="phase modulus (default 4)")

    p = sub.add_parser("cayley", help="export a complete multiplication table")
    p.add_argument("--family", required=True,
                   choices=("pauli", "elementary", "full", "het"))
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "dense-json"), default="csv")
    p.add_argument("--budget", type=int, default=1_000_000,
                   help="maximum table rows (default 1e6)")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("verify", help="verify closure/associativity/querelements")
    p.add_argument("--family", required=True,
                   choices=("pauli", "elementary", "full", "het"))
    common(p)
    p.add_argument("--mode", choices=("auto", "exhaustive", "sample"), default="auto")
    p.add_argument("--seed", type=int, default=_DEF_SEED)
    p.add_argument("--tol", type=float, default=_DEF_TOL)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET,
                   help="product budget for exhaustive sweeps")
    p.add_argument("--out", help="write the structure report JSON here")
    p.add_argument("--junit", help="also write a JUnit XML summary here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("param-mul", help="closed-form parameter products with "
                                         "oracle deviations")
    p.add_argument("--n", type=int, choices=(2, 3), default=3)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile", help="JSON file of element tuples")
    src.add_argument("--random", type=int, help="generate this many random tuples")
    p.add_argument("--seed", type=int, default=_DEF_SEED)
    p.add_argument("--tol", type=float, default=_DEF_TOL)
    p.add_argument("--out", help="write results JSON here (default stdout)")
    p.set_defaults(func=cmd_param_mul)

    p = sub.add_parser("trace", help="ordinary and polyadic trace of an element")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("rules", help="dump the ternary Sigma multiplication rules")
    p.add_argument("--kind", choices=("elementary", "full"), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rules)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: malformed input ({exc})", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
