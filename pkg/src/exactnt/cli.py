"""Command-line front end.

Every structured input is a JSON document (a file path, or ``-`` for
stdin) whose numbers are decimal strings; rationals are written ``"p/q"``.
Results go to stdout as a JSON envelope::

    {"command": ..., "version": "1", "status": "ok" | "error",
     "result": ..., "diagnostics": [...]}

Exit codes: 0 success, 1 malformed input, 2 domain error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import (abgroup, coprime_basis, exact_arith, finite_ring, frac_ideal, lattice,
               max_order, order_ring, symbols, unit_kernel)
from .errors import BudgetError, DomainError, ParseError
from .matrix import Mat

VERSION = "1"


# -- parsing -----------------------------------------------------------------

def parse_int(x) -> int:
    if isinstance(x, bool):
        raise ParseError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise ParseError(f"expected a decimal integer, got {x!r}")


def parse_rational(x) -> Fraction:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, _, q = s.partition("/")
            q = parse_int(q)
            if q == 0:
                raise ParseError(f"zero denominator in {x!r}")
            return Fraction(parse_int(p), q)
        return Fraction(parse_int(s))
    raise ParseError(f"expected a rational, got {x!r}")


def parse_vector(v, parse=parse_int) -> list:
    if not isinstance(v, list):
        raise ParseError(f"expected a list, got {type(v).__name__}")
    return [parse(x) for x in v]


def parse_matrix(rows, parse=parse_int, ncols: int | None = None) -> Mat:
    """A matrix as a list of rows; ``{"rows": r, "cols": c, "entries": [...]}``
    is accepted for shapes with a zero dimension."""
    if isinstance(rows, dict):
        try:
            r, c = parse_int(rows["rows"]), parse_int(rows["cols"])
            data = rows.get("entries", [])
        except KeyError as exc:
            raise ParseError(f"matrix missing key {exc}") from None
        m = parse_matrix(data, parse) if data else Mat.zeros(r, c)
        if m.shape != (r, c):
            raise ParseError("matrix shape does not match its entries")
        return m
    if not isinstance(rows, list):
        raise ParseError("a matrix must be a list of rows")
    parsed = [parse_vector(r, parse) for r in rows]
    if ncols is None:
        ncols = len(parsed[0]) if parsed else 0
    if any(len(r) != ncols for r in parsed):
        raise ParseError("ragged matrix")
    return Mat(parsed, len(parsed), ncols)


def _get(d, key):
    if not isinstance(d, dict):
        raise ParseError("expected a JSON object")
    if key not in d:
        raise ParseError(f"missing key {key!r}")
    return d[key]


def parse_group(d) -> abgroup.FgGroup:
    """``{"cyclic": [n1, ...]}`` or ``{"n": k, "relations": matrix}``."""
    if isinstance(d, dict) and "cyclic" in d:
        return abgroup.FgGroup.cyclic(*parse_vector(d["cyclic"]))
    n = parse_int(_get(d, "n"))
    rel = d.get("relations", [])
    M = parse_matrix(rel) if rel else Mat.zeros(n, 0)
    if M.nrows != n:
        raise ParseError(f"relations must have {n} rows")
    return abgroup.FgGroup(n, M)


def parse_order(d) -> order_ring.Order:
    """``{"monic": [c0, ..., 1]}`` or ``{"n": k, "one": v, "table": t}``."""
    if isinstance(d, dict) and "monic" in d:
        coeffs = parse_vector(d["monic"])
        if not coeffs or coeffs[-1] != 1:
            raise ParseError("monic polynomial must end with leading coefficient 1")
        return order_ring.order_from_monic(coeffs)
    n = parse_int(_get(d, "n"))
    one = parse_vector(_get(d, "one"))
    table = _get(d, "table")
    if not isinstance(table, list) or len(table) != n:
        raise ParseError("table must be n x n x n")
    t = [[parse_vector(c) for c in row] for row in table]
    if any(len(row) != n or any(len(c) != n for c in row) for row in t) or len(one) != n:
        raise ParseError("table must be n x n x n")
    return order_ring.validate_order(n, one, t)


def parse_element(R, x) -> order_ring.KElement:
    """Coordinates (rationals allowed) or ``{"num": v, "den": d}``."""
    if isinstance(x, dict):
        num = parse_vector(_get(x, "num"))
        den = parse_int(x.get("den", "1"))
        if len(num) != R.n or den == 0:
            raise ParseError("bad element")
        return order_ring.KElement.make(R, num, den)
    coords = parse_vector(x, parse_rational)
    if len(coords) != R.n:
        raise ParseError(f"element needs {R.n} coordinates")
    return order_ring.KElement.from_fractions(R, coords)


def parse_ideal(R, d) -> frac_ideal.FracIdeal:
    """``{"basis": matrix, "den": d}`` (columns generate) or
    ``{"elements": [element, ...]}`` (R-module generators)."""
    if isinstance(d, dict) and "elements" in d:
        return frac_ideal.ideal_from_elements(R, [parse_element(R, e) for e in d["elements"]])
    B = parse_matrix(_get(d, "basis"))
    den = parse_int(d.get("den", "1"))
    if B.nrows != R.n or den <= 0:
        raise ParseError("bad ideal basis")
    return frac_ideal.ideal_normalize(R, B, den)


def parse_finite_ring(d) -> finite_ring.FiniteRing:
    """``{"mod": n}`` or ``{"invariants": [...], "table": t, "one": v}``."""
    if isinstance(d, dict) and "mod" in d:
        return finite_ring.integers_mod(parse_int(d["mod"]))
    inv = parse_vector(_get(d, "invariants"))
    m = len(inv)
    table = _get(d, "table")
    if not isinstance(table, list) or len(table) != m:
        raise ParseError("table must be m x m x m")
    t = [[parse_vector(c) for c in row] for row in table]
    one = parse_vector(_get(d, "one"))
    return finite_ring.validate_finite_ring(inv, t, one)


# -- serialization -----------------------------------------------------------

def ser(x):
    """Numbers become decimal strings, recursively."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Mat):
        if x.nrows == 0 or x.ncols == 0:
            return {"rows": str(x.nrows), "cols": str(x.ncols), "entries": []}
        return [[ser(v) for v in r] for r in x.rows]
    if isinstance(x, dict):
        return {k: ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [ser(v) for v in x]
    if isinstance(x, str):
        return x
    return ser(int(x))


def ser_group(G: abgroup.FgGroup):
    return {"n": G.n, "relations": G.rel}


def ser_order(R: order_ring.Order):
    return {"n": R.n, "one": list(R.one), "table": [[list(c) for c in row] for row in R.table]}


def ser_ideal(I: frac_ideal.FracIdeal):
    return {"basis": I.basis, "den": I.den}


def ser_extension(E: frac_ideal.Extension):
    return {"order": ser_order(E.order), "embedding": E.embedding, "index": E.index()}


def ser_ring_ideal(I: finite_ring.RingIdeal):
    return {"lattice": I.lattice, "size": I.size()}


def canonical(kind: str, doc):
    """parse followed by serialize for the input kinds above."""
    if kind == "matrix":
        return ser(parse_matrix(doc, parse_rational))
    if kind == "group":
        return ser(ser_group(parse_group(doc)))
    if kind == "order":
        return ser(ser_order(parse_order(doc)))
    if kind == "finite_ring":
        A = parse_finite_ring(doc)
        return ser({"invariants": list(A.d), "table": [[list(c) for c in r] for r in A.table],
                    "one": list(A.one)})
    raise ParseError(f"unknown kind {kind!r}")


# -- handlers ----------------------------------------------------------------

@dataclass
class Context:
    c: Fraction
    oracle: exact_arith.FactorOracle
    ladder_max: int
    transcript: list


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def h_coprime_basis(args, ctx):
    values = [parse_int(v) for v in args.values]
    if any(v <= 0 for v in values):
        raise ParseError("coprime-basis takes positive integers")
    cb = coprime_basis.coprime_basis_factor(values)
    ctx.transcript.append(f"refined {values} into {list(cb.elems)}")
    return {"basis": list(cb.elems), "exponents": [list(r) for r in cb.expo]}


def h_lll(args, ctx):
    G = parse_matrix(_get(_load(args.input), "gram"), parse_rational)
    U, L2 = lattice.lll_reduce(lattice.QuadLattice(G), ctx.c)
    return {"transform": U, "gram": L2.gram}


def h_kernel_image(args, ctx):
    phi = parse_matrix(_get(_load(args.input), "matrix"))
    r, kappa, iota = lattice.kernel_image(phi)
    return {"rank": r, "kernel": kappa, "image": phi * iota, "complement": iota}


def h_ab_structure(args, ctx):
    G = parse_group(_get(_load(args.input), "group"))
    d = abgroup.structure_decompose(G)
    return {"free_rank": d.r, "invariants": list(d.invariants),
            "projection": d.to_parts.phi, "inclusion": d.from_parts.phi}


def h_ab_order(args, ctx):
    o = abgroup.group_order(parse_group(_get(_load(args.input), "group")))
    return {"order": "infinite" if o == abgroup.INFINITE else o}


def h_ab_exponent(args, ctx):
    e, w = abgroup.group_exponent(parse_group(_get(_load(args.input), "group")))
    return {"exponent": e, "witness": w}


def h_ab_hom(args, ctx):
    doc = _load(args.input)
    H = abgroup.hom_group(parse_group(_get(doc, "A")), parse_group(_get(doc, "B")))
    return {"group": ser_group(H.H), "generators": H.gens}


def h_ab_tensor(args, ctx):
    doc = _load(args.input)
    T = abgroup.tensor_group(parse_group(_get(doc, "A")), parse_group(_get(doc, "B")))
    return {"group": ser_group(T.T)}


def h_ab_torsion(args, ctx):
    f = abgroup.torsion_subgroup(parse_group(_get(_load(args.input), "group")))
    return {"group": ser_group(f.src), "inclusion": f.phi}


def h_order_validate(args, ctx):
    R = parse_order(_get(_load(args.input), "order"))
    return {"order": ser_order(R), "status": R.status}


def h_order_disc(args, ctx):
    R = parse_order(_get(_load(args.input), "order"))
    return {"discriminant": order_ring.discriminant(R),
            "reduced_discriminant": order_ring.reduced_discriminant(R)}


def h_order_dual(args, ctx):
    R = parse_order(_get(_load(args.input), "order"))
    return {"dual": ser_ideal(order_ring.trace_dual(R))}


def h_ideal_arith(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    op = _get(doc, "op")
    if op not in ("sum", "product", "quotient", "intersect"):
        raise ParseError(f"unknown ideal operation {op!r}")
    I, J = parse_ideal(R, _get(doc, "I")), parse_ideal(R, _get(doc, "J"))
    return {"ideal": ser_ideal(frac_ideal.ideal_arith(op, I, J))}


def h_ideal_blowup(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    return ser_extension(frac_ideal.blowup(parse_ideal(R, _get(doc, "ideal"))))


def h_ideal_coprime_basis(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    ideals = [parse_ideal(R, d) for d in _get(doc, "ideals")]
    cb = frac_ideal.ideal_coprime_basis(R, ideals)
    return {"extension": ser_extension(cb.extension),
            "basis": [ser_ideal(c) for c in cb.basis], "exponents": cb.expo}


def h_ideal_invertible(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    return {"invertible": frac_ideal.is_invertible(parse_ideal(R, _get(doc, "ideal")))}


def h_units_kernel(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    alphas = [parse_element(R, e) for e in _get(doc, "elements")]
    if any(a.is_zero() for a in alphas):
        raise ParseError("elements must be nonzero")
    audit = []
    K = unit_kernel.multiplicative_kernel(R, alphas, ctx.ladder_max, audit)
    for entry in audit:
        ctx.transcript.append(
            f"unit class kernel {entry['unit_class_kernel']}; B={entry['B']} t={entry['t']} "
            f"omega={entry['omega']}; verified {entry['verified']}")
    return {"kernel": K}


def h_finring_nil(args, ctx):
    doc = _load(args.input)
    A = parse_finite_ring(_get(doc, "ring"))
    r = parse_int(doc["rad"]) if "rad" in doc else exact_arith.rad(A.order, ctx.oracle)
    return {"nilradical": ser_ring_ideal(finite_ring.nilradical_given_rad(A, r))}


def h_finring_local(args, ctx):
    A = parse_finite_ring(_get(_load(args.input), "ring"))
    ok, m = finite_ring.is_local(A)
    return {"local": ok, "maximal_ideal": ser_ring_ideal(m) if ok else None}


def h_finring_reduced(args, ctx):
    A = parse_finite_ring(_get(_load(args.input), "ring"))
    return {"reduced": finite_ring.is_reduced(A, ctx.oracle)}


def h_maxorder_compute(args, ctx):
    R = parse_order(_get(_load(args.input), "order"))
    audit = []
    E = max_order.maximal_order(R, ctx.oracle, audit)
    for step in audit:
        ctx.transcript.append(f"blowup step: index {step.index()}")
    out = ser_extension(E)
    out["discriminant"] = order_ring.discriminant(E.order)
    return out


def h_maxorder_decide(args, ctx):
    R = parse_order(_get(_load(args.input), "order"))
    return {"maximal": max_order.is_maximal(R, ctx.oracle)}


def h_symbol_legendre(args, ctx):
    return {"symbol": symbols.legendre(parse_int(args.a), parse_int(args.b))}


def h_symbol_jacobi(args, ctx):
    return {"symbol": symbols.jacobi(parse_int(args.a), parse_int(args.b))}


def h_symbol_kronecker(args, ctx):
    return {"symbol": symbols.kronecker(parse_int(args.a), parse_int(args.b))}


def h_symbol_auto_sign(args, ctx):
    doc = _load(args.input)
    G = parse_group(_get(doc, "group"))
    sigma = parse_matrix(_get(doc, "sigma"))
    return {"sign": symbols.automorphism_sign(G, sigma)}


def h_symbol_ideal(args, ctx):
    doc = _load(args.input)
    R = parse_order(_get(doc, "order"))
    b = parse_ideal(R, _get(doc, "ideal"))
    a = parse_element(R, _get(doc, "a"))
    return {"symbol": symbols.jacobi_ideal(R, b, a)}


@dataclass(frozen=True)
class Command:
    path: tuple
    handler: Callable
    library: Callable  # the library operation the handler dispatches to
    args: str  # "input", "values" or "pair"


REGISTRY = [
    Command(("coprime-basis",), h_coprime_basis, coprime_basis.coprime_basis_factor, "values"),
    Command(("lll",), h_lll, lattice.lll_reduce, "input"),
    Command(("kernel-image",), h_kernel_image, lattice.kernel_image, "input"),
    Command(("abgroup", "structure"), h_ab_structure, abgroup.structure_decompose, "input"),
    Command(("abgroup", "order"), h_ab_order, abgroup.group_order, "input"),
    Command(("abgroup", "exponent"), h_ab_exponent, abgroup.group_exponent, "input"),
    Command(("abgroup", "hom"), h_ab_hom, abgroup.hom_group, "input"),
    Command(("abgroup", "tensor"), h_ab_tensor, abgroup.tensor_group, "input"),
    Command(("abgroup", "torsion"), h_ab_torsion, abgroup.torsion_subgroup, "input"),
    Command(("order", "validate"), h_order_validate, order_ring.validate_order, "input"),
    Command(("order", "disc"), h_order_disc, order_ring.discriminant, "input"),
    Command(("order", "dual"), h_order_dual, order_ring.trace_dual, "input"),
    Command(("ideal", "arith"), h_ideal_arith, frac_ideal.ideal_arith, "input"),
    Command(("ideal", "blowup"), h_ideal_blowup, frac_ideal.blowup, "input"),
    Command(("ideal", "coprime-basis"), h_ideal_coprime_basis, frac_ideal.ideal_coprime_basis, "input"),
    Command(("ideal", "invertible"), h_ideal_invertible, frac_ideal.is_invertible, "input"),
    Command(("units", "kernel"), h_units_kernel, unit_kernel.multiplicative_kernel, "input"),
    Command(("finring", "nil"), h_finring_nil, finite_ring.nilradical_given_rad, "input"),
    Command(("finring", "local"), h_finring_local, finite_ring.is_local, "input"),
    Command(("finring", "reduced"), h_finring_reduced, finite_ring.is_reduced, "input"),
    Command(("maxorder", "compute"), h_maxorder_compute, max_order.maximal_order, "input"),
    Command(("maxorder", "decide"), h_maxorder_decide, max_order.is_maximal, "input"),
    Command(("symbol", "legendre"), h_symbol_legendre, symbols.legendre, "pair"),
    Command(("symbol", "jacobi"), h_symbol_jacobi, symbols.jacobi, "pair"),
    Command(("symbol", "kronecker"), h_symbol_kronecker, symbols.kronecker, "pair"),
    Command(("symbol", "auto-sign"), h_symbol_auto_sign, symbols.automorphism_sign, "input"),
    Command(("symbol", "ideal"), h_symbol_ideal, symbols.jacobi_ideal, "input"),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _add_args(p, kind):
    if kind == "values":
        p.add_argument("values", nargs="+", help="positive integers")
    elif kind == "pair":
        p.add_argument("a")
        p.add_argument("b")
    else:
        p.add_argument("input", help="JSON file, or - for stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exactnt", description=__doc__.splitlines()[0])
    parser.add_argument("--c", default="2", help="LLL constant (rational > 4/3)")
    parser.add_argument("--oracle-budget", default=str(1 << 18),
                        help="Pollard rho iterations allowed per split")
    parser.add_argument("--precision-ladder-max", default=str(unit_kernel.DEFAULT_LADDER_MAX),
                        help="largest working precision in bits")
    parser.add_argument("--transcript", default=None, help="write an audit transcript here")
    top = parser.add_subparsers(dest="cmd", parser_class=_Parser)
    groups = {}
    for cmd in REGISTRY:
        if len(cmd.path) == 1:
            p = top.add_parser(cmd.path[0])
        else:
            if cmd.path[0] not in groups:
                g = top.add_parser(cmd.path[0])
                groups[cmd.path[0]] = g.add_subparsers(dest="sub", parser_class=_Parser)
            p = groups[cmd.path[0]].add_parser(cmd.path[1])
        _add_args(p, cmd.args)
        p.set_defaults(command=cmd)
    return parser


def _envelope(name, status, result=None, diagnostics=()):
    return {"command": name, "version": VERSION, "status": status,
            "result": ser(result), "diagnostics": list(diagnostics)}


def run(argv) -> tuple[int, dict, list]:
    """Parse and dispatch; returns (exit code, envelope, transcript lines)."""
    name = " ".join(a for a in argv if not a.startswith("-"))[:80]
    transcript: list = []
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "command", None) is None:
            raise ParseError("no command given")
        name = " ".join(args.command.path)
        c = parse_rational(args.c)
        ctx = Context(c, exact_arith.FactorOracle(rho_steps=parse_int(args.oracle_budget)),
                      parse_int(args.precision_ladder_max), transcript)
        result = args.command.handler(args, ctx)
        return 0, _envelope(name, "ok", result), transcript
    except ParseError as exc:
        return 1, _envelope(name, "error", diagnostics=[{"type": "ParseError",
                                                          "message": str(exc)}]), transcript
    except BudgetError as exc:
        return 3, _envelope(name, "error", diagnostics=[{"type": type(exc).__name__,
                                                          "message": str(exc)}]), transcript
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        diag = {"type": type(exc).__name__, "message": str(exc)}
        witness = getattr(exc, "witness", None)
        if witness is not None:
            diag["witness"] = str(witness)
        return 2, _envelope(name, "error", diagnostics=[diag]), transcript


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, env, transcript = run(argv)
    json.dump(env, sys.stdout, indent=1)
    sys.stdout.write("\n")
    path = None
    for i, a in enumerate(argv):
        if a == "--transcript" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--transcript="):
            path = a.split("=", 1)[1]
    if path:
        with open(path, "w") as fh:
            fh.write(f"# {env['command']} -> {env['status']}\n")
            for line in transcript:
                fh.write(line + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
