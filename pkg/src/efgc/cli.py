"""Command-line interface and plain-text file formats.

Instance files (UTF-8, line oriented, ``#`` starts a comment)::

    efgc-instance v1
    variant gc
    vertices v1 v2 v3        # listing order = the fixed vertex ordering
    edge e1 v1 v2
    edge e2 v2 v3
    agent a1 e1=1 e2=0
    agent a2 e1=0 e2=1

Utilities are integers or ``p/q`` and are normalized on load; omitted
edges count as zero.  Assignment files hold one ``piece`` line per edge
interval::

    efgc-assignment v1
    piece a1 e1 0 1/2 closed closed
    piece a2 e1 1/2 1 open closed

Commands: ``solve`` (exit 0 yes / 1 no / 2 error), ``verify`` (0 valid /
1 invalid), ``gen`` (emit a generated instance), ``oracle`` (reference
solver), ``cells`` (debug: realizable sign vectors of a form file over a
region file).  ``--mode auto`` picks the specialized tree or cycle
solver when it applies and the few-edges search otherwise.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from efgc.cells import EmptyRegionError, enumerate_sign_conditions
from efgc.component_lp import (
    solve_cycle,
    solve_tree_gc_bounded_degree,
    solve_tree_vdgc,
)
from efgc.few_edges import solve_few_edges
from efgc.generators import (
    gen_ladder_tw2,
    gen_matching_plus_two,
    gen_star_from_numpart,
)
from efgc.linprog import EQ, GE, LinearForm, LinearSystem
from efgc.model import (
    AllZeroAgentError,
    Assignment,
    EdgePiece,
    EfgcError,
    Instance,
    Piece,
    Variant,
    Verdict,
    build_instance,
    normalize,
    verify_assignment,
)


class ParseError(EfgcError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(EfgcError):
    pass


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def _rational(token: str, line_no: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, f"bad rational {token!r}") from None
    return value


def parse_instance(text: str) -> Instance:
    """Parse and fully validate an instance file; normalizes utilities."""
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "efgc-instance v1":
        raise ParseError(lines[0][0] if lines else 1, "expected header 'efgc-instance v1'")
    variant = None
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    agents: list[str] = []
    utilities: dict[str, dict[str, Fraction]] = {}
    edge_ids: set[str] = set()
    for line_no, line in lines[1:]:
        parts = line.split()
        kind = parts[0]
        if kind == "variant":
            if len(parts) != 2 or parts[1] not in ("gc", "vdgc"):
                raise ParseError(line_no, "variant must be 'gc' or 'vdgc'")
            if variant is not None:
                raise ParseError(line_no, "duplicate variant line")
            variant = Variant(parts[1])
        elif kind == "vertices":
            if vertices:
                raise ParseError(line_no, "duplicate vertices line")
            vertices = parts[1:]
            if not vertices:
                raise ParseError(line_no, "vertices line lists no vertices")
        elif kind == "edge":
            if len(parts) != 4:
                raise ParseError(line_no, "edge line needs: edge ID U V")
            eid, u, v = parts[1:]
            if eid in edge_ids:
                raise ParseError(line_no, f"duplicate edge id {eid}")
            edge_ids.add(eid)
            edges.append((eid, u, v))
        elif kind == "agent":
            if len(parts) < 2:
                raise ParseError(line_no, "agent line needs an identifier")
            name = parts[1]
            if name in utilities:
                raise ParseError(line_no, f"duplicate agent {name}")
            agents.append(name)
            row: dict[str, Fraction] = {}
            for term in parts[2:]:
                if "=" not in term:
                    raise ParseError(line_no, f"expected EDGE=VALUE, got {term!r}")
                edge, _, value = term.partition("=")
                if edge not in edge_ids:
                    raise ParseError(line_no, f"unknown edge {edge!r}")
                row[edge] = _rational(value, line_no)
                if row[edge] < 0:
                    raise ParseError(line_no, f"negative utility for {edge}")
            utilities[name] = row
        else:
            raise ParseError(line_no, f"unknown directive {kind!r}")
    if variant is None:
        raise ValidationError("missing variant line")
    if not agents:
        raise ValidationError("no agents declared")
    try:
        instance = build_instance(vertices, edges, utilities, variant)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    try:
        return normalize(instance)
    except AllZeroAgentError as exc:
        raise ValidationError(str(exc)) from None


def emit_instance(instance: Instance) -> str:
    out = ["efgc-instance v1", f"variant {instance.variant.value}"]
    out.append("vertices " + " ".join(instance.graph.vertices))
    for eid, u, v in instance.graph.edges:
        out.append(f"edge {eid} {u} {v}")
    for agent in instance.agents:
        terms = " ".join(
            f"{e}={instance.util(agent, e)}" for e in instance.graph.edge_ids
        )
        out.append(f"agent {agent} {terms}".rstrip())
    return "\n".join(out) + "\n"


def emit_assignment(assignment: Assignment) -> str:
    out = ["efgc-assignment v1"]
    for agent, piece in assignment.items():
        for ep in piece.edge_pieces:
            out.append(
                f"piece {agent} {ep.edge} {ep.lo} {ep.hi} "
                f"{'closed' if ep.lo_closed else 'open'} "
                f"{'closed' if ep.hi_closed else 'open'}"
            )
    return "\n".join(out) + "\n"


def parse_assignment(text: str) -> Assignment:
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "efgc-assignment v1":
        raise ParseError(lines[0][0] if lines else 1, "expected header 'efgc-assignment v1'")
    pieces: dict[str, list[EdgePiece]] = {}
    for line_no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 7 or parts[0] != "piece":
            raise ParseError(line_no, "expected: piece AGENT EDGE LO HI closed|open closed|open")
        _, agent, edge, lo, hi, lo_flag, hi_flag = parts
        for flag in (lo_flag, hi_flag):
            if flag not in ("closed", "open"):
                raise ParseError(line_no, f"closure flag must be closed or open, got {flag!r}")
        try:
            ep = EdgePiece(
                edge,
                _rational(lo, line_no),
                _rational(hi, line_no),
                lo_flag == "closed",
                hi_flag == "closed",
            )
        except ValueError as exc:
            raise ParseError(line_no, str(exc)) from None
        pieces.setdefault(agent, []).append(ep)
    return Assignment({agent: Piece(eps) for agent, eps in pieces.items()})


def parse_forms_file(text: str) -> tuple[list[str], list[LinearForm]]:
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "efgc-forms v1":
        raise ParseError(lines[0][0] if lines else 1, "expected header 'efgc-forms v1'")
    names: list[str] = []
    forms: list[LinearForm] = []
    for line_no, line in lines[1:]:
        parts = line.split()
        if parts[0] == "vars":
            names = parts[1:]
        elif parts[0] == "form":
            forms.append(_parse_terms(parts[1:], names, line_no))
        else:
            raise ParseError(line_no, f"unknown directive {parts[0]!r}")
    return names, forms


def parse_region_file(text: str) -> LinearSystem:
    lines = list(_content_lines(text))
    if not lines or lines[0][1] != "efgc-region v1":
        raise ParseError(lines[0][0] if lines else 1, "expected header 'efgc-region v1'")
    names: list[str] = []
    system = LinearSystem()
    for line_no, line in lines[1:]:
        parts = line.split()
        if parts[0] == "vars":
            names = parts[1:]
            for v in names:
                system.declare(v)
        elif parts[0] in ("ge", "eq"):
            form = _parse_terms(parts[1:], names, line_no)
            system.add(form, GE if parts[0] == "ge" else EQ)
        else:
            raise ParseError(line_no, f"unknown directive {parts[0]!r}")
    return system


def _parse_terms(tokens, names, line_no) -> LinearForm:
    coeffs = {}
    const = Fraction(0)
    for token in tokens:
        if "=" not in token:
            raise ParseError(line_no, f"expected NAME=VALUE, got {token!r}")
        name, _, value = token.partition("=")
        if name == "const":
            const += _rational(value, line_no)
        elif name in names:
            coeffs[name] = coeffs.get(name, Fraction(0)) + _rational(value, line_no)
        else:
            raise ParseError(line_no, f"unknown variable {name!r}")
    return LinearForm.make(coeffs, const)


MODES = ("auto", "few-edges", "tree-vdgc", "tree-gc", "cycle", "oracle")


def select_solver(instance: Instance, mode: str):
    """Dispatch per the mode flag; auto prefers the specialized solvers."""
    from efgc.generators import solve_explicit_oracle

    if mode == "auto":
        graph = instance.graph
        if graph.is_tree():
            mode = "tree-vdgc" if instance.variant is Variant.VDGC else "tree-gc"
        elif graph.is_cycle():
            mode = "cycle"
        else:
            mode = "few-edges"
    return {
        "few-edges": solve_few_edges,
        "tree-vdgc": solve_tree_vdgc,
        "tree-gc": solve_tree_gc_bounded_degree,
        "cycle": solve_cycle,
        "oracle": solve_explicit_oracle,
    }[mode]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _solve_command(args) -> int:
    instance = parse_instance(_read(args.infile))
    verdict: Verdict = select_solver(instance, args.mode)(instance)
    if not verdict.yes:
        print("No")
        return 1
    print("Yes")
    text = emit_assignment(verdict.assignment)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _verify_command(args) -> int:
    instance = parse_instance(_read(args.infile))
    assignment = parse_assignment(_read(args.assignment))
    report = verify_assignment(instance, assignment)
    if report.valid:
        print("valid")
        return 0
    for failure in report.failures:
        print(f"invalid [{failure.kind}]: {failure.message}")
    return 1


def _gen_command(args) -> int:
    values = [int(tok) for tok in args.values.split(",") if tok]
    if args.family == "star":
        if args.variant not in (None, "gc"):
            raise ValueError("the star family is a shared-vertex (gc) construction")
        instance = gen_star_from_numpart(values)
    elif args.family == "matching2":
        if args.variant not in (None, "vdgc"):
            raise ValueError("the matching2 family is a vertex-disjoint construction")
        instance = gen_matching_plus_two(values)
    else:
        instance = gen_ladder_tw2(values, args.variant or "gc")
    text = emit_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _oracle_command(args) -> int:
    from efgc.generators import solve_explicit_oracle

    instance = parse_instance(_read(args.infile))
    verdict = solve_explicit_oracle(instance)
    if not verdict.yes:
        print("No")
        return 1
    print("Yes")
    text = emit_assignment(verdict.assignment)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cells_command(args) -> int:
    names, forms = parse_forms_file(_read(args.forms))
    region = parse_region_file(_read(args.region))
    for name in names:
        region.declare(name)
    witnesses = enumerate_sign_conditions(forms, region)
    symbols = {-1: "-", 0: "0", 1: "+"}
    for cw in witnesses:
        signs = "".join(symbols[s] for s in cw.signs)
        point = " ".join(f"{v}={cw.point[v]}" for v in sorted(cw.point))
        print(f"{signs} {point}".rstrip())
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="efgc",
        description="exact solvers for envy-free division of graphs with divisible edges",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide an instance file")
    solve.add_argument("--in", dest="infile", required=True, help="path or - for stdin")
    solve.add_argument("--mode", choices=MODES, default="auto")
    solve.add_argument("--out")
    solve.set_defaults(func=_solve_command)

    verify = sub.add_parser("verify", help="check an assignment against an instance")
    verify.add_argument("--in", dest="infile", required=True)
    verify.add_argument("--assignment", required=True)
    verify.set_defaults(func=_verify_command)

    gen = sub.add_parser("gen", help="emit a generated instance")
    gen.add_argument("family", choices=("star", "matching2", "ladder"))
    gen.add_argument("--values", required=True, help="comma-separated integers")
    gen.add_argument("--variant", choices=("gc", "vdgc"))
    gen.add_argument("--out")
    gen.set_defaults(func=_gen_command)

    oracle = sub.add_parser("oracle", help="decide via the reference solver")
    oracle.add_argument("--in", dest="infile", required=True)
    oracle.add_argument("--out")
    oracle.set_defaults(func=_oracle_command)

    cells = sub.add_parser("cells", help="enumerate sign vectors (debug)")
    cells.add_argument("--forms", required=True)
    cells.add_argument("--region", required=True)
    cells.set_defaults(func=_cells_command)
    return parser


def run(argv) -> int:
    """Entry point returning the process exit code (0 yes/valid, 1 no/
    invalid, 2 usage or input error)."""
    threads = os.environ.get("EFGC_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print(f"EFGC_THREADS must be a positive integer, got {threads!r}", file=sys.stderr)
            return 2
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (EfgcError, EmptyRegionError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
