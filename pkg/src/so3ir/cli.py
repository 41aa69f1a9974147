"""Command-line entry point.

Subcommands: analyze, sweep, einstein, topology (sw|semichar|split|diophantine),
catalog (list|export).  Exit codes: 0 success, 2 input error, 3 invariant
violation.  All text/csv numerics print 12 significant digits; JSON keeps
full shortest round-trip precision.
"""

import argparse
import csv
import io
import json
import sys

from . import catalog, report, spacefile, topology
from .errors import InvariantViolation, SpaceInputError


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(s: str) -> tuple[float, float, float]:
    parts = [p for p in s.split(",") if p.strip()]
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise SpaceInputError(f"--params expects comma-separated numbers, got {s!r}") from None
    if len(vals) == 1:
        return vals[0], 1.0, 1.0
    if len(vals) == 3:
        return vals[0], vals[1], vals[2]
    raise SpaceInputError("--params expects one or three comma-separated numbers")


def _parse_grid(s: str):
    axes = []
    for part in s.split(","):
        bits = part.split(":")
        if len(bits) != 3:
            raise SpaceInputError(f"grid axis must be start:stop:count, got {part!r}")
        axes.append((float(bits[0]), float(bits[1]), int(bits[2])))
    return axes


def _flatten(d, prefix=""):
    rows = []
    if isinstance(d, dict):
        for k, v in d.items():
            rows.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(d, list) and d and isinstance(d[0], (dict, list)):
        for i, v in enumerate(d):
            rows.extend(_flatten(v, f"{prefix}[{i}]"))
    else:
        rows.append((prefix, d))
    return rows


def _fmt_cell(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def _csv_table(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(c) for c in row])
    return buf.getvalue()


def _emit(data_dict: dict, fmt: str, out: str | None, text_renderer=None) -> None:
    if fmt == "json":
        _write(json.dumps(data_dict, indent=2) + "\n", out)
    elif fmt == "csv":
        _write(_csv_table(["field", "value"], _flatten(data_dict)), out)
    else:
        if text_renderer is not None:
            _write(text_renderer(), out)
        else:
            lines = [f"{k} = {_fmt_cell(v)}" for k, v in _flatten(data_dict)]
            _write("\n".join(lines) + "\n", out)


def _cmd_analyze(args) -> int:
    alpha, beta, gamma = _parse_params(args.params)
    mu = None if args.mu is None else (args.mu if args.mu == "auto" else float(args.mu))
    rep = report.analyze(args.space, alpha, beta, gamma, mu=mu, tol=args.tol)
    _emit(rep.to_dict(), args.format, args.out, text_renderer=rep.to_text)
    return 0


def _cmd_sweep(args) -> int:
    table = report.sweep(args.space, _parse_grid(args.grid), args.query)
    _write(table, args.out)
    return 0


def _cmd_einstein(args) -> int:
    from .riemannian import einstein_solve

    sols = einstein_solve(args.space, args.alpha, tol=args.tol)
    header = ["branch", "kappa", "beta", "gamma", "scal", "residual"]
    rows = [[s.branch, s.kappa, s.beta, s.gamma, s.scal, s.residual] for s in sols]
    if args.format == "json":
        _write(
            json.dumps(
                {
                    "family": args.space,
                    "alpha": args.alpha,
                    "solutions": [dict(zip(header, r)) for r in rows],
                },
                indent=2,
            )
            + "\n",
            args.out,
        )
    else:
        _write(_csv_table(header, rows), args.out)
    return 0


def _cmd_topology(args) -> int:
    if args.topic == "sw":
        classes = topology.sw_classes_s20()
        pres = [topology.elementary_to_str(w.to_elementary()) for w in classes]
        data = {f"w{i + 1}": pres[i] for i in range(5)}
        data.update({f"wu_{k}": v for k, v in topology.wu_consistency().items()})
        data["pontrjagin_factor"] = topology.pontrjagin_relation()
        if args.format == "json":
            _write(json.dumps(data, indent=2) + "\n", args.out)
        else:
            _write(_csv_table(["field", "value"], list(data.items())), args.out)
    elif args.topic == "semichar":
        rb = tuple(int(x) for x in args.real_betti.split(","))
        zb = tuple(int(x) for x in args.z2_betti.split(","))
        if len(rb) != 3 or len(zb) != 3:
            raise SpaceInputError("--real-betti and --z2-betti expect three comma-separated integers")
        k, chi2, ok = topology.semicharacteristics(rb, zb, args.pairing)
        data = {"k": k, "chi2": chi2, "lmp_consistent": ok}
        if args.format == "json":
            _write(json.dumps(data, indent=2) + "\n", args.out)
        else:
            _write(_csv_table(["field", "value"], list(data.items())), args.out)
    elif args.topic == "split":
        cond2, cond3, equiv = topology.split_conditions(args.chi, args.sigma, args.csq)
        data = {"cond2": cond2, "cond3": cond3, "equivalent": equiv}
        if args.format == "json":
            _write(json.dumps(data, indent=2) + "\n", args.out)
        else:
            _write(_csv_table(["field", "value"], list(data.items())), args.out)
    else:  # diophantine
        sols = topology.uniform_intersection_solutions(args.t_max, args.a_max, args.b_max)
        header = ["s", "t", "a", "b", "chi", "sigma", "csq"]
        rows = [[x.s, x.t, x.a, x.b, x.chi, x.sigma, x.csq] for x in sols]
        if args.format == "json":
            _write(json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n", args.out)
        else:
            _write(_csv_table(header, rows), args.out)
    return 0


def _cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [
            ["vir24", "alpha,beta,gamma", "compact twisted Stiefel space"],
            ["vtilde24", "alpha,beta,gamma", "noncompact twisted Stiefel partner"],
            ["wir", "alpha,beta,gamma + mu", "solvable example with embedding parameter"],
            ["su3_so3_isotropy", "alpha", "symmetric-space isotropy data"],
        ]
        _write(_csv_table(["id", "parameters", "description"], rows), args.out)
        return 0
    alpha, beta, gamma = _parse_params(args.params)
    mu = None
    if args.space == "wir":
        mu = catalog.wir_admissible_mu(alpha, gamma)[0] if args.mu in (None, "auto") else float(args.mu)
    parts = catalog.space_definition(args.space, alpha, beta, gamma, mu=mu)
    if not args.out:
        raise SpaceInputError("catalog export requires --out PATH")
    spacefile.save_space_file(args.out, **parts)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="so3ir",
        description="Invariant-connection geometry and characteristic-class arithmetic "
        "for five-dimensional spaces with irreducible SO(3) structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full geometric analysis of one space")
    pa.add_argument("--space", required=True, help="catalog id or space-definition file")
    pa.add_argument("--params", default="1,1,1", help="metric parameters a,b,c")
    pa.add_argument("--mu", default=None, help="embedding parameter for wir: a number or 'auto'")
    pa.add_argument("--tol", type=float, default=1e-9)
    pa.add_argument("--format", choices=("json", "csv", "text"), default="json")
    pa.add_argument("--out", default=None)
    pa.set_defaults(func=_cmd_analyze)

    ps = sub.add_parser("sweep", help="defect/flag table over a parameter grid (CSV)")
    ps.add_argument("--space", required=True, help="family: vir24 | vtilde24 | wir")
    ps.add_argument("--grid", required=True, help="lo:hi:n,lo:hi:n,lo:hi:n for alpha,beta,gamma")
    ps.add_argument("--query", choices=("existence", "sasaki", "einstein"), required=True)
    ps.add_argument("--out", default=None)
    ps.set_defaults(func=_cmd_sweep)

    pe = sub.add_parser("einstein", help="Einstein metrics of a family at fixed alpha")
    pe.add_argument("--space", required=True)
    pe.add_argument("--alpha", type=float, default=1.0)
    pe.add_argument("--tol", type=float, default=1e-9)
    pe.add_argument("--format", choices=("json", "csv"), default="csv")
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=_cmd_einstein)

    pt = sub.add_parser("topology", help="exact characteristic-class and intersection arithmetic")
    tsub = pt.add_subparsers(dest="topic", required=True)
    t_sw = tsub.add_parser("sw", help="Stiefel-Whitney classes of the trace-free symmetric square")
    t_sc = tsub.add_parser("semichar", help="semicharacteristics and their linkage")
    t_sc.add_argument("--real-betti", required=True, help="b0,b2,b4")
    t_sc.add_argument("--z2-betti", required=True, help="dim H_0,H_1,H_2 over Z2")
    t_sc.add_argument("--pairing", type=int, choices=(0, 1), required=True, help="w2 u w3 bit")
    t_sp = tsub.add_parser("split", help="4-manifold tangent splitting conditions")
    t_sp.add_argument("--chi", type=int, required=True)
    t_sp.add_argument("--sigma", type=int, required=True)
    t_sp.add_argument("--csq", type=int, required=True)
    t_di = tsub.add_parser("diophantine", help="uniform intersection-form solutions")
    t_di.add_argument("--t-max", type=int, default=20)
    t_di.add_argument("--a-max", type=int, default=20)
    t_di.add_argument("--b-max", type=int, default=60)
    for p in (t_sw, t_sc, t_sp, t_di):
        p.add_argument("--format", choices=("json", "csv"), default="csv")
        p.add_argument("--out", default=None)
    pt.set_defaults(func=_cmd_topology)

    pc = sub.add_parser("catalog", help="list built-in spaces or export one to a definition file")
    pc.add_argument("action", choices=("list", "export"))
    pc.add_argument("--space", default=None)
    pc.add_argument("--params", default="1,1,1")
    pc.add_argument("--mu", default=None)
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=_cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpaceInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
