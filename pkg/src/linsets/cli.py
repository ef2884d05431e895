"""Command-line entry point: ``linsets <subcommand> --field ... [options]``.

Exit codes: 0 success, 2 usage or parameter error, 3 guard refusal,
4 internal contradiction (a computed object violating a theorem).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from linsets import analysis, constructions, equivalence, search
from linsets.errors import InternalContradiction, LinsetsError, TooLarge
from linsets.field import Element, FieldCtx, parse_element, parse_field_spec
from linsets.linear_set import enumerate_linear_set, report_csv_row, reports_to_csv
from linsets.subspace import LINE, PLANE, Subspace, parse_subspace, power_span, product_space, trace_dual

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_CONTRADICTION = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, field_required: bool = True):
    p.add_argument("--field", required=field_required, help="p=<int>,e=<int>,n=<int>[,fq=...][,fqn=...]")
    p.add_argument("--output", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linsets", description="Linear sets on PG(1, q^n) and critical pairs of subspaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a named subspace and report its linear set")
    p.add_argument("kind", choices=("trace", "jvdv", "lift", "minfam", "iclub"))
    _common(p)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    for flag in ("t1", "t2", "l", "m", "j", "t"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--b")
    p.add_argument("--sbar")
    p.add_argument("--uprime")

    p = sub.add_parser("analyze", help="weight distribution of L_U")
    _common(p)
    p.add_argument("--U", required=True)

    p = sub.add_parser("classify", help="minimum size of L_{S×⟨1,μ⟩} versus the decomposition of S")
    _common(p)
    p.add_argument("--S", required=True)
    p.add_argument("--mu", required=True)

    p = sub.add_parser("critpair", help="Kneser / critical-pair / Vosper checks for (S, T)")
    _common(p)
    p.add_argument("--S", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--vosper", action="store_true")
    p.add_argument("--bridge", action="store_true", help="also compare with L_{S^⊥ × T}")

    p = sub.add_parser("equiv", help="scalar-Frobenius or full ΓL(2, q^n) equivalence search")
    _common(p)
    for flag in ("S1", "S2", "T1", "T2", "U1", "U2"):
        p.add_argument(f"--{flag}")
    p.add_argument("--full-orbit", action="store_true")

    p = sub.add_parser("dualbasis", help="trace-dual basis of (1, λ, ..., λ^(n-1))")
    _common(p)
    p.add_argument("--lambda", dest="lam", default="lambda")
    p.add_argument("--l", type=int, help="also give ⟨1, ..., λ^(l-1)⟩^⊥ in closed form")

    p = sub.add_parser("search", help="exhaustive verification harnesses")
    p.add_argument("harness", choices=("thm36", "thm39", "vosper", "kneser", "critprobe", "bridge"))
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--mu")
    p.add_argument("--max-dim", type=int)
    p.add_argument("--samples", type=int, help="bridge: random pairs instead of all pairs")
    p.add_argument("--limit", type=int, help="candidate ceiling for the guard")
    return parser


# -- helpers ---------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m for m in missing)}")


def _sub(ctx: FieldCtx, text: str, ambient: str) -> Subspace:
    return parse_subspace(ctx, text, ambient)


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _csv_of(rows: list[dict]) -> str:
    if not rows:
        return ""
    fields = []
    for r in rows:
        for k in r:
            if k not in fields:
                fields.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _text_of(d: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in d.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text_of(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}: {len(v)} entries")
            for item in v[:20]:
                lines.append(f"{pad}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
            if len(v) > 20:
                lines.append(f"{pad}  ...")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


class Result:
    """A serializable outcome: a JSON dict plus optional CSV rows."""

    def __init__(self, data: dict, csv_rows: list[dict] | None = None, exit_code: int = EXIT_OK):
        self.data = data
        self.csv_rows = csv_rows
        self.exit_code = exit_code

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        if fmt == "csv":
            if self.csv_rows is not None:
                return reports_to_csv(self.csv_rows) if self.csv_rows else "\n"
            return _csv_of([_flatten(self.data)])
        return _text_of(self.data) + "\n"


def _linset_result(U: Subspace, extra: dict | None = None) -> Result:
    rep = enumerate_linear_set(U)
    data = {"schema": "report-v1", "kind": "linear_set"}
    data.update(extra or {})
    data["subspace"] = U.text()
    body = rep.to_dict()
    body.pop("schema")
    body.pop("kind")
    data.update(body)
    return Result(data, [report_csv_row(rep, {"subspace": U.text()})])


# -- subcommands -----------------------------------------------------------------


def cmd_construct(ctx: FieldCtx, args) -> Result:
    kind = args.kind
    params = {}
    if kind == "trace":
        U = constructions.trace_graph(ctx, args.t)
    elif kind == "jvdv":
        _need(args, "t1", "t2")
        lam = parse_element(ctx, args.lam or "lambda")
        U = constructions.jvdv(lam, args.t1, args.t2)
        params = {"lambda": str(lam), "s": ctx.degree(lam.value), "t1": args.t1, "t2": args.t2}
    elif kind in ("lift", "iclub"):
        _need(args, "t")
        t = args.t
        sbar = _sub(ctx, args.sbar, LINE) if args.sbar else constructions.default_sbar(ctx, t, 1 if args.l is None else args.l)
        b = parse_element(ctx, args.b).value if args.b else constructions.default_b(ctx, sbar, t)
        if args.uprime:
            up = _sub(ctx, args.uprime, PLANE)
        elif kind == "lift":
            up = constructions.trace_graph(ctx, t)
        else:
            up = constructions.base_product(ctx)
        f = constructions.lift if kind == "lift" else constructions.iclub_lift
        U = f(up, sbar, b, t)
        params = {"t": t, "l": sbar.dim // t, "b": str(Element(ctx, b)), "sbar": sbar.text(), "uprime": up.text()}
    else:  # minfam
        _need(args, "m", "j")
        if args.mu is None and args.t is None:
            raise UsageError("minfam needs --mu or --t")
        mu = parse_element(ctx, args.mu if args.mu else f"sub:{args.t}")
        t = ctx.degree(mu.value)
        sbar = _sub(ctx, args.sbar, LINE) if args.sbar else constructions.default_sbar(ctx, t, 1 if args.l is None else args.l)
        b = parse_element(ctx, args.b).value if args.b else constructions.default_b(ctx, sbar, t)
        U = constructions.min_size_family(mu, sbar, b, args.m, args.j)
        params = {"mu": str(mu), "t": t, "l": sbar.dim // t, "m": args.m, "j": args.j, "b": str(Element(ctx, b)), "sbar": sbar.text()}
    return _linset_result(U, {"construction": {"kind": kind, **params}})


def cmd_analyze(ctx: FieldCtx, args) -> Result:
    return _linset_result(_sub(ctx, args.U, PLANE))


def cmd_classify(ctx: FieldCtx, args) -> Result:
    S = _sub(ctx, args.S, LINE)
    mu = parse_element(ctx, args.mu)
    verdict = analysis.classify_min_size_type2(S, mu)
    data = verdict.to_dict()
    data["size_formula"] = analysis.size_formula_type2(S, mu)
    data["field"] = ctx.describe()
    code = EXIT_OK if verdict.consistent else EXIT_CONTRADICTION
    row = {
        "minimum_size": int(verdict.minimum_size),
        "size": verdict.size,
        "case": verdict.decomposition.case,
        "consistent": int(verdict.consistent),
    }
    return Result(data, [row], code)


def cmd_critpair(ctx: FieldCtx, args) -> Result:
    S = _sub(ctx, args.S, LINE)
    T = _sub(ctx, args.T, LINE)
    if args.vosper:
        verdict = analysis.vosper_check(S, T)
    else:
        dP = product_space(S, T).dim
        kn = analysis.kneser_check(S, T)
        verdict = analysis.CriticalPairVerdict((S.dim, T.dim, dP), dP == S.dim + T.dim - 1, kn.stabilizer_t, ctx=ctx)
    data = verdict.to_dict()
    code = EXIT_OK
    if args.bridge:
        res = analysis.critpair_linset_bridge(S, T)
        data["bridge"] = res.to_dict()
        if not res.holds or res.lemma_bound_ok is False:
            code = EXIT_CONTRADICTION
    return Result(data, exit_code=code)


def cmd_equiv(ctx: FieldCtx, args) -> Result:
    if args.S1 or args.S2:
        _need(args, "S1", "S2")
        S1, S2 = _sub(ctx, args.S1, LINE), _sub(ctx, args.S2, LINE)
        T1 = _sub(ctx, args.T1, LINE) if args.T1 else None
        T2 = _sub(ctx, args.T2, LINE) if args.T2 else None
        return Result(equivalence.product_inequivalence(S1, T1, S2, T2).to_dict())
    _need(args, "U1", "U2")
    U1, U2 = _sub(ctx, args.U1, PLANE), _sub(ctx, args.U2, PLANE)
    data = {"schema": "report-v1", "kind": "equivalence", "field": ctx.describe()}
    if args.full_orbit:
        w = equivalence.gamma_l_orbit_equivalent(U1, U2)
        data["verdict"] = "ΓL witness found" if w else "no ΓL witness"
        data["witness"] = None if w is None else {"matrix": [str(Element(ctx, x)) for x in w[0]], "rho": w[1]}
        data["checks"] = equivalence.gamma_l_group_size(ctx)
        return Result(data)
    H1 = analysis.heavy_point_subspace(U1)
    H2 = analysis.heavy_point_subspace(U2)
    if H1 is None or H2 is None or H1.dim != H2.dim:
        data["verdict"] = "heaviest points not comparable"
        data["witness"] = None
        data["checks"] = 0
        return Result(data)
    s = equivalence.scalar_frobenius_equivalent(H1, H2)
    data["verdict"] = "(a,ρ) witness found" if s.witness else "no (a,ρ) witness"
    data.update(s.to_dict())
    return Result(data)


def cmd_dualbasis(ctx: FieldCtx, args) -> Result:
    lam = parse_element(ctx, args.lam)
    db = constructions.dual_basis(lam)

    def el(v):
        return str(Element(ctx, v))

    ident = db.pairing_matrix() == [[int(i == j) for j in range(ctx.n)] for i in range(ctx.n)]
    data = {
        "schema": "report-v1",
        "kind": "dual_basis",
        "lambda": el(db.lam),
        "delta": el(db.delta),
        "gammas": [el(g) for g in db.gammas],
        "dual": [el(d) for d in db.dual],
        "pairing_is_identity": ident,
        "field": ctx.describe(),
    }
    code = EXIT_OK if ident else EXIT_CONTRADICTION
    if args.l is not None:
        W = constructions.power_span_dual(lam, args.l)
        agrees = W == trace_dual(power_span(ctx, lam.value, args.l))
        data["power_span_dual"] = {"l": args.l, "subspace": W.text(), "matches_trace_dual": agrees}
        if not agrees:
            code = EXIT_CONTRADICTION
    rows = [{"i": i, "gamma": data["gammas"][i], "dual": data["dual"][i]} for i in range(ctx.n)]
    return Result(data, rows, code)


def cmd_search(ctx: FieldCtx, args) -> Result:
    h = args.harness
    w = max(1, args.threads)
    lim = {} if args.limit is None else {"limit": args.limit}
    if h == "thm36":
        _need(args, "k", "mu")
        mu = parse_element(ctx, args.mu).value
        rep = search.verify_min_size_type2(ctx, mu, args.k, workers=w, **lim)
    elif h == "thm39":
        _need(args, "k", "r")
        rep = search.verify_prime_complementary(ctx, args.k, args.r, workers=w, **lim)
    elif h == "vosper":
        rep = search.verify_vosper_exhaustive(ctx, args.max_dim, workers=w, **lim)
    elif h == "kneser":
        rep = search.verify_kneser_exhaustive(ctx, args.max_dim or 3, workers=w, **lim)
    elif h == "critprobe":
        _need(args, "k", "r")
        rep = search.probe_critpair_minsize(ctx, args.k, args.r, workers=w, **lim)
    else:
        _need(args, "r")
        if args.samples:
            rep = search.verify_bridge_random(ctx, args.r, args.samples, seed=args.seed, ks=[args.k] if args.k else None, workers=w)
        else:
            _need(args, "k")
            rep = search.verify_bridge_exhaustive(ctx, args.k, args.r, workers=w, **lim)
    data = rep.to_dict()
    data["field"] = ctx.describe()
    return Result(data, rep.csv_rows(), EXIT_CONTRADICTION if rep.discrepancies else EXIT_OK)


COMMANDS = {
    "construct": cmd_construct,
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "critpair": cmd_critpair,
    "equiv": cmd_equiv,
    "dualbasis": cmd_dualbasis,
    "search": cmd_search,
}


def _emit(text: str, out_path: str | None, stream):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        ctx = parse_field_spec(args.field)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        result = COMMANDS[args.command](ctx, args)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except TooLarge as exc:
        stderr.write(f"refused: {exc}\n")
        return EXIT_GUARD
    except InternalContradiction as exc:
        stderr.write(f"internal contradiction: {exc.args[0] if exc.args else exc}\n")
        return EXIT_CONTRADICTION
    except LinsetsError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    _emit(result.render(args.output), args.out, stdout)
    if result.exit_code == EXIT_CONTRADICTION:
        stderr.write("internal contradiction: see report\n")
    return result.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
