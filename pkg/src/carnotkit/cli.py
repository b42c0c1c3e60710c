"""Command-line front end: ``carnotkit construct ...`` and ``carnotkit check ...``.

Exit codes: 0 when the tool ran (verdicts are data), 1 when ``--expect``
does not match or verify-paper fails, 2 on bad input or resource limits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog as cat
from .claims import PAPER_FLAGS, run_all
from .equisolve import O, SO, RepresentationError, equivariant_maps, parse_rep
from .freenilp import ResourceLimitError, build_free, witt_ranks
from .holonomy import DichotomyError, HomogeneousModelData, flatness_check, holonomy_dichotomy, step_and_growth, validate
from .liecore import from_json, jacobi_check, to_json, vectors_from_json, vectors_to_json
from .modelcheck import NotBracketGenerating, carnot_isomorphic, lie_model_check, nilpotentize
from .ratlin import Mat, q, q_str, span, zero_space

DEFAULT_MAX_DIM = 200

CONSTRUCT_KINDS = ("free", "carnot_c", "c3_quotient", "riemannian", "model_m", "heisenberg", "engel", "rolling_sum")
CHECK_KINDS = (
    "jacobi", "growth", "model", "holonomy", "flat", "nilpotentize", "carnot-iso", "equivariant", "verify-paper",
)


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return q(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_rational(t) for t in text.split(",") if t.strip())


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


# --- construct -----------------------------------------------------------------


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.kind} needs {', '.join(missing)}")


def _mat_json(m: Mat) -> list[list[str]]:
    return [[q_str(x) for x in row] for row in m.entries]


def data_to_json(H: HomogeneousModelData, extra: dict | None = None) -> dict:
    out = to_json(H.g)
    marks = {
        "horizontal": vectors_to_json(H.p1.basis),
        "isotropy": vectors_to_json(H.k.basis),
        "gram": _mat_json(H.gram),
    }
    if H.g.layers is not None:
        marks["layers"] = [len(H.g.layer_indices(m)) for m in range(1, H.g.step + 1)]
    if extra:
        marks.update(extra)
    out["marks"] = marks
    return out


def build(args) -> dict:
    kind = args.kind
    if kind == "free":
        _need(args, "n", "r")
        F = build_free(args.n, args.r, max_dim=args.max_dim)
        return data_to_json(HomogeneousModelData.carnot(F.algebra), {"kind": "free", "n": args.n, "r": args.r})
    if kind == "carnot_c":
        _need(args, "n", "r")
        _check_dim(2 * args.n * args.r, args.max_dim)
        return data_to_json(cat.carnot_c(args.n, args.r), {"kind": kind, "n": args.n, "r": args.r})
    if kind == "c3_quotient":
        _need(args, "n")
        _check_dim(sum(witt_ranks(args.n, 3)), args.max_dim)
        H, a, _ = cat.c3_quotient(args.n)
        return data_to_json(H, {"kind": kind, "n": args.n, "ideal": vectors_to_json(a.basis)})
    if kind == "riemannian":
        _need(args, "n", "rho")
        if len(args.rho) != 1:
            raise InputError("riemannian takes a single --rho value")
        H = cat.riemannian_model(args.n, args.rho[0])
        return data_to_json(H, {"kind": kind, "n": args.n, "rho": q_str(args.rho[0])})
    if kind == "model_m":
        _need(args, "n")
        a1 = args.a1 if args.a1 is not None else Fraction(0)
        a2 = args.a2 if args.a2 is not None else Fraction(0)
        H = cat.model_m(args.n, a1, a2)
        consts = {k: q_str(v) for k, v in cat.model_m_constants(a1, a2).items()}
        return data_to_json(H, {"kind": kind, "n": args.n, "a1": q_str(a1), "a2": q_str(a2), "constants": consts})
    if kind == "heisenberg":
        k = args.k if args.k is not None else args.n
        if k is None:
            raise InputError("heisenberg needs --k")
        return data_to_json(cat.heisenberg(k), {"kind": kind, "k": k})
    if kind == "engel":
        return data_to_json(cat.engel(), {"kind": kind})
    if kind == "rolling_sum":
        _need(args, "n", "rho")
        rs = cat.rolling_sum_algebra(cat.RollingSpec(args.n, args.rho))
        return data_to_json(rs.data, {"kind": kind, "n": args.n, "rho": [q_str(x) for x in args.rho]})
    raise InputError(f"unknown kind {kind!r}")


def _check_dim(dim: int, limit: int) -> None:
    if dim > limit:
        raise InputError(f"dimension {dim} exceeds --max-dim {limit}")


def cmd_construct(args) -> int:
    text = dumps(build(args)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# --- check ---------------------------------------------------------------------


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_data(path: str) -> HomogeneousModelData:
    """Algebra plus marks; without marks the first layer is horizontal and k = 0."""
    raw = load_json(path)
    try:
        g = from_json(raw)
        marks = raw.get("marks", {})
        if "horizontal" in marks:
            p1 = span(vectors_from_json(marks["horizontal"]), g.dim)
        elif g.layers is not None:
            p1 = g.layer_space(1)
        else:
            raise InputError(f"{path}: no horizontal subspace (marks.horizontal or layers)")
        k = span(vectors_from_json(marks["isotropy"]), g.dim) if marks.get("isotropy") else zero_space(g.dim)
        gram = Mat([[q(Fraction(x)) for x in row] for row in marks["gram"]]) if "gram" in marks else Mat.identity(p1.dim)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed input ({exc})") from exc
    return HomogeneousModelData(g, k, p1, gram)


def _validated(path: str) -> HomogeneousModelData:
    H = load_data(path)
    rep = validate(H)
    if not rep.ok:
        raise InputError(f"{path}: invalid model data: " + "; ".join(rep.violations))
    return H


def _one_input(args) -> str:
    if len(args.inputs) != 1:
        raise InputError(f"check {args.kind} takes exactly one input file")
    return args.inputs[0]


def run_check(args) -> dict:
    kind = args.kind
    rep: dict = {}
    if kind == "jacobi":
        L = _load_algebra(_one_input(args))
        res = jacobi_check(L)
        rep["verdict"] = "pass" if res.ok else "fail"
        rep["dims"] = [L.dim]
        if not res.ok:
            rep["witness"] = {"triple": list(res.triple), "residual": [q_str(x) for x in res.residual]}
    elif kind == "growth":
        H = _validated(_one_input(args))
        gr = step_and_growth(H)
        rep["verdict"] = "bracket-generating" if gr.exhausts else "not-bracket-generating"
        rep["dims"] = list(gr.dims)
        rep["step"] = gr.step
    elif kind == "model":
        L = _load_algebra(_one_input(args))
        _guard_free(L, args.max_dim)
        res, F = lie_model_check(L, max_dim=args.max_dim)
        rep["verdict"] = res.verdict
        rep["dims"] = list(res.invariance_dims)
        rep["free_dim"] = F.dim
        if res.witness is not None:
            w = res.witness
            rep["witness"] = {
                "kind": w.kind,
                "generator": list(w.generator) if w.generator else None,
                "vector": [q_str(x) for x in w.vector],
                "image": [q_str(x) for x in w.image],
            }
    elif kind == "holonomy":
        H = _validated(_one_input(args))
        res = holonomy_dichotomy(H)
        rep["verdict"] = res.verdict
        rep["dims"] = [res.generated.dim, H.k.dim, H.g.dim]
        rep["decomposition"] = res.decomposition_kind
    elif kind == "flat":
        H = _validated(_one_input(args))
        res = flatness_check(H)
        rep["verdict"] = res.is_flat
        rep["dims"] = [res.subalgebra.dim] if res.subalgebra is not None else []
    elif kind == "nilpotentize":
        H = _validated(_one_input(args))
        nil = nilpotentize(H)
        rep["verdict"] = "ok"
        rep["dims"] = list(nil.layer_dims)
        rep["algebra"] = data_to_json(HomogeneousModelData.carnot(nil.algebra))
    elif kind == "carnot-iso":
        if len(args.inputs) != 2:
            raise InputError("check carnot-iso takes two input files")
        a, b = (_load_graded(p) for p in args.inputs)
        for H in (a, b):
            _guard_free(H.g, args.max_dim)
        rep["verdict"] = carnot_isomorphic(a.g, b.g, a.gram, b.gram)
        rep["dims"] = [a.g.dim, b.g.dim]
    elif kind == "equivariant":
        if args.src is None or args.dst is None:
            raise InputError("check equivariant needs --src and --dst")
        try:
            src, dst = parse_rep(args.src, args.group), parse_rep(args.dst, args.group)
            space = equivariant_maps(src, dst)
        except RepresentationError as exc:
            raise InputError(str(exc)) from exc
        rep["verdict"] = space.dim
        rep["dims"] = [space.dim, src.module_dim, dst.module_dim]
        rep["basis"] = [_mat_json(m) for m in space.basis]
        rep["group"] = args.group
    elif kind == "verify-paper":
        results = run_all(args.seed)
        ok = all(r.passed for r in results)
        rep["verdict"] = "pass" if ok else "fail"
        rep["claims"] = [
            {"id": r.key, "title": r.title, "passed": r.passed, "details": r.details} for r in results
        ]
        rep["dims"] = [sum(r.passed for r in results), len(results)]
    else:
        raise InputError(f"unknown check {kind!r}")
    return rep


def _load_algebra(path: str):
    raw = load_json(path)
    try:
        return from_json(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed algebra ({exc})") from exc


def _load_graded(path: str) -> HomogeneousModelData:
    H = load_data(path)
    if H.g.layers is None:
        raise InputError(f"{path}: algebra carries no grading")
    return H


def _guard_free(L, limit: int) -> None:
    if L.layers is None:
        raise InputError("algebra carries no grading")
    n = len(L.layer_indices(1))
    dim = sum(witt_ranks(n, L.step)) if n else 0
    _check_dim(dim, limit)


def _verdict_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v).lower()


def cmd_check(args, argv: Sequence[str]) -> int:
    rep = run_check(args)
    rep["command"] = ["check", *argv]
    rep["check"] = args.kind
    rep["paper_flags"] = [dict(f) for f in PAPER_FLAGS]
    code = 0
    if args.kind == "verify-paper" and rep["verdict"] != "pass":
        code = 1
    if args.expect is not None:
        matched = _verdict_text(rep["verdict"]) == args.expect.strip().lower()
        rep["expect"] = {"wanted": args.expect, "matched": matched}
        if not matched:
            code = 1
    sys.stdout.write(dumps(rep) + "\n")
    return code


# --- entry ---------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carnotkit", description="Exact checks for sub-Riemannian model spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a catalog algebra and write LieAlgebra JSON with marks")
    con.add_argument("kind", choices=CONSTRUCT_KINDS)
    con.add_argument("--n", type=int)
    con.add_argument("--r", type=int)
    con.add_argument("--k", type=int, help="heisenberg index (horizontal rank 2k)")
    con.add_argument("--rho", type=_rational_list, help="comma-separated rationals, e.g. 1,-1 or 1/2")
    con.add_argument("--a1", type=_rational)
    con.add_argument("--a2", type=_rational)
    con.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    con.add_argument("-o", "--out", help="output path (default stdout)")

    chk = sub.add_parser("check", help="run a check and print a JSON report")
    chk.add_argument("kind", choices=CHECK_KINDS)
    chk.add_argument("inputs", nargs="*", help="LieAlgebra JSON files")
    chk.add_argument("--expect", help="exit 1 unless the verdict equals this value")
    chk.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    chk.add_argument("--seed", type=int, default=0, help="seed for sampled orthogonal matrices")
    chk.add_argument("--src", help="source representation, e.g. adjoint:4")
    chk.add_argument("--dst", help="target representation, e.g. tensor:adjoint:3,vector:3")
    chk.add_argument("--group", choices=(O, SO), default=O)
    return parser


_VALUE_FLAGS = ("--rho", "--a1", "--a2")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--rho -1/2`` into ``--rho=-1/2`` so argparse does not read an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_FLAGS and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] in "./"):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "construct":
            return cmd_construct(args)
        return cmd_check(args, argv[1:])
    except (InputError, ResourceLimitError, NotBracketGenerating, DichotomyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
