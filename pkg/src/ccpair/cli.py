"""Command-line front end: ``ccpair <command> [options]``.

Exit codes: 0 success, 2 parse or validation error, 3 search failure, 4 not applicable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .anorm import MatrixPair, a_norm, dual_norm_numeric, dual_norm_parabola, dual_parabola_branch, in_unit_ball
from .canonical import classify
from .contractivity import VPair, cc_bound, lv_norm
from .errors import CCPairError, NotApplicable, ParseError, SearchFailure
from .linalg import DEFAULT_TOL
from .search import Certificate, SearchConfig, search

EXIT_OK, EXIT_INPUT, EXIT_SEARCH, EXIT_NA = 0, 2, 3, 4


# -- JSON encoding ---------------------------------------------------------------------------


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj, name: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError(f"{name}: expected an object with rows, cols, re, im")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((rows, cols)).tolist()), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{name}: {exc}") from None
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise ParseError(f"{name}: re/im shapes {re.shape}, {im.shape} do not match {rows}x{cols}")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ParseError(f"{name}: entries must be finite")
    return re + 1j * im


def _cx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _vec(v) -> list:
    return [_cx(x) for x in np.asarray(v).reshape(-1)]


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "pair": {"A1": matrix_to_json(cert.pair.A1), "A2": matrix_to_json(cert.pair.A2)},
        "uv": {"u": cert.uv.u, "v": cert.uv.v},
        "V": {"V1": matrix_to_json(cert.V.V1), "V2": matrix_to_json(cert.V.V2)},
        "beta0": _vec(cert.beta0),
        "lv_value": cert.lv_value,
        "violation": cert.violation,
        "inf_g_value": cert.inf_g_value,
        "schwarz_gap_at_beta0": cert.schwarz_gap_at_beta0,
        "config": cert.config.to_dict(),
        "family": cert.family.to_dict(),
        "mode": cert.mode,
        "lambda0": cert.lambda0,
        "source_pair": {"A1": matrix_to_json(cert.source_pair.A1), "A2": matrix_to_json(cert.source_pair.A2)},
        "source_V": {"V1": matrix_to_json(cert.source_V.V1), "V2": matrix_to_json(cert.source_V.V2)},
        "notes": list(cert.notes),
    }


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_pair(path: str) -> MatrixPair:
    obj = _load_json(path)
    if isinstance(obj, dict) and "certificate" in obj:
        obj = obj["certificate"]["source_pair"]
    if not isinstance(obj, dict) or "A1" not in obj or "A2" not in obj:
        raise ParseError(f"{path}: expected an object with keys A1 and A2")
    return MatrixPair(matrix_from_json(obj["A1"], "A1"), matrix_from_json(obj["A2"], "A2"))


def load_vpair(path: str) -> VPair:
    obj = _load_json(path)
    if isinstance(obj, dict) and "certificate" in obj:
        obj = obj["certificate"]["source_V"]
    if not isinstance(obj, dict) or "V1" not in obj or "V2" not in obj:
        raise ParseError(f"{path}: expected an object with keys V1 and V2")
    return VPair(matrix_from_json(obj["V1"], "V1"), matrix_from_json(obj["V2"], "V2"))


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ParseError(f"cannot parse {text!r} as a complex number") from None


# -- commands --------------------------------------------------------------------------------


def cmd_norm(args) -> dict:
    pair = load_pair(args.pair)
    z = (parse_complex(args.z1), parse_complex(args.z2))
    val = a_norm(pair, z)
    return {"inputs": {"pair": args.pair, "z": [_cx(z[0]), _cx(z[1])]},
            "outputs": {"value": val, "in_unit_ball": in_unit_ball(pair, z, args.tol)}}


def cmd_dual_norm(args) -> dict:
    pair = load_pair(args.pair)
    w = (parse_complex(args.w1), parse_complex(args.w2))
    matches = pair.allclose(MatrixPair.parabola(), 1e-10)
    if args.closed_form and not matches:
        raise ParseError("closed form unavailable: the pair is not (I, E12)")
    out = {"value": dual_norm_numeric(pair, w)}
    if matches:
        out["closed_form"] = dual_norm_parabola(w)
        out["branch"] = dual_parabola_branch(w)
    return {"inputs": {"pair": args.pair, "w": [_cx(w[0]), _cx(w[1])]}, "outputs": out}


def cmd_classify(args) -> dict:
    pair = load_pair(args.pair)
    return {"inputs": {"pair": args.pair}, "outputs": classify(pair).to_dict()}


def cmd_check(args) -> dict:
    pair = load_pair(args.pair)
    V = load_vpair(args.V)
    lv = lv_norm(pair, V)
    cc = cc_bound(pair, V)
    contractive = lv <= 1.0 + args.tol
    violated = cc > 1.0 + args.tol
    return {"inputs": {"pair": args.pair, "V": args.V},
            "outputs": {"lv_norm": lv, "cc_bound": cc, "contractive": contractive,
                        "cc_violated": violated, "margin": cc - 1.0}}


def cmd_search(args) -> dict:
    pair = load_pair(args.pair)
    cfg = SearchConfig(cert_margin=args.margin, seed=args.seed)
    cert = search(pair, cfg)
    return {"inputs": {"pair": args.pair, "margin": args.margin},
            "outputs": {"family": cert.family.tag, "uv": [cert.uv.u, cert.uv.v],
                        "lv_value": cert.lv_value, "violation": cert.violation},
            "certificate": certificate_to_json(cert)}


def cmd_verify_paper(args) -> dict:
    from .verify import run_all

    results = run_all(perturb=args.perturb)
    if not args.json:
        for r in results:
            print(r.line())
    return {"inputs": {"perturb": args.perturb},
            "outputs": {"results": [r.to_dict() for r in results],
                        "all_passed": all(r.passed for r in results)},
            "_exit": EXIT_OK if all(r.passed for r in results) else 1}


def _global_flags(top: bool) -> argparse.ArgumentParser:
    # Subcommands accept the same flags; SUPPRESS keeps them from overwriting values given earlier.
    def dflt(x):
        return x if top else argparse.SUPPRESS

    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--tol", type=float, default=dflt(DEFAULT_TOL), help="numerical tolerance (default 1e-9)")
    g.add_argument("--seed", type=int, default=dflt(0))
    g.add_argument("--json", action="store_true", default=dflt(False), help="print the JSON report")
    g.add_argument("--stable", action="store_true", default=dflt(False),
                   help="omit wall time so reports are byte-identical")
    g.add_argument("--out", default=dflt(None), help="write the JSON report to this file")
    return g


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ccpair", description=__doc__.splitlines()[0], parents=[_global_flags(True)])
    g = _global_flags(False)
    p.add_argument("--version", action="version", version=f"ccpair {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", parents=[g], help="A-norm of z and unit-ball membership")
    s.add_argument("pair")
    s.add_argument("z1")
    s.add_argument("z2")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("dual-norm", parents=[g], help="dual A-norm of w")
    s.add_argument("pair")
    s.add_argument("w1")
    s.add_argument("w2")
    s.add_argument("--closed-form", action="store_true", help="require the closed form for (I, E12)")
    s.set_defaults(func=cmd_dual_norm)

    s = sub.add_parser("classify", parents=[g], help="canonical family of a 2x2 pair")
    s.add_argument("pair")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("check", parents=[g], help="level-1 and level-2 norms of the map given by V")
    s.add_argument("pair")
    s.add_argument("V")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("search", parents=[g], help="search for a contractive, not completely contractive map")
    s.add_argument("pair")
    s.add_argument("--margin", type=float, default=1e-4, help="minimum certified violation")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify-paper", parents=[g], help="run the acceptance checks")
    s.add_argument("--perturb", type=float, default=0.0, help="shift the witness constant u by this amount")
    s.set_defaults(func=cmd_verify_paper)
    return p


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    elif args.command != "verify-paper":
        _print_human(report)


def _print_human(report: dict) -> None:
    for key, val in report["outputs"].items():
        if isinstance(val, float):
            print(f"{key}: {float(val)!r}")
        elif isinstance(val, (dict, list)):
            print(f"{key}: {json.dumps(val)}")
        else:
            print(f"{key}: {val}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    report = {"command": args.command, "version": __version__,
              "tolerances": {"tol": args.tol}}
    try:
        body = args.func(args)
    except SearchFailure as exc:
        print(f"error: search failed: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except NotApplicable as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return EXIT_NA
    except (CCPairError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code = body.pop("_exit", EXIT_OK)
    report.update(body)
    if args.command == "search":
        report["tolerances"].update(report["certificate"]["config"])
    if not args.stable:
        report["wall_time"] = time.perf_counter() - t0
    _emit(report, args)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
