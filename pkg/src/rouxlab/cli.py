"""roux-lab command line.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import constructions, graphs, higman, lines, search
from .abelian import parse_character
from .roux import Roux, RouxError, normalize, verify_roux
from .scheme import all_idempotents
from .surd import Surd

EXIT_OK, EXIT_NO, EXIT_BAD = 0, 1, 2


class InputError(Exception):
    pass


def _num(x, as_float: bool):
    if isinstance(x, Surd):
        return float(x) if as_float else x.to_json()
    if isinstance(x, Fraction):
        return float(x) if as_float else (x.numerator if x.denominator == 1 else str(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_roux(path: str) -> Roux:
    obj = _read_json(path)
    try:
        return Roux.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a roux file ({exc})") from exc


def _read_signature(path: str) -> lines.SignatureMatrix:
    obj = _read_json(path)
    try:
        return lines.SignatureMatrix.from_json(obj)
    except (KeyError, TypeError, lines.SignatureError) as exc:
        raise InputError(f"{path}: not a signature file ({exc})") from exc


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, indent=1, sort_keys=False))
    else:
        print(text)


# --------------------------------------------------------------------------
# roux


def cmd_roux_verify(args) -> int:
    try:
        B = _read_roux(args.file)
        params = verify_roux(B)
    except RouxError as exc:
        _emit(args, {"roux": False, "error": str(exc)}, f"not a roux: {exc}")
        return EXIT_NO
    labelled = params.labelled()
    _emit(args, {"roux": True, "n": B.n, "group": list(B.group.orders), "parameters": labelled},
          "roux, parameters " + " ".join(f"{k}:{v}" for k, v in labelled.items()))
    return EXIT_OK


def cmd_roux_normalize(args) -> int:
    B = _read_roux(args.file)
    print(json.dumps(normalize(B).to_json()))
    return EXIT_OK


def cmd_roux_eval(args) -> int:
    B = _read_roux(args.file)
    alpha = parse_character(B.group, args.character)
    print(json.dumps(lines.evaluate(B, alpha).to_json()))
    return EXIT_OK


def cmd_roux_idempotents(args) -> int:
    B = _read_roux(args.file)
    out = []
    idems = all_idempotents(B)
    for P in idems:
        entry = {"alpha": list(P.alpha.exponents), "eps": "+" if P.eps > 0 else "-",
                 "mu": _num(P.mu, args.float), "d": P.d}
        if args.matrices:
            entry["matrix"] = P.to_json()["matrix"]
        out.append(entry)
    text = "\n".join(f"alpha={','.join(map(str, e['alpha']))} eps={e['eps']} d={e['d']} mu={P.mu}"
                     for e, P in zip(out, idems))
    _emit(args, {"idempotents": out}, text)
    return EXIT_OK


def cmd_roux_graph(args) -> int:
    B = _read_roux(args.file)
    if args.edges:
        sys.stdout.write(graphs.edge_list(B))
        return EXIT_OK
    params = verify_roux(B)
    eigs = graphs.spectrum(B, params)
    k = graphs.components(B, params)
    payload = {"vertices": B.n * B.group.order, "components": k,
               "spectrum": [[_num(e.value, args.float), e.multiplicity] for e in eigs]}
    if B.n * B.group.order <= graphs.MAX_BFS_VERTICES:
        diam = graphs.diameter(B)
        payload["diameter"] = None if diam == float("inf") else diam
    dr = graphs.drackn_check(B, params)
    payload["drackn"] = None if dr is None else dr.to_json()
    if dr is not None:
        payload["distance_regular"] = graphs.distance_regular_check(B, params)
    _emit(args, payload)
    return EXIT_OK


# --------------------------------------------------------------------------
# detect


def cmd_detect(args) -> int:
    S = _read_signature(args.file)
    if args.kind == "real":
        yes = lines.detect_real_lines(S)
        _emit(args, {"verdict": "yes" if yes else "no"}, "yes" if yes else "no")
        return EXIT_OK if yes else EXIT_NO
    verdict = lines.detect_roux_lines(S) if args.kind == "roux" else lines.detect_drackn_lines(S)
    payload = verdict.to_json()
    text = "yes" if verdict.yes else "no"
    if verdict.reason:
        text += f" ({verdict.reason})"
    _emit(args, payload, text)
    return EXIT_OK if verdict.yes else EXIT_NO


# --------------------------------------------------------------------------
# construct


def cmd_construct(args) -> int:
    name = args.name
    if name == "conference":
        B = constructions.conference_roux(constructions.conference_iterate(args.k))
    elif name == "thas-somma":
        B = constructions.thas_somma(args.q, args.m)
    elif name == "hoggar":
        B = constructions.hoggar_family(args.k, allow_unsupported=args.allow_unsupported)
    elif name == "psl":
        B = constructions.psl_roux(args.q)
    elif name == "su3-params":
        params, dr = constructions.su3_parameters(args.q, args.r)
        print(json.dumps({"n": dr.n, "parameters": params.labelled(), "drackn": dr.to_json()}))
        return EXIT_OK
    elif name == "maximal-family":
        fam = constructions.maximal_family_parameters(args.j)
        print(json.dumps({"j": fam.j, "n": fam.n, "d": fam.d, "parameters": fam.params.labelled()}))
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown construction {name}")
    print(json.dumps(B.to_json()))
    return EXIT_OK


# --------------------------------------------------------------------------
# higman


def _load_pair(path: str):
    obj = _read_json(path)
    G, H = higman.load_group(obj)
    if H is None:
        raise InputError(f"{path}: group file has no subgroup")
    quotient = None
    if obj.get("subgroup") == "psl":
        quotient = (constructions.C4, [higman.psl_quotient_generator(G)])
    return G, H, quotient


def cmd_higman_verify(args) -> int:
    G, H, _ = _load_pair(args.file)
    cert = higman.verify_higman_pair(G, H)
    payload = cert.to_json()
    if cert.passed:
        payload["double_cosets"] = higman.double_coset_census(cert)
    _emit(args, payload)
    return EXIT_OK if cert.passed else EXIT_NO


def cmd_higman_roux(args) -> int:
    G, H, quotient = _load_pair(args.file)
    cert = higman.verify_higman_pair(G, H)
    if not cert.passed:
        _emit(args, cert.to_json())
        return EXIT_NO
    found = higman.roux_from_higman(cert, quotient=quotient)
    print(json.dumps(found.roux.to_json()))
    return EXIT_OK


# --------------------------------------------------------------------------
# search and lines


def cmd_search(args) -> int:
    rows = search.drackn_feasible(args.max_n, args.r_policy, args.threads)
    if args.check_table:
        ref = [r for r in search.load_reference() if r[1] <= args.max_n]
        report = search.cross_check_table(rows, ref, strict=False)
        payload = {"rows": len(rows), **report.to_json()}
        text = (f"{len(rows)} feasible rows; {report.found}/{report.reference} reference rows found; "
                f"{len(report.extras)} extras")
        if report.extras:
            text += "\nextras (unchecked against external constraints):\n" + "\n".join(
                "  " + " ".join(map(str, e)) for e in report.extras)
        _emit(args, payload, text)
        return EXIT_OK if report.ok else EXIT_NO
    sys.stdout.write(search.to_json(rows) + "\n" if args.json else search.to_tsv(rows))
    return EXIT_OK


def cmd_lines_vectors(args) -> int:
    S = _read_signature(args.file)
    rep = lines.etf_check(S)
    if not rep.is_etf:
        _emit(args, {"etf": False, "reason": rep.reason}, f"not an ETF: {rep.reason}")
        return EXIT_NO
    mu = float(rep.mu)
    fam = lines.vectors_from_gram(np.eye(S.n) + mu * S.values(), d=int(rep.d))
    V = fam.vectors / np.linalg.norm(fam.vectors, axis=0)
    print(json.dumps({"d": fam.d, "n": fam.n,
                      "vectors": [[[float(z.real), float(z.imag)] for z in col] for col in V.T]}))
    return EXIT_OK


def cmd_lines_coherence(args) -> int:
    obj = _read_json(args.file)
    try:
        V = np.array([[complex(*z) for z in col] for col in obj["vectors"]]).T
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.file}: not a vectors file ({exc})") from exc
    d, n = V.shape
    mu = lines.coherence(V)
    wb = lines.welch_bound(n, d)
    _emit(args, {"n": n, "d": d, "coherence": mu, "welch_bound": wb, "welch_equality": abs(mu - wb) < 1e-9},
          f"coherence {mu:.12g}, Welch bound {wb:.12g}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--float", action="store_true", help="print floats instead of exact values")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default ROUX_LAB_THREADS or 1)")

    p = argparse.ArgumentParser(prog="roux-lab", description="Roux, roux schemes, roux lines and roux graphs.")
    top = p.add_subparsers(dest="verb", required=True)

    roux = top.add_parser("roux", help="operations on a roux file").add_subparsers(dest="op", required=True)
    for op, fn in (("verify", cmd_roux_verify), ("normalize", cmd_roux_normalize), ("eval", cmd_roux_eval),
                   ("idempotents", cmd_roux_idempotents), ("graph", cmd_roux_graph)):
        sp = roux.add_parser(op, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=fn)
        if op == "eval":
            sp.add_argument("--character", default=None, help="exponents a1,a2,... (default all 1)")
        if op == "idempotents":
            sp.add_argument("--matrices", action="store_true", help="include the Gram matrices")
        if op == "graph":
            sp.add_argument("--edges", action="store_true", help="print the edge list instead")

    det = top.add_parser("detect", help="line detectors on a signature file").add_subparsers(dest="kind", required=True)
    for kind in ("roux", "real", "drackn"):
        sp = det.add_parser(kind, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=cmd_detect, kind=kind)

    con = top.add_parser("construct", help="build a roux family").add_subparsers(dest="name", required=True)
    sp = con.add_parser("conference", parents=[common])
    sp.add_argument("--k", type=int, default=2, help="size 2^k")
    sp = con.add_parser("thas-somma", parents=[common])
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, default=1)
    sp = con.add_parser("hoggar", parents=[common])
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--allow-unsupported", action="store_true", help="build B_k for k outside {1, 3}")
    sp = con.add_parser("psl", parents=[common])
    sp.add_argument("--q", type=int, required=True)
    sp = con.add_parser("su3-params", parents=[common])
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp = con.add_parser("maximal-family", parents=[common])
    sp.add_argument("--j", type=int, required=True)
    for sub in con.choices.values():
        sub.set_defaults(func=cmd_construct)

    hig = top.add_parser("higman", help="Higman pairs from a group file").add_subparsers(dest="op", required=True)
    for op, fn in (("verify", cmd_higman_verify), ("roux", cmd_higman_roux)):
        sp = hig.add_parser(op, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    sea = top.add_parser("search", help="parameter searches").add_subparsers(dest="what", required=True)
    sp = sea.add_parser("drackn", parents=[common])
    sp.add_argument("--max-n", type=int, default=500)
    sp.add_argument("--r-policy", choices=("odd-primes", "all"), default="odd-primes")
    sp.add_argument("--check-table", action="store_true", help="compare with the shipped reference rows")
    sp.set_defaults(func=cmd_search)

    lin = top.add_parser("lines", help="vectors and coherence").add_subparsers(dest="op", required=True)
    for op, fn in (("vectors", cmd_lines_vectors), ("coherence", cmd_lines_coherence)):
        sp = lin.add_parser(op, parents=[common])
        sp.add_argument("file")
        sp.set_defaults(func=fn)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, RouxError, lines.SignatureError, higman.GroupError, ValueError) as exc:
        print(f"roux-lab: error: {exc}", file=sys.stderr)
        return EXIT_BAD


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
