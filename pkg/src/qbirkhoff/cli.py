"""Command-line surface.

Machine-readable JSON goes to stdout, human commentary to stderr, so the
commands compose in pipelines (``example`` emits channel files that
``analyze``, ``decompose`` and ``classify`` read back, from a path or "-").

Exit codes: 0 ok, 1 invalid input, 2 CP/numerical failure, 3 decomposition
incomplete at the depth bound.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .birkhoff import (
    birkhoff_decompose,
    decomposition_to_dicts,
    loads_ds_matrix,
)
from .catalog import EXAMPLE_NAMES, build_example, build_family
from .channels import (
    Channel,
    KrausFamily,
    NotCompletelyPositive,
    channel_to_dict,
    dumps_channel,
    family_from_dict,
    matrix_to_pairs,
)
from .conjugacy import data_matrix, load_certificate, spectrum_invariant, verify_certificate
from .extremality import (
    CP,
    CP_PHI,
    choi_extremal_test,
    decompose_extremal,
    landau_streater_test,
)
from .numerics import DEFAULT_TOLERANCE, NumericalFailure, Tolerance
from .spectral import classify, cyclic_projections

__all__ = ["main", "run", "build_parser"]


def _tolerance(args) -> Tolerance:
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOLERANCE
    return Tolerance(rank_rel=args.tol, psd_abs=args.tol, eq_abs=args.tol)


def _say(args, text: str):
    if not args.json:
        print(text, file=sys.stderr)


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")


def _example_params(args) -> dict:
    keys = ("n", "z", "z1", "z2", "z3", "x1", "x2", "x3", "m", "lam", "c1", "c2")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _load_family(source: str, args) -> KrausFamily:
    """Channel source: "-" for stdin, a channel file path, or a builtin name."""
    if source != "-" and source in EXAMPLE_NAMES:
        return build_family(source, **_example_params(args))
    data = json.loads(_read_text(source), parse_constant=_reject)
    return family_from_dict(data)


def _reject(token):
    raise ValueError(f"non-finite number {token!r} in input")


def _load_channel(source: str, args, tol: Tolerance) -> Channel:
    return Channel.from_kraus(_load_family(source, args), tol)


def _complex_pairs(values) -> list:
    return [[float(np.real(z)), float(np.imag(z))] for z in values]


def _certificate_dict(cert) -> dict | None:
    if cert is None:
        return None
    return {"kind": cert.kind, "lambda": matrix_to_pairs(cert.lam)}


def _classification_dict(sc) -> dict:
    return {
        "eigenvalues": _complex_pairs(sc.eigenvalues),
        "fixed_dim": sc.fixed_dim,
        "ergodic": sc.ergodic,
        "peripheral": _complex_pairs(sc.peripheral),
        "period": sc.period,
        "aperiodic": sc.aperiodic,
        "strongly_mixing": sc.strongly_mixing,
    }


def cmd_analyze(args) -> int:
    tol = _tolerance(args)
    ch = _load_channel(args.channel, args, tol)
    report = {
        "dim": ch.dim,
        "index": ch.index,
        "unital": ch.unital,
        "trace_preserving": ch.trace_preserving,
    }
    if ch.unital:
        extremal, cert = choi_extremal_test(ch, tol)
        report["choi_extremal"] = {"extremal": extremal, "certificate": _certificate_dict(cert)}
        if ch.trace_preserving:
            ls_extremal, ls_cert = landau_streater_test(ch, tol)
            report["landau_streater"] = {
                "extremal": ls_extremal,
                "certificate": _certificate_dict(ls_cert),
            }
    if ch.is_doubly_stochastic():
        report["spectral"] = _classification_dict(classify(ch, tol))
    report["data_spectrum"] = [float(x) for x in spectrum_invariant(data_matrix(ch, tol=tol))]
    _emit(report)

    flags = []
    flags.append("unital" if ch.unital else "not unital")
    flags.append("trace-preserving" if ch.trace_preserving else "not trace-preserving")
    _say(args, f"channel on M_{ch.dim}, index {ch.index} ({', '.join(flags)})")
    if "choi_extremal" in report:
        verdict = "extremal" if report["choi_extremal"]["extremal"] else "not extremal"
        _say(args, f"unital cone: {verdict}")
    if "landau_streater" in report:
        verdict = "extremal" if report["landau_streater"]["extremal"] else "not extremal"
        _say(args, f"doubly stochastic set: {verdict}")
    if "spectral" in report:
        sp = report["spectral"]
        _say(
            args,
            f"spectral: fixed_dim {sp['fixed_dim']}, "
            f"{'ergodic' if sp['ergodic'] else 'non-ergodic'}"
            + (f", period {sp['period']}" if sp["period"] else "")
            + (", strongly mixing" if sp["strongly_mixing"] else ""),
        )
    return 0


def cmd_decompose(args) -> int:
    tol = _tolerance(args)
    ch = _load_channel(args.channel, args, tol)
    kind = CP_PHI if args.kind == "CP_phi" else CP
    dec = decompose_extremal(ch, kind=kind, max_depth=args.max_depth, tol=tol)
    _emit([{"weight": w, "channel": channel_to_dict(term)} for w, term in dec.terms])
    err = dec.reconstruction_error(ch)
    _say(
        args,
        f"{len(dec.terms)} extremal terms, depth {dec.depth}, "
        f"reconstruction error {err:.2e}"
        + ("" if dec.complete else " — INCOMPLETE at depth bound"),
    )
    return 0 if dec.complete else 3


def cmd_conjugacy(args) -> int:
    tol = _tolerance(args)
    fam_a = _load_family(args.channel_a, args)
    fam_b = _load_family(args.channel_b, args)
    if fam_a.dim != fam_b.dim:
        raise ValueError(f"dimension mismatch: {fam_a.dim} vs {fam_b.dim}")
    spec_a = spectrum_invariant(data_matrix(fam_a, tol=tol))
    spec_b = spectrum_invariant(data_matrix(fam_b, tol=tol))
    match = spec_a.size == spec_b.size and bool(np.max(np.abs(spec_a - spec_b)) <= 1e-8)
    report = {
        "spectrum_a": [float(x) for x in spec_a],
        "spectrum_b": [float(x) for x in spec_b],
        "spectra_match": match,
        "certificate_verified": None,
    }
    if args.certificate:
        cert = load_certificate(args.certificate)
        report["certificate_verified"] = verify_certificate(fam_a, fam_b, cert, tol)
    if not match:
        report["verdict"] = "invariants differ: not conjugate"
    elif report["certificate_verified"] is True:
        report["verdict"] = "certificate verified: conjugate"
    elif report["certificate_verified"] is False:
        report["verdict"] = "certificate FAILED verification (invariants match)"
    else:
        report["verdict"] = "invariants match (no certificate supplied)"
    _emit(report)
    _say(args, report["verdict"])
    return 0


def cmd_birkhoff(args) -> int:
    tol = _tolerance(args)
    ds = loads_ds_matrix(_read_text(args.matrix), tol)
    dec = birkhoff_decompose(ds, tol)
    _emit(decomposition_to_dicts(dec))
    err = float(np.max(np.abs(dec.mixture() - ds.matrix)))
    _say(
        args,
        f"{len(dec.terms)} permutation terms, weight sum {dec.total_weight():.12f}, "
        f"reconstruction error {err:.2e}",
    )
    return 0


def cmd_example(args) -> int:
    try:
        ch = build_example(args.name, **_example_params(args))
    except KeyError as exc:
        raise ValueError(str(exc)) from exc
    sys.stdout.write(dumps_channel(ch))
    sys.stdout.write("\n")
    _say(args, f"{args.name}: channel on M_{ch.dim}, index {ch.index}")
    return 0


def cmd_classify(args) -> int:
    tol = _tolerance(args)
    ch = _load_channel(args.channel, args, tol)
    sc = classify(ch, tol)
    report = _classification_dict(sc)
    report["cyclic_projections"] = None
    period = sc.period if sc.period is not None else 0
    if period > 1:
        fam = cyclic_projections(ch, tol)
        if fam is not None:
            report["cyclic_projections"] = [matrix_to_pairs(e) for e in fam.projections]
    _emit(report)
    _say(
        args,
        f"fixed_dim {sc.fixed_dim}; "
        + ("ergodic" if sc.ergodic else "non-ergodic")
        + (f"; period {sc.period}" if sc.period else "")
        + ("; strongly mixing" if sc.strongly_mixing else ""),
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbirkhoff",
        description="Extremality, ergodic structure and Birkhoff-style "
        "decompositions of doubly stochastic channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None, help="override all tolerance cutoffs")
        p.add_argument("--json", action="store_true", help="machine output only (mute stderr text)")

    def example_params(p):
        p.add_argument("--n", type=int, help="algebra size for identity/depolarizing")
        p.add_argument("--z", type=complex, help="multiplier for ex2.8")
        p.add_argument("--z1", type=complex)
        p.add_argument("--z2", type=complex)
        p.add_argument("--z3", type=complex)
        p.add_argument("--x1", type=float)
        p.add_argument("--x2", type=float)
        p.add_argument("--x3", type=float)
        p.add_argument("--m", type=int, help="index parameter for ex2.12")
        p.add_argument("--lam", type=float, help="mixing weight for the ex2.12 variant")
        p.add_argument("--c1", type=float)
        p.add_argument("--c2", type=float)

    p = sub.add_parser("analyze", help="validation, extremality, spectra of a channel")
    p.add_argument("channel", help='channel file, "-" for stdin, or a builtin name')
    common(p)
    example_params(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", help="convex decomposition into extremal channels")
    p.add_argument("channel")
    p.add_argument("--kind", choices=("CP", "CP_phi"), default="CP_phi")
    p.add_argument("--max-depth", type=int, default=64)
    common(p)
    example_params(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("conjugacy", help="conjugacy invariants and certificate check")
    p.add_argument("channel_a")
    p.add_argument("channel_b")
    p.add_argument("--certificate", help="certificate JSON file to verify")
    common(p)
    example_params(p)
    p.set_defaults(func=cmd_conjugacy)

    p = sub.add_parser("birkhoff", help="permutation decomposition of a stochastic matrix")
    p.add_argument("matrix", help='matrix JSON file or "-"')
    common(p)
    p.set_defaults(func=cmd_birkhoff)

    p = sub.add_parser("example", help="emit a builtin channel file")
    p.add_argument("name", help=", ".join(EXAMPLE_NAMES))
    common(p)
    example_params(p)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("classify", help="spectral/ergodic classification")
    p.add_argument("channel")
    common(p)
    example_params(p)
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (NotCompletelyPositive, NumericalFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())
