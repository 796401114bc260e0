"""Command-line front end.

Every subcommand prints a JSON run report on stdout. Exit codes:
0 ok, 2 input invalid, 3 gap infeasible, 4 certificate failure.
"""
import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from sparselog import graphcore, logseries, mmio, models, mollifier, opalg, specgap, trotterize
from sparselog.errors import InputError, SparselogError

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_GAP, EXIT_CERT = 0, 2, 3, 4


class CertificateFailure(SparselogError):
    exit_code = EXIT_CERT


def _dump(obj):
    return json.dumps(obj, indent=2, allow_nan=False)


def _write_json(path, obj):
    Path(path).write_text(_dump(obj) + "\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


def _out(args, name):
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    return outdir / name


def parse_graph(spec):
    """``ring:n``, ``path:n``, ``complete:n`` or a graph text file."""
    if ":" in spec:
        kind, _, size = spec.partition(":")
        builders = {"ring": graphcore.Graph.ring, "path": graphcore.Graph.path, "complete": graphcore.Graph.complete}
        if kind in builders:
            try:
                return builders[kind](int(size))
            except ValueError as exc:
                raise InputError(f"bad graph spec {spec!r}: {exc}") from exc
    path = Path(spec)
    if not path.is_file():
        raise InputError(f"graph spec {spec!r} is neither a builtin nor a file")
    try:
        return graphcore.Graph.parse(path.read_text())
    except ValueError as exc:
        raise InputError(f"cannot parse graph file {spec}: {exc}") from exc


def _profile_rows(report):
    return [(d, v) for d, v in sorted(report.profile.items())]


def cmd_logu(args):
    try:
        u = mmio.read_matrix(args.input)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read Matrix Market file {args.input}: {exc}") from exc
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputError(f"matrix must be square, got shape {u.shape}")
    n = u.shape[0]
    J, series = logseries.build_log_series(u, args.eps, args.gamma_fraction, args.kmax, with_oracle=args.oracle)
    g = graphcore.Graph.from_matrix(u)
    stem = Path(args.input).stem
    paths = {
        "J": _out(args, f"{stem}_J.mtx"),
        "certificate": _out(args, f"{stem}_cert.json"),
        "profile": _out(args, f"{stem}_profile.csv"),
    }
    mmio.write_matrix(paths["J"], J, comment="sparse logarithm J, exp(iJ) ~ exp(i zeta) U")
    # every reported number is recomputed from the written J
    J_file = mmio.read_matrix(paths["J"])
    report = logseries.sparsity_report(series, J_file, g, strict=False)
    err_unitary = opalg.operator_norm(u - logseries.approximate_unitary(J_file, series))
    err_oracle = None
    if args.oracle:
        err_oracle = opalg.operator_norm(opalg.oracle_log(u, series.zeta) - J_file)
    cert = series.certificate(n, containment_ok=report.holds)
    cert["err_unitary"] = err_unitary
    cert["err_vs_oracle"] = err_oracle
    _write_json(paths["certificate"], cert)
    _write_csv(paths["profile"], ["distance", "max_abs"], _profile_rows(report))
    ok = report.holds and err_unitary <= series.tail_bound and (err_oracle is None or err_oracle <= series.tail_bound)
    body = {
        "input": {"path": str(args.input), "dimension": n, "unitary_defect": series.unitary_defect,
                  "gap": series.gap.to_dict()},
        "parameters": {"eps": args.eps, "gamma_fraction": args.gamma_fraction, "gamma": series.gamma,
                       "K": series.K, "kmax": series.kmax, "guideline_K": series.guideline},
        "certified": {"tail_bound": series.tail_bound},
        "measured": {"err_unitary": err_unitary, "err_vs_oracle": err_oracle, "containment_ok": report.holds,
                     "kappa": report.kappa},
        "outputs": {k: str(v) for k, v in paths.items()},
    }
    if not report.holds:
        raise CertificateFailure("J has weight outside the reach pattern")
    if not ok:
        raise CertificateFailure("measured error exceeds the certified tail bound")
    return body


def cmd_trotter(args):
    if args.delta <= 0:
        raise InputError("--delta must be positive")
    g = parse_graph(args.graph)
    plan = trotterize.make_plan(g, args.t, args.delta)
    err = trotterize.trotter_error(plan)
    paths = {"factors": _out(args, "trotter_factors.json"), "errors": _out(args, "trotter_error.json")}
    _write_json(paths["factors"], plan.to_json())
    _write_json(paths["errors"], {"schema": SCHEMA, **err.to_dict()})
    return {
        "input": {"graph": args.graph, "n": g.n, "edges": g.m, "max_degree": graphcore.max_degree(g)},
        "parameters": {"t": args.t, "delta": args.delta, "steps": plan.steps,
                       "residual_delta": plan.residual_delta, "m": plan.m, "lambda": plan.lam},
        "certified": {"bound_first_order": err.bound_first, "bound_second_order": err.bound_second},
        "measured": {"error": err.measured, "error_truncated": err.measured_truncated,
                     "factor_count": err.factor_count, "unitarity_defect": err.unitarity_defect},
        "outputs": {k: str(v) for k, v in paths.items()},
    }


def cmd_walk(args):
    if args.n < 3:
        raise InputError("--n must be at least 3")
    walk = models.build_coined_walk(args.n)
    eig = opalg.unitary_eigensystem(walk.U)
    J, series = logseries.build_log_series(walk.U, args.eps, with_oracle=True)
    report = logseries.sparsity_report(series, J, walk.graph, strict=False)
    paths = {
        "U": _out(args, f"walk{args.n}.mtx"),
        "spectrum": _out(args, f"walk{args.n}_spectrum.csv"),
        "heatmap": _out(args, f"walk{args.n}_logabs.csv"),
        "certificate": _out(args, f"walk{args.n}_cert.json"),
    }
    mmio.write_matrix(paths["U"], walk.U, fmt="coordinate", comment=f"coined Hadamard walk, ring of {args.n}")
    _write_csv(paths["spectrum"], ["k", "phase"], list(enumerate(eig.phases)))
    absJ = np.abs(J)
    _write_csv(paths["heatmap"], [f"c{j}" for j in range(absJ.shape[1])], absJ.tolist())
    _write_json(paths["certificate"], series.certificate(walk.dim, containment_ok=report.holds))
    gap = specgap.find_gap(eig.phases)
    return {
        "input": {"n": args.n, "dimension": walk.dim, "unitary_defect": opalg.unitary_defect(walk.U),
                  "gap": gap.to_dict()},
        "parameters": {"eps": args.eps, "gamma": series.gamma, "K": series.K},
        "certified": {"tail_bound": series.tail_bound},
        "measured": {"err_unitary": series.err_unitary, "err_vs_oracle": series.err_vs_oracle,
                     "containment_ok": report.holds, "kappa": report.kappa,
                     "profile": {str(d): v for d, v in sorted(report.profile.items())}},
        "outputs": {k: str(v) for k, v in paths.items()},
    }


def cmd_qft(args):
    if args.n < 2:
        raise InputError("--n must be at least 2")
    op = models.build_fourier_op(args.n)
    qa = models.fractional_fourier(op, args.alpha, args.eps)
    q2a = models.fractional_fourier(op, 2 * args.alpha, args.eps)
    q1 = models.fractional_fourier(op, 1.0, args.eps)
    _, series = op.log_series(args.eps / 4.0)
    path = _out(args, f"qft{args.n}_alpha{args.alpha:g}.mtx")
    mmio.write_matrix(path, qa, comment=f"fractional Fourier transform, alpha = {args.alpha!r}")
    qa_file = mmio.read_matrix(path)
    checks = {
        "q4_identity_error": opalg.operator_norm(np.linalg.matrix_power(op.Q, 4) - np.eye(args.n)),
        "alpha_one_error": opalg.operator_norm(q1 - op.Q),
        "square_vs_double_alpha": opalg.operator_norm(qa_file @ qa_file - q2a),
        "unitary_defect": opalg.unitary_defect(qa_file),
    }
    if math.isclose(args.alpha, 0.5):
        checks["square_root_error"] = opalg.operator_norm(qa_file @ qa_file - op.Q)
    return {
        "input": {"n": args.n, "gap": series.gap.to_dict()},
        "parameters": {"alpha": args.alpha, "eps": args.eps, "K": series.K, "gamma": series.gamma},
        "certified": {"tail_bound": series.tail_bound},
        "measured": checks,
        "outputs": {"matrix": str(path)},
    }


def cmd_coeffs(args):
    if not 0 < args.gamma < math.pi:
        raise InputError("--gamma must lie in (0, pi)")
    if args.kmax < 1:
        raise InputError("--kmax must be positive")
    layer = mollifier.build_layer(args.gamma, args.kmax)
    path = _out(args, f"coeffs_gamma{args.gamma:g}_k{args.kmax}.csv")
    _write_csv(path, ["k", "re_c", "im_c", "chi_hat", "re_d", "im_d"], mollifier.coeffs_table(layer))
    summary = {}
    if args.kmax >= mollifier.decay_onset_k(args.gamma):
        K = args.kmax // 2
        summary = {"K": K, "tail_bound": mollifier.tail_bound(layer, K),
                   "sawtooth_tail_to_kmax": 2.0 * float(np.sum(1.0 / np.arange(K + 1, args.kmax + 1)))}
    return {
        "input": {},
        "parameters": {"gamma": args.gamma, "kmax": args.kmax},
        "certified": summary,
        "measured": {"rows": 2 * args.kmax + 1},
        "outputs": {"table": str(path)},
    }


def cmd_verify(args):
    cert = json.loads(Path(args.certificate).read_text())
    u = mmio.read_matrix(args.input)
    J = mmio.read_matrix(args.j)
    zeta = cert["zeta"]
    err_unitary = opalg.operator_norm(u - np.exp(-1j * zeta) * opalg.hermitian_exp(J))
    err_oracle = opalg.operator_norm(opalg.oracle_log(u, zeta) - J)
    tail = cert["tail_bound"]
    ok = err_oracle <= tail and err_unitary <= err_oracle + 1e-9
    body = {
        "input": {"certificate": str(args.certificate), "dimension": u.shape[0]},
        "parameters": {"zeta": zeta, "K": cert["K"]},
        "certified": {"tail_bound": tail},
        "measured": {"err_unitary": err_unitary, "err_vs_oracle": err_oracle, "valid": ok},
        "outputs": {},
    }
    if not ok:
        raise CertificateFailure(f"oracle error {err_oracle:.3e} exceeds certified tail {tail:.3e}")
    return body


def build_parser():
    p = argparse.ArgumentParser(prog="sparselog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--outdir", default=".", help="directory for output files")
        sp.add_argument("--no-timing", action="store_true", help="omit wall-clock seconds from the report")

    s = sub.add_parser("logu", help="sparse logarithm of a gapped unitary")
    s.add_argument("input", help="Matrix Market file holding U")
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--gamma-fraction", type=float, default=logseries.GAMMA_FRACTION)
    s.add_argument("--kmax", type=int, default=None)
    s.add_argument("--oracle", action="store_true", help="also compare with the dense eigendecomposition log")
    common(s)
    s.set_defaults(func=cmd_logu)

    s = sub.add_parser("trotter", help="Trotterized exp(itA) over edge-color classes")
    s.add_argument("--graph", required=True, help="ring:n, path:n, complete:n or a graph file")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    common(s)
    s.set_defaults(func=cmd_trotter)

    s = sub.add_parser("walk", help="coined walk on a ring: matrix, spectrum, |log| heatmap")
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--eps", type=float, default=1e-3)
    common(s)
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("qft", help="fractional quantum Fourier transform")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--eps", type=float, default=1e-6)
    common(s)
    s.set_defaults(func=cmd_qft)

    s = sub.add_parser("coeffs", help="sawtooth and smoothed Fourier coefficient table")
    s.add_argument("--gamma", type=float, default=0.5)
    s.add_argument("--kmax", type=int, default=100)
    common(s)
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("verify", help="recheck a logu certificate from files")
    s.add_argument("certificate")
    s.add_argument("--input", required=True, help="Matrix Market file holding U")
    s.add_argument("--j", required=True, help="Matrix Market file holding J")
    common(s)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = ["sparselog"] + list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    try:
        body = args.func(args)
        code = EXIT_OK
        report = {"schema": SCHEMA, "command": command, "status": "ok", **body}
    except SparselogError as exc:
        code = exc.exit_code if exc.exit_code in (EXIT_INPUT, EXIT_GAP, EXIT_CERT) else EXIT_CERT
        report = {"schema": SCHEMA, "command": command, "status": "error",
                  "error": {"type": type(exc).__name__, "message": str(exc), **exc.details()}}
    except (OSError, ValueError) as exc:
        code = EXIT_INPUT
        report = {"schema": SCHEMA, "command": command, "status": "error",
                  "error": {"type": type(exc).__name__, "message": str(exc)}}
    if not args.no_timing:
        report["wall_clock_seconds"] = time.perf_counter() - start
    print(_dump(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
