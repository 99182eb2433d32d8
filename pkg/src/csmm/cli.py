"""Command-line front end.

Every subcommand prints one JSON document on stdout.  Exact values are
strings (``"-181/30"``), polynomials in ``N`` are ``{degree: coefficient}``
maps and series in ``hbar`` are ``{exponent: polynomial}`` maps.  Floats are
written with ``repr`` so identical runs give identical bytes.

Exit status: 0 on success, 1 on a computation error (with
``{"error": {"code", "message"}}`` on stdout), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import arithgeo, corealg, diagrams, gaussmm, seifert, symfun, wrt2
from .corealg import scalar_from_str, scalar_to_str

SUBCOMMANDS = (
    "moment", "schur", "pair", "weight", "dedekind", "rademacher", "seifert-data",
    "seifert-z", "numeric-z", "gue-mc", "wrt-su2", "selftest",
)

#: operation -> a subcommand invocation that reaches it (checked by the test suite)
COVERAGE: Dict[str, List[str]] = {
    "corealg.scalar": ["dedekind", "1", "3"],
    "corealg.scalar_to_str": ["dedekind", "1", "3"],
    "corealg.scalar_from_str": ["moment", "--partition", "2", "--at", "3/2"],
    "corealg.npoly_eval": ["moment", "--partition", "2", "--at", "3/2"],
    "corealg.series_mul": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "corealg.series_log": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "corealg.series_exp": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "symfun.partitions_of": ["schur", "--partition", "2", "--expand"],
    "symfun.z_factor": ["schur", "--partition", "2"],
    "symfun.sym_character": ["schur", "--partition", "2"],
    "symfun.symfunc_mul": ["seifert-z", "--pairs", "2/1", "--order", "4"],
    "symfun.symfunc_scale": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "symfun.symfunc_substitute_scale": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "symfun.symfunc_exp": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "symfun.powersum_to_schur": ["schur", "--partition", "1,1", "--to-schur"],
    "symfun.schur_to_powersum": ["schur", "--partition", "2"],
    "diagrams.wheel": ["weight", "--wheel", "2"],
    "diagrams.theta": ["weight", "--theta", "--rank", "2"],
    "diagrams.ribbon_R": ["pair", "--partition", "2", "--m", "1"],
    "diagrams.psi": ["weight", "--wheel", "2"],
    "diagrams.phi": ["weight", "--wheel", "2"],
    "diagrams.perfect_matchings": ["pair", "--partition", "2", "--m", "1"],
    "diagrams.lmo_pair": ["pair", "--partition", "2", "--m", "1"],
    "diagrams.glN_bruteforce": ["weight", "--theta", "--rank", "2"],
    "gaussmm.wick_matchings": ["moment", "--partition", "2"],
    "gaussmm.gauss_moment": ["moment", "--partition", "2"],
    "gaussmm.gauss_moment_multicolor": ["moment", "--partition", "2", "--partition", "1,1"],
    "gaussmm.gauss_integrate": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "gaussmm.schur_expectation": ["schur", "--partition", "2"],
    "gaussmm.harer_zagier": ["moment", "--partition", "4", "--harer-zagier"],
    "gaussmm.free_energy": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "arithgeo.dedekind_sum": ["dedekind", "1", "3"],
    "arithgeo.dedekind_sum_cot": ["dedekind", "1", "3", "--method", "cot"],
    "arithgeo.rademacher_phi": ["rademacher", "1", "0", "1", "1"],
    "arithgeo.seifert_data": ["seifert-data", "--pairs", "2/1,3/1,5/-4"],
    "arithgeo.linking_signature": ["wrt-su2", "--lens", "1", "1", "--level", "1"],
    "arithgeo.parse_pairs": ["seifert-data", "--pairs", "2/1,3/1,5/-4"],
    "seifert.omega_coeffs": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.wheel_image": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.seifert_potential": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.stringp_violations": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.theta_prefactor": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.lmo_seifert_ratio": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.lmo_seifert_partition": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.lmo_seifert_free_energy": ["seifert-z", "--pairs", "2/1", "--order", "2"],
    "seifert.seifert_kernel": ["numeric-z", "--pairs", "2/1", "--N", "2", "--hbar", "0.1"],
    "seifert.seifert_integral_numeric": ["numeric-z", "--pairs", "2/1", "--N", "2", "--hbar", "0.1"],
    "seifert.gue_sample_many": ["gue-mc", "--N", "2", "--partition", "2", "--samples", "2000"],
    "seifert.gue_sample_moments": ["gue-mc", "--N", "2", "--partition", "2", "--samples", "2000"],
    "wrt2.complete_sl2z": ["wrt-su2", "--lens", "2", "1", "--level", "2"],
    "wrt2.u_matrix_element_su2": ["wrt-su2", "--lens", "2", "1", "--level", "2"],
    "wrt2.u_matrix_su2": ["wrt-su2", "--lens", "2", "1", "--level", "2", "--matrix"],
    "wrt2.s_matrix_su2": ["wrt-su2", "--lens", "2", "1", "--level", "2"],
    "wrt2.wrt_lens_su2": ["wrt-su2", "--lens", "2", "1", "--level", "2"],
}


class CLIError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# helpers


def _partition(text: str) -> symfun.Partition:
    text = text.strip()
    if text in ("", "()", "empty"):
        return symfun.Partition(())
    try:
        return symfun.Partition(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CLIError("bad-partition", f"cannot read partition {text!r}: {exc}") from None


def _parse_numeric_opts(text: str) -> Dict[str, float]:
    out = {"N": 2.0, "hbar": 0.02}
    for item in text.split(","):
        if not item.strip():
            continue
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in out:
            raise CLIError("bad-numeric", f"unknown numeric key {key!r}")
        out[key] = float(val)
    return out


def read_config(path: str) -> Dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise CLIError("bad-config", f"{path}:{lineno}: expected key=value")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _threads(args) -> Optional[int]:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("CSMM_THREADS")
    return int(env) if env else None


# ---------------------------------------------------------------------------
# subcommands


def cmd_moment(args) -> dict:
    parts = [_partition(p) for p in args.partition]
    if len(parts) == 1:
        value = gaussmm.gauss_moment(parts[0])
    else:
        value = gaussmm.gauss_moment_multicolor(parts)
    out = {"result": value.to_json()}
    if args.harer_zagier:
        lam = parts[0]
        if len(parts) != 1 or len(lam) != 1 or lam[0] % 2:
            raise CLIError("bad-partition", "--harer-zagier needs a single even part (2m)")
        hz = gaussmm.harer_zagier(lam[0] // 2)
        out["harer_zagier"] = hz.to_json()
        out["agree"] = hz == value
    if args.at is not None:
        out["value"] = scalar_to_str(corealg.npoly_eval(value, scalar_from_str(args.at)))
    return out


def cmd_schur(args) -> dict:
    lam = _partition(args.partition)
    if args.to_schur:
        expansion = symfun.powersum_to_schur(lam)
        return {"result": {",".join(map(str, k)) or "()": scalar_to_str(v) for k, v in expansion.items()}}
    out = {"result": gaussmm.schur_expectation(lam).to_json()}
    if args.expand:
        f = symfun.schur_to_powersum(lam, order=0)
        out["powersum"] = {
            ",".join(map(str, key[0])) or "()": scalar_to_str(c[0].coefficients.get(0, Fraction(0)))
            for key, c in f
        }
        out["chi"] = {
            ",".join(map(str, mu)): symfun.sym_character(lam, mu)
            for mu in symfun.partitions_of(lam.weight)
        }
    return out


def _diagram_from_args(args) -> diagrams.JacobiDiagram:
    if args.theta:
        return diagrams.theta()
    if args.wheel is not None:
        d = diagrams.wheel(args.wheel)
        if args.close:
            legs = list(range(len(d.legs)))
            d = d.close_legs(list(zip(legs[0::2], legs[1::2])))
        return d
    raise CLIError("no-diagram", "give --wheel n or --theta")


def cmd_pair(args) -> dict:
    if args.partition is not None:
        target = _partition(args.partition)
    else:
        target = diagrams.psi(_diagram_from_args(args))
    value = diagrams.lmo_pair(target, args.m, literal=args.literal, grading="normalized")
    out = {"result": value[0].to_json()}
    try:
        out["series"] = diagrams.lmo_pair(target, args.m, literal=args.literal).to_json()
    except ValueError:
        out["series"] = None  # chi above the hbar^-2 floor; only the normalized value exists
    return out


def cmd_weight(args) -> dict:
    d = _diagram_from_args(args)
    image = diagrams.phi(diagrams.psi(d), order=args.order)
    out = {"result": image.to_json(), "diagram": d.to_json()}
    if d.is_closed():
        value = gaussmm.gauss_integrate(image).strip_hbar()
        out["closed_value"] = value.to_json()
        if args.rank is not None:
            brute = diagrams.glN_bruteforce(d, args.rank)
            out["bruteforce"] = scalar_to_str(brute)
            out["agree"] = corealg.npoly_eval(value, args.rank) == brute
    return out


def cmd_dedekind(args) -> dict:
    if args.method == "cot":
        value = arithgeo.dedekind_sum_cot(args.p, args.q)
        exact = arithgeo.dedekind_sum(args.p, args.q)
        return {"result": float(value), "exact": scalar_to_str(exact)}
    return {"result": scalar_to_str(corealg.scalar(arithgeo.dedekind_sum(args.p, args.q, method=args.method)))}


def cmd_rademacher(args) -> dict:
    U = arithgeo.SL2Z(args.p, args.r, args.q, args.s)
    return {"result": scalar_to_str(arithgeo.rademacher_phi(U))}


def _seifert(args) -> arithgeo.SeifertData:
    try:
        pairs = arithgeo.parse_pairs(args.pairs)
    except ValueError:
        raise CLIError("bad-pairs", f"cannot read pairs {args.pairs!r}; expected p1/q1,p2/q2,...") from None
    return arithgeo.seifert_data(pairs)


def cmd_seifert_data(args) -> dict:
    return {"result": _seifert(args).to_json()}


def cmd_seifert_z(args) -> dict:
    d = _seifert(args)
    if args.order is None or args.order < 0:
        raise CLIError("bad-order", "--order must be a nonnegative integer")
    pot = seifert.seifert_potential(d, args.order)
    violations = pot.grading_violations()
    z = seifert.lmo_seifert_partition(d, args.order)
    ratio = seifert.lmo_seifert_ratio(d, args.order)
    out = {
        "result": z.to_json(),
        "ratio": ratio.to_json(),
        "free_energy": seifert.lmo_seifert_free_energy(d, args.order).to_json(),
        "grading_violations": violations,
        "data": d.to_json(),
        "order": args.order,
    }
    if args.numeric:
        opts = _parse_numeric_opts(args.numeric)
        N, hbar = int(opts["N"]), opts["hbar"]
        num = seifert.seifert_integral_numeric(d, N, hbar, rtol=args.rtol)
        series_value = ratio.evaluate(N, hbar).real
        out["numeric"] = {
            "N": N,
            "hbar": hbar,
            "value": num.value,
            "error_estimate": num.error_estimate,
            "series_value": series_value,
            "relative_difference": abs(series_value - num.value) / abs(num.value),
        }
    if violations:
        raise CLIError("grading", "; ".join(violations))
    return out


def cmd_numeric_z(args) -> dict:
    d = _seifert(args)
    res = seifert.seifert_integral_numeric(d, args.N, args.hbar, rtol=args.rtol)
    return {"result": res.to_json()}


def cmd_gue_mc(args) -> dict:
    lams = [_partition(p) for p in args.partition]
    threads = _threads(args)
    if len(lams) == 1:
        estimates = [seifert.gue_sample_moments(args.N, lams[0], args.samples, args.seed, threads=threads)]
    else:
        estimates = seifert.gue_sample_many(args.N, lams, args.samples, args.seed, threads=threads)
    rows = []
    for lam, (mean, err) in zip(lams, estimates):
        exact = float(corealg.npoly_eval(gaussmm.gauss_moment(lam), args.N))
        rows.append({
            "partition": list(lam),
            "value": mean,
            "error_estimate": err,
            "exact": exact,
            "z_score": 0.0 if err == 0 else (mean - exact) / err,
        })
    return {"result": rows, "samples": args.samples, "seed": args.seed}


def cmd_wrt_su2(args) -> dict:
    p, q = args.lens
    res = wrt2.wrt_lens_su2(p, q, args.level, precision=args.precision)
    out = {"result": res.to_json(), "completion": [list(r) for r in wrt2.complete_sl2z(p, q).rows]}
    if args.matrix:
        U = wrt2.complete_sl2z(p, q)
        m = wrt2.u_matrix_su2(U, args.level + 2, args.precision)
        out["matrix"] = [
            [[float(m[i, j].real), float(m[i, j].imag)] for j in range(m.cols)] for i in range(m.rows)
        ]
    return out


# ---------------------------------------------------------------------------
# selftest


def _selftest_checks():
    N = corealg.NPoly.N()
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
            msg = ""
        except Exception as exc:  # a crash is a failed check
            ok, msg = False, f"{type(exc).__name__}: {exc}"
        checks.append({"name": name, "ok": ok, **({"message": msg} if msg else {})})

    check("moment (2) = N^2", lambda: gaussmm.gauss_moment((2,)) == N**2)
    check("moment (1,1) = N", lambda: gaussmm.gauss_moment((1, 1)) == N)
    check("moment (4) = 2N^3 + N", lambda: gaussmm.gauss_moment((4,)) == 2 * N**3 + N)
    check("pairing of Psi(w2) = 2(N^3 - N)",
          lambda: diagrams.lmo_pair(diagrams.psi(diagrams.wheel(2)), 1).strip_hbar() == 2 * (N**3 - N))
    check("pairing of p2 = N^2", lambda: diagrams.lmo_pair((2,), 1).strip_hbar() == N**2)
    check("pairing of p1^2 = N", lambda: diagrams.lmo_pair((1, 1), 1).strip_hbar() == N)
    check("<s_2> = N(N+1)/2", lambda: gaussmm.schur_expectation((2,)) == N * (N + 1) / 2)
    check("<s_11> = -N(N-1)/2", lambda: gaussmm.schur_expectation((1, 1)) == -N * (N - 1) / 2)

    def wheel2():
        image = diagrams.phi(diagrams.psi(diagrams.wheel(2)))
        expected = symfun.SymFunc(1, {
            (symfun.Partition((2,)),): corealg.HSeries.monomial(2, 2 * N, 2),
            (symfun.Partition((1, 1)),): corealg.HSeries.monomial(2, -2, 2),
        }, 2)
        return image == expected

    check("Phi Psi(w2) = 2(N p2 - p1^2) hbar^2", wheel2)
    check("theta at gl_2 = 12", lambda: diagrams.glN_bruteforce(diagrams.theta(), 2) == 12)
    check("Harer-Zagier m <= 4",
          lambda: all(gaussmm.harer_zagier(m) == gaussmm.gauss_moment((2 * m,)) for m in range(1, 5)))
    check("s(1,3) = 1/18 (all methods)",
          lambda: all(arithgeo.dedekind_sum(1, 3, method=k) == Fraction(1, 18) for k in ("reciprocity", "sawtooth")))
    check("s(3,5) = 0", lambda: arithgeo.dedekind_sum(3, 5) == 0)
    check("Rademacher examples",
          lambda: [arithgeo.rademacher_phi(U) for U in ([[0, -1], [1, 0]], [[1, 0], [1, 1]], [[2, 1], [1, 1]])] == [0, 2, 3])
    check("Poincare sphere data",
          lambda: arithgeo.seifert_data([(2, 1), (3, 1), (5, -4)]).to_json()
          == {"pairs": [[2, 1], [3, 1], [5, -4]], "P": 30, "H": 1, "e": "1/30", "phi": "-181/30"})
    check("omega b2, b4",
          lambda: (seifert.omega_coeffs(2).b(1), seifert.omega_coeffs(2).b(2)) == (Fraction(1, 48), Fraction(-1, 5760)))
    for pairs in ([(2, 1)], [(2, 1), (3, 1), (5, -4)], [(2, 1), (3, 1), (5, 1)], [(3, 2), (4, -1)]):
        d = arithgeo.seifert_data(pairs)
        check(f"grading audit {pairs}", lambda d=d: not seifert.seifert_potential(d, 6).grading_violations())

    def lens11():
        for k in range(1, 6):
            l = k + 2
            z = wrt2.wrt_lens_su2(1, 1, k)
            if abs(complex(z.value) - math.sqrt(2 / l) * math.sin(math.pi / l)) > 1e-9:
                return False
        return True

    check("Z(L(1,1)) = sqrt(2/l) sin(pi/l)", lens11)
    return checks


def cmd_selftest(args) -> dict:
    checks = _selftest_checks()
    failed = [c["name"] for c in checks if not c["ok"]]
    out = {"result": {"checks": checks, "passed": not failed}}
    if failed:
        raise _SelftestFailure(out)
    return out


class _SelftestFailure(Exception):
    def __init__(self, payload):
        super().__init__("selftest failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", help="aligned text instead of JSON")
    common.add_argument("--threads", type=int, default=None, help="worker cap (also CSMM_THREADS)")
    common.add_argument("--config", default=None, help="flat key=value file; flags override it")
    common.add_argument("--output", default=None, help="also write the JSON to this path")

    parser = _Parser(prog="csmm", description="Gaussian matrix integrals, U(N) weight systems and Seifert-sphere invariants")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("moment", parents=[common], help="Gaussian moment <p_lambda>")
    p.add_argument("--partition", action="append", required=True,
                   help="comma-separated parts; repeat for independent colors")
    p.add_argument("--at", default=None, help="also evaluate at this N (exact rational)")
    p.add_argument("--harer-zagier", action="store_true", help="cross-check (2m) by recursion")

    p = sub.add_parser("schur", parents=[common], help="Schur expectation <s_lambda>")
    p.add_argument("--partition", required=True)
    p.add_argument("--expand", action="store_true", help="include power-sum expansion and characters")
    p.add_argument("--to-schur", action="store_true", help="expand p_lambda in Schur functions instead")

    def diagram_flags(p):
        p.add_argument("--wheel", type=int, default=None)
        p.add_argument("--theta", action="store_true")
        p.add_argument("--close", action="store_true", help="glue wheel legs in consecutive pairs")

    p = sub.add_parser("pair", parents=[common], help="surface pairing integral")
    p.add_argument("--partition", default=None, help="power-sum monomial (realized as disks)")
    diagram_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--literal", action="store_true", help="sum over all bijections")

    p = sub.add_parser("weight", parents=[common], help="U(N) weight system Phi(Psi(D))")
    diagram_flags(p)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--rank", type=int, default=None, help="also contract gl_n structure constants")

    p = sub.add_parser("dedekind", parents=[common], help="Dedekind sum s(p, q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--method", choices=("reciprocity", "sawtooth", "cot"), default="reciprocity")

    p = sub.add_parser("rademacher", parents=[common], help="Rademacher function of [[p, r], [q, s]]")
    for name in ("p", "r", "q", "s"):
        p.add_argument(name, type=int)

    p = sub.add_parser("seifert-data", parents=[common], help="P, H, e, phi of a Seifert sphere")
    p.add_argument("--pairs", required=True, help="p1/q1,p2/q2,...")

    p = sub.add_parser("seifert-z", parents=[common], help="perturbative U(N) invariant of a Seifert sphere")
    p.add_argument("--pairs", required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--numeric", default=None, help="compare with quadrature, e.g. N=2,hbar=0.02")
    p.add_argument("--rtol", type=float, default=1e-12)

    p = sub.add_parser("numeric-z", parents=[common], help="eigenvalue integral by quadrature")
    p.add_argument("--pairs", required=True)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--hbar", type=float, required=True)
    p.add_argument("--rtol", type=float, default=1e-10)

    p = sub.add_parser("gue-mc", parents=[common], help="Monte Carlo GUE moments")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--partition", action="append", required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("wrt-su2", parents=[common], help="SU(2) WRT invariant of L(p, q)")
    p.add_argument("--lens", type=int, nargs=2, metavar=("P", "Q"), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--precision", type=int, default=wrt2.DEFAULT_PRECISION, help="mpmath bits")
    p.add_argument("--matrix", action="store_true", help="include the full U matrix")

    sub.add_parser("selftest", parents=[common], help="run the built-in example suite")
    return parser


HANDLERS = {
    "moment": cmd_moment,
    "schur": cmd_schur,
    "pair": cmd_pair,
    "weight": cmd_weight,
    "dedekind": cmd_dedekind,
    "rademacher": cmd_rademacher,
    "seifert-data": cmd_seifert_data,
    "seifert-z": cmd_seifert_z,
    "numeric-z": cmd_numeric_z,
    "gue-mc": cmd_gue_mc,
    "wrt-su2": cmd_wrt_su2,
    "selftest": cmd_selftest,
}


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    values = read_config(args.config)
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, raw in values.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
        elif isinstance(current, int):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        elif isinstance(current, list):
            setattr(args, key, [raw])
        elif current is None and key in ("order", "threads", "N", "seed", "samples", "rank", "level"):
            setattr(args, key, int(raw))
        else:
            setattr(args, key, raw)
    return args


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True)


def _human(payload, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(payload, dict):
        if not payload:
            return pad + "{}"
        width = max(len(str(k)) for k in payload)
        lines = []
        for k in sorted(payload, key=str):
            v = payload[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{str(k):<{width}} :")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k):<{width}} : {v!r}" if isinstance(v, float) else f"{pad}{str(k):<{width}} : {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_human(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in payload)
    return pad + str(payload)


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Parse and execute; returns ``(exit_code, payload, human)``.  Usage errors raise SystemExit(2)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except CLIError as exc:
        return 1, {"error": {"code": exc.code, "message": str(exc)}}, False
    try:
        payload = HANDLERS[args.command](args)
        code = 0
    except _SelftestFailure as exc:
        payload, code = exc.payload, 1
    except CLIError as exc:
        payload, code = {"error": {"code": exc.code, "message": str(exc)}}, 1
    except (ValueError, ZeroDivisionError, ArithmeticError, RuntimeError, OverflowError) as exc:
        payload, code = {"error": {"code": type(exc).__name__, "message": str(exc)}}, 1
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(payload) + "\n")
    return code, payload, args.human


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, payload, human = run(argv)
    sys.stdout.write((_human(payload) if human else dumps(payload)) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
