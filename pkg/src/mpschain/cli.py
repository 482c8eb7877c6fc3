"""Command-line surface: model construction, correlator sweeps, parent
Hamiltonians, verification suites, and degenerate-state tables.

Exit codes: 0 success, 1 usage or parameter error, 2 no parent Hamiltonian
at the requested support, 3 verification failure.  Identical configurations
produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import ed, genstate, linalg, models, parent, spin, symmetry
from .mps import (
    MpsFamily,
    OscillatoryLimitError,
    ring_one_point,
    ring_two_point,
    thermo_one_point,
    thermo_two_point,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_PARENT = 2
EXIT_VERIFY_FAILED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# model selection


def _add_model_args(p: argparse.ArgumentParser, with_file: bool = True) -> None:
    choices = ["I", "II", "general"] + (["file"] if with_file else [])
    p.add_argument("--which", required=True, choices=choices, help="model selector")
    p.add_argument("--g", type=float, default=None, help="parameter g")
    p.add_argument("--h", type=float, default=None, help="parameter h (general family)")
    p.add_argument("--c", type=float, default=None, help="parameter c (general family, default 1)")
    if with_file:
        p.add_argument("--in", dest="infile", default=None, help="model JSON (with --which file)")


def _resolve_model(args) -> MpsFamily:
    if args.which == "file":
        if args.infile is None:
            raise _UsageError("--which file requires --in")
        if args.g is not None or args.h is not None or args.c is not None:
            raise _UsageError("--which file excludes --g/--h/--c")
        return MpsFamily.load(args.infile)
    if getattr(args, "infile", None):
        raise _UsageError("--in requires --which file")
    if args.g is None:
        raise _UsageError(f"--which {args.which} requires --g")
    if args.which == "general":
        if args.h is None:
            raise _UsageError("--which general requires --h")
        return models.general_family(args.g, args.h, 1.0 if args.c is None else args.c)
    if args.h is not None or args.c is not None:
        raise _UsageError("--h/--c only apply to the general family")
    return models.model_I(args.g) if args.which == "I" else models.model_II(args.g)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_model(args) -> int:
    fam = _resolve_model(args)
    _write_text(args.out, _json_text(fam.to_json_dict()))
    return EXIT_OK


def _cmd_parent(args) -> int:
    fam = _resolve_model(args)
    basis = parent.ground_null_space(fam, args.k, tol=args.tol)
    print(f"kernel dimension at k={args.k}: {basis.dim}")
    if basis.is_empty:
        print(f"no nearest-neighbor parent Hamiltonian at k={args.k}", file=sys.stderr)
        return EXIT_NO_PARENT
    ham = parent.local_hamiltonian(basis)
    if args.out:
        _write_text(args.out, _json_text(ham.to_json_dict()))
    return EXIT_OK


_ONE_POINT = {"sz2": spin.sz2, "sx2": spin.sx2}
_TWO_POINT = {"zz": spin.sz, "xx": spin.sx, "identity": spin.identity}


def _correlate_rows(args, fam_for, g_values) -> list[dict]:
    rows = []
    r_values = list(range(args.r_min, args.r_max + 1))
    for g in g_values:
        fam = fam_for(g)
        if args.channel in _ONE_POINT:
            obs = _ONE_POINT[args.channel]()
            if args.mode == "ring":
                val = ring_one_point(fam, obs, args.n_sites)
            else:
                val = thermo_one_point(fam, obs)
            rows.append({"g": g, "r": None, "channel": args.channel, "value": val, "flag": ""})
            continue
        obs = _TWO_POINT[args.channel]()
        for r in r_values:
            flag = ""
            try:
                if args.mode == "ring":
                    val = ring_two_point(fam, obs, obs, r, args.n_sites)
                else:
                    val = thermo_two_point(fam, obs, obs, r)
            except OscillatoryLimitError:
                val, flag = None, "oscillatory"
            rows.append({"g": g, "r": r, "channel": args.channel, "value": val, "flag": flag})
    return rows


def _cmd_correlate(args) -> int:
    if args.g_sweep is not None:
        lo, hi, num = args.g_sweep
        g_values = [float(x) for x in np.linspace(float(lo), float(hi), int(num))]
        if args.which == "file":
            raise _UsageError("--g-sweep excludes --which file")
        fam_for = models.model_I if args.which == "I" else models.model_II
        if args.which == "general":
            raise _UsageError("--g-sweep supports --which I or II")
    else:
        fam = _resolve_model(args)
        g_values = [fam.params.get("g", float("nan"))]
        fam_for = lambda g: fam  # noqa: E731 - single resolved model
    if args.mode == "closed":
        if args.which != "I":
            raise _UsageError("--mode closed evaluates the model I closed forms")
        _write_text(args.out, _closed_sweep_text(g_values))
        return EXIT_OK
    if args.mode == "ring" and args.n_sites is None:
        raise _UsageError("--mode ring requires --n-sites")
    if args.mode == "ring" and args.which in ("I", "II") and args.n_sites % 2:
        raise _UsageError("ring size must be even for the solvable models")
    rows = _correlate_rows(args, fam_for, g_values)
    if args.format == "json":
        payload = [
            {k: (_fmt(v) if isinstance(v, float) else v) for k, v in row.items()} for row in rows
        ]
        _write_text(args.out, _json_text({"rows": payload}))
    else:
        lines = ["g,r,channel,value,flag"]
        for row in rows:
            r_txt = "" if row["r"] is None else str(row["r"])
            v_txt = "" if row["value"] is None else _fmt(row["value"])
            lines.append(f"{_fmt(row['g'])},{r_txt},{row['channel']},{v_txt},{row['flag']}")
        _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _closed_sweep_text(g_values) -> str:
    lines = ["g,quantity,value"]
    for g, q, v in models.closed_form_sweep_rows(g_values):
        lines.append(f"{_fmt(g)},{q},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def _cmd_genstate(args) -> int:
    n, z = args.n_sites, args.zeros
    if n % 2 or z % 2:
        raise _UsageError("ring size and zero count must be even (odd-zero sectors vanish)")
    rows: list[tuple[int, int, int | None, str, Fraction]] = []
    if args.norm:
        rows.append((n, z, None, "norm", Fraction(genstate.psi_n_norm(n, z))))
    if args.obs:
        if args.obs in ("sz2", "sperp2"):
            fn = genstate.corr_sz2 if args.obs == "sz2" else genstate.corr_sperp2
            rows.append((n, z, None, args.obs, fn(n, z)))
        else:
            if args.r is not None:
                r_values = [args.r]
            else:
                r_values = list(range(args.r_min, args.r_max + 1))
            fn = {
                "zz": genstate.corr_zz,
                "xx": genstate.corr_xx,
                "sz2sz2": genstate.corr_sz2sz2,
            }[args.obs]
            for r in r_values:
                val = fn(n, z, r) if args.obs != "sz2sz2" else fn(n, z)
                rows.append((n, z, r, args.obs, val))
    if not rows:
        raise _UsageError("nothing to do: pass --obs and/or --norm")
    _write_text(args.out, genstate.correlator_table_text(rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


def _check(name: str, value: float, tolerance: float, larger_ok: bool = False) -> dict:
    passed = value > tolerance if larger_ok else value <= tolerance
    return {
        "name": name,
        "value": _fmt(value),
        "tolerance": _fmt(tolerance),
        "comparison": ">" if larger_ok else "<=",
        "passed": bool(passed),
    }


def _suite_frustration(n_sites: int, g_values) -> list[dict]:
    checks = []
    for which, builder, ham in (
        ("I", models.model_I, models.model_I_hamiltonian),
        ("II", models.model_II, lambda g: models.model_II_hamiltonian()),
    ):
        for g in g_values:
            res = parent.verify_zero_energy(builder(g), ham(g), n_sites)
            checks.append(_check(f"model {which} g={g:g} N={n_sites} zero-energy residual", res, 1e-10))
    return checks


def _suite_formulas(g_values) -> list[dict]:
    checks = []
    for g in g_values:
        cf = models.closed_form_correlators_I(g)
        fam = models.model_I(g)
        checks.append(_check(f"model I g={g:g} <Sz^2> closed vs transfer",
                             abs(cf.sz2 - thermo_one_point(fam, spin.sz2())), 1e-8))
        checks.append(_check(f"model I g={g:g} <Sx^2> closed vs transfer",
                             abs(cf.sx2 - thermo_one_point(fam, spin.sx2())), 1e-8))
        checks.append(_check(f"model I g={g:g} G_par vs adjacent zz",
                             abs(cf.g_par - thermo_two_point(fam, spin.sz(), spin.sz(), 1)), 1e-8))
    fam1 = models.model_I(1.0)
    rs = np.arange(2, 13)
    zz = np.array([thermo_two_point(fam1, spin.sz(), spin.sz(), int(r)) for r in rs])
    xx = np.array([thermo_two_point(fam1, spin.sx(), spin.sx(), int(r)) for r in rs])
    xi_par = -1.0 / np.polyfit(rs, np.log(np.abs(zz)), 1)[0]
    xi_perp = -1.0 / np.polyfit(rs, np.log(np.abs(xx)), 1)[0]
    cf1 = models.closed_form_correlators_I(1.0)
    checks.append(_check("model I g=1 fitted xi_par vs closed form", abs(xi_par - cf1.xi_par), 1e-3))
    checks.append(_check("model I g=1 fitted xi_perp vs closed form", abs(xi_perp - cf1.xi_perp), 1e-3))
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        g, h, c = rng.uniform(-2.0, 2.0, 3)
        det = models.det_word_matrix(g, h, c)
        closed = models.det_exact_form(g, h, c)
        worst = max(worst, abs(det - closed) / max(1.0, abs(closed)))
    checks.append(_check("det(word matrix) vs exact closed form, 100 samples", worst, 1e-9))
    for g, h, c in ((1.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 2**0.5, 1.0), (1.0, -(2**0.5), 1.0), (1.0, 2.0, 0.0)):
        dim = parent.ground_null_space(models.general_family(g, h, c), 2).dim
        checks.append(_check(f"kernel at root family (g={g:g},h={h:.4g},c={c:g})", float(dim), 0.5, larger_ok=True))
    return checks


def _suite_genstate(n_sites: int) -> list[dict]:
    checks = []
    n = n_sites
    h_ii = models.model_II_hamiltonian()
    worst_formula = 0.0
    worst_energy = 0.0
    for z in range(0, n + 1, 2):
        psi = genstate.psi_n_expand(n, z)
        ok = genstate.psi_n_norm(n, z) == psi.norm_sq()
        ok &= genstate.corr_sz2(n, z) == genstate.expectation_sz2(psi)
        ok &= genstate.corr_sperp2(n, z) == genstate.expectation_sperp2(psi)
        for r in range(2, n):
            ok &= genstate.corr_zz(n, z, r) == genstate.expectation_zz(psi, r)
            ok &= genstate.corr_xx(n, z, r) == genstate.expectation_xx(psi, r)
            ok &= genstate.corr_sz2sz2(n, z) == genstate.expectation_sz2sz2(psi, r)
        worst_formula = max(worst_formula, 0.0 if ok else 1.0)
        vec = psi.vector()
        worst_energy = max(worst_energy, float(np.linalg.norm(parent.chain_apply(h_ii, n, vec)) / np.linalg.norm(vec)))
    checks.append(_check(f"N={n} formula vs oracle exact agreement (0 = exact)", worst_formula, 0.0))
    checks.append(_check(f"N={n} every psi_n annihilated by the chain", worst_energy, 1e-10))
    traces = genstate.model_ii_word_traces(n)
    from .mps import amplitudes as mps_amplitudes

    worst_gen = 0.0
    for g in (1.0, 2.0, 3.0):
        amps = mps_amplitudes(models.model_II(g), n)
        label_of = {1: "1", 0: "0", -1: "-1"}
        recon = {}
        for cfg, (z, t) in traces.items():
            recon[tuple(label_of[m] for m in cfg)] = (g**z) * t
        worst_gen = max(
            worst_gen,
            max(abs(amps[k] - recon.get(k, 0.0)) for k in amps),
        )
    checks.append(_check(f"N={n} generating identity (exact for integer g)", worst_gen, 0.0))
    checks.append(_check("thermo zz at r=2 equals -1/2", abs(genstate.thermo_corr(2, 2, "zz") + 0.5), 1e-12))
    checks.append(_check("thermo zz at r=5 vanishes", abs(genstate.thermo_corr(2, 5, "zz")), 1e-12))
    checks.append(_check("thermo xx vanishes", abs(genstate.thermo_corr(2, 3, "xx")), 1e-12))
    return checks


def _suite_symmetry() -> list[dict]:
    checks = []
    bond_sz = np.diag([1.0, 0.0, -1.0])
    for which, fam in (("I", models.model_I(0.7)), ("II", models.model_II(1.3))):
        res = symmetry.check_generator_condition(fam, spin.SZ, bond_sz)
        checks.append(_check(f"model {which} z-rotation generator condition", res, 1e-12))
    fam = models.general_family(0.8, 0.8 * 2**0.5, 1.0)
    pi_target = {lab: fam.matrices[lab].T for lab in fam.labels}
    pi = symmetry.find_intertwiner(fam, pi_target)
    pi_expected = linalg.phase_fix(np.fliplr(np.eye(3)).reshape(-1)).reshape(3, 3)
    pi_dev = float(np.max(np.abs(pi.matrix - pi_expected))) if pi.found else float("inf")
    checks.append(_check("parity intertwiner matches the antidiagonal form", pi_dev, 1e-9))
    flip_target = {"1": fam.matrices["-1"], "0": fam.matrices["0"], "-1": fam.matrices["1"]}
    om = symmetry.find_intertwiner(fam, flip_target)
    om_expected = np.zeros((3, 3))
    om_expected[0, 2] = 1.0
    om_expected[1, 1] = 1.0
    om_expected[2, 0] = 1.0
    om_expected = linalg.phase_fix(om_expected.reshape(-1)).reshape(3, 3)
    om_dev = float(np.max(np.abs(om.matrix - om_expected))) if om.found else float("inf")
    checks.append(_check("spin-flip intertwiner matches the antidiagonal form (c=1)", om_dev, 1e-9))
    tz, tp, tm = spin.spin_generators(0.5)
    checks.append(_check("valence-bond family spherical-tensor residual",
                         symmetry.spherical_tensor_residual(models.aklt_family(), (tz, tp, tm)), 1e-10))
    tz1, tp1, tm1 = spin.spin_generators(1.0)
    checks.append(_check("model I g=1 spherical-tensor residual (symmetry breaking)",
                         symmetry.spherical_tensor_residual(models.model_I(1.0), (tz1, tp1, tm1)), 0.1,
                         larger_ok=True))
    return checks


def _suite_appendix_a(n_sites: int) -> list[dict]:
    rep = models.sigma_equivalence_check(n_sites)
    return [
        _check(f"N={n_sites} local conjugation identity", rep.local_conjugation_residual, 1e-12),
        _check(f"N={n_sites} sorted spectra of the two sign variants", rep.spectrum_deviation, 1e-10),
    ]


def _cmd_verify(args) -> int:
    suites = ["frustration", "formulas", "genstate", "symmetry", "appendixA"] if args.suite == "all" else [args.suite]
    g_values = args.g or [0.3, 0.7, 1.0, 1.5]
    report: dict = {"suites": {}}
    for name in suites:
        if name == "frustration":
            checks = _suite_frustration(args.n_sites or 6, g_values)
        elif name == "formulas":
            checks = _suite_formulas([0.3, 0.7, 1.0, 1.5, 2.0])
        elif name == "genstate":
            checks = _suite_genstate(args.n_sites or 6)
        elif name == "symmetry":
            checks = _suite_symmetry()
        else:
            checks = _suite_appendix_a(args.n_sites or 4)
        report["suites"][name] = checks
    all_passed = all(c["passed"] for checks in report["suites"].values() for c in checks)
    report["all_passed"] = all_passed
    text = _json_text(report)
    _write_text(args.out, text)
    if args.out not in (None, "-"):
        for suite_name, checks in report["suites"].items():
            for c in checks:
                print(f"[{'PASS' if c['passed'] else 'FAIL'}] {suite_name}: {c['name']}")
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="mpschain", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("model", help="construct a model and write its JSON", parents=[])
    _add_model_args(pm, with_file=False)
    pm.add_argument("--out", default="-", help="output path (default stdout)")
    pm.set_defaults(fn=_cmd_model)

    pp = sub.add_parser("parent", help="derive the null-space parent Hamiltonian")
    _add_model_args(pp)
    pp.add_argument("--k", type=int, default=2, help="support size (default 2)")
    pp.add_argument("--tol", type=float, default=linalg.DEFAULT_NULL_TOL, help="kernel tolerance")
    pp.add_argument("--out", default=None, help="Hamiltonian JSON output path")
    pp.set_defaults(fn=_cmd_parent)

    pc = sub.add_parser("correlate", help="correlator tables on rings or in the thermodynamic limit")
    _add_model_args(pc)
    pc.add_argument("--channel", required=True, choices=["sz2", "sx2", "zz", "xx", "identity"])
    pc.add_argument("--mode", default="thermo", choices=["ring", "thermo", "closed"])
    pc.add_argument("--n-sites", type=int, default=None, help="ring size (ring mode)")
    pc.add_argument("--r-min", type=int, default=1, help="smallest separation")
    pc.add_argument("--r-max", type=int, default=1, help="largest separation")
    pc.add_argument("--g-sweep", nargs=3, metavar=("MIN", "MAX", "STEPS"), default=None)
    pc.add_argument("--format", default="csv", choices=["csv", "json"])
    pc.add_argument("--out", default="-", help="output path (default stdout)")
    pc.set_defaults(fn=_cmd_correlate)

    pg = sub.add_parser("genstate", help="exact norms/correlators of the degenerate sector states")
    pg.add_argument("--n-sites", type=int, required=True)
    pg.add_argument("--zeros", type=int, required=True)
    pg.add_argument("--obs", default=None, choices=["zz", "xx", "sz2", "sperp2", "sz2sz2"])
    pg.add_argument("--r", type=int, default=None, help="second operator site (sites 1 and r)")
    pg.add_argument("--r-min", type=int, default=2)
    pg.add_argument("--r-max", type=int, default=2)
    pg.add_argument("--norm", action="store_true", help="include the exact squared norm")
    pg.add_argument("--out", default="-", help="output path (default stdout)")
    pg.set_defaults(fn=_cmd_genstate)

    pv = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    pv.add_argument("--suite", required=True,
                    choices=["frustration", "formulas", "genstate", "symmetry", "appendixA", "all"])
    pv.add_argument("--n-sites", type=int, default=None)
    pv.add_argument("--g", type=float, action="append", default=None)
    pv.add_argument("--out", default=None, help="report path (default stdout)")
    pv.set_defaults(fn=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
