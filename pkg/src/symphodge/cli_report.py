"""Command-line driver: ``verify``, ``extend`` and ``solve``.

Reports are assembled as plain dicts, sorted by check id and serialized with
sorted keys, so identical invocations give byte-identical output.  Wall-clock
timings are only recorded with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .cartan_model import CartanComplex, EquivariantForm
from .hodge_solvers import (
    DdeltaCounterexample,
    NoHarmonicRepresentative,
    PreconditionError,
    TheoremViolation,
    cohomology,
    cohomology_dims,
    ddelta_solve,
    find_ddelta_counterexample,
    harmonic_representative,
    mathieu_check,
    quasi_isomorphism_check,
    seeded_ddelta_instances,
)
from .model_complexes import ModelError, build_model
from .symplectic_exterior import SymplecticSpace, direct_sum_suite, identity_suite

SCHEMA = 1
MODELS = ("flat-torus-2", "flat-torus-4", "sphere-s1", "kodaira-thurston")
EXPECTED_DIMS = {
    "flat-torus-2": [1, 2, 1],
    "flat-torus-4": [1, 4, 6, 4, 1],
    "sphere-s1": [1, 0, 1],
}
DEFAULTS = {"model": "all", "seed": 0, "degree_bound": 6, "format": "json", "out": None, "timing": False}

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- report -------------------------------------------------------------------


@dataclass
class CheckRecord:
    id: str
    anchor: str
    expected: str  # "pass" or "counterexample"
    status: str  # "pass", "fail" or "counterexample"
    witness: object = None
    timing: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == self.expected

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "expected": self.expected,
            "status": self.status,
            "ok": self.ok,
            "witness": self.witness,
            "timing": self.timing,
        }


@dataclass
class VerificationReport:
    seed: int
    degree_bound: int
    models: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.id)
        return {
            "schema": SCHEMA,
            "tool": "symphodge",
            "version": __version__,
            "seed": self.seed,
            "degree_bound": self.degree_bound,
            "models": self.models,
            "checks": [c.to_json() for c in checks],
            "summary": {
                "total": len(checks),
                "ok": sum(c.ok for c in checks),
                "not_ok": [c.id for c in checks if not c.ok],
                "passed": self.ok,
            },
        }


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def render_markdown(report: dict) -> str:
    lines = [
        "# Verification report",
        "",
        f"- tool: {report['tool']} {report['version']}",
        f"- schema: {report['schema']}",
        f"- seed: {report['seed']}",
        f"- degree bound: {report['degree_bound']}",
        f"- result: {'PASS' if report['summary']['passed'] else 'FAIL'}"
        f" ({report['summary']['ok']}/{report['summary']['total']} checks as expected)",
        "",
        "## Models",
        "",
    ]
    for m in report["models"]:
        lines.append("- " + ", ".join(f"{k}={m[k]}" for k in sorted(m)))
    lines += ["", "## Checks", "", "| check | expected | status | ok | anchor |", "|---|---|---|---|---|"]
    for c in report["checks"]:
        lines.append(f"| {c['id']} | {c['expected']} | {c['status']} | {'yes' if c['ok'] else 'NO'} | {c['anchor']} |")
    bad = [c for c in report["checks"] if not c["ok"]]
    if bad:
        lines += ["", "## Unexpected results", ""]
        for c in bad:
            lines += [f"### {c['id']}", "", "```json", json.dumps(c["witness"], indent=2, sort_keys=True), "```", ""]
    return "\n".join(lines).rstrip() + "\n"


# -- serialization helpers ------------------------------------------------------


def frac(x) -> str:
    return str(Fraction(x))


def eq_json(alpha: EquivariantForm, bound: int) -> dict:
    return {"json": alpha.to_json(bound), "pretty": alpha.pretty()}


def form_json(model, alpha) -> dict:
    return {"json": alpha.to_json(), "pretty": model.pretty(alpha)}


# -- checks ---------------------------------------------------------------------


class Suite:
    def __init__(self, report: VerificationReport, timing: bool):
        self.report = report
        self.timing = timing

    def run(self, cid: str, anchor: str, fn: Callable[[], tuple], expected: str = "pass"):
        t0 = time.perf_counter()
        try:
            status, witness = fn()
        except (TheoremViolation, ArithmeticError, PreconditionError) as exc:
            status, witness = "fail", {"error": type(exc).__name__, "message": str(exc)}
        dt = round(time.perf_counter() - t0, 3) if self.timing else None
        self.report.checks.append(CheckRecord(cid, anchor, expected, status, witness, dt))


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def algebra_checks(suite: Suite):
    anchors = {
        "adjoint": "eps(u) and -iota(u sharp) are adjoint for the symplectic pairing",
        "star_involution": "the symplectic star is an involution",
        "star_defining": "u ^ *v = omega(u, v) omega^n/n!",
        "star_exp_omega": "* exp(omega) = exp(omega)",
        "lefschetz_A": "A acts on k-forms by n - k",
        "pairing_symmetry": "pairing is symmetric in even and antisymmetric in odd degree",
    }
    for n in (1, 2, 3):
        fails = identity_suite(SymplecticSpace(n))
        for name, anchor in anchors.items():
            bad = fails[name]
            suite.run(
                f"algebra.n{n}.{name}",
                anchor,
                lambda bad=bad: (_status(not bad), {"failures": len(bad)}),
            )
    for n1, n2 in ((1, 1), (1, 2), (2, 1)):
        fails = direct_sum_suite(n1, n2)
        suite.run(
            f"algebra.sum{n1}{n2}.direct_sum_star",
            "star of a direct sum from the factor stars (both sign variants)",
            lambda f=fails: (_status(not f["signed"] and not f["swapped"]),
                             {"signed_failures": len(f["signed"]), "swapped_failures": len(f["swapped"])}),
        )


# what the model complex computes; the sphere result relies on invariant forms carrying H(M)
SCOPE = {
    "sphere-s1": "rotation-invariant forms only; relies on H(invariant forms) = H(M)",
    "sphere-s1-trivial": "rotation-invariant forms only; relies on H(invariant forms) = H(M)",
    "kodaira-thurston": "left-invariant forms; relies on invariant forms computing H(M) for nilmanifolds",
}


def model_checks(suite: Suite, name: str, seed: int):
    model = build_model(name)
    suite.report.models.append(model.descriptor())
    lef = model.lefschetz_expected
    rng_for = lambda tag: random.Random(f"{seed}:{name}:{tag}")  # noqa: E731

    def delta_cross():
        bad = []
        for k in range(2 * model.n + 1):
            for b in model.basis(k):
                if model.delta(b) != model.delta_koszul(b):
                    bad.append(form_json(model, b))
        return _status(not bad), {"failures": bad[:3], "count": len(bad)}

    def anticommute():
        bad = 0
        for k in range(2 * model.n + 1):
            for b in model.basis(k):
                bad += bool(model.d(model.delta(b)) + model.delta(model.d(b)))
        return _status(not bad), {"failures": bad}

    def leibniz():
        rng = rng_for("leibniz")
        bad = 0
        for _ in range(50):
            f = model.random_form(rng, 0, density=3)
            alpha = model.random_form(rng, rng.randrange(1, 2 * model.n + 1))
            bad += not model.leibniz_check(f, alpha)
        return _status(not bad), {"pairs": 50, "failures": bad}

    def dims():
        got = cohomology_dims(model)
        want = EXPECTED_DIMS.get(name)
        ok = got == want if want is not None else got[1] % 2 == 1
        return _status(ok), {"dims": got, "expected": want if want is not None else "b1 odd"}

    suite.run(f"{name}.delta.crosscheck", "delta = (-1)^(k+1) * d * = [iota(pi), d]", delta_cross)
    suite.run(f"{name}.delta.anticommute", "d delta + delta d = 0", anticommute)
    suite.run(f"{name}.delta.leibniz", "delta(f alpha) = f delta alpha - iota(v_f) alpha", leibniz)
    suite.run(f"{name}.cohomology.dims", "de Rham cohomology of the model", dims)

    mathieu = mathieu_check(model)

    def lefschetz():
        rows = mathieu["lefschetz_report"]["per_k"]
        wit = [{k: r[k] for k in ("k", "source_dim", "target_dim", "rank")} for r in rows]
        return ("pass" if mathieu["lefschetz"] else "counterexample"), {"per_k": wit}

    def harmonic():
        if mathieu["all_classes_harmonic"]:
            return "pass", {"classes": sum(len(v) for v in mathieu["harmonic_representatives"].values())}
        f = mathieu["failures"][0]
        return "counterexample", {"grade": f["grade"], "class": form_json(model, f["gamma"])}

    def equivalence():
        return _status(mathieu["equivalence_holds"]), {
            "lefschetz": mathieu["lefschetz"],
            "all_classes_harmonic": mathieu["all_classes_harmonic"],
            "complex": SCOPE.get(name, "full model complex"),
        }

    def quasi():
        q = quasi_isomorphism_check(model)
        return ("pass" if q["bijective"] else "counterexample"), {"per_k": q["per_k"]}

    expect = "pass" if lef else "counterexample"
    suite.run(f"{name}.lefschetz", "strong Lefschetz property", lefschetz, expect)
    suite.run(f"{name}.harmonic", "every class has a harmonic representative", harmonic, expect)
    suite.run(f"{name}.mathieu", "Lefschetz iff every class is harmonic", equivalence)
    suite.run(f"{name}.quasi_isomorphism", "H_delta -> H is an isomorphism", quasi, expect)

    def ddelta_seeded():
        rng = rng_for("ddelta")
        solved = 0
        first = None
        grades = list(range(1, 2 * model.n))
        for k in grades:
            for _, alpha in seeded_ddelta_instances(model, k, 100, rng):
                beta = ddelta_solve(model, alpha)
                residual = model.d(model.delta(beta)) - alpha
                solved += not residual
                if first is None:
                    first = {"alpha": form_json(model, alpha), "beta": form_json(model, beta),
                             "residual": residual.to_json()}
        total = 100 * len(grades)
        return _status(solved == total), {"instances": total, "per_grade": 100, "solved": solved, "first": first}

    def ddelta_counter():
        for k in range(2 * model.n + 1):
            c = find_ddelta_counterexample(model, k)
            if c is not None:
                return "counterexample", {"grade": c["grade"], "kind": c["kind"], "alpha": form_json(model, c["alpha"])}
        return "pass", None

    if lef:
        suite.run(f"{name}.ddelta.seeded", "ker d cap im delta = im d delta = ker delta cap im d", ddelta_seeded)
    suite.run(f"{name}.ddelta.counterexample", "d delta lemma holds in every degree", ddelta_counter, expect)

    if model.group is not None and not model.group.trivial:
        cartan_checks(suite, model, rng_for, suite.report.degree_bound)


def cartan_checks(suite: Suite, model, rng_for, bound: int):
    name = model.name
    C = CartanComplex(model, bound)

    def anticommute():
        r = C.anticommute_check(bound)
        return _status(r["ok"]), {"basis_elements": r["basis_elements"], "identities": r["identities"]}

    def formality():
        got = [C.equivariant_cohomology(k).dimension for k in range(bound + 1)]
        want = C.formality_dims(bound)
        return _status(got == want), {"H_G": got, "formality": want}

    def delta_homology():
        got = [C.delta_homology(k).dimension for k in range(bound + 1)]
        want = C.formality_dims(bound)
        return _status(got == want), {"H_delta": got, "formality": want}

    def induced():
        rows = [C.induced_differentials_vanish(k) for k in range(bound - 1)]
        return _status(all(r["d_zero"] and r["partial_zero"] for r in rows)), {"per_k": rows}

    def p_of_s():
        rows = []
        for k in range(2 * model.n + 1):
            H = cohomology(model, k)
            for j, rep in enumerate(H.representatives):
                coords = C.projection_p(C.canonical_section(rep)["alpha_G"])
                want = [Fraction(int(i == j)) for i in range(H.dimension)]
                rows.append({"grade": k, "index": j, "ok": coords == want})
        return _status(all(r["ok"] for r in rows)), {"classes": rows}

    def s_omega():
        aG = C.canonical_section(model.omega)["alpha_G"]
        target = C.omega_G()
        chi0 = C.chi0()
        ok = C.is_exact(aG - target) and not C.d_G(aG) and not C.delta(aG)
        return _status(ok), {"alpha_G": eq_json(aG, bound), "chi0": [frac(c) for c in chi0]}

    ex = {}

    def omega_sq(label):
        def run():
            if not ex:
                ex.update(C.omega_squared_example())
            r = ex[label]
            return _status(r["closed"]), {
                "chi1": eq_json(r["chi1"], bound),
                "chi1_integral": eq_json(r["chi1_integral"], bound),
                "representative": eq_json(r["representative"], bound),
                "d_G_representative": eq_json(r["d_G"], bound),
                "coclosed": r["coclosed"],
                "matches_section": r["matches_section"],
            }
        return run

    def independence():
        r = C.section_independence(model.omega)
        return _status(r["difference_exact"]), {"representatives_differ": r["representatives_differ"]}

    def zeta():
        z0 = C.lift(model.omega)
        z1 = C.zeta_chain_extend([z0])
        ok = not (C.partial(z0) + C.d(z1))
        return _status(ok), {"zeta1": eq_json(z1, bound)}

    def dgdelta_seeded():
        rng = rng_for("dgdelta")
        solved, first = 0, None
        degrees = [k for k in range(1, bound + 1) if C.solver("d_Gdelta", k).rank]
        for i in range(50):
            _, alpha = next(C.seeded_dG_delta_instances(degrees[i % len(degrees)], 1, rng))
            beta = C.dG_delta_solve(alpha)
            residual = C.d_G(C.delta(beta)) - alpha
            solved += not residual
            if first is None:
                first = {"alpha": eq_json(alpha, bound), "beta": eq_json(beta, bound),
                         "residual": residual.to_json(bound)}
        return _status(solved == 50), {"instances": 50, "solved": solved, "first": first}

    def dgdelta_coexact():
        rng = rng_for("dgdelta-coexact")
        rows = []
        for k in range(2, bound):
            alpha = C.coexact_instance(k, rng)
            if not alpha:
                continue
            branch = C.harmonic_branch(alpha)
            beta = C.dG_delta_solve(alpha)
            rows.append({"degree": k, "branch": branch, "ok": C.d_G(C.delta(beta)) == alpha})
        ok = bool(rows) and all(r["ok"] and r["branch"] == "coexact" for r in rows)
        return _status(ok), {"instances": rows}

    def nonmult():
        w = C.non_multiplicativity_witness()
        ok = not w["omega_G_power_exact"] and not w["product_of_sections_minus_section_exact"]
        triv = CartanComplex(build_model("sphere-s1-trivial"), bound).non_multiplicativity_witness()
        return _status(ok and triv["omega_G_power_exact"]), {
            "omega_G_power": eq_json(w["omega_G_power"], bound),
            "omega_G_power_exact": w["omega_G_power_exact"],
            "trivial_action_power_exact": triv["omega_G_power_exact"],
        }

    p = f"{name}.equivariant"
    suite.run(f"{p}.anticommute", "partial delta = -delta partial and d_G delta = -delta d_G", anticommute)
    suite.run(f"{p}.formality", "H_G = S(g*) (x) H(M): degeneration at the first term", formality)
    suite.run(f"{p}.delta_homology", "H(Omega_G, delta) = S(g*) (x) H(Omega, delta)", delta_homology)
    suite.run(f"{p}.induced_zero", "both differentials on H(Omega_G, delta) vanish", induced)
    suite.run(f"{p}.zeta_chain", "partial zeta_(j-1) + d zeta_j = 0 is soluble", zeta)
    suite.run(f"{p}.section.p_of_s", "s is a section of p", p_of_s)
    suite.run(f"{p}.section.omega", "s[omega] = [omega + phi - chi_0]", s_omega)
    suite.run(f"{p}.section.omega_squared", "omega^2 - 2 delta(omega ^ phi_1) - delta phi_2 is equivariantly closed",
              omega_sq("literal"))
    suite.run(f"{p}.section.omega_squared_consistent",
              "omega^2 + 2 delta(omega ^ phi_1) + 2 delta phi_2' is equivariantly closed", omega_sq("consistent"))
    suite.run(f"{p}.section.independence", "the class of alpha_G does not depend on the beta_i", independence)
    suite.run(f"{p}.dgdelta.seeded", "alpha = d_G delta beta (exact branch)", dgdelta_seeded)
    suite.run(f"{p}.dgdelta.coexact", "alpha = d_G delta beta (coexact branch)", dgdelta_coexact)
    suite.run(f"{p}.non_multiplicativity", "s is multiplicative only for a trivial action", nonmult)


def build_report(model: str, seed: int, degree_bound: int, timing: bool = False) -> VerificationReport:
    names = MODELS if model == "all" else (model,)
    report = VerificationReport(seed, degree_bound)
    suite = Suite(report, timing)
    algebra_checks(suite)
    for name in names:
        model_checks(suite, name, seed)
    return report


# -- commands -------------------------------------------------------------------


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def cmd_verify(args) -> int:
    if args.model != "all" and args.model not in MODELS:
        raise UsageError(f"unknown model {args.model!r}; choose from {', '.join(MODELS + ('all',))}")
    report = build_report(args.model, args.seed, args.degree_bound, args.timing).to_json()
    text = render_markdown(report) if args.format == "markdown" else dumps(report)
    _write(text, args.out)
    return EXIT_OK if report["summary"]["passed"] else EXIT_FAIL


def _class_from_spec(model, spec: str):
    if spec == "1":
        return model.one()
    if spec == "omega":
        return model.omega
    if spec == "omega^2":
        return model.wedge(model.omega, model.omega)
    if spec.startswith("h") and ":" in spec:
        k, _, j = spec[1:].partition(":")
        try:
            k, j = int(k), int(j)
        except ValueError:
            raise UsageError(f"bad class spec {spec!r}") from None
        H = cohomology(model, k) if 0 <= k <= 2 * model.n else None
        if H is None or not 0 <= j < H.dimension:
            raise UsageError(f"class {spec!r} not in the computed cohomology basis")
        return H.representatives[j]
    raise UsageError(f"unknown class spec {spec!r}; use 1, omega, omega^2 or h<k>:<index>")


def cmd_extend(args) -> int:
    model = build_model(args.model)
    if model.group is None:
        raise UsageError(f"model {args.model} carries no group action")
    C = CartanComplex(model, args.degree_bound)
    gamma = _class_from_spec(model, args.cls)
    sec = C.canonical_section(gamma)
    aG = sec["alpha_G"]
    out = {
        "schema": SCHEMA,
        "command": "extend",
        "model": model.descriptor(),
        "class": args.cls,
        "alpha": form_json(model, sec["alpha"]),
        "alpha_G": eq_json(aG, args.degree_bound),
        "certificates": {
            "d_G": C.d_G(aG).to_json(args.degree_bound),
            "delta": C.delta(aG).to_json(args.degree_bound),
            "p_bar_equals_alpha": aG.at_zero() == sec["alpha"],
        },
    }
    if args.cls == "omega":
        out["chi0"] = [frac(c) for c in C.chi0()]
    if args.cls == "omega^2":
        ex = C.omega_squared_example()
        out["omega_squared"] = {
            "phi1": eq_json(ex["phi1"], args.degree_bound),
            **{
                label: {
                    "chi1": eq_json(ex[label]["chi1"], args.degree_bound),
                    "phi2": eq_json(ex[label]["phi2"], args.degree_bound),
                    "representative": eq_json(ex[label]["representative"], args.degree_bound),
                    "equivariantly_closed": ex[label]["closed"],
                    "in_class_of_section": ex[label]["matches_section"],
                }
                for label in ("literal", "consistent")
            },
        }
    _write(dumps(out), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    model = build_model(args.model)
    try:
        data = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    out = {"schema": SCHEMA, "command": "solve", "op": args.op, "model": model.descriptor()}
    try:
        if args.op == "dgdelta":
            C = CartanComplex(model, args.degree_bound)
            alpha = EquivariantForm.from_json(model, C.r, data)
            beta = C.dG_delta_solve(alpha)
            out["beta"] = eq_json(beta, args.degree_bound)
            out["residual"] = (C.d_G(C.delta(beta)) - alpha).to_json(args.degree_bound)
        else:
            alpha = model.form_from_json(data)
            if args.op == "ddelta":
                beta = ddelta_solve(model, alpha)
                out["beta"] = form_json(model, beta)
                out["residual"] = (model.d(model.delta(beta)) - alpha).to_json()
            else:
                h = harmonic_representative(model, alpha)
                out["harmonic"] = form_json(model, h)
                out["residual"] = {"d": model.d(h).to_json(), "delta": model.delta(h).to_json()}
                k = alpha.grade if alpha else 0
                out["same_class"] = cohomology(model, k).coordinates(h) == cohomology(model, k).coordinates(alpha)
    except PreconditionError as exc:
        out["error"] = {"kind": "precondition", "predicate": str(exc)}
        _write(dumps(out), args.out)
        return EXIT_FAIL
    except (NoHarmonicRepresentative, DdeltaCounterexample, TheoremViolation) as exc:
        out["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        _write(dumps(out), args.out)
        return EXIT_FAIL
    _write(dumps(out), args.out)
    return EXIT_OK


# -- argument handling ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symphodge", description="Exact symplectic Hodge theory checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with default values for the flags")
        p.add_argument("--degree-bound", type=int, default=None, dest="degree_bound")
        p.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="run the verification suite")
    common(v)
    v.add_argument("--model", default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--format", choices=("json", "markdown"), default=None)
    v.add_argument("--timing", action="store_true", default=None, help="record wall-clock timings")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extend", help="canonical equivariant extension of a class")
    common(e)
    e.add_argument("--model", default=None)
    e.add_argument("--class", dest="cls", required=True)
    e.set_defaults(func=cmd_extend)

    s = sub.add_parser("solve", help="run one solver on a serialized form")
    common(s)
    s.add_argument("--model", default=None)
    s.add_argument("--op", choices=("ddelta", "dgdelta", "harmonic"), required=True)
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_solve)
    return parser


def resolve(args) -> argparse.Namespace:
    """Flags win over the config file, which wins over built-in defaults."""
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(config, dict):
            raise UsageError("config must be a JSON object")
        config = {k.replace("-", "_"): val for k, val in config.items()}
    defaults = dict(DEFAULTS)
    if args.command == "extend":
        defaults["model"] = "sphere-s1"
    for key in list(vars(args)):
        if getattr(args, key) is None:
            if key in config:
                setattr(args, key, config[key])
            elif key in defaults:
                setattr(args, key, defaults[key])
    if args.command != "verify" and args.model == "all":
        raise UsageError(f"{args.command} needs a single model")
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args = resolve(args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
