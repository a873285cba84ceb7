"""Command-line front end: ``icis <command> <problem-file> [options]``.

Exit codes: 0 success, 1 parse/usage error, 2 input is not an ICIS (or not a
smoothing), 3 a jet computation failed to stabilise or certify.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import __version__
from .deformations import MuMinimalResult, NonGenericLineError, line_smoothing, mu_minimal
from .gaussmanin import (NonSplitError, PrecisionError, RankMismatchError, SaturationError,
                         compute)
from .invariants import (DegenerateFlagError, GermSpec, NotICISError, SmoothingSpec,
                         le_greuel_check, milnor, tjurina)
from .parser import ParseError, ProblemFile, parse_problem
from .polyforms import q_str

SCHEMA = "icis-report/1"
COMMANDS = ("milnor", "tjurina", "discriminant", "smoothing", "bhat", "monodromy", "report")
EXIT_OK, EXIT_PARSE, EXIT_NOT_ICIS, EXIT_UNSTABLE = 0, 1, 2, 3


class Session:
    """Evaluates the pieces of a report lazily, sharing intermediate results."""

    def __init__(self, prob: ProblemFile, args):
        self.prob = prob
        self.trials = args.trials if args.trials is not None else prob.options.get("trials", 5)
        self.seed = args.seed if args.seed is not None else prob.options.get("seed", 0)
        self.N = args.jet_order if args.jet_order is not None else prob.options.get("jet_order")
        self.M = args.t_order if args.t_order is not None else prob.options.get("t_order")
        self.rounds = (args.max_refinements if args.max_refinements is not None
                       else prob.options.get("max_refinements", 12))
        self.exact = args.exact
        self.germ = GermSpec(prob.germ)
        self.results: Dict[str, object] = {}
        self.diag: Dict[str, object] = {}
        self._smoothing: Optional[SmoothingSpec] = None
        self._gm = None

    def milnor(self):
        d: Dict[str, object] = {}
        mu = milnor(self.germ, self.trials, self.seed, diagnostics=d)
        self.results["mu"] = mu
        self.diag["milnor_trials"] = d.get("trials", 0)
        self.diag["milnor_spread"] = list(d.get("spread", []))

    def tjurina(self):
        self.results["tau"] = tjurina(self.germ)

    def smoothing(self) -> SmoothingSpec:
        if self._smoothing is not None:
            return self._smoothing
        p = self.prob
        if p.smoothing_function is not None:
            s = SmoothingSpec(p.smoothing_total, p.smoothing_function)
            s.validate()
            self.results["smoothing_kind"] = "explicit"
        elif p.alpha is not None:
            s = line_smoothing(self.germ, p.alpha)
            self.results["smoothing_kind"] = "line"
            self.results["alpha"] = [q_str(a) for a in p.alpha]
        else:
            r: MuMinimalResult = mu_minimal(self.germ, self.trials, self.seed)
            s = r.smoothing
            self.results["smoothing_kind"] = "mu-minimal"
            self.results["alpha"] = [q_str(a) for a in r.alpha]
            self.diag["line_trials"] = r.trials_used
        self.results["total_space"] = [str(f) for f in s.total]
        self.results["function"] = str(s.function)
        self._smoothing = s
        return s

    def discriminant(self):
        s = self.smoothing()
        mu_x, mu_z, nu, ok = le_greuel_check(s, self.trials, self.seed)
        self.results.update(mu_X=mu_x, mu_Z=mu_z, nu=nu, le_greuel=ok)

    def gauss_manin(self):
        if self._gm is None:
            self._gm = compute(self.smoothing(), N=self.N, M=self.M, germ=self.germ,
                               max_rounds=self.rounds, exact=self.exact)
            r = self._gm
            L = r.lattice
            self.diag.update(jet_order=L.N, t_order=L.M, weights=list(r.weights),
                             pole_order=L.pole_order, saturation_steps=r.saturated.steps,
                             refinements=len(r.attempts), confirmed_at=r.confirmed_at,
                             field="QQ" if self.exact else "modular")
            self.results["lattice_rank"] = L.mu
            self.results["lattice_basis"] = [str(b) for b in L.basis]
        return self._gm

    def bhat(self):
        b = self.gauss_manin().bhat
        self.results["bhat"] = str(b)
        self.results["bhat_factored"] = b.factored()
        self.results["bhat_coeffs"] = [q_str(c) for c in b.coeffs]
        self.results["bhat_roots"] = [q_str(r) for r in b.roots]
        small, big = b.candidates()
        self.results["b_candidates"] = [small.factored(), big.factored()]

    def monodromy(self):
        sp = self.gauss_manin().spectrum
        self.results["exponents"] = [q_str(-a) for a in sp.exponents]
        self.results["eigenvalue_fractions"] = [q_str(f) for f in sp.fractions]


PLAN = {
    "milnor": ["milnor"],
    "tjurina": ["tjurina"],
    "discriminant": ["discriminant"],
    "smoothing": ["discriminant"],
    "bhat": ["bhat"],
    "monodromy": ["monodromy"],
    "report": ["milnor", "tjurina", "discriminant", "bhat", "monodromy"],
}


def build_report(command: str, prob: ProblemFile, args) -> Dict[str, object]:
    sess = Session(prob, args)
    for step in PLAN[command]:
        getattr(sess, step)()
    if command == "smoothing":
        sess.smoothing()
    return {
        "schema": SCHEMA,
        "command": command,
        "source": prob.source,
        "ring": list(prob.gens),
        "germ": [str(f) for f in prob.germ],
        "results": sess.results,
        "diagnostics": sess.diag,
        "status": EXIT_OK,
    }


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, list):
        return ", ".join(_text_value(x) for x in v) if v else "(none)"
    return str(v)


def render_text(rep: Dict[str, object]) -> str:
    lines = [f"command: {rep['command']}", f"source: {rep['source']}",
             f"ring: {_text_value(rep['ring'])}"]
    for i, g in enumerate(rep["germ"], 1):
        lines.append(f"germ.f{i}: {g}")
    for k, v in rep.get("results", {}).items():
        lines.append(f"{k}: {_text_value(v)}")
    for k, v in rep.get("diagnostics", {}).items():
        lines.append(f"diagnostics.{k}: {_text_value(v)}")
    if "error" in rep:
        lines.append(f"error: {rep['error']['code']}: {rep['error']['message']}")
    lines.append(f"status: {rep['status']}")
    return "\n".join(lines) + "\n"


def render(rep, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, indent=2, sort_keys=False) + "\n"
    return render_text(rep)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icis", description="Invariants of isolated complete "
                                 "intersection singularities and their smoothings.")
    ap.add_argument("--version", action="version", version=f"icis {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", help="problem file ('-' reads stdin)")
    ap.add_argument("--jet-order", type=int, dest="jet_order", metavar="N")
    ap.add_argument("--t-order", type=int, dest="t_order", metavar="M")
    ap.add_argument("--trials", type=int, metavar="K")
    ap.add_argument("--seed", type=int, metavar="S")
    ap.add_argument("--max-refinements", type=int, dest="max_refinements", metavar="R",
                    help="jet-order escalations allowed before giving up (default 12)")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--exact", action="store_true",
                    help="do the jet linear algebra over Q instead of modulo primes")
    return ap


def _fail(args, command, source, code, message, status, prob: Optional[ProblemFile] = None):
    rep = {"schema": SCHEMA, "command": command, "source": source,
           "ring": list(prob.gens) if prob else [],
           "germ": [str(f) for f in prob.germ] if prob else [],
           "results": {}, "diagnostics": {}, "error": {"code": code, "message": message},
           "status": status}
    sys.stdout.write(render(rep, args.format))
    sys.stderr.write(f"icis: {code}: {message}\n")
    return status


def main(argv: Optional[List[str]] = None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if args.file == "-":
            text, source = sys.stdin.read(), "<stdin>"
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
            source = args.file
    except OSError as exc:
        return _fail(args, args.command, args.file, "IO", str(exc), EXIT_PARSE)
    try:
        prob = parse_problem(text, source)
    except ParseError as exc:
        return _fail(args, args.command, source, exc.code, str(exc), EXIT_PARSE)
    try:
        rep = build_report(args.command, prob, args)
    except (ParseError, ValueError) as exc:
        if isinstance(exc, NotICISError):
            return _fail(args, args.command, source, exc.code, str(exc), EXIT_NOT_ICIS, prob)
        return _fail(args, args.command, source, "PARSE", str(exc), EXIT_PARSE, prob)
    except (NotICISError, NonGenericLineError) as exc:
        return _fail(args, args.command, source, exc.code, str(exc), EXIT_NOT_ICIS, prob)
    except (SaturationError, RankMismatchError, PrecisionError, NonSplitError,
            DegenerateFlagError) as exc:
        return _fail(args, args.command, source, exc.code, str(exc), EXIT_UNSTABLE, prob)
    sys.stdout.write(render(rep, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
