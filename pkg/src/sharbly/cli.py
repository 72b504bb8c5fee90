"""Command line front end: cycle checks, parities, depth-charts, pairings and theorem reports."""
import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .chains import SharblyError, compose
from .cocycle import (InconclusiveValue, NumericValue, ProductCocycle, mu_trivial, pair,
                      pair_symbolic, parse_mu, product, volume_cocycle)
from .coinvariants import Budget, BudgetExceeded, canonical_form, is_cycle, parity_of_cycle, reduce
from .linalg import LinalgError
from .named import build_named, z1, z2, z3, z3k, z3k1, z4
from .pliable import depth_chart, pliable_subsets, replacement_table

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"
EXIT_CODES = {VERIFIED: 0, REFUTED: 1, INCONCLUSIVE: 2}
USAGE_EXIT = 3
CYCLE_CHECK_MAX_N = 7


@dataclass
class TheoremReport:
    claim: str
    status: str = VERIFIED
    exact: dict = field(default_factory=dict)
    numeric: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    wall_time: float = 0.0

    def fail(self, reason):
        self.status = REFUTED
        self.notes.append(reason)

    def give_up(self, reason):
        if self.status != REFUTED:
            self.status = INCONCLUSIVE
        self.notes.append(reason)

    def require(self, ok, what):
        if not ok:
            self.fail("failed: " + what)
        return ok

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    def to_json(self):
        return {"claim": self.claim, "status": self.status, "exact": self.exact,
                "numeric": self.numeric, "notes": self.notes,
                "wall_time": round(self.wall_time, 4)}

    def render(self):
        lines = ["%s: %s (%.2f s)" % (self.claim, self.status, self.wall_time)]
        for k, v in self.exact.items():
            lines.append("  %s: %s" % (k, _plain(v)))
        for k, v in self.numeric.items():
            lines.append("  %s: %s" % (k, _plain(v)))
        for note in self.notes:
            lines.append("  note: %s" % note)
        return "\n".join(lines)


def _plain(v):
    if isinstance(v, dict) and set(v) >= {"estimate", "error"}:
        return "%.6g +/- %.2g (%s)" % (v["estimate"], v["error"], v.get("method", ""))
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


def numeric_json(v):
    if isinstance(v, NumericValue):
        return {"estimate": v.estimate, "error": v.error, "method": v.method,
                "samples": v.samples, "converged": v.converged}
    return {"estimate": float(v), "error": 0.0, "method": "exact", "samples": 0,
            "converged": True}


def _orbit_json(orbits):
    return [{"coeff": str(c), "coset": o.coset, "cols": [list(v) for v in o.matrix]}
            for o, c in sorted(orbits.items(), key=lambda t: (t[0].matrix, t[0].coset))]


def _settings(args):
    return {"cells": args.cells, "rtol": args.tol, "seed": args.seed,
            "time_budget": args.time_budget, "workers": args.threads}


def _budget(args):
    return Budget(seconds=args.time_budget)


def _timed(fn):
    def run(*a, **kw):
        t0 = time.monotonic()
        try:
            report = fn(*a, **kw)
        except (BudgetExceeded, InconclusiveValue) as exc:
            report = TheoremReport(fn.__name__.replace("cmd_", "").replace("_", "-"))
            report.give_up("budget: %s" % exc)
        report.wall_time = time.monotonic() - t0
        return report
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- commands -----------------------------------------------------------------------------

@_timed
def cmd_verify_cycle(z, label="chain", budget=None):
    """Check that the boundary of z vanishes in the coinvariants."""
    r = TheoremReport("verify-cycle %s" % label)
    r.exact["n"] = z.n
    r.exact["degree"] = z.degree
    r.exact["terms"] = len(z)
    orbits = reduce(z.boundary(), budget)
    r.exact["boundary_orbits"] = _orbit_json(orbits)
    r.require(not orbits, "boundary does not reduce to zero")
    return r


@_timed
def cmd_parity(z, label="chain", budget=None):
    r = TheoremReport("parity %s" % label)
    p = parity_of_cycle(z, budget)
    r.exact["parity"] = p
    if p is None:
        r.give_up("s_n z is neither z nor -z in the coinvariants")
    return r


@_timed
def cmd_depth_chart(z, label="chain"):
    r = TheoremReport("depth-chart %s" % label)
    charts = []
    for cols, _ in z:
        charts.append(list(depth_chart(cols).values))
    r.exact["depth_charts"] = charts if len(charts) != 1 else charts[0]
    return r


@_timed
def cmd_pliable(z, a, size=None, label="chain"):
    r = TheoremReport("pliable %s --a %d" % (label, a))
    if size is None:
        size = a * (a + 1) // 2
    out = []
    for cols, _ in z:
        subs = pliable_subsets(list(cols), a, size)
        out.append({"count": len(subs),
                    "subsets": [list(s.indices) for s in subs],
                    "shuffle_signs": [s.shuffle_sign for s in subs]})
    r.exact["size"] = size
    r.exact["pliable"] = out if len(out) != 1 else out[0]
    return r


def _symbolic_json(sp):
    return [{"sign": t.sign, "multiplicity": str(t.multiplicity),
             "left": [list(v) for v in t.left.matrix],
             "right": [list(v) for v in t.right.matrix]} for t in sp.terms]


@_timed
def cmd_pair(mu, z, label="chain"):
    """Pair a cosharbly with a chain; verified when the value is provably nonzero."""
    r = TheoremReport("pair %s %s" % (mu.name, label))
    if isinstance(mu, ProductCocycle):
        sp = pair_symbolic(mu.mu, mu.nu, z)
        r.exact["terms"] = _symbolic_json(sp)
        r.exact["uniform"] = sp.is_uniform()
        if sp.is_uniform():
            r.exact["symbolic_form"] = "%s*t" % sp.total_multiplicity()
    value = pair(mu, z)
    r.numeric["value"] = numeric_json(value)
    if isinstance(value, NumericValue):
        if not value.converged:
            r.give_up("quadrature did not converge within --cells")
        elif not value.excludes_zero():
            r.give_up("error bound does not exclude 0")
    else:
        r.exact["value"] = str(value)
        r.require(value != 0, "pairing is zero")
    return r


VANISHINGS = {
    "z2z2": lambda: compose(z2(), z2()),
    "z4z1": lambda: compose(z4(), z1()),
    "z2z3": lambda: compose(z2(), z3()),
}


@_timed
def cmd_vanishing(name, budget=None):
    r = TheoremReport("vanishing %s" % name)
    if name not in VANISHINGS:
        raise SharblyError("unknown vanishing %r; choose from %s" % (name, ", ".join(VANISHINGS)))
    z = VANISHINGS[name]()
    r.exact["n"] = z.n
    orbits = reduce(z, budget)
    r.exact["orbits"] = _orbit_json(orbits)
    r.require(not orbits, "composition does not vanish in the coinvariants")
    return r


def cohomological_degree(n, i):
    """nu_n - i with nu_n = n(n-1)/2."""
    return n * (n - 1) // 2 - i


def _theorem_objects(case, k, mu3):
    """(z, mu, left cycle, right cycle, right cosharbly) for one case; right parts None when n = 3."""
    if case == "3k+3":
        z = z3k(k + 1)
        if k == 0:
            return z, mu3, None, None, None
        nu = mu3
        for _ in range(k - 1):
            nu = product(mu3, nu)
        return z, product(mu3, nu), z3(), z3k(k), nu
    nu = mu_trivial()
    for _ in range(k):
        nu = product(mu3, nu)
    return z3k1(k + 1), product(mu3, nu), z3(), z3k1(k), nu


def _relative_signs(sp, left, right, mu_parity, nu_parity):
    """Signs of the terms relative to the symbols left and right themselves; None on a mismatch."""
    (lcols, lc), = left.terms.items()
    (rcols, rc), = right.terms.items()
    lk = canonical_form(lcols, left.n)
    rk = canonical_form(rcols, right.n)
    fl = lk.parity_factor(mu_parity) * (1 if lc > 0 else -1)
    fr = rk.parity_factor(nu_parity) * (1 if rc > 0 else -1)
    out = []
    for t in sp.terms:
        if t.left.matrix != lk.matrix or t.right.matrix != rk.matrix:
            return None
        out.append(t.sign * fl * fr)
    return out


@_timed
def cmd_theorem(case, k, settings=None, check_cycle=None, budget=None):
    """End-to-end check of the nonvanishing for n = 3k+3 or n = 3k+4."""
    if case not in ("3k+3", "3k+4"):
        raise SharblyError("case must be 3k+3 or 3k+4")
    if k < 0:
        raise SharblyError("k must be >= 0")
    settings = settings or {}
    r = TheoremReport("theorem %s k=%d" % (case, k))
    mu3 = volume_cocycle(3, **settings)
    z, mu, left, right, nu = _theorem_objects(case, k, mu3)
    n = z.n
    r.exact["n"] = n
    r.exact["sharbly_degree"] = z.degree
    r.exact["cohomological_degree"] = cohomological_degree(n, z.degree)
    r.exact["cosharbly"] = mu.name

    if check_cycle is None:
        check_cycle = n <= CYCLE_CHECK_MAX_N
    if check_cycle:
        r.require(is_cycle(z, budget), "z is a cycle")
        r.exact["cycle"] = "checked"
    else:
        r.exact["cycle"] = "not checked: compositions of cycles are cycles"

    # t = mu_3(z_3) must be bounded away from 0
    t = pair(mu3, z3())
    r.numeric["t"] = numeric_json(t)
    if not t.excludes_zero():
        r.give_up("mu_3(z_3) not bounded away from 0")

    if left is None:
        r.exact["terms"] = 1
        r.exact["symbolic_form"] = "t"
        return r

    (cols, _), = z.terms.items()
    a = 3
    subs = pliable_subsets(list(cols), a, 6)
    r.exact["pliable_count"] = len(subs)
    r.require(len(subs) == k + 1, "expected %d pliable subsets" % (k + 1))
    chart = depth_chart(cols, upto=7)
    r.exact["depth_chart_start"] = list(chart.values)
    if k == 1:
        # z_3 block against the remaining block
        first = [v for v in cols if any(v[:3])]
        rest = [v for v in cols if not any(v[:3])]
        r.exact["replacement_table"] = list(replacement_table(first, rest))

    sp = pair_symbolic(mu.mu, mu.nu, z)
    r.exact["terms"] = len(sp)
    signs = _relative_signs(sp, left, right, mu.mu.parity, mu.nu.parity)
    r.exact["term_signs"] = signs
    ok = signs is not None and len(signs) == k + 1 and all(s == 1 for s in signs)
    r.require(ok, "%d identical terms (+1, z_3, z_%d)" % (k + 1, right.n))
    r.exact["symbolic_form"] = "%d*t" % (k + 1)

    value = pair(mu, z)
    r.numeric["value"] = numeric_json(value)
    predicted = math.factorial(k + 1) * t.estimate ** (k + 1)
    r.numeric["predicted"] = predicted
    if not value.excludes_zero():
        r.give_up("numeric value not bounded away from 0")
    return r


# -- argument parsing -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        sys.exit(USAGE_EXIT)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cells", type=int, default=400,
                        help="subdivision budget for quadrature")
    common.add_argument("--tol", type=float, default=1e-2, help="relative quadrature tolerance")
    common.add_argument("--time-budget", type=float, default=None, help="seconds")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--json", dest="json_out", default=None,
                        help="write the report as JSON to this path ('-' prints only JSON)")

    p = _Parser(prog="sharbly", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("verify-cycle", "parity", "depth-chart"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("chain", help="a named cycle or a JSON chain file")
    s = sub.add_parser("pliable", parents=[common])
    s.add_argument("chain")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--size", type=int, default=None, help="subset size (default a(a+1)/2)")
    s = sub.add_parser("pair", parents=[common])
    s.add_argument("--mu", required=True, help="mu1, mu2, mu3 or a product like mu3*mu1")
    s.add_argument("chain")
    s = sub.add_parser("theorem", parents=[common])
    s.add_argument("--case", required=True, choices=["3k+3", "3k+4"])
    s.add_argument("--k", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--check-cycle", dest="check_cycle", action="store_true", default=None)
    g.add_argument("--no-check-cycle", dest="check_cycle", action="store_false")
    s = sub.add_parser("vanishing", parents=[common])
    s.add_argument("name", choices=sorted(VANISHINGS))
    return p


def run(args):
    budget = _budget(args)
    settings = _settings(args)
    try:
        if args.command == "theorem":
            return cmd_theorem(args.case, args.k, settings, args.check_cycle, budget)
        if args.command == "vanishing":
            return cmd_vanishing(args.name, budget)
        z = build_named(args.chain)
        if args.command == "verify-cycle":
            return cmd_verify_cycle(z, args.chain, budget)
        if args.command == "parity":
            return cmd_parity(z, args.chain, budget)
        if args.command == "depth-chart":
            return cmd_depth_chart(z, args.chain)
        if args.command == "pliable":
            return cmd_pliable(z, args.a, args.size, args.chain)
        if args.command == "pair":
            return cmd_pair(parse_mu(args.mu, **settings), z, args.chain)
    except (SharblyError, LinalgError, ValueError, OSError) as exc:
        r = TheoremReport(args.command)
        r.give_up(str(exc))
        return r
    raise AssertionError(args.command)


def main(argv=None):
    args = build_parser().parse_args(argv)
    report = run(args)
    text = json.dumps(report.to_json(), indent=1)
    if args.json_out == "-":
        print(text)
    else:
        print(report.render())
        if args.json_out:
            with open(args.json_out, "w") as fh:
                fh.write(text + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
