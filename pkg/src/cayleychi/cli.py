"""Command line front end: ``cayleychi spectrum | chi | verify``.

Exit codes: 0 success, 1 a verify assertion failed, 2 a size cap would be
exceeded, 3 bad arguments.  JSON goes to stdout unless ``--out`` is given.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from fractions import Fraction

from . import cayley, chromatic, counting, matrices, spectral
from .cayley import MatrixGroup, cayley_build, lift_coloring, sing_graph, write_dimacs
from .errors import BadModulus, CapExceeded, CayleyChiError, ImproperColoring, NotAField, PreconditionFailed
from .kloosterman import embedding_check, hyperbola_graph, hyperbola_spectrum, klo_sl_bound, weil_sweep
from .rings import RingSpec, epsilon, is_prime, prime_power

EXIT_OK, EXIT_FAIL, EXIT_CAP, EXIT_ARGS = 0, 1, 2, 3

FAMILIES = ("sing2", "rank-le", "hyperbola")
BOUNDS = ("hoffman", "sarnak", "quasirandom", "clique", "exact", "greedy", "theta", "coset", "kloosterman", "lift")
SUITES = ("weil", "embed", "chartable", "spectrum", "theta", "mixing", "counting")


class BadArguments(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_ARGS)


def _num(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(f"{float(v):.12g}")
    if v is None or isinstance(v, (bool, int, str)):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf"
    return float(f"{v:.12g}")


# --- argument handling ------------------------------------------------------

def _ring(args) -> RingSpec:
    if args.q is not None:
        if prime_power(args.q) is None:
            raise BadArguments(f"--q {args.q} is not a prime power")
        return RingSpec.field(args.q)
    if args.p is None:
        raise BadArguments("give --q, or --ring with --p")
    if not is_prime(args.p):
        raise BadArguments(f"--p {args.p} is not prime")
    if args.ring == "zmod":
        return RingSpec.modular(args.p, args.n or 1)
    return RingSpec.extension_field(args.p, args.f or 1)


def _odd_field_q(ring: RingSpec) -> int | None:
    return ring.size if ring.is_field and ring.p > 2 else None


def _check_caps(args, order: int, dense: bool):
    enum_cap = args.enum_cap or matrices.DEFAULT_ENUM_CAP
    if order > enum_cap:
        raise CapExceeded("vertex count", order, enum_cap)
    if dense:
        cap = args.dense_cap or cayley.DEFAULT_DENSE_CAP
        if order > cap:
            raise CapExceeded("dense spectrum", order, cap)


class Family:
    """The graph named by the arguments, built lazily."""

    def __init__(self, args):
        self.args = args
        self.name = args.family
        if self.name == "hyperbola":
            if args.q is not None:
                pk = prime_power(args.q)
                if pk is None or pk[1] != 1:
                    raise BadArguments("hyperbola family takes --p and --n (or a prime --q)")
                args.p, args.n, args.q = args.q, 1, None
            args.ring = "zmod"
        self.ring = _ring(args)
        if self.ring.p == 2:
            raise BadArguments("characteristic 2 is not supported for graph families")
        if self.name == "hyperbola":
            self.order = self.ring.size**2
        elif self.name == "sing2":
            self.order = matrices.sl_order(2, self.ring)
        else:
            if not self.ring.is_field:
                raise BadArguments("rank-le needs a field")
            if not 1 <= args.ell <= args.dim:
                raise BadArguments("need 1 <= --ell <= --dim")
            self.order = matrices.sl_order(args.dim, self.ring)
        self._graph = None

    @property
    def params(self) -> dict:
        d = {"family": self.name, "ring": str(self.ring)}
        if self.name == "rank-le":
            d.update(dim=self.args.dim, ell=self.args.ell)
        return d

    @property
    def has_exact_spectrum(self) -> bool:
        if self.name == "sing2":
            return _odd_field_q(self.ring) is not None
        return self.name == "hyperbola" and self.ring.p >= 5

    def graph(self):
        if self._graph is None:
            _check_caps(self.args, self.order, dense=False)
            cap = self.args.enum_cap or matrices.DEFAULT_ENUM_CAP
            if self.name == "sing2":
                self._graph = sing_graph(self.ring, cap=cap, materialize=True)
            elif self.name == "hyperbola":
                self._graph = hyperbola_graph(self.ring, cap=cap, materialize=True)
            else:
                S = matrices.rank_le_set(self.args.dim, self.args.ell, self.ring, cap=cap)
                self._graph = cayley_build(MatrixGroup(self.ring, self.args.dim), S, cap=cap, materialize=True,
                                           name=f"RG_{self.args.dim},{self.args.ell}({self.ring})")
        return self._graph

    def exact_spectrum(self) -> spectral.Spectrum:
        if self.name == "sing2":
            return spectral.sing2_spectrum_exact(self.ring.size)
        return hyperbola_spectrum(self.ring.p, self.ring.exponent)

    def numeric_spectrum(self) -> spectral.Spectrum:
        _check_caps(self.args, self.order, dense=True)
        return spectral.eig_dense(self.graph(), self.args.eig, dense_cap=self.args.dense_cap)

    def spectrum(self) -> spectral.Spectrum:
        return self.exact_spectrum() if self.has_exact_spectrum else self.numeric_spectrum()


# --- spectrum ---------------------------------------------------------------

def cmd_spectrum(args) -> tuple[int, str]:
    fam = Family(args)
    method = args.method or ("both" if fam.has_exact_spectrum else "numeric")
    if method in ("exact", "both") and not fam.has_exact_spectrum:
        raise BadArguments(f"no exact spectrum for {fam.name} over {fam.ring}")
    if method in ("numeric", "both"):
        _check_caps(args, fam.order, dense=True)
    routes = {}
    if method in ("exact", "both"):
        routes["exact"] = fam.exact_spectrum()
    if method in ("numeric", "both"):
        routes["numeric"] = fam.numeric_spectrum()
    if args.dimacs_out:
        with open(args.dimacs_out, "w") as fp:
            write_dimacs(fam.graph(), fp, comment=fam.graph().name)
    if args.format == "csv":
        lines = ["route,value,multiplicity"]
        for route, spec in routes.items():
            lines += [f"{route},{row}" for row in spec.to_csv().splitlines()[1:]]
        return EXIT_OK, "\n".join(lines) + "\n"
    if args.format == "dimacs":
        buf = io.StringIO()
        write_dimacs(fam.graph(), buf, comment=fam.graph().name)
        return EXIT_OK, buf.getvalue()
    out = {"command": "spectrum", **fam.params, "vertices": fam.order, "method": method}
    for route, spec in routes.items():
        out[route] = spec.to_dict()
    if len(routes) == 2:
        out["match"] = routes["exact"].matches(routes["numeric"], args.tol)
    return EXIT_OK, json.dumps(out) + "\n"


# --- chi --------------------------------------------------------------------

def _verify(g, coloring, args) -> dict:
    check = chromatic.verify_coloring(g, coloring, seed=args.seed, threads=args.threads)
    if not check.proper:
        raise ImproperColoring(f"{coloring.scheme} has a monochromatic edge {check.violating_edge}")
    return {"proper": True}


def _bound(fam: Family, name: str, args, certificates: dict) -> dict:
    q = _odd_field_q(fam.ring)
    if name in ("hoffman", "sarnak"):
        spec = fam.spectrum()
        value = spectral.hoffman_bound(spec) if name == "hoffman" else spectral.sarnak_bound(spec)
        return {"side": "lower", "value": value, "spectrum": spec.kind}
    if name == "quasirandom":
        if fam.name == "hyperbola":
            raise PreconditionFailed("quasirandom bound needs a matrix group")
        n = 2 if fam.name == "sing2" else args.dim
        D = args.D or (spectral.known_quasirandom_degree(n, fam.ring.size) if fam.ring.is_field else None)
        if D is None:
            raise PreconditionFailed("no tabulated quasirandomness degree; pass --D")
        g = fam.graph()
        return {"side": "lower", "value": spectral.quasirandom_bound(D, g.degree, fam.order), "D": D}
    if name == "clique":
        res = chromatic.clique_number(fam.graph(), budget=args.budget, cap=args.exact_cap)
        return {"side": "lower", "value": res.size, "exact": res.exact}
    if name == "exact":
        res = chromatic.exact_chromatic(fam.graph(), budget=args.budget, cap=args.exact_cap)
        certificates["exact"] = res.coloring
        return {"side": "both", "lower": res.lower, "upper": res.upper, "exact": res.exact,
                "budget_exhausted": res.budget_exhausted, "nodes": res.nodes}
    if name == "greedy":
        c = chromatic.greedy_dsatur(fam.graph(), cap=args.dense_cap)
        certificates["greedy"] = c
        return {"side": "upper", "value": c.palette, **_verify(fam.graph(), c, args)}
    if name in ("theta", "coset"):
        if fam.name != "sing2" or q is None:
            raise PreconditionFailed(f"{name} colouring needs Sing_2 over an odd field")
        g = fam.graph()
        if name == "theta":
            c = chromatic.theta_coloring(q, g.vertices)
            extra = {"theorem_bound": 8 * (q + 1)}
        else:
            c = chromatic.coset_coloring(q, args.variant, g.vertices)
            extra = {"variant": args.variant, "cosets": c.params["cosets"]}
        certificates[name] = c
        return {"side": "upper", "value": c.palette, **extra, **_verify(g, c, args)}
    if name == "kloosterman":
        if fam.ring.kind == "extension-field":
            raise PreconditionFailed("Kloosterman bound needs Z/p^n")
        if fam.name == "rank-le":
            raise PreconditionFailed("Kloosterman bound applies to Sing_2 and hyperbola graphs")
        p, n = fam.ring.p, fam.ring.exponent
        if p < 5:
            raise PreconditionFailed("Kloosterman bound needs p >= 5")
        return {"side": "lower", "value": klo_sl_bound(p, n), "sqrt_p_over_4": math.sqrt(p) / 4}
    if name == "lift":
        if fam.name != "sing2" or fam.ring.kind == "extension-field":
            raise PreconditionFailed("lift needs Sing_2 over Z/p^n")
        p = fam.ring.p
        base_graph = sing_graph(RingSpec.prime_field(p))
        base = chromatic.theta_coloring(p, base_graph.vertices)
        target = fam.graph()
        c = lift_coloring(base_graph, base, target, seed=args.seed)
        certificates["lift"] = c
        return {"side": "upper", "value": c.palette, "theorem_bound": 8 * (p + 1),
                "verified": c.params.get("verified")}
    raise BadArguments(f"unknown bound {name!r}")


def cmd_chi(args) -> tuple[int, str]:
    fam = Family(args)
    names = [b.strip() for b in args.bounds.split(",") if b.strip()]
    unknown = [b for b in names if b not in BOUNDS]
    if unknown:
        raise BadArguments(f"unknown bounds {unknown}; choose from {', '.join(BOUNDS)}")
    entries, certificates = [], {}
    for name in names:
        try:
            entry = {"bound": name, **_bound(fam, name, args, certificates)}
        except PreconditionFailed as exc:
            entry = {"bound": name, "error": "PreconditionFailed", "message": str(exc)}
        entries.append({k: _num(v) if not isinstance(v, (dict, list)) else v for k, v in entry.items()})
    lows = [e["value"] for e in entries if e.get("side") == "lower"] + \
           [e["lower"] for e in entries if e.get("side") == "both"]
    ups = [e["value"] for e in entries if e.get("side") == "upper"] + \
          [e["upper"] for e in entries if e.get("side") == "both"]
    lower = max([1] + [math.ceil(float(v) - 1e-9) for v in lows if v != "inf"])
    upper = min(ups) if ups else None
    if args.format == "dimacs":
        if not certificates:
            raise BadArguments("no colouring was computed; add theta, coset, greedy, exact or lift")
        best = min(certificates.values(), key=lambda c: c.palette)
        return EXIT_OK, best.to_dimacs()
    out = {"command": "chi", **fam.params, "vertices": fam.order, "bounds": entries,
           "lower": lower, "upper": upper, "exact": lower if upper == lower else None}
    return EXIT_OK, json.dumps(out) + "\n"


# --- verify -----------------------------------------------------------------

def _assertion(suite, name, ok, **detail) -> dict:
    return {"suite": suite, "assertion": name, "pass": bool(ok),
            **{k: _num(v) if not isinstance(v, (dict, list)) else v for k, v in detail.items()}}


def _suite_weil(args):
    p, n = args.p or 5, args.n or 1
    for k in range(1, n + 1):
        r = weil_sweep(p**k)
        yield _assertion("weil", f"bound mod {p}^{k}", r["violations"] == 0, **r)
        yield _assertion("weil", f"symmetry mod {p}^{k}", r["symmetric"])


def _suite_embed(args):
    ring = RingSpec.modular(args.p or 5, args.n or 1)
    r = embedding_check(ring)
    yield _assertion("embed", "injective", r["injective"], ring=r["ring"], vertices=r["vertices"])
    yield _assertion("embed", "determinant one", r["determinant_one"])
    yield _assertion("embed", "edge-for-edge isomorphism", r["isomorphic"], pairs=r["pairs"],
                     mismatched_pairs=r["mismatched_pairs"])


def _suite_chartable(args):
    q = args.q or 5
    rows = spectral.sl2_character_table(q)
    total = sum(r.dimension**2 for r in rows)
    yield _assertion("chartable", "sum of dim^2 is |SL_2|", total == q * (q * q - 1), total=total)
    allowed = {q * q, 1, q, -q, epsilon(q) * q}
    for r in rows:
        lam = spectral.character_eigenvalue(r, q)
        ok = lam.is_rational and lam.to_fraction().denominator == 1 and int(lam.to_fraction()) in allowed
        yield _assertion("chartable", f"{r.label} eigenvalue cancels to an integer", ok, value=str(lam))


def _suite_spectrum(args):
    q = args.q or 5
    exact = spectral.sing2_spectrum_exact(q)
    _check_caps(args, matrices.sl_order(2, RingSpec.field(q)), dense=True)
    dense = spectral.eig_dense(sing_graph(RingSpec.field(q)), args.eig, dense_cap=args.dense_cap)
    yield _assertion("spectrum", "character formula equals dense spectrum", exact.matches(dense, args.tol),
                     q=q, total=exact.total)
    yield _assertion("spectrum", "total multiplicity", exact.total == q * (q * q - 1))
    yield _assertion("spectrum", "hoffman bound is q+1", spectral.hoffman_bound(exact) == q + 1)
    second = exact.entries[1][0]
    yield _assertion("spectrum", "lambda_1 >= 0 (observed)", second >= 0, lambda_1=second)


def _suite_theta(args):
    q = args.q or 7
    g = sing_graph(RingSpec.field(q))
    c = chromatic.theta_coloring(q, g.vertices)
    check = chromatic.verify_coloring(g, c, threads=args.threads)
    yield _assertion("theta", "theta colouring proper", check.proper, palette=c.palette)
    yield _assertion("theta", "palette <= 8(q+1)", c.palette <= 8 * (q + 1), bound=8 * (q + 1))
    if q % 4 == 3:
        b = chromatic.coset_coloring(q, "squares", g.vertices)
        ok = chromatic.verify_coloring(g, b, threads=args.threads).proper
        yield _assertion("theta", "B' colouring proper with 2(q+1) colours", ok and b.palette == 2 * (q + 1),
                         palette=b.palette)


def _suite_mixing(args):
    q = args.q or 5
    D = args.D or spectral.known_quasirandom_degree(2, q)
    r = counting.gowers_mixing_check(MatrixGroup(RingSpec.field(q), 2), D, args.trials, args.seed)
    yield _assertion("mixing", "AB meets C", r["violations"] == 0, **r)


def _suite_counting(args):
    q = args.q or 3
    r = counting.count_rank_variety(args.dim, args.ell, q, cap=args.enum_cap)
    yield _assertion("counting", "slope within tolerance", r.within(), **r.to_dict())
    if args.dim == 2 and args.ell == 1:
        yield _assertion("counting", "count is q^2", r.count == q * q)


def cmd_verify(args) -> tuple[int, str]:
    suite = {"weil": _suite_weil, "embed": _suite_embed, "chartable": _suite_chartable,
             "spectrum": _suite_spectrum, "theta": _suite_theta, "mixing": _suite_mixing,
             "counting": _suite_counting}[args.suite]
    lines = list(suite(args))
    failed = sum(not line["pass"] for line in lines)
    lines.append({"suite": args.suite, "summary": True, "passed": len(lines) - failed, "failed": failed})
    return (EXIT_FAIL if failed else EXIT_OK), "".join(json.dumps(line) + "\n" for line in lines)


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size (odd prime power)")
    common.add_argument("--ring", choices=("field", "zmod"), default="field")
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--n", type=int, help="exponent for Z/p^n")
    common.add_argument("--f", type=int, help="degree for F_{p^f}")
    common.add_argument("--dim", type=int, default=3, help="matrix size for rank-le and counting")
    common.add_argument("--ell", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv", "dimacs"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--dimacs-out", help="also write the graph in DIMACS format")
    common.add_argument("--enum-cap", type=int, help="override CAYLEYCHI_ENUM_CAP")
    common.add_argument("--dense-cap", type=int, help="override CAYLEYCHI_DENSE_CAP")
    common.add_argument("--exact-cap", type=int, help="override CAYLEYCHI_EXACT_CAP")
    common.add_argument("--budget", type=float, default=chromatic.DEFAULT_BUDGET, help="seconds per exact search")
    common.add_argument("--eig", choices=("auto", "jacobi", "lapack"), default="auto")
    common.add_argument("--tol", type=float, default=spectral.CLUSTER_TOL)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--D", type=int, help="quasirandomness degree")

    parser = _Parser(prog="cayleychi", description="Spectra and chromatic bounds of Cayley graphs over SL_n.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = sub.add_parser("spectrum", parents=[common])
    sp.add_argument("--family", choices=FAMILIES, default="sing2")
    sp.add_argument("--method", choices=("exact", "numeric", "both"))
    ch = sub.add_parser("chi", parents=[common])
    ch.add_argument("--family", choices=FAMILIES, default="sing2")
    ch.add_argument("--bounds", default="hoffman,sarnak,greedy")
    ch.add_argument("--variant", choices=("squares", "fourth-powers"), default="squares")
    ve = sub.add_parser("verify", parents=[common])
    ve.add_argument("--suite", choices=SUITES, required=True)
    ve.add_argument("--trials", type=int, default=100)
    return parser


def _fail(exc, code) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("threads", "budget", "enum_cap", "dense_cap", "exact_cap"):
        v = getattr(args, name)
        if v is not None and v <= 0:
            print(f"cayleychi: error: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_ARGS
    handler = {"spectrum": cmd_spectrum, "chi": cmd_chi, "verify": cmd_verify}[args.command]
    try:
        code, text = handler(args)
    except CapExceeded as exc:
        return _fail(exc, EXIT_CAP)
    except (BadArguments, BadModulus, NotAField) as exc:
        return _fail(exc, EXIT_ARGS)
    except CayleyChiError as exc:
        return _fail(exc, EXIT_FAIL)
    except ValueError as exc:
        return _fail(exc, EXIT_ARGS)
    if args.out:
        with open(args.out, "w") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
