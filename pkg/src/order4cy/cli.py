"""JSON-in/JSON-out command line front end.

Exit codes: 0 success, 1 usage or parse error, 2 domain error, 3 numerical
failure, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import hodge
from .algebra import Cover, cover_is_zero
from .curves import CyclicCover, genus, holomorphic_form_basis, verify_quotient_map
from .errors import DomainError, IntegrationError
from .fibration import WeierstrassJ1728, classify_fibers, ns_gram
from .lattice import (
    DEFAULT_SEARCH_BOUND,
    IntegralLattice,
    as_lattice,
    disc_forms_opposite,
    discriminant_form,
    k3_complement_compatible,
)
from .parse import parse_unipoly
from .picard_fuchs import (
    PFOperator,
    PFParams,
    eigenvalues_match,
    exact_certificate,
    indicial_exponents,
    local_monodromy_class,
    numeric_monodromy,
    numeric_period,
    period_ode_residual,
    pf_operator,
)
from .scenarios import BUNDLED, ScenarioError, _sections, load_scenario, verify_scenario

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _need(data: dict, *keys):
    missing = [k for k in keys if k not in data]
    if missing:
        raise UsageError(f"missing input field(s): {', '.join(missing)}")
    return [data[k] for k in keys]


def _num(x: float, digits: int) -> float:
    return float(f"{x:.{digits}g}")


def _cplx(z: complex, digits: int) -> list[float]:
    return [_num(z.real, digits), _num(z.imag, digits)]


def _parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


def _point(v):
    if isinstance(v, str) and v.lower() in ("inf", "infinity", "oo"):
        return "infinity"
    p = int(v)
    if p not in (0, 1):
        raise DomainError(f"{v!r} is not a singular point (0, 1 or infinity)")
    return p


# --- subcommands ----------------------------------------------------------

def cmd_analyze_fibration(data: dict, args) -> tuple[dict, int]:
    (a,) = _need(data, "a")
    w = WeierstrassJ1728(parse_unipoly(a, "s"), int(data.get("degree", 8)))
    report = classify_fibers(w)
    out = report.to_json()
    if "sections" in data:
        L = IntegralLattice(ns_gram(report, _sections(data["sections"])))
        out["nsRank"] = L.rank
        out["nsDet"] = L.det()
        out["nsSignature"] = list(L.signature())
    return out, EXIT_OK


def _lattice_input(v):
    if isinstance(v, dict):
        w = WeierstrassJ1728(parse_unipoly(v["a"], "s"), int(v.get("degree", 8)))
        return IntegralLattice(ns_gram(classify_fibers(w), _sections(v.get("sections", []))))
    return as_lattice(v)


def cmd_lattice(sub: str, data: dict, args) -> tuple[dict, int]:
    bound = int(data.get("bound", DEFAULT_SEARCH_BOUND))
    if sub == "discriminant":
        (lat,) = _need(data, "lattice")
        L = _lattice_input(lat)
        out = discriminant_form(L).to_json()
        out.update(rank=L.rank, det=L.det(), signature=list(L.signature()), even=L.is_even())
        return out, EXIT_OK
    if sub == "opposite":
        l1, l2 = _need(data, "l1", "l2")
        return {"opposite": disc_forms_opposite(_lattice_input(l1), _lattice_input(l2), bound)}, EXIT_OK
    if sub == "compatible":
        ns, t = _need(data, "ns", "t")
        return {"compatible": k3_complement_compatible(_lattice_input(ns), _lattice_input(t), bound)}, EXIT_OK
    raise UsageError(f"unknown lattice subcommand {sub!r}")


def cmd_hodge(sub: str, data: dict, args) -> tuple[dict, int]:
    if sub == "chi":
        (fl,) = _need(data, "fixedLocus")
        f = hodge.FixedLocusSummary.from_json(fl)
        return {"chi": hodge.chi_fixed_locus(f, bool(data.get("forSquare", False)))}, EXIT_OK
    if sub == "solve":
        chi, rank_t = _need(data, "chi", "rankT")
        e = hodge.solve_eigenspace_dims(int(chi), int(rank_t))
        return {"dims": list(e.as_tuple()), "lefschetz": hodge.lefschetz_number(e)}, EXIT_OK
    if sub == "cy":
        fl, rank_t = _need(data, "fixedLocus", "rankT")
        f = hodge.FixedLocusSummary.from_json(fl)
        if "dimH11Inv" in data:
            h = hodge.cy_hodge_numbers(f, int(data["dimH11Inv"]), int(rank_t))
            return {"hodge": [h.h11, h.h21], "euler": h.euler}, EXIT_OK
        p = hodge.HodgePipeline(f, int(rank_t))
        return {
            "chi": p.chi,
            "dims": list(p.dims.as_tuple()),
            "hodge": [p.hodge.h11, p.hodge.h21],
            "euler": p.hodge.euler,
            "zHodge": [p.z_hodge.h11, p.z_hodge.h21],
        }, EXIT_OK
    raise UsageError(f"unknown hodge subcommand {sub!r}")


def cmd_genus(data: dict, args) -> tuple[dict, int]:
    (N,) = _need(data, "N")
    if "roots" in data:
        cover = CyclicCover.from_roots(int(N), [(Fraction(r), int(m)) for r, m in data["roots"]])
    else:
        (branches,) = _need(data, "branches")
        cover = CyclicCover(int(N), [(parse_unipoly(p, "r"), int(m)) for p, m in branches])
    return {
        "genus": genus(cover),
        "holomorphicForms": [f.describe(cover) for f in holomorphic_form_basis(cover)],
    }, EXIT_OK


def cmd_verify_quotient(data: dict, args) -> tuple[dict, int]:
    rels, subst, target = _need(data, "relations", "substitution", "target")
    ok = verify_quotient_map(rels, subst, target)
    return {"verified": ok}, EXIT_OK


def _params(data: dict) -> PFParams:
    cover, form = _need(data, "cover", "form")
    if len(cover) != 4 or len(form) != 4:
        raise UsageError("cover is [N, A, B, C] and form is [alpha, beta, gamma, l]")
    return PFParams(Cover(*map(int, cover)), *map(int, form))


def _operator(data: dict) -> PFOperator:
    if "abc" in data:
        a, b, c = (Fraction(x) for x in data["abc"])
        return PFOperator.from_abc(a, b, c)
    return pf_operator(_params(data))


def cmd_pf(sub: str, data: dict, args) -> tuple[dict, int]:
    digits = args.precision
    if sub == "verify":
        p = _params(data)
        _, residual = exact_certificate(p)
        return {"residualZero": cover_is_zero(residual), "abc": [str(x) for x in p.abc()]}, EXIT_OK
    if sub == "exponents":
        op = _operator(data)
        d = indicial_exponents(op, _point(data.get("point", 0)))
        lm = local_monodromy_class(d)
        return {
            "exponents": [str(e) for e in d.exponents],
            "classification": lm.classification.value,
            "eigenvalues": [str(e) for e in lm.eigenvalues],
            "logTerm": lm.log_term,
        }, EXIT_OK
    if sub == "monodromy":
        op = _operator(data)
        around = _point(data.get("around", 0))
        res = numeric_monodromy(op, _parse_complex(data.get("basePoint", 0.5)), around,
                                tolerance=float(data.get("integrationTolerance", 1e-10)),
                                max_steps=args.max_steps)
        out = res.to_json(digits)
        exps = indicial_exponents(op, around).exponents
        out["exactExponents"] = [str(e) for e in exps]
        out["eigenvaluesMatch"] = eigenvalues_match(res, exps, args.tolerance)
        return out, EXIT_OK if out["eigenvaluesMatch"] else EXIT_MISMATCH
    if sub == "period":
        p = _params(data)
        lam = _parse_complex(data.get("lambda", 0.5))
        segment = data.get("segment", [0, 1])
        val = numeric_period(p, lam, segment, int(data.get("dps", 30)))
        out = {"period": _cplx(val, digits)}
        if lam.imag == 0 and data.get("residual", True):
            r = period_ode_residual(p, lam.real, segment)
            out["odeResidual"] = _num(r, 3)
            out["residualOk"] = r < args.tolerance
            return out, EXIT_OK if out["residualOk"] else EXIT_MISMATCH
        return out, EXIT_OK
    raise UsageError(f"unknown pf subcommand {sub!r}")


def cmd_verify_family(target: str, args) -> tuple[dict, int]:
    names = list(BUNDLED) if target == "all" else [target]
    loaded = [load_scenario(n) for n in names]
    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(verify_scenario, loaded))
    else:
        reports = [verify_scenario(d) for d in loaded]
    ok = all(r.passed for r in reports)
    out = {"status": "PASS" if ok else "FAIL", "scenarios": [r.to_json() for r in reports]}
    return out, EXIT_OK if ok else EXIT_MISMATCH


# --- plumbing -------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", help="read JSON input from this file (default stdin)")
    common.add_argument("--out", dest="outfile", help="write JSON output to this file (default stdout)")
    common.add_argument("--json", dest="inline", help="JSON input given inline")
    common.add_argument("--tolerance", type=float, default=1e-6)
    common.add_argument("--precision", type=int, default=12, help="significant digits printed")
    common.add_argument("--max-steps", type=int, default=200_000)
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="order4cy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze-fibration", parents=[common])
    for name, choices in (("lattice", ("discriminant", "opposite", "compatible")),
                          ("hodge", ("chi", "solve", "cy")),
                          ("pf", ("verify", "exponents", "monodromy", "period"))):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("action", choices=choices)
    sub.add_parser("genus", parents=[common])
    sub.add_parser("verify-quotient", parents=[common])
    vf = sub.add_parser("verify-family", parents=[common])
    vf.add_argument("scenario", help=f"one of {', '.join(BUNDLED)}, 'all', or a scenario JSON file")
    return p


def _read_input(args) -> dict:
    if args.inline is not None:
        text = args.inline
    elif args.infile:
        with open(args.infile) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON input: {e}") from None
    if not isinstance(data, dict):
        raise UsageError("JSON input must be an object")
    return data


def _dispatch(args) -> tuple[dict, int]:
    if args.command == "verify-family":
        return cmd_verify_family(args.scenario, args)
    data = _read_input(args)
    if args.command == "analyze-fibration":
        return cmd_analyze_fibration(data, args)
    if args.command == "lattice":
        return cmd_lattice(args.action, data, args)
    if args.command == "hodge":
        return cmd_hodge(args.action, data, args)
    if args.command == "genus":
        return cmd_genus(data, args)
    if args.command == "verify-quotient":
        return cmd_verify_quotient(data, args)
    return cmd_pf(args.action, data, args)


def _emit(payload: dict, args):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if getattr(args, "outfile", None):
        with open(args.outfile, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        payload, code = _dispatch(args)
    except IntegrationError as e:
        diag = {k: str(v) for k, v in e.diagnostics.items()}
        payload, code = {"error": "numeric", "message": str(e), "diagnostics": diag}, EXIT_NUMERIC
    except DomainError as e:
        payload, code = {"error": type(e).__name__, "message": str(e)}, EXIT_DOMAIN
    except (UsageError, ScenarioError, OSError, KeyError, TypeError, ValueError) as e:
        payload, code = {"error": "usage", "message": str(e)}, EXIT_USAGE
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
