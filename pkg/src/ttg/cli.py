"""Command line: parse JSON inputs, run the pipeline, emit JSON/DOT reports.

Outputs are deterministic for fixed inputs: all JSON is key-sorted and all
internal orderings are canonical (primes ascending, polynomials by degree
then coefficients).  Exit codes: 0 all checks passed, 1 a check failed,
2 parse/validation error, 3 a configured bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .complexes import homology, homology_all
from .errors import FactorBoundExceeded, MalformedInput, SizeLimitExceeded, TTGError
from .jsonio import complex_from_json, open_from_json
from .morphisms import (
    contract_point,
    maps_equal_derived,
    ring_map_from_json,
    verify_geometric,
)
from .presheaf import complement_support, section_ring
from .reports import CheckReport
from .rings import (
    ProductRing,
    PolynomialRing,
    QuotientRing,
    Ring,
    Z,
    enumerate_points,
    format_point,
    localize_ring,
    ring_from_json,
)
from .spectrum import build_spectrum, model_to_json, to_dot
from .supports import supph
from .endo import reconstruct_ringed_space
from .verify import SUITES, run_suite

RING_PRESETS = {
    "Z": lambda: Z,
    "Z/4": lambda: QuotientRing(Z, 4),
    "Z/6": lambda: QuotientRing(Z, 6),
    "Z/9": lambda: QuotientRing(Z, 9),
    "Z/12": lambda: QuotientRing(Z, 12),
    "F2": lambda: QuotientRing(Z, 2),
    "F3": lambda: QuotientRing(Z, 3),
    "F5": lambda: QuotientRing(Z, 5),
    "F7": lambda: QuotientRing(Z, 7),
    "F4": lambda: QuotientRing(PolynomialRing(2), (1, 1, 1)),
    "F2[t]": lambda: PolynomialRing(2),
    "F3[t]": lambda: PolynomialRing(3),
    "F2[t]/(t^2)": lambda: QuotientRing(PolynomialRing(2), (0, 0, 1)),
    "Z[1/2]": lambda: localize_ring(Z, 2),
    "Z[1/6]": lambda: localize_ring(Z, 6),
    "Z/4xF3": lambda: ProductRing((QuotientRing(Z, 4), QuotientRing(Z, 3))),
}


def _load_json_arg(arg: str):
    text = arg.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    return json.loads(Path(arg).read_text())


def resolve_ring(arg: str) -> Ring:
    key = arg.strip()
    if key in RING_PRESETS:
        return RING_PRESETS[key]()
    return ring_from_json(_load_json_arg(arg))


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_payload(report: CheckReport) -> dict:
    return report.to_json()


def cmd_support(args) -> int:
    p = complex_from_json(_load_json_arg(args.complex))
    y = supph(p)
    _emit({"ring": p.ring.to_json(), "support": y.to_json(), "label": y.format()}, args.out)
    return 0


def cmd_homology(args) -> int:
    p = complex_from_json(_load_json_arg(args.complex))
    table = {}
    items = homology_all(p).items()
    if args.degree is not None:
        items = [(args.degree, homology(p, args.degree))]
    for i, mc in items:
        comps = []
        for comp_ring, comp in zip(mc.ring.components(), mc.components):
            base = comp_ring.base if isinstance(comp_ring, QuotientRing) else comp_ring
            comps.append(
                {
                    "rank": comp.rank,
                    "divisors": [base.element_to_json(d) for d in comp.divisors],
                }
            )
        table[str(i)] = comps
    _emit({"ring": p.ring.to_json(), "homology": table}, args.out)
    return 0


def cmd_spc(args) -> int:
    ring = resolve_ring(args.ring)
    model = build_spectrum(ring, args.bound)
    if args.dot:
        Path(args.dot).write_text(to_dot(model))
    _emit(model_to_json(model), args.out)
    return 0


def cmd_sections(args) -> int:
    ring = resolve_ring(args.ring)
    v = open_from_json(ring, _load_json_arg(args.open))
    sections = section_ring(v)
    payload = {
        "ring": ring.to_json(),
        "open": v.label(),
        "kernel_support": complement_support(v).to_json(),
        "sections": sections.to_json(),
        "sections_label": sections.label(),
    }
    _emit(payload, args.out)
    return 0


def cmd_morphism(args) -> int:
    f = ring_map_from_json(_load_json_arg(args.map))
    if args.check == "geometric":
        from .supports import Support

        supports = []
        for pt in enumerate_points(f.source, args.bound).points:
            supports.append(Support.closure_of(f.source, pt))
        report = verify_geometric(f, supports[:6])
        _emit(_report_payload(report), args.out)
        return 0 if report.ok else 1
    if args.check == "spc":
        rows = []
        for pt in enumerate_points(f.target, args.bound).points:
            image = contract_point(f, pt)
            rows.append(
                {
                    "point": format_point(f.target, pt),
                    "image": format_point(f.source, image),
                }
            )
        _emit({"map": f"{f.source.label()} -> {f.target.label()}", "spc_map": rows}, args.out)
        return 0
    if args.check == "equal":
        if not args.map2:
            raise MalformedInput("--check equal needs --map2")
        g = ring_map_from_json(_load_json_arg(args.map2))
        equal = maps_equal_derived(f, g)
        _emit({"equal": equal}, args.out)
        return 0
    raise MalformedInput(f"unknown morphism check {args.check!r}")


def cmd_reconstruct(args) -> int:
    ring = resolve_ring(args.ring)
    model, report = reconstruct_ringed_space(ring, args.bound)
    payload = {"model": model.to_json(), "report": _report_payload(report)}
    _emit(payload, args.out)
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    ring = resolve_ring(args.ring)
    seed = int(os.environ.get("TTG_SEED", "0"))
    report = run_suite(args.suite, ring, args.bound, budget=args.budget, seed=seed)
    _emit(_report_payload(report), args.out)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttg",
        description="exact tensor-triangular geometry over desk-scale commutative rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("support", help="homological support of a complex")
    p.add_argument("--complex", required=True, help="complex JSON (inline or file)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("homology", help="homology classes of a complex")
    p.add_argument("--complex", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("spc", help="build the spectrum with its basis topology")
    p.add_argument("--ring", required=True, help="ring JSON, file, or preset name")
    p.add_argument("--bound", type=int, default=7)
    p.add_argument("--dot", help="write a DOT graph of the specialization order")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spc)

    p = sub.add_parser("sections", help="section ring over an open")
    p.add_argument("--ring", required=True)
    p.add_argument("--open", required=True, help='open JSON: {"complement": ...}')
    p.add_argument("--out")
    p.set_defaults(func=cmd_sections)

    p = sub.add_parser("morphism", help="checks for a ring map")
    p.add_argument("--map", required=True, help="ring map JSON (inline or file)")
    p.add_argument("--check", default="geometric", choices=["geometric", "spc", "equal"])
    p.add_argument("--map2", help="second map for --check equal")
    p.add_argument("--bound", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_morphism)

    p = sub.add_parser("reconstruct", help="rebuild the reduced ringed-space data")
    p.add_argument("--ring", required=True)
    p.add_argument("--bound", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p.add_argument("--ring", default="Z")
    p.add_argument("--bound", type=int, default=7)
    p.add_argument("--budget", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FactorBoundExceeded, SizeLimitExceeded) as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return 3
    except (MalformedInput, json.JSONDecodeError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except TTGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
