"""Command-line interface: validate, dualize, and certify the pipeline.

Exit codes: 0 all checks pass; 2 invalid input; 3 an exactly-checkable claim
failed (certificate embedded in the JSON output); 4 internal error.  All
output is canonical JSON (sorted keys), so reruns are byte-identical.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import FalsificationError
from .nef import NefPartition, NefPartitionError
from .pipeline import Pipeline
from .polytope import GeometryError
from .tropical import scene_export


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ": "),
                      indent=1) + "\n"


def _parse_rational(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValueError(f"not an exact rational: {x!r}")


def load_input(path, omega_override=None, nu_override=None):
    with open(path) as fh:
        data = json.load(fh)
    dim = data["dim"]
    parts = []
    for plist in data["parts"]:
        part = []
        for pt in plist:
            if len(pt) != dim or not all(isinstance(c, int) for c in pt):
                raise ValueError(f"bad vertex {pt}: need {dim} integers")
            part.append(tuple(pt))
        parts.append(part)
    nef = NefPartition.from_vertex_lists(parts)

    def weight_spec(value, override):
        source = override if override is not None else value
        if source in (None, "all_ones", "all-ones"):
            return "all_ones"
        if isinstance(source, str):
            with open(source) as fh:
                source = json.load(fh)
        table = source["table"] if isinstance(source, dict) else source
        return [(tuple(pt), _parse_rational(v)) for pt, v in table]

    omega = weight_spec(data.get("omega"), omega_override)
    nu = weight_spec(data.get("nu"), nu_override)
    return nef, omega, nu


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nefsphere",
        description="Dual integral affine spheres from nef-partitions: "
                    "construction and exact certification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
            ("validate", "check the nef-partition axioms"),
            ("dualize", "compute the dual nef-partition"),
            ("complex", "build the sphere complex and its homology"),
            ("tropical", "build the tropical complexes"),
            ("discriminant", "compute the discriminant locus"),
            ("monodromy", "loops, holonomy, and the global group"),
            ("report", "full pipeline report")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="JSON input file")
        p.add_argument("--omega", default=None,
                       help="weight file or 'all-ones' (default: from input)")
        p.add_argument("--nu", default=None,
                       help="weight file or 'all-ones' (default: from input)")
        if name == "validate":
            p.add_argument("--require-irreducible", action="store_true")
        if name == "tropical":
            p.add_argument("--project", default=None,
                           help="comma-separated coordinate indices")
        if name == "report":
            p.add_argument("--dual", action="store_true",
                           help="also run the role-swapped pipeline")
            p.add_argument("--verify", choices=["fast", "full"],
                           default="fast")
            p.add_argument("--emit-complexes", default=None, metavar="DIR")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        nef, omega, nu = load_input(args.input, args.omega, args.nu)
    except (OSError, ValueError, KeyError, TypeError, IndexError,
            json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    try:
        pipe = Pipeline(nef, omega_spec=omega, nu_spec=nu)
        out, code = _dispatch(args, pipe)
    except FalsificationError as exc:
        sys.stdout.write(canonical_json({"falsified": exc.as_dict()}))
        return 3
    except (GeometryError, NefPartitionError) as exc:
        print(f"input rejected: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    sys.stdout.write(canonical_json(out))
    return code


def _dispatch(args, pipe):
    cmd = args.command
    if cmd == "validate":
        report = pipe.validation().as_dict()
        irr, witness = pipe.irreducibility()
        report["irreducible"] = irr
        report["witness"] = list(witness) if witness else None
        report["central"] = {
            "omega": pipe.s_coned().is_central(),
            "nu": pipe.t_coned().is_central(),
        }
        report["coned_over_boundary"] = {}
        for name, getter in (("omega", pipe.s_boundary),
                             ("nu", pipe.t_boundary)):
            try:
                getter()
                report["coned_over_boundary"][name] = True
            except GeometryError:
                report["coned_over_boundary"][name] = False
        ok = (report["passed"] and all(report["central"].values())
              and all(report["coned_over_boundary"].values()))
        if args.require_irreducible and not irr:
            ok = False
        return report, 0 if ok else 3
    if cmd == "dualize":
        dual = pipe.dual()
        out = {
            "parts": [[[str(x) for x in v] for v in p.vertices]
                      for p in dual.parts],
            "validation": pipe.validation().as_dict(),
        }
        return out, 0 if out["validation"]["passed"] else 3
    if cmd == "complex":
        sigma = pipe.sigma()
        out = {
            "cells": len(sigma),
            "dim": sigma.dim(),
            "euler": sigma.euler_characteristic(),
            "homology": [[b, list(t)] for b, t in pipe.sigma_homology()],
            "pseudomanifold": sigma.is_closed_pseudomanifold(),
        }
        return out, 0
    if cmd == "tropical":
        project = None
        if args.project:
            project = [int(x) for x in args.project.split(",")]
        cells = pipe.tropical_complex().cells
        out = {
            "bounded_cells": len(cells),
            "scene": scene_export(cells, project=project),
            "amoeba_cells": len(pipe.amoeba()),
        }
        return out, 0
    if cmd == "discriminant":
        disc = pipe.discriminant()
        out = {
            "vertices": len(disc.vertex_ids),
            "components": len(disc.components),
            "component_homology": [[[b, list(t)] for b, t in h]
                                   for h in disc.component_homology],
        }
        return out, 0
    if cmd == "monodromy":
        out = {
            "loops": len(pipe.loops()),
            "degenerate": sum(1 for l in pipe.loops() if l.degenerate),
            "global": pipe.global_report(),
            "triviality": [r for r in pipe.triviality_suite()],
        }
        ok = all(r["passed"] for r in out["triviality"])
        return out, 0 if ok else 3
    if cmd == "report":
        rep = pipe.report(verify=args.verify, include_dual=args.dual)
        if args.emit_complexes:
            _emit_complexes(pipe, args.emit_complexes)
        return rep, 0 if rep["passed"] else 3
    raise ValueError(f"unknown command {cmd}")


def _emit_complexes(pipe, directory):
    os.makedirs(directory, exist_ok=True)
    points = {}

    def point_id(pt):
        key = tuple(str(x) for x in pt)
        if key not in points:
            points[key] = len(points)
        return points[key]

    sigma = pipe.sigma()
    cells = []
    for k, (i, j) in enumerate(sigma.pairs):
        mk = sigma.p_poset.elements[i].minkowski
        tn = sigma.q_poset.elements[j].minkowski
        cells.append({
            "dim": sigma.dims[k],
            "first_factor": sorted(point_id(v) for v in mk.vertices),
            "second_factor": sorted(point_id(v) for v in tn.vertices),
        })
    disc = pipe.discriminant()
    tropical_cells = []
    for t in pipe.tropical_complex().cells:
        tropical_cells.append({
            "dim": t.dim(),
            "vertices": sorted(point_id(v) for v in t.poly.vertices),
            "generator": sorted(point_id(v) for v in t.generator.vertices),
        })
    table = [None] * len(points)
    for key, idx in points.items():
        table[idx] = list(key)
    payload = {
        "points": table,
        "sphere_cells": cells,
        "tropical_cells": tropical_cells,
        "discriminant": {
            "vertices": list(disc.vertex_ids),
            "components": [list(c) for c in disc.components],
        },
    }
    for name, blob in [("complexes.json", payload)]:
        with open(os.path.join(directory, name), "w") as fh:
            fh.write(canonical_json(blob))


if __name__ == "__main__":
    sys.exit(main())
