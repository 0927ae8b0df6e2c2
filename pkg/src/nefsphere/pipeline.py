"""End-to-end orchestration of the primal (and role-swapped dual) runs.

A Pipeline owns one nef-partition plus the two weight functions and lazily
computes every derived object: dual partition, boundary subdivisions,
transversal posets, the sphere complex, tropical complexes, discriminant and
monodromy data, and the machine-readable run report.
"""

from fractions import Fraction

from . import monodromy as mono
from . import sphere, tropical
from .nef import (
    dual_nef_partition,
    interior_vectors,
    is_irreducible,
    validate_nef_partition,
)
from .polytope import GeometryError, pair as role_pair
from .subdivision import (
    WeightFunction,
    boundary_subdivision,
    lower_hull_subdivision,
)


def _cached(fn):
    name = "_" + fn.__name__

    def wrapper(self):
        if name not in self._cache:
            self._cache[name] = fn(self)
        return self._cache[name]

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


class Pipeline:
    def __init__(self, nef, omega_spec="all_ones", nu_spec="all_ones"):
        self.nef = nef
        self.omega_spec = omega_spec
        self.nu_spec = nu_spec
        self._cache = {}

    # -- structural layer ----------------------------------------------------

    @_cached
    def validation(self):
        return validate_nef_partition(self.nef)

    @_cached
    def dual(self):
        return dual_nef_partition(self.nef)

    @_cached
    def irreducibility(self):
        return is_irreducible(self.nef)

    @_cached
    def interior_vectors(self):
        return interior_vectors(self.nef, self.dual())

    @_cached
    def omega(self):
        return _weight(self.nef.parts_hull, self.omega_spec)

    @_cached
    def nu(self):
        return _weight(self.nef.sum_polar, self.nu_spec)

    # -- subdivisions ----------------------------------------------------------

    @_cached
    def s_coned(self):
        sub = lower_hull_subdivision(self.nef.parts_hull, self.omega())
        if not sub.is_central():
            raise GeometryError("subdivision not central (omega)")
        return sub

    @_cached
    def t_coned(self):
        sub = lower_hull_subdivision(self.nef.sum_polar, self.nu())
        if not sub.is_central():
            raise GeometryError("subdivision not central (nu)")
        return sub

    @_cached
    def s_boundary(self):
        return boundary_subdivision(self.s_coned())

    @_cached
    def t_boundary(self):
        return boundary_subdivision(self.t_coned())

    # -- transversal layer ------------------------------------------------------

    @_cached
    def p_poset(self):
        return sphere.transversal_poset(self.s_boundary(),
                                        list(self.nef.parts),
                                        delta=self.nef.sum_polytope)

    @_cached
    def q_poset(self):
        return sphere.transversal_poset(self.t_boundary(),
                                        list(self.dual().parts),
                                        delta=self.dual().sum_polytope)

    @_cached
    def p_minkowski_complex(self):
        return sphere.minkowski_complex(self.p_poset(), self.nef.sum_polytope,
                                        self.nef.r, self.nef.parts_hull)

    @_cached
    def q_minkowski_complex(self):
        return sphere.minkowski_complex(self.q_poset(),
                                        self.dual().sum_polytope, self.nef.r,
                                        self.nef.sum_polar)

    @_cached
    def sigma(self):
        pairs = sphere.adjoint_pairs(self.p_poset(), self.q_poset())
        return sphere.build_sigma(self.p_poset(), self.q_poset(), pairs,
                                  self.nef.r,
                                  expected_dim=self.nef.ambient - self.nef.r)

    @_cached
    def sigma_homology(self):
        return self.sigma().homology()

    # -- tropical layer -----------------------------------------------------------

    @_cached
    def part_subdivisions(self):
        return [tropical.part_subdivision(p, self.omega())
                for p in self.nef.parts]

    @_cached
    def amoeba(self):
        return tropical.amoeba(self.s_coned())

    @_cached
    def tropical_complex(self):
        return tropical.bounded_tropical_complex(self.p_poset(),
                                                 self.s_boundary(),
                                                 self.nef.ambient)

    @_cached
    def zero_cell(self):
        return tropical.tropical_zero_cell(self.nef.parts_hull, self.omega())

    # -- monodromy layer -----------------------------------------------------------

    @_cached
    def atlas(self):
        return mono.ChartAtlas(self.sigma())

    @_cached
    def graph(self):
        return mono.chart_graph(self.sigma(), self.atlas())

    @_cached
    def discriminant(self):
        return mono.discriminant(self.sigma())

    @_cached
    def loops(self):
        return mono.primary_loops(self.sigma(), self.s_boundary(),
                                  self.t_boundary())

    @_cached
    def monodromies(self):
        return [mono.monodromy(self.sigma(), loop, self.omega())
                for loop in self.loops()]

    @_cached
    def global_report(self):
        return mono.global_group(self.sigma(), self.graph(), self.loops(),
                                 self.omega(), self.discriminant())

    @_cached
    def complement_homology(self):
        return mono.complement_homology(self.sigma())

    @_cached
    def dual_pipeline(self):
        """The role-swapped run: dual parts with the weights interchanged."""
        dual_nef = self.dual().as_nef_partition()
        return Pipeline(dual_nef,
                        omega_spec=_weight_as_spec(self.nu()),
                        nu_spec=_weight_as_spec(self.omega()))

    # -- verification suites ---------------------------------------------------------

    def lemma_suite(self):
        failures = sphere.lemma_slice_suite(self.s_boundary(),
                                            list(self.nef.parts),
                                            [p for p in self.dual().parts])
        failures += sphere.lemma_slice_suite(self.t_boundary(),
                                             list(self.dual().parts),
                                             [p for p in self.nef.parts])
        failures += sphere.minimal_cells_unimodular(self.p_poset())
        failures += sphere.minimal_cells_unimodular(self.q_poset())
        return failures

    def tropical_suite(self):
        report = {}
        report["order_complex"] = tropical.order_complex_check(
            self.tropical_complex())
        report["bounded_amoeba_is_zero_cell_boundary"] = \
            tropical.bounded_amoeba_matches_zero_cell(self.amoeba(),
                                                      self.zero_cell())
        report["bounded_cells"] = tropical.bounded_cells_check(
            list(self.nef.parts), self.part_subdivisions(),
            self.s_boundary(), self.p_poset(), self.tropical_complex())
        report["mixed_subdivision"] = tropical.mixed_subdivision_check(
            list(self.nef.parts), self.s_coned(), self.nef.sum_polytope)
        return report

    def triviality_suite(self):
        out = []
        for loop, m in zip(self.loops(), self.monodromies()):
            out.append(mono.triviality_equivalence_check(self.sigma(), loop, m))
        return out

    def local_group_suite(self):
        reports = {}
        for k in range(len(self.sigma().pairs)):
            if not mono.smooth_pair(self.sigma(), k):
                reports[k] = mono.local_group(self.sigma(), k, self.omega())
        return reports

    def duality_suite(self):
        dual_pipe = self.dual_pipeline()
        dual_sigma = dual_pipe.sigma()
        out = []
        for loop, m in zip(self.loops(), self.monodromies()):
            out.append(mono.duality_check(self.sigma(), loop, m, dual_sigma,
                                          dual_pipe.omega()))
        return out

    # -- reporting --------------------------------------------------------------------

    def report(self, verify="fast", include_dual=False):
        rep = {"input": self._input_description(), "stages": {}}
        stages = rep["stages"]
        stages["validation"] = self.validation().as_dict()
        irr, witness = self.irreducibility()
        stages["irreducible"] = {"irreducible": irr,
                                 "witness": list(witness) if witness else None}
        dual = self.dual()
        stages["dual_partition"] = {
            "parts": [_poly_vertices(p) for p in dual.parts],
            "involution": _involution_holds(self.nef, dual),
        }
        iv = self.interior_vectors()
        stages["interior_vectors"] = {
            "v": [[str(c) for c in vec.coords] for vec in iv.v],
            "w": [[str(c) for c in vec.coords] for vec in iv.w],
            "sign_pattern": _sign_pattern_holds(iv) if irr else None,
        }
        stages["subdivisions"] = {
            "S": _boundary_stats(self.s_boundary()),
            "T": _boundary_stats(self.t_boundary()),
        }
        stages["transversal"] = {
            "P": len(self.p_poset()), "Q": len(self.q_poset()),
            "P_minimal": len(self.p_poset().minimal),
            "Q_minimal": len(self.q_poset().minimal),
        }
        stages["minkowski_complexes"] = {
            "P_side": self.p_minkowski_complex().report,
            "Q_side": self.q_minkowski_complex().report,
        }
        sigma = self.sigma()
        d, r = self.nef.ambient, self.nef.r
        cells_by_dim = {}
        for dim in sigma.dims:
            cells_by_dim[dim] = cells_by_dim.get(dim, 0) + 1
        stages["sigma"] = {
            "cells": len(sigma),
            "cells_by_dim": {str(k): v for k, v in sorted(cells_by_dim.items())},
            "dim": sigma.dim(),
            "euler": sigma.euler_characteristic(),
            "expected_euler": 1 + (-1) ** (d - r) if irr else None,
            "pseudomanifold": sigma.is_closed_pseudomanifold(),
            "homology": _homology_json(self.sigma_homology()),
            "projections": sphere.projection_images(sigma),
            "sphericity_certificate":
                "integral homology plus closed-pseudomanifold check; "
                "homeomorphism type itself is not certified",
        }
        disc = self.discriminant()
        stages["discriminant"] = {
            "vertices": len(disc.vertex_ids),
            "components": len(disc.components),
            "component_homology": [_homology_json(h)
                                   for h in disc.component_homology],
            "component_parts": _component_parts(self.sigma(), disc),
        }
        loops = self.loops()
        stages["monodromy"] = {
            "graph_nodes": len(self.graph().nodes()),
            "graph_edges": len(self.graph().edges),
            "primary_loops": len(loops),
            "degenerate_loops": sum(1 for l in loops if l.degenerate),
            "global": self.global_report(),
            "atlas": self.atlas().covering_report(),
        }
        if verify == "full":
            stages["lemma_suite_failures"] = self.lemma_suite()
            stages["tropical"] = self.tropical_suite()
            stages["triviality"] = _summarize_triviality(self.triviality_suite())
            stages["local_groups"] = {
                str(k): v for k, v in sorted(self.local_group_suite().items())}
            stages["complement_homology"] = _homology_json(
                self.complement_homology())
        if include_dual:
            stages["duality_monodromy"] = _summarize_duality(
                self.duality_suite())
        rep["passed"] = _report_passed(rep)
        return rep

    def _input_description(self):
        return {
            "dim": self.nef.ambient,
            "r": self.nef.r,
            "parts": [_poly_vertices(p) for p in self.nef.parts],
            "omega": _weight_description(self.omega_spec),
            "nu": _weight_description(self.nu_spec),
        }


def _weight(support, spec):
    if isinstance(spec, WeightFunction):
        if spec.support != support:
            raise GeometryError("weight function bound to a different support")
        return spec
    if spec == "all_ones":
        return WeightFunction.all_ones(support)
    return WeightFunction.from_pairs(support, spec)


def _weight_as_spec(weight):
    return [(pt, val) for pt, val in weight.as_sorted_items()]


def _weight_description(spec):
    if isinstance(spec, str):
        return spec
    if isinstance(spec, WeightFunction):
        return spec.preset or "table"
    return [[list(pt), str(Fraction(v))] for pt, v in spec]


def _poly_vertices(p):
    return [[str(x) for x in v] for v in p.vertices]


def _involution_holds(nef, dual):
    try:
        from .nef import dual_nef_partition as ddn
        back = ddn(dual.as_nef_partition())
        return [p.vertices for p in back.parts] == \
            [p.vertices for p in nef.parts]
    except Exception:
        return False


def _sign_pattern_holds(iv):
    r = len(iv.v)
    for i in range(r):
        for j in range(r):
            value = role_pair(iv.v[i], iv.w[j])
            if i == j and value <= 0:
                return False
            if i != j and value >= 0:
                return False
    return True


def _boundary_stats(boundary):
    return {
        "side": boundary.side,
        "cells_by_dim": {str(k): v
                         for k, v in enumerate(boundary.f_vector()) if v},
        "maximal": len(boundary.maximal_cells),
    }


def _homology_json(hom):
    return [[betti, list(torsion)] for betti, torsion in hom]


def _component_parts(sigma, disc):
    """Which partition indices each discriminant component is pinched in."""
    out = []
    for comp in disc.components:
        hit = set()
        for k in comp:
            i, j = sigma.pairs[k]
            for a in range(sigma.r):
                if sigma.p_poset.elements[i].slices[a].dim * \
                        sigma.q_poset.elements[j].slices[a].dim != 0:
                    hit.add(a)
        out.append(sorted(hit))
    return out


def _summarize_triviality(results):
    checked = [r for r in results if not r.get("degenerate")]
    return {
        "non_degenerate_checked": len(checked),
        "all_equivalent": all(r["passed"] for r in checked),
        "trivial_count": sum(1 for r in results if r.get("trivial")),
    }


def _summarize_duality(results):
    return {
        "loops_checked": len(results),
        "all_preserve_pairing": all(r["passed"] for r in results),
    }


def _report_passed(rep):
    stages = rep["stages"]
    flags = [stages["validation"]["passed"],
             stages["dual_partition"]["involution"],
             stages["sigma"]["pseudomanifold"],
             stages["sigma"]["projections"]["passed"],
             stages["minkowski_complexes"]["P_side"]["passed"],
             stages["minkowski_complexes"]["Q_side"]["passed"],
             stages["monodromy"]["atlas"]["passed"]]
    if stages["sigma"]["expected_euler"] is not None:
        flags.append(stages["sigma"]["euler"] ==
                     stages["sigma"]["expected_euler"])
    if "lemma_suite_failures" in stages:
        flags.append(not stages["lemma_suite_failures"])
    if "tropical" in stages:
        flags.extend(v["passed"] for v in stages["tropical"].values())
    if "triviality" in stages:
        flags.append(stages["triviality"]["all_equivalent"])
    if "local_groups" in stages:
        flags.extend(v["passed"] for v in stages["local_groups"].values())
    if "duality_monodromy" in stages:
        flags.append(stages["duality_monodromy"]["all_preserve_pairing"])
    return all(flags)
