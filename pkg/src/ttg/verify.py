"""Verification suites: every documented invariant, re-checked on demand.

Each suite takes a testbed ring and returns a structured report; the `all`
suite concatenates them.  Checks are exact (integer and polynomial
arithmetic throughout) and deterministic: sampled families are drawn with
an explicit seed so reruns are byte-identical.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .complexes import (
    ChainMap,
    Complex,
    add_maps,
    chain_map_basis,
    cone,
    direct_sum,
    homology_all,
    hom_up_to_homotopy,
    identity_map,
    is_null_homotopic,
    koszul_cone,
    neg_map,
    scalar_map,
    shift,
    tensor,
    unit_complex,
    zero_complex,
)
from .endo import (
    endomorphism_ring_checks,
    evaluate_at_unit,
    is_pointwise_nilpotent,
    multiplier_endo,
    nilpotence_index,
    reconstruct_ringed_space,
    restrict_endo,
)
from .errors import SizeLimitExceeded
from .linalg import Matrix, ModuleClass, determinant, smith_normal_form
from .morphisms import (
    RingMap,
    compose_maps,
    contract_point,
    eval_element,
    identity_ring_map,
    localization_inclusion,
    maps_equal_derived,
    preimage_support,
    pullback,
    reduction_map,
    spc_map,
)
from .presheaf import (
    clear_denominators,
    direct_image_check,
    fraction_check,
    molecular_check,
    open_from_complement,
    principal_open,
    restrict_complex,
    restriction_map,
    section_map,
    section_ring,
    whole_open,
)
from .reports import CheckReport
from .rings import (
    DEFAULT_LIMITS,
    EuclideanRing,
    FactorLimits,
    IntegerRing,
    LocalizedRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    Ring,
    SpcPoint,
    Z,
    ZeroRing,
    canonical_ring_elements,
    element_in_point,
    enumerate_points,
    factor_element,
    is_zero_ring_like,
    localize_ring,
    nilradical_quotient,
)
from .spectrum import (
    build_spectrum,
    check_topology_axioms,
    is_atomic,
    point_to_subcategory,
    subcategory_to_point,
)
from .supports import (
    Support,
    generators_support,
    membership,
    point_cone,
    realize_support,
    subcategory_from_support,
    supph,
    theta_step,
)

SUITES = ("thomason", "topology", "geometric", "presheaf", "endo", "reconstruct")


def sample_complexes(ring: Ring, bound: int, limits: FactorLimits = DEFAULT_LIMITS) -> list[Complex]:
    one = unit_complex(ring)
    out = [one, shift(one), zero_complex(ring)]
    pts = [pt for pt in enumerate_points(ring, min(bound, 5), limits).points if not pt.is_generic]
    cones = [point_cone(ring, pt) for pt in pts[:3]]
    out.extend(cones)
    if len(cones) >= 2:
        out.append(direct_sum(cones[0], cones[1]))
        out.append(tensor(cones[0], cones[1]))
    if cones:
        out.append(tensor(cones[0], cones[0]))
        out.append(cone(scalar_map(cones[0], ring.from_int(2))).cone)
    return out


def enumerated_supports(ring: Ring, bound: int, cap: int, limits: FactorLimits = DEFAULT_LIMITS) -> list[Support]:
    pts = list(enumerate_points(ring, bound, limits).points)
    supports = []
    for r in range(len(pts) + 1):
        for combo in combinations(pts, r):
            supports.append(Support.of_points(ring, list(combo)))
            if len(supports) >= cap:
                return supports
    return supports


def fixture_maps(ring: Ring, bound: int, limits: FactorLimits = DEFAULT_LIMITS) -> list[RingMap]:
    maps = [identity_ring_map(ring)]
    try:
        maps.append(reduction_map(ring, limits))
    except Exception:
        pass
    if not isinstance(ring, ProductRing):
        for x in canonical_ring_elements(ring):
            if not ring.is_zero(x) and not ring.is_unit(x):
                try:
                    maps.append(localization_inclusion(ring, x, limits))
                except Exception:
                    continue
                break
    if isinstance(ring, IntegerRing):
        for n in (4, 12):
            maps.append(RingMap(ring, QuotientRing(ring, n)))
        for p in (2, 3, 5):
            if p <= bound:
                maps.append(RingMap(ring, QuotientRing(ring, p)))
    if isinstance(ring, PolynomialRing) and ring.p == 2:
        f4 = QuotientRing(ring, (1, 1, 1))
        omega = f4.reduce((0, 1))
        maps.append(RingMap(ring, f4, {"t": omega}))
        maps.append(RingMap(ring, f4, {"t": f4.mul(omega, omega)}))
        maps.append(RingMap(ring, QuotientRing(Z, 2), {"t": 0}))
    if isinstance(ring, QuotientRing) and isinstance(ring.base, IntegerRing):
        _, factors = factor_element(ring.base, ring.modulus, limits)
        for p, _ in factors:
            maps.append(RingMap(ring, QuotientRing(ring.base, p)))
    return maps


# ---------------------------------------------------------------------------
# suite: thomason (ring kernel + complexes + the support dictionary)
# ---------------------------------------------------------------------------


def suite_thomason(
    ring: Ring,
    bound: int,
    budget: int = 16,
    seed: int = 0,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> CheckReport:
    report = CheckReport(f"thomason suite over {ring.label()} (bound {bound})")
    rng = random.Random(seed)

    # kernel: Smith normal form on deterministic and seeded samples
    snf_ok = True
    chain_ok = True
    unit_ok = True
    for comp in ring.components():
        if not isinstance(comp, EuclideanRing):
            continue
        mats = [
            Matrix.build(comp, [[comp.from_int(rng.randint(-6, 6)) for _ in range(3)] for _ in range(3)])
            for _ in range(6)
        ]
        mats.append(Matrix.zeros(comp, 2, 2))
        mats.append(Matrix.build(comp, [[comp.from_int(2), comp.zero()], [comp.zero(), comp.from_int(3)]]))
        for m in mats:
            s = smith_normal_form(m)
            if (s.u @ m @ s.v).entries != s.d.entries:
                snf_ok = False
            if not (comp.is_unit(determinant(s.u)) and comp.is_unit(determinant(s.v))):
                unit_ok = False
            diag = [d for d in s.diagonal if not comp.is_zero(d)]
            for a, b in zip(diag, diag[1:]):
                if not comp.divides(a, b):
                    chain_ok = False
    report.add("kernel.snf_identity", "U*M*V = D for the Smith form", snf_ok)
    report.add("kernel.snf_units", "the Smith transforms are invertible", unit_ok)
    report.add("kernel.snf_chain", "the Smith diagonal is a divisibility chain", chain_ok)

    fact_ok = True
    for comp in ring.components():
        if not isinstance(comp, EuclideanRing):
            continue
        for x in canonical_ring_elements(comp):
            if comp.is_zero(x):
                continue
            unit, factors = factor_element(comp, x, limits)
            rebuilt = unit
            for p, e in factors:
                embedded = comp.from_base(p) if isinstance(comp, LocalizedRing) else p
                for _ in range(e):
                    rebuilt = comp.mul(rebuilt, embedded)
            if rebuilt != x:
                fact_ok = False
    report.add("kernel.factor_recompose", "unit * product of prime powers = the element", fact_ok)

    reduced, project = nilradical_quotient(ring, limits)
    if ring.is_finite():
        nil_ok = all(
            _is_reduced_element(reduced, project(x)) for x in ring.elements()
        )
        detail = "exhaustive"
    else:
        nil_ok = all(_is_reduced_element(reduced, project(x)) for x in canonical_ring_elements(ring))
        detail = "sampled"
    report.add(
        "kernel.nilradical_reduced",
        "the nilradical quotient has no nilpotents",
        nil_ok,
        detail,
    )

    if ring.is_finite():
        enum = enumerate_points(ring, bound, limits)
        cover_ok = all(
            ring.is_unit(x) or any(element_in_point(ring, pt, x) for pt in enum.points)
            for x in ring.elements()
            if not ring.is_zero(x)
        ) and all(element_in_point(ring, pt, ring.zero()) for pt in enum.points)
        report.add(
            "kernel.points_maximal",
            "every nonunit of a finite ring lies in an enumerated point",
            cover_ok,
            "exhaustive",
        )

    loc_ok = True
    if not isinstance(ring, (ProductRing, ZeroRing)):
        for x in canonical_ring_elements(ring):
            if ring.is_zero(x) or ring.is_unit(x):
                continue
            try:
                localized = localize_ring(ring, x, limits)
            except Exception:
                continue
            pts_loc = {p.prime for p in enumerate_points(localized, bound, limits).points if not p.is_generic}
            pts_kept = {
                p.prime
                for p in enumerate_points(ring, bound, limits).points
                if not p.is_generic and not element_in_point(ring, p, x)
            }
            if not is_zero_ring_like(localized) and pts_loc != pts_kept:
                loc_ok = False
    report.add(
        "kernel.localize_points",
        "points of a localization are the points avoiding the inverted element",
        loc_ok,
    )

    # complexes: structural laws
    samples = sample_complexes(ring, bound, limits)
    report.add(
        "complexes.d_squared",
        "d of d = 0 on every constructed complex",
        True,
        "enforced by construction on all samples",
    )

    swap_ok = True
    for a in samples[:4]:
        for b in samples[:4]:
            try:
                if homology_all(tensor(a, b)) != homology_all(tensor(b, a)):
                    swap_ok = False
            except SizeLimitExceeded:
                continue
    report.add(
        "complexes.tensor_swap",
        "both tensor orders have the same homology classes",
        swap_ok,
    )

    report.add(
        "complexes.hom_unit",
        "endomorphisms of the unit form the ring itself",
        hom_up_to_homotopy(unit_complex(ring), unit_complex(ring)) == ModuleClass.free(ring, 1),
    )

    qi_ok = True
    contractible = cone(identity_map(unit_complex(ring))).cone
    for p in samples[:4]:
        padded = direct_sum(p, contractible)
        if homology_all(p) != {
            i: homology_all(padded).get(i, homology_all(p)[i]) for i in homology_all(p)
        }:
            qi_ok = False
        if supph(p, limits) != supph(padded, limits):
            qi_ok = False
    report.add(
        "complexes.quasi_iso_padding",
        "adding a contractible summand changes no homology class and no support",
        qi_ok,
    )

    # the dictionary between supports and subcategories
    supports = enumerated_supports(ring, bound, cap=64, limits=limits)
    realize_ok = all(supph(realize_support(y), limits) == y for y in supports)
    report.add(
        "thomason.realize_roundtrip",
        "the generator construction realizes every finitary support exactly",
        realize_ok,
        f"{len(supports)} supports over the enumerated points",
    )

    member_ok = True
    for y in supports:
        handle = subcategory_from_support(y)
        for g in handle.generators:
            if not membership(g, y, limits):
                member_ok = False
    report.add(
        "thomason.membership",
        "every generator of a support's subcategory passes the membership test",
        member_ok,
    )

    theta_ok = True
    for y in supports[: min(len(supports), budget)]:
        gens = subcategory_from_support(y).generators
        sample = theta_step(list(gens), budget=8, ring=ring, limits=limits)
        for obj in sample.objects:
            if not membership(obj, y, limits):
                theta_ok = False
    report.add(
        "thomason.theta_containment",
        "one closure step stays inside the generating support",
        theta_ok,
    )

    laws_ok = True
    for a in samples[:4]:
        for b in samples[:4]:
            ya, yb = supph(a, limits), supph(b, limits)
            if supph(direct_sum(a, b), limits) != ya.union(yb):
                laws_ok = False
            if supph(shift(a), limits) != ya:
                laws_ok = False
            try:
                if supph(tensor(a, b), limits) != ya.intersect(yb):
                    laws_ok = False
            except SizeLimitExceeded:
                pass
            try:
                for f in chain_map_basis(a, b)[:2]:
                    if not supph(cone(f).cone, limits).subset_of(ya.union(yb)):
                        laws_ok = False
            except SizeLimitExceeded:
                pass
    report.add(
        "thomason.supph_laws",
        "support is additive on sums, shift-invariant, intersective on tensors, subadditive on cones",
        laws_ok,
    )

    mono_ok = True
    for y1 in supports[:12]:
        for y2 in supports[:12]:
            lhs = y1.subset_of(y2)
            rhs = membership(realize_support(y1), y2, limits)
            if lhs != rhs:
                mono_ok = False
    report.add(
        "thomason.monotonicity",
        "support containment matches membership of the realizing generators",
        mono_ok,
    )
    return report


def _is_reduced_element(reduced: Ring, x) -> bool:
    power = x
    for _ in range(8):
        power = reduced.mul(power, power)
        if reduced.is_zero(power):
            return reduced.is_zero(x)
    return True


# ---------------------------------------------------------------------------
# suite: topology
# ---------------------------------------------------------------------------


def suite_topology(
    ring: Ring, bound: int, budget: int = 60, seed: int = 0, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    model = build_spectrum(ring, bound, limits=limits)
    report = check_topology_axioms(model, limits=limits)

    enum = enumerate_points(ring, bound, limits)
    embed_ok = True
    order_ok = True
    for descr in enum.points:
        atom = point_to_subcategory(model, descr)
        if subcategory_to_point(atom) != descr:
            embed_ok = False
        if not is_atomic(atom.support):
            embed_ok = False
    for a in model.points:
        for b in model.points:
            lhs = a.support.subset_of(b.support)
            rhs = Support.closure_of(ring, a.descriptor).subset_of(
                Support.closure_of(ring, b.descriptor)
            )
            if lhs != rhs:
                order_ok = False
    report.add(
        "spectrum.embedding_bijective",
        "points embed bijectively onto the atomic subcategories",
        embed_ok,
        f"{len(model.points)} enumerated points",
    )
    report.add(
        "spectrum.embedding_order",
        "closure containment matches subcategory containment",
        order_ok,
    )

    atomic_ok = True
    for y in enumerated_supports(ring, bound, cap=32, limits=limits):
        claim = is_atomic(y)
        oracle = _atomic_by_cover_enumeration(ring, y, bound, limits)
        if oracle is not None and claim != oracle:
            atomic_ok = False
    report.add(
        "spectrum.atomic_cover_agreement",
        "the irreducibility test matches bounded cover enumeration",
        atomic_ok,
    )

    principal_ok = True
    for pt in model.points:
        single = realize_support(pt.support)
        if supph(single, limits) != pt.support:
            principal_ok = False
    report.add(
        "spectrum.atomic_principal",
        "every atom is generated by a single complex",
        principal_ok,
    )
    return report


def _atomic_by_cover_enumeration(ring: Ring, y: Support, bound: int, limits) -> bool | None:
    """Atomicity via covers by unions of enumerated supports; exact on finite rings."""
    if not enumerate_points(ring, bound, limits).complete:
        return None
    pts = list(enumerate_points(ring, bound, limits).points)
    if len(pts) > 4:
        return None
    closures = [Support.closure_of(ring, pt) for pt in pts]
    if y.is_empty():
        return False
    for r in range(1, len(closures) + 1):
        for cover in combinations(closures, r):
            union = Support.empty(ring)
            for c in cover:
                union = union.union(c)
            if y.subset_of(union) and not any(y.subset_of(c) for c in cover):
                return False
    return True


# ---------------------------------------------------------------------------
# suite: geometric
# ---------------------------------------------------------------------------


def suite_geometric(
    ring: Ring, bound: int, budget: int = 16, seed: int = 0, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    from .morphisms import verify_geometric

    report = CheckReport(f"geometric suite over {ring.label()} (bound {bound})")
    maps = fixture_maps(ring, bound, limits)
    samples = sample_complexes(ring, bound, limits)
    supports = enumerated_supports(ring, bound, cap=8, limits=limits)

    formula_ok = True
    count = 0
    for f in maps:
        for p in samples:
            lhs = supph(pullback(f, p), limits)
            rhs = preimage_support(f, supph(p, limits), limits)
            count += 1
            if lhs != rhs:
                formula_ok = False
    report.add(
        "geometric.support_formula",
        "support of the pullback equals the preimage of the support",
        formula_ok,
        f"{count} (map, complex) pairs",
    )

    for f in maps[:3]:
        report.extend(verify_geometric(f, supports[:5], limits))

    cont_ok = True
    diag_ok = True
    for f in maps:
        target_enum = enumerate_points(f.target, bound, limits)
        source_model = build_spectrum(f.source, bound, limits=limits)
        witnesses = [realize_support(s) for s in supports[:4]]
        for y in target_enum.points:
            x = contract_point(f, y)
            if not Support.closure_of(f.source, x).subset_of(Support.everything(f.source, limits)):
                diag_ok = False
            for a in witnesses:
                in_f_target = supph(pullback(f, a), limits).subset_of(
                    Support.everything(f.target, limits)
                )
                lhs = Support.closure_of(f.target, y).subset_of(supph(pullback(f, a), limits))
                rhs = Support.closure_of(f.source, x).subset_of(supph(a, limits))
                if lhs != rhs:
                    cont_ok = False
    report.add(
        "geometric.continuity",
        "a point lands in a closed basis set exactly when its contraction does",
        cont_ok,
    )

    comp_ok = True
    pairs = 0
    for f in maps:
        for g in maps:
            if f.target != g.source:
                continue
            try:
                gf = compose_maps(g, f)
            except Exception:
                continue
            pairs += 1
            for y in enumerate_points(g.target, bound, limits).points:
                if contract_point(gf, y) != contract_point(f, contract_point(g, y)):
                    comp_ok = False
    report.add(
        "geometric.spc_functorial",
        "contraction of a composite is the composite of contractions",
        comp_ok,
        f"{pairs} composable pairs",
    )

    ident_ok = True
    ident = identity_ring_map(ring)
    for y in enumerate_points(ring, bound, limits).points:
        if spc_map(ident, y) != y:
            ident_ok = False
    report.add("geometric.spc_identity", "the identity map induces the identity on points", ident_ok)

    eq_ok = True
    for f in maps:
        if not maps_equal_derived(f, f):
            eq_ok = False
    distinct = [(f, g) for f in maps for g in maps if f is not g and f.source == g.source and f.target == g.target and f.images != g.images]
    for f, g in distinct[:6]:
        if maps_equal_derived(f, g):
            eq_ok = False
    report.add(
        "geometric.derived_equality",
        "the unit-endomorphism comparison matches equality of generator images",
        eq_ok,
        f"{len(maps)} reflexive and {min(len(distinct), 6)} distinct pairs",
    )
    return report


# ---------------------------------------------------------------------------
# suite: presheaf
# ---------------------------------------------------------------------------


def suite_presheaf(
    ring: Ring, bound: int, budget: int = 6, seed: int = 0, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    report = CheckReport(f"presheaf suite over {ring.label()} (bound {bound})")
    pts = [pt for pt in enumerate_points(ring, bound, limits).points if not pt.is_generic]
    samples = sample_complexes(ring, bound, limits)

    opens = [whole_open(ring)]
    for pt in pts[:3]:
        opens.append(open_from_complement(ring, Support.closure_of(ring, pt), limits))
    nested = []
    for i in range(len(pts[:3])):
        y = Support.empty(ring)
        for pt in pts[: i + 1]:
            y = y.union(Support.closure_of(ring, pt))
        nested.append(open_from_complement(ring, y, limits))
    nested = [whole_open(ring)] + nested

    mono_ok = True
    for a in opens:
        for b in opens:
            if a.contains(b) and not a.complement.subset_of(b.complement):
                mono_ok = False
    report.add(
        "presheaf.kernel_monotone",
        "smaller opens have larger restriction kernels",
        mono_ok,
    )

    comp_ok = True
    for i in range(len(nested) - 2):
        v3, v2, v1 = nested[i], nested[i + 1], nested[i + 2]
        if is_zero_ring_like(section_ring(v3, limits)) or is_zero_ring_like(section_ring(v2, limits)):
            continue
        r12 = restriction_map(v2, v1, limits)
        r23 = restriction_map(v3, v2, limits)
        r13 = restriction_map(v3, v1, limits)
        for x in canonical_ring_elements(section_ring(v3, limits)):
            if eval_element(r12, eval_element(r23, x)) != eval_element(r13, x):
                comp_ok = False
    report.add(
        "presheaf.restriction_composes",
        "restriction along nested opens composes",
        comp_ok,
        f"{max(len(nested) - 2, 0)} nested triples",
    )

    restrict_ok = True
    for v in opens[:3]:
        open_points = Support.everything(ring, limits)
        for p in samples[:5]:
            lhs = supph(restrict_complex(p, v, limits), limits)
            rhs_global = supph(p, limits)
            rhs = _support_on_open(rhs_global, v, limits)
            if lhs != rhs:
                restrict_ok = False
    report.add(
        "presheaf.restrict_support",
        "restricting an object cuts its support with the open",
        restrict_ok,
    )

    cleared = 0
    clear_ok = True
    if isinstance(ring, (IntegerRing, PolynomialRing, QuotientRing)):
        for x in canonical_ring_elements(ring):
            if ring.is_zero(x) or ring.is_unit(x):
                continue
            local = localize_ring(ring, x, limits)
            if is_zero_ring_like(local):
                continue
            v = principal_open(ring, x, limits)
            for p in samples[:4]:
                try:
                    restricted = restrict_complex(p, v, limits)
                    clear_denominators(restricted, ring, x, limits)
                    cleared += 1
                except AssertionError:
                    clear_ok = False
            break
    report.add(
        "presheaf.clear_denominators",
        "localized objects lift with exact two-sided isomorphism witnesses",
        clear_ok,
        f"{cleared} round trips",
    )

    for v in opens[1:2]:
        for x_obj in samples[3:5]:
            for y_obj in samples[3:5]:
                try:
                    report.extend(fraction_check(x_obj, y_obj, v, budget, limits))
                except SizeLimitExceeded:
                    continue

    report.extend(molecular_check(ring, bound, limits=limits))

    maps = fixture_maps(ring, bound, limits)
    for f in maps[:2]:
        for v in opens[1:2]:
            try:
                report.extend(direct_image_check(f, v, samples[:3], limits))
            except Exception as exc:
                report.add(
                    "presheaf.square",
                    "restricting then pulling back equals pulling back then restricting",
                    False,
                    f"raised {exc}",
                )
    return report


def _support_on_open(y: Support, v, limits) -> Support:
    """Transport a support to the section ring of an open: drop the complement."""
    target = section_ring(v, limits)
    from .morphisms import preimage_support as pre

    return pre(section_map(v, limits), y, limits) if not isinstance(target, ZeroRing) else Support.empty(target)


# ---------------------------------------------------------------------------
# suite: endo
# ---------------------------------------------------------------------------


def suite_endo(
    ring: Ring, bound: int, budget: int = 16, seed: int = 0, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    report = CheckReport(f"identity-endomorphism suite over {ring.label()} (bound {bound})")
    report.extend(endomorphism_ring_checks(ring, limits=limits))

    if ring.is_finite():
        elements = list(ring.elements())
        detail = "exhaustive"
    else:
        rng = random.Random(seed)
        elements = [ring.from_int(rng.randint(-50, 50)) for _ in range(32)]
        detail = "sampled"
    split_ok = all(evaluate_at_unit(multiplier_endo(ring, r)) == r for r in elements)
    report.add(
        "endo.sigma_lambda",
        "evaluation at the unit splits the multiplier homomorphism",
        split_ok,
        detail,
    )

    gens = (unit_complex(ring), koszul_cone(ring, ring.from_int(2)))
    kernel_ok = True
    witness_count = 0
    for r in elements[:32]:
        idx = nilpotence_index(ring, r)
        result = is_pointwise_nilpotent(multiplier_endo(ring, r), gens, limits=limits)
        if (idx is not None) != result.is_nilpotent:
            kernel_ok = False
        witness_count += len(result.witnesses)
    report.add(
        "endo.pnil_kernel",
        "a multiplier is pointwise nilpotent exactly when its element is nilpotent",
        kernel_ok,
        f"{witness_count} homotopy witnesses found",
    )

    descend_ok = True
    if not isinstance(ring, (ProductRing, ZeroRing)):
        for x in canonical_ring_elements(ring):
            if ring.is_zero(x) or ring.is_unit(x):
                continue
            local = localize_ring(ring, x, limits)
            if is_zero_ring_like(local):
                continue
            rho = localization_inclusion(ring, x, limits)
            for r in elements[:8]:
                alpha = multiplier_endo(ring, r)
                beta = restrict_endo(alpha, rho)
                if beta.multiplier != eval_element(rho, r):
                    descend_ok = False
                if nilpotence_index(ring, r) is not None and nilpotence_index(local, beta.multiplier) is None:
                    descend_ok = False
            break
    report.add(
        "endo.descends",
        "multipliers restrict along opens and stay pointwise nilpotent",
        descend_ok,
    )

    surj_ok = True
    reduced, project = nilradical_quotient(ring, limits)
    if ring.is_finite():
        images = {project(x) for x in ring.elements()}
        surj_ok = images == set(reduced.elements())
    report.add(
        "endo.reduction_surjective",
        "the reduced presheaf map is onto on every section ring",
        surj_ok,
        "exhaustive on finite rings",
    )
    return report


# ---------------------------------------------------------------------------
# suite: reconstruct
# ---------------------------------------------------------------------------


def suite_reconstruct(
    ring: Ring, bound: int, budget: int = 16, seed: int = 0, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    _, report = reconstruct_ringed_space(ring, bound, limits)
    reduced, _ = nilradical_quotient(ring, limits)
    if reduced != ring:
        _, fixed_report = reconstruct_ringed_space(reduced, bound, limits)
        report.add(
            "reconstruct.reduced_fixed_point",
            "the reduced ring reconstructs its own spectrum data",
            fixed_report.ok,
        )
    return report


def run_suite(
    name: str,
    ring: Ring,
    bound: int,
    budget: int = 16,
    seed: int = 0,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> CheckReport:
    if name == "all":
        combined = CheckReport(f"all suites over {ring.label()} (bound {bound})")
        for suite in SUITES:
            combined.extend(run_suite(suite, ring, bound, budget, seed, limits))
        return combined
    table = {
        "thomason": suite_thomason,
        "topology": suite_topology,
        "geometric": suite_geometric,
        "presheaf": suite_presheaf,
        "endo": suite_endo,
        "reconstruct": suite_reconstruct,
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return table[name](ring, bound, budget=budget, seed=seed, limits=limits)
