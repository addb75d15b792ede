"""Endomorphisms of the identity functor and the ringed-space reconstruction.

An endomorphism of the identity is represented by a central multiplier: a
section-ring element acting by multiplication on every object.  Evaluation
on the unit complex splits this representation (the multiplier is read back
exactly), and the kernel of that evaluation meets the multipliers in the
nilpotents, which are pointwise nilpotent with explicit homotopy witnesses.

Dividing the section presheaf by its pointwise nilpotents and sheafifying
over the enumerated basis of principal opens rebuilds the reduced affine
data: the same points, the reduced section ring on every basic open, and
the reduced stalks.  The model deliberately represents sections by the
multiplier image only; the split surjection onto it is what the reduced
reconstruction needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complexes import Complex, scalar_map, is_null_homotopic, unit_complex
from .errors import TTGError, UnsupportedRing
from .linalg import Matrix
from .morphisms import RingMap, eval_element
from .presheaf import BasicOpen, open_from_complement, principal_open, section_ring, whole_open
from .reports import CheckReport
from .rings import (
    DEFAULT_LIMITS,
    Element,
    FactorLimits,
    IntegerRing,
    LocalizedRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    Ring,
    SpcPoint,
    ZeroRing,
    component_base,
    enumerate_points,
    factor_element,
    format_point,
    is_zero_ring_like,
    localize_ring,
    nilradical_quotient,
    point_sort_key,
)
from .spectrum import SpectrumModel, build_spectrum
from .supports import Support, generators_support, supph

DEFAULT_NILPOTENCE_BOUND = 16


@dataclass(frozen=True)
class IdentityEndo:
    """A multiplier endomorphism of the identity functor on sections."""

    ring: Ring
    multiplier: Element

    def __post_init__(self):
        if not self.ring.is_element(self.multiplier):
            raise ValueError("multiplier is not an element of the section ring")


def multiplier_endo(ring: Ring, r: Element) -> IdentityEndo:
    """The homomorphism from sections into identity endomorphisms."""
    return IdentityEndo(ring, r)


def endo_action(alpha: IdentityEndo, p: Complex):
    """The component of the endomorphism on one object."""
    assert p.ring == alpha.ring
    return scalar_map(p, alpha.multiplier)


def evaluate_at_unit(alpha: IdentityEndo) -> Element:
    """Evaluation on the unit object; splits the multiplier representation."""
    action = endo_action(alpha, unit_complex(alpha.ring))
    m = action.component(0)
    return m.entries[0][0]


def restrict_endo(alpha: IdentityEndo, rho: RingMap) -> IdentityEndo:
    """Descend along a restriction of opens: map the multiplier through."""
    assert rho.source == alpha.ring
    return IdentityEndo(rho.target, eval_element(rho, alpha.multiplier))


def nilpotence_index(ring: Ring, r: Element, bound: int = DEFAULT_NILPOTENCE_BOUND) -> int | None:
    """Least e with r**e = 0, or None if r is not nilpotent.

    Decided in closed form through the nilradical projection, then the index
    is found by explicit powering (bounded; the bound is never the decision).
    """
    _, project = nilradical_quotient(ring)
    if not ring.is_zero(project(r)):
        return None
    power = ring.one()
    for e in range(1, bound + 1):
        power = ring.mul(power, r)
        if ring.is_zero(power):
            return e
    raise TTGError(f"nilpotence index exceeded the powering bound {bound}")


@dataclass(frozen=True)
class NilpotenceWitness:
    generator_index: int
    power: int
    homotopy: dict


@dataclass(frozen=True)
class PointwiseNilpotence:
    status: str  # "nilpotent" | "not_nilpotent" | "indeterminate"
    witnesses: tuple[NilpotenceWitness, ...]

    @property
    def is_nilpotent(self) -> bool:
        return self.status == "nilpotent"


def is_pointwise_nilpotent(
    alpha: IdentityEndo,
    generators: tuple[Complex, ...],
    power_bound: int | None = None,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> PointwiseNilpotence:
    """Decide pointwise nilpotence on a generating family, with witnesses.

    The generators must have full support (so they generate everything and
    nilpotence on them propagates to all objects).  For each generator the
    least power whose action is null-homotopic is found and its homotopy is
    returned; if the ring-level index is finite but a witness search exceeds
    the bound, the result is flagged indeterminate rather than guessed.
    """
    ring = alpha.ring
    full = Support.everything(ring, limits)
    if generators_support(generators, ring, limits) != full:
        raise ValueError("the generating family must have full support")
    index = nilpotence_index(ring, alpha.multiplier)
    if index is None:
        return PointwiseNilpotence("not_nilpotent", ())
    bound = power_bound if power_bound is not None else max(index, DEFAULT_NILPOTENCE_BOUND)
    witnesses = []
    for gidx, g in enumerate(generators):
        found = None
        power = ring.one()
        for e in range(1, bound + 1):
            power = ring.mul(power, alpha.multiplier)
            ok, h = is_null_homotopic(scalar_map(g, power))
            if ok:
                found = NilpotenceWitness(gidx, e, h)
                break
        if found is None:
            return PointwiseNilpotence("indeterminate", tuple(witnesses))
        witnesses.append(found)
    return PointwiseNilpotence("nilpotent", tuple(witnesses))


# ---------------------------------------------------------------------------
# ringed-space reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OpenSections:
    open: BasicOpen
    sections: Ring  # multiplier model of the identity endomorphisms
    reduced: Ring   # sections modulo pointwise nilpotents


@dataclass(frozen=True)
class Stalk:
    point: SpcPoint
    description: str
    local_ring: Ring | None
    reduced_description: str
    reduced_local_ring: Ring | None


@dataclass(frozen=True)
class RingedSpaceModel:
    ring: Ring
    spectrum: SpectrumModel
    opens: tuple[OpenSections, ...]
    stalks: tuple[Stalk, ...]
    global_sections: Ring
    reduced_global_sections: Ring

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "points": [
                format_point(self.ring, p.descriptor) for p in self.spectrum.points
            ],
            "complete": self.spectrum.complete,
            "opens": [
                {
                    "open": o.open.label(),
                    "sections": o.sections.label(),
                    "reduced": o.reduced.label(),
                }
                for o in self.opens
            ],
            "stalks": [
                {
                    "point": format_point(self.ring, s.point),
                    "local": s.description,
                    "reduced": s.reduced_description,
                }
                for s in self.stalks
            ],
            "global_sections": self.global_sections.label(),
            "reduced_global_sections": self.reduced_global_sections.label(),
        }


def stalk_description(ring: Ring, pt: SpcPoint, limits: FactorLimits = DEFAULT_LIMITS) -> tuple[str, Ring | None]:
    """Closed form for the local ring at a point, where the class allows it.

    Quotient components localize to finite local rings; for integral
    components the stalk is named formally (the colimit over the enumerated
    basic opens does not stabilize at a finite stage).
    """
    comp = ring.components()[pt.component]
    base = component_base(comp)
    if pt.is_generic:
        return f"Frac({comp.label()})", None
    prime_label = base.format_element(pt.prime)
    if isinstance(comp, QuotientRing):
        _, factors = factor_element(base, comp.modulus, limits)
        mult = dict(factors).get(pt.prime)
        assert mult is not None, "point does not lie on the component"
        local = QuotientRing(base, _power(base, pt.prime, mult))
        return local.label(), local
    return f"{comp.label()} at ({prime_label})", None


def _power(ring: Ring, x: Element, e: int) -> Element:
    out = ring.one()
    for _ in range(e):
        out = ring.mul(out, x)
    return out


def canonical_basic_opens(
    ring: Ring, bound: int, max_products: int = 10, limits: FactorLimits = DEFAULT_LIMITS
) -> list[BasicOpen]:
    """The whole space, one principal open per enumerated closed point
    (complement of its closure), and a capped family of pairwise meets."""
    opens = [whole_open(ring)]
    enum = enumerate_points(ring, bound, limits)
    closed = [pt for pt in enum.points if not pt.is_generic]
    singles = []
    for pt in closed:
        v = open_from_complement(ring, Support.closure_of(ring, pt), limits)
        singles.append(v)
        opens.append(v)
    for a, b in list(combinations(singles, 2))[:max_products]:
        y = a.complement.union(b.complement)
        opens.append(open_from_complement(ring, y, limits))
    return opens


def reconstruct_ringed_space(
    ring: Ring, bound: int, limits: FactorLimits = DEFAULT_LIMITS
) -> tuple[RingedSpaceModel, CheckReport]:
    """Rebuild the reduced affine data from the category-side constructions.

    Builds the spectrum, assigns multiplier sections to the canonical basic
    opens, divides by pointwise nilpotents, and compares point-by-point,
    open-by-open, and stalk-by-stalk against the spectrum of the reduced
    ring.  The comparison report also exercises the sheaf gluing condition
    on finite rings and the fixed-point property for reduced inputs.
    """
    spectrum = build_spectrum(ring, bound, limits=limits)
    reduced_ring, project = nilradical_quotient(ring, limits)

    opens = []
    for v in canonical_basic_opens(ring, bound, limits=limits):
        sections = section_ring(v, limits)
        red, _ = nilradical_quotient(sections, limits)
        opens.append(OpenSections(v, sections, red))

    stalks = []
    for p in spectrum.points:
        desc, local = stalk_description(ring, p.descriptor, limits)
        if local is not None:
            red_local, _ = nilradical_quotient(local, limits)
            red_desc = red_local.label()
        else:
            red_local = None
            reduced_comp = reduced_ring.components()[p.descriptor.component]
            if p.descriptor.is_generic:
                red_desc = f"Frac({reduced_comp.label()})"
            else:
                base = component_base(reduced_comp)
                red_desc = f"{reduced_comp.label()} at ({base.format_element(p.descriptor.prime)})"
        stalks.append(Stalk(p.descriptor, desc, local, red_desc, red_local))

    model = RingedSpaceModel(
        ring,
        spectrum,
        tuple(opens),
        tuple(stalks),
        ring,
        reduced_ring,
    )

    report = CheckReport(f"reconstruction of Spec({reduced_ring.label()}) from {ring.label()}")
    scope = "complete" if spectrum.complete else f"enumerated fragment (bound {bound})"

    target_points = enumerate_points(reduced_ring, bound, limits)
    report.add(
        "reconstruct.points",
        f"spectrum points match the points of the reduced ring ({scope})",
        [p.descriptor for p in spectrum.points] == list(target_points.points),
    )

    bad_opens = []
    for o in opens:
        witness_red = project(o.open.witness)
        if reduced_ring.is_zero(witness_red):
            expected: Ring = ZeroRing()
        elif reduced_ring.is_unit(witness_red):
            expected = reduced_ring
        else:
            expected = localize_ring(reduced_ring, witness_red, limits)
        same = o.reduced == expected or (
            is_zero_ring_like(o.reduced) and is_zero_ring_like(expected)
        )
        if not same:
            bad_opens.append((o.open.label(), o.reduced.label(), expected.label()))
    report.add(
        "reconstruct.sections",
        "reduced sections on every basic open equal the reduced ring localized there",
        not bad_opens,
        f"{len(opens)} opens" + (f"; failures {bad_opens}" if bad_opens else ""),
    )

    report.add(
        "reconstruct.global",
        "reduced global sections equal the reduced ring",
        model.reduced_global_sections == reduced_ring,
    )

    bad_stalks = []
    for s in stalks:
        expected_desc, expected_local = stalk_description(reduced_ring, s.point, limits)
        if s.reduced_description != expected_desc or s.reduced_local_ring != expected_local:
            bad_stalks.append((format_point(ring, s.point), s.reduced_description, expected_desc))
    report.add(
        "reconstruct.stalks",
        "reduced stalks match the stalks of the reduced ring, point by point",
        not bad_stalks,
        f"{len(stalks)} stalks" + (f"; failures {bad_stalks}" if bad_stalks else ""),
    )

    if ring.is_finite():
        report.extend(sheaf_glue_check(ring, bound, limits))

    if ring == reduced_ring:
        fixed = (
            [p.descriptor for p in spectrum.points] == list(target_points.points)
            and not bad_opens
            and not bad_stalks
        )
        report.add(
            "reconstruct.fixed_point",
            "a reduced ring reconstructs its own spectrum data",
            fixed,
        )
    return model, report


def sheaf_glue_check(ring: Ring, bound: int, limits: FactorLimits = DEFAULT_LIMITS) -> CheckReport:
    """Exact sheaf condition on a finite ring for the point-complement cover.

    The cover is by the opens D(f_p) complementary to the closed points; a
    compatible family of sections gluing uniquely is checked elementwise.
    """
    assert ring.is_finite()
    report = CheckReport(f"sheaf gluing over {ring.label()}")
    enum = enumerate_points(ring, bound, limits)
    closed = [pt for pt in enum.points if not pt.is_generic]
    cover = [open_from_complement(ring, Support.closure_of(ring, pt), limits) for pt in closed]
    covers_all = all(
        any(not v.complement.contains_point(pt) for v in cover) for pt in closed
    )
    if not covers_all or not cover:
        # removing single points cannot cover a local spectrum; keep an honest cover
        cover.append(whole_open(ring))
    from .presheaf import restriction_map, section_map

    maps = [section_map(v, limits) for v in cover]
    rings_v = [m.target for m in maps]
    overlap_maps = {}
    for i, j in combinations(range(len(cover)), 2):
        meet = open_from_complement(ring, cover[i].complement.union(cover[j].complement), limits)
        if is_zero_ring_like(section_ring(meet, limits)):
            overlap_maps[(i, j)] = None
            continue
        overlap_maps[(i, j)] = (
            restriction_map(cover[i], meet, limits),
            restriction_map(cover[j], meet, limits),
        )

    def compatible(family):
        for (i, j), pair in overlap_maps.items():
            if pair is None:
                continue
            ri, rj = pair
            if eval_element(ri, family[i]) != eval_element(rj, family[j]):
                return False
        return True

    global_images = set()
    injective = True
    for x in ring.elements():
        image = tuple(eval_element(m, x) for m in maps)
        if image in global_images:
            injective = False
        global_images.add(image)
    report.add(
        "reconstruct.glue_separated",
        "a section is determined by its restrictions to the cover",
        injective,
        f"cover by {len(cover)} principal opens",
    )

    compatible_count = 0
    glued = 0
    def iterate(fams, idx):
        if idx == len(rings_v):
            yield tuple(fams)
            return
        for x in rings_v[idx].elements():
            fams.append(x)
            yield from iterate(fams, idx + 1)
            fams.pop()

    for family in iterate([], 0):
        if compatible(family):
            compatible_count += 1
            if family in global_images:
                glued += 1
    report.add(
        "reconstruct.glue_surjective",
        "every compatible family of sections glues to a global section",
        compatible_count == glued == len(global_images),
        f"{compatible_count} compatible families",
    )
    return report


def endomorphism_ring_checks(
    ring: Ring, samples: tuple[Element, ...] = (), limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    """The split identity, naturality, and commutativity of unit endomorphisms."""
    from .complexes import add_maps, compose, hom_up_to_homotopy, identity_map, neg_map
    from .linalg import ModuleClass
    from .rings import canonical_ring_elements

    report = CheckReport(f"identity-endomorphism checks over {ring.label()}")
    if not samples:
        samples = tuple(canonical_ring_elements(ring))

    bad = [r for r in samples if evaluate_at_unit(multiplier_endo(ring, r)) != r]
    report.add(
        "endo.split",
        "evaluating a multiplier on the unit returns the multiplier",
        not bad,
        f"{len(samples)} elements",
    )

    hom_unit = hom_up_to_homotopy(unit_complex(ring), unit_complex(ring))
    report.add(
        "endo.unit_hom",
        "endomorphisms of the unit form a free rank-one module",
        hom_unit == ModuleClass.free(ring, 1),
    )

    comm_bad = [
        (r, s)
        for r in samples
        for s in samples
        if ring.mul(r, s) != ring.mul(s, r)
    ]
    report.add(
        "endo.commutative",
        "unit endomorphisms commute",
        not comm_bad,
    )

    add_bad = []
    mul_bad = []
    probe = koszul_probe(ring)
    for r in samples[:4]:
        for s in samples[:4]:
            lhs = endo_action(multiplier_endo(ring, ring.add(r, s)), probe)
            rhs = add_maps(endo_action(multiplier_endo(ring, r), probe), endo_action(multiplier_endo(ring, s), probe))
            if add_maps(lhs, neg_map(rhs)).components != tuple(
                Matrix.zeros(ring, m.rows, m.cols) for m in lhs.components
            ):
                add_bad.append((r, s))
            lhs2 = endo_action(multiplier_endo(ring, ring.mul(r, s)), probe)
            rhs2 = compose(endo_action(multiplier_endo(ring, r), probe), endo_action(multiplier_endo(ring, s), probe))
            if add_maps(lhs2, neg_map(rhs2)).components != tuple(
                Matrix.zeros(ring, m.rows, m.cols) for m in lhs2.components
            ):
                mul_bad.append((r, s))
    report.add("endo.additive", "multipliers add like their ring elements", not add_bad)
    report.add("endo.multiplicative", "multipliers compose like their ring elements", not mul_bad)
    return report


def koszul_probe(ring: Ring) -> Complex:
    from .complexes import koszul_cone

    return koszul_cone(ring, ring.from_int(2))
