"""Finitary specialization-closed supports and the thick-subcategory dictionary.

A support is, per ring component, a finite set of closed points plus an
optional whole-component flag (the closure of the generic point of an
integral component).  These are exactly the homological supports of the
complexes in this model, and they proxy tensor-thick subcategories: the
support of a subcategory is the union of the supports of its generators,
and membership of a complex is containment of its support.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .complexes import (
    ChainMap,
    Complex,
    chain_map_basis,
    cone,
    direct_sum,
    homology_all,
    koszul_cone,
    shift,
    tensor,
    unit_complex,
    zero_complex,
)
from .errors import MalformedInput, SizeLimitExceeded, UnsupportedRing
from .linalg import ModuleClass
from .rings import (
    DEFAULT_LIMITS,
    Element,
    FactorLimits,
    Frac,
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
    point_sort_key,
)


@dataclass(frozen=True)
class SupportComponent:
    whole: bool
    points: frozenset

    def is_empty(self) -> bool:
        return not self.whole and not self.points


@dataclass(frozen=True)
class Support:
    """A finite union of point closures inside Spec of the ring."""

    ring: Ring
    components: tuple[SupportComponent, ...]

    def __post_init__(self):
        comps = self.ring.components()
        if len(self.components) != len(comps):
            raise ValueError("one support component per ring component required")
        for comp_ring, sc in zip(comps, self.components):
            if sc.whole:
                if not comp_ring.has_generic_point():
                    raise ValueError(
                        "whole-component flags are reserved for integral components"
                    )
                if sc.points:
                    raise ValueError("a whole component lists no extra points")
            for prime in sc.points:
                _validate_point_prime(comp_ring, prime)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def empty(ring: Ring) -> "Support":
        return Support(ring, tuple(SupportComponent(False, frozenset()) for _ in ring.components()))

    @staticmethod
    def everything(ring: Ring, limits: FactorLimits = DEFAULT_LIMITS) -> "Support":
        comps = []
        for comp in ring.components():
            if comp.has_generic_point():
                comps.append(SupportComponent(True, frozenset()))
            elif isinstance(comp, ZeroRing):
                comps.append(SupportComponent(False, frozenset()))
            elif isinstance(comp, QuotientRing):
                _, factors = factor_element(comp.base, comp.modulus, limits)
                comps.append(SupportComponent(False, frozenset(p for p, _ in factors)))
            else:
                raise UnsupportedRing(f"no Spec for {comp.label()}")
        return Support(ring, tuple(comps))

    @staticmethod
    def of_points(ring: Ring, points: Iterable[SpcPoint]) -> "Support":
        n = len(ring.components())
        whole = [False] * n
        pts: list[set] = [set() for _ in range(n)]
        for pt in points:
            if pt.is_generic:
                whole[pt.component] = True
            else:
                pts[pt.component].add(pt.prime)
        return Support(
            ring,
            tuple(
                SupportComponent(w, frozenset() if w else frozenset(ps))
                for w, ps in zip(whole, pts)
            ),
        )

    @staticmethod
    def closure_of(ring: Ring, pt: SpcPoint) -> "Support":
        return Support.of_points(ring, [pt])

    # -- queries ----------------------------------------------------------

    def is_empty(self) -> bool:
        return all(c.is_empty() for c in self.components)

    def contains_point(self, pt: SpcPoint) -> bool:
        sc = self.components[pt.component]
        if pt.is_generic:
            return sc.whole
        return sc.whole or pt.prime in sc.points

    def closed_points(self) -> list[SpcPoint]:
        out = []
        for idx, sc in enumerate(self.components):
            out.extend(SpcPoint(idx, p) for p in sc.points)
        out.sort(key=point_sort_key)
        return out

    def whole_components(self) -> list[int]:
        return [i for i, sc in enumerate(self.components) if sc.whole]

    # -- lattice operations -----------------------------------------------

    def union(self, other: "Support") -> "Support":
        assert self.ring == other.ring
        comps = []
        for a, b in zip(self.components, other.components):
            whole = a.whole or b.whole
            comps.append(
                SupportComponent(whole, frozenset() if whole else a.points | b.points)
            )
        return Support(self.ring, tuple(comps))

    def intersect(self, other: "Support") -> "Support":
        assert self.ring == other.ring
        comps = []
        for a, b in zip(self.components, other.components):
            if a.whole and b.whole:
                comps.append(SupportComponent(True, frozenset()))
            elif a.whole:
                comps.append(SupportComponent(False, b.points))
            elif b.whole:
                comps.append(SupportComponent(False, a.points))
            else:
                comps.append(SupportComponent(False, a.points & b.points))
        return Support(self.ring, tuple(comps))

    def subset_of(self, other: "Support") -> bool:
        assert self.ring == other.ring
        for a, b in zip(self.components, other.components):
            if a.whole and not b.whole:
                return False
            if not a.whole and not b.whole and not a.points <= b.points:
                return False
            # a not whole, b whole: always contained
        return True

    def format(self) -> str:
        parts = []
        for comp_ring, sc in zip(self.ring.components(), self.components):
            if sc.whole:
                parts.append("Spec " + comp_ring.label())
            elif not sc.points:
                parts.append("{}")
            else:
                base = component_base(comp_ring)
                labels = sorted(
                    f"({base.format_element(p)})" for p in sc.points
                )
                parts.append("{" + ",".join(labels) + "}")
        return " | ".join(parts)

    def to_json(self) -> dict:
        comps = []
        for comp_ring, sc in zip(self.ring.components(), self.components):
            base = component_base(comp_ring) if not isinstance(comp_ring, ZeroRing) else None
            pts = sorted(sc.points, key=lambda p: (p, ()) if isinstance(p, int) else (len(p), p))
            comps.append(
                {
                    "whole": sc.whole,
                    "points": [base.element_to_json(p) for p in pts] if base else [],
                }
            )
        return {"components": comps}


def support_from_json(ring: Ring, data: dict) -> Support:
    if not isinstance(data, dict) or "components" not in data:
        raise MalformedInput(f"bad support encoding: {data!r}")
    comps_json = data["components"]
    ring_comps = ring.components()
    if len(comps_json) != len(ring_comps):
        raise MalformedInput("support has the wrong number of components")
    comps = []
    for comp_ring, cj in zip(ring_comps, comps_json):
        pts = frozenset(
            component_base(comp_ring).element_from_json(p) for p in cj.get("points", [])
        )
        comps.append(SupportComponent(bool(cj.get("whole", False)), pts))
    try:
        return Support(ring, tuple(comps))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def _validate_point_prime(comp_ring: Ring, prime: Element):
    base = component_base(comp_ring)
    if base.is_zero(prime) or base.is_unit(prime):
        raise ValueError("a closed point must be named by a prime element")
    if prime != base.canonical_associate(prime):
        raise ValueError("point primes must be canonical (positive/monic)")
    if isinstance(comp_ring, QuotientRing) and not base.divides(prime, comp_ring.modulus):
        raise ValueError("quotient-component points must divide the modulus")
    if isinstance(comp_ring, LocalizedRing) and base.divides(prime, comp_ring.inverted):
        raise ValueError("localized-component points must avoid the inverted element")


# ---------------------------------------------------------------------------
# homological support
# ---------------------------------------------------------------------------


def _divisor_primes(comp_ring: Ring, divisor: Element, limits: FactorLimits) -> set:
    base = component_base(comp_ring)
    if isinstance(comp_ring, LocalizedRing):
        divisor = comp_ring.core(divisor)
    _, factors = factor_element(base, divisor, limits)
    return {p for p, _ in factors}


def _component_everything_points(comp_ring: Ring, limits: FactorLimits) -> set:
    assert isinstance(comp_ring, QuotientRing)
    _, factors = factor_element(comp_ring.base, comp_ring.modulus, limits)
    return {p for p, _ in factors}


def vanishing_support(ring: Ring, x: Element, limits: FactorLimits = DEFAULT_LIMITS) -> Support:
    """V(x): the points whose prime contains x, as a finitary support."""
    comps = []
    for idx, comp_ring in enumerate(ring.components()):
        xc = x[idx] if isinstance(ring, ProductRing) else x
        if isinstance(comp_ring, ZeroRing):
            comps.append(SupportComponent(False, frozenset()))
        elif comp_ring.is_zero(xc):
            if comp_ring.has_generic_point():
                comps.append(SupportComponent(True, frozenset()))
            else:
                comps.append(
                    SupportComponent(False, frozenset(_component_everything_points(comp_ring, limits)))
                )
        elif comp_ring.is_unit(xc):
            comps.append(SupportComponent(False, frozenset()))
        elif isinstance(comp_ring, QuotientRing):
            g = comp_ring.canonical_divisor(xc)
            comps.append(SupportComponent(False, frozenset(_divisor_primes(comp_ring, g, limits))))
        else:
            comps.append(SupportComponent(False, frozenset(_divisor_primes(comp_ring, xc, limits))))
    return Support(ring, tuple(comps))


def module_support(mc: ModuleClass, limits: FactorLimits = DEFAULT_LIMITS) -> Support:
    """The support of a finitely generated module, from its class."""
    comps = []
    for comp_ring, comp in zip(mc.ring.components(), mc.components):
        whole = False
        pts: set = set()
        if comp.rank > 0:
            if comp_ring.has_generic_point():
                whole = True
            elif isinstance(comp_ring, QuotientRing):
                pts |= _component_everything_points(comp_ring, limits)
        if not whole:
            for d in comp.divisors:
                pts |= _divisor_primes(comp_ring, d, limits)
        comps.append(SupportComponent(whole, frozenset() if whole else frozenset(pts)))
    return Support(mc.ring, tuple(comps))


def supph(p: Complex, limits: FactorLimits = DEFAULT_LIMITS) -> Support:
    """The support of the total homology of a complex."""
    out = Support.empty(p.ring)
    for mc in homology_all(p).values():
        out = out.union(module_support(mc, limits))
    return out


def membership(p: Complex, y: Support, limits: FactorLimits = DEFAULT_LIMITS) -> bool:
    """Whether p lies in the subcategory of complexes supported inside y."""
    assert p.ring == y.ring
    return supph(p, limits).subset_of(y)


# ---------------------------------------------------------------------------
# the support <-> subcategory dictionary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubcategoryHandle:
    """A tensor-thick subcategory, named by its support with optional generators."""

    support: Support
    generators: tuple[Complex, ...] | None = None


def generators_support(
    gens: Sequence[Complex], ring: Ring | None = None, limits: FactorLimits = DEFAULT_LIMITS
) -> Support:
    """Union of the generator supports: the support of the generated subcategory."""
    if not gens:
        assert ring is not None, "an empty generator list needs an explicit ring"
        return Support.empty(ring)
    out = Support.empty(gens[0].ring)
    for g in gens:
        out = out.union(supph(g, limits))
    return out


def subcategory_from_generators(
    gens: Sequence[Complex], ring: Ring | None = None, limits: FactorLimits = DEFAULT_LIMITS
) -> SubcategoryHandle:
    return SubcategoryHandle(generators_support(gens, ring, limits), tuple(gens))


def embed_component_element(ring: Ring, component: int, value: Element) -> Element:
    """The ring element with the given value in one component and 1 elsewhere."""
    if not isinstance(ring, ProductRing):
        assert component == 0
        return value
    out = list(ring.one())
    out[component] = value
    return tuple(out)


def point_cone(ring: Ring, pt: SpcPoint) -> Complex:
    """A complex whose support is exactly the closure of the given point."""
    comp_ring = ring.components()[pt.component]
    if pt.is_generic:
        value = comp_ring.zero()
    elif isinstance(comp_ring, QuotientRing):
        value = comp_ring.reduce(pt.prime)
    elif isinstance(comp_ring, LocalizedRing):
        value = comp_ring.from_base(pt.prime)
    else:
        value = pt.prime
    return koszul_cone(ring, embed_component_element(ring, pt.component, value))


def realize_support(y: Support) -> Complex:
    """A complex with support exactly y: a sum of one cone per point closure."""
    out = zero_complex(y.ring)
    for idx in y.whole_components():
        out = direct_sum(out, point_cone(y.ring, SpcPoint(idx, None)))
    for pt in y.closed_points():
        out = direct_sum(out, point_cone(y.ring, pt))
    return out


def subcategory_from_support(y: Support) -> SubcategoryHandle:
    gen = realize_support(y)
    gens = () if gen.is_zero_object() else (gen,)
    return SubcategoryHandle(y, gens)


# ---------------------------------------------------------------------------
# one closure step of the generated subcategory
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaSample:
    """A finite sample of one triangle/summand/tensor closure step."""

    objects: tuple[Complex, ...]
    truncated: bool


def canonical_probes(ring: Ring, limits: FactorLimits = DEFAULT_LIMITS) -> list[Complex]:
    """Small deterministic tensor probes: the unit, a shift, and point cones."""
    probes = [unit_complex(ring), shift(unit_complex(ring))]
    pts = [pt for pt in enumerate_points(ring, 3, limits).points if not pt.is_generic]
    for pt in pts[:2]:
        probes.append(point_cone(ring, pt))
    return probes


def theta_step(
    gens: Sequence[Complex],
    budget: int = 24,
    ring: Ring | None = None,
    probes: Sequence[Complex] | None = None,
    maps_per_pair: int = 2,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> ThetaSample:
    """Sample objects reachable in one closure step from the generators.

    Produces the zero object, shifts, cones of maps drawn from a bounded
    hom basis, sums with their evident summands, and tensors against a
    bounded probe family.  This is a witness generator, not a decision
    procedure: membership questions go through supports.
    """
    if not gens:
        assert ring is not None, "an empty generator list needs an explicit ring"
        return ThetaSample((zero_complex(ring),), False)
    ring = gens[0].ring
    if probes is None:
        probes = canonical_probes(ring, limits)
    bound = generators_support(gens, ring, limits)

    outputs: list[Complex] = []
    seen: set = set()
    truncated = False

    def push(candidate: Complex) -> bool:
        nonlocal truncated
        if len(outputs) >= budget:
            truncated = True
            return False
        if candidate in seen:
            return True
        checked = supph(candidate, limits)
        assert checked.subset_of(bound), "closure step escaped the generator support"
        seen.add(candidate)
        outputs.append(candidate)
        return True

    push(zero_complex(ring))
    for g in gens:
        if not push(g) or not push(shift(g)):
            return ThetaSample(tuple(outputs), truncated)
    for b in gens:
        for c in gens:
            summed = direct_sum(c, shift(b))
            if not push(summed):
                return ThetaSample(tuple(outputs), truncated)
            try:
                basis = chain_map_basis(b, c)
            except SizeLimitExceeded:
                truncated = True
                continue
            for f in basis[:maps_per_pair]:
                if not push(cone(f).cone):
                    return ThetaSample(tuple(outputs), truncated)
    for g in gens:
        for probe in probes:
            try:
                if not push(tensor(g, probe)) or not push(tensor(probe, g)):
                    return ThetaSample(tuple(outputs), truncated)
            except SizeLimitExceeded:
                truncated = True
                continue
    return ThetaSample(tuple(outputs), truncated)
