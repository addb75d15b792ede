"""Ring maps, derived pullback, and the induced map on spectra.

A ring map is stored by its generator images (the image of 1 is forced; a
polynomial source also names the image of t) together with the checks that
make it well defined: the characteristic relation and the source modulus
must die, and an inverted element must land on a unit.  Pullback of a
complex applies the map entrywise; since all modules are free this computes
the derived pullback, and supports transform by taking preimages.

The induced map on spectrum points is prime contraction, computed in closed
form from the residue characteristic (integer-based sources) or a minimal
polynomial search (polynomial-based sources); it is cross-checked in the
test suite against the defining intersection over all enumerated supports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import ChainMap, Complex, unit_complex
from .errors import MalformedInput, TTGError, UnsupportedRing
from .linalg import Matrix
from .reports import CheckReport
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
    canonical_ring_elements,
    component_base,
    ring_from_json,
)
from .supports import Support, supph, vanishing_support


def _poly_source_base(ring: Ring) -> PolynomialRing | None:
    if isinstance(ring, PolynomialRing):
        return ring
    if isinstance(ring, (QuotientRing, LocalizedRing)) and isinstance(
        ring.base, PolynomialRing
    ):
        return ring.base
    return None


@dataclass(frozen=True)
class RingMap:
    """A unital ring homomorphism inside the supported class.

    Maps out of a product ring are componentwise (one factor map per
    component, same shape on both sides); everything else is recorded by
    generator images.  The zero ring maps only to itself.
    """

    source: Ring
    target: Ring
    images: Mapping[str, Element] = field(default_factory=dict)
    factor_maps: tuple["RingMap", ...] | None = None

    def __post_init__(self):
        if isinstance(self.source, ProductRing):
            if not isinstance(self.target, ProductRing) or len(self.source.factors) != len(
                self.target.factors
            ):
                raise UnsupportedRing(
                    "maps out of a product ring must be componentwise onto a same-shape product"
                )
            if self.images or self.factor_maps is None:
                raise ValueError("a product source takes factor maps, not generator images")
            if len(self.factor_maps) != len(self.source.factors):
                raise ValueError("one factor map per component required")
            for fm, s, t in zip(self.factor_maps, self.source.factors, self.target.factors):
                if fm.source != s or fm.target != t:
                    raise ValueError("factor maps do not match the product components")
            object.__setattr__(self, "images", ())
            return
        if isinstance(self.source, ZeroRing):
            if not isinstance(self.target, ZeroRing):
                raise UnsupportedRing("the zero ring maps only to the zero ring")
            object.__setattr__(self, "images", ())
            object.__setattr__(self, "factor_maps", None)
            return
        if self.factor_maps is not None:
            raise ValueError("factor maps are only for product sources")
        images = dict(self.images)
        object.__setattr__(self, "images", tuple(sorted(images.items())))
        poly = _poly_source_base(self.source)
        if poly is not None:
            if set(images) != {"t"}:
                raise ValueError("a polynomial-based source needs exactly the image of t")
            if not self.target.is_element(images["t"]):
                raise ValueError("image of t is not an element of the target")
        elif images:
            raise ValueError("an integer-based source takes no generator images")
        self._check_well_defined()

    def image_of_variable(self) -> Element:
        return dict(self.images)["t"]

    def _check_well_defined(self):
        src, tgt = self.source, self.target
        char = src.char()
        if char and not tgt.is_zero(tgt.from_int(char)):
            raise ValueError(
                f"characteristic {char} of {src.label()} does not vanish in {tgt.label()}"
            )
        if isinstance(src, QuotientRing):
            lifted = _lift_source_map(self)
            if not tgt.is_zero(lifted(src.modulus)):
                raise ValueError("the source modulus does not map to zero")
        if isinstance(src, LocalizedRing):
            lifted = _lift_source_map(self)
            if not tgt.is_unit(lifted(src.inverted)):
                raise ValueError("the inverted element does not map to a unit")


def _lift_source_map(f: RingMap):
    """Evaluation on the source's Euclidean base (Z or GF(p)[t])."""
    tgt = f.target
    base = component_base(f.source) if not isinstance(f.source, (IntegerRing, PolynomialRing)) else f.source
    if isinstance(base, IntegerRing):
        return tgt.from_int
    tau = f.image_of_variable()

    def eval_poly(coeffs):
        acc = tgt.zero()
        for c in reversed(coeffs):
            acc = tgt.add(tgt.mul(acc, tau), tgt.from_int(c))
        return acc

    return eval_poly


def eval_element(f: RingMap, x: Element) -> Element:
    """Apply the ring map to a source element."""
    src, tgt = f.source, f.target
    if isinstance(src, ProductRing):
        return tuple(eval_element(fm, xc) for fm, xc in zip(f.factor_maps, x))
    if isinstance(src, ZeroRing):
        return tgt.zero()
    lifted = _lift_source_map(f)
    if isinstance(src, (IntegerRing, PolynomialRing, QuotientRing)):
        return lifted(x)
    if isinstance(src, LocalizedRing):
        num = lifted(x.num)
        if x.power == 0:
            return num
        inv = tgt.unit_inverse(lifted(src.inverted))
        out = num
        for _ in range(x.power):
            out = tgt.mul(out, inv)
        return out
    raise UnsupportedRing(f"cannot evaluate maps out of {src.label()}")


def identity_ring_map(ring: Ring) -> RingMap:
    if isinstance(ring, ProductRing):
        return RingMap(
            ring, ring, factor_maps=tuple(identity_ring_map(r) for r in ring.factors)
        )
    poly = _poly_source_base(ring)
    if poly is None:
        return RingMap(ring, ring)
    if isinstance(ring, PolynomialRing):
        tau: Element = ring.variable()
    elif isinstance(ring, QuotientRing):
        tau = ring.reduce(poly.variable())
    else:
        tau = ring.from_base(poly.variable())
    return RingMap(ring, ring, {"t": tau})


def compose_maps(g: RingMap, f: RingMap) -> RingMap:
    if f.target != g.source:
        raise ValueError("maps do not compose: inner rings differ")
    poly = _poly_source_base(f.source)
    if poly is None:
        return RingMap(f.source, g.target)
    return RingMap(f.source, g.target, {"t": eval_element(g, f.image_of_variable())})


def ring_map_from_json(data) -> RingMap:
    if not isinstance(data, dict) or "source" not in data or "target" not in data:
        raise MalformedInput(f"bad ring map encoding: {data!r}")
    source = ring_from_json(data["source"])
    target = ring_from_json(data["target"])
    images = {}
    for key, enc in data.get("gen_images", {}).items():
        images[key] = target.element_from_json(enc)
    try:
        return RingMap(source, target, images)
    except (ValueError, UnsupportedRing) as exc:
        raise MalformedInput(str(exc)) from exc


def ring_map_to_json(f: RingMap) -> dict:
    out = {"source": f.source.to_json(), "target": f.target.to_json()}
    images = dict(f.images)
    if images:
        out["gen_images"] = {k: f.target.element_to_json(v) for k, v in images.items()}
    return out


# ---------------------------------------------------------------------------
# derived pullback
# ---------------------------------------------------------------------------


def pullback(f: RingMap, p: Complex) -> Complex:
    """Base change along the map: entrywise application, ranks preserved."""
    assert p.ring == f.source, "complex lives over the wrong ring"
    return Complex(
        f.target,
        p.lo,
        p.ranks,
        tuple(d.map_entries(lambda x: eval_element(f, x), f.target) for d in p.differentials),
    )


def pullback_map(f: RingMap, g: ChainMap) -> ChainMap:
    return ChainMap(
        pullback(f, g.source),
        pullback(f, g.target),
        tuple(m.map_entries(lambda x: eval_element(f, x), f.target) for m in g.components),
    )


def preimage_support(f: RingMap, y: Support, limits: FactorLimits = DEFAULT_LIMITS) -> Support:
    """The support over the target pulled back from a support over the source."""
    assert y.ring == f.source
    if isinstance(f.source, ProductRing):
        comps = []
        for fm, sc in zip(f.factor_maps, y.components):
            if isinstance(fm.source, ZeroRing):
                comps.append(sc.__class__(False, frozenset()))
                continue
            sub = preimage_support(fm, Support(fm.source, (sc,)), limits)
            comps.append(sub.components[0])
        return Support(f.target, tuple(comps))
    out = Support.empty(f.target)
    if y.whole_components():
        out = out.union(Support.everything(f.target, limits))
    for pt in y.closed_points():
        x = _point_prime_in_ring(f.source, pt)
        out = out.union(vanishing_support(f.target, eval_element(f, x), limits))
    return out


def _point_prime_in_ring(ring: Ring, pt: SpcPoint) -> Element:
    comp = ring.components()[pt.component]
    assert pt.component == 0 and comp is ring, "source rings have a single component"
    if isinstance(ring, QuotientRing):
        return ring.reduce(pt.prime)
    if isinstance(ring, LocalizedRing):
        return ring.from_base(pt.prime)
    return pt.prime


# ---------------------------------------------------------------------------
# prime contraction and the induced map on spectra
# ---------------------------------------------------------------------------


def _comp_in_prime(comp_ring: Ring, prime: Element | None, xc: Element) -> bool:
    if prime is None:
        return comp_ring.is_zero(xc)
    base = component_base(comp_ring)
    if isinstance(comp_ring, LocalizedRing):
        return True if comp_ring.is_zero(xc) else base.divides(prime, comp_ring.core(xc))
    return base.divides(prime, xc)


def _in_prime(ring: Ring, q: SpcPoint, x: Element) -> bool:
    comp = ring.components()[q.component]
    xc = x[q.component] if isinstance(ring, ProductRing) else x
    return _comp_in_prime(comp, q.prime, xc)


def _residue_characteristic(comp_ring: Ring, q: SpcPoint) -> int:
    base = component_base(comp_ring)
    if isinstance(base, PolynomialRing):
        return base.p
    return q.prime if q.prime is not None else 0


def contract_point(f: RingMap, q: SpcPoint) -> SpcPoint:
    """The source point under the induced Spec map, in closed form.

    Integer-based sources read off the residue characteristic; polynomial
    sources search for the minimal monic polynomial killed at the image of
    the variable.  Both are exact within the ring class, with no dependence
    on an enumeration bound.
    """
    tgt = f.target
    comp = tgt.components()[q.component]
    if isinstance(comp, ZeroRing):
        raise TTGError("the zero component has no points to contract")
    if isinstance(f.source, ProductRing):
        inner = contract_point(f.factor_maps[q.component], SpcPoint(0, q.prime))
        return SpcPoint(q.component, inner.prime)
    src = f.source
    src_base = src if isinstance(src, (IntegerRing, PolynomialRing)) else component_base(src)
    if isinstance(src_base, IntegerRing):
        p0 = _residue_characteristic(comp, q)
        if p0 == 0:
            return SpcPoint(0, None)
        if isinstance(src, QuotientRing):
            assert src.base.divides(p0, src.modulus), "contraction escaped the quotient"
        if isinstance(src, LocalizedRing):
            assert not src.base.divides(p0, src.inverted), "contraction hit an inverted prime"
        return SpcPoint(0, p0)

    p = src_base.p
    assert _residue_characteristic(comp, q) == p, "characteristic mismatch survived validation"
    if isinstance(src, QuotientRing):
        from .rings import factor_element

        _, factors = factor_element(src.base, src.modulus)
        candidates = [m for m, _ in factors]
        max_deg = None
    else:
        tgt_base = component_base(comp)
        if q.prime is None:
            max_deg = 1
        elif isinstance(tgt_base, PolynomialRing):
            max_deg = len(q.prime) - 1
        else:
            max_deg = 1
        candidates = None
    if candidates is not None:
        for m in candidates:
            mx = eval_element(f, src.reduce(m) if isinstance(src, QuotientRing) else m)
            if _in_prime(tgt, q, mx):
                return SpcPoint(0, m)
        raise TTGError("no factor of the source modulus contracts onto the point")
    from .rings import _monic_of_degree  # deterministic candidate order

    for deg in range(1, max_deg + 1):
        for m in _monic_of_degree(p, deg):
            x = m if isinstance(src, PolynomialRing) else src.from_base(m)
            if _in_prime(tgt, q, eval_element(f, x)):
                if isinstance(src, LocalizedRing):
                    assert not src.base.divides(m, src.inverted), "contraction hit an inverted prime"
                return SpcPoint(0, m)
    return SpcPoint(0, None)


def spc_map(f: RingMap, y: SpcPoint) -> SpcPoint:
    """The induced map on spectra, from the target's points to the source's."""
    return contract_point(f, y)


def phi_via_intersection(
    f: RingMap, y: SpcPoint, candidate_supports: Sequence[Support], limits: FactorLimits = DEFAULT_LIMITS
) -> Support | None:
    """The defining intersection of the spectrum map, over sampled supports.

    Intersects every candidate support H over the source whose preimage
    contains the closure of y.  On a complete candidate family this equals
    the closure of the contraction; it is used as a cross-check only.
    """
    closure_y = Support.closure_of(f.target, y)
    out = None
    for h in candidate_supports:
        if closure_y.subset_of(preimage_support(f, h, limits)):
            out = h if out is None else out.intersect(h)
    return out


# ---------------------------------------------------------------------------
# geometric-morphism checks and derived-equality of maps
# ---------------------------------------------------------------------------


def verify_geometric(
    f: RingMap, family: Sequence[Support], limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    """Check that preimage commutes with intersections, and density.

    The empty family contributes the degenerate instance (everything maps
    to everything), which is exactly the density statement at support level;
    density is also witnessed on the unit complex.
    """
    report = CheckReport(f"geometric checks for {f.source.label()} -> {f.target.label()}")
    everything_src = Support.everything(f.source, limits)
    everything_tgt = Support.everything(f.target, limits)
    report.add(
        "geometric.empty_family",
        "the empty intersection maps to the whole target spectrum",
        preimage_support(f, everything_src, limits) == everything_tgt,
    )
    if family:
        inter = family[0]
        for y in family[1:]:
            inter = inter.intersect(y)
        lhs = preimage_support(f, inter, limits)
        rhs = None
        for y in family:
            py = preimage_support(f, y, limits)
            rhs = py if rhs is None else rhs.intersect(py)
        report.add(
            "geometric.intersections",
            "preimage of the intersection equals the intersection of preimages",
            lhs == rhs,
            f"family of {len(family)} supports",
        )
        bad_pairs = []
        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                lhs2 = preimage_support(f, family[i].intersect(family[j]), limits)
                rhs2 = preimage_support(f, family[i], limits).intersect(
                    preimage_support(f, family[j], limits)
                )
                if lhs2 != rhs2:
                    bad_pairs.append((i, j))
        report.add(
            "geometric.pairwise",
            "preimage commutes with pairwise intersections",
            not bad_pairs,
            f"{len(family) * (len(family) - 1) // 2} pairs",
        )
    unit_support = supph(pullback(f, unit_complex(f.source)), limits)
    report.add(
        "geometric.density",
        "the pulled-back unit has full support in the target",
        unit_support == everything_tgt,
    )
    return report


def maps_equal_derived(f: RingMap, g: RingMap, samples: Sequence[Element] | None = None) -> bool:
    """Whether two parallel maps agree, tested on the endomorphisms of the unit.

    Each sample r acts on the unit complex by multiplication; comparing the
    induced endomorphisms after pullback compares the images of r, and since
    endomorphism rings of the unit are commutative, conjugating by the unit
    witness of an isomorphism cannot hide a difference.  Agreement with
    syntactic equality of generator images is asserted.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps must be parallel to compare")
    if samples is None:
        samples = canonical_ring_elements(f.source)
        poly = _poly_source_base(f.source)
        if poly is not None:
            samples = list(samples) + [_point_prime_in_ring(f.source, SpcPoint(0, poly.variable()))]
    derived_equal = all(
        eval_element(f, r) == eval_element(g, r) for r in samples
    )
    syntactic_equal = f.images == g.images and f.factor_maps == g.factor_maps
    if derived_equal != syntactic_equal:
        # possible only if the samples miss the generators; treat as a failure
        raise TTGError("derived comparison disagrees with generator images")
    return derived_equal


def localization_inclusion(ring: Ring, f_elem: Element, limits: FactorLimits = DEFAULT_LIMITS) -> RingMap:
    """The canonical map from a ring to its localization at one element."""
    from .rings import localize_ring

    target = localize_ring(ring, f_elem, limits)
    return _canonical_map(ring, target)


def _canonical_map(source: Ring, target: Ring) -> RingMap:
    if isinstance(source, ProductRing):
        if not isinstance(target, ProductRing):
            raise UnsupportedRing(f"no canonical map {source.label()} -> {target.label()}")
        factor_maps = tuple(
            _canonical_map(s, t) for s, t in zip(source.factors, target.factors)
        )
        return RingMap(source, target, factor_maps=factor_maps)
    if isinstance(source, ZeroRing):
        return RingMap(source, target)
    poly = _poly_source_base(source)
    if poly is None:
        return RingMap(source, target)
    if isinstance(target, PolynomialRing):
        tau: Element = target.variable()
    elif isinstance(target, QuotientRing):
        tau = target.reduce(poly.variable())
    elif isinstance(target, LocalizedRing):
        tau = target.from_base(poly.variable())
    elif isinstance(target, ZeroRing):
        tau = 0
    else:
        raise UnsupportedRing(f"no canonical map into {target.label()}")
    return RingMap(source, target, {"t": tau})


def reduction_map(ring: Ring, limits: FactorLimits = DEFAULT_LIMITS) -> RingMap:
    """The projection onto the nilradical quotient, as a ring map."""
    from .rings import nilradical_quotient

    reduced, _ = nilradical_quotient(ring, limits)
    return _canonical_map(ring, reduced)
