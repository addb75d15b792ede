"""Opens of the spectrum, section rings, restriction, and fraction checks.

Every finitary-complement open in this model is principal: the complement
support V(f) of a single witness element f (a component can be blacked out
entirely by a zero coordinate).  Sections over D(f) are modeled by the
localized ring, restriction along nested opens is further localization, and
objects restrict by base change.  Denominators clear exactly, which powers
the fraction spot checks: every localized map is representable as a map
defined everywhere divided by a power of the witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .complexes import (
    ChainMap,
    Complex,
    chain_map_basis,
    compose,
    cone,
    homology_all,
    hom_up_to_homotopy,
    identity_map,
    is_null_homotopic,
    neg_map,
    add_maps,
    scalar_map,
    zero_complex,
)
from .errors import MalformedInput, TTGError, UnsupportedRing
from .linalg import Matrix, localize_module_class
from .morphisms import (
    RingMap,
    _canonical_map,
    eval_element,
    preimage_support,
    pullback,
    pullback_map,
)
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
    localize_ring,
)
from .supports import Support, supph, vanishing_support
from .spectrum import SpectrumModel, build_spectrum


@dataclass(frozen=True)
class BasicOpen:
    """An open subset of the spectrum, named by its closed complement.

    The witness element f satisfies V(f) = complement, so the open is D(f);
    a whole-component complement corresponds to a zero coordinate of f.
    """

    ring: Ring
    complement: Support
    witness: Element

    def __post_init__(self):
        if self.complement.ring != self.ring:
            raise ValueError("complement lives over the wrong ring")
        if vanishing_support(self.ring, self.witness) != self.complement:
            raise ValueError("witness does not cut out the stated complement")

    def is_whole(self) -> bool:
        return self.complement.is_empty()

    def is_empty_open(self) -> bool:
        return self.ring.is_zero(self.witness)

    def contains(self, other: "BasicOpen") -> bool:
        return self.complement.subset_of(other.complement)

    def label(self) -> str:
        return f"D({self.ring.format_element(self.witness)})"


def principal_open(ring: Ring, f: Element, limits: FactorLimits = DEFAULT_LIMITS) -> BasicOpen:
    return BasicOpen(ring, vanishing_support(ring, f, limits), f)


def whole_open(ring: Ring) -> BasicOpen:
    return principal_open(ring, ring.one())


def open_from_complement(ring: Ring, y: Support, limits: FactorLimits = DEFAULT_LIMITS) -> BasicOpen:
    """The open with the given finitary complement; always principal here."""
    comps = ring.components()
    coords = []
    for comp_ring, sc in zip(comps, y.components):
        if sc.whole:
            coords.append(comp_ring.zero())
            continue
        acc = comp_ring.one()
        base = None
        for prime in sorted(sc.points, key=lambda p: (p, ()) if isinstance(p, int) else (len(p), p)):
            if isinstance(comp_ring, QuotientRing):
                val = comp_ring.reduce(prime)
            elif isinstance(comp_ring, LocalizedRing):
                val = comp_ring.from_base(prime)
            else:
                val = prime
            acc = comp_ring.mul(acc, val)
        coords.append(acc)
    witness = tuple(coords) if isinstance(ring, ProductRing) else coords[0]
    return BasicOpen(ring, y, witness)


def complement_support(v: BasicOpen) -> Support:
    """The support of the subcategory killed by restriction to the open."""
    return v.complement


def section_ring(v: BasicOpen, limits: FactorLimits = DEFAULT_LIMITS) -> Ring:
    """Sections over a principal open: the localization at the witness."""
    if v.ring.is_zero(v.witness):
        return ZeroRing()
    if v.is_whole():
        return v.ring
    return localize_ring(v.ring, v.witness, limits)


def section_map(v: BasicOpen, limits: FactorLimits = DEFAULT_LIMITS) -> RingMap:
    """The restriction map from global sections to sections on the open."""
    return _canonical_map(v.ring, section_ring(v, limits))


def restriction_map(outer: BasicOpen, inner: BasicOpen, limits: FactorLimits = DEFAULT_LIMITS) -> RingMap:
    """Sections restrict along inner <= outer; further localization."""
    if not outer.contains(inner):
        raise ValueError("restriction requires nested opens")
    src = section_ring(outer, limits)
    tgt = section_ring(inner, limits)
    if isinstance(src, ZeroRing):
        raise UnsupportedRing("no restriction out of an empty open")
    return _canonical_map(src, tgt)


def restrict_complex(p: Complex, v: BasicOpen, limits: FactorLimits = DEFAULT_LIMITS) -> Complex:
    """Localization of an object: base change to the section ring."""
    assert p.ring == v.ring
    return pullback(section_map(v, limits), p)


# ---------------------------------------------------------------------------
# clearing denominators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClearedComplex:
    """A complex over the global ring together with the isomorphism witnesses.

    ``forward`` maps the restriction of ``cleared`` to the original complex;
    ``backward`` is its inverse.  Both composites are the identity on the
    nose, which the constructor verifies.
    """

    cleared: Complex
    forward: ChainMap
    backward: ChainMap


def clear_denominators(
    p: Complex, source_ring: Ring, f: Element, limits: FactorLimits = DEFAULT_LIMITS
) -> ClearedComplex:
    """Undo a localization: find a global complex restricting to p.

    Over a genuine localization the differentials are rescaled by powers of
    the inverted element and the isomorphism is the diagonal unit conjugation;
    over a collapsed quotient the entries are lifted through the complementary
    idempotent.  The round trip is exact and asserted.
    """
    local = localize_ring(source_ring, f, limits)
    if p.ring != local:
        raise ValueError(
            f"complex lives over {p.ring.label()}, not the localization {local.label()}"
        )
    v = principal_open(source_ring, f, limits)

    if isinstance(local, LocalizedRing):
        base = local.base
        assert source_ring == base
        exponents = []
        for d in p.differentials:
            e = max((x.power for row in d.entries for x in row), default=0)
            exponents.append(e)
        cleared_diffs = []
        for e, d in zip(exponents, p.differentials):
            scale = Frac(base.one(), 0)
            for _ in range(e):
                scale = local.mul(scale, local.from_base(local.inverted))
            scaled = d.scale(scale)
            cleared_diffs.append(
                scaled.map_entries(lambda x: x.num if x.power == 0 else _fail_integral(x), base)
            )
        q = Complex(base, p.lo, p.ranks, tuple(cleared_diffs))
        q_local = restrict_complex(q, v, limits)
        cumulative = [0] * len(p.ranks)
        for j in range(1, len(p.ranks)):
            cumulative[j] = cumulative[j - 1] + exponents[j - 1]
        fw_comps = []
        bw_comps = []
        for j, rk in enumerate(p.ranks):
            fw_comps.append(Matrix.scalar(local, rk, Frac(local._fpow(cumulative[j]), 0)))
            bw_comps.append(Matrix.scalar(local, rk, local.canon(base.one(), cumulative[j])))
        forward = ChainMap(q_local, p, tuple(fw_comps))
        backward = ChainMap(p, q_local, tuple(bw_comps))
    elif isinstance(local, ZeroRing):
        q = zero_complex(source_ring)
        q_local = restrict_complex(q, v, limits)
        forward = ChainMap(q_local, p, ())
        backward = ChainMap(
            p, q_local, tuple(Matrix.zeros(local, 0, r) for r in p.ranks)
        )
    elif local == source_ring:
        q = p
        forward = identity_map(p)
        backward = identity_map(p)
    elif isinstance(local, QuotientRing):
        assert isinstance(source_ring, QuotientRing)
        base = source_ring.base
        d_full = source_ring.modulus
        d_kept = local.modulus
        cofactor = base.exact_div(d_full, d_kept)
        g, u, vv = base.gcdext(d_kept, cofactor)
        assert base.is_unit(g), "kept and removed factors must be coprime"
        # idempotent congruent to 1 mod kept, 0 mod removed
        e = source_ring.reduce(base.mul(base.mul(base.unit_inverse(g), vv), cofactor))
        q = Complex(
            source_ring,
            p.lo,
            p.ranks,
            tuple(
                dmat.map_entries(lambda x: source_ring.mul(e, source_ring.reduce(x)), source_ring)
                for dmat in p.differentials
            ),
        )
        q_local = restrict_complex(q, v, limits)
        assert q_local == p, "idempotent lift must restrict back exactly"
        forward = identity_map(p)
        backward = identity_map(p)
    else:
        raise UnsupportedRing(f"cannot clear denominators into {source_ring.label()}")

    _assert_mutually_inverse(forward, backward)
    return ClearedComplex(q, forward, backward)


def _fail_integral(x):
    raise TTGError(f"entry {x} kept a denominator after rescaling")


def _assert_mutually_inverse(forward: ChainMap, backward: ChainMap):
    fb = compose(forward, backward)
    bf = compose(backward, forward)
    assert add_maps(fb, neg_map(identity_map(fb.source))).is_zero(), "round trip failed"
    assert add_maps(bf, neg_map(identity_map(bf.source))).is_zero(), "round trip failed"


# ---------------------------------------------------------------------------
# fraction representation of localized maps
# ---------------------------------------------------------------------------


def fraction_check(
    x: Complex,
    y: Complex,
    v: BasicOpen,
    budget: int = 6,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> CheckReport:
    """Verify the two faces of localization at the level of maps.

    First, the module of maps after restriction agrees with the restriction
    of the module of maps (an exact module-class comparison).  Second, each
    sampled localized map is exhibited as a fraction: a map defined over the
    whole ring divided by a power of the open's witness, whose cone is
    supported in the complement.
    """
    assert x.ring == v.ring and y.ring == v.ring
    report = CheckReport(f"fraction checks on {v.label()} over {v.ring.label()}")
    ring = v.ring
    local = section_ring(v, limits)
    x_v = restrict_complex(x, v, limits)
    y_v = restrict_complex(y, v, limits)

    hom_global = hom_up_to_homotopy(x, y)
    hom_local = hom_up_to_homotopy(x_v, y_v)
    transported = localize_module_class(hom_global, local, ring)
    report.add(
        "fraction.hom_localizes",
        "maps after restriction = restriction of maps, as module classes",
        transported == hom_local,
        f"{transported.describe()} vs {hom_local.describe()}",
    )

    smap = section_map(v, limits)
    samples = chain_map_basis(x_v, y_v)[:budget]
    found = 0
    for g in samples:
        frac = _represent_as_fraction(g, x, y, v, smap, budget, limits)
        if frac is None:
            report.add_indeterminate(
                "fraction.witness",
                "a localized map is a global map divided by a witness power",
                "search budget exhausted",
            )
            continue
        power, h = frac
        s = scalar_map(x, _witness_power(ring, v.witness, power))
        cone_support = supph(cone(s).cone, limits)
        ok_cone = cone_support.subset_of(v.complement)
        lhs = pullback_map(smap, h)
        rhs = compose(g, pullback_map(smap, s))
        ok_eq = add_maps(lhs, neg_map(rhs)).is_zero() or is_null_homotopic(
            add_maps(lhs, neg_map(rhs))
        )[0]
        report.add(
            "fraction.witness",
            "a localized map is a global map divided by a witness power",
            ok_cone and ok_eq,
            f"denominator power {power}",
        )
        found += 1
    report.add(
        "fraction.coverage",
        "every sampled localized map admitted a fraction",
        found == len(samples),
        f"{found}/{len(samples)} maps",
    )
    return report


def _witness_power(ring: Ring, witness: Element, power: int) -> Element:
    out = ring.one()
    for _ in range(power):
        out = ring.mul(out, witness)
    return out


def _represent_as_fraction(
    g: ChainMap,
    x: Complex,
    y: Complex,
    v: BasicOpen,
    smap: RingMap,
    budget: int,
    limits: FactorLimits,
):
    """(power k, global map h) with h = g * witness^k after restriction."""
    local = g.source.ring
    if isinstance(local, ProductRing):
        from .complexes import split_complex, split_map

        parts = []
        for c, (comp_ring, comp_local) in enumerate(zip(v.ring.factors, local.factors)):
            wc = v.witness[c]
            part = _represent_component(
                split_map(g, c), split_complex(x, c), split_complex(y, c),
                comp_ring, comp_local, wc,
            )
            if part is None:
                return None
            parts.append(part)
        k = max(p[0] for p in parts)
        comps = []
        for j, d in enumerate(x.degrees()):
            rows = y.rank(d)
            cols = x.rank(d)
            entries = []
            for i in range(rows):
                row = []
                for jj in range(cols):
                    coords = []
                    for c, (kc, hc) in enumerate(parts):
                        comp_ring = v.ring.factors[c]
                        val = hc.components[j].entries[i][jj]
                        for _ in range(k - kc):
                            val = comp_ring.mul(val, v.witness[c])
                        coords.append(val)
                    row.append(tuple(coords))
                entries.append(tuple(row))
            comps.append(Matrix(v.ring, rows, cols, tuple(entries)))
        return k, ChainMap(x, y, tuple(comps))
    part = _represent_component(g, x, y, v.ring, local, v.witness)
    return part


def _preimage_in_ring(ring: Ring, local: "LocalizedRing", x: Frac):
    """An element of the global ring restricting to x, or None."""
    base = local.base
    if ring == base:
        return x.num if x.power == 0 else None
    if isinstance(ring, LocalizedRing):
        denominator = _power_elem(base, local.inverted, x.power)
        scale = base.one()
        for m in range(32):
            scaled = base.mul(x.num, scale)
            if base.divides(denominator, scaled):
                return ring.canon(base.exact_div(scaled, denominator), m)
            scale = base.mul(scale, ring.inverted)
    return None


def _represent_component(
    g: ChainMap, x: Complex, y: Complex, ring: Ring, local: Ring, witness
):
    if isinstance(local, LocalizedRing):
        from .morphisms import _canonical_map

        smap = _canonical_map(ring, local)
        w_local = eval_element(smap, witness)
        max_power = max(
            (e.power for m in g.components for row in m.entries for e in row), default=0
        )
        scale = local.one()
        for k in range(max_power + 1):
            comps = []
            for d in x.degrees():
                m = g.component(d).scale(scale)
                lifted_rows = []
                for row in m.entries:
                    lifted = [_preimage_in_ring(ring, local, e) for e in row]
                    if any(v is None for v in lifted):
                        lifted_rows = None
                        break
                    lifted_rows.append(tuple(lifted))
                if lifted_rows is None:
                    comps = None
                    break
                comps.append(Matrix(ring, m.rows, m.cols, tuple(lifted_rows)))
            if comps is not None:
                return k, ChainMap(x, y, tuple(comps))
            scale = local.mul(scale, w_local)
        return None
    if isinstance(local, QuotientRing) and isinstance(ring, QuotientRing):
        base = ring.base
        d_kept = local.modulus
        cofactor = base.exact_div(ring.modulus, d_kept)
        gg, _, vv = base.gcdext(d_kept, cofactor)
        e = ring.reduce(base.mul(base.mul(base.unit_inverse(gg), vv), cofactor))
        comps = []
        for d in x.degrees():
            m = g.component(d)
            comps.append(m.map_entries(lambda c: ring.mul(e, ring.reduce(c)), ring))
        return 0, ChainMap(x, y, tuple(comps))
    if local == ring:
        return 0, g
    if isinstance(local, ZeroRing):
        return 0, chain_zero(x, y)
    return None


def _power_elem(ring: Ring, x, e: int):
    out = ring.one()
    for _ in range(e):
        out = ring.mul(out, x)
    return out


def chain_zero(x: Complex, y: Complex) -> ChainMap:
    from .complexes import zero_map

    return zero_map(x, y)


# ---------------------------------------------------------------------------
# molecularity and the direct-image compatibility
# ---------------------------------------------------------------------------


def molecular_check(
    ring: Ring, bound: int, max_supports: int = 512, limits: FactorLimits = DEFAULT_LIMITS
) -> CheckReport:
    """Every sampled finitary support is the union of the atom closures inside it."""
    from itertools import combinations

    from .rings import enumerate_points

    report = CheckReport(f"molecularity of the support lattice over {ring.label()}")
    enum = enumerate_points(ring, bound, limits)
    pts = list(enum.points)
    supports = []
    for r in range(len(pts) + 1):
        for combo in combinations(pts, r):
            supports.append(Support.of_points(ring, list(combo)))
            if len(supports) >= max_supports:
                break
        if len(supports) >= max_supports:
            break
    bad = []
    for y in supports:
        atoms_inside = [
            Support.closure_of(ring, pt) for pt in pts if Support.closure_of(ring, pt).subset_of(y)
        ]
        union = Support.empty(ring)
        for a in atoms_inside:
            union = union.union(a)
        if union != y:
            bad.append(y.format())
    report.add(
        "presheaf.molecular",
        "every support is the union of the atomic supports it contains",
        not bad,
        f"{len(supports)} supports over the enumerated points",
    )
    return report


def induced_section_map(
    f: RingMap, v: BasicOpen, limits: FactorLimits = DEFAULT_LIMITS
) -> tuple[BasicOpen, RingMap]:
    """The target open pulled back from v, and the map on section rings."""
    assert v.ring == f.source
    witness_image = eval_element(f, v.witness)
    v_target = principal_open(f.target, witness_image, limits)
    src_sections = section_ring(v, limits)
    tgt_sections = section_ring(v_target, limits)
    from .rings import ProductRing as _Prod

    if isinstance(src_sections, _Prod):
        factor_maps = tuple(
            _induced_on_sections(fm, s, t, limits)
            for fm, s, t in zip(f.factor_maps, src_sections.factors, tgt_sections.factors)
        )
        return v_target, RingMap(src_sections, tgt_sections, factor_maps=factor_maps)
    return v_target, _induced_on_sections(f, src_sections, tgt_sections, limits)


def _induced_on_sections(f: RingMap, src_sections: Ring, tgt_sections: Ring, limits) -> RingMap:
    if isinstance(src_sections, ZeroRing):
        # an empty open pulls back to an empty open
        return _canonical_map(src_sections, tgt_sections)
    from .morphisms import _poly_source_base

    poly = _poly_source_base(src_sections)
    if poly is None:
        return RingMap(src_sections, tgt_sections)
    tau = f.image_of_variable()
    to_sections = _canonical_map(f.target, tgt_sections)
    return RingMap(src_sections, tgt_sections, {"t": eval_element(to_sections, tau)})


def direct_image_check(
    f: RingMap,
    v: BasicOpen,
    samples: Sequence[Complex] = (),
    limits: FactorLimits = DEFAULT_LIMITS,
) -> CheckReport:
    """Compatibility of restriction with pullback along a ring map.

    Checks that the kernel of restriction pushes into the kernel over the
    pulled-back open, that the pulled-back open is cut out by the image of
    the witness, and that restriction-then-pullback equals
    pullback-then-restriction on the sample complexes.
    """
    report = CheckReport(
        f"direct image checks for {f.source.label()} -> {f.target.label()} on {v.label()}"
    )
    v_target, induced = induced_section_map(f, v, limits)
    pre = preimage_support(f, v.complement, limits)
    report.add(
        "presheaf.pullback_open",
        "the pulled-back open is cut out by the image of the witness",
        v_target.complement == pre,
        f"{v_target.complement.format()} vs {pre.format()}",
    )
    report.add(
        "presheaf.kernel_inclusion",
        "the restriction kernel maps into the pulled-back restriction kernel",
        pre.subset_of(v_target.complement),
    )
    bad = []
    for idx, p in enumerate(samples):
        path1 = restrict_complex(pullback(f, p), v_target, limits)
        path2 = pullback(induced, restrict_complex(p, v, limits))
        if path1 != path2:
            bad.append(idx)
            continue
        if homology_all(path1) != homology_all(path2):
            bad.append(idx)
    report.add(
        "presheaf.square",
        "restricting then pulling back equals pulling back then restricting",
        not bad,
        f"{len(samples)} samples",
    )
    return report
