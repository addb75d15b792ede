"""The spectrum of the complex category: atomic supports, topology, points.

Points are the nonzero atomic subcategories, i.e. the irreducible closed
supports: a single point closure, or a whole integral component.  The
topology comes from the basis opens U(a) = complement of F(a), where F(a)
collects the atoms inside the subcategory generated by a witness complex a.
Truncated spectra (over Z or GF(p)[t]) carry an explicit completeness flag,
and every quantified check ranges over the enumerated points only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complexes import Complex, direct_sum, unit_complex, zero_complex
from .errors import TTGError
from .reports import CheckReport
from .rings import (
    DEFAULT_LIMITS,
    FactorLimits,
    Ring,
    SpcPoint,
    enumerate_points,
    format_point,
    point_sort_key,
)
from .supports import Support, point_cone, supph


def is_atomic(y: Support) -> bool:
    """Whether a support is nonempty and irreducible.

    Irreducible means one point closure: exactly one closed point, or
    exactly one whole integral component and nothing else.
    """
    wholes = len(y.whole_components())
    points = len(y.closed_points())
    return wholes + points == 1


@dataclass(frozen=True)
class SpectrumPoint:
    """An atomic subcategory: the closure support plus its naming point."""

    descriptor: SpcPoint
    support: Support


@dataclass(frozen=True)
class BasisOpen:
    label: str
    witness: Complex
    witness_support: Support
    u_points: frozenset[int]  # indices into SpectrumModel.points

    def closed_indices(self, n: int) -> frozenset[int]:
        return frozenset(range(n)) - self.u_points


@dataclass(frozen=True)
class SpectrumModel:
    ring: Ring
    bound: int
    complete: bool
    points: tuple[SpectrumPoint, ...]
    basis: tuple[BasisOpen, ...]
    specializations: frozenset[tuple[int, int]]  # (i, j): j lies in the closure of i

    def point_index(self, descriptor: SpcPoint) -> int:
        for idx, pt in enumerate(self.points):
            if pt.descriptor == descriptor:
                return idx
        raise TTGError(
            f"point {descriptor} is outside the enumerated spectrum (bound {self.bound})"
        )

    def u_of(self, witness: Complex, limits: FactorLimits = DEFAULT_LIMITS) -> frozenset[int]:
        """U(a): the enumerated points whose atom is not generated by a."""
        y = supph(witness, limits)
        return frozenset(
            i for i, pt in enumerate(self.points) if not pt.support.subset_of(y)
        )

    def f_of(self, witness: Complex, limits: FactorLimits = DEFAULT_LIMITS) -> frozenset[int]:
        return frozenset(range(len(self.points))) - self.u_of(witness, limits)


def point_to_subcategory(model: SpectrumModel, descriptor: SpcPoint) -> SpectrumPoint:
    """The homeomorphism Spec -> spectrum on points: x goes to its closure atom."""
    return model.points[model.point_index(descriptor)]


def subcategory_to_point(point: SpectrumPoint) -> SpcPoint:
    """Inverse direction: read the naming point back off the atom."""
    return point.descriptor


def atom_from_support(model: SpectrumModel, y: Support) -> SpectrumPoint:
    if not is_atomic(y):
        raise TTGError(f"support {y.format()} is not atomic")
    for pt in model.points:
        if pt.support == y:
            return pt
    raise TTGError(f"atomic support {y.format()} is outside the enumerated spectrum")


def build_spectrum(
    ring: Ring,
    bound: int,
    extra_witnesses: tuple[tuple[str, Complex], ...] = (),
    max_sum_witnesses: int = 21,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> SpectrumModel:
    """Enumerate the atomic subcategories and the canonical basis opens.

    The witness family is the zero object, the unit, one cone per enumerated
    closed point, pairwise sums of those cones (capped), and any registered
    extra witnesses.
    """
    enum = enumerate_points(ring, bound, limits)
    points = tuple(
        SpectrumPoint(descr, Support.closure_of(ring, descr)) for descr in enum.points
    )

    witnesses: list[tuple[str, Complex]] = [
        ("0", zero_complex(ring)),
        ("1", unit_complex(ring)),
    ]
    closed = [d for d in enum.points if not d.is_generic]
    cones = []
    for descr in closed:
        label = f"cone{format_point(ring, descr)}"
        c = point_cone(ring, descr)
        cones.append((label, c))
    witnesses.extend(cones)
    for (la, ca), (lb, cb) in list(combinations(cones, 2))[:max_sum_witnesses]:
        witnesses.append((f"{la}+{lb}", direct_sum(ca, cb)))
    witnesses.extend(extra_witnesses)

    basis = []
    for label, w in witnesses:
        y = supph(w, limits)
        u = frozenset(i for i, pt in enumerate(points) if not pt.support.subset_of(y))
        basis.append(BasisOpen(label, w, y, u))

    spec = frozenset(
        (i, j)
        for i in range(len(points))
        for j in range(len(points))
        if points[j].support.subset_of(points[i].support)
    )
    return SpectrumModel(ring, bound, enum.complete, points, tuple(basis), spec)


def check_topology_axioms(
    model: SpectrumModel,
    max_pairs: int | None = None,
    limits: FactorLimits = DEFAULT_LIMITS,
) -> CheckReport:
    """Exact checks of the basis laws over the enumerated points.

    Verifies U(a) n U(b) = U(a + b) on witness pairs, that U(0) is
    everything and U(unit) is empty, and that every F(a) is closed downward
    under specialization.  Reports say explicitly that quantifiers range
    over the enumerated points.
    """
    scope = "enumerated points only" if not model.complete else "complete point set"
    report = CheckReport(f"topology axioms over {model.ring.label()} ({scope})")

    zero_u = model.u_of(zero_complex(model.ring), limits)
    report.add(
        "topology.u_zero",
        "U(0) is the whole spectrum",
        zero_u == frozenset(range(len(model.points))),
    )
    unit_u = model.u_of(unit_complex(model.ring), limits)
    report.add("topology.u_unit", "U(unit) is empty", unit_u == frozenset())

    pairs = list(combinations(range(len(model.basis)), 2))
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    bad = []
    for i, j in pairs:
        a, b = model.basis[i], model.basis[j]
        lhs = a.u_points & b.u_points
        rhs = model.u_of(direct_sum(a.witness, b.witness), limits)
        if lhs != rhs:
            bad.append((a.label, b.label))
    report.add(
        "topology.u_intersection",
        "U(a) n U(b) = U(a + b) for all witness pairs",
        not bad,
        f"{len(pairs)} pairs checked" + (f"; failures: {bad}" if bad else ""),
    )

    down_bad = []
    for open_ in model.basis:
        f_set = frozenset(range(len(model.points))) - open_.u_points
        for i, j in model.specializations:
            if i in f_set and j not in f_set:
                down_bad.append((open_.label, i, j))
    report.add(
        "topology.f_downward",
        "every F(a) is closed downward under specialization",
        not down_bad,
        f"{len(model.basis)} basis sets checked",
    )

    comp_bad = []
    for open_ in model.basis:
        expect = frozenset(
            i
            for i, pt in enumerate(model.points)
            if not pt.support.subset_of(open_.witness_support)
        )
        if expect != open_.u_points:
            comp_bad.append(open_.label)
    report.add(
        "topology.basis_complement",
        "every basis open is the complement of the witness support",
        not comp_bad,
    )
    return report


def to_dot(model: SpectrumModel) -> str:
    """DOT graph: nodes are points, edges are proper specializations."""
    lines = ["digraph spectrum {"]
    names = {}
    for idx, pt in enumerate(model.points):
        names[idx] = f"n{idx}"
        label = format_point(model.ring, pt.descriptor).replace("eta", "η")
        lines.append(f'  n{idx} [label="{label}"];')
    for i, j in sorted(model.specializations):
        if i != j:
            lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def model_to_json(model: SpectrumModel) -> dict:
    pts = []
    for pt in model.points:
        comp_ring = model.ring.components()[pt.descriptor.component]
        prime = pt.descriptor.prime
        if prime is None:
            enc = None
        else:
            from .rings import component_base

            enc = component_base(comp_ring).element_to_json(prime)
        pts.append(
            {
                "component": pt.descriptor.component,
                "prime": enc,
                "label": format_point(model.ring, pt.descriptor),
            }
        )
    return {
        "ring": model.ring.to_json(),
        "bound": model.bound,
        "complete": model.complete,
        "points": pts,
        "specializations": sorted([i, j] for i, j in model.specializations if i != j),
        "basis": [
            {"witness": b.label, "u": sorted(b.u_points)} for b in model.basis
        ],
    }
