"""Independent oracles used to compute expected values in the tests.

Each oracle deliberately avoids the code path it checks: invariant factors
come from gcds of minors (determinant divisors) instead of elimination,
homology over finite rings is computed by enumerating cycles and boundaries
as sets, tensor homology over the integers comes from the classical
tensor/Tor formula on the factors' homology, and homotopies are found by
exhaustive search over all degreewise maps.
"""

from __future__ import annotations

from itertools import combinations, product
from math import gcd

from ttg.complexes import ChainMap, Complex
from ttg.linalg import Matrix, ModuleClass
from ttg.rings import (
    IntegerRing,
    PolynomialRing,
    ProductRing,
    QuotientRing,
    Ring,
    Z,
    _pdeg,
    _pdivmod,
    _pgcd,
    _pmonic,
    _pmul,
)


# ---------------------------------------------------------------------------
# invariant factors via determinant divisors
# ---------------------------------------------------------------------------


def _minor_det(ring, m: Matrix, rows, cols):
    n = len(rows)
    if n == 0:
        return ring.one()
    total = ring.zero()
    # Laplace expansion along the first row; fine for the tiny test minors
    r0 = rows[0]
    rest = rows[1:]
    for idx, c in enumerate(cols):
        entry = m.entries[r0][c]
        if ring.is_zero(entry):
            continue
        sub = _minor_det(ring, m, rest, cols[:idx] + cols[idx + 1 :])
        term = ring.mul(entry, sub)
        if idx % 2:
            term = ring.neg(term)
        total = ring.add(total, term)
    return total


def invariant_factors_by_minors(m: Matrix) -> list:
    """Nonzero invariant factors d_k = gcd(k-minors)/gcd((k-1)-minors)."""
    ring = m.ring
    assert isinstance(ring, (IntegerRing, PolynomialRing))
    previous = ring.one()
    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = ring.zero()
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                g = ring.gcd(g, _minor_det(ring, m, list(rows), list(cols)))
        if ring.is_zero(g):
            break
        out.append(ring.canonical_associate(ring.exact_div(g, previous)))
        previous = g
    return out


# ---------------------------------------------------------------------------
# set-level homology over finite rings
# ---------------------------------------------------------------------------


def _vectors(ring: Ring, n: int):
    return product(list(ring.elements()), repeat=n)

def _apply(ring: Ring, m: Matrix, v):
    out = []
    for i in range(m.rows):
        acc = ring.zero()
        for j in range(m.cols):
            acc = ring.add(acc, ring.mul(m.entries[i][j], v[j]))
        out.append(acc)
    return tuple(out)


def cycles_and_boundaries(p: Complex, i: int) -> tuple[list, frozenset]:
    ring = p.ring
    assert ring.is_finite()
    d_in = p.diff(i)
    cycles = [v for v in _vectors(ring, p.rank(i)) if all(ring.is_zero(x) for x in _apply(ring, d_in, v))]
    d_out = p.diff(i + 1)
    boundaries = frozenset(_apply(ring, d_out, w) for w in _vectors(ring, p.rank(i + 1)))
    return cycles, boundaries


def set_level_homology_order(p: Complex, i: int) -> int:
    cycles, boundaries = cycles_and_boundaries(p, i)
    assert len(cycles) % len(boundaries) == 0
    return len(cycles) // len(boundaries)


def set_level_torsion_counts(p: Complex, i: int) -> dict:
    """|H_i[m]| for every ring element m, computed from sets of cycles."""
    ring = p.ring
    cycles, boundaries = cycles_and_boundaries(p, i)
    order = len(cycles) // len(boundaries)
    counts = {}
    for m in ring.elements():
        killed = sum(
            1
            for v in cycles
            if tuple(ring.mul(m, x) for x in v) in boundaries
        )
        assert killed % len(boundaries) == 0
        counts[m] = killed // len(boundaries)
    counts["order"] = order
    return counts


def predicted_torsion_counts(mc: ModuleClass) -> dict:
    """The same counts, derived from a module class; finite rings only."""
    ring = mc.ring
    assert ring.is_finite()
    counts = {}
    for m in ring.elements():
        total = 1
        for idx, (comp_ring, comp) in enumerate(zip(ring.components(), mc.components)):
            mc_part = m[idx] if isinstance(ring, ProductRing) else m
            total *= _cyclic_killed(comp_ring, mc_part, None) ** comp.rank
            for d in comp.divisors:
                total *= _cyclic_killed(comp_ring, mc_part, d)
        counts[m] = total
    order = 1
    for comp_ring, comp in zip(ring.components(), mc.components):
        order *= comp_ring.element_count() ** comp.rank
        for d in comp.divisors:
            order *= _cyclic_order(comp_ring, d)
    counts["order"] = order
    return counts


def _cyclic_order(comp_ring: Ring, divisor) -> int:
    base = comp_ring.base
    if isinstance(base, IntegerRing):
        return divisor
    return base.p ** _pdeg(divisor)


def _cyclic_killed(comp_ring: Ring, m, divisor) -> int:
    """|{x in R0/(divisor) : m x = 0}| with divisor=None meaning the full ring."""
    assert isinstance(comp_ring, QuotientRing)
    base = comp_ring.base
    modulus = comp_ring.modulus if divisor is None else divisor
    lift = m
    if isinstance(base, IntegerRing):
        return gcd(lift, modulus) if lift else modulus
    g = _pgcd(base.p, lift, modulus)
    return base.p ** _pdeg(g)


# product-ring support for the counts: componentwise keys
def product_torsion_counts(p: Complex, i: int) -> dict:
    return set_level_torsion_counts(p, i)


# ---------------------------------------------------------------------------
# tensor homology over the integers via the classical formula
# ---------------------------------------------------------------------------


def _prime_power_parts(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(q)
        d += 1
    if n > 1:
        out.append(n)
    return out


def abelian_invariants(mc_component) -> tuple[int, list[int]]:
    """(rank, sorted prime-power multiset) of one integral component."""
    rank = mc_component.rank
    parts = []
    for d in mc_component.divisors:
        parts.extend(_prime_power_parts(d))
    return rank, sorted(parts)


def tensor_homology_by_kunneth(hp: dict, hq: dict) -> dict:
    """Homology of a tensor product over Z from the factors' homology.

    Input and output map degree -> (rank, sorted prime-power multiset).
    """
    degrees_p = {i: abelian_invariants(mc.components[0]) for i, mc in hp.items()}
    degrees_q = {i: abelian_invariants(mc.components[0]) for i, mc in hq.items()}
    out: dict[int, tuple[int, list[int]]] = {}

    def bump(n, rank, parts):
        r0, p0 = out.get(n, (0, []))
        out[n] = (r0 + rank, sorted(p0 + parts))

    for i, (ra, ta) in degrees_p.items():
        for j, (rb, tb) in degrees_q.items():
            # tensor part in degree i + j
            parts = []
            for s in ta:
                for t in tb:
                    g = gcd(s, t)
                    if g > 1:
                        parts.append(g)
            parts += ta * rb + tb * ra
            bump(i + j, ra * rb, parts)
            # torsion product part in degree i + j + 1
            tor = []
            for s in ta:
                for t in tb:
                    g = gcd(s, t)
                    if g > 1:
                        tor.append(g)
            bump(i + j + 1, 0, tor)
    return {n: v for n, v in out.items() if v[0] or v[1]}


def integral_invariants(p: Complex) -> dict:
    from ttg.complexes import homology_all

    out = {}
    for i, mc in homology_all(p).items():
        rank, parts = abelian_invariants(mc.components[0])
        if rank or parts:
            out[i] = (rank, parts)
    return out


# ---------------------------------------------------------------------------
# exhaustive homotopy search over finite rings
# ---------------------------------------------------------------------------


def exhaustive_null_homotopy(f: ChainMap) -> bool:
    """Search all degreewise maps h for f = dh + hd; finite rings, tiny ranks."""
    p, q = f.source, f.target
    ring = p.ring
    assert ring.is_finite()
    degrees = list(p.degrees())
    shapes = [(q.rank(d + 1), p.rank(d)) for d in degrees]
    sizes = [r * c for r, c in shapes]
    total = 1
    for s in sizes:
        total *= ring.element_count() ** s
    assert total <= 300000, "homotopy search space too large for the oracle"

    def vec_to_mats(vec):
        mats = {}
        off = 0
        for d, (r, c) in zip(degrees, shapes):
            entries = tuple(tuple(vec[off + i * c + j] for j in range(c)) for i in range(r))
            mats[d] = Matrix(ring, r, c, entries)
            off += r * c
        return mats

    n = sum(sizes)
    for vec in product(list(ring.elements()), repeat=n):
        h = vec_to_mats(vec)
        good = True
        for d in degrees:
            hd = h.get(d, Matrix.zeros(ring, q.rank(d + 1), p.rank(d)))
            hprev = h.get(d - 1, Matrix.zeros(ring, q.rank(d), p.rank(d - 1)))
            got = (q.diff(d + 1) @ hd).add(hprev @ p.diff(d))
            if not got.sub(f.component(d)).is_zero():
                good = False
                break
        if good:
            return True
    return False


# ---------------------------------------------------------------------------
# submodule comparisons for the long exact sequence over the integers
# ---------------------------------------------------------------------------


def column_span_contains(container: Matrix, candidate: Matrix) -> bool:
    """Whether every candidate column solves in the container's column span."""
    from ttg.linalg import solve_matrix

    return solve_matrix(container, candidate) is not None


def spans_equal(a: Matrix, b: Matrix) -> bool:
    return column_span_contains(a, b) and column_span_contains(b, a)
