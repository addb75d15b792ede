"""Bounded complexes of free modules and their triangulated operations.

The homological convention is used throughout: the differential lowers the
degree, shifting negates it, and the tensor differential follows the Koszul
sign d(x (x) y) = dx (x) y + (-1)^deg(x) x (x) dy.  Since every module is
free, the degreewise tensor product computes the derived tensor product.

Objects are strict: no normal form for quasi-isomorphism is attempted, and
all downstream comparisons go through homology classes and homotopy classes
of chain maps, computed exactly by Smith normal form (with base-ring lifting
over quotient rings and componentwise splitting over products).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SizeLimitExceeded, UnsupportedRing
from .linalg import (
    Matrix,
    ModuleClass,
    ModuleComponent,
    kernel_basis,
    smith_normal_form,
    solve,
    subquotient_class,
)
from .rings import Element, EuclideanRing, ProductRing, QuotientRing, Ring, ZeroRing

DEFAULT_HOM_LIMIT = 64


@dataclass(frozen=True)
class Complex:
    """A bounded complex of finite free modules.

    ``ranks[j]`` is the rank in degree ``lo + j`` and ``differentials[j]`` is
    the matrix of d: C_{lo+j+1} -> C_{lo+j}.  Zero ranks at either end are
    trimmed so equal complexes have equal encodings; d of d = 0 is checked on
    construction.
    """

    ring: Ring
    lo: int
    ranks: tuple[int, ...]
    differentials: tuple[Matrix, ...]

    def __post_init__(self):
        ranks = list(self.ranks)
        diffs = list(self.differentials)
        lo = self.lo
        if len(diffs) != max(len(ranks) - 1, 0):
            raise ValueError("need one differential per adjacent pair of degrees")
        while ranks and ranks[0] == 0:
            ranks.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while ranks and ranks[-1] == 0:
            ranks.pop()
            if diffs:
                diffs.pop()
        if not ranks:
            lo = 0
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "ranks", tuple(ranks))
        object.__setattr__(self, "differentials", tuple(diffs))
        for j, d in enumerate(self.differentials):
            if (d.rows, d.cols) != (self.ranks[j], self.ranks[j + 1]):
                raise ValueError("differential shape mismatch")
            if d.ring != self.ring:
                raise ValueError("differential over the wrong ring")
        for j in range(len(self.differentials) - 1):
            if not (self.differentials[j] @ self.differentials[j + 1]).is_zero():
                raise ValueError("d of d != 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def is_zero_object(self) -> bool:
        return not self.ranks

    def rank(self, i: int) -> int:
        j = i - self.lo
        if 0 <= j < len(self.ranks):
            return self.ranks[j]
        return 0

    def total_rank(self) -> int:
        return sum(self.ranks)

    def diff(self, i: int) -> Matrix:
        """The differential C_i -> C_{i-1}, a zero matrix outside the window."""
        j = i - self.lo
        if 1 <= j < len(self.ranks):
            return self.differentials[j - 1]
        return Matrix.zeros(self.ring, self.rank(i - 1), self.rank(i))

    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.ranks))


def zero_complex(ring: Ring) -> Complex:
    return Complex(ring, 0, (), ())

def unit_complex(ring: Ring) -> Complex:
    """The tensor unit: the free rank-one module in degree zero."""
    return Complex(ring, 0, (1,), ())


def free_complex(ring: Ring, lo: int, ranks, diff_entries) -> Complex:
    """Build a complex from nested entry lists, one matrix per adjacent pair."""
    ranks = tuple(ranks)
    mats = tuple(
        Matrix.build(ring, rows, ranks[j], ranks[j + 1]) for j, rows in enumerate(diff_entries)
    )
    return Complex(ring, lo, ranks, mats)


def shift(p: Complex, n: int = 1) -> Complex:
    """Translation by n: degrees move up by n, differentials flip sign n times."""
    if n % 2 == 0:
        diffs = p.differentials
    else:
        diffs = tuple(d.neg() for d in p.differentials)
    return Complex(p.ring, p.lo + n, p.ranks, diffs)


def direct_sum(p: Complex, q: Complex) -> Complex:
    assert p.ring == q.ring
    if p.is_zero_object():
        return q
    if q.is_zero_object():
        return p
    lo = min(p.lo, q.lo)
    hi = max(p.hi, q.hi)
    ranks = tuple(p.rank(i) + q.rank(i) for i in range(lo, hi + 1))
    diffs = []
    for i in range(lo + 1, hi + 1):
        diffs.append(
            Matrix.block(
                [
                    [p.diff(i), Matrix.zeros(p.ring, p.rank(i - 1), q.rank(i))],
                    [Matrix.zeros(p.ring, q.rank(i - 1), p.rank(i)), q.diff(i)],
                ]
            )
        )
    return Complex(p.ring, lo, ranks, tuple(diffs))


@dataclass(frozen=True)
class ChainMap:
    """A degreewise map commuting with the differentials.

    ``components[j]`` is the matrix target.rank(d) x source.rank(d) in degree
    d = source.lo + j; degrees outside the source window are zero.
    """

    source: Complex
    target: Complex
    components: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.components) != len(self.source.ranks):
            raise ValueError("one component per source degree required")
        for j, m in enumerate(self.components):
            d = self.source.lo + j
            if (m.rows, m.cols) != (self.target.rank(d), self.source.rank(d)):
                raise ValueError(f"component shape mismatch in degree {d}")
        for d in range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 2):
            lhs = self.target.diff(d) @ self.component(d)
            rhs = self.component(d - 1) @ self.source.diff(d)
            if not lhs.sub(rhs).is_zero():
                raise ValueError(f"map does not commute with d in degree {d}")

    def component(self, d: int) -> Matrix:
        j = d - self.source.lo
        if 0 <= j < len(self.components):
            return self.components[j]
        return Matrix.zeros(self.source.ring, self.target.rank(d), self.source.rank(d))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)


def chain_map(source: Complex, target: Complex, by_degree: dict[int, Matrix]) -> ChainMap:
    comps = []
    for d in source.degrees():
        comps.append(by_degree.get(d, Matrix.zeros(source.ring, target.rank(d), source.rank(d))))
    return ChainMap(source, target, tuple(comps))


def identity_map(p: Complex) -> ChainMap:
    return ChainMap(p, p, tuple(Matrix.identity(p.ring, r) for r in p.ranks))


def zero_map(p: Complex, q: Complex) -> ChainMap:
    return ChainMap(p, q, tuple(Matrix.zeros(p.ring, q.rank(d), p.rank(d)) for d in p.degrees()))


def scalar_map(p: Complex, r: Element) -> ChainMap:
    """Multiplication by a ring element, a chain map on any complex."""
    return ChainMap(p, p, tuple(Matrix.scalar(p.ring, rk, r) for rk in p.ranks))


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    assert f.target == g.source
    return ChainMap(
        f.source, g.target, tuple(g.component(d) @ f.component(d) for d in f.source.degrees())
    )


def add_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    assert f.source == g.source and f.target == g.target
    return ChainMap(f.source, f.target, tuple(a.add(b) for a, b in zip(f.components, g.components)))


def neg_map(f: ChainMap) -> ChainMap:
    return ChainMap(f.source, f.target, tuple(m.neg() for m in f.components))


def shift_map(f: ChainMap, n: int = 1) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n), f.components)


@dataclass(frozen=True)
class Triangle:
    """The exact triangle P -> Q -> cone(f) -> T(P) on the mapping cone."""

    map: ChainMap
    cone: Complex
    inclusion: ChainMap  # Q -> cone
    projection: ChainMap  # cone -> T(P)


def cone(f: ChainMap) -> Triangle:
    """Mapping cone: C_d = Q_d + P_{d-1} with d = [[dQ, f], [0, -dP]]."""
    p, q = f.source, f.target
    ring = p.ring
    lo = min(q.lo, p.lo + 1)
    hi = max(q.hi, p.hi + 1)
    if q.is_zero_object() and p.is_zero_object():
        c = zero_complex(ring)
        return Triangle(f, c, zero_map(q, c), zero_map(c, shift(p)))
    ranks = tuple(q.rank(d) + p.rank(d - 1) for d in range(lo, hi + 1))
    diffs = []
    for d in range(lo + 1, hi + 1):
        diffs.append(
            Matrix.block(
                [
                    [q.diff(d), f.component(d - 1)],
                    [Matrix.zeros(ring, p.rank(d - 2), q.rank(d)), p.diff(d - 1).neg()],
                ]
            )
        )
    c = Complex(ring, lo, ranks, tuple(diffs))
    incl = chain_map(
        q,
        c,
        {
            d: Matrix.vstack(
                Matrix.identity(ring, q.rank(d)), Matrix.zeros(ring, p.rank(d - 1), q.rank(d))
            )
            for d in q.degrees()
        },
    )
    tp = shift(p)
    proj = chain_map(
        c,
        tp,
        {
            d: Matrix.hstack(
                Matrix.zeros(ring, p.rank(d - 1), q.rank(d)), Matrix.identity(ring, p.rank(d - 1))
            )
            for d in c.degrees()
        },
    )
    return Triangle(f, c, incl, proj)


def koszul_cone(ring: Ring, x: Element) -> Complex:
    """The two-term complex R --x--> R in degrees 1, 0."""
    return cone(scalar_map(unit_complex(ring), x)).cone


def tensor(p: Complex, q: Complex) -> Complex:
    """Total complex of the double complex, with the Koszul sign rule."""
    assert p.ring == q.ring, "tensor factors must share a ring"
    ring = p.ring
    if p.is_zero_object() or q.is_zero_object():
        return zero_complex(ring)
    lo = p.lo + q.lo
    hi = p.hi + q.hi

    def blocks(n):
        return [
            (i, n - i)
            for i in range(max(p.lo, n - q.hi), min(p.hi, n - q.lo) + 1)
            if p.rank(i) and q.rank(n - i)
        ]

    ranks = tuple(sum(p.rank(i) * q.rank(j) for i, j in blocks(n)) for n in range(lo, hi + 1))
    diffs = []
    for n in range(lo + 1, hi + 1):
        src = blocks(n)
        dst = blocks(n - 1)
        dst_offset = {}
        off = 0
        for b in dst:
            dst_offset[b] = off
            off += p.rank(b[0]) * q.rank(b[1])
        rows = max(off, 0)
        cols = sum(p.rank(i) * q.rank(j) for i, j in src)
        grid = [[ring.zero()] * cols for _ in range(rows)]
        col_off = 0
        for i, j in src:
            width = p.rank(i) * q.rank(j)
            if (i - 1, j) in dst_offset:
                block = Matrix.kron(p.diff(i), Matrix.identity(ring, q.rank(j)))
                r0 = dst_offset[(i - 1, j)]
                for r in range(block.rows):
                    for cidx in range(block.cols):
                        grid[r0 + r][col_off + cidx] = block.entries[r][cidx]
            if (i, j - 1) in dst_offset:
                block = Matrix.kron(Matrix.identity(ring, p.rank(i)), q.diff(j))
                if i % 2:
                    block = block.neg()
                r0 = dst_offset[(i, j - 1)]
                for r in range(block.rows):
                    for cidx in range(block.cols):
                        grid[r0 + r][col_off + cidx] = block.entries[r][cidx]
            col_off += width
        diffs.append(Matrix.build(ring, grid, rows, cols))
    return Complex(ring, lo, ranks, tuple(diffs))


# ---------------------------------------------------------------------------
# componentwise splitting over product rings
# ---------------------------------------------------------------------------


def split_complex(p: Complex, c: int) -> Complex:
    ring = p.ring
    if not isinstance(ring, ProductRing):
        assert c == 0
        return p
    factor = ring.factors[c]
    return Complex(
        factor,
        p.lo,
        p.ranks,
        tuple(d.map_entries(lambda x: x[c], factor) for d in p.differentials),
    )


def split_map(f: ChainMap, c: int) -> ChainMap:
    ring = f.source.ring
    if not isinstance(ring, ProductRing):
        assert c == 0
        return f
    factor = ring.factors[c]
    return ChainMap(
        split_complex(f.source, c),
        split_complex(f.target, c),
        tuple(m.map_entries(lambda x: x[c], factor) for m in f.components),
    )


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


def _lift(m: Matrix, base: Ring) -> Matrix:
    return m.map_entries(lambda x: x, base)


def _homology_component(p: Complex, i: int) -> ModuleComponent:
    ring = p.ring
    if isinstance(ring, ZeroRing) or p.rank(i) == 0:
        return ModuleComponent(0, ())
    a = p.diff(i)
    b = p.diff(i + 1)
    if isinstance(ring, EuclideanRing):
        k = kernel_basis(a)
        return subquotient_class(ring, k, b)
    if isinstance(ring, QuotientRing):
        base = ring.base
        d = ring.modulus
        a_aug = Matrix.hstack(_lift(a, base), Matrix.scalar(base, a.rows, d))
        k_full = kernel_basis(a_aug)
        k = Matrix(base, a.cols, k_full.cols, k_full.entries[: a.cols])
        b_aug = Matrix.hstack(_lift(b, base), Matrix.scalar(base, a.cols, d))
        return subquotient_class(ring, k, b_aug)
    raise UnsupportedRing(f"no homology over {ring.label()}")


def homology(p: Complex, i: int) -> ModuleClass:
    """The class of ker d_i / im d_{i+1}, one component per ring factor."""
    comps = tuple(
        _homology_component(split_complex(p, c), i) for c in range(len(p.ring.components()))
    )
    return ModuleClass(p.ring, comps)


def homology_all(p: Complex) -> dict[int, ModuleClass]:
    return {i: homology(p, i) for i in range(p.lo, p.hi + 2)}


def is_acyclic(p: Complex) -> bool:
    return all(h.is_zero() for h in homology_all(p).values())


# ---------------------------------------------------------------------------
# chain maps up to homotopy
# ---------------------------------------------------------------------------


class _VecLayout:
    """Offsets for stacking degreewise matrices into one vector."""

    def __init__(self, shapes: dict[int, tuple[int, int]]):
        self.shapes = {d: s for d, s in sorted(shapes.items()) if s[0] * s[1] > 0}
        self.offsets = {}
        off = 0
        for d, (r, c) in self.shapes.items():
            self.offsets[d] = off
            off += r * c
        self.size = off

    def unvec(self, ring: Ring, vec, d: int) -> Matrix:
        r, c = self.shapes.get(d, (0, 0))
        if r * c == 0:
            return Matrix.zeros(ring, r, c)
        off = self.offsets[d]
        return Matrix(
            ring,
            r,
            c,
            tuple(tuple(vec[off + i * c + j] for j in range(c)) for i in range(r)),
        )


def _map_layout(p: Complex, q: Complex) -> _VecLayout:
    return _VecLayout({d: (q.rank(d), p.rank(d)) for d in p.degrees()})


def _homotopy_layout(p: Complex, q: Complex) -> _VecLayout:
    return _VecLayout({d: (q.rank(d + 1), p.rank(d)) for d in p.degrees()})


def _insert_block(grid, block: Matrix, r0: int, c0: int):
    for i in range(block.rows):
        row = grid[r0 + i]
        for j in range(block.cols):
            row[c0 + j] = block.entries[i][j]


def _chain_constraint_matrix(p: Complex, q: Complex, ring: Ring) -> tuple[Matrix, _VecLayout]:
    """Matrix whose kernel is the module of chain maps p -> q."""
    maps = _map_layout(p, q)
    eq = _VecLayout({d: (q.rank(d - 1), p.rank(d)) for d in range(p.lo, p.hi + 2)})
    grid = [[ring.zero()] * maps.size for _ in range(eq.size)]
    for d, (qr, pr) in eq.shapes.items():
        r0 = eq.offsets[d]
        if d in maps.shapes:
            block = Matrix.kron(_lift(q.diff(d), ring), Matrix.identity(ring, p.rank(d)))
            _insert_block(grid, block, r0, maps.offsets[d])
        if d - 1 in maps.shapes:
            block = Matrix.kron(
                Matrix.identity(ring, q.rank(d - 1)), _lift(p.diff(d), ring).transpose()
            ).neg()
            _insert_block(grid, block, r0, maps.offsets[d - 1])
    return Matrix.build(ring, grid, eq.size, maps.size), maps


def _boundary_matrix(p: Complex, q: Complex, ring: Ring) -> tuple[Matrix, _VecLayout]:
    """Matrix sending a stacked homotopy h to the stacked map dh + hd."""
    maps = _map_layout(p, q)
    hps = _homotopy_layout(p, q)
    grid = [[ring.zero()] * hps.size for _ in range(maps.size)]
    for d in maps.shapes:
        r0 = maps.offsets[d]
        if d in hps.shapes:
            block = Matrix.kron(_lift(q.diff(d + 1), ring), Matrix.identity(ring, p.rank(d)))
            _insert_block(grid, block, r0, hps.offsets[d])
        if d - 1 in hps.shapes:
            block = Matrix.kron(
                Matrix.identity(ring, q.rank(d)), _lift(p.diff(d), ring).transpose()
            )
            _insert_block(grid, block, r0, hps.offsets[d - 1])
    return Matrix.build(ring, grid, maps.size, hps.size), hps


def _guard_hom_size(p: Complex, q: Complex, limit: int):
    if p.total_rank() * q.total_rank() > limit:
        raise SizeLimitExceeded(
            f"hom computation of size {p.total_rank()}x{q.total_rank()} exceeds limit {limit}"
        )


def _hom_component(p: Complex, q: Complex) -> ModuleComponent:
    ring = p.ring
    if isinstance(ring, ZeroRing):
        return ModuleComponent(0, ())
    if p.is_zero_object() or q.is_zero_object():
        return ModuleComponent(0, ())
    work = ring.base if isinstance(ring, QuotientRing) else ring
    c_mat, maps = _chain_constraint_matrix(p, q, work)
    b_mat, _ = _boundary_matrix(p, q, work)
    if isinstance(ring, QuotientRing):
        d = ring.modulus
        c_aug = Matrix.hstack(c_mat, Matrix.scalar(work, c_mat.rows, d))
        k_full = kernel_basis(c_aug)
        k = Matrix(work, maps.size, k_full.cols, k_full.entries[: maps.size])
        b_aug = Matrix.hstack(b_mat, Matrix.scalar(work, maps.size, d))
        return subquotient_class(ring, k, b_aug)
    k = kernel_basis(c_mat)
    return subquotient_class(ring, k, b_mat)


def hom_up_to_homotopy(p: Complex, q: Complex, limit: int = DEFAULT_HOM_LIMIT) -> ModuleClass:
    """The module of chain maps p -> q modulo the null-homotopic ones."""
    assert p.ring == q.ring
    _guard_hom_size(p, q, limit)
    comps = tuple(
        _hom_component(split_complex(p, c), split_complex(q, c))
        for c in range(len(p.ring.components()))
    )
    return ModuleClass(p.ring, comps)


def chain_map_basis(p: Complex, q: Complex, limit: int = DEFAULT_HOM_LIMIT) -> list[ChainMap]:
    """Generators of the module of chain maps p -> q (not modulo homotopy)."""
    assert p.ring == q.ring
    _guard_hom_size(p, q, limit)
    ring = p.ring
    if isinstance(ring, ProductRing):
        out: list[ChainMap] = []
        zero = zero_map(p, q)
        for c, factor in enumerate(ring.factors):
            for g in chain_map_basis(split_complex(p, c), split_complex(q, c), limit):
                comps = []
                for j, zm in enumerate(zero.components):
                    entries = []
                    for r in range(zm.rows):
                        row = []
                        for s in range(zm.cols):
                            tup = list(zm.entries[r][s])
                            tup[c] = g.components[j].entries[r][s]
                            row.append(tuple(tup))
                        entries.append(tuple(row))
                    comps.append(Matrix(ring, zm.rows, zm.cols, tuple(entries)))
                cand = ChainMap(p, q, tuple(comps))
                if not cand.is_zero():
                    out.append(cand)
        return out
    if isinstance(ring, ZeroRing) or p.is_zero_object() or q.is_zero_object():
        return []
    work = ring.base if isinstance(ring, QuotientRing) else ring
    c_mat, maps = _chain_constraint_matrix(p, q, work)
    if isinstance(ring, QuotientRing):
        c_aug = Matrix.hstack(c_mat, Matrix.scalar(work, c_mat.rows, ring.modulus))
        k_full = kernel_basis(c_aug)
        cols = [tuple(k_full.entries[i][j] for i in range(maps.size)) for j in range(k_full.cols)]
        cols = [tuple(ring.reduce(x) for x in col) for col in cols]
    else:
        k = kernel_basis(c_mat)
        cols = [k.column(j) for j in range(k.cols)]
    out = []
    seen = set()
    for col in cols:
        comps = tuple(
            maps.unvec(ring, col, d)
            if d in maps.shapes
            else Matrix.zeros(ring, q.rank(d), p.rank(d))
            for d in p.degrees()
        )
        f = ChainMap(p, q, comps)
        if f.is_zero() or comps in seen:
            continue
        seen.add(comps)
        out.append(f)
    return out


def is_null_homotopic(
    f: ChainMap, limit: int = DEFAULT_HOM_LIMIT
) -> tuple[bool, dict[int, Matrix] | None]:
    """Solve f = dh + hd; on success the witness h is returned by degree."""
    p, q = f.source, f.target
    _guard_hom_size(p, q, limit)
    ring = p.ring
    if isinstance(ring, ProductRing):
        witnesses = []
        for c in range(len(ring.factors)):
            ok, h = is_null_homotopic(split_map(f, c), limit)
            if not ok:
                return False, None
            witnesses.append(h)
        merged: dict[int, Matrix] = {}
        for d in p.degrees():
            shapes = [w.get(d) for w in witnesses]
            rows = q.rank(d + 1)
            cols = p.rank(d)
            entries = tuple(
                tuple(
                    tuple(
                        (w[d].entries[i][j] if w is not None and d in w else fac.zero())
                        for w, fac in zip(witnesses, ring.factors)
                    )
                    for j in range(cols)
                )
                for i in range(rows)
            )
            if rows and cols:
                merged[d] = Matrix(ring, rows, cols, entries)
        _check_homotopy(f, merged)
        return True, merged
    if isinstance(ring, ZeroRing) or f.is_zero():
        return True, {}
    work = ring.base if isinstance(ring, QuotientRing) else ring
    b_mat, hps = _boundary_matrix(p, q, work)
    maps = _map_layout(p, q)
    rhs = [work.zero()] * maps.size
    for d in maps.shapes:
        m = f.component(d)
        off = maps.offsets[d]
        for i in range(m.rows):
            for j in range(m.cols):
                rhs[off + i * m.cols + j] = m.entries[i][j]
    if isinstance(ring, QuotientRing):
        b_aug = Matrix.hstack(b_mat, Matrix.scalar(work, maps.size, ring.modulus))
        sol = solve(b_aug, rhs)
        if sol is None:
            return False, None
        hol = [ring.reduce(x) for x in sol[: hps.size]]
    else:
        sol = solve(b_mat, rhs)
        if sol is None:
            return False, None
        hol = list(sol)
    witness = {d: hps.unvec(ring, hol, d) for d in hps.shapes}
    _check_homotopy(f, witness)
    return True, witness


def _check_homotopy(f: ChainMap, h: dict[int, Matrix]):
    p, q = f.source, f.target
    ring = p.ring
    for d in p.degrees():
        hd = h.get(d, Matrix.zeros(ring, q.rank(d + 1), p.rank(d)))
        hprev = h.get(d - 1, Matrix.zeros(ring, q.rank(d), p.rank(d - 1)))
        got = (q.diff(d + 1) @ hd).add(hprev @ p.diff(d))
        assert got.sub(f.component(d)).is_zero(), "homotopy witness failed verification"


def homotopy_equal(f: ChainMap, g: ChainMap, limit: int = DEFAULT_HOM_LIMIT) -> bool:
    """Whether f and g agree up to homotopy."""
    return is_null_homotopic(add_maps(f, neg_map(g)), limit)[0]
