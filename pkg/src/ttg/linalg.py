"""Matrices, Smith normal form, and module classes over the supported rings.

Smith normal form runs over the Euclidean rings (Z, GF(p)[t], and their
localizations).  Linear algebra over a quotient base/(d) lifts matrices to
the base and adjoins d*I blocks; product rings split componentwise.  These
reductions live with their callers; this module provides the Euclidean
kernel plus the presentation-based module-class computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .errors import UnsupportedRing
from .rings import (
    Element,
    EuclideanRing,
    Frac,
    LocalizedRing,
    ProductRing,
    QuotientRing,
    Ring,
    ZeroRing,
)


@dataclass(frozen=True)
class Matrix:
    """An immutable rows x cols matrix with entries in a fixed ring."""

    ring: Ring
    rows: int
    cols: int
    entries: tuple[tuple[Element, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix shape mismatch")

    @staticmethod
    def build(ring: Ring, rows_data: Sequence[Sequence[Element]], rows: int | None = None, cols: int | None = None) -> "Matrix":
        data = tuple(tuple(row) for row in rows_data)
        r = len(data) if rows is None else rows
        c = (len(data[0]) if data else 0) if cols is None else cols
        return Matrix(ring, r, c, data)

    @staticmethod
    def zeros(ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.zero()
        return Matrix(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return Matrix(
            ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        )

    @staticmethod
    def scalar(ring: Ring, n: int, value: Element) -> "Matrix":
        z = ring.zero()
        return Matrix(
            ring, n, n, tuple(tuple(value if i == j else z for j in range(n)) for i in range(n))
        )

    def __getitem__(self, idx: tuple[int, int]) -> Element:
        return self.entries[idx[0]][idx[1]]

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for row in self.entries for x in row)

    def add(self, other: "Matrix") -> "Matrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        R = self.ring
        return Matrix(
            self.ring,
            self.rows,
            self.cols,
            tuple(
                tuple(R.add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def neg(self) -> "Matrix":
        R = self.ring
        return Matrix(
            self.ring, self.rows, self.cols, tuple(tuple(R.neg(a) for a in row) for row in self.entries)
        )

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.neg())

    def scale(self, c: Element) -> "Matrix":
        R = self.ring
        return Matrix(
            self.ring, self.rows, self.cols, tuple(tuple(R.mul(c, a) for a in row) for row in self.entries)
        )

    def mul(self, other: "Matrix") -> "Matrix":
        assert self.cols == other.rows, "inner dimensions must agree"
        R = self.ring
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = R.zero()
                for k in range(self.cols):
                    acc = R.add(acc, R.mul(self.entries[i][k], other.entries[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(self.ring, self.rows, other.cols, tuple(out))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.mul(other)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def column(self, j: int) -> tuple[Element, ...]:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def map_entries(self, fn, new_ring: Ring | None = None) -> "Matrix":
        return Matrix(
            new_ring or self.ring,
            self.rows,
            self.cols,
            tuple(tuple(fn(a) for a in row) for row in self.entries),
        )

    @staticmethod
    def hstack(left: "Matrix", right: "Matrix") -> "Matrix":
        assert left.rows == right.rows
        return Matrix(
            left.ring,
            left.rows,
            left.cols + right.cols,
            tuple(ra + rb for ra, rb in zip(left.entries, right.entries)),
        )

    @staticmethod
    def vstack(top: "Matrix", bottom: "Matrix") -> "Matrix":
        assert top.cols == bottom.cols
        return Matrix(top.ring, top.rows + bottom.rows, top.cols, top.entries + bottom.entries)

    @staticmethod
    def block(rows_of_blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = [b for row in rows_of_blocks for b in row]
        assert rows, "empty block matrix"
        ring = rows[0].ring
        out_rows: list[tuple[Element, ...]] = []
        for row in rows_of_blocks:
            height = row[0].rows
            assert all(b.rows == height for b in row)
            for i in range(height):
                merged: tuple[Element, ...] = ()
                for b in row:
                    merged = merged + b.entries[i]
                out_rows.append(merged)
        cols = len(out_rows[0]) if out_rows else sum(b.cols for b in rows_of_blocks[0])
        return Matrix(ring, len(out_rows), cols, tuple(out_rows))

    @staticmethod
    def kron(a: "Matrix", b: "Matrix") -> "Matrix":
        R = a.ring
        rows = a.rows * b.rows
        cols = a.cols * b.cols
        out = []
        for i in range(rows):
            ia, ib = divmod(i, b.rows)
            row = []
            for j in range(cols):
                ja, jb = divmod(j, b.cols)
                row.append(R.mul(a.entries[ia][ja], b.entries[ib][jb]))
            out.append(tuple(row))
        return Matrix(R, rows, cols, tuple(out))


def determinant(m: Matrix) -> Element:
    """Determinant by column-subset dynamic programming; fine at desk scale."""
    assert m.rows == m.cols
    R = m.ring
    n = m.rows
    if n == 0:
        return R.one()
    table = {0: R.one()}
    for i in range(n):
        new: dict[int, Element] = {}
        for mask, val in table.items():
            sign_flips = 0
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    sign_flips += 1
                    continue
                term = R.mul(val, m.entries[i][j])
                if sign_flips % 2:
                    term = R.neg(term)
                key = mask | bit
                new[key] = R.add(new.get(key, R.zero()), term)
        table = new
    return table[(1 << n) - 1]


@dataclass(frozen=True)
class SmithForm:
    u: Matrix
    d: Matrix
    v: Matrix

    @property
    def diagonal(self) -> tuple[Element, ...]:
        n = min(self.d.rows, self.d.cols)
        return tuple(self.d.entries[i][i] for i in range(n))


def smith_normal_form(m: Matrix) -> SmithForm:
    """U*M*V = D diagonal with each entry dividing the next.

    Defined over the Euclidean rings; quotients and products must be
    decomposed by the caller.  Deterministic: pivots minimize the Euclidean
    norm with row-major tie-breaking, and the diagonal is canonicalized
    (positive integers, monic polynomials, coprime cores).
    """
    R = m.ring
    if not isinstance(R, EuclideanRing):
        raise UnsupportedRing(f"Smith normal form needs a Euclidean ring, got {R.label()}")
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [list(row) for row in Matrix.identity(R, rows).entries]
    v = [list(row) for row in Matrix.identity(R, cols).entries]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_addmul(dst, src, c):
        # row[dst] += c * row[src]
        a[dst] = [R.add(x, R.mul(c, y)) for x, y in zip(a[dst], a[src])]
        u[dst] = [R.add(x, R.mul(c, y)) for x, y in zip(u[dst], u[src])]

    def col_addmul(dst, src, c):
        for r in a:
            r[dst] = R.add(r[dst], R.mul(c, r[src]))
        for r in v:
            r[dst] = R.add(r[dst], R.mul(c, r[src]))

    def row_scale(i, unit):
        a[i] = [R.mul(unit, x) for x in a[i]]
        u[i] = [R.mul(unit, x) for x in u[i]]

    def find_pivot(k):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if not R.is_zero(a[i][j]):
                    key = (R.norm(a[i][j]), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        return None if best is None else (best[1], best[2])

    k = 0
    while k < min(rows, cols):
        pos = find_pivot(k)
        if pos is None:
            break
        pi, pj = pos
        if pi != k:
            row_swap(pi, k)
        if pj != k:
            col_swap(pj, k)
        while True:
            # clear column k below the pivot
            dirty = False
            for i in range(k + 1, rows):
                if R.is_zero(a[i][k]):
                    continue
                q, r = R.divmod_elem(a[i][k], a[k][k])
                row_addmul(i, k, R.neg(q))
                if not R.is_zero(r):
                    row_swap(i, k)
                    dirty = True
            if dirty:
                continue
            # clear row k right of the pivot
            for j in range(k + 1, cols):
                if R.is_zero(a[k][j]):
                    continue
                q, r = R.divmod_elem(a[k][j], a[k][k])
                col_addmul(j, k, R.neg(q))
                if not R.is_zero(r):
                    col_swap(j, k)
                    dirty = True
            if dirty:
                continue
            # enforce divisibility of the remaining block by the pivot
            offender = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if not R.divides(a[k][k], a[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(k, offender, R.one())
        unit = R.canonical_unit(a[k][k])
        if not R.is_zero(R.sub(unit, R.one())):
            row_scale(k, unit)
        k += 1

    return SmithForm(
        Matrix.build(R, u, rows, rows),
        Matrix.build(R, a, rows, cols),
        Matrix.build(R, v, cols, cols),
    )


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the kernel of m over a Euclidean ring."""
    snf = smith_normal_form(m)
    R = m.ring
    rank = sum(1 for d in snf.diagonal if not R.is_zero(d))
    basis_cols = [snf.v.column(j) for j in range(rank, m.cols)]
    if not basis_cols:
        return Matrix.zeros(R, m.cols, 0)
    return Matrix(
        R,
        m.cols,
        len(basis_cols),
        tuple(tuple(col[i] for col in basis_cols) for i in range(m.cols)),
    )


def solve(m: Matrix, b: Sequence[Element]) -> tuple[Element, ...] | None:
    """One solution x of m x = b over a Euclidean ring, or None."""
    R = m.ring
    snf = smith_normal_form(m)
    c = (snf.u @ Matrix(R, m.rows, 1, tuple((x,) for x in b))).column(0)
    y: list[Element] = [R.zero()] * m.cols
    diag = snf.diagonal
    for i in range(m.rows):
        d = diag[i] if i < len(diag) else R.zero()
        if R.is_zero(d):
            if not R.is_zero(c[i]):
                return None
        else:
            if not R.divides(d, c[i]):
                return None
            y[i] = R.exact_div(c[i], d)
    x = snf.v @ Matrix(R, m.cols, 1, tuple((t,) for t in y))
    return x.column(0)


def solve_matrix(m: Matrix, b: Matrix) -> Matrix | None:
    """X with m X = b, columnwise; None if any column is unsolvable."""
    cols = []
    for j in range(b.cols):
        x = solve(m, b.column(j))
        if x is None:
            return None
        cols.append(x)
    R = m.ring
    return Matrix(
        R, m.cols, b.cols, tuple(tuple(col[i] for col in cols) for i in range(m.cols))
    )


# ---------------------------------------------------------------------------
# module classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleComponent:
    """free_rank + sum of cyclic torsion R/(divisor) over one ring component."""

    rank: int
    divisors: tuple[Element, ...]

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.divisors


@dataclass(frozen=True)
class ModuleClass:
    """Isomorphism class of a finitely generated module, per ring component."""

    ring: Ring
    components: tuple[ModuleComponent, ...]

    def __post_init__(self):
        assert len(self.components) == len(self.ring.components())

    @property
    def rank(self) -> int:
        assert len(self.components) == 1
        return self.components[0].rank

    @property
    def divisors(self) -> tuple[Element, ...]:
        assert len(self.components) == 1
        return self.components[0].divisors

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    @staticmethod
    def zero(ring: Ring) -> "ModuleClass":
        return ModuleClass(ring, tuple(ModuleComponent(0, ()) for _ in ring.components()))

    @staticmethod
    def free(ring: Ring, rank: int) -> "ModuleClass":
        return ModuleClass(ring, tuple(ModuleComponent(rank, ()) for _ in ring.components()))

    def describe(self) -> str:
        parts = []
        for comp_ring, comp in zip(self.ring.components(), self.components):
            bits = []
            if comp.rank:
                bits.append(f"rank {comp.rank}")
            for d in comp.divisors:
                bits.append(f"/{comp_ring.format_element(d) if not isinstance(comp_ring, QuotientRing) else comp_ring.base.format_element(d)}")
            parts.append(" + ".join(bits) if bits else "0")
        return " | ".join(parts)


def cokernel_component(ring: Ring, generators: int, relations: Matrix) -> ModuleComponent:
    """Class of R^generators / column span of relations, one component ring.

    For a quotient base/(d) the relations are given over the base and must
    already include the d*I columns; the invariant factors are then read as
    divisors of d, with factors associate to d contributing free rank.
    """
    if isinstance(ring, ZeroRing):
        return ModuleComponent(0, ())
    if isinstance(ring, EuclideanRing):
        snf = smith_normal_form(relations)
        divisors = [d for d in snf.diagonal if not ring.is_zero(d) and not ring.is_unit(d)]
        nonzero = sum(1 for d in snf.diagonal if not ring.is_zero(d))
        if isinstance(ring, LocalizedRing):
            divisors = [Frac(ring.core(d), 0) for d in divisors]
            divisors = [d for d in divisors if not ring.is_unit(d)]
        return ModuleComponent(generators - nonzero, tuple(divisors))
    if isinstance(ring, QuotientRing):
        base = ring.base
        snf = smith_normal_form(relations)
        rank = 0
        divisors = []
        nonzero = 0
        for d in snf.diagonal:
            if base.is_zero(d):
                continue
            nonzero += 1
            if base.is_unit(d):
                continue
            d = base.gcd(d, ring.modulus)
            if base.is_unit(d):
                continue
            if d == ring.modulus:
                rank += 1
            else:
                divisors.append(d)
        free = generators - nonzero
        assert free == 0, "a module over a quotient ring cannot have base-free part"
        divisors.sort(key=_divisor_sort_key(base))
        return ModuleComponent(rank, tuple(divisors))
    raise UnsupportedRing(f"no module classes over {ring.label()}")


def _divisor_sort_key(base):
    def key(d):
        if isinstance(d, int):
            return (d, ())
        return (len(d), d)

    return key


def subquotient_class(ring: Ring, outer: Matrix, inner: Matrix) -> ModuleComponent:
    """Class of span(outer columns) / span(inner columns) over one component.

    The columns of ``outer`` must be independent (they are, for kernels) and
    the inner span must sit inside the outer span; both hold for homology and
    for chain-map modules, and are asserted here.
    """
    if isinstance(ring, ZeroRing):
        return ModuleComponent(0, ())
    x = solve_matrix(outer, inner)
    assert x is not None, "inner span escapes the outer span"
    return cokernel_component(ring, outer.cols, x)


def module_class_from_components(ring: Ring, comps: Iterable[ModuleComponent]) -> ModuleClass:
    return ModuleClass(ring, tuple(comps))


def localize_module_class(mc: ModuleClass, localized: Ring, original: Ring) -> ModuleClass:
    """Transport a module class along R -> R[1/f] (or its quotient collapse)."""
    out: list[ModuleComponent] = []
    for comp_ring, new_ring, comp in zip(original.components(), localized.components(), mc.components):
        if isinstance(new_ring, ZeroRing):
            out.append(ModuleComponent(0, ()))
            continue
        divisors = []
        rank = comp.rank
        for d in comp.divisors:
            nd = _transport_divisor(comp_ring, new_ring, d)
            if nd == "unit":
                continue
            if nd == "full":
                rank += 1
            else:
                divisors.append(nd)
        divisors.sort(key=_divisor_sort_key(new_ring.base if isinstance(new_ring, (QuotientRing, LocalizedRing)) else new_ring))
        out.append(ModuleComponent(rank, tuple(divisors)))
    return ModuleClass(localized, tuple(out))


def _transport_divisor(comp_ring: Ring, new_ring: Ring, d: Element):
    if isinstance(new_ring, LocalizedRing):
        base = new_ring.base
        lifted = d if not isinstance(comp_ring, LocalizedRing) else comp_ring.core(d)
        nd = new_ring.core(Frac(lifted, 0))
        if base.is_unit(nd):
            return "unit"
        return Frac(nd, 0)
    if isinstance(new_ring, QuotientRing):
        base = new_ring.base
        g = base.gcd(d, new_ring.modulus)
        if base.is_unit(g):
            return "unit"
        if g == new_ring.modulus:
            return "full"
        return g
    # plain Euclidean target: divisor transports as-is
    if comp_ring == new_ring:
        return d
    raise UnsupportedRing("unsupported divisor transport")
