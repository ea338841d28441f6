"""Exact integer matrices, Smith normal form, kernels and cokernels.

Everything uses Python integers, so entries never overflow. The elimination
is the textbook one (smallest pivot, reduce row and column, restore the
divisibility chain); it is quadratic in memory and fine for matrices of a
few hundred rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class IntegerMatrix:
    """Sparse integer matrix; only non-zero entries are stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            if v:
                self.entries[(i, j)] = int(v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        ents = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    ents[(i, j)] = v
        return cls(len(rows), ncols, ents)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def to_rows(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def T(self) -> IntegerMatrix:
        return self.transpose()

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.to_rows()})"

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    def rank(self) -> int:
        return smith_normal_form(self).rank


@dataclass
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    ``V_inv`` is carried along because cokernel generators are lifted with it.
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    V_inv: IntegerMatrix = field(repr=False)

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntegerMatrix) -> SNFResult:
    m, n = A.shape
    S = A.to_rows()
    U = _identity(m)
    V = _identity(n)
    Vi = _identity(n)

    def swap_rows(i: int, k: int) -> None:
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j: int, k: int) -> None:
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    def add_row(dst: int, src: int, q: int) -> None:
        # row dst += q * row src
        if q:
            S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        # col dst += q * col src; the inverse acts on rows of Vi: row src -= q * row dst
        if q:
            for row in S:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (piv is None or abs(v) < abs(S[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // S[t][t]))
                    dirty |= S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // S[t][t]))
                    dirty |= S[t][j] != 0
            if dirty:
                # a smaller remainder appeared in row or column t: make it the pivot
                best, where = abs(S[t][t]), None
                for i in range(t + 1, m):
                    if S[i][t] and abs(S[i][t]) < best:
                        best, where = abs(S[i][t]), ("r", i)
                for j in range(t + 1, n):
                    if S[t][j] and abs(S[t][j]) < best:
                        best, where = abs(S[t][j]), ("c", j)
                if where is not None:
                    if where[0] == "r":
                        swap_rows(t, where[1])
                    else:
                        swap_cols(t, where[1])
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    return SNFResult(
        IntegerMatrix.from_rows(U, m),
        IntegerMatrix.from_rows(S, n),
        IntegerMatrix.from_rows(V, n),
        IntegerMatrix.from_rows(Vi, n),
    )


def is_smith_form(D: IntegerMatrix) -> bool:
    if any(i != j for (i, j) in D.entries):
        return False
    diag = [D[i, i] for i in range(min(D.shape))]
    seen_zero = False
    for k, d in enumerate(diag):
        if d < 0:
            return False
        if d == 0:
            seen_zero = True
        elif seen_zero:
            return False
        if k and d and diag[k - 1] and d % diag[k - 1]:
            return False
    return True


def kernel_basis(A: IntegerMatrix) -> list[list[int]]:
    """Basis of the integer lattice ``{v : A v = 0}``."""
    res = smith_normal_form(A)
    cols = res.V.to_rows()
    return [[row[j] for row in cols] for j in range(res.rank, A.cols)]


@dataclass
class AbelianGroupPresentation:
    """``Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_s`` with ``t_1 | t_2 | ... | t_s``, ``t_i > 1``.

    Reduced coordinates list the torsion summands first, then the free ones.
    ``generator_images[j]`` gives the coordinates of the ``j``-th original
    generator.
    """

    free_rank: int
    torsion: list[int]
    generator_images: list[tuple[int, ...]]
    _V: list[list[int]] = field(repr=False, compare=False, default_factory=list)
    _V_inv: list[list[int]] = field(repr=False, compare=False, default_factory=list)
    _first: int = field(repr=False, compare=False, default=0)

    @property
    def ngens(self) -> int:
        return len(self._V)

    @property
    def width(self) -> int:
        return len(self.torsion) + self.free_rank

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or ``None`` if infinite."""
        if self.free_rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def moduli(self) -> list[int]:
        """Per-coordinate modulus; 0 for free coordinates."""
        return self.torsion + [0] * self.free_rank

    def coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Reduced coordinates of an element given on the original generators."""
        if len(vec) != self.ngens:
            raise ValueError(f"expected {self.ngens} entries, got {len(vec)}")
        full = [sum(vec[i] * self._V[i][j] for i in range(self.ngens) if vec[i]) for j in range(self.ngens)]
        kept = full[self._first :]
        return tuple(c % t if t else c for c, t in zip(kept, self.moduli()))

    def lift(self, k: int) -> list[int]:
        """An original-generator vector representing reduced generator ``k``."""
        return list(self._V_inv[self._first + k])

    def flip_free(self, signs: Iterable[bool]) -> AbelianGroupPresentation:
        """Negate the chosen free generators (an automorphism; used to normalise signs)."""
        V = [row[:] for row in self._V]
        Vi = [row[:] for row in self._V_inv]
        base = self._first + len(self.torsion)
        for k, flip in enumerate(signs):
            if flip:
                c = base + k
                for row in V:
                    row[c] = -row[c]
                Vi[c] = [-x for x in Vi[c]]
        out = AbelianGroupPresentation(self.free_rank, list(self.torsion), [], V, Vi, self._first)
        out.generator_images = [out.coords([int(i == j) for i in range(self.ngens)]) for j in range(self.ngens)]
        return out

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel_presentation(A: IntegerMatrix) -> AbelianGroupPresentation:
    """Presentation of ``Z^cols / (row space of A)``: rows are relations, columns generators."""
    res = smith_normal_form(A)
    diag = res.invariant_factors
    first = sum(1 for d in diag if d == 1)
    torsion = [d for d in diag if d > 1]
    free = A.cols - len(diag)
    out = AbelianGroupPresentation(free, torsion, [], res.V.to_rows(), res.V_inv.to_rows(), first)
    out.generator_images = [out.coords([int(i == j) for i in range(A.cols)]) for j in range(A.cols)]
    return out
