"""Budgeted checks on a representation α: conditions C1-C3, chain group, rebase exponent.

Every search runs on the finite window of labels reachable within an explicit
budget. A negative answer that is not backed by a proof is reported as
UNKNOWN, never FAILS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import (
    FusionBackend,
    Label,
    Rep,
    TriState,
    invariant_multiplicity,
    tensor,
)
from .errors import MissingProductError


@dataclass(frozen=True)
class LabelUniverse:
    """Tensor powers ``α^0 .. α^L`` and the labels they contain, by first appearance."""

    alpha: Rep
    levels: tuple[Rep, ...]
    first_seen: dict[Label, int]

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    @property
    def discovered(self) -> list[Label]:
        return list(self.first_seen)

    def __contains__(self, label: Label) -> bool:
        return label in self.first_seen


def label_universe(alpha: Rep, backend: FusionBackend, max_level: int) -> LabelUniverse:
    levels = [Rep.of(backend.unit)]
    for _ in range(max_level):
        levels.append(tensor(levels[-1], alpha, backend))
    first_seen: dict[Label, int] = {}
    for lvl, rep in enumerate(levels):
        for lab in rep:  # canonical order within a level
            first_seen.setdefault(lab, lvl)
    return LabelUniverse(alpha, tuple(levels), first_seen)


def check_c2(alpha: Rep) -> TriState:
    """α must not be a single irreducible (two summands counted with multiplicity)."""
    if alpha.is_zero():
        raise ValueError("C2 is undefined for the zero representation")
    n = alpha.total()
    if n >= 2:
        return TriState.holds(witness=n)
    return TriState.fails("α is a single irreducible representation", witness=n)


# -- chain group -------------------------------------------------------------

class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[Label, Label] = {}

    def add(self, x: Label) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Label) -> Label:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Label, y: Label) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # keep the smaller label as root so results do not depend on merge order
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


@dataclass
class ChainGroupResult:
    """Partition of the discovered labels into chain classes.

    Class 0 always contains the unit. ``product`` maps ordered pairs of class
    indices to a class index and may be partial. ``products`` keeps every
    decomposition that was computed so the partition can be audited.
    """

    labels: list[Label]
    classes: list[tuple[Label, ...]]
    class_of: dict[Label, int]
    product: dict[tuple[int, int], int]
    iso_hint: str
    complete: bool
    products: dict[tuple[Label, Label], Rep] = field(repr=False, default_factory=dict)

    identity = 0

    def order(self, c: int) -> int | None:
        """Order of class ``c`` in the table, or ``None`` if not established."""
        x, k = c, 1
        while x != self.identity:
            x = self.product.get((x, c))
            k += 1
            if x is None or k > len(self.classes):
                return None
        return k

    def to_dict(self) -> dict:
        return {
            "classes": [[str(x) for x in cls] for cls in self.classes],
            "product": [[a, b, c] for (a, b), c in sorted(self.product.items())],
            "iso_hint": self.iso_hint,
            "complete": self.complete,
        }


class _ChainBuilder:
    def __init__(self, backend: FusionBackend, seeds: Iterable[Label]) -> None:
        self.backend = backend
        self.seeds = []
        for s in seeds:
            backend.check(s)
            if s not in self.seeds:
                self.seeds.append(s)
        self.uf = _UnionFind()
        self.labels: list[Label] = []
        # labels reached from the seeds by growth; only these are grown further
        self.core: list[Label] = []
        self._in_core: set[Label] = set()
        self.products: dict[tuple[Label, Label], Rep] = {}
        for lab in [backend.unit, *self.seeds]:
            self._add(lab, core=True)

    def _add(self, lab: Label, core: bool) -> bool:
        new = lab not in self.uf.parent
        if new:
            self.uf.add(lab)
            self.labels.append(lab)
        if core and lab not in self._in_core:
            self._in_core.add(lab)
            self.core.append(lab)
        return new

    def fuse(self, a: Label, b: Label, core: bool = False) -> bool:
        """Compute ``a ⊗ b`` once; return True if it added labels or merged classes."""
        rep = self.products.get((a, b))
        if rep is None:
            try:
                rep = self.backend.decompose(a, b)
            except MissingProductError:
                return False
            self.products[(a, b)] = rep
        changed = False
        out = list(rep)
        for c in out:
            changed |= self._add(c, core)
        for c in out[1:]:
            changed |= self.uf.union(out[0], c)
        return changed

    def grow(self) -> bool:
        changed = False
        for a in list(self.core):
            for s in self.seeds:
                changed |= self.fuse(a, s, core=True)
                changed |= self.fuse(s, a, core=True)
        return changed

    def _reps(self) -> dict[Label, Label]:
        best: dict[Label, Label] = {}
        for lab in self.core:
            root = self.uf.find(lab)
            cur = best.get(root)
            if cur is None or (self.backend.dim(lab), lab) < (self.backend.dim(cur), cur):
                best[root] = lab
        return best

    def fill_table(self) -> bool:
        changed = False
        covered = {(self.uf.find(a), self.uf.find(b)) for a, b in self.products}
        reps = self._reps()
        roots = list(reps)  # classes met by core labels only
        for ra in roots:
            for rb in roots:
                if (ra, rb) not in covered:
                    changed |= self.fuse(reps[ra], reps[rb])
        return self.close() or changed

    def close(self) -> bool:
        """Merge classes until the class product is well defined."""
        changed, again = False, True
        while again:
            again = False
            target: dict[tuple[Label, Label], Label] = {}
            for (a, b), rep in self.products.items():
                if rep.is_zero():
                    continue
                key = (self.uf.find(a), self.uf.find(b))
                c = self.uf.find(next(iter(rep)))
                if key in target and self.uf.find(target[key]) != c:
                    self.uf.union(target[key], c)
                    again = changed = True
                else:
                    target[key] = c
        return changed

    def result(self, complete: bool) -> ChainGroupResult:
        roots: list[Label] = []
        for lab in self.labels:
            r = self.uf.find(lab)
            if r not in roots:
                roots.append(r)
        index = {r: i for i, r in enumerate(roots)}
        members: list[list[Label]] = [[] for _ in roots]
        for lab in self.labels:
            members[index[self.uf.find(lab)]].append(lab)
        class_of = {lab: index[self.uf.find(lab)] for lab in self.labels}
        product: dict[tuple[int, int], int] = {}
        for (a, b), rep in self.products.items():
            if not rep.is_zero():
                product[(class_of[a], class_of[b])] = class_of[next(iter(rep))]
        classes = [tuple(sorted(m)) for m in members]
        hint = _iso_hint(len(classes), product, class_of.get(self.seeds[0]) if self.seeds else None)
        return ChainGroupResult(
            self.labels, classes, class_of, product, hint, complete, dict(self.products)
        )


def _iso_hint(n: int, table: dict[tuple[int, int], int], seed_class: int | None) -> str:
    full = all((a, b) in table for a in range(n) for b in range(n))
    if full:
        for g in range(n):
            x, seen = 0, []
            for _ in range(n):
                x = table[(x, g)]
                seen.append(x)
            if x == 0 and len(set(seen)) == n:
                return f"Z/{n}Z"
        return "unknown"
    if seed_class is None or seed_class == 0:
        return "unknown"
    deg = {0: 0, seed_class: 1}
    progress = True
    while progress:
        progress = False
        for (a, b), c in table.items():
            known = (a in deg, b in deg, c in deg)
            if known == (True, True, False):
                deg[c] = deg[a] + deg[b]
            elif known == (True, False, True):
                deg[b] = deg[c] - deg[a]
            elif known == (False, True, True):
                deg[a] = deg[c] - deg[b]
            elif known == (True, True, True):
                if deg[c] != deg[a] + deg[b]:
                    return "unknown"
                continue
            else:
                continue
            progress = True
    if len(deg) == n and len(set(deg.values())) == n:
        return "Z"
    return "unknown"


def chain_group(backend: FusionBackend, seeds: Iterable[Label], max_level: int) -> ChainGroupResult:
    """Chain classes of the labels generated by ``seeds`` (and the unit).

    Each round multiplies every grown label by every seed on both sides, then
    fills the class product table with one product of representatives per
    missing pair of classes. Union-find merges all constituents of each
    product, followed by a congruence closure so the table is well defined.
    ``complete`` means one extra round added neither labels nor merges.
    """
    builder = _ChainBuilder(backend, seeds)
    for _ in range(max_level):
        builder.grow()
        builder.fill_table()
    before = (len(builder.labels), len({builder.uf.find(x) for x in builder.labels}))
    changed = builder.grow()
    changed |= builder.fill_table()
    after = (len(builder.labels), len({builder.uf.find(x) for x in builder.labels}))
    return builder.result(complete=not changed and before == after)


def proven_grading(backend: FusionBackend) -> Callable[[Label], object] | None:
    """A fusion-additive class function that is known to be exact, if any.

    Builtin backends provide one directly. For finite tables the chain classes
    over all labels are exact once every pair product is available.
    """
    if backend.grade(backend.unit) is not None:
        return backend.grade
    labels = backend.finite_labels()
    if not labels:
        return None
    builder = _ChainBuilder(backend, labels)
    for a in labels:
        for b in labels:
            if (a, b) not in builder.products:
                try:
                    backend.decompose(a, b)
                except MissingProductError:
                    return None
                builder.fuse(a, b)
    builder.close()
    res = builder.result(complete=True)
    return lambda lab: res.class_of[lab]


def _uniform_class(alpha: Rep, grade: Callable[[Label], object]):
    classes = {grade(t) for t in alpha}
    return classes.pop() if len(classes) == 1 else None


def check_c3(alpha: Rep, backend: FusionBackend, max_level: int) -> TriState:
    """Look for the least ``N <= max_level`` with ``α^N`` contained in ``α^{N+1}``.

    FAILS only when a grading proves it impossible: all summands of α sit in
    one class different from the unit's, so consecutive powers never share a
    label.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    if alpha.is_zero():
        raise ValueError("C3 is undefined for the zero representation")
    grade = proven_grading(backend)
    if grade is not None:
        g = _uniform_class(alpha, grade)
        if g is not None and g != grade(backend.unit):
            return TriState.fails(
                "grading obstruction: every summand of α has the same non-trivial chain class",
                witness=g,
                budget=max_level,
            )
    prev = Rep.of(backend.unit)
    for n in range(max_level + 1):
        nxt = tensor(prev, alpha, backend)
        if prev <= nxt:
            return TriState.holds(witness=n, budget=max_level)
        prev = nxt
    return TriState.unknown(max_level)


def check_c1(
    alpha: Rep, backend: FusionBackend, max_level: int, *, fast: bool = True
) -> dict[Label, TriState]:
    """For each label β of the window, find β' in the window with ``β ⊗ β'`` ∋ ε."""
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    universe = label_universe(alpha, backend, max_level)
    candidates = universe.discovered
    out: dict[Label, TriState] = {}
    for beta in candidates:
        if fast:
            d = backend.dual(beta)
            if d is not None and d in universe:
                try:
                    if invariant_multiplicity(backend.decompose(beta, d), backend) >= 1:
                        out[beta] = TriState.holds(witness=d, budget=max_level)
                        continue
                except MissingProductError:
                    pass
        for other in candidates:
            try:
                n = invariant_multiplicity(backend.decompose(beta, other), backend)
            except MissingProductError:
                continue
            if n >= 1:
                out[beta] = TriState.holds(witness=other, budget=max_level)
                break
        else:
            out[beta] = TriState.unknown(max_level, "no conjugate found in the window")
    return out


def rebase_exponent(alpha: Rep, backend: FusionBackend, max_level: int) -> int | None:
    """Order ``M`` of the common chain class of α's summands, if established.

    Returns 1 when that class is trivial and ``None`` when the summands lie in
    different classes or the order is not reached within the budget.
    """
    cg = chain_group(backend, alpha.support, max_level)
    classes = {cg.class_of[t] for t in alpha}
    if len(classes) != 1:
        return None
    return cg.order(classes.pop())


def check_exhaustive(
    alpha: Rep, backend: FusionBackend, targets: Iterable[Label], max_level: int
) -> dict[Label, TriState]:
    """First tensor power of α containing each target, within ``max_level``."""
    universe = label_universe(alpha, backend, max_level)
    out = {}
    for t in targets:
        backend.check(t)
        if t in universe:
            out[t] = TriState.holds(witness=universe.first_seen[t], budget=max_level)
        else:
            out[t] = TriState.unknown(max_level)
    return out


def intertwiner_dim(alpha: Rep, backend: FusionBackend, l: int, k: int) -> int:
    """Dimension of the intertwiner space between ``α^l`` and ``α^k``."""
    universe = label_universe(alpha, backend, max(l, k))
    a, b = universe.levels[l], universe.levels[k]
    return sum(m * b.mult(t) for t, m in a.items())


def conditions_report(alpha: Rep, backend: FusionBackend, max_level: int) -> dict:
    """All checks for one α, as a JSON-ready dictionary."""
    c1 = check_c1(alpha, backend, max_level)
    c2 = check_c2(alpha)
    c3 = check_c3(alpha, backend, max_level)
    cg = chain_group(backend, alpha.support, max_level)
    m = rebase_exponent(alpha, backend, max_level)
    return {
        "backend": backend.name,
        "alpha": str(alpha),
        "max_level": max_level,
        "c1": {str(k): v.to_dict() for k, v in c1.items()},
        "c2": c2.to_dict(),
        "c3": c3.to_dict(),
        "chain_group": cg.to_dict(),
        "rebase_M": m,
    }
