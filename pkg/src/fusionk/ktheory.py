"""K-theory of the fixed-point algebra from fusion data.

K0 of the AF core is the direct limit of ``Z^{labels(l)}`` along tensoring
with α. The correspondence map acts on it as the label inclusion
``l -> l + 1``, which exists once ``α^N ⊆ α^{N+1}``. So K0 of the fixed
points is the cokernel of ``φ - ι`` and K1 its kernel. At a finite level
``L`` this becomes

    Q_L = Z^{labels(L)} / < t ⊗ α - t : t in labels(L - 1) >

and ``Q_L -> Q_{L+1}`` is induced by label inclusion. The limit is reported
only when these maps are isomorphisms over a window; otherwise the whole
sequence is returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .conditions import check_c1, check_c2, check_c3, label_universe, rebase_exponent
from .core import FusionBackend, Label, Rep, Status, tensor, tensor_power
from .errors import GateError
from .snf import (
    AbelianGroupPresentation,
    IntegerMatrix,
    cokernel_presentation,
    kernel_basis,
    smith_normal_form,
)

STABILITY_WINDOW = 2


@dataclass(frozen=True)
class RelationSystem:
    level: int
    relations: tuple[Label, ...]  # labels of level L - 1
    generators: tuple[Label, ...]  # labels of level L
    matrix: IntegerMatrix


def _relations(levels: tuple[Rep, ...], alpha: Rep, backend: FusionBackend, L: int) -> RelationSystem:
    gens = tuple(levels[L].support)
    rels = tuple(levels[L - 1].support)
    col = {lab: j for j, lab in enumerate(gens)}
    entries: dict[tuple[int, int], int] = {}
    for i, t in enumerate(rels):
        for u, m in tensor(Rep.of(t), alpha, backend).items():
            entries[(i, col[u])] = entries.get((i, col[u]), 0) + m
        entries[(i, col[t])] = entries.get((i, col[t]), 0) - 1
    return RelationSystem(L, rels, gens, IntegerMatrix(len(rels), len(gens), entries))


def _c3_witness(alpha: Rep, backend: FusionBackend, max_level: int) -> int:
    c3 = check_c3(alpha, backend, max_level)
    if c3.status is not Status.HOLDS:
        raise GateError(f"containment α^N ⊆ α^(N+1) not established: {c3.status.value}", c3)
    return c3.witness


def pimsner_relation_matrix(alpha: Rep, backend: FusionBackend, L: int) -> IntegerMatrix:
    """Relations ``t ⊗ α - t`` (rows: labels of level ``L-1``; columns: labels of level ``L``)."""
    if L < 1:
        raise ValueError("relations need L >= 1")
    n = _c3_witness(alpha, backend, max(L - 1, 1))
    if n > L - 1:
        raise GateError(f"containment only holds from level {n}; need it at level {L - 1}")
    levels = label_universe(alpha, backend, L).levels
    return _relations(levels, alpha, backend, L).matrix


@dataclass
class LevelPresentation:
    level: int
    generators: tuple[Label, ...]
    presentation: AbelianGroupPresentation
    relation_rank: int
    kernel_rank: int
    unit_class: tuple[int, ...]


@dataclass
class InducedMap:
    """``Q_L -> Q_{L+1}`` in reduced coordinates (columns: source generators)."""

    source: int
    matrix: list[list[int]]
    injective: bool
    surjective: bool

    @property
    def is_isomorphism(self) -> bool:
        return self.injective and self.surjective


def _presentation(system: RelationSystem, unit_vec: list[int]) -> tuple[AbelianGroupPresentation, tuple[int, ...]]:
    pres = cokernel_presentation(system.matrix)
    unit = pres.coords(unit_vec)
    free = unit[len(pres.torsion):]
    if any(c < 0 for c in free):
        pres = pres.flip_free(c < 0 for c in free)
        unit = pres.coords(unit_vec)
    return pres, unit


def _induced(src: LevelPresentation, dst: LevelPresentation) -> InducedMap:
    where = {lab: j for j, lab in enumerate(dst.generators)}
    p, q = src.presentation, dst.presentation
    columns = []
    for k in range(p.width):
        lifted = p.lift(k)
        vec = [0] * len(dst.generators)
        for i, lab in enumerate(src.generators):
            vec[where[lab]] += lifted[i]
        columns.append(q.coords(vec))
    matrix = [[columns[k][r] for k in range(p.width)] for r in range(q.width)]

    # surjective iff the images together with the torsion relations span Z^width
    rel_rows = [list(c) for c in columns]
    rel_rows += [[t if r == i else 0 for r in range(q.width)] for i, t in enumerate(q.torsion)]
    image = cokernel_presentation(IntegerMatrix.from_rows(rel_rows, q.width))
    surjective = image.is_trivial()

    # injective iff every x with F x in the torsion relations of Q_{L+1} is 0 in Q_L
    block = [
        [matrix[r][k] for k in range(p.width)] + [-t if r == i else 0 for i, t in enumerate(q.torsion)]
        for r in range(q.width)
    ]
    ncols = p.width + len(q.torsion)
    kernel = kernel_basis(IntegerMatrix.from_rows(block, ncols)) if q.width else [
        [int(i == j) for i in range(ncols)] for j in range(ncols)
    ]
    mods = p.moduli()
    injective = all(
        all((x % m == 0) if m else x == 0 for x, m in zip(v[: p.width], mods)) for v in kernel
    )
    return InducedMap(src.level, matrix, injective, surjective)


@dataclass
class KTheoryReport:
    backend: str
    alpha: Rep
    rebased_alpha: Rep
    rebase_M: int
    c3_witness: int
    max_level: int
    per_level: list[LevelPresentation]
    maps: list[InducedMap]
    stabilized: bool
    stable_from: int | None
    verdict: dict = field(default_factory=dict)

    def level(self, L: int) -> LevelPresentation:
        for lp in self.per_level:
            if lp.level == L:
                return lp
        raise KeyError(L)

    def to_dict(self) -> dict:
        levels = [
            {
                "L": lp.level,
                "free_rank": lp.presentation.free_rank,
                "torsion": [str(t) for t in lp.presentation.torsion],
                "kernel_rank": lp.kernel_rank,
                "unit": [str(c) for c in lp.unit_class],
            }
            for lp in self.per_level
        ]
        maps = [
            {"from": m.source, "injective": m.injective, "surjective": m.surjective}
            for m in self.maps
        ]
        return {
            "rebase_M": self.rebase_M,
            "c3_N": self.c3_witness,
            "alpha": str(self.alpha),
            "rebased_alpha": str(self.rebased_alpha),
            "max_level": self.max_level,
            "levels": levels,
            "maps": maps,
            "stabilized": self.stabilized,
            "stable_from": self.stable_from,
            "k0": self.verdict.get("k0"),
            "k0_unit": self.verdict.get("k0_unit"),
            "k0_sequence": self.verdict.get("k0_sequence"),
            "k1": self.verdict.get("k1"),
            "model": self.verdict.get("model"),
            "conditions": self.verdict.get("conditions"),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True)


def _stable_from(maps: list[InducedMap]) -> int | None:
    start = None
    for m in reversed(maps):
        if not m.is_isomorphism:
            break
        start = m.source
    if start is None:
        return None
    count = sum(1 for m in maps if m.source >= start)
    return start if count >= STABILITY_WINDOW else None


def _model(pres: AbelianGroupPresentation, unit: tuple[int, ...]) -> str | None:
    """Name the Cuntz algebra whose (K0, [1], K1 = 0) matches, if any."""
    if pres.free_rank == 1 and not pres.torsion and unit == (1,):
        return "O_infinity"
    if pres.free_rank == 0 and len(pres.torsion) <= 1:
        n = pres.torsion[0] if pres.torsion else 1
        u = unit[0] if unit else 0
        from math import gcd

        if gcd(u, n) == 1:
            return f"O_{n + 1}"
    return None


def k_theory_of_fixed_point(
    alpha: Rep, backend: FusionBackend, max_level: int, auto_rebase: bool = True
) -> KTheoryReport:
    """Truncated computation of K0/K1 of the fixed points of the Cuntz algebra under α.

    With ``auto_rebase`` α is first replaced by ``α^M`` when all its summands
    share a chain class of order ``M > 1`` (the fixed-point algebras agree).
    Raises :class:`GateError` when the containment condition is not
    established within ``max_level``.
    """
    if max_level < 2:
        raise ValueError("max_level must be at least 2")
    work, M = alpha, 1
    if auto_rebase:
        m = rebase_exponent(alpha, backend, max_level)
        if m is not None and m > 1:
            work, M = tensor_power(alpha, m, backend), m
    n = _c3_witness(work, backend, max_level)

    levels = label_universe(work, backend, max_level).levels
    per_level: list[LevelPresentation] = []
    for L in range(n + 1, max_level + 1):
        system = _relations(levels, work, backend, L)
        unit_vec = [levels[L].mult(t) for t in system.generators]
        pres, unit = _presentation(system, unit_vec)
        rank = smith_normal_form(system.matrix).rank
        kernel = kernel_basis(system.matrix.T)
        per_level.append(LevelPresentation(L, system.generators, pres, rank, len(kernel), unit))

    maps = [_induced(a, b) for a, b in zip(per_level, per_level[1:])]
    start = _stable_from(maps)
    report = KTheoryReport(
        backend=backend.name,
        alpha=alpha,
        rebased_alpha=work,
        rebase_M=M,
        c3_witness=n,
        max_level=max_level,
        per_level=per_level,
        maps=maps,
        stabilized=start is not None,
        stable_from=start,
    )
    report.verdict = _verdict(report, work, backend, max_level)
    return report


def _verdict(report: KTheoryReport, alpha: Rep, backend: FusionBackend, max_level: int) -> dict:
    kernel_ranks = [lp.kernel_rank for lp in report.per_level]
    if all(k == 0 for k in kernel_ranks):
        k1 = "0 through budget"
    else:
        worst = max(report.per_level, key=lambda lp: lp.kernel_rank)
        k1 = f"kernel rank {worst.kernel_rank} at level {worst.level} (not a colimit value)"
    c1 = check_c1(alpha, backend, max_level)
    c1_ok = all(v.status is Status.HOLDS for v in c1.values())
    c2 = check_c2(alpha)
    conditions = {
        "c1": "holds on window" if c1_ok else "unknown",
        "c2": c2.status.value,
        "c3": f"holds from N={report.c3_witness}",
    }
    out = {
        "k0": None,
        "k0_unit": None,
        "k0_sequence": [lp.presentation.describe() for lp in report.per_level],
        "k1": k1,
        "model": None,
        "conditions": conditions,
    }
    if report.stabilized:
        top = report.per_level[-1]
        out["k0"] = top.presentation.describe()
        out["k0_unit"] = [str(c) for c in top.unit_class]
        if k1 == "0 through budget" and c1_ok and c2.status is Status.HOLDS:
            out["model"] = _model(top.presentation, top.unit_class)
    return out


def induced_colimit_map(alpha: Rep, backend: FusionBackend, L: int) -> tuple[list[list[int]], bool]:
    """Matrix of ``Q_L -> Q_{L+1}`` in reduced coordinates and whether it is an isomorphism."""
    n = _c3_witness(alpha, backend, max(L, 1))
    if n > L - 1:
        raise GateError(f"containment only holds from level {n}; need it at level {L - 1}")
    levels = label_universe(alpha, backend, L + 1).levels
    lps = []
    for lvl in (L, L + 1):
        system = _relations(levels, alpha, backend, lvl)
        unit_vec = [levels[lvl].mult(t) for t in system.generators]
        pres, unit = _presentation(system, unit_vec)
        lps.append(LevelPresentation(lvl, system.generators, pres, 0, 0, unit))
    m = _induced(lps[0], lps[1])
    return m.matrix, m.is_isomorphism
