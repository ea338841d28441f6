"""Bratteli diagram of the gauge-invariant AF core.

Level ``l`` lists the irreducibles ``t`` of ``α^l`` with their multiplicities
``d_t``; the fixed points at that level are the multimatrix algebra
``⊕ M_{d_t}``. The embedding into level ``l + 1`` has multiplicity
``mult_u(t ⊗ α)`` from block ``t`` to block ``u``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .core import FusionBackend, Label, Rep, tensor


@dataclass(frozen=True)
class TransitionMatrix:
    rows: tuple[Label, ...]
    cols: tuple[Label, ...]
    entries: dict[tuple[int, int], int]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Push a multiplicity (or K0) vector from the row level to the column level."""
        if len(vec) != len(self.rows):
            raise ValueError("vector length does not match the row labels")
        out = [0] * len(self.cols)
        for (i, j), w in self.entries.items():
            out[j] += vec[i] * w
        return out

    def to_rows(self) -> list[list[int]]:
        return [[self[i, j] for j in range(len(self.cols))] for i in range(len(self.rows))]


@dataclass(frozen=True)
class BratteliDiagram:
    alpha: Rep
    levels: tuple[tuple[tuple[Label, int], ...], ...]
    edges: tuple[dict[tuple[Label, Label], int], ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def labels(self, level: int) -> list[Label]:
        return [lab for lab, _ in self.levels[level]]

    def mults(self, level: int) -> list[int]:
        return [m for _, m in self.levels[level]]

    def to_dict(self) -> dict:
        return {
            "levels": [[{"label": str(lab), "mult": str(m)} for lab, m in lvl] for lvl in self.levels],
            "edges": [
                [{"from": str(s), "to": str(t), "w": str(w)} for (s, t), w in sorted(e.items())]
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def build_bratteli(alpha: Rep, backend: FusionBackend, L: int) -> BratteliDiagram:
    if L < 0:
        raise ValueError("number of levels must be non-negative")
    powers = [Rep.of(backend.unit)]
    edges = []
    for _ in range(L):
        current = powers[-1]
        e: dict[tuple[Label, Label], int] = {}
        for s in current:
            for t, w in tensor(Rep.of(s), alpha, backend).items():
                e[(s, t)] = w
        edges.append(e)
        powers.append(tensor(current, alpha, backend))
    levels = tuple(tuple(p.items()) for p in powers)
    return BratteliDiagram(alpha, levels, tuple(edges))


def af_fibers(diagram: BratteliDiagram, l: int) -> list[tuple[Label, int]]:
    """Block sizes of the multimatrix algebra at level ``l``."""
    if not 0 <= l <= diagram.depth:
        raise IndexError(f"level {l} outside 0..{diagram.depth}")
    return list(diagram.levels[l])


def transition_matrix(diagram: BratteliDiagram, l: int) -> TransitionMatrix:
    if not 0 <= l < diagram.depth:
        raise IndexError(f"no edges leave level {l} (diagram depth {diagram.depth})")
    rows = tuple(diagram.labels(l))
    cols = tuple(diagram.labels(l + 1))
    ri = {lab: i for i, lab in enumerate(rows)}
    ci = {lab: j for j, lab in enumerate(cols)}
    entries = {(ri[s], ci[t]): w for (s, t), w in diagram.edges[l].items()}
    return TransitionMatrix(rows, cols, entries)


def format_af_k0_element(level: int, v: Sequence[int], diagram: BratteliDiagram) -> str:
    """Render ``sum n_t (t)`` at ``level`` as the fraction ``(sum n_t (t))/α^level``."""
    labels = diagram.labels(level)
    if len(v) != len(labels):
        raise ValueError(f"level {level} has {len(labels)} labels, got {len(v)} coefficients")
    body = ""
    for lab, n in zip(labels, v):
        if not n:
            continue
        coeff = "" if abs(n) == 1 else str(abs(n))
        if not body:
            body = ("-" if n < 0 else "") + coeff + str(lab)
        else:
            body += (" - " if n < 0 else " + ") + coeff + str(lab)
    return f"({body or '0'})/α^{level}"


def _dot_id(level: int, lab: Label) -> str:
    return '"' + f"L{level}:{lab}".replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(diagram: BratteliDiagram) -> str:
    """Graphviz rendering: one rank per level, parallel edges collapsed into ``weight``."""
    lines = ["digraph bratteli {", "  rankdir=TB;", "  node [shape=plaintext];"]
    for lvl, nodes in enumerate(diagram.levels):
        lines.append(f"  subgraph level{lvl} {{")
        lines.append("    rank=same;")
        for lab, m in nodes:
            text = f"{lab}^{m}".replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'    {_dot_id(lvl, lab)} [label="{text}"];')
        lines.append("  }")
    for lvl, e in enumerate(diagram.edges):
        for (s, t), w in sorted(e.items()):
            lines.append(f'  {_dot_id(lvl, s)} -> {_dot_id(lvl + 1, t)} [weight={w}, label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
