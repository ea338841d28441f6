"""Labels, representations and the fusion-backend interface.

A :class:`Rep` is a finitely supported map from irreducible labels to
non-negative multiplicities. Backends only have to supply the product of two
irreducibles; everything else (tensor products of reducible representations,
powers, dimensions) is derived here by bilinear extension.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping

from .errors import MissingProductError, UnknownLabelError


@dataclass(frozen=True, order=True)
class Label:
    """An irreducible representation.

    Equality, hashing and ordering only look at ``key``, the canonical form;
    ``name`` is for display.
    """

    key: tuple
    name: str = field(compare=False)

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Label({self.name})"


class Rep:
    """A representation written as a formal sum ``sum_t mult(t) (t)``.

    Instances are immutable. Zero multiplicities are never stored and
    iteration follows the canonical label order.
    """

    __slots__ = ("_mult", "_hash")

    def __init__(self, mult: Mapping[Label, int] | Iterable[tuple[Label, int]] = ()):
        items = mult.items() if isinstance(mult, Mapping) else mult
        acc: dict[Label, int] = {}
        for label, m in items:
            m = int(m)
            if m < 0:
                raise ValueError(f"negative multiplicity {m} for {label}")
            if m:
                acc[label] = acc.get(label, 0) + m
        self._mult = {k: acc[k] for k in sorted(acc)}
        self._hash = None

    @classmethod
    def of(cls, label: Label, mult: int = 1) -> Rep:
        return cls({label: mult})

    def mult(self, label: Label) -> int:
        """Multiplicity of ``label`` (0 when absent)."""
        return self._mult.get(label, 0)

    def items(self):
        return self._mult.items()

    @property
    def support(self) -> tuple[Label, ...]:
        return tuple(self._mult)

    def total(self) -> int:
        """Number of irreducible summands counted with multiplicity."""
        return sum(self._mult.values())

    def is_zero(self) -> bool:
        return not self._mult

    def __iter__(self) -> Iterator[Label]:
        return iter(self._mult)

    def __len__(self) -> int:
        return len(self._mult)

    def __contains__(self, label) -> bool:
        return label in self._mult

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return self._mult == other._mult

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._mult.items()))
        return self._hash

    def __add__(self, other: Rep) -> Rep:
        if not isinstance(other, Rep):
            return NotImplemented
        merged = dict(self._mult)
        for label, m in other._mult.items():
            merged[label] = merged.get(label, 0) + m
        return Rep(merged)

    def __mul__(self, k: int) -> Rep:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("scalar must be non-negative")
        return Rep({label: k * m for label, m in self._mult.items()})

    __rmul__ = __mul__

    def __le__(self, other: Rep) -> bool:
        """Containment: every multiplicity of ``self`` is at most the one in ``other``."""
        return all(m <= other.mult(label) for label, m in self._mult.items())

    def __str__(self) -> str:
        if not self._mult:
            return "0"
        return " + ".join(f"{m}.{label}" if m != 1 else str(label) for label, m in self._mult.items())

    def __repr__(self) -> str:
        return f"Rep({self})"


class FusionBackend:
    """Fusion rules of a compact (quantum) group.

    Subclasses implement :meth:`_decompose`, :meth:`dim`, :meth:`contains`
    and :meth:`parse_label`. The public :meth:`decompose` memoizes pair
    products; the cache never changes results.

    Optional hooks:

    * :meth:`dual` returns the conjugate label or ``None`` when unknown.
    * :meth:`grade` returns a value in ``Z/grade_modulus`` (``Z`` when the
      modulus is 0) that is additive under fusion. It is used as a proof of
      the chain-class obstruction, so only return it when it is exact.
    """

    name: str = "abstract"
    unit: Label
    grade_modulus: int | None = None

    def __init__(self) -> None:
        self._cache: dict[tuple[Label, Label], Rep] = {}
        self._lock = threading.Lock()

    # -- required -----------------------------------------------------------
    def _decompose(self, a: Label, b: Label) -> Rep:
        raise NotImplementedError

    def dim(self, a: Label) -> int:
        raise NotImplementedError

    def contains(self, a: Label) -> bool:
        raise NotImplementedError

    def parse_label(self, text: str) -> Label:
        raise NotImplementedError

    # -- optional -----------------------------------------------------------
    def dual(self, a: Label) -> Label | None:
        return None

    def grade(self, a: Label) -> int | None:
        return None

    def seed_labels(self) -> list[Label]:
        """Labels from which :func:`discover_labels` starts (e.g. fundamentals)."""
        return []

    def finite_labels(self) -> list[Label] | None:
        """All labels, for backends with a finite label set; ``None`` otherwise."""
        return None

    # -- derived ------------------------------------------------------------
    def check(self, a: Label) -> Label:
        if not isinstance(a, Label) or not self.contains(a):
            raise UnknownLabelError(f"{a!r} is not a label of backend {self.name}")
        return a

    def decompose(self, a: Label, b: Label) -> Rep:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.check(a)
        self.check(b)
        out = self._decompose(a, b)
        with self._lock:
            self._cache.setdefault(key, out)
        return out

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def tensor(r1: Rep, r2: Rep, backend: FusionBackend) -> Rep:
    """Tensor product of two representations (bilinear extension of fusion)."""
    acc: dict[Label, int] = {}
    for a, m in r1.items():
        for b, n in r2.items():
            for c, k in backend.decompose(a, b).items():
                acc[c] = acc.get(c, 0) + m * n * k
    return Rep(acc)


def tensor_power(r: Rep, n: int, backend: FusionBackend) -> Rep:
    if n < 0:
        raise ValueError("power must be non-negative")
    out = Rep.of(backend.unit)
    for _ in range(n):
        out = tensor(out, r, backend)
    return out


def dim_rep(r: Rep, backend: FusionBackend) -> int:
    return sum(m * backend.dim(backend.check(t)) for t, m in r.items())


def invariant_multiplicity(r: Rep, backend: FusionBackend) -> int:
    """Multiplicity of the trivial representation in ``r``."""
    return r.mult(backend.unit)


def discover_labels(backend: FusionBackend, budget: int) -> list[Label]:
    """First ``budget`` labels reachable from the unit and the backend seeds.

    Pairs are fused in order of their larger index, so the result is the
    prefix of a deterministic breadth-first closure.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    seen: list[Label] = []
    for lab in [backend.unit, *backend.seed_labels()]:
        if lab not in seen:
            seen.append(lab)
    known = set(seen)
    k = 0
    while len(seen) < budget and k < len(seen):
        for i in range(k + 1):
            pairs = [(seen[i], seen[k])] if i == k else [(seen[i], seen[k]), (seen[k], seen[i])]
            for a, b in pairs:
                try:
                    prod = backend.decompose(a, b)
                except MissingProductError:
                    continue
                for c in prod:
                    if c not in known:
                        known.add(c)
                        seen.append(c)
        k += 1
    return seen[:budget]


@dataclass
class ValidationReport:
    unit_ok: bool = True
    associativity_failures: list[tuple[Label, Label, Label]] = field(default_factory=list)
    dual_failures: list[Label] = field(default_factory=list)
    dim_failures: list[tuple[Label, Label]] = field(default_factory=list)
    checked_labels: int = 0
    skipped_triples: int = 0

    @property
    def ok(self) -> bool:
        return self.unit_ok and not (
            self.associativity_failures or self.dual_failures or self.dim_failures
        )

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "unit_ok": self.unit_ok,
            "associativity_failures": [[str(x) for x in t] for t in self.associativity_failures],
            "dual_failures": [str(x) for x in self.dual_failures],
            "dim_failures": [[str(x) for x in p] for p in self.dim_failures],
            "checked_labels": self.checked_labels,
            "skipped_triples": self.skipped_triples,
        }


def validate_backend(backend: FusionBackend, label_budget: int) -> ValidationReport:
    """Check the semiring axioms on the first ``label_budget`` discovered labels.

    Failures are collected, never raised. Triples whose products are missing
    from a truncated table are counted in ``skipped_triples``.
    """
    labels = discover_labels(backend, label_budget)
    report = ValidationReport(checked_labels=len(labels))
    unit = backend.unit

    if backend.dim(unit) != 1:
        report.unit_ok = False
    for a in labels:
        try:
            if backend.decompose(unit, a) != Rep.of(a) or backend.decompose(a, unit) != Rep.of(a):
                report.unit_ok = False
        except MissingProductError:
            report.unit_ok = False

    for a, b in itertools.product(labels, repeat=2):
        try:
            ab = backend.decompose(a, b)
        except MissingProductError:
            continue
        if backend.dim(a) * backend.dim(b) != dim_rep(ab, backend):
            report.dim_failures.append((a, b))

    for a, b, c in itertools.product(labels, repeat=3):
        try:
            left = tensor(backend.decompose(a, b), Rep.of(c), backend)
            right = tensor(Rep.of(a), backend.decompose(b, c), backend)
        except MissingProductError:
            report.skipped_triples += 1
            continue
        if left != right:
            report.associativity_failures.append((a, b, c))

    for a in labels:
        da = backend.dual(a)
        if da is None:
            continue
        bad = not backend.contains(da)
        for b in labels:
            if bad:
                break
            try:
                n = invariant_multiplicity(backend.decompose(a, b), backend)
            except MissingProductError:
                continue
            if n != (1 if b == da else 0):
                bad = True
        if bad:
            report.dual_failures.append(a)
    return report


_TERM = re.compile(r"^(?:(\d+)(?:[.*]|(?=\()))?(.+)$")


def _split_terms(text: str) -> list[str]:
    # split on '+' outside parentheses; a leading sign belongs to the label
    terms, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "+" and depth == 0 and "".join(cur).strip():
            terms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    terms.append("".join(cur))
    return [t.strip() for t in terms]


def parse_rep(text: str, backend: FusionBackend) -> Rep:
    """Parse ``"(0)+(2)"``, ``"2.(1,1) + (3,0)"`` and similar sums."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("empty representation")
    acc: dict[Label, int] = {}
    for term in _split_terms(compact):
        if not term:
            raise ValueError(f"malformed representation {text!r}")
        m = _TERM.match(term)
        coeff = int(m.group(1)) if m.group(1) else 1
        label = backend.parse_label(m.group(2))
        acc[label] = acc.get(label, 0) + coeff
    rep = Rep(acc)
    if rep.is_zero():
        raise ValueError(f"representation {text!r} is zero")
    return rep


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TriState:
    """Outcome of a budgeted check.

    ``HOLDS`` carries a checkable witness, ``FAILS`` a reason (and possibly a
    counterexample as witness), ``UNKNOWN`` the budget that was exhausted.
    """

    status: Status
    witness: Any = None
    reason: str | None = None
    budget: int | None = None

    @classmethod
    def holds(cls, witness=None, budget=None) -> TriState:
        return cls(Status.HOLDS, witness, None, budget)

    @classmethod
    def fails(cls, reason: str, witness=None, budget=None) -> TriState:
        return cls(Status.FAILS, witness, reason, budget)

    @classmethod
    def unknown(cls, budget: int, reason: str | None = None) -> TriState:
        return cls(Status.UNKNOWN, None, reason, budget)

    def __bool__(self) -> bool:
        return self.status is Status.HOLDS

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "witness": _jsonable(self.witness), "budget": self.budget}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def _jsonable(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (Label, Rep)):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return str(x)
