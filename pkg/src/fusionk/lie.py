"""Builtin fusion backends: SU(2), SU(N), U(1) and the one-label trivial group."""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from math import prod

from .core import FusionBackend, Label, Rep
from .errors import UnknownLabelError


# -- partitions and Littlewood-Richardson ----------------------------------

def dynkin_to_partition(weight: tuple[int, ...]) -> tuple[int, ...]:
    """``(a_1, ..., a_{N-1})`` to the partition ``lambda_i = sum_{j>=i} a_j``."""
    parts, acc = [], 0
    for a in reversed(weight):
        acc += a
        parts.append(acc)
    return tuple(reversed(parts))


def partition_to_dynkin(parts: tuple[int, ...], n: int) -> tuple[int, ...]:
    """Partition with at most ``n`` rows to SU(n) Dynkin labels (full columns stripped)."""
    if len(parts) > n:
        raise ValueError(f"partition {parts} has more than {n} rows")
    padded = list(parts) + [0] * (n - len(parts))
    return tuple(padded[i] - padded[i + 1] for i in range(n - 1))


def _strip(parts) -> tuple[int, ...]:
    return tuple(p for p in parts if p)


def lr_coefficients(lam, mu, max_rows: int | None = None) -> Counter:
    """Littlewood-Richardson coefficients ``c^nu_{lam,mu}`` by tableau enumeration.

    Letters ``1..len(mu)`` are added one value at a time as horizontal strips
    on top of ``lam``. The reverse reading word (rows top to bottom, right to
    left) must be a lattice word; for a strip of letter ``k`` that reduces to
    ``#k in rows <= r  <=  #(k-1) in rows < r`` for every row ``r``.
    Shapes with more than ``max_rows`` rows are pruned.
    """
    lam = _strip(lam)
    mu = _strip(mu)
    rows_cap = max_rows if max_rows is not None else len(lam) + len(mu)
    if len(lam) > rows_cap:
        return Counter()
    out: Counter = Counter()

    def add_letter(k: int, shape: list[int], prev_counts: list[int]) -> None:
        # prev_counts[r]: how many letters k-1 sit in row r
        if k == len(mu):
            out[_strip(shape)] += 1
            return
        size = mu[k]
        nrows = min(len(shape) + 1, rows_cap)
        base = shape + [0] * (nrows - len(shape))
        placed = [0] * nrows

        def fill(r: int, remaining: int, cum_k: int, cum_prev: int) -> None:
            if remaining == 0:
                new_shape = [base[i] + placed[i] for i in range(nrows)]
                add_letter(k + 1, _trim(new_shape), placed[:])
                return
            if r >= nrows:
                return
            cap = remaining if r == 0 else min(remaining, base[r - 1] - base[r])
            if k > 0:
                # lattice bound: cum_k + x <= cum_prev (letters k-1 strictly above row r)
                cap = min(cap, cum_prev - cum_k)
            nxt_prev = cum_prev + (prev_counts[r] if k > 0 and r < len(prev_counts) else 0)
            for x in range(cap, -1, -1):
                placed[r] = x
                fill(r + 1, remaining - x, cum_k + x, nxt_prev)
            placed[r] = 0

        fill(0, size, 0, 0)

    add_letter(0, list(lam), [])
    return out


def _trim(shape: list[int]) -> list[int]:
    while shape and shape[-1] == 0:
        shape = shape[:-1]
    return shape


def weyl_dim(weight: tuple[int, ...], n: int) -> int:
    """Dimension of the SU(n) irreducible with Dynkin labels ``weight``.

    Product over positive roots ``e_i - e_j`` of
    ``(lambda_i - lambda_j + j - i) / (j - i)`` in exact rationals.
    """
    if len(weight) != n - 1:
        raise ValueError(f"SU({n}) weight needs {n - 1} entries, got {weight}")
    lam = list(dynkin_to_partition(weight)) + [0]
    value = prod(
        (Fraction(lam[i] - lam[j] + j - i, j - i) for i in range(n) for j in range(i + 1, n)),
        start=Fraction(1),
    )
    if value.denominator != 1:
        raise AssertionError(f"non-integral Weyl dimension {value} for {weight}")
    return int(value)


# -- backends --------------------------------------------------------------

_INT_TUPLE = re.compile(r"^\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)?$")


def _parse_ints(text: str) -> tuple[int, ...]:
    m = _INT_TUPLE.match(text.strip())
    if not m or m.group(1) is None:
        raise UnknownLabelError(f"cannot parse label {text!r}")
    return tuple(int(x) for x in m.group(1).split(","))


class SU2Backend(FusionBackend):
    """Clebsch-Gordan rules; ``(n)`` is the irreducible of dimension ``n + 1``."""

    name = "su2"
    grade_modulus = 2

    def __init__(self) -> None:
        super().__init__()
        self.unit = self.label(0)

    @staticmethod
    def label(n: int) -> Label:
        return Label((n,), f"({n})")

    def contains(self, a: Label) -> bool:
        return len(a.key) == 1 and isinstance(a.key[0], int) and a.key[0] >= 0

    def parse_label(self, text: str) -> Label:
        vals = _parse_ints(text)
        if len(vals) != 1 or vals[0] < 0:
            raise UnknownLabelError(f"not an SU(2) label: {text!r}")
        return self.label(vals[0])

    def _decompose(self, a: Label, b: Label) -> Rep:
        k, l = a.key[0], b.key[0]
        return Rep({self.label(j): 1 for j in range(abs(k - l), k + l + 1, 2)})

    def dim(self, a: Label) -> int:
        return a.key[0] + 1

    def dual(self, a: Label) -> Label:
        return a

    def grade(self, a: Label) -> int:
        return a.key[0] % 2

    def seed_labels(self) -> list[Label]:
        return [self.label(1)]


class SUNBackend(FusionBackend):
    """SU(N) via Littlewood-Richardson; labels are Dynkin tuples ``(a_1, ..., a_{N-1})``."""

    def __init__(self, n: int) -> None:
        if n < 2:
            raise ValueError("SU(N) needs N >= 2")
        super().__init__()
        self.n = n
        self.name = f"su{n}"
        self.grade_modulus = n
        self.unit = self.label((0,) * (n - 1))

    def label(self, weight) -> Label:
        weight = tuple(int(x) for x in weight)
        return Label(weight, "(" + ",".join(map(str, weight)) + ")")

    def contains(self, a: Label) -> bool:
        return (
            len(a.key) == self.n - 1
            and all(isinstance(x, int) and x >= 0 for x in a.key)
        )

    def parse_label(self, text: str) -> Label:
        vals = _parse_ints(text)
        if len(vals) != self.n - 1 or min(vals) < 0:
            raise UnknownLabelError(f"not an SU({self.n}) label: {text!r}")
        return self.label(vals)

    def _decompose(self, a: Label, b: Label) -> Rep:
        lam, mu = dynkin_to_partition(a.key), dynkin_to_partition(b.key)
        # c^nu_{lam,mu} is symmetric; enumerating over the smaller content is cheaper
        if sum(mu) > sum(lam):
            lam, mu = mu, lam
        coeffs = lr_coefficients(lam, mu, max_rows=self.n)
        acc: dict[Label, int] = {}
        for nu, c in coeffs.items():
            lab = self.label(partition_to_dynkin(nu, self.n))
            acc[lab] = acc.get(lab, 0) + c
        return Rep(acc)

    def dim(self, a: Label) -> int:
        return weyl_dim(a.key, self.n)

    def dual(self, a: Label) -> Label:
        return self.label(tuple(reversed(a.key)))

    def grade(self, a: Label) -> int:
        return sum((i + 1) * x for i, x in enumerate(a.key)) % self.n

    def seed_labels(self) -> list[Label]:
        return [self.label(tuple(int(i == j) for j in range(self.n - 1))) for i in range(self.n - 1)]


class U1Backend(FusionBackend):
    """Characters ``z -> z^n`` of the circle; fusion is addition."""

    name = "u1"
    grade_modulus = 0

    def __init__(self) -> None:
        super().__init__()
        self.unit = self.label(0)

    @staticmethod
    def label(n: int) -> Label:
        return Label((n,), f"n={n}")

    def contains(self, a: Label) -> bool:
        return len(a.key) == 1 and isinstance(a.key[0], int)

    def parse_label(self, text: str) -> Label:
        t = text.strip()
        if t.startswith("(") and t.endswith(")"):
            t = t[1:-1].strip()
        if t.startswith("n="):
            t = t[2:]
        try:
            return self.label(int(t))
        except ValueError:
            raise UnknownLabelError(f"not a U(1) label: {text!r}") from None

    def _decompose(self, a: Label, b: Label) -> Rep:
        return Rep.of(self.label(a.key[0] + b.key[0]))

    def dim(self, a: Label) -> int:
        return 1

    def dual(self, a: Label) -> Label:
        return self.label(-a.key[0])

    def grade(self, a: Label) -> int:
        return a.key[0]

    def seed_labels(self) -> list[Label]:
        return [self.label(1), self.label(-1)]


class TrivialBackend(FusionBackend):
    """The trivial group: a single label ``ε``. With ``α = d·ε`` the fixed points are all of O_d."""

    name = "trivial"
    grade_modulus = 1

    def __init__(self, d: int = 1) -> None:
        super().__init__()
        self.d = d
        self.unit = Label((), "ε")

    def contains(self, a: Label) -> bool:
        return a.key == ()

    def parse_label(self, text: str) -> Label:
        if text.strip().strip("()") in ("ε", "e", "eps", "epsilon", "0", ""):
            return self.unit
        raise UnknownLabelError(f"the trivial group has only ε, got {text!r}")

    def _decompose(self, a: Label, b: Label) -> Rep:
        return Rep.of(self.unit)

    def dim(self, a: Label) -> int:
        return 1

    def dual(self, a: Label) -> Label:
        return a

    def grade(self, a: Label) -> int:
        return 0

    def default_alpha(self) -> Rep:
        return Rep.of(self.unit, self.d)


def backend_from_spec(spec: str) -> FusionBackend:
    """Build a builtin backend from ``su2``, ``su<N>``, ``u1`` or ``trivial:<d>``."""
    s = spec.strip().lower()
    if s == "su2":
        return SU2Backend()
    if s == "u1":
        return U1Backend()
    m = re.fullmatch(r"su(\d+)", s)
    if m:
        return SUNBackend(int(m.group(1)))
    m = re.fullmatch(r"trivial(?::(\d+))?", s)
    if m:
        d = int(m.group(1) or 1)
        if d < 1:
            raise ValueError("trivial:<d> needs d >= 1")
        return TrivialBackend(d)
    raise ValueError(f"unknown backend {spec!r}")
