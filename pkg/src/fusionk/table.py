"""Fusion tables read from JSON, and checks that two backends share fusion rules."""

from __future__ import annotations

import itertools
import json
import re
from functools import lru_cache
from importlib import resources
from typing import Callable, Mapping

import jsonschema

from .core import (
    FusionBackend,
    Label,
    Rep,
    TriState,
    discover_labels,
    validate_backend,
)
from .errors import MissingProductError, SchemaError, UnknownLabelError, ValidationFailed


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("fusionk.schemas").joinpath(f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def natural_key(text: str) -> tuple:
    """Sort key treating digit runs as integers, so ``(10)`` sorts after ``(9)``."""
    chunks = tuple(
        (0, int(tok)) if tok.isdigit() else (1, tok) for tok in re.findall(r"\d+|\D+", text)
    )
    return (chunks, text)


class TableBackend(FusionBackend):
    """Backend answering products by table lookup.

    The table may be truncated: pairs without an entry raise
    :class:`MissingProductError`.
    """

    def __init__(
        self,
        name: str,
        unit: str,
        dims: Mapping[str, int],
        products: Mapping[tuple[str, str], Mapping[str, int]],
        duals: Mapping[str, str] | None = None,
    ) -> None:
        super().__init__()
        self.name = name
        self._labels = {i: Label(natural_key(i), i) for i in dims}
        if unit not in self._labels:
            raise SchemaError(f"unit {unit!r} is not among the labels")
        self.unit = self._labels[unit]
        self._dims = {self._labels[i]: int(d) for i, d in dims.items()}
        self._duals = {self._labels[i]: self._labels[j] for i, j in (duals or {}).items()}
        self._products: dict[tuple[Label, Label], Rep] = {}
        for (a, b), out in products.items():
            key = (self._labels[a], self._labels[b])
            self._products[key] = Rep({self._labels[c]: m for c, m in out.items()})

    def label(self, ident: str) -> Label:
        try:
            return self._labels[ident]
        except KeyError:
            raise UnknownLabelError(f"{ident!r} is not a label of table {self.name}") from None

    def contains(self, a: Label) -> bool:
        return self._labels.get(a.name) == a

    def parse_label(self, text: str) -> Label:
        return self.label(text.strip())

    def _decompose(self, a: Label, b: Label) -> Rep:
        try:
            return self._products[(a, b)]
        except KeyError:
            raise MissingProductError(f"table {self.name} has no product {a} x {b}") from None

    def dim(self, a: Label) -> int:
        return self._dims[a]

    def dual(self, a: Label) -> Label | None:
        return self._duals.get(a)

    def seed_labels(self) -> list[Label]:
        return sorted(self._labels.values())

    def finite_labels(self) -> list[Label]:
        return sorted(self._labels.values())


def _ref(ids: set[str], ident: str, where: str) -> str:
    if ident not in ids:
        raise SchemaError(f"{where} refers to unknown label {ident!r}")
    return ident


def parse_fusion_table(document: bytes | str | dict, *, validate: bool = True) -> TableBackend:
    """Build a :class:`TableBackend` from a fusion-table JSON document.

    The document is checked against the shipped schema; then the semiring
    axioms are verified on every label and any failure aborts ingestion.
    """
    if isinstance(document, (bytes, str)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    else:
        doc = document
    try:
        jsonschema.validate(doc, load_schema("fusion_table"))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"fusion table schema violation: {exc.message}") from exc

    dims: dict[str, int] = {}
    duals: dict[str, str] = {}
    for entry in doc["labels"]:
        if entry["id"] in dims:
            raise SchemaError(f"duplicate label {entry['id']!r}")
        dims[entry["id"]] = int(entry["dim"])
    ids = set(dims)
    for entry in doc["labels"]:
        if "dual" in entry:
            duals[entry["id"]] = _ref(ids, entry["dual"], f"dual of {entry['id']}")
    products: dict[tuple[str, str], dict[str, int]] = {}
    for row in doc["products"]:
        pair = (_ref(ids, row["a"], "product"), _ref(ids, row["b"], "product"))
        if pair in products:
            raise SchemaError(f"duplicate product {pair}")
        out: dict[str, int] = {}
        for term in row["out"]:
            c = _ref(ids, term["c"], f"product {pair}")
            out[c] = out.get(c, 0) + int(term["mult"])
        products[pair] = out

    backend = TableBackend(doc["name"], doc["unit"], dims, products, duals)
    if validate:
        report = validate_backend(backend, len(dims))
        if not report.ok:
            if not report.unit_ok:
                detail = "unit axiom fails (missing or wrong unit row)"
            elif report.associativity_failures:
                a, b, c = report.associativity_failures[0]
                detail = f"non-associative triple ({a}, {b}, {c})"
            elif report.dim_failures:
                a, b = report.dim_failures[0]
                detail = f"dimension mismatch on ({a}, {b})"
            else:
                detail = f"dual condition fails at {report.dual_failures[0]}"
            raise ValidationFailed(f"table {doc['name']!r} rejected: {detail}", report)
    return backend


def dump_fusion_table(backend: FusionBackend, labels: list[Label], name: str | None = None) -> dict:
    """Serialise ``backend`` restricted to ``labels``.

    A pair is written only when all of its constituents are among ``labels``,
    so the dump is a consistent truncation.
    """
    keep = set(labels)
    doc_labels = []
    for lab in labels:
        entry = {"id": str(lab), "dim": str(backend.dim(lab))}
        d = backend.dual(lab)
        if d is not None and d in keep:
            entry["dual"] = str(d)
        doc_labels.append(entry)
    products = []
    for a, b in itertools.product(labels, repeat=2):
        try:
            prod = backend.decompose(a, b)
        except MissingProductError:
            continue
        if all(c in keep for c in prod):
            products.append(
                {"a": str(a), "b": str(b), "out": [{"c": str(c), "mult": str(m)} for c, m in prod.items()]}
            )
    return {"name": name or backend.name, "unit": str(backend.unit), "labels": doc_labels, "products": products}


def verify_fusion_isomorphism(
    b1: FusionBackend,
    b2: FusionBackend,
    mapping: Mapping[Label, Label] | Callable[[Label], Label],
    budget: int,
) -> TriState:
    """Check that ``mapping`` is a fusion-rule isomorphism on the labels of ``b1`` within budget.

    Pairs missing from a truncated table on either side are skipped. The
    answer is never UNKNOWN: the window is checked exhaustively and the budget
    is recorded with the verdict.
    """
    lookup = mapping.get if isinstance(mapping, Mapping) else mapping

    def f(x: Label) -> Label:
        y = lookup(x)
        if y is None:
            raise UnknownLabelError(f"mapping is undefined on {x}")
        return b2.check(y)

    labels = discover_labels(b1, budget)
    images = {x: f(x) for x in labels}
    if f(b1.unit) != b2.unit:
        return TriState.fails("unit is not sent to unit", witness=(b1.unit, f(b1.unit)), budget=budget)
    seen: dict[Label, Label] = {}
    for x, y in images.items():
        if y in seen:
            return TriState.fails("mapping is not injective", witness=(seen[y], x), budget=budget)
        seen[y] = x
    checked = 0
    for a, b in itertools.product(labels, repeat=2):
        try:
            left = b1.decompose(a, b)
            right = b2.decompose(images[a], images[b])
        except MissingProductError:
            continue
        if Rep({f(c): m for c, m in left.items()}) != right:
            return TriState.fails("mapping does not commute with fusion", witness=(a, b), budget=budget)
        checked += 1
    return TriState.holds(witness={"labels": len(labels), "pairs": checked}, budget=budget)
