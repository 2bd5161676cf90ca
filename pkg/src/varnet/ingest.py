"""Catalog ingestion: parse dataset metadata, normalize variable labels, sample.

A catalog is a list of dataset records, each carrying the set of variable
labels it declares. The inverted index (label -> dataset ids) is built once
and is what the network builder walks.
"""

from __future__ import annotations

import csv
import io
import json
import random
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping

_WS = re.compile(r"\s+")


class CatalogError(ValueError):
    """Raised for malformed catalog input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def normalize_label(raw: str) -> str:
    """Canonical form of a variable label.

    NFC, case fold, collapse internal whitespace runs, trim. Raises
    :class:`CatalogError` if nothing is left.
    """
    s = unicodedata.normalize("NFC", raw)
    # casefold can denormalize a handful of code points; renormalize after it
    s = unicodedata.normalize("NFC", s.casefold())
    s = _WS.sub(" ", s).strip()
    if not s:
        raise CatalogError(f"empty variable label {raw!r}")
    return s


def _clean_label(raw: str, normalize: bool) -> str:
    if normalize:
        return normalize_label(raw)
    if not raw.strip():
        raise CatalogError(f"empty variable label {raw!r}")
    return raw


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    variables: tuple[str, ...]
    title: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise CatalogError("dataset id must be nonempty")
        if len(set(self.variables)) != len(self.variables):
            raise CatalogError(f"dataset {self.id!r} has duplicate variables")
        if any(not v for v in self.variables):
            raise CatalogError(f"dataset {self.id!r} has an empty variable label")

    @classmethod
    def from_raw(
        cls, id: str, labels: Iterable[str], title: str | None = None, normalize: bool = True
    ) -> DatasetRecord:
        """Build a record from raw labels, merging duplicates in first-seen order."""
        seen: dict[str, None] = {}
        for raw in labels:
            seen.setdefault(_clean_label(raw, normalize), None)
        return cls(id=id, variables=tuple(seen), title=title)


@dataclass(frozen=True)
class Catalog:
    """Immutable collection of records with a label -> dataset-id index."""

    records: tuple[DatasetRecord, ...] = ()
    index: Mapping[str, frozenset[str]] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        index: dict[str, set[str]] = {}
        for rec in self.records:
            if rec.id in seen:
                raise CatalogError(f"duplicate dataset id {rec.id!r}")
            seen.add(rec.id)
            for v in rec.variables:
                index.setdefault(v, set()).add(rec.id)
        object.__setattr__(self, "index", {v: frozenset(ids) for v, ids in index.items()})

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def canonical(self) -> Catalog:
        """Records sorted by id, each record's variables sorted."""
        return Catalog(
            tuple(
                DatasetRecord(r.id, tuple(sorted(r.variables)), r.title)
                for r in sorted(self.records, key=lambda r: r.id)
            )
        )


@dataclass(frozen=True)
class CatalogStats:
    total_data: int
    total_variables: int
    variable_types: int
    max_variables: int
    min_variables: int

    def to_dict(self) -> dict[str, int]:
        return {
            "total_data": self.total_data,
            "total_variables": self.total_variables,
            "variable_types": self.variable_types,
            "max_variables": self.max_variables,
            "min_variables": self.min_variables,
        }


def _record_from_obj(obj: object, line: int, normalize: bool) -> DatasetRecord:
    if not isinstance(obj, dict):
        raise CatalogError("record must be a JSON object", line)
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise CatalogError('missing or non-string "id"', line)
    labels = obj.get("variables")
    if not isinstance(labels, list) or not all(isinstance(v, str) for v in labels):
        raise CatalogError('missing "variables" array of strings', line)
    if not labels:
        raise CatalogError(f"dataset {rid!r} has an empty variable list", line)
    title = obj.get("title")
    if title is not None and not isinstance(title, str):
        raise CatalogError('"title" must be a string', line)
    try:
        return DatasetRecord.from_raw(rid, labels, title, normalize)
    except CatalogError as exc:
        raise CatalogError(str(exc), line) from None


def _assemble(records: list[DatasetRecord], lines: list[int]) -> Catalog:
    seen: dict[str, int] = {}
    for rec, line in zip(records, lines):
        if rec.id in seen:
            raise CatalogError(f"duplicate dataset id {rec.id!r} (first seen on line {seen[rec.id]})", line)
        seen[rec.id] = line
    return Catalog(tuple(records))


def parse_jsonl(stream: Iterable[str], normalize: bool = True) -> Catalog:
    """Parse JSON-Lines records ``{"id", "variables", "title"?}``; blank lines are skipped."""
    records: list[DatasetRecord] = []
    lines: list[int] = []
    for lineno, text in enumerate(stream, start=1):
        if not text.strip():
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"invalid JSON: {exc.msg}", lineno) from None
        records.append(_record_from_obj(obj, lineno, normalize))
        lines.append(lineno)
    return _assemble(records, lines)


def parse_csv(stream: str | Iterable[str], normalize: bool = True) -> Catalog:
    """Parse CSV with header ``id,variables[,title]``; variables are ``;``-separated."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        return Catalog()
    cols = [h.strip() for h in header]
    if "id" not in cols or "variables" not in cols:
        raise CatalogError('CSV header must contain "id" and "variables"', 1)
    i_id, i_vars = cols.index("id"), cols.index("variables")
    i_title = cols.index("title") if "title" in cols else None

    records: list[DatasetRecord] = []
    lines: list[int] = []
    for row in reader:
        lineno = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < len(cols):
            raise CatalogError(f"expected {len(cols)} fields, got {len(row)}", lineno)
        rid = row[i_id].strip()
        if not rid:
            raise CatalogError('empty "id"', lineno)
        labels = [v for v in row[i_vars].split(";") if v.strip()]
        if not labels:
            raise CatalogError(f"dataset {rid!r} has an empty variable list", lineno)
        title = row[i_title] if i_title is not None and row[i_title] else None
        try:
            records.append(DatasetRecord.from_raw(rid, labels, title, normalize))
        except CatalogError as exc:
            raise CatalogError(str(exc), lineno) from None
        lines.append(lineno)
    return _assemble(records, lines)


def dump_jsonl(catalog: Catalog, canonical: bool = True) -> str:
    """Serialize to JSON-Lines. Canonical output sorts records and variables."""
    if canonical:
        catalog = catalog.canonical()
    out = []
    for rec in catalog.records:
        obj: dict[str, object] = {"id": rec.id}
        if rec.title is not None:
            obj["title"] = rec.title
        obj["variables"] = list(rec.variables)
        out.append(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    return "".join(out)


def dump_csv(catalog: Catalog, canonical: bool = True) -> str:
    """Serialize to the ``id,variables[,title]`` CSV layout read by :func:`parse_csv`."""
    if canonical:
        catalog = catalog.canonical()
    with_title = any(r.title is not None for r in catalog.records)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "variables", "title"] if with_title else ["id", "variables"])
    for rec in catalog.records:
        row = [rec.id, ";".join(rec.variables)]
        if with_title:
            row.append(rec.title or "")
        w.writerow(row)
    return buf.getvalue()


def sample(catalog: Catalog, n: int, seed: int) -> Catalog:
    """Uniform sample of ``n`` records without replacement, kept in catalog order."""
    if not 0 <= n <= len(catalog):
        raise CatalogError(f"sample size {n} outside [0, {len(catalog)}]")
    picked = sorted(random.Random(seed).sample(range(len(catalog)), n))
    return Catalog(tuple(catalog.records[i] for i in picked))


def catalog_stats(catalog: Catalog) -> CatalogStats:
    sizes = [len(r.variables) for r in catalog.records]
    return CatalogStats(
        total_data=len(sizes),
        total_variables=sum(sizes),
        variable_types=len(catalog.index),
        max_variables=max(sizes, default=0),
        min_variables=min(sizes, default=0),
    )
