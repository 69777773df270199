"""Catalog of newform orbits: parsing, canonical serialization and counting queries."""

from __future__ import annotations

import bisect
import csv
import io
import threading
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .. import ParseError, ValidationError
from ..arith.primes import RANGE_HI, RANGE_LO, prime_table
from .coefficients import CoefficientTable, parse_coefficients
from .records import (
    DISC_DEGREE,
    LARGE,
    NewformRecord,
    Subfield,
    format_poly,
    parse_poly,
    validate_record,
)

HEADER = ("level", "orbit", "degree", "disc", "al_sign", "field_poly")
SUBFIELD_HEADER = ("level", "orbit", "subfield_poly", "embedding")


class CoefficientStore:
    """Lazily loads ``{level}.{orbit}.txt`` files from a directory; thread-safe."""

    def __init__(self, directory: str | Path | None, loader: Callable | None = None):
        self.directory = Path(directory) if directory is not None else None
        self._loader = loader
        self._cache: dict[tuple[int, int], CoefficientTable] = {}
        self._lock = threading.Lock()

    def path_for(self, key: tuple[int, int]) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"{key[0]}.{key[1]}.txt"

    def get(self, rec: NewformRecord) -> CoefficientTable | None:
        if rec.is_large:
            return None
        with self._lock:
            if rec.key in self._cache:
                return self._cache[rec.key]
            table = None
            if self._loader is not None:
                table = self._loader(rec)
            else:
                path = self.path_for(rec.key)
                if path is not None and path.exists():
                    table = parse_coefficients(path, rec.key, rec.degree)
            if table is not None:
                self._cache[rec.key] = table
            return table

    def put(self, table: CoefficientTable) -> None:
        with self._lock:
            self._cache[table.owner] = table


@dataclass
class Catalog:
    """Immutable, (level, orbit)-ordered collection of newform orbit records."""

    records: tuple[NewformRecord, ...]
    coefficients: CoefficientStore = field(default_factory=lambda: CoefficientStore(None), repr=False)
    provenance: str = ""

    def __post_init__(self):
        recs = tuple(sorted(self.records, key=lambda r: r.key))
        seen = set()
        for r in recs:
            if r.key in seen:
                raise ValidationError(f"duplicate record level={r.level} orbit={r.orbit}")
            seen.add(r.key)
        self.records = recs
        self._levels = [r.level for r in recs]
        self._by_key = {r.key: r for r in recs}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[NewformRecord]:
        return iter(self.records)

    def get(self, level: int, orbit: int) -> NewformRecord:
        return self._by_key[(level, orbit)]

    def coefficient_table(self, rec: NewformRecord) -> CoefficientTable | None:
        return self.coefficients.get(rec)

    def query(
        self,
        degree: int | str | None = None,
        disc: int | None = None,
        sign: int | None = None,
        below: float | None = None,
        above: float | None = None,
        include_large: bool = False,
    ) -> list[NewformRecord]:
        """Records with ``above < level < below`` matching every given filter."""
        lo = 0 if above is None else bisect.bisect_right(self._levels, above)
        hi = len(self.records) if below is None else bisect.bisect_left(self._levels, below)
        out = []
        for r in self.records[lo:hi]:
            if r.is_large and not (include_large or degree == LARGE):
                continue
            if degree is not None and r.degree != degree:
                continue
            if disc is not None and r.disc != disc:
                continue
            if sign is not None and r.al_sign != sign:
                continue
            out.append(r)
        return out


# ---- parsing and serialization -------------------------------------------------


def _parse_row(row: list[str], lineno: int, path) -> NewformRecord:
    if len(row) != len(HEADER):
        raise ParseError(f"{path}:{lineno}: expected {len(HEADER)} fields, got {len(row)}")
    level_s, orbit_s, degree_s, disc_s, sign_s, poly_s = row
    try:
        level = int(level_s)
        orbit = int(orbit_s)
        sign = int(sign_s)
        if degree_s == LARGE:
            degree: int | str = LARGE
            disc = int(disc_s) if disc_s else None
            poly = parse_poly(poly_s) if poly_s else None
        else:
            degree = int(degree_s)
            disc = int(disc_s)
            poly = parse_poly(poly_s)
    except ValueError as exc:
        raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return NewformRecord(level, orbit, degree, disc, sign, poly)


def parse_catalog_text(
    text: str,
    source: str = "<string>",
    coefficients_dir: str | Path | None = None,
    subfields: dict[tuple[int, int], tuple[Subfield, ...]] | None = None,
    check_fields: bool = True,
) -> Catalog:
    if not text.strip():
        return Catalog((), CoefficientStore(coefficients_dir), source)
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(h.strip() for h in header) != HEADER:
        raise ParseError(f"{source}:1: header must be {','.join(HEADER)}")
    records = []
    field_ok: set[tuple] = set()
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        rec = _parse_row(row, lineno, source)
        if subfields and rec.key in subfields:
            rec = NewformRecord(rec.level, rec.orbit, rec.degree, rec.disc, rec.al_sign, rec.field_poly,
                                subfields[rec.key])
        # Field checks are expensive and depend only on (poly, disc).
        key = (rec.field_poly, rec.disc)
        validate_record(rec, check_field=check_fields and key not in field_ok)
        field_ok.add(key)
        records.append(rec)
    return Catalog(tuple(records), CoefficientStore(coefficients_dir), source)


def parse_catalog(
    path: str | Path,
    coefficients_dir: str | Path | None = None,
    subfields_path: str | Path | None = None,
    check_fields: bool = True,
) -> Catalog:
    """Read a catalog CSV (header ``level,orbit,degree,disc,al_sign,field_poly``)."""
    path = Path(path)
    subfields = parse_subfields(subfields_path) if subfields_path else None
    return parse_catalog_text(path.read_text(encoding="utf-8"), str(path), coefficients_dir, subfields, check_fields)


def format_catalog(catalog: Catalog | Iterable[NewformRecord]) -> str:
    """Canonical CSV text: header, then one line per record sorted by (level, orbit), LF endings."""
    recs = catalog.records if isinstance(catalog, Catalog) else sorted(catalog, key=lambda r: r.key)
    lines = [",".join(HEADER)]
    for r in recs:
        disc = "" if r.disc is None else str(r.disc)
        poly = "" if r.field_poly is None else format_poly(r.field_poly)
        lines.append(f"{r.level},{r.orbit},{r.degree},{disc},{r.al_sign},{poly}")
    return "\n".join(lines) + "\n"


def write_catalog(catalog: Catalog, path: str | Path) -> None:
    Path(path).write_text(format_catalog(catalog), encoding="utf-8", newline="\n")


def _parse_embedding(text: str) -> tuple[list[int], int]:
    """``"e0;e1;...;ek"`` optionally followed by ``/den``."""
    den = 1
    if "/" in text:
        text, den_s = text.rsplit("/", 1)
        den = int(den_s)
        if den <= 0:
            raise ValueError("embedding denominator must be positive")
    return [int(t) for t in text.split(";")], den


def parse_subfields(path: str | Path) -> dict[tuple[int, int], tuple[Subfield, ...]]:
    """Sidecar CSV ``level,orbit,subfield_poly,embedding``.

    ``embedding`` is the row-major matrix (subfield degree x field degree) of
    the images of the subfield power basis, with an optional ``/den`` suffix.
    """
    out: dict[tuple[int, int], list[Subfield]] = defaultdict(list)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return {}
        if tuple(h.strip() for h in header) != SUBFIELD_HEADER:
            raise ParseError(f"{path}:1: header must be {','.join(SUBFIELD_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                level, orbit, poly_s, emb_s = row
                poly = parse_poly(poly_s)
                flat, den = _parse_embedding(emb_s)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            m = len(poly) - 1
            if m <= 0 or len(flat) % m:
                raise ParseError(f"{path}:{lineno}: embedding size {len(flat)} not a multiple of {m}")
            n = len(flat) // m
            rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m))
            out[(int(level), int(orbit))].append(Subfield(poly, rows, den))
    return {k: tuple(v) for k, v in out.items()}


# ---- counting statistics ---------------------------------------------------------


def count(
    catalog: Catalog,
    degree: int | None = None,
    disc: int | None = None,
    sign: int | None = None,
    X: float = RANGE_HI,
    lower: float | None = None,
) -> int:
    """Number of records with ``lower < level < X`` matching the filters."""
    if X < 2:
        raise ValueError("X must be >= 2")
    return len(catalog.query(degree=degree, disc=disc, sign=sign, below=X, above=lower))


def counts_by_prime(catalog: Catalog, disc: int, lo: int = RANGE_LO, hi: int = RANGE_HI) -> tuple[np.ndarray, np.ndarray]:
    """``(primes, k)`` with ``k[i]`` the number of orbits of discriminant ``disc`` at ``primes[i]``."""
    ps = prime_table(max(hi, 2)).between(lo, hi)
    k = np.zeros(len(ps), dtype=np.int64)
    deg = DISC_DEGREE.get(disc)
    for r in catalog.query(degree=deg, disc=disc, below=hi, above=lo):
        i = np.searchsorted(ps, r.level)
        if i < len(ps) and ps[i] == r.level:
            k[i] += 1
    return ps, k


def q_count(catalog: Catalog, disc: int, k: int | None = None) -> int | dict[int, int]:
    """Number of range primes carrying exactly ``k`` orbits of discriminant ``disc``.

    With ``k=None`` returns the full ``{k: Q}`` map (every prime counted once).
    """
    if disc not in DISC_DEGREE:
        raise ValueError(f"unknown discriminant {disc}")
    _, ks = counts_by_prime(catalog, disc)
    hist = Counter(int(v) for v in ks)
    if k is None:
        return dict(sorted(hist.items()))
    return hist.get(int(k), 0)


@dataclass(frozen=True)
class SignImbalance:
    degree: int
    value: int
    levels: np.ndarray
    series: np.ndarray  # Delta_d(X_i) - Delta_d(lower) just after each level X_i


def sign_imbalance(
    catalog: Catalog,
    d: int,
    X: float = RANGE_HI,
    lower: float = RANGE_LO,
    exclude: Callable[[NewformRecord], bool] | None = None,
) -> SignImbalance:
    """``C_{d,+} - C_{d,-}`` over ``lower < level < X`` plus its running series."""
    recs = catalog.query(degree=d, below=X, above=lower)
    if exclude is not None:
        recs = [r for r in recs if not exclude(r)]
    levels = np.array([r.level for r in recs], dtype=np.int64)
    steps = np.array([r.al_sign for r in recs], dtype=np.int64)
    series = np.cumsum(steps) if len(steps) else np.zeros(0, np.int64)
    return SignImbalance(d, int(steps.sum()) if len(steps) else 0, levels, series)


def growth_series(catalog: Catalog, degree: int | None = None, disc: int | None = None,
                  points: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """``(X, C(X))`` with C counting levels < X; by default evaluated just after each level."""
    levels = [r.level for r in catalog.query(degree=degree, disc=disc)]
    if points is None:
        uniq = sorted(set(levels))
        return [(lv + 1, bisect.bisect_left(levels, lv + 1)) for lv in uniq]
    return [(int(x), bisect.bisect_left(levels, x)) for x in points]


# ---- reconciliation against elliptic-curve lists ------------------------------------


@dataclass(frozen=True)
class ReconciliationReport:
    orphan_curves: tuple[int, ...]  # conductors with a curve but no matching record
    orphan_forms: tuple[tuple[int, int], ...]  # (level, orbit) of unmatched degree-1 records
    sign_mismatches: tuple[int, ...]  # levels where a curve and a record disagree on sign

    @property
    def empty(self) -> bool:
        return not (self.orphan_curves or self.orphan_forms or self.sign_mismatches)


def parse_curves(path: str | Path) -> list[tuple[int, int]]:
    """CSV ``conductor,root_number[,index]``; duplicate (conductor, index) is an error."""
    out = []
    seen = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        cols = [h.strip() for h in header]
        if cols[:2] != ["conductor", "root_number"]:
            raise ParseError(f"{path}:1: header must start with conductor,root_number")
        has_index = len(cols) > 2 and cols[2] == "index"
        per_level: Counter = Counter()
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                cond, rn = int(row[0]), int(row[1])
                idx = int(row[2]) if has_index else per_level[cond]
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            per_level[cond] += 1
            if (cond, idx) in seen:
                raise ValidationError(f"{path}:{lineno}: duplicate curve conductor={cond} index={idx}")
            if rn not in (1, -1):
                raise ValidationError(f"{path}:{lineno}: root number must be +1 or -1")
            seen.add((cond, idx))
            out.append((cond, rn))
    return out


def reconcile_curves(catalog: Catalog, curves: str | Path | Sequence[tuple[int, int]]) -> ReconciliationReport:
    """Match isogeny classes (conductor, root number) against degree-1 records.

    At each level, curves and forms are paired first by agreeing sign
    (root number = -al_sign); leftover pairs of opposite sign are reported as
    mismatches, and anything still unpaired as an orphan.
    """
    if isinstance(curves, (str, Path)):
        curves = parse_curves(curves)
    by_level_curves: dict[int, list[int]] = defaultdict(list)
    for cond, rn in curves:
        by_level_curves[cond].append(-rn)  # expected al_sign
    by_level_forms: dict[int, list[NewformRecord]] = defaultdict(list)
    for r in catalog.query(degree=1):
        by_level_forms[r.level].append(r)
    orphan_curves, orphan_forms, mismatches = [], [], []
    for level in sorted(set(by_level_curves) | set(by_level_forms)):
        want = Counter(by_level_curves.get(level, []))
        forms = by_level_forms.get(level, [])
        left_forms = []
        for r in forms:
            if want[r.al_sign] > 0:
                want[r.al_sign] -= 1
            else:
                left_forms.append(r)
        left_curves = list(want.elements())
        while left_forms and left_curves:
            left_forms.pop(0)
            left_curves.pop(0)
            mismatches.append(level)
        orphan_forms.extend(r.key for r in left_forms)
        orphan_curves.extend([level] * len(left_curves))
    return ReconciliationReport(tuple(orphan_curves), tuple(orphan_forms), tuple(mismatches))


def assign_orbit_indices(entries: Sequence[tuple[int, Sequence[Sequence[int]]]]) -> list[int]:
    """Deterministic orbit indices for ``(level, [a(2), a(3), ...])`` entries.

    Within a level, orbits are numbered by ascending lexicographic order of
    their coefficient sequences.
    """
    order = sorted(range(len(entries)), key=lambda i: (entries[i][0], [tuple(v) for v in entries[i][1]]))
    out = [0] * len(entries)
    current, idx = None, 0
    for i in order:
        level = entries[i][0]
        if level != current:
            current, idx = level, 0
        out[i] = idx
        idx += 1
    return out
