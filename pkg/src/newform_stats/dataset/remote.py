"""HTTP client for an LMFDB-style ``/forms`` endpoint, with a local canonical cache."""

from __future__ import annotations

import logging
import os
import time
from pathlib import Path

import httpx

from .. import ConfigurationError, NewformStatsError, ValidationError
from .catalog import HEADER, Catalog, CoefficientStore, format_catalog, parse_catalog_text
from .records import LARGE, NewformRecord, validate_record

log = logging.getLogger(__name__)

OFFLINE_ENV = "NEWFORM_STATS_OFFLINE"


class TransportError(NewformStatsError):
    """HTTP failure or timeout that persisted through every retry."""


def _default_cache_dir() -> Path:
    root = os.environ.get("NEWFORM_STATS_CACHE") or os.path.join(os.path.expanduser("~"), ".cache", "newform_stats")
    return Path(root) / "remote"


def _record_from_json(obj, index: int) -> NewformRecord:
    if not isinstance(obj, dict):
        raise ValidationError(f"record {index}: expected an object, got {type(obj).__name__}")
    missing = [k for k in HEADER if k not in obj]
    if missing:
        raise ValidationError(f"record {index}: missing fields {missing}")
    try:
        degree = obj["degree"]
        degree = LARGE if degree == LARGE else int(degree)
        poly = obj["field_poly"]
        if isinstance(poly, str):
            poly = tuple(int(t) for t in poly.split(";")) if poly else None
        elif poly is not None:
            poly = tuple(int(t) for t in poly)
        disc = obj["disc"]
        rec = NewformRecord(
            level=int(obj["level"]),
            orbit=int(obj["orbit"]),
            degree=degree,
            disc=None if disc in (None, "") else int(disc),
            al_sign=int(obj["al_sign"]),
            field_poly=poly,
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"record {index}: {exc}") from exc
    validate_record(rec)
    return rec


def fetch_remote(
    base_url: str,
    level_range: tuple[int, int],
    *,
    cache_dir: str | Path | None = None,
    offline: bool | None = None,
    retries: int = 3,
    backoff: float = 0.5,
    timeout: float = 30.0,
    transport: httpx.BaseTransport | None = None,
) -> Catalog:
    """Fetch records with ``lo <= level <= hi`` and cache them as a canonical CSV.

    In offline mode (argument or ``NEWFORM_STATS_OFFLINE=1``) only the cache is
    consulted.  Server errors and timeouts are retried ``retries`` times with
    exponential backoff before raising :class:`TransportError`.
    """
    lo, hi = map(int, level_range)
    if offline is None:
        offline = os.environ.get(OFFLINE_ENV, "") not in ("", "0")
    cache = Path(cache_dir) if cache_dir is not None else _default_cache_dir()
    cache_file = cache / f"forms_{lo}_{hi}.csv"
    if lo > hi:
        return Catalog((), CoefficientStore(None), f"{base_url} [{lo},{hi}]")
    if offline:
        if cache_file.exists():
            return parse_catalog_text(cache_file.read_text(encoding="utf-8"), str(cache_file))
        raise ConfigurationError(f"offline mode and no cached copy at {cache_file}")

    url = base_url.rstrip("/") + "/forms"
    params = {"min_level": lo, "max_level": hi}
    last: Exception | None = None
    with httpx.Client(timeout=timeout, transport=transport) as client:
        for attempt in range(retries + 1):
            try:
                resp = client.get(url, params=params)
                if resp.status_code >= 500 or resp.status_code == 429:
                    raise httpx.HTTPStatusError(f"server returned {resp.status_code}", request=resp.request, response=resp)
                resp.raise_for_status()
                payload = resp.json()
                break
            except httpx.HTTPStatusError as exc:
                last = exc
                if exc.response.status_code < 500 and exc.response.status_code != 429:
                    raise TransportError(f"GET {url}: {exc}") from exc
            except (httpx.TransportError, httpx.TimeoutException) as exc:
                last = exc
            except ValueError as exc:
                raise ValidationError(f"GET {url}: response is not JSON") from exc
            if attempt < retries:
                time.sleep(backoff * 2**attempt)
        else:
            raise TransportError(f"GET {url} failed after {retries + 1} attempts: {last}") from last

    if not isinstance(payload, list):
        raise ValidationError(f"GET {url}: expected a JSON array")
    records = [_record_from_json(obj, i) for i, obj in enumerate(payload)]
    catalog = Catalog(tuple(records), CoefficientStore(None), f"{url}?min_level={lo}&max_level={hi}")
    try:
        cache.mkdir(parents=True, exist_ok=True)
        cache_file.write_text(format_catalog(catalog), encoding="utf-8", newline="\n")
    except OSError as exc:
        log.warning("could not write cache %s: %s", cache_file, exc)
    return catalog
