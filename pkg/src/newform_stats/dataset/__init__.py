"""Newform catalogs: records, coefficient tables, counting queries and I/O."""

from .catalog import (
    HEADER,
    Catalog,
    CoefficientStore,
    ReconciliationReport,
    SignImbalance,
    assign_orbit_indices,
    count,
    counts_by_prime,
    format_catalog,
    growth_series,
    parse_catalog,
    parse_catalog_text,
    parse_curves,
    parse_subfields,
    q_count,
    reconcile_curves,
    sign_imbalance,
    write_catalog,
)
from .coefficients import (
    CoefficientTable,
    check_coefficients,
    extend_multiplicatively,
    format_coefficients,
    parse_coefficients,
)
from .records import DISC_DEGREE, KNOWN_DISCRIMINANTS, LARGE, NewformRecord, Subfield, validate_record
from .remote import TransportError, fetch_remote

__all__ = [n for n in dir() if not n.startswith("_")]
