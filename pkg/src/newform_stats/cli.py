"""Command-line entry point: ``newform-stats <subcommand> ...``.

Every run writes its artifacts (CSV, JSON, gnuplot scripts) to the output
directory together with ``manifest.json`` recording the configuration, input
hashes, package version and timings.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import ComputeError, ConfigurationError, NewformStatsError, ParseError, ValidationError, __version__

log = logging.getLogger("newform_stats")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_COMPUTE = 5
EXIT_CONFIG = 6
EXIT_TRANSPORT = 7

# Level segments [1, 1e4], (1e4, 1e6), (1e6, 2e6) as (lower, X) for ``lower < level < X``.
SEGMENTS = ((0, 10**4 + 1), (10**4, 10**6), (10**6, 2 * 10**6))
SEGMENT_NAMES = ("1-1e4", "1e4-1e6", "1e6-2e6")


@dataclass
class RunConfig:
    catalog: str | None = None
    coefficients: str | None = None
    subfields: str | None = None
    curves: str | None = None
    remote: str | None = None
    out: str = "out"
    dim_mode: str = "exact"
    workers: int = 1
    seed: int = 0
    offline: bool = False
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        base = {}
        if args.config:
            base = json.loads(Path(args.config).read_text())
        cfg = cls(**base)
        for name in ("catalog", "coefficients", "subfields", "curves", "remote", "out", "dim_mode", "workers", "seed"):
            v = getattr(args, name, None)
            if v is not None:
                setattr(cfg, name, v)
        if args.offline:
            cfg.offline = True
        return cfg


class Artifacts:
    """Collects output files; writes are deterministic (sorted keys, fixed float formatting)."""

    def __init__(self, out: Path):
        self.out = out
        self.written: list[str] = []

    def _path(self, name: str) -> Path:
        p = self.out / name
        p.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(name)
        return p

    def json(self, name: str, obj) -> None:
        self._path(name).write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")

    def csv(self, name: str, header: list[str], rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        self._path(name).write_text(buf.getvalue())

    def text(self, name: str, text: str) -> None:
        self._path(name).write_text(text)

    def plot(self, name: str, header: list[str], rows, title: str, xlabel: str, ylabel: str,
             series: list[tuple[int, int, str]], logscale: str = "") -> None:
        """Data file plus a gnuplot script drawing columns (x, y) for each series."""
        self.csv(f"plot/{name}.csv", header, rows)
        lines = [
            "set datafile separator ','",
            f"set title '{title}'",
            f"set xlabel '{xlabel}'",
            f"set ylabel '{ylabel}'",
            "set key left top",
            "set terminal pngcairo size 900,600",
            f"set output '{name}.png'",
        ]
        if logscale:
            lines.append(f"set logscale {logscale}")
        parts = [f"'{name}.csv' every ::1 using {x}:{y} with lines title '{label}'" for x, y, label in series]
        lines.append("plot " + ", \\\n     ".join(parts))
        self.text(f"plot/{name}.gp", "\n".join(lines) + "\n")


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if isinstance(v, (tuple, list)):
        return ";".join(str(x) for x in v)
    return v


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if hasattr(o, "numerator") and hasattr(o, "denominator"):
        return str(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _sha256(path: str | None) -> str | None:
    if not path or not Path(path).is_file():
        return None
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# ---- data loading -------------------------------------------------------------------


def _load_catalog(cfg: RunConfig, required: bool = True):
    from .dataset import parse_catalog

    if cfg.catalog:
        return parse_catalog(cfg.catalog, cfg.coefficients, cfg.subfields)
    if cfg.remote:
        raise ConfigurationError("use 'ingest --remote' first, then pass --catalog")
    if required:
        raise ConfigurationError("this subcommand needs --catalog (or a config file naming one)")
    return None


def _record(catalog, level: int, orbit: int):
    try:
        rec = catalog.get(level, orbit)
    except KeyError:
        raise ConfigurationError(f"no record at level {level}, orbit {orbit}") from None
    table = catalog.coefficient_table(rec)
    return rec, table


# ---- subcommands ------------------------------------------------------------------


def cmd_ingest(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .dataset import fetch_remote, format_catalog, parse_catalog

    if args.remote or cfg.remote:
        url = args.remote or cfg.remote
        cat = fetch_remote(url, (args.min_level, args.max_level), offline=cfg.offline)
    elif cfg.catalog:
        cat = parse_catalog(cfg.catalog, cfg.coefficients, cfg.subfields)
    else:
        raise ConfigurationError("ingest needs --remote URL or --catalog PATH")
    art.text("catalog.csv", format_catalog(cat))
    return {"records": len(cat), "provenance": cat.provenance}


def cmd_validate(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .arith.numfield import NumberField
    from .dataset import check_coefficients, reconcile_curves

    cat = _load_catalog(cfg)
    checked = 0
    missing = 0
    for rec in cat:
        if rec.is_large:
            continue
        table = cat.coefficient_table(rec)
        if table is None:
            missing += 1
            continue
        check_coefficients(table, NumberField(tuple(rec.field_poly)))
        checked += 1
    summary = {"records": len(cat), "coefficient_tables_checked": checked, "coefficient_tables_missing": missing}
    if cfg.curves:
        rep = reconcile_curves(cat, cfg.curves)
        summary["reconciliation"] = {
            "orphan_curves": list(rep.orphan_curves),
            "orphan_forms": [list(k) for k in rep.orphan_forms],
            "sign_mismatches": list(rep.sign_mismatches),
        }
    art.json("validation.json", summary)
    return summary


def cmd_counts(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .dataset import KNOWN_DISCRIMINANTS, LARGE, count, q_count, sign_imbalance

    cat = _load_catalog(cfg)
    rows = []
    if args.by == "degree":
        header = ["degree", *SEGMENT_NAMES, "total"]
        for d in (1, 2, 3, 4, 5, 6, LARGE):
            seg = [count(cat, degree=d, X=hi, lower=lo) for lo, hi in SEGMENTS]
            rows.append([d, *seg, sum(seg)])
    elif args.by == "disc":
        header = ["degree", "disc", "total"] + [f"{name}{s}" for name in SEGMENT_NAMES for s in "+-"]
        for d, discs in KNOWN_DISCRIMINANTS.items():
            for disc in discs:
                seg = []
                for lo, hi in SEGMENTS:
                    for sign in (1, -1):
                        seg.append(count(cat, degree=d, disc=disc, sign=sign, X=hi, lower=lo))
                rows.append([d, disc, sum(seg), *seg])
    elif args.by == "sign":
        header = ["degree", "plus", "minus", "imbalance"]
        for d in range(1, 7):
            plus = count(cat, degree=d, sign=1, lower=10**4)
            minus = count(cat, degree=d, sign=-1, lower=10**4)
            rows.append([d, plus, minus, plus - minus])
            imb = sign_imbalance(cat, d)
            if len(imb.levels):
                art.plot(f"sign_imbalance_d{d}", ["X", "delta"], zip(imb.levels.tolist(), imb.series.tolist()),
                         f"sign imbalance, degree {d}", "X", "Delta_d(X) - Delta_d(10^4)", [(1, 2, f"d={d}")])
    elif args.by == "q":
        header = ["disc", "k", "Q"]
        for disc in args.disc or [1, 5, 8, 49]:
            for k, q in q_count(cat, disc).items():
                rows.append([disc, k, q])
    else:
        raise ConfigurationError(f"unknown grouping {args.by!r}")
    art.csv(f"counts_by_{args.by}.csv", header, rows)
    return {"rows": len(rows)}


def cmd_fit(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .dataset import counts_by_prime, growth_series
    from .fitmodels import fit_li_direct, fit_li_loglog, likelihood_region, li_model, poisson_mle

    cat = _load_catalog(cfg)
    out: dict = {}
    if args.degree is not None:
        series = [(x, c) for x, c in growth_series(cat, degree=args.degree) if 10**4 < x < 2 * 10**6 and c > 0]
        if not series:
            raise ComputeError(f"no degree-{args.degree} forms in range")
        ll = fit_li_loglog(series)
        direct = fit_li_direct(series)
        out["li_loglog"] = ll.to_dict()
        out["li_direct"] = direct.to_dict()
        rows = [(x, c, float(li_model(x, *ll.params)), float(li_model(x, *direct.params))) for (x, c) in series]
        art.plot(f"growth_d{args.degree}", ["X", "C", "fit_loglog", "fit_direct"], rows,
                 f"degree {args.degree} growth", "X", "C_d(X)", [(1, 2, "data"), (1, 3, "log-log fit"), (1, 4, "direct fit")],
                 logscale="xy")
    if args.disc is not None:
        primes, k = counts_by_prime(cat, args.disc)
        fit = poisson_mle((primes, k))
        out["poisson"] = fit.to_dict()
        if args.regions and fit.note != "no-forms":
            for kk in (1, 2, 3):
                reg = likelihood_region((primes, k), kk)
                rows = []
                for i, line in enumerate(reg.boundary):
                    rows.extend((i, float(a), float(b)) for a, b in np.asarray(line))
                art.csv(f"plot/region_disc{args.disc}_k{kk}.csv", ["segment", "a", "b"], rows)
    if not out:
        raise ConfigurationError("fit needs --degree and/or --disc")
    art.json("fits.json", out)
    return out


def cmd_collisions(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .collisions import collision_report

    cat = _load_catalog(cfg)
    fit, rows = collision_report(cat, args.disc)
    art.csv(f"collisions_disc{args.disc}.csv", ["disc", "k", "Q", "E", "rho", "log10_rho", "R"],
            [[r.disc, r.k, r.Q, r.E, r.rho, r.log10_rho, r.R] for r in rows])
    result = {"fit": fit.to_dict(), "rows": [r.to_dict() for r in rows]}
    art.json(f"collisions_disc{args.disc}.json", result)
    return {"rows": len(rows), "a": fit.a, "b": fit.b}


def cmd_alsigns(args, cfg: RunConfig, art: Artifacts) -> dict:
    from . import alsigns
    from .alsigns import dimension_sum, expected_loglik, likelihood_curve, sn_census, var_loglik
    from .fitmodels import fit_gaussian_loglik

    cat = _load_catalog(cfg)
    curve = likelihood_curve(cat, args.degree, exclude_sn=args.exclude_sn, mode=cfg.dim_mode)
    g = fit_gaussian_loglik(curve.points())
    tag = f"d{args.degree}{'_nosn' if args.exclude_sn else ''}"
    rows = [(b, v, math.exp(-g.a * b * b + g.b * b)) for b, v in curve.points()]
    art.plot(f"al_likelihood_{tag}", ["beta", "likelihood", "gaussian_fit"], rows,
             f"normalized sign likelihood, degree {args.degree}", "beta", "Prob * 2^#F", [(1, 2, "data"), (1, 3, "fit")])
    levels = alsigns._forms(cat, args.degree, args.exclude_sn)[0]
    b_hat = curve.beta_hat
    census = sn_census(cat)
    out = {
        "degree": args.degree,
        "exclude_sn": args.exclude_sn,
        "n_forms": curve.n_forms,
        "beta_hat": curve.beta_hat,
        "likelihood_at_beta_hat": curve.value_hat,
        "gaussian_fit": g.to_dict(),
        "dimension_sum": dimension_sum(levels, cfg.dim_mode),
        "expected_loglik_at_beta_hat": expected_loglik(levels, None, b_hat, b_hat, mode=cfg.dim_mode),
        "var_loglik_at_beta_hat": var_loglik(levels, None, b_hat, mode=cfg.dim_mode),
        "sn_forms": census.count,
        "sn_sign_counts": census.sign_counts,
    }
    art.json(f"alsigns_{tag}.json", out)
    return out


def cmd_genus2(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .genus2 import brumer_core, brumer_curve, brumer_disc, mestre_curve, mestre_disc, prime_disc_search

    if args.family == "brumer":
        d = args.param
        model = brumer_curve(d)
        ic = model.igusa_clebsch()
        out = {"family": "brumer", "d": d, "core": brumer_core(d), "discriminant": brumer_disc(d),
               "igusa_clebsch": list(ic.as_tuple())}
    elif args.family == "mestre":
        b = args.param
        model = mestre_curve(b)
        out = {"family": "mestre", "b": b, "discriminant": mestre_disc(b),
               "igusa_clebsch": list(model.igusa_clebsch().as_tuple())}
    else:
        res = prime_disc_search(args.param)
        out = {"family": "brumer-search", "bound": res.bound, "count": res.count, "density_ratio": res.density_ratio,
               "params": list(res.params)}
    art.json(f"genus2_{args.family}_{args.param}.json", out)
    return {"family": args.family}


def cmd_hilbert(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .hilbert import R_D, enumerate_zd, fit_slope

    Ts = sorted(args.T)
    counts = [enumerate_zd(args.D, T).count for T in Ts]
    # A slope needs three sizes and nonzero counts.
    slope = fit_slope(Ts, counts) if len(Ts) >= 3 and min(counts) > 0 else None
    out = {"D": args.D, "T": Ts, "counts": counts, "slope": slope, "reference": R_D[args.D]}
    art.json(f"hilbert_D{args.D}.json", out)
    art.plot(f"hilbert_D{args.D}", ["T", "count"], zip(Ts, counts), f"Z_D(T), D={args.D}", "T", "count",
             [(1, 2, f"D={args.D}")], logscale="xy")
    return out


def cmd_heckepoly(args, cfg: RunConfig, art: Artifacts) -> dict:
    from .heckepoly import HnSpec, count_hn

    rows = []
    for n in range(1, args.n_max + 1):
        spec = HnSpec(n, args.p, args.k)
        rows.append([n, count_hn(spec, False), count_hn(spec, True) if args.totally_real else ""])
    art.csv(f"heckepoly_p{args.p}_k{args.k}.csv", ["n", "h", "h_totally_real"], rows)
    return {"h": [r[1] for r in rows]}


def cmd_lt(args, cfg: RunConfig, art: Artifacts) -> dict:
    from . import langtrotter as lt

    if args.action == "weilbox":
        if not args.poly:
            raise ConfigurationError("weilbox needs --poly c0;c1;...;cd")
        try:
            poly = tuple(int(t) for t in args.poly.replace(",", ";").split(";"))
        except ValueError as exc:
            raise ValidationError(f"bad --poly {args.poly!r}") from exc
        res = lt.weil_box_count(poly, args.p, lt.integral_basis(poly))
        out = {"poly": list(poly), "p": args.p, "total": res.total, "by_generated_degree": res.by_generated_degree,
               "orbits": res.orbits, "orbits_by_degree": res.orbits_by_degree}
        art.json(f"lt_weilbox_p{args.p}.json", out)
        return out
    cat = _load_catalog(cfg)
    if args.level is None:
        raise ConfigurationError(f"lt {args.action} needs --level")
    rec, table = _record(cat, args.level, args.orbit)
    if table is None:
        raise ConfigurationError(f"no coefficient table for level {args.level}, orbit {args.orbit}")
    X = args.X if args.X is not None else lt.x_f(rec.level)
    tag = f"{rec.level}.{rec.orbit}"
    if args.action == "pia":
        counts = lt.value_counts(table, X)
        top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].coords))
        out = {"max_pi": max(counts.values(), default=0),
               "values": [{"a": list(v.coords), "count": c} for v, c in top if c > 1]}
    elif args.action == "pim":
        out = {"subfields": {";".join(map(str, k)): v for k, v in lt.subfield_indices(rec, table, X).items()}}
    elif args.action == "hist":
        out = {"histogram": lt.c_f_histogram(table, X)}
    elif args.action == "collisions":
        rep = lt.collision_report(rec, table, X, filter_trivial=not args.all_pairs)
        out = {"pairs": [{"n": p.n, "m": p.m, "value": list(p.value), "norm": p.norm} for p in rep.pairs],
               "trivial_classes": {";".join(map(str, k)): list(v) for k, v in rep.trivial_classes.items()}}
    elif args.action == "eisenstein":
        out = {"ells": lt.eisenstein_scan(rec, table, args.ell_max, X)}
    elif args.action == "mod2":
        pat = lt.mod2_pattern(rec, table, X)
        out = {"flagged": pat.flagged, "ones_at": list(pat.ones_at),
               "residues": {";".join(map(str, k)): v for k, v in pat.residues.items()}}
    else:
        raise ConfigurationError(f"unknown lt action {args.action!r}")
    out.update({"level": rec.level, "orbit": rec.orbit, "X": X})
    art.json(f"lt_{args.action}_{tag}.json", out)
    return out


def cmd_report(args, cfg: RunConfig, art: Artifacts) -> dict:
    """Counts, collision tables and sign likelihoods in one run."""
    summary = {}
    for by in ("degree", "disc", "sign", "q"):
        ns = argparse.Namespace(by=by, disc=None)
        summary[f"counts_{by}"] = cmd_counts(ns, cfg, art)
    for disc in (1, 5, 8, 49):
        try:
            summary[f"collisions_{disc}"] = cmd_collisions(argparse.Namespace(disc=disc), cfg, art)
        except ComputeError as exc:
            log.warning("collisions for disc %d skipped: %s", disc, exc)
            summary[f"collisions_{disc}"] = {"skipped": str(exc)}
    for d, ex in ((1, False), (1, True), (2, False), (3, False)):
        try:
            r = cmd_alsigns(argparse.Namespace(degree=d, exclude_sn=ex), cfg, art)
        except ComputeError as exc:
            log.warning("sign analysis for degree %d skipped: %s", d, exc)
            summary[f"alsigns_{d}{'_nosn' if ex else ''}"] = {"skipped": str(exc)}
            continue
        summary[f"alsigns_{d}{'_nosn' if ex else ''}"] = {"beta_hat": r["beta_hat"], "gaussian": r["gaussian_fit"]["params"]}
    return summary


COMMANDS: dict[str, Callable] = {
    "ingest": cmd_ingest,
    "validate": cmd_validate,
    "counts": cmd_counts,
    "fit": cmd_fit,
    "collisions": cmd_collisions,
    "alsigns": cmd_alsigns,
    "genus2": cmd_genus2,
    "hilbert": cmd_hilbert,
    "heckepoly": cmd_heckepoly,
    "lt": cmd_lt,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="newform-stats", description="Statistics for catalogs of prime-level newforms.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--catalog", help="forms CSV (level,orbit,degree,disc,al_sign,field_poly)")
    p.add_argument("--coefficients", help="directory of {level}.{orbit}.txt coefficient files")
    p.add_argument("--subfields", help="subfields sidecar CSV")
    p.add_argument("--curves", help="elliptic curve list CSV (conductor,root_number)")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--dim-mode", dest="dim_mode", choices=["exact", "approximate", "mixed"])
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--offline", action="store_true", help="never contact the remote API; use the cache only")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", metavar="subcommand")
    sub.required = True

    s = sub.add_parser("ingest", help="fetch or normalize a catalog into canonical CSV")
    s.add_argument("--remote", help="base URL of a /forms endpoint")
    s.add_argument("--min-level", type=int, default=1)
    s.add_argument("--max-level", type=int, default=2 * 10**6)

    sub.add_parser("validate", help="check records, coefficient tables and curve reconciliation")

    s = sub.add_parser("counts", help="count tables")
    s.add_argument("--by", choices=["degree", "disc", "sign", "q"], default="degree")
    s.add_argument("--disc", type=int, action="append")

    s = sub.add_parser("fit", help="li-growth fits and Poisson maximum likelihood")
    s.add_argument("--degree", type=int)
    s.add_argument("--disc", type=int)
    s.add_argument("--regions", action="store_true", help="also trace likelihood regions k = 1, 2, 3")

    s = sub.add_parser("collisions", help="same-level collision table for one discriminant")
    s.add_argument("--disc", type=int, required=True)

    s = sub.add_parser("alsigns", help="Atkin-Lehner sign likelihood analysis")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--exclude-sn", action="store_true")

    s = sub.add_parser("genus2", help="Brumer and Mestre families")
    s.add_argument("family", choices=["brumer", "mestre", "search"])
    s.add_argument("param", type=int, help="d (brumer), b (mestre) or search bound")

    s = sub.add_parser("hilbert", help="point counts on Hilbert modular surfaces")
    s.add_argument("--D", type=int, required=True, choices=[5, 8, 12, 13, 17])
    s.add_argument("--T", type=float, nargs="+", default=[8, 16, 32, 64])

    s = sub.add_parser("heckepoly", help="counts of Weil-bounded characteristic polynomials")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--n-max", type=int, default=3)
    s.add_argument("--totally-real", action="store_true")

    s = sub.add_parser("lt", help="per-form coefficient value statistics")
    s.add_argument("action", choices=["pia", "pim", "hist", "collisions", "eisenstein", "mod2", "weilbox"])
    s.add_argument("--level", type=int)
    s.add_argument("--orbit", type=int, default=0)
    s.add_argument("--X", type=float)
    s.add_argument("--ell-max", type=int, default=50)
    s.add_argument("--all-pairs", action="store_true", help="collisions: do not filter trivial equalities")
    s.add_argument("--poly", help="weilbox: field polynomial c0,c1,...,cd (use --poly=... if c0 < 0)")
    s.add_argument("--p", type=int, default=2)

    sub.add_parser("report", help="counts, collision tables and sign analysis in one run")
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    from .dataset import TransportError

    try:
        cfg = RunConfig.from_args(args)
    except (OSError, TypeError, ValueError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(cfg.out)
    art = Artifacts(out)
    started = time.time()
    status = EXIT_OK
    result: dict | None = None
    error = None
    try:
        result = COMMANDS[args.command](args, cfg, art)
    except ParseError as exc:
        status, error = EXIT_PARSE, exc
    except ValidationError as exc:
        status, error = EXIT_VALIDATION, exc
    except TransportError as exc:
        status, error = EXIT_TRANSPORT, exc
    except ConfigurationError as exc:
        status, error = EXIT_CONFIG, exc
    except (ComputeError, NewformStatsError) as exc:
        status, error = EXIT_COMPUTE, exc
    except ValueError as exc:
        # Out-of-domain argument values, e.g. a composite p.
        status, error = EXIT_VALIDATION, exc
    if error is not None:
        print(f"error: {error}", file=sys.stderr)
    manifest = {
        "command": args.command,
        "argv": list(argv) if argv is not None else sys.argv[1:],
        "config": asdict(cfg),
        "inputs": {k: _sha256(getattr(cfg, k)) for k in ("catalog", "subfields", "curves")},
        "version": __version__,
        "numpy": np.__version__,
        "python": sys.version.split()[0],
        "started": started,
        "elapsed_seconds": time.time() - started,
        "status": status,
        "error": None if error is None else str(error),
        "artifacts": sorted(set(art.written)),
    }
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    if result is not None and status == EXIT_OK:
        print(json.dumps(result, sort_keys=True, default=_json_default))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
