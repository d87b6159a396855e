"""Command-line front end.

    vermajw compute    --weights mu1,mu2 --max-degree D [--at mu1=-1,...] [--out FILE]
    vermajw verify     --weights ... --max-degree D --checks idempotent,pascal,... [--at ...]
    vermajw tl         --n N [--max-n 8]
    vermajw specialize --in FILE --at mu1=-1,...

Exit status: 0 success, 1 a check failed, 2 bad configuration,
3 pole under specialization, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

from . import __version__
from .document import (CHECKS, BlockRecord, ConfigError, JobConfig, ResultDocument,
                       check_report)
from .intertwiners import GradedMap, check_intertwiner, e_family, f_family
from .projectors import (extended_jw, f_oracle, jw, specialize_map, trace_report,
                         verify_idempotent)
from .qfield import DivisionByZero, PoleError, WeightExpr, pascal_violations
from .repspaces import (Verma, coassociativity_violations, relation_violations)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_POLE = 3
EXIT_IO = 4

THREADS_ENV = "VERMAJW_THREADS"

log = logging.getLogger("vermajw")


class InputError(OSError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def parse_names(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise ConfigError("--weights needs at least one name")
    return names


def parse_assignment(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        if not sep:
            raise ConfigError(f"expected name=int in --at, got {part!r}")
        try:
            v = int(value)
        except ValueError:
            raise ConfigError(f"value for {name.strip()} is not an integer: {value!r}") from None
        if name.strip() in out:
            raise ConfigError(f"{name.strip()} assigned twice")
        out[name.strip()] = v
    if not out:
        raise ConfigError("--at is empty")
    return out


def parse_checks(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if names == ["all"]:
        return list(CHECKS)
    return names


def _symbols(cfg: JobConfig) -> list[WeightExpr]:
    return [WeightExpr.symbol(i + 1) for i in range(len(cfg.weights))]


def _rename(text: str, cfg: JobConfig) -> str:
    """Legend mapping internal symbols back to the user's weight names."""
    legend = ", ".join(f"mu{i + 1}={n}" for i, n in enumerate(cfg.weights) if n != f"mu{i + 1}")
    return f"{text} [symbols: {legend}; tj stands for q^muj]" if legend else text


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _v(check: str, degree: int | None, row: int | None = None, col: int | None = None,
       detail: str = "") -> dict[str, Any]:
    return {"check": check, "degree": degree, "row": row, "col": col, "detail": detail}


def _maybe_specialize(m: GradedMap, assignment) -> GradedMap:
    return specialize_map(m, assignment) if assignment else m


def _need(cfg: JobConfig, n: int, check: str):
    if len(cfg.weights) < n:
        raise ConfigError(f"check {check!r} needs at least {n} weights")


def _check_idempotent(cfg: JobConfig) -> list[dict]:
    _need(cfg, 2, "idempotent")
    P = _maybe_specialize(extended_jw(_symbols(cfg), cfg.max_degree), cfg.assignment())
    out = [_v("idempotent", d, r, c, "P.P != P") for d, r, c in verify_idempotent(P)]
    out += [_v("idempotent", d, detail="trace != 1") for d in trace_report(P)]
    return out


def _check_intertwiner(cfg: JobConfig) -> list[dict]:
    _need(cfg, 2, "intertwiner")
    mu, lam = _symbols(cfg)[:2]
    out = []
    for label, fam in (("E", e_family), ("F", f_family)):
        m = _maybe_specialize(fam(mu, lam, cfg.max_degree), cfg.assignment())
        out += [_v("intertwiner", v.degree, v.row, v.col, f"{label} map vs {v.generator}")
                for v in check_intertwiner(m)]
    return out


def _check_ef(cfg: JobConfig) -> list[dict]:
    _need(cfg, 2, "ef_identity")
    mu, lam = _symbols(cfg)[:2]
    a = cfg.assignment()
    E = _maybe_specialize(e_family(mu, lam, cfg.max_degree), a)
    F = _maybe_specialize(f_family(mu, lam, cfg.max_degree), a)
    EF = E @ F
    ident = GradedMap.identity(EF.src_factors, cfg.max_degree)
    out = []
    for k in range(cfg.max_degree + 1):
        out += [_v("ef_identity", k, r, c, "E.F != Id") for r, c in EF[k].differences(ident[k])]
    return out


def _check_oracle(cfg: JobConfig) -> list[dict]:
    _need(cfg, 2, "oracle")
    mu, lam = _symbols(cfg)[:2]
    a = cfg.assignment()
    got = _maybe_specialize(f_family(mu, lam, cfg.max_degree), a)
    ref = _maybe_specialize(f_oracle(mu, lam, cfg.max_degree), a)
    out = []
    for k in range(cfg.max_degree + 1):
        out += [_v("oracle", k, r, c, "closed form != recursion") for r, c in got[k].differences(ref[k])]
    return out


def _check_pascal(cfg: JobConfig) -> list[dict]:
    return [_v("pascal", k, j, None, f"[{k + 1} {j}]") for k, j in pascal_violations(cfg.pascal_kmax)]


def _factors(cfg: JobConfig) -> tuple[Verma, ...]:
    a = cfg.assignment() or {}
    return tuple(Verma(w.substitute(a)) for w in _symbols(cfg))


def _check_relations(cfg: JobConfig) -> list[dict]:
    _need(cfg, 1, "relations")
    fs = _factors(cfg)
    spaces = [(f,) for f in fs] + ([fs] if len(fs) > 1 else [])
    out = []
    for space in spaces:
        label = "(x)".join(str(f) for f in space)
        out += [_v("relations", v.degree, v.row, v.col, f"{v.relation} on {label}")
                for v in relation_violations(space, cfg.max_degree)]
    return out


def _check_coassoc(cfg: JobConfig) -> list[dict]:
    _need(cfg, 1, "coassoc")
    return [_v("coassoc", v.degree, v.row, v.col, v.relation)
            for v in coassociativity_violations(_factors(cfg), cfg.max_degree)]


CHECK_FUNCS: dict[str, Callable[[JobConfig], list[dict]]] = {
    "idempotent": _check_idempotent,
    "intertwiner": _check_intertwiner,
    "ef_identity": _check_ef,
    "oracle": _check_oracle,
    "pascal": _check_pascal,
    "relations": _check_relations,
    "coassoc": _check_coassoc,
}


def _run_one(name: str, cfg: JobConfig) -> tuple[list[dict], float]:
    t0 = time.perf_counter()
    out = CHECK_FUNCS[name](cfg)
    return out, time.perf_counter() - t0


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be positive")
    return n


def run_checks(cfg: JobConfig, workers: int = 1) -> tuple[dict[str, dict], dict[str, float]]:
    """Run the configured checks; results are assembled in a fixed order."""
    for name in cfg.checks:
        if name != "pascal":
            _need(cfg, 2 if name in ("idempotent", "intertwiner", "ef_identity", "oracle") else 1, name)
    names = list(dict.fromkeys(cfg.checks))
    if workers > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(names))) as pool:
            futures = {n: pool.submit(_run_one, n, cfg) for n in names}
            results = {n: futures[n].result() for n in names}
    else:
        results = {}
        for n in names:
            log.info("running check %s", n)
            results[n] = _run_one(n, cfg)
    reports = {}
    timing = {}
    for n in names:
        violations, secs = results[n]
        log.info("check %s: %s", n, "pass" if not violations else f"{len(violations)} violation(s)")
        reports[n] = check_report(violations)
        timing[f"check:{n}"] = round(secs, 6)
    return reports, timing


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _blocks(m: GradedMap) -> list[BlockRecord]:
    return [BlockRecord.from_block(k, m[k]) for k in range(m.cutoff + 1)]


def cmd_compute(cfg: JobConfig, timing: bool = False) -> ResultDocument:
    if len(cfg.weights) < 2:
        raise ConfigError("compute needs at least two weights")
    t0 = time.perf_counter()
    log.info("computing extended projector on %d factors up to degree %d",
             len(cfg.weights), cfg.max_degree)
    P = extended_jw(_symbols(cfg), cfg.max_degree)
    t1 = time.perf_counter()
    a = cfg.assignment()
    if a:
        log.info("specializing %s", cfg.specialization)
        P = specialize_map(P, a)
    t2 = time.perf_counter()
    doc = ResultDocument("compute", cfg.echo(), _blocks(P), provenance=P.provenance)
    if timing:
        doc.timing = {"compute": round(t1 - t0, 6), "specialize": round(t2 - t1, 6)}
    return doc


def cmd_verify(cfg: JobConfig, timing: bool = False) -> ResultDocument:
    if not cfg.checks:
        raise ConfigError("verify needs --checks")
    reports, secs = run_checks(cfg, _thread_count())
    doc = ResultDocument("verify", cfg.echo(), checks=reports)
    if timing:
        doc.timing = secs
    return doc


DEFAULT_MAX_N = 8


def cmd_tl(n: int, max_n: int = DEFAULT_MAX_N, timing: bool = False) -> ResultDocument:
    if n < 1:
        raise ConfigError("--n must be at least 1")
    if n > max_n:
        raise ConfigError(f"n={n} exceeds the resource guard --max-n={max_n}")
    t0 = time.perf_counter()
    P = jw(n)
    t1 = time.perf_counter()
    viol = [_v("idempotent", d, r, c, "P.P != P") for d, r, c in verify_idempotent(P)]
    config = {"weights": [], "max_degree": n, "checks": ["idempotent"], "specialization": None,
              "n": n}
    doc = ResultDocument("tl", config, _blocks(P), checks={"idempotent": check_report(viol)},
                         provenance=P.provenance)
    if timing:
        doc.timing = {"compute": round(t1 - t0, 6), "check:idempotent": round(time.perf_counter() - t1, 6)}
    return doc


def cmd_specialize(doc: ResultDocument, at: dict[str, int]) -> ResultDocument:
    """Substitute integer weights into every entry of a stored document."""
    names = list(doc.config.get("weights") or [])
    unknown = sorted(set(at) - set(names))
    if unknown:
        raise ConfigError(f"document has no weight named {', '.join(unknown)}")
    fixed = dict(doc.config.get("specialization") or {})
    clash = sorted(n for n in at if n in fixed)
    if clash:
        raise ConfigError(f"document already specializes {', '.join(clash)}")
    fixed.update(at)
    assignment = {names.index(n) + 1: v for n, v in at.items()}
    blocks = []
    for b in doc.blocks:
        entries = {rc: v.specialize(assignment) for rc, v in b.entries.items()}
        blocks.append(BlockRecord(b.degree, b.basis, {rc: v for rc, v in entries.items() if not v.is_zero()}))
    config = dict(doc.config)
    config["specialization"] = {n: fixed[n] for n in names if n in fixed}
    return ResultDocument("specialize", config, blocks, checks=doc.checks,
                          provenance=doc.provenance)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vermajw", description="Exact extended Jones-Wenzl projectors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = p.add_subparsers(dest="command", required=True)
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                         help="progress messages on stderr")

    def common(sp, weights_required=True):
        sp.add_argument("--weights", required=weights_required, help="comma-separated weight names")
        sp.add_argument("--max-degree", type=int, required=True, help="highest degree D to compute")
        sp.add_argument("--at", help="specialization name=int,...")

    def output(sp):
        sp.add_argument("--out", help="write the JSON document here instead of stdout")
        sp.add_argument("--timing", action="store_true",
                        help="include wall-clock timings (makes output non-deterministic)")

    c = sub.add_parser("compute", parents=[verbose], help="compute projector blocks")
    common(c)
    output(c)

    v = sub.add_parser("verify", parents=[verbose], help="run verification checks")
    common(v, weights_required=False)
    v.add_argument("--checks", required=True, help=f"comma-separated subset of {','.join(CHECKS)} or 'all'")
    v.add_argument("--pascal-kmax", type=int, default=30, help="range k <= K for the pascal check")
    output(v)

    t = sub.add_parser("tl", parents=[verbose], help="classical Jones-Wenzl projector on n strands")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="resource guard")
    output(t)

    s = sub.add_parser("specialize", parents=[verbose], help="specialize a stored document")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--out")
    return p


def _config(args) -> JobConfig:
    weights = parse_names(args.weights) if args.weights else []
    fixed = parse_assignment(args.at) if args.at else None
    checks = parse_checks(args.checks) if getattr(args, "checks", None) else []
    return JobConfig(weights, args.max_degree, checks, fixed, getattr(args, "out", None),
                     getattr(args, "pascal_kmax", 30))


def _read(path: str) -> ResultDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return ResultDocument.loads(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path} is not a valid result document: {exc}") from None


def _write(doc: ResultDocument, path: str | None):
    text = doc.dumps()
    if path is None:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); not an error
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None
    log.info("wrote %s", path)


def _setup_logging(verbose: bool):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("vermajw: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    _setup_logging(getattr(args, "verbose", False))
    cfg = None
    try:
        if args.command == "compute":
            cfg = _config(args)
            doc = cmd_compute(cfg, args.timing)
        elif args.command == "verify":
            cfg = _config(args)
            doc = cmd_verify(cfg, args.timing)
        elif args.command == "tl":
            doc = cmd_tl(args.n, args.max_n, args.timing)
        else:
            doc = cmd_specialize(_read(args.infile), parse_assignment(args.at))
        _write(doc, getattr(args, "out", None))
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (PoleError, DivisionByZero) as exc:
        msg = str(exc)
        log.error("%s", _rename(msg, cfg) if cfg else msg)
        return EXIT_POLE
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_IO
    return EXIT_OK if doc.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
