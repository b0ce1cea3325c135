"""Command-line front end: ``iwtheta <command> [options]``.

Certificates are canonical JSON (sorted keys, integers as decimal strings,
``"schema": 1``).  Exit codes: 0 witness found / checks pass, 1 nothing
found, 2 bad configuration, 3 an internal invariant failed.
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
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .arith import ModRing, PrimeTable, is_prime, primes_up_to
from .eigenform import CONVENTION, CurveModel, SymbolEigenform, resolve
from .errors import ConfigError, CorruptCache, IwthetaError
from .kurihara import ExhaustionReport, SearchStrategy, kolyvagin_primes, replay, search_delta
from .mazurtate import (
    iwasawa_invariants,
    mt_ideal_generators,
    mu_criterion_sum,
    pollack_check,
    stabilized_theta,
    theta,
    theta_branch,
    verify_norm_relation,
)

log = logging.getLogger("iwtheta")

EXIT_OK, EXIT_NONE, EXIT_CONFIG, EXIT_INVARIANT = 0, 1, 2, 3


class InvariantViolation(RuntimeError):
    pass


# -- configuration --------------------------------------------------------------


@dataclass
class JobConfig:
    curve: tuple[int, ...] | None = None
    conductor: int | None = None
    level: int | None = None
    weight: int | None = None
    pins: dict[int, int] = field(default_factory=dict)
    label: str = ""
    p: int = 7
    r: int = 1
    branch: str = "0"
    bound: int = 3000
    max_factors: int = 2
    budget: int = 100
    nmax: int = 3
    precision: int | None = None
    cache: str | None = None
    eta: dict[int, int] = field(default_factory=dict)
    seed: int | None = None
    jobs: int = 1
    m: int = 1
    ideal: bool = False
    timestamp: bool = False

    def validate(self) -> "JobConfig":
        if (self.curve is None) == (self.level is None):
            raise ConfigError("give exactly one of --curve (with --conductor) or --level/--weight")
        if self.curve is not None:
            if len(self.curve) != 5:
                raise ConfigError("--curve needs five comma-separated coefficients")
            if not self.conductor or self.conductor < 1:
                raise ConfigError("--curve requires a positive --conductor")
        else:
            if not self.weight or self.weight < 2 or self.weight % 2:
                raise ConfigError("--weight must be an even integer >= 2")
            if self.level < 1:
                raise ConfigError("--level must be positive")
        if self.p < 3 or not is_prime(self.p):
            raise ConfigError(f"--p {self.p} is not an odd prime")
        if self.N % self.p == 0:
            raise ConfigError(f"--p {self.p} divides the level {self.N}")
        if not 1 <= self.r <= self.k - 1:
            raise ConfigError(f"--r must lie in 1..{self.k - 1}")
        if self.branch != "all":
            try:
                int(self.branch)
            except ValueError:
                raise ConfigError("--branch must be an integer or 'all'") from None
        for name in ("bound", "max_factors", "budget", "nmax", "jobs"):
            if getattr(self, name) < 0:
                raise ConfigError(f"--{name.replace('_', '-')} must be non-negative")
        if self.precision is not None and self.precision < self.nmax + 2:
            raise ConfigError(f"--precision must be at least nmax + 2 = {self.nmax + 2}")
        for ell in self.eta:
            if ell < 3 or not is_prime(ell):
                raise ConfigError(f"--eta {ell}=...: {ell} is not an odd prime")
        return self

    @property
    def N(self) -> int:
        return self.conductor if self.curve is not None else self.level

    @property
    def k(self) -> int:
        return 2 if self.curve is not None else self.weight

    @property
    def branches(self) -> list[int]:
        return list(range(self.p - 1)) if self.branch == "all" else [int(self.branch) % (self.p - 1)]

    def source(self):
        if self.curve is not None:
            return CurveModel(self.curve, self.conductor, self.label)
        return SymbolEigenform(self.level, self.weight, dict(self.pins), label=self.label)

    def echo(self) -> dict:
        d = asdict(self)
        d["curve"] = list(self.curve) if self.curve else None
        d.pop("timestamp")
        return d


def _kv(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("=")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected l=value, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("form")
    g.add_argument("--curve", type=_ints, help="Weierstrass coefficients a1,a2,a3,a4,a6")
    g.add_argument("--conductor", type=int)
    g.add_argument("--level", type=int)
    g.add_argument("--weight", type=int)
    g.add_argument("--pin", type=_kv, action="append", default=[], metavar="L=A", help="fix a_L")
    g.add_argument("--label", default="")
    o = common.add_argument_group("job")
    o.add_argument("--p", type=int, default=7)
    o.add_argument("--r", type=int, default=1)
    o.add_argument("--branch", default="0", help="Teichmuller branch i, or 'all'")
    o.add_argument("--bound", type=int, default=3000, help="prime bound")
    o.add_argument("--max-factors", type=int, default=2)
    o.add_argument("--budget", type=int, default=100, help="maximum Kurihara evaluations per branch")
    o.add_argument("--nmax", type=int, default=3)
    o.add_argument("--precision", type=int, help="p-adic precision exponent (default nmax + 2)")
    o.add_argument("--cache", help="CSV cache of a_l values")
    o.add_argument("--eta", type=_kv, action="append", default=[], metavar="L=G", help="primitive root override")
    o.add_argument("--seed", type=int)
    o.add_argument("--jobs", type=int, default=1)
    o.add_argument("--m", type=int, default=1, help="modulus for 'theta'")
    o.add_argument("--ideal", action="store_true", help="include Mazur-Tate ideal generators in 'analyze'")
    o.add_argument("--timestamp", action="store_true", help="record wall-clock time (breaks byte-identity)")
    fmt = o.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    o.add_argument("--out", help="write output here instead of stdout")
    o.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="iwtheta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("analyze", "full pipeline with a certificate"),
        ("delta", "search for a nonzero Kurihara number"),
        ("mu", "mu = 0 criterion sweep"),
        ("theta", "print a Mazur-Tate element"),
        ("verify-norm", "check the norm relations for m*l <= bound"),
        ("invariants", "lambda/mu readings"),
        ("ideal", "Mazur-Tate ideal generators"),
        ("primes", "list Kolyvagin primes"),
    ]:
        sub.add_parser(name, parents=[common], help=text)
    return parser


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    return JobConfig(
        curve=ns.curve,
        conductor=ns.conductor,
        level=ns.level,
        weight=ns.weight,
        pins=dict(ns.pin),
        label=ns.label,
        p=ns.p,
        r=ns.r,
        branch=ns.branch,
        bound=ns.bound,
        max_factors=ns.max_factors,
        budget=ns.budget,
        nmax=ns.nmax,
        precision=ns.precision,
        cache=ns.cache,
        eta=dict(ns.eta),
        seed=ns.seed,
        jobs=ns.jobs,
        m=ns.m,
        ideal=ns.ideal,
        timestamp=ns.timestamp,
    ).validate()


# -- serialisation --------------------------------------------------------------


def _canon(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return _canon(x.item())
    return str(x)


def canonical_json(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -- a_l cache --------------------------------------------------------------------


def _rows_digest(rows: Sequence[tuple[int, int]]) -> str:
    h = hashlib.sha256()
    for ell, a in rows:
        h.update(f"{ell},{a}\n".encode())
    return h.hexdigest()


def save_cache(path: str | Path, fingerprint: str, table: dict[int, int]) -> None:
    rows = sorted(table.items())
    buf = io.StringIO()
    buf.write(f"# fingerprint={fingerprint} version={__version__}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ell", "a_ell"])
    w.writerows(rows)
    buf.write(f"# checksum={_rows_digest(rows)}\n")
    Path(path).write_text(buf.getvalue())


def load_cache(path: str | Path, fingerprint: str) -> dict[int, int]:
    """Read a cache written by ``save_cache``; a missing file is an empty table."""
    p = Path(path)
    if not p.exists():
        return {}
    lines = p.read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("# fingerprint=") or not lines[-1].startswith("# checksum="):
        raise CorruptCache(f"{path}: missing header or checksum line")
    head = dict(kv.split("=", 1) for kv in lines[0][2:].split())
    if head.get("fingerprint") != fingerprint:
        raise CorruptCache(f"{path}: cache belongs to another form")
    if head.get("version") != __version__:
        raise CorruptCache(f"{path}: written by version {head.get('version')}")
    try:
        rows = [(int(a), int(b)) for a, b in csv.reader(lines[2:-1])]
    except ValueError as exc:
        raise CorruptCache(f"{path}: {exc}") from None
    if _rows_digest(rows) != lines[-1].split("=", 1)[1] or rows != sorted(rows):
        raise CorruptCache(f"{path}: checksum mismatch")
    return dict(rows)


def cache_roundtrip(path: str | Path, fingerprint: str, table: dict[int, int]) -> str:
    save_cache(path, fingerprint, table)
    if load_cache(path, fingerprint) != table:
        raise CorruptCache(f"{path}: reload differs from the written table")
    return "ok"


# -- pipeline stages -------------------------------------------------------------


class Session:
    """Resolved form plus caches shared by the stages of one run."""

    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        src = cfg.source()
        try:
            self.nes = resolve(src)
        except IwthetaError as exc:
            raise ConfigError(f"normalize: {exc}") from exc
        self.src = src
        self.roots = PrimeTable(0, dict(cfg.eta))
        self.a_table = load_cache(cfg.cache, self.nes.fingerprint) if cfg.cache else {}
        self.ring = ModRing(cfg.p, cfg.precision or cfg.nmax + 2)

    def save(self):
        if self.cfg.cache:
            save_cache(self.cfg.cache, self.nes.fingerprint, self.a_table)

    def a_p(self) -> int:
        return self.nes.hecke_eigenvalue(self.cfg.p)

    def primes(self):
        cfg = self.cfg
        return kolyvagin_primes(self.src, cfg.p, cfg.bound, self.roots, self.a_table)


def stage_delta(s: Session) -> tuple[list[dict], bool]:
    cfg = s.cfg
    primes = s.primes() if cfg.budget else []
    strat = SearchStrategy(cfg.max_factors, cfg.bound, cfg.budget, cfg.seed)
    out, found = [], False
    for i in cfg.branches:
        res = search_delta(s.nes, cfg.p, cfg.r, i, strat, primes, cfg.jobs)
        if isinstance(res, ExhaustionReport):
            out.append({"branch": i, "witness": None, "tried": [list(t) for t in res.tried]})
            continue
        if not replay(res, s.nes):
            raise InvariantViolation(f"certificate for m = {res.m} does not replay")
        found = True
        out.append({"branch": i, "witness": res.to_dict()})
    return out, found


def stage_mu(s: Session) -> tuple[dict, bool]:
    """First (n, i, b) with a nonzero isotypic group coefficient mod p."""
    cfg = s.cfg
    F = ModRing(cfg.p, 1)
    for n in range(1, cfg.nmax + 1):
        for i in cfg.branches:
            br = theta_branch(s.nes, cfg.p, n, i, F, cfg.r)
            for b, c in enumerate(br.group_coeffs):
                if c % cfg.p:
                    lit = mu_criterion_sum(s.nes, cfg.p, n, i, b, cfg.r)
                    return {"n": n, "i": i, "b": b, "coefficient": c, "integer_rep_sum": lit}, True
    return {"n": None}, False


def stage_invariants(s: Session) -> dict:
    cfg = s.cfg
    a_p = s.a_p()
    if a_p % cfg.p:
        seq = [stabilized_theta(s.nes, cfg.p, n, s.ring, cfg.r) for n in range(cfg.nmax + 1)]
        rd = iwasawa_invariants(seq)
        return {
            "kind": "ordinary",
            "a_p": a_p,
            "alpha": seq[0].alpha,
            "mu_zero": rd.mu_zero,
            "lambda": rd.lam if rd.stable else None,
            "stable": rd.stable,
            "valuations": rd.valuations,
        }
    if a_p == 0:
        levels = pollack_check(s.nes, cfg.p, range(cfg.nmax + 1), r=cfg.r)
        cands = {}
        for lv in levels:
            cands.setdefault(lv.sign, set()).add(lv.lambda_candidate)
        return {
            "kind": "supersingular",
            "a_p": 0,
            "levels": [
                {"n": lv.n, "sign": lv.sign, "v": lv.valuation, "q": lv.q,
                 "lambda_candidate": lv.lambda_candidate, "divis_ok": lv.divis_ok}
                for lv in levels
            ],
            "stable": all(len(v) == 1 for v in cands.values()),
        }
    return {"kind": "unsupported", "a_p": a_p}


def stage_ideal(s: Session) -> list:
    cfg = s.cfg
    gens = mt_ideal_generators(s.nes, cfg.p, cfg.nmax)
    return [[list(t) for t in g.items()] for g in gens]


def run_analyze(cfg: JobConfig) -> tuple[dict, int]:
    s = Session(cfg)
    cert = {
        "schema": 1,
        "version": __version__,
        "config": cfg.echo(),
        "fingerprint": s.nes.fingerprint,
        "convention": CONVENTION,
        "seed": cfg.seed,
    }
    if cfg.timestamp:
        cert["wall_clock"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    if cfg.budget == 0:
        return cert, EXIT_NONE
    results = {}
    results["delta"], found_delta = stage_delta(s)
    results["mu"], found_mu = stage_mu(s)
    results["invariants"] = stage_invariants(s)
    if cfg.ideal and s.nes.k % 2 == 0:
        results["ideal"] = stage_ideal(s)
    s.save()
    cert["results"] = results
    return cert, EXIT_OK if (found_delta or found_mu) else EXIT_NONE


def _theta_rows(s: Session) -> list[tuple[int, object]]:
    return theta(s.nes, s.cfg.m, s.cfg.r).element.items()


def run_command(cmd: str, cfg: JobConfig) -> tuple[object, int]:
    if cmd == "analyze":
        return run_analyze(cfg)
    s = Session(cfg)
    if cmd == "delta":
        res, found = stage_delta(s)
        s.save()
        return {"schema": 1, "fingerprint": s.nes.fingerprint, "delta": res}, EXIT_OK if found else EXIT_NONE
    if cmd == "mu":
        res, found = stage_mu(s)
        return {"schema": 1, "fingerprint": s.nes.fingerprint, "mu": res}, EXIT_OK if found else EXIT_NONE
    if cmd == "theta":
        return {"schema": 1, "m": cfg.m, "r": cfg.r, "coefficients": _theta_rows(s)}, EXIT_OK
    if cmd == "verify-norm":
        reports, ok = [], True
        for m in range(1, cfg.bound + 1):
            if math.gcd(m, cfg.N * cfg.p) != 1:
                continue
            for ell in primes_up_to(cfg.bound // m):
                if (cfg.N * cfg.p) % ell == 0:
                    continue
                rep = verify_norm_relation(s.nes, m, ell, cfg.r)
                ok &= rep.equal
                reports.append({"m": m, "ell": ell, "equal": rep.equal})
        return {"schema": 1, "all_equal": ok, "checks": reports}, EXIT_OK if ok else EXIT_INVARIANT
    if cmd == "invariants":
        return {"schema": 1, "invariants": stage_invariants(s)}, EXIT_OK
    if cmd == "ideal":
        return {"schema": 1, "generators": stage_ideal(s)}, EXIT_OK
    if cmd == "primes":
        primes = s.primes()
        s.save()
        rows = [{"ell": q.ell, "eta": q.eta, "index": q.index, "a_ell": q.a_ell} for q in primes]
        return {"schema": 1, "primes": rows}, EXIT_OK if rows else EXIT_NONE
    raise ConfigError(f"unknown command {cmd}")


def _to_csv(obj) -> str:
    """Flatten the main list of a result into CSV rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "coefficients" in obj:
        w.writerow(["a", "coefficient"])
        w.writerows(obj["coefficients"])
    elif "primes" in obj:
        w.writerow(["ell", "eta", "index", "a_ell"])
        w.writerows([r["ell"], r["eta"], r["index"], r["a_ell"]] for r in obj["primes"])
    elif "checks" in obj:
        w.writerow(["m", "ell", "equal"])
        w.writerows([r["m"], r["ell"], r["equal"]] for r in obj["checks"])
    else:
        raise ConfigError("--csv is available for theta, primes and verify-norm")
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        obj, code = run_command(ns.command, cfg)
        text = _to_csv(obj) if ns.fmt == "csv" else canonical_json(obj)
    except (ConfigError, CorruptCache) as exc:
        print(f"iwtheta: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantViolation as exc:
        print(f"iwtheta: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except IwthetaError as exc:
        print(f"iwtheta: {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
