"""Sweeps: run many checks over many groups and summarize the outcome."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import perm
from .catalog import fixture_path, manifest, resolve
from .criteria import (
    LEMMAS,
    CheckReport,
    check_corollary_A,
    check_theorem_delta,
    check_theorem_gamma,
    check_word_equivalence,
    frobenius_p_nilpotent,
    lemma_check,
    satisfies_P,
)
from .perm import GroupError
from .structure import is_prime, prime_divisors
from .words import parse_word

log = logging.getLogger(__name__)

CHECKS = ("P", "corollary_a", "theorem_gamma", "theorem_delta", "frobenius", "lemmas")


@dataclass
class SweepConfig:
    groups: list[str] = field(default_factory=list)
    words: list[str] = field(default_factory=lambda: ["gamma:2", "gamma:3", "delta:2"])
    primes: str | list[int] = "auto"
    checks: list[str] = field(default_factory=list)
    gamma_ks: list[int] = field(default_factory=lambda: [1, 2, 3])
    delta_ks: list[int] = field(default_factory=lambda: [2, 3])
    lemmas: list[str] = field(default_factory=lambda: list(LEMMAS))
    counterexamples: list[dict] = field(default_factory=list)
    caps: dict[str, int] = field(default_factory=dict)
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> SweepConfig:
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise GroupError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> SweepConfig:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise GroupError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)

    def validate(self) -> None:
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise GroupError(f"unknown checks {bad}; choose from {list(CHECKS)}")
        if self.primes != "auto":
            if not isinstance(self.primes, list) or not all(isinstance(p, int) and is_prime(p) for p in self.primes):
                raise GroupError(f"primes must be 'auto' or a list of primes, got {self.primes!r}")
        bad = [n for n in self.lemmas if n not in LEMMAS]
        if bad:
            raise GroupError(f"unknown lemmas {bad}")
        for w in self.words:
            parse_word(w)
        for entry in self.counterexamples:
            if "group" not in entry or "word" not in entry:
                raise GroupError(f"counterexample entry needs 'group' and 'word': {entry}")
            parse_word(entry["word"])

    def expanded_groups(self) -> list[str]:
        out = []
        for g in self.groups:
            if g in ("catalog", "default"):
                out.extend(e.name for e in manifest())
            else:
                out.append(g)
        return out


@dataclass
class SweepResult:
    reports: list[CheckReport]
    summary: dict[str, int]

    @property
    def exit_code(self) -> int:
        return 0 if self.summary["mismatches"] == 0 and self.summary["errors"] == 0 else 1


def _primes_for(order: int, primes) -> list[int]:
    return prime_divisors(order) if primes == "auto" else list(primes)


def _lemma_reports(G, cfg: SweepConfig, primes: list[int]) -> list[CheckReport]:
    out = []
    gk = [k for k in cfg.gamma_ks if k >= 2]
    words = [parse_word(w) for w in cfg.words]
    for name in cfg.lemmas:
        if name in ("pprime_word", "p_subgroup_gamma"):
            out += [lemma_check(name, G, k=k, p=p) for k in gk for p in primes]
        elif name in ("pprime_word_delta", "p_subgroup_delta"):
            out += [lemma_check(name, G, k=k, p=p) for k in cfg.delta_ks for p in primes]
        elif name == "inclusion":
            out += [lemma_check(name, G, k=k) for k in (1, 2, 3)]
        elif name == "gamma_primepower_gen":
            out += [lemma_check(name, G, k=k) for k in gk]
        elif name == "gamma_qpower_gen":
            out += [lemma_check(name, G, k=k, p=p) for k in gk for p in primes]
        elif name == "delta_focal":
            out += [lemma_check(name, G, k=i, q=q) for i in (1, 2, 3) for q in primes]
        elif name in ("fitp_eq_op", "meta"):
            out += [lemma_check(name, G, p=p) for p in primes]
        elif name in ("subgroup_closure", "quotient_closure"):
            out += [lemma_check(name, G, p=p, word=w) for w in words for p in primes]
        elif name == "g2_gk":
            out += [lemma_check(name, G, k=k) for k in gk if k > 2]
    return out


def _error_report(group: str, exc: Exception, check: str = "error") -> CheckReport:
    return CheckReport(check, group, None, False, witness={"error": str(exc)}, info={"error": type(exc).__name__})


def run_group(spec: str, cfg: SweepConfig) -> list[CheckReport]:
    """Every configured check on one group; errors become per-entry reports."""
    try:
        G = resolve(spec)
        G.name = spec if G.name is None else G.name
        primes = _primes_for(G.order(), cfg.primes)
    except (GroupError, OSError) as exc:
        return [_error_report(spec, exc)]
    reports: list[CheckReport] = []

    def guarded(check: str, fn):
        try:
            result = fn()
            reports.extend(result if isinstance(result, list) else [result])
        except GroupError as exc:
            reports.append(_error_report(G.name, exc, check))

    for check in cfg.checks:
        if check == "P":
            for w in cfg.words:
                for p in primes:
                    guarded("P", lambda w=w, p=p: satisfies_P(G, parse_word(w), p))
        elif check == "corollary_a":
            for p in primes:
                guarded(check, lambda p=p: check_corollary_A(G, p))
        elif check == "theorem_gamma":
            for k in cfg.gamma_ks:
                for p in primes:
                    guarded(check, lambda k=k, p=p: check_theorem_gamma(G, k, p))
        elif check == "theorem_delta":
            for k in cfg.delta_ks:
                for p in primes:
                    guarded(check, lambda k=k, p=p: check_theorem_delta(G, k, p))
        elif check == "frobenius":
            for p in primes:
                guarded(check, lambda p=p: frobenius_p_nilpotent(G, p))
        elif check == "lemmas":
            guarded("lemmas", lambda: _lemma_reports(G, cfg, primes))
    return reports


def run_counterexample(entry: dict) -> list[CheckReport]:
    spec = entry["group"]
    try:
        G = resolve(spec)
        w = parse_word(entry["word"])
        primes = entry.get("primes", "auto")
        primes = _primes_for(G.order(), primes)
    except GroupError as exc:
        return [_error_report(spec, exc)]
    expect_equivalent = entry.get("expect", "equivalence") != "non_equivalence"
    reports = []
    for p in primes:
        try:
            r = check_word_equivalence(G, w, p, expect_equivalent=expect_equivalent)
        except GroupError as exc:
            r = _error_report(G.name, exc, "word_equivalence")
        reports.append(r)
    return reports


def _task(args):
    kind, payload, cfg_dict = args
    cfg = SweepConfig(**cfg_dict)
    _apply_caps(cfg)
    if kind == "group":
        reports = run_group(payload, cfg)
    else:
        reports = run_counterexample(payload)
    return reports


def _apply_caps(cfg: SweepConfig) -> None:
    if "enum" in cfg.caps:
        perm.limits.enum_cap = int(cfg.caps["enum"])
    if "tuple" in cfg.caps:
        perm.limits.tuple_cap = int(cfg.caps["tuple"])


def summarize(reports: list[CheckReport]) -> dict[str, int]:
    errors = sum(1 for r in reports if "error" in r.info and r.witness and "error" in r.witness)
    return {
        "reports": len(reports),
        "holds": sum(1 for r in reports if r.holds and not r.skipped),
        "fails": sum(1 for r in reports if not r.holds and not r.skipped),
        "skipped": sum(1 for r in reports if r.skipped),
        "mismatches": sum(1 for r in reports if r.mismatch),
        "errors": errors,
    }


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> SweepResult:
    """Run a sweep; with ``workers > 1`` groups are processed in parallel.

    Reports are sorted by (group, check, word, k, p), so serial and parallel
    runs produce the same list.
    """
    cfg.validate()
    workers = cfg.workers if workers is None else workers
    cfg_dict = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    tasks = [("group", g, cfg_dict) for g in cfg.expanded_groups()]
    tasks += [("counterexample", e, cfg_dict) for e in cfg.counterexamples]
    log.info("sweep: %d tasks, %d workers", len(tasks), workers)
    # config caps apply to this sweep only
    saved = (perm.limits.enum_cap, perm.limits.tuple_cap)
    try:
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(_task, tasks))
        else:
            chunks = [_task(t) for t in tasks]
    finally:
        perm.limits.enum_cap, perm.limits.tuple_cap = saved
    reports = sorted((r for chunk in chunks for r in chunk), key=CheckReport.sort_key)
    return SweepResult(reports, summarize(reports))


def default_config() -> SweepConfig:
    return SweepConfig.load(fixture_path("sweep_default.json"))


def normalized_lines(reports: list[CheckReport]) -> list[str]:
    """JSON lines with timing removed, for determinism comparisons."""
    out = []
    for r in reports:
        d = r.to_json()
        d["ms"] = 0.0
        out.append(json.dumps(d, sort_keys=True))
    return out
