"""Orchestration: run every check for every (group, prime) case of a corpus.

Cases are independent jobs scheduled on a thread pool (capped by the
BGAWC_THREADS environment variable); results are merged by sorting on
canonical keys, so the report payload does not depend on worker count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import harness
from . import linalg as la
from .chains import DEFAULT_CHAIN_GUARD, DEFAULT_POSET_GUARD
from .corpus import CorpusEntry, default_corpus
from .errors import BgawcError
from .groups import DEFAULT_ORDER_GUARD
from .modrep import chop_matrices, class_count_oracle, regular_representation
from .pipeline import DEFAULT_CHOP_BUDGET, World, derive_seed
from .report import Report, census_fingerprint


@dataclass
class RunConfig:
    entries: list[CorpusEntry] = field(default_factory=default_corpus)
    seed: int = 0
    max_order: int = DEFAULT_ORDER_GUARD
    poset_guard: int = DEFAULT_POSET_GUARD
    chain_guard: int = DEFAULT_CHAIN_GUARD
    chop_budget: int = DEFAULT_CHOP_BUDGET
    families: tuple[str, ...] = ("all", "normal")
    workers: int | None = None

    def guard_dict(self) -> dict:
        return {"max_order": self.max_order, "poset": self.poset_guard,
                "chains": self.chain_guard, "chop_budget": self.chop_budget}


def worker_count(config: RunConfig) -> int:
    if config.workers is not None:
        return max(1, config.workers)
    env = os.environ.get("BGAWC_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _case_dict(res: harness.VerificationResult) -> dict:
    c = res.case
    return {
        "group": c.group, "order": c.order, "prime": c.prime,
        "check": c.check, "family": c.family,
        "block": {"index": c.block_index, "defect": c.block_defect,
                  "min_field_degree": c.block_min_field,
                  "support_size": c.block_support},
        "T_exponent": c.t_exponent,
        "lhs": int(res.lhs), "rhs": int(res.rhs), "holds": bool(res.holds),
        "skipped": bool(res.skipped), "note": res.note,
        "ledger": [{"chain": ch, "length": int(ln), "count": int(ct)}
                   for ch, ln, ct in res.ledger],
    }


def run_case(entry: CorpusEntry, prime: int, config: RunConfig) -> dict:
    """All checks for one (group, prime): census, oracle cross-checks, identities."""
    G = entry.resolve(order_guard=config.max_order)
    world = World(G, prime, seed=config.seed, poset_guard=config.poset_guard,
                  chain_guard=config.chain_guard, chop_budget=config.chop_budget)
    data = world.data
    cases: list[dict] = []
    oracles: list[dict] = []

    census = {
        "group": G.name, "order": G.order, "prime": prime,
        "field_degree": world.field.degree,
        "blocks": [{
            "index": b.index, "defect": b.defect,
            "min_field_degree": b.minimal_field_degree,
            "support_size": b.support_size(),
            "character_fingerprint": census_fingerprint(
                tuple(int(v) for v in la.to_index(world.field, b.central_character))),
            "ibr_count": len(data.ibr_indices(b.coords)),
        } for b in data.blocks],
    }

    def oracle(kind, value, expected, exponent=None):
        oracles.append({"group": G.name, "prime": prime, "kind": kind,
                        "value": int(value), "expected": int(expected),
                        "exponent": exponent, "holds": value == expected})

    # structural oracles: decomposition axioms and the character pairing are
    # enforced at construction; record them, then run the counting cross-checks
    oracle("idempotent_axioms", len(data.blocks), len(data.blocks))
    oracle("character_pairing", len(data.blocks), len(data.blocks))
    n_preg = len(data.p_regular)
    oracle("brauer_count_blocks", sum(len(data.ibr_indices(b.coords)) for b in data.blocks),
           n_preg)
    rng = np.random.default_rng(derive_seed(config.seed, "fullchop", G.canonical_key()))
    rep = regular_representation(G, None, data.algebra)
    factors = chop_matrices(world.field, rep.matrices, rep.dimension, rng,
                            config.chop_budget)
    distinct = {(dim, data._fingerprint_from_matrices(mats, dim)) for mats, dim in factors}
    oracle("brauer_count_regular_chop", len(distinct), n_preg)
    d = world.field.degree
    for m in range(1, d + 1):
        if d % m:
            continue
        tw = data.twist_perm(m)
        fixed_total = sum(1 for i in range(len(data.simples)) if tw[i] == i)
        oracle("galois_fixed_count", fixed_total, class_count_oracle(G, prime, m),
               exponent=m)

    blocks_plus = list(data.blocks) + [None]
    for b in blocks_plus:
        coords = data.algebra.one() if b is None else b.coords
        for m in world.admissible_exponents(coords):
            cases.append(_case_dict(harness.verify_theorem_iv(world, b, m)))
            if set(config.families) >= {"all", "normal"}:
                cases.append(_case_dict(harness.verify_family_agreement(world, b, m)))
            if b is not None:
                cases.append(_case_dict(harness.verify_weight_equation(world, b, m)))
                cases.append(_case_dict(harness.verify_recursion_lemma(world, b, m)))
                cases.append(_case_dict(harness.functorial_multiplicity(world, b, m)))
                for ch in world.chains("normal"):
                    if ch.length >= 1:
                        cases.append(_case_dict(
                            harness.verify_inflation_lemma(world, b, ch, m)))
        if b is not None:
            for m in range(world.field.degree):
                cases.append(_case_dict(harness.conjugate_invariants(world, b, m)))
    return {"census": census, "cases": cases, "oracles": oracles}


def run_corpus(config: RunConfig) -> Report:
    report = Report(seed=config.seed, guards=config.guard_dict())
    jobs = []
    for entry in config.entries:
        try:
            G = entry.resolve(order_guard=config.max_order)
            primes = entry.primes_for(G)
        except BgawcError as exc:
            report.errors.append({"group": entry.name, "prime": None, "error": str(exc)})
            continue
        for p in primes:
            jobs.append((entry, p))

    def work(job):
        entry, p = job
        t0 = time.time()
        try:
            out = run_case(entry, p, config)
            out["key"] = f"{entry.name}:p{p}"
            out["elapsed"] = time.time() - t0
            return out
        except BgawcError as exc:
            return {"key": f"{entry.name}:p{p}", "error": str(exc),
                    "group": entry.name, "prime": p, "elapsed": time.time() - t0}

    nw = worker_count(config)
    if nw <= 1 or len(jobs) <= 1:
        results = [work(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(work, jobs))
    for out in results:
        report.timings[out["key"]] = out["elapsed"]
        if "error" in out:
            report.errors.append({"group": out["group"], "prime": out["prime"],
                                  "error": out["error"]})
            continue
        report.censuses.append(out["census"])
        report.cases.extend(out["cases"])
        report.oracles.extend(out["oracles"])
    report.sort()
    return report
