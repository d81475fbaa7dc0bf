"""Evolutionary search over condition bitstrings, one run per class.

A genome is a boolean vector over the class's condition pool. Decoding groups
the selected conditions by feature, unions their values, drops any feature
whose union covers its whole domain, and conjoins the rest into a rule.
Fitness is the signed mutual information of the decoded rule against the
model labels; genomes that decode to nothing score a flat penalty so the
search flees them.

The loop is a plain generational GA: tournament selection, uniform crossover,
bit-flip mutation, full replacement, plus a best-ever archive so good rules
found early are never lost. All randomness flows from the config seed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .mining import ConditionPool
from .rules import EMPTY_RULE_FITNESS, Condition, Rule


@dataclass(frozen=True)
class GaConfig:
    generations: int = 1000
    population_size: int = 600
    crossover_prob: float = 0.25
    mutation_prob: float = 0.2
    tournament_k: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError("crossover_prob must be in [0, 1]")
        if not (0.0 <= self.mutation_prob <= 1.0):
            raise ValueError("mutation_prob must be in [0, 1]")
        if self.tournament_k < 1:
            raise ValueError("tournament_k must be >= 1")


@dataclass
class EvolvedRuleSet:
    """Duplicate-free scored rules for one class, best first."""

    class_label: str
    rules: list[tuple[Rule, float]]
    config: GaConfig
    pool_provenance: str


def decode(genome, pool: ConditionPool, class_label: str) -> Rule | None:
    """Genome -> rule, or None when every feature's union went vacuous."""
    sel = np.nonzero(np.asarray(genome, dtype=bool))[0]
    if len(sel) == 0:
        return None
    merged: dict[int, set[int]] = {}
    domains: dict[int, int] = {}
    for i in sel:
        c = pool.conditions[int(i)]
        merged.setdefault(c.feature, set()).update(c.values)
        domains[c.feature] = c.domain_size
    clause = []
    for f in sorted(merged):
        union = merged[f]
        if len(union) >= domains[f]:
            continue  # union covers the whole domain: no constraint
        clause.append(Condition(f, frozenset(union), domains[f]))
    if not clause:
        return None
    return Rule(tuple(clause), class_label)


class _Evaluator:
    """Shared per-run machinery: condition cover masks and a fitness cache.

    Masks are precomputed once per pool condition; a decoded rule's cover mask
    is, per feature, the OR of its selected condition masks, ANDed across
    features. Fitness caching is keyed by the decoded clause, which stays
    small because merging collapses many genomes onto one clause.
    """

    def __init__(self, pool: ConditionPool, class_label: str, binned: np.ndarray, model_labels):
        self.pool = pool
        self.class_label = class_label
        binned = np.asarray(binned)
        labels = np.asarray([str(v) for v in model_labels])
        if len(binned) != len(labels):
            raise ValueError("rows/labels length mismatch")
        self.n = len(labels)
        self.hit = labels == class_label
        self.c1 = int(np.count_nonzero(self.hit))
        self.cond_masks = [
            np.isin(binned[:, c.feature], c.sorted_values()) for c in pool.conditions
        ]
        self.features = np.array([c.feature for c in pool.conditions], dtype=np.int64)
        self.domains = {c.feature: c.domain_size for c in pool.conditions}
        self.value_sets = [c.values for c in pool.conditions]
        self.cache: dict[tuple, tuple[float, Rule | None]] = {}

    def fitness_of_mask(self, mask: np.ndarray) -> float:
        n11 = int(np.count_nonzero(mask & self.hit))
        r1 = int(np.count_nonzero(mask))
        n12 = r1 - n11
        n21 = self.c1 - n11
        n22 = self.n - r1 - n21
        n = self.n
        c1, c2 = self.c1, n - self.c1
        r2 = n - r1
        if r1 == 0 or r2 == 0 or c1 == 0 or c2 == 0:
            return 0.0
        total = 0.0
        for nab, ra, cb in ((n11, r1, c1), (n12, r1, c2), (n21, r2, c1), (n22, r2, c2)):
            if nab:
                total += nab * math.log2(nab * n / (ra * cb))
        mi = max(total / n, 0.0)
        return mi if n11 * n >= r1 * c1 else -mi

    def evaluate_genome(self, genome: np.ndarray) -> tuple[float, Rule | None, tuple]:
        sel = np.nonzero(genome)[0]
        if len(sel) == 0:
            return EMPTY_RULE_FITNESS, None, ()
        merged: dict[int, set[int]] = {}
        by_feature: dict[int, list[int]] = {}
        for i in sel:
            i = int(i)
            f = int(self.features[i])
            merged.setdefault(f, set()).update(self.value_sets[i])
            by_feature.setdefault(f, []).append(i)
        clause_parts = []
        active: list[tuple[int, list[int]]] = []
        for f in sorted(merged):
            union = merged[f]
            if len(union) >= self.domains[f]:
                continue
            clause_parts.append((f, tuple(sorted(union))))
            active.append((f, by_feature[f]))
        key = tuple(clause_parts)
        if not key:
            return EMPTY_RULE_FITNESS, None, ()
        hitcache = self.cache.get(key)
        if hitcache is not None:
            return hitcache[0], hitcache[1], key
        mask = np.ones(self.n, dtype=bool)
        for f, idxs in active:
            fmask = self.cond_masks[idxs[0]]
            if len(idxs) > 1:
                fmask = fmask.copy()
                for i in idxs[1:]:
                    fmask |= self.cond_masks[i]
            mask &= fmask
        fit = self.fitness_of_mask(mask)
        rule = Rule(
            tuple(Condition(f, frozenset(vals), self.domains[f]) for f, vals in key),
            self.class_label,
        )
        self.cache[key] = (fit, rule)
        return fit, rule, key


def evaluate(genome, pool: ConditionPool, class_label: str, binned, model_labels) -> float:
    """Standalone genome fitness (decode + score); -2.0 for vacuous genomes."""
    ev = _Evaluator(pool, class_label, binned, model_labels)
    fit, _, _ = ev.evaluate_genome(np.asarray(genome, dtype=bool))
    return fit


def evolve_rules(
    pool: ConditionPool,
    class_label: str,
    binned,
    model_labels,
    cfg: GaConfig,
    log_stream=None,
) -> EvolvedRuleSet:
    """Run the GA for one class and return every distinct rule worth keeping.

    The archive holds the best population_size distinct decoded rules seen in
    any generation; the returned list merges the final population into it and
    sorts by fitness (ties: fewer conditions, then clause identity).
    """
    if len(pool.conditions) < 1:
        raise ValueError("condition pool is empty")
    if pool.class_label != class_label:
        raise ValueError("pool was mined for a different class")
    length = len(pool.conditions)
    pop_n = cfg.population_size
    rng = np.random.default_rng(cfg.seed)
    ev = _Evaluator(pool, class_label, binned, model_labels)

    density = min(0.5, 4.0 / length)
    population = rng.random((pop_n, length)) < density

    archive: dict[tuple, tuple[float, Rule, int]] = {}
    arrival = 0

    def note(key: tuple, fit: float, rule: Rule | None):
        nonlocal arrival
        if rule is None or key in archive:
            return
        archive[key] = (fit, rule, arrival)
        arrival += 1

    def trim_archive():
        if len(archive) <= pop_n:
            return
        keep = sorted(archive.items(), key=lambda kv: (-kv[1][0], kv[1][2]))[:pop_n]
        archive.clear()
        archive.update(keep)

    def score_population(pop: np.ndarray) -> np.ndarray:
        fits = np.empty(len(pop))
        for i, genome in enumerate(pop):
            fit, rule, key = ev.evaluate_genome(genome)
            fits[i] = fit
            note(key, fit, rule)
        trim_archive()
        return fits

    fitnesses = score_population(population)

    for gen in range(cfg.generations):
        # rank the population once: better fitness first, then fewer set bits,
        # then lexicographic genome bytes; tournament winners are min-rank
        popcounts = population.sum(axis=1)
        genome_bytes = [population[i].tobytes() for i in range(pop_n)]
        order = sorted(
            range(pop_n), key=lambda i: (-fitnesses[i], popcounts[i], genome_bytes[i])
        )
        ranks = np.empty(pop_n, dtype=np.int64)
        ranks[order] = np.arange(pop_n)

        entrants = rng.integers(0, pop_n, size=(pop_n, cfg.tournament_k))
        winners = entrants[np.arange(pop_n), np.argmin(ranks[entrants], axis=1)]
        parents = population[winners]

        children = parents.copy()
        n_pairs = pop_n // 2
        gates = rng.random(n_pairs) < cfg.crossover_prob
        swaps = rng.random((n_pairs, length)) < 0.5
        for p in np.nonzero(gates)[0]:
            i = 2 * p
            swap = swaps[p]
            a = np.where(swap, parents[i + 1], parents[i])
            children[i + 1] = np.where(swap, parents[i], parents[i + 1])
            children[i] = a

        mut_gates = rng.random(pop_n) < cfg.mutation_prob
        flip_draws = rng.random((pop_n, length)) < (1.0 / length)
        forced = rng.integers(0, length, size=pop_n)
        for i in np.nonzero(mut_gates)[0]:
            flips = flip_draws[i]
            if not flips.any():
                flips = flips.copy()
                flips[forced[i]] = True
            children[i] ^= flips

        population = children
        fitnesses = score_population(population)

        if log_stream is not None:
            best = max(v[0] for v in archive.values()) if archive else EMPTY_RULE_FITNESS
            log_stream.write(
                json.dumps(
                    {
                        "generation": gen + 1,
                        "best_fitness": best,
                        "mean_fitness": float(fitnesses.mean()),
                        "archive_size": len(archive),
                    },
                    sort_keys=True,
                )
                + "\n"
            )

    final: dict[tuple, tuple[float, Rule, int]] = dict(archive)
    for i in range(pop_n):
        fit, rule, key = ev.evaluate_genome(population[i])
        if rule is not None and key not in final:
            final[key] = (fit, rule, arrival + i)
    ordered = sorted(
        final.items(), key=lambda kv: (-kv[1][0], len(kv[0]), kv[0])
    )
    rules = [(rule, fit) for _, (fit, rule, _) in ordered]
    return EvolvedRuleSet(class_label, rules, cfg, pool.provenance)
