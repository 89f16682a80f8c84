"""Bacterial-foraging search for a cheap chain split point.

Each bacterium proposes a split. Its fitness is the trust-weighted mean
delay of a simulated batch of appends to the resulting active segment,
90% consistent blocks and 10% tampered ones, so lower is better. A
population is culled against a threshold proportional to the mean
fitness and the culled slots are re-seeded; the best split ever seen is
kept (elitist) and returned.
"""

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .ledger import (
    Chain,
    ChainCostModel,
    SidechainConfig,
    active_segment,
    append,
    make_block,
    split,
)
from .seeding import mix64

_FITNESS_TAG = 0xF17


@dataclass(frozen=True)
class BfoConfig:
    nb: int = 20          # population size
    lb: float = 0.8       # culling-threshold factor, in (0, 2]
    ni: int = 30          # iterations
    n_eval: int = 10      # appends simulated per fitness call, multiple of 10
    rng_seed: int = 1

    def __post_init__(self):
        if self.nb < 1:
            raise ValueError("population size nb must be >= 1")
        if not 0 < self.lb <= 2:
            raise ValueError("lb must be in (0, 2]")
        if self.ni < 0:
            raise ValueError("iteration count ni must be >= 0")
        if self.n_eval < 10 or self.n_eval % 10 != 0:
            raise ValueError("n_eval must be a positive multiple of 10")


@dataclass
class Bacterium:
    split_point: int
    fitness: Optional[float] = None


def bounded_draw(center: float, spread: float, lo: int, hi: int,
                 rng: random.Random) -> int:
    """Uniform integer from [round(center - spread), round(center + spread)],
    clamped into [lo, hi]. Mass outside the clamp piles onto the bounds."""
    if spread < 0:
        raise ValueError("spread must be >= 0")
    if lo > hi:
        raise ValueError("empty draw range")
    value = rng.randint(round(center - spread), round(center + spread))
    return max(lo, min(hi, value))


def spawn_population(cfg: BfoConfig, chain_len: int, rng: random.Random) -> List[Bacterium]:
    """nb bacteria with split points drawn around nb*lb/2, spread nb/2."""
    if chain_len < 2:
        raise ValueError("chain must have at least 2 blocks to split")
    center = cfg.nb * cfg.lb / 2.0
    spread = cfg.nb / 2.0
    return [
        Bacterium(split_point=bounded_draw(center, spread, 1, chain_len - 1, rng))
        for _ in range(cfg.nb)
    ]


def evaluate_append_run(active: Chain, slots: Sequence[bool],
                        miners: Sequence[Tuple[int, float]],
                        cost: ChainCostModel) -> float:
    """Run the append batch and return the fitness.

    slots[i] says whether append i carries a consistent block. Miners
    are (id, trust_score) pairs taken round-robin. The result is
    mean(trust-weighted accepted-append delays) plus
    mean(trust-weighted rejection delays). Mutates `active`; pass a copy.
    """
    if not miners:
        raise ValueError("need at least one miner")
    if not slots:
        raise ValueError("empty append batch")
    ok_sum = ok_n = bad_sum = bad_n = 0
    for i, consistent in enumerate(slots):
        miner_id, miner_tl = miners[i % len(miners)]
        block = make_block(
            index=len(active),
            miner=miner_id,
            payload=b"eval:%d:%d" % (i, miner_id),
            prev_digest=active.tip_digest(),
            tamper=not consistent,
        )
        active, delay, accepted = append(active, block, miner_tl, cost)
        if accepted:
            ok_sum += delay * miner_tl
            ok_n += 1
        else:
            bad_sum += delay * miner_tl
            bad_n += 1
    fitness = 0.0
    if ok_n:
        fitness += ok_sum / ok_n
    if bad_n:
        fitness += bad_sum / bad_n
    return fitness


def split_fitness(b: Bacterium, chain: Chain, cost: ChainCostModel,
                  miners: Sequence[Tuple[int, float]], n_eval: int,
                  rng: random.Random) -> float:
    """Fitness of one proposed split, on a throwaway copy of the chain.

    One tenth of the appends are tampered; their positions in the batch
    are drawn without replacement from the given rng.
    """
    cfg = SidechainConfig(split_point=b.split_point, total_len=len(chain))
    part_a, part_b = split(chain, cfg)
    active = active_segment(part_a, part_b)
    n_bad = n_eval // 10
    slots = [True] * n_eval
    for pos in rng.sample(range(n_eval), n_bad):
        slots[pos] = False
    return evaluate_append_run(active, slots, miners, cost)


def fitness_seed(master_seed: int, split_point: int, chain_len: int) -> int:
    """Seed for one fitness evaluation, derived from the active-segment
    length so mirrored splits (s and len-s) see the same draw."""
    active_len = min(split_point, chain_len - split_point)
    return mix64(master_seed, _FITNESS_TAG, active_len)


def _evaluate(b: Bacterium, cfg: BfoConfig, chain: Chain, cost: ChainCostModel,
              miners: Sequence[Tuple[int, float]]) -> None:
    rng = random.Random(fitness_seed(cfg.rng_seed, b.split_point, len(chain)))
    b.fitness = split_fitness(b, chain, cost, miners, cfg.n_eval, rng)


def cull_threshold(population: Sequence[Bacterium], lb: float) -> float:
    """lb times the population mean fitness; above it a bacterium dies."""
    if not population:
        raise ValueError("empty population")
    if any(b.fitness is None for b in population):
        raise ValueError("population has unevaluated bacteria")
    return lb * sum(b.fitness for b in population) / len(population)


def step_population(population: List[Bacterium], cfg: BfoConfig, chain: Chain,
                    cost: ChainCostModel, miners: Sequence[Tuple[int, float]],
                    rng: random.Random) -> List[Bacterium]:
    """One culling round: strictly-above-threshold bacteria are replaced
    by fresh spawns (and evaluated); survivors keep their fitness."""
    fth = cull_threshold(population, cfg.lb)
    center = cfg.nb * cfg.lb / 2.0
    spread = cfg.nb / 2.0
    out = []
    for b in population:
        if b.fitness > fth:
            fresh = Bacterium(split_point=bounded_draw(center, spread, 1, len(chain) - 1, rng))
            _evaluate(fresh, cfg, chain, cost, miners)
            out.append(fresh)
        else:
            out.append(b)
    return out


def optimize_trace(cfg: BfoConfig, chain: Chain, cost: ChainCostModel,
                   miners: Sequence[Tuple[int, float]]
                   ) -> Tuple[SidechainConfig, List[Tuple[int, float, int]]]:
    """Full search; also returns (iteration, best_fitness, best_split)
    per iteration, iteration 0 being the initial spawn."""
    if len(chain) < 2:
        raise ValueError("chain must have at least 2 blocks to split")
    rng = random.Random(cfg.rng_seed)
    population = spawn_population(cfg, len(chain), rng)
    for b in population:
        _evaluate(b, cfg, chain, cost, miners)
    best = min(population, key=lambda b: b.fitness)
    best_split, best_fitness = best.split_point, best.fitness
    history = [(0, best_fitness, best_split)]
    for it in range(1, cfg.ni + 1):
        population = step_population(population, cfg, chain, cost, miners, rng)
        contender = min(population, key=lambda b: b.fitness)
        if contender.fitness < best_fitness:
            best_fitness, best_split = contender.fitness, contender.split_point
        history.append((it, best_fitness, best_split))
    return SidechainConfig(split_point=best_split, total_len=len(chain)), history


def optimize_split(cfg: BfoConfig, chain: Chain, cost: ChainCostModel,
                   miners: Sequence[Tuple[int, float]]) -> SidechainConfig:
    """Best split found after ni culling rounds (elitist minimum)."""
    result, _ = optimize_trace(cfg, chain, cost, miners)
    return result
