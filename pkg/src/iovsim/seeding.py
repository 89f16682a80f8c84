"""Deterministic derivation of independent RNG stream seeds.

Every stochastic component (deployment, pair sampling, attack marking,
optimizer evaluation) gets its own stream derived from one master seed,
so toggling one component never shifts the draws seen by another.
"""

MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return (z ^ (z >> 31)) & MASK64


def mix64(*parts: int) -> int:
    """Fold integers into a single 64-bit seed. Order-sensitive."""
    h = 0
    for p in parts:
        h = _splitmix64(h ^ (p & MASK64))
    return h
