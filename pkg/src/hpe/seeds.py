"""Deterministic 64-bit seed derivation for reproducible parallel runs.

Every stochastic component derives its own seed by folding context words
(version index, sample index, case index, ...) into a base seed, one
splitmix64 step per word.  Results therefore never depend on execution
order: any sample of any version of any case can be regenerated in
isolation.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# splitmix64 constants (Steele/Lea/Flood; the same values used by
# java.util.SplittableRandom and most C implementations).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# Context tags keeping the harness's independent random streams disjoint.
PROBLEM_STREAM = 0x505242  # problem generation
BASELINE_STREAM = 0x424153  # direct-hardware baseline sampling
ENHANCE_STREAM = 0x454E48  # per-version sampling inside run_hpe
SHUFFLE_STREAM = 0x534846  # cross-set pairing shuffles


def splitmix64(state: int) -> int:
    """One splitmix64 step: advance by the golden gamma, then finalize."""
    z = (state + _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def mix64(seed: int, *words: int) -> int:
    """Fold ``words`` into ``seed``, one splitmix64 step per word.

    Folding left-associates, i.e. ``mix64(s, a, b) == mix64(mix64(s, a), b)``,
    so a caller may derive a per-version seed first and a per-sample seed
    from it later without changing the resulting value.
    """
    x = seed & MASK64
    for w in words:
        x = splitmix64(x ^ (w & MASK64))
    return x
