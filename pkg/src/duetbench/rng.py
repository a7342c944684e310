"""Portable deterministic randomness for board generation.

SplitMix64 is used instead of a language-level RNG so that a (wordpool, seed)
pair produces the same board in any implementation of the algorithm. Bounded
draws use rejection sampling, which is modulo-bias free.

Reference sequence (seed=0): first three outputs of next_u64() are
0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F.
"""

MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix64 generator (Steele, Lea & Flood 2014)."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection of the biased tail."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = MASK64 + 1 - ((MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def sample_prefix(self, items: list, k: int) -> list:
        """Draw k items without replacement via a partial Fisher-Yates shuffle.

        The draw order is part of the contract: callers assign meaning to
        positions within the returned prefix.
        """
        if k > len(items):
            raise ValueError(f"cannot sample {k} from {len(items)} items")
        pool = list(items)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1):
            j = i + self.below(len(items) - i)
            items[i], items[j] = items[j], items[i]
