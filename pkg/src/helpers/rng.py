"""
Seeded SplitMix64 generator. Every random choice in the suites flows through
one of these so that a (seed, config) pair reproduces a run bit for bit.
"""

import hashlib

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """
    SplitMix64 with a few sampling helpers.

    Attributes:
        state (int): the 64-bit internal state.
    """

    def __init__(self, seed):
        self.state = seed & MASK64

    def next_u64(self):
        """Advance the state and return the next 64-bit output."""
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, bound):
        """Uniform integer in [0, bound) by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def randint(self, low, high):
        """Uniform integer in [low, high], both ends included."""
        return low + self.randbelow(high - low + 1)

    def choice(self, items):
        """Pick one element of a non-empty sequence."""
        return items[self.randbelow(len(items))]

    def shuffle(self, items):
        """Fisher-Yates shuffle in place."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items, count):
        """``count`` distinct elements of ``items`` in random order."""
        pool = list(items)
        if count > len(pool):
            raise ValueError("sample larger than population")
        for i in range(count):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:count]

    def fork(self, label):
        """
        Derive an independent generator for a named sub-task.

        The child seed depends only on the parent state and the label, so a
        suite run in a worker process sees the same stream as a serial run.
        """
        digest = hashlib.sha256(f"{self.state}:{label}".encode()).digest()
        return SplitMix64(int.from_bytes(digest[:8], "big"))
