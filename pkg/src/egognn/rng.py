"""Cross-language reproducible RNG: xoshiro256** seeded via splitmix64.

Stream discipline: every consumer derives its own stream with derive_seed,
so edge generation, feature corruption, and splits never share state.
"""

MASK64 = (1 << 64) - 1


def splitmix64_next(state: int):
    """One splitmix64 step; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(base: int, *indices: int) -> int:
    """Deterministically fold stream indices into a 64-bit sub-seed."""
    state = base & MASK64
    state, out = splitmix64_next(state)
    for idx in indices:
        state = (state ^ ((idx & MASK64) * 0x9E3779B97F4A7C15)) & MASK64
        state, out = splitmix64_next(state)
    return out


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256**; state words filled from splitmix64 of the seed."""

    def __init__(self, seed: int):
        state = seed & MASK64
        self.s = []
        for _ in range(4):
            state, word = splitmix64_next(state)
            self.s.append(word)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (unbiased)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (MASK64 + 1) - ((MASK64 + 1) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound
