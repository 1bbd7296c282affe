"""Deterministic counter-based randomness.

Every random choice in the package flows through a Stream so that a job is
reproducible from its seed alone, independent of platform, hash seed, and
call interleaving.  Streams are named: forking with a label gives an
independent substream, which keeps stage-level determinism even if stages
reorder their internal draws.
"""

import hashlib


class Stream:
    """SHA-256 counter generator: draws are pure functions of (seed, label, i)."""

    def __init__(self, seed, label=""):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.label = str(label)
        self._counter = 0
        self._prefix = self.seed.to_bytes(8, "big") + self.label.encode("utf-8") + b"\x00"
        self._wordbuf = []

    def _block(self):
        h = hashlib.sha256(self._prefix + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        return int.from_bytes(h, "big")

    def randint(self, n):
        """Uniform integer in [0, n).  Rejection keeps it exactly uniform."""
        assert n >= 1
        # 256 bits per block; rejection region is negligible but handled anyway
        limit = (1 << 256) - ((1 << 256) % n)
        while True:
            x = self._block()
            if x < limit:
                return x % n

    def randrange(self, lo, hi):
        return lo + self.randint(hi - lo)

    def choice(self, seq):
        return seq[self.randint(len(seq))]

    def fill(self, count, n):
        """Bulk draw: count integers in [0, n), four 64-bit words per block.

        The word stream is a pure function of (seed, label, word index), so
        two consumers that draw different batch sizes from equal streams see
        the same values in the same order.  Reduction is by plain modulus;
        the bias is below 2**-49 for any n < 2**15, which is fine for the
        search sweeps this feeds (never for anything that must be exactly
        uniform).
        """
        assert n >= 1
        buf = self._wordbuf
        mask = 0xFFFFFFFFFFFFFFFF
        need = count - len(buf)
        for _ in range((need + 3) // 4 if need > 0 else 0):
            x = self._block()
            buf.append(x & mask)
            buf.append((x >> 64) & mask)
            buf.append((x >> 128) & mask)
            buf.append(x >> 192)
        out = [w % n for w in buf[:count]]
        del buf[:count]
        return out

    def fork(self, label):
        """Independent substream; drawing from one never affects the other."""
        return Stream(self.seed, self.label + "/" + str(label))
