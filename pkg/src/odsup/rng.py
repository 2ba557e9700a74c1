"""Counter-based random streams.

All randomness in the package comes from Philox4x64-10 (numpy's
``np.random.Philox``). A stream is addressed by ``(seed, domain, index)``:

* the 128-bit key is ``(seed, domain)``;
* the 256-bit counter starts at ``(0, 0, index, 0)``.

Stream ``index`` therefore never overlaps stream ``index + 1`` for fewer than
2**128 draws, and any stream can be produced without touching the others. That
is what makes bootstrap replicates and Monte Carlo repetitions reproducible
independent of execution order or worker count.

Uniforms are built from the top 53 bits of each raw word as
``((x >> 11) + 0.5) / 2**53`` (strictly inside (0, 1)). Normals are obtained
from those by the inverse normal CDF (``scipy.special.ndtri``). The whole recipe
is named by :data:`RNG_SCHEME` and echoed in reports.
"""

import numpy as np
from scipy.special import ndtri

RNG_SCHEME = "philox4x64-10/key=(seed,domain)/ctr=(0,0,index,0)/u53-midpoint/ndtri"

UINT64_MAX = 2**64 - 1

# Domain tags keep unrelated consumers on disjoint key spaces.
DOMAIN_BOOTSTRAP = 1
DOMAIN_DATA = 2
DOMAIN_MC_DATA = 3
DOMAIN_MC_BOOTSTRAP = 4

_U53 = 1.0 / 9007199254740992.0


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= UINT64_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def _bitgen(seed, domain, index):
    key = np.array([check_seed(seed), domain], dtype=np.uint64)
    counter = np.array([0, 0, index, 0], dtype=np.uint64)
    return np.random.Philox(key=key, counter=counter)


def raw_words(seed, domain, index, count):
    """``count`` raw 64-bit words from substream ``index``."""
    return _bitgen(seed, domain, index).random_raw(count)


def uniforms(seed, domain, index, count):
    words = raw_words(seed, domain, index, count)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * _U53


def normals(seed, domain, index, count):
    """Standard normals by inverse CDF from substream ``index``."""
    return ndtri(uniforms(seed, domain, index, count))


def normal_matrix(seed, domain, rows, cols):
    """A ``rows x cols`` matrix whose row ``b`` is substream ``b``."""
    out = np.empty((rows, cols))
    for b in range(rows):
        out[b] = normals(seed, domain, b, cols)
    return out


def derive_seed(master, domain, index):
    """A 64-bit child seed for repetition ``index`` of ``master``."""
    return int(raw_words(master, domain, index, 1)[0])
