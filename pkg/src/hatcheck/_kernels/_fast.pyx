# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel lane: enumeration census and bulk sampling loops.

Must stay output-identical to ``hatcheck._kernels.pure``, including RNG
word consumption, so fixtures frozen against either lane hold for both.
The RNG is the same xoshiro256** / splitmix64 scheme as hatcheck.rng.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

__all__ = [
    "fixed_point_census",
    "sample_fixed_point_counts",
    "sample_matching_ranks",
    "raw_stream",
]

cdef uint64_t _U64_MAX = <uint64_t>0xFFFFFFFFFFFFFFFF


cdef struct Xoshiro:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _splitmix_next(uint64_t *state) nogil:
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef void _derive_state(uint64_t seed, uint64_t stream, Xoshiro *rng) nogil:
    # Words 4*stream .. 4*stream+3 of the splitmix64 sequence.
    cdef uint64_t sm = seed
    cdef uint64_t i
    for i in range(stream + 1):
        rng.s0 = _splitmix_next(&sm)
        rng.s1 = _splitmix_next(&sm)
        rng.s2 = _splitmix_next(&sm)
        rng.s3 = _splitmix_next(&sm)
    if rng.s0 == 0 and rng.s1 == 0 and rng.s2 == 0 and rng.s3 == 0:
        rng.s0 = <uint64_t>0x9E3779B97F4A7C15


cdef inline uint64_t _next_word(Xoshiro *rng) nogil:
    cdef uint64_t result = _rotl(rng.s1 * <uint64_t>5, 7) * <uint64_t>9
    cdef uint64_t t = rng.s1 << 17
    rng.s2 ^= rng.s0
    rng.s3 ^= rng.s1
    rng.s1 ^= rng.s2
    rng.s0 ^= rng.s3
    rng.s2 ^= t
    rng.s3 = _rotl(rng.s3, 45)
    return result


cdef inline uint64_t _bounded(Xoshiro *rng, uint64_t n) nogil:
    # Threshold rejection; n == 1 consumes no word. rem = 2**64 mod n, and
    # x is accepted iff x < 2**64 - rem, written wrap-safely.
    if n == 1:
        return 0
    cdef uint64_t rem = ((<uint64_t>0) - n) % n
    cdef uint64_t x
    while True:
        x = _next_word(rng)
        if x <= _U64_MAX - rem:
            return x % n


cdef uint64_t _comb_u64(int64_t a, int64_t b) nogil:
    # Exact C(a, b); every prefix product res*(a-b+i) stays divisible by i.
    # Callers keep results within uint64 (rank tables are capped upstream).
    if b < 0 or b > a:
        return 0
    if a - b < b:
        b = a - b
    cdef uint64_t res = 1
    cdef int64_t i
    for i in range(1, b + 1):
        res = (res * <uint64_t>(a - b + i)) // <uint64_t>i
    return res


cdef uint64_t _perm_u64(int64_t a, int64_t b) nogil:
    # Falling factorial a!/(a-b)!.
    cdef uint64_t res = 1
    cdef int64_t i
    for i in range(b):
        res *= <uint64_t>(a - i)
    return res


cdef void _census_dfs(int pos, int l, int m, int diag, int64_t *dom,
                      unsigned char *used, int64_t *census) nogil:
    cdef int h
    if pos == l:
        census[diag] += 1
        return
    for h in range(m):
        if not used[h]:
            used[h] = 1
            _census_dfs(pos + 1, l, m, diag + (h == dom[pos]), dom, used, census)
            used[h] = 0


def fixed_point_census(n, m, l):
    """Count matchings of shape (n, m, l) by number of diagonal pairs."""
    cdef int cn = n
    cdef int cm = m
    cdef int cl = l
    cdef int64_t *census = <int64_t *>malloc((cl + 1) * sizeof(int64_t))
    cdef int64_t *dom = <int64_t *>malloc((cl if cl else 1) * sizeof(int64_t))
    cdef unsigned char *used = <unsigned char *>malloc((cm if cm else 1) * sizeof(unsigned char))
    if census is NULL or dom is NULL or used is NULL:
        free(census)
        free(dom)
        free(used)
        raise MemoryError
    cdef int i
    cdef int j
    cdef int more
    try:
        for i in range(cl + 1):
            census[i] = 0
        for i in range(cm):
            used[i] = 0
        if cl == 0:
            census[0] = 1
        else:
            for i in range(cl):
                dom[i] = i
            more = 1
            while more:
                _census_dfs(0, cl, cm, 0, dom, used, census)
                # Lexicographic successor of the domain combination.
                more = 0
                i = cl - 1
                while i >= 0:
                    if dom[i] < cn - cl + i:
                        dom[i] += 1
                        j = i + 1
                        while j < cl:
                            dom[j] = dom[j - 1] + 1
                            j += 1
                        more = 1
                        break
                    i -= 1
        return [census[i] for i in range(cl + 1)]
    finally:
        free(census)
        free(dom)
        free(used)


def sample_fixed_point_counts(n, m, l, seed, stream, trials):
    """Histogram of fixed-point counts over uniform matching draws."""
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t cm = m
    cdef Py_ssize_t cl = l
    cdef uint64_t cseed = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t cstream = stream
    cdef int64_t ctrials = trials
    cdef Xoshiro rng
    _derive_state(cseed, cstream, &rng)
    cdef Py_ssize_t *people = <Py_ssize_t *>malloc((cn if cn else 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *hats = <Py_ssize_t *>malloc((cm if cm else 1) * sizeof(Py_ssize_t))
    cdef int64_t *counts = <int64_t *>malloc((cl + 1) * sizeof(int64_t))
    if people is NULL or hats is NULL or counts is NULL:
        free(people)
        free(hats)
        free(counts)
        raise MemoryError
    cdef Py_ssize_t i, j, tmp, k
    cdef int64_t t
    try:
        for i in range(cl + 1):
            counts[i] = 0
        with nogil:
            for t in range(ctrials):
                for i in range(cn):
                    people[i] = i
                for i in range(cm):
                    hats[i] = i
                for i in range(cl):
                    j = i + <Py_ssize_t>_bounded(&rng, <uint64_t>(cn - i))
                    tmp = people[i]
                    people[i] = people[j]
                    people[j] = tmp
                for i in range(cl):
                    j = i + <Py_ssize_t>_bounded(&rng, <uint64_t>(cm - i))
                    tmp = hats[i]
                    hats[i] = hats[j]
                    hats[j] = tmp
                k = 0
                for i in range(cl):
                    if people[i] == hats[i]:
                        k += 1
                counts[k] += 1
        return [counts[i] for i in range(cl + 1)]
    finally:
        free(people)
        free(hats)
        free(counts)


def sample_matching_ranks(n, m, l, seed, stream, trials):
    """Histogram over lexicographic matching ranks for uniform draws.

    Callers cap unified_count(n, m, l) so every rank intermediate fits in
    64 bits.
    """
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t cm = m
    cdef Py_ssize_t cl = l
    cdef uint64_t cseed = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t cstream = stream
    cdef int64_t ctrials = trials
    cdef uint64_t total = _comb_u64(cn, cl) * _comb_u64(cm, cl) * _perm_u64(cl, cl)
    cdef Xoshiro rng
    _derive_state(cseed, cstream, &rng)
    cdef uint64_t perm_full = _perm_u64(cm, cl)
    cdef Py_ssize_t *people = <Py_ssize_t *>malloc((cn if cn else 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *hats = <Py_ssize_t *>malloc((cm if cm else 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *dom = <Py_ssize_t *>malloc((cl if cl else 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *img = <Py_ssize_t *>malloc((cl if cl else 1) * sizeof(Py_ssize_t))
    cdef uint64_t *suffix = <uint64_t *>malloc((cl if cl else 1) * sizeof(uint64_t))
    cdef int64_t *hist = <int64_t *>malloc((total if total else 1) * sizeof(int64_t))
    if (people is NULL or hats is NULL or dom is NULL or img is NULL
            or suffix is NULL or hist is NULL):
        free(people)
        free(hats)
        free(dom)
        free(img)
        free(suffix)
        free(hist)
        raise MemoryError
    cdef Py_ssize_t i, j, tmp, pos, c, prev, below
    cdef uint64_t dom_rank, img_rank, u
    cdef int64_t t
    try:
        for u in range(total):
            hist[u] = 0
        for i in range(cl):
            suffix[i] = _perm_u64(cm - 1 - i, cl - 1 - i)
        with nogil:
            for t in range(ctrials):
                for i in range(cn):
                    people[i] = i
                for i in range(cm):
                    hats[i] = i
                for i in range(cl):
                    j = i + <Py_ssize_t>_bounded(&rng, <uint64_t>(cn - i))
                    tmp = people[i]
                    people[i] = people[j]
                    people[j] = tmp
                for i in range(cl):
                    j = i + <Py_ssize_t>_bounded(&rng, <uint64_t>(cm - i))
                    tmp = hats[i]
                    hats[i] = hats[j]
                    hats[j] = tmp
                # Insertion-sort the l pairs by person index.
                for i in range(cl):
                    dom[i] = people[i]
                    img[i] = hats[i]
                for i in range(1, cl):
                    pos = i
                    while pos > 0 and dom[pos - 1] > dom[pos]:
                        tmp = dom[pos - 1]
                        dom[pos - 1] = dom[pos]
                        dom[pos] = tmp
                        tmp = img[pos - 1]
                        img[pos - 1] = img[pos]
                        img[pos] = tmp
                        pos -= 1
                dom_rank = 0
                prev = -1
                for i in range(cl):
                    for c in range(prev + 1, dom[i]):
                        dom_rank += _comb_u64(cn - 1 - c, cl - 1 - i)
                    prev = dom[i]
                img_rank = 0
                for i in range(cl):
                    below = 0
                    for j in range(i):
                        if img[j] < img[i]:
                            below += 1
                    img_rank += <uint64_t>(img[i] - below) * suffix[i]
                hist[dom_rank * perm_full + img_rank] += 1
        return [hist[u] for u in range(total)]
    finally:
        free(people)
        free(hats)
        free(dom)
        free(img)
        free(suffix)
        free(hist)


def raw_stream(seed, stream, count):
    """First ``count`` raw 64-bit words of one RNG substream."""
    cdef uint64_t cseed = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t cstream = stream
    cdef Py_ssize_t ccount = count
    cdef Xoshiro rng
    _derive_state(cseed, cstream, &rng)
    cdef Py_ssize_t i
    out = []
    for i in range(ccount):
        out.append(_next_word(&rng))
    return out
