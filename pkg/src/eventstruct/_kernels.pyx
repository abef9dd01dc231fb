# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration kernels; signature-compatible with _kernels_py.

Masks stay within 22 bits, so plain C longs are enough throughout.
"""

MAX_EVENTS = 22

IMPLEMENTATION = "cython"


def _check_width(int n):
    if n < 0 or n > MAX_EVENTS:
        raise ValueError(f"event count {n} outside supported range 0..{MAX_EVENTS}")


def prime_configurations(int n, cause_masks, conflict_masks):
    """All cause-closed, conflict-free subsets, as masks in ascending order."""
    _check_width(n)
    cdef long causes[22]
    cdef long confl[22]
    cdef int i
    for i in range(n):
        causes[i] = cause_masks[i]
        confl[i] = conflict_masks[i]
    cdef long m, rest, low
    cdef int idx
    cdef bint ok
    out = []
    for m in range(1 << n):
        rest = m
        ok = True
        while rest:
            low = rest & -rest
            idx = low.bit_length() - 1
            if (causes[idx] & ~m) or (confl[idx] & m):
                ok = False
                break
            rest ^= low
        if ok:
            out.append(m)
    return out


def stable_configurations(int n, forbidden_masks, premises):
    """All consistent, secured subsets, as masks in ascending order."""
    _check_width(n)
    cdef long forb[64]
    cdef int nforb = len(forbidden_masks)
    if nforb > 64:
        forbidden_masks = list(forbidden_masks)
    cdef int i, j
    for i in range(min(nforb, 64)):
        forb[i] = forbidden_masks[i]
    # premises flattened: starts[i]..starts[i+1] index into flat
    starts = [0]
    flat = []
    for ps in premises:
        flat.extend(ps)
        starts.append(len(flat))
    cdef long[::1] cflat
    cdef int[::1] cstarts
    import array
    aflat = array.array("l", flat or [0])
    astarts = array.array("i", starts)
    cflat = aflat
    cstarts = astarts
    cdef long m, rest, low, built, f
    cdef int idx, k
    cdef bint ok, progress
    out = []
    for m in range(1 << n):
        ok = True
        if nforb <= 64:
            for i in range(nforb):
                f = forb[i]
                if f & m == f:
                    ok = False
                    break
        else:
            for fo in forbidden_masks:
                if fo & m == fo:
                    ok = False
                    break
        if not ok:
            continue
        built = 0
        while built != m:
            progress = False
            rest = m & ~built
            while rest:
                low = rest & -rest
                idx = low.bit_length() - 1
                for k in range(cstarts[idx], cstarts[idx + 1]):
                    if cflat[k] & ~built == 0:
                        built |= low
                        progress = True
                        break
                rest ^= low
            if not progress:
                break
        if built == m:
            out.append(m)
    return out


def maximal_masks(masks):
    """The subset-maximal masks, in ascending order."""
    cdef long m, o
    cdef bint dominated
    out = []
    for m in masks:
        dominated = False
        for o in masks:
            if m != o and m & o == m:
                dominated = True
                break
        if not dominated:
            out.append(m)
    return out
