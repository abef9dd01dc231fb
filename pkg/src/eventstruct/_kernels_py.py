"""Pure-Python enumeration kernels (bitmask subset scans).

Event sets are encoded as integer bitmasks over a fixed event order.
These three functions are the hot inner loops of every analysis in the
package; ``eventstruct._kernels`` is a compiled twin with the same
signatures and ``eventstruct.kernels`` picks one at import time.
"""

MAX_EVENTS = 22

IMPLEMENTATION = "python"


def _check_width(n: int) -> None:
    if n < 0 or n > MAX_EVENTS:
        raise ValueError(f"event count {n} outside supported range 0..{MAX_EVENTS}")


def prime_configurations(n: int, cause_masks: list[int], conflict_masks: list[int]) -> list[int]:
    """All cause-closed, conflict-free subsets, as masks in ascending order.

    cause_masks[i] holds the strict causes of event i; conflict_masks[i]
    the events in conflict with i.  A subset m qualifies when every
    member's causes lie in m and no member conflicts with m.
    """
    _check_width(n)
    out = []
    for m in range(1 << n):
        rest = m
        ok = True
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if (cause_masks[i] & ~m) or (conflict_masks[i] & m):
                ok = False
                break
            rest ^= low
        if ok:
            out.append(m)
    return out


def stable_configurations(
    n: int,
    forbidden_masks: list[int],
    premises: list[list[int]],
) -> list[int]:
    """All consistent, secured subsets, as masks in ascending order.

    A subset is consistent when it contains no forbidden mask, and
    secured when it can be built stepwise: repeatedly admit an event
    whose some rule premise lies inside the part built so far.
    premises[i] lists the premise masks of the rules concluding event i.
    """
    _check_width(n)
    out = []
    for m in range(1 << n):
        ok = True
        for f in forbidden_masks:
            if f & m == f:
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
                i = low.bit_length() - 1
                for p in premises[i]:
                    if p & ~built == 0:
                        built |= low
                        progress = True
                        break
                rest ^= low
            if not progress:
                break
        if built == m:
            out.append(m)
    return out


def maximal_masks(masks: list[int]) -> list[int]:
    """The subset-maximal masks, in ascending order."""
    out = []
    for m in masks:
        if not any(m != o and m & o == m for o in masks):
            out.append(m)
    return out
