"""Pure-Python kernels.

Same signatures and results as the compiled ``_kernels`` module. Sets of
element indices are held as Python ``int`` bitmasks.
"""
import numpy as np

AXIOM_G, AXIOM_TOP, SI, WO, AND = 0, 1, 2, 3, 4
ABSENT = -1


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _to_matrix(rows, n):
    out = np.zeros((n, n), dtype=np.uint8)
    for i, row in enumerate(rows):
        for j in _bits(row):
            out[i, j] = 1
    return out


def transitive_closure(n, lower, upper):
    """Reflexive-transitive closure of the cover edges ``lower[k] <= upper[k]``.

    Returns an ``(n, n)`` uint8 matrix with ``m[i, j] == 1`` iff ``i <= j``.
    """
    up = [1 << i for i in range(n)]
    for lo, hi in zip(lower, upper):
        up[int(lo)] |= 1 << int(hi)
    for k in range(n):
        bit, row_k = 1 << k, up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row_k
    return _to_matrix(up, n)


def _masks(leq):
    n = leq.shape[0]
    up = [0] * n
    down = [0] * n
    rows = leq.tolist()
    for i in range(n):
        row = rows[i]
        for j in range(n):
            if row[j]:
                up[i] |= 1 << j
                down[j] |= 1 << i
    return up, down


def meet_table(leq):
    """Binary meet table of the order ``leq``.

    Returns ``(meet, bad_i, bad_j)``. When some pair has no greatest lower
    bound, ``(bad_i, bad_j)`` is the first such pair in index order and the
    table is incomplete; otherwise both are -1.
    """
    n = leq.shape[0]
    _, down = _masks(leq)
    by_down = {mask: i for i, mask in enumerate(down)}
    meet = np.full((n, n), -1, dtype=np.int32)
    for i in range(n):
        meet[i, i] = i
        for j in range(i + 1, n):
            m = by_down.get(down[i] & down[j])
            if m is None:
                return meet, i, j
            meet[i, j] = meet[j, i] = m
    return meet, -1, -1


def derivation_fixpoint(leq, meet, gen_body, gen_head, top):
    """Least set of pairs containing the generators and ``(top, top)``
    closed under SI, WO and AND, computed in rounds.

    Each round derives only from the pairs present at the start of the
    round, so every recorded witness is well founded. For a new pair the
    witness is the first rule in the order SI, WO, AND that applies, with
    the lowest premise indices.

    Returns ``(present, rule, prem1, prem2)``; premises are encoded as
    ``body * n + head`` and are -1 where unused.
    """
    n = leq.shape[0]
    up, down = _masks(leq)
    meet_rows = meet.tolist()
    rule = np.full((n, n), ABSENT, dtype=np.int8)
    prem1 = np.full((n, n), -1, dtype=np.int64)
    prem2 = np.full((n, n), -1, dtype=np.int64)
    heads = [0] * n   # heads[b]: mask of y with (b, y) present
    bodies = [0] * n  # bodies[y]: mask of b with (b, y) present

    for b, y in zip(gen_body, gen_head):
        b, y = int(b), int(y)
        if not heads[b] >> y & 1:
            heads[b] |= 1 << y
            bodies[y] |= 1 << b
            rule[b, y] = AXIOM_G
    if not heads[top] >> top & 1:
        heads[top] |= 1 << top
        bodies[top] |= 1 << top
        rule[top, top] = AXIOM_TOP

    full = (1 << n) - 1
    while True:
        new = []
        for b in range(n):
            hb = heads[b]
            if hb == full:
                continue
            for y in _bits(full & ~hb):
                cand = up[b] & bodies[y]
                if cand:
                    a = (cand & -cand).bit_length() - 1
                    new.append((b, y, SI, a * n + y, -1))
                    continue
                cand = down[y] & hb
                if cand:
                    x = (cand & -cand).bit_length() - 1
                    new.append((b, y, WO, b * n + x, -1))
                    continue
                above = hb & up[y]
                found = False
                for x in _bits(above):
                    row = meet_rows[x]
                    for x2 in _bits(above >> (x + 1) << (x + 1)):
                        if row[x2] == y:
                            new.append((b, y, AND, b * n + x, b * n + x2))
                            found = True
                            break
                    if found:
                        break
        if not new:
            break
        for b, y, r, p1, p2 in new:
            heads[b] |= 1 << y
            bodies[y] |= 1 << b
            rule[b, y] = r
            prem1[b, y] = p1
            prem2[b, y] = p2

    present = (rule != ABSENT).astype(np.uint8)
    return present, rule, prem1, prem2
