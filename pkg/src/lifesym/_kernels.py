"""Compiled inner loops for the two simulation fast paths.

Cell values are uint8: 0 dead, 1 red (or plain live), 2 blue.
"""

import numpy as np
from numba import njit


_ONE = np.uint64(1)
_TOP = np.uint64(63)


@njit(cache=True, nogil=True)
def _pack(board, value):
    h, w = board.shape
    n = (w + 63) // 64
    out = np.zeros((h, n), np.uint64)
    for y in range(h):
        for x in range(w):
            v = board[y, x]
            if (value == 0 and v != 0) or (value != 0 and v == value):
                out[y, x >> 6] |= _ONE << np.uint64(x & 63)
    return out


@njit(cache=True, nogil=True, inline="always")
def _add(s0, s1, s2, b):
    # bit-sliced counter, s2 sticks once the count reaches 4
    c0 = s0 & b
    c1 = s1 & c0
    return s0 ^ b, s1 ^ c0, s2 | c1


@njit(cache=True, nogil=True)
def _shift(src, west, east, y, n, last_bit, mask):
    """Row ``y`` of ``src`` moved one cell round the ring each way:
    ``west[x] = src[x - 1]`` and ``east[x] = src[x + 1]``."""
    for i in range(n):
        lo = src[y, i - 1] if i > 0 else (src[y, n - 1] >> last_bit) & _ONE
        if i == 0:
            west[y, i] = (src[y, i] << _ONE) | lo
        else:
            west[y, i] = (src[y, i] << _ONE) | (lo >> _TOP)
        if i < n - 1:
            east[y, i] = (src[y, i] >> _ONE) | (src[y, i + 1] << _TOP)
        else:
            east[y, i] = (src[y, i] >> _ONE) | ((src[y, 0] & _ONE) << last_bit)
    west[y, n - 1] &= mask
    east[y, n - 1] &= mask


@njit(cache=True, nogil=True, inline="always")
def _same(a, b, c, d):
    h, n = a.shape
    for y in range(h):
        for i in range(n):
            if a[y, i] != c[y, i] or b[y, i] != d[y, i]:
                return False
    return True


_STRIDE = 256
_WINDOW = 30


@njit(cache=True, nogil=True)
def immigration_torus(board, steps):
    """Run the Immigration Game on a torus for ``steps`` generations.

    Rows are packed 64 cells to a word as two bit planes, live and red, and
    each generation is computed with bitwise adders. A dead cell with
    exactly three live neighbours is born red when at least two of those
    neighbours are red.

    Every 256 generations the state is saved; if it recurs within the next
    30 generations the board is periodic from there on, and only the
    remainder of the step budget modulo the period is simulated.
    """
    h, w = board.shape
    n = (w + 63) // 64
    last_bit = np.uint64((w - 1) % 64)
    mask = ~np.uint64(0) if w % 64 == 0 else (_ONE << np.uint64(w % 64)) - _ONE
    live = _pack(board, 0)
    red = _pack(board, 1)
    nlive = np.zeros_like(live)
    nred = np.zeros_like(red)
    lw = np.zeros_like(live)
    le = np.zeros_like(live)
    rw = np.zeros_like(live)
    re = np.zeros_like(live)
    busy = np.zeros(h, np.uint8)
    zero = np.uint64(0)
    snap_live = np.zeros_like(live)
    snap_red = np.zeros_like(red)
    snap_t = -1
    t = 0
    while t < steps:
        for y in range(h):
            b = False
            for i in range(n):
                if live[y, i]:
                    b = True
                    break
            if b:
                _shift(live, lw, le, y, n, last_bit, mask)
                _shift(red, rw, re, y, n, last_bit, mask)
            elif busy[y]:
                for i in range(n):
                    lw[y, i] = zero
                    le[y, i] = zero
                    rw[y, i] = zero
                    re[y, i] = zero
            busy[y] = b
        for y in range(h):
            ym = y - 1 if y > 0 else h - 1
            yp = y + 1 if y < h - 1 else 0
            if not (busy[ym] or busy[y] or busy[yp]):
                for i in range(n):
                    nlive[y, i] = zero
                    nred[y, i] = zero
                continue
            for i in range(n):
                s0, s1, s2 = _add(zero, zero, zero, lw[ym, i])
                s0, s1, s2 = _add(s0, s1, s2, live[ym, i])
                s0, s1, s2 = _add(s0, s1, s2, le[ym, i])
                s0, s1, s2 = _add(s0, s1, s2, lw[y, i])
                s0, s1, s2 = _add(s0, s1, s2, le[y, i])
                s0, s1, s2 = _add(s0, s1, s2, lw[yp, i])
                s0, s1, s2 = _add(s0, s1, s2, live[yp, i])
                s0, s1, s2 = _add(s0, s1, s2, le[yp, i])
                # at least two red neighbours
                a, b, c = rw[ym, i], red[ym, i], re[ym, i]
                d, e = rw[y, i], re[y, i]
                f, g, k = rw[yp, i], red[yp, i], re[yp, i]
                one = a | b
                two = a & b
                two |= one & c
                one |= c
                two |= one & d
                one |= d
                two |= one & e
                one |= e
                two |= one & f
                one |= f
                two |= one & g
                one |= g
                two |= one & k
                me = live[y, i]
                three = s0 & s1 & ~s2
                pair = ~s0 & s1 & ~s2
                nlive[y, i] = three | (pair & me)
                nred[y, i] = (red[y, i] & (three | pair)) | (three & ~me & two)
        live, nlive = nlive, live
        red, nred = nred, red
        t += 1
        if t % _STRIDE == 0:
            snap_live[:, :] = live
            snap_red[:, :] = red
            snap_t = t
        elif snap_t >= 0 and t - snap_t <= _WINDOW:
            if _same(live, red, snap_live, snap_red):
                steps = t + (steps - t) % (t - snap_t)
                snap_t = -1
    out = np.zeros((h, w), np.uint8)
    for y in range(h):
        for x in range(w):
            bit = _ONE << np.uint64(x & 63)
            if live[y, x >> 6] & bit:
                out[y, x] = 1 if red[y, x >> 6] & bit else 2
    return out


@njit(cache=True, nogil=True)
def life_advance(a, b, n, bb_cur, bb_prev, pops):
    """Advance plain Life ``n`` generations inside a padded dense buffer.

    ``a`` holds the current generation and ``b`` is scratch whose live cells
    (the generation before) lie inside ``bb_prev``. Boxes are
    ``[r0, r1, c0, c1]`` inclusive, empty when ``r0 > r1``. Both are updated
    in place. Returns 1 if the result ended up in ``b``, else 0. The caller
    guarantees a margin of ``n + 2`` cells around both boxes.
    """
    src = a
    dst = b
    flip = 0
    for g in range(n):
        cur_empty = bb_cur[0] > bb_cur[1]
        prev_empty = bb_prev[0] > bb_prev[1]
        if cur_empty and prev_empty:
            pops[g] = 0
            continue
        if cur_empty:
            r0, r1, c0, c1 = bb_prev[0], bb_prev[1], bb_prev[2], bb_prev[3]
        else:
            r0 = bb_cur[0] - 1
            r1 = bb_cur[1] + 1
            c0 = bb_cur[2] - 1
            c1 = bb_cur[3] + 1
            if not prev_empty:
                r0 = min(r0, bb_prev[0])
                r1 = max(r1, bb_prev[1])
                c0 = min(c0, bb_prev[2])
                c1 = max(c1, bb_prev[3])
        nr0 = 1 << 60
        nr1 = -1
        nc0 = 1 << 60
        nc1 = -1
        pop = 0
        for y in range(r0, r1 + 1):
            for x in range(c0, c1 + 1):
                cnt = (src[y - 1, x - 1] + src[y - 1, x] + src[y - 1, x + 1]
                       + src[y, x - 1] + src[y, x + 1]
                       + src[y + 1, x - 1] + src[y + 1, x] + src[y + 1, x + 1])
                if cnt == 3 or (cnt == 2 and src[y, x]):
                    dst[y, x] = 1
                    pop += 1
                    if y < nr0:
                        nr0 = y
                    if y > nr1:
                        nr1 = y
                    if x < nc0:
                        nc0 = x
                    if x > nc1:
                        nc1 = x
                else:
                    dst[y, x] = 0
        bb_prev[:] = bb_cur
        bb_cur[0] = nr0
        bb_cur[1] = nr1
        bb_cur[2] = nc0
        bb_cur[3] = nc1
        pops[g] = pop
        src, dst = dst, src
        flip ^= 1
    return flip
