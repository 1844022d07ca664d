"""Pure numpy/Python versions of the compiled kernels (same API as ``_core``)."""
import numpy as np

_BLOCK_ELEMS = 1 << 22


def _gap_block(A, B):
    # A: (n, q), B: (k, q) -> (n, k) min |a - b| over all entries
    diff = np.abs(A[:, None, :, None] - B[None, :, None, :])
    return diff.min(axis=(2, 3))


def min_gap_matrix(P, R):
    P = np.ascontiguousarray(P, dtype=np.float64)
    R = np.ascontiguousarray(R, dtype=np.float64)
    n, k = P.shape[0], R.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    per_row = max(1, k * P.shape[1] * R.shape[1])
    step = max(1, _BLOCK_ELEMS // per_row)
    for lo in range(0, n, step):
        out[lo:lo + step] = _gap_block(P[lo:lo + step], R)
    return out


def max_gap_pair(P):
    P = np.ascontiguousarray(P, dtype=np.float64)
    n = P.shape[0]
    if n < 2:
        return 0.0, 0, 0
    best, bi, bj = -1.0, 0, 1
    per_row = max(1, n * P.shape[1] ** 2)
    step = max(1, _BLOCK_ELEMS // per_row)
    cols = np.arange(n)
    for lo in range(0, n - 1, step):
        block = _gap_block(P[lo:lo + step], P)
        rows = np.arange(lo, lo + block.shape[0])
        block[cols[None, :] <= rows[:, None]] = -np.inf
        flat = int(np.argmax(block))
        r, c = divmod(flat, n)
        if block[r, c] > best:
            best, bi, bj = float(block[r, c]), lo + r, c
    return best, bi, bj


def max_min_codebook(W, size, budget):
    W = np.ascontiguousarray(W, dtype=np.float64)
    C = W.shape[0]
    if size < 2 or C < size:
        return -1.0, [], 0, True
    iu = np.triu_indices(C, 1)
    ub = float(W[iu].max()) if C > 1 else -1.0
    best = -1.0
    witness = list(range(size))
    evals = 0
    completed = True

    cands = [np.arange(C)] + [None] * (size - 1)
    minds = [np.full(C, np.inf)] + [None] * (size - 1)
    pos = [0] * size
    curmin = [np.inf] * size
    chosen = [0] * size
    level = 0
    while level >= 0:
        if best >= ub:
            break
        idx = pos[level]
        ncand = len(cands[level])
        if idx >= ncand or ncand - idx < size - level:
            level -= 1
            if level >= 0:
                pos[level] += 1
            continue
        c = int(cands[level][idx])
        m = min(curmin[level], float(minds[level][idx]))
        if m <= best:
            pos[level] += 1
            continue
        chosen[level] = c
        if level == size - 1:
            best = m
            witness = chosen.copy()
            pos[level] += 1
            continue
        rest = cands[level][idx + 1:]
        if evals + len(rest) > budget:
            completed = False
            break
        evals += len(rest)
        md = np.minimum(minds[level][idx + 1:], W[c, rest])
        keep = md > best
        cands[level + 1] = rest[keep]
        minds[level + 1] = md[keep]
        curmin[level + 1] = m
        pos[level + 1] = 0
        level += 1
    return best, [int(v) for v in witness], evals, completed
