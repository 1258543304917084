"""Pruned backtracking search over row labelings of the line table.

A labeling assigns each of the 15 lines (rows of the incidence tableau) a
distinct label 1..15; equivalently sigma: label -> row.  A labeling is
*valid* when the 45 incidence slots admit an exact cover by cyclic
triangles (see presentations module).  The search assigns rows to labels
depth first and prunes a partial assignment as soon as some slot edge is
dead: label pair (p, q) with q on line p is dead when no label c can
complete a triangle (p, q, c), taking unassigned labels as wildcards over
the still-free rows.

Hot loops are numba-compiled; results are packed into uint64 codes so a
full run fits in a flat array and merges deterministically across any
worker partitioning of the task grid.
"""

from __future__ import annotations

import concurrent.futures

import numpy as np
from numba import njit

from .geometry import build_gq22

# --- static tables (rows = lines of the fixed tableau) ----------------------

_G = build_gq22()
ROWS = np.array(_G.lines, dtype=np.int64)  # 15 x 3 point indices per row
PROWS = np.array([_G.point_lines(p) for p in range(15)], dtype=np.int64)
PROW_MASK = np.array([sum(1 << r for r in _G.point_lines(p)) for p in range(15)],
                     dtype=np.int64)

# Task grid: fix the rows of labels 0 and 1.  210 independent subtrees.
TASKS = tuple((r0, r1) for r0 in range(15) for r1 in range(15) if r1 != r0)

# Packed result row: [code, flags].  code holds tau (row -> label), 4 bits
# per row: bits 4r..4r+3 = label of row r.  flags bit 0 = torsion, bit 1 =
# cover not unique, bits 8.. = diagonal count of the first cover found.
FLAG_TORSION = 1
FLAG_MULTICOVER = 2


@njit(cache=True)
def _edge_dead(p, q, sigma, rows, prow_mask, rows_used):
    rq = sigma[q]
    pm = prow_mask[p]
    for k in range(3):
        c = rows[rq, k]
        sc = sigma[c]
        if sc >= 0:
            if (pm >> sc) & 1:
                return False
        else:
            if pm & ~rows_used & 0x7FFF:
                return False
    return True


@njit(cache=True)
def _any_dead(sigma, rows, prow_mask, rows_used):
    for p in range(15):
        sp = sigma[p]
        if sp < 0:
            continue
        for k in range(3):
            q = rows[sp, k]
            if sigma[q] >= 0:
                if _edge_dead(p, q, sigma, rows, prow_mask, rows_used):
                    return True
    return False


@njit(cache=True)
def _count_covers(sigma, rows, prow_mask):
    """Count exact covers of the 45 slots by admissible triangles, up to 2.

    Returns (cover_count capped at 2, diagonal count of the first cover).
    Branches on the uncovered slot with fewest remaining candidates.
    """
    sid = np.full(225, -1, np.int64)
    sa = np.empty(45, np.int64)
    sb = np.empty(45, np.int64)
    ns = 0
    for a in range(15):
        for k in range(3):
            b = rows[sigma[a], k]
            sid[a * 15 + b] = ns
            sa[ns] = a
            sb[ns] = b
            ns += 1
    t0 = np.empty(200, np.int64)
    t1 = np.empty(200, np.int64)
    t2 = np.empty(200, np.int64)
    nt = 0
    for s in range(45):
        a = sa[s]
        b = sb[s]
        for k in range(3):
            c = rows[sigma[b], k]
            if (prow_mask[a] >> sigma[c]) & 1:
                if a == b and b == c:
                    t0[nt] = a
                    t1[nt] = a
                    t2[nt] = a
                    nt += 1
                else:
                    # keep the minimal rotation only, so each cyclic
                    # triangle is listed once
                    keep = True
                    if (b, c, a) < (a, b, c) or (c, a, b) < (a, b, c):
                        keep = False
                    if keep:
                        t0[nt] = a
                        t1[nt] = b
                        t2[nt] = c
                        nt += 1
    tsl = np.empty((nt, 3), np.int64)
    tlen = np.empty(nt, np.int64)
    for t in range(nt):
        a = t0[t]
        b = t1[t]
        c = t2[t]
        if a == b and b == c:
            tlen[t] = 1
            tsl[t, 0] = sid[a * 15 + a]
            tsl[t, 1] = -1
            tsl[t, 2] = -1
        else:
            tlen[t] = 3
            tsl[t, 0] = sid[a * 15 + b]
            tsl[t, 1] = sid[b * 15 + c]
            tsl[t, 2] = sid[c * 15 + a]
    scand = np.full((45, 6), -1, np.int64)
    scn = np.zeros(45, np.int64)
    for t in range(nt):
        for j in range(tlen[t]):
            s = tsl[t, j]
            scand[s, scn[s]] = t
            scn[s] += 1
    covered = np.zeros(45, np.int64)
    nsol = 0
    first_diag = -1
    st_slot = np.empty(46, np.int64)
    st_ci = np.empty(46, np.int64)
    st_tri = np.empty(46, np.int64)
    depth = 0
    while True:
        best_s = -1
        best_n = 99
        for s in range(45):
            if covered[s]:
                continue
            n = 0
            for j in range(scn[s]):
                t = scand[s, j]
                ok = True
                for i in range(tlen[t]):
                    if covered[tsl[t, i]]:
                        ok = False
                        break
                if ok:
                    n += 1
            if n < best_n:
                best_n = n
                best_s = s
                if n == 0:
                    break
        if best_s == -1:
            nsol += 1
            if nsol == 1:
                d = 0
                for i in range(depth):
                    if tlen[st_tri[i]] == 1:
                        d += 1
                first_diag = d
            if nsol >= 2:
                return nsol, first_diag
            best_n = 0  # treat the solution leaf as a dead end: backtrack
        if best_n == 0:
            while True:
                if depth == 0:
                    return nsol, first_diag
                depth -= 1
                s = st_slot[depth]
                ci = st_ci[depth]
                t = st_tri[depth]
                for i in range(tlen[t]):
                    covered[tsl[t, i]] = 0
                adv = -1
                for j in range(ci + 1, scn[s]):
                    t2_ = scand[s, j]
                    ok = True
                    for i in range(tlen[t2_]):
                        if covered[tsl[t2_, i]]:
                            ok = False
                            break
                    if ok:
                        adv = j
                        break
                if adv >= 0:
                    st_slot[depth] = s
                    st_ci[depth] = adv
                    st_tri[depth] = scand[s, adv]
                    t2_ = scand[s, adv]
                    for i in range(tlen[t2_]):
                        covered[tsl[t2_, i]] = 1
                    depth += 1
                    break
            continue
        first = -1
        for j in range(scn[best_s]):
            t = scand[best_s, j]
            ok = True
            for i in range(tlen[t]):
                if covered[tsl[t, i]]:
                    ok = False
                    break
            if ok:
                first = j
                break
        st_slot[depth] = best_s
        st_ci[depth] = first
        st_tri[depth] = scand[best_s, first]
        t = scand[best_s, first]
        for i in range(tlen[t]):
            covered[tsl[t, i]] = 1
        depth += 1


@njit(cache=True)
def _search_task(r0, r1, rows, prows, prow_mask, out):
    """DFS over sigma with labels 0, 1 pinned to rows r0, r1.

    Emits packed (code, flags) rows into ``out``; returns (count, nodes).
    """
    sigma = np.full(15, -1, np.int64)
    rows_used = 0
    sigma[0] = r0
    rows_used |= 1 << r0
    sigma[1] = r1
    rows_used |= 1 << r1
    nout = 0
    nodes = 0
    if _any_dead(sigma, rows, prow_mask, rows_used):
        return 0, 0
    depth = 2
    choice = np.full(16, -1, np.int64)
    while depth >= 2:
        if depth == 15:
            nodes += 1
            nsol, diag = _count_covers(sigma, rows, prow_mask)
            if nsol >= 1:
                code = 0
                for a in range(15):
                    code |= a << (4 * sigma[a])
                flags = 0
                if nsol >= 2:
                    flags |= 2
                elif diag > 0:
                    flags |= 1
                flags |= diag << 8
                out[nout, 0] = np.uint64(code)
                out[nout, 1] = np.uint64(flags)
                nout += 1
            depth -= 1
            rows_used &= ~(1 << sigma[depth])
            sigma[depth] = -1
            continue
        lab = depth  # labels are assigned in index order
        start = choice[depth] + 1
        found = -1
        for r in range(start, 15):
            if (rows_used >> r) & 1:
                continue
            sigma[lab] = r
            rows_used |= 1 << r
            nodes += 1
            if not _any_dead(sigma, rows, prow_mask, rows_used):
                found = r
                break
            rows_used &= ~(1 << r)
            sigma[lab] = -1
        if found >= 0:
            choice[depth] = found
            depth += 1
            choice[depth] = -1
        else:
            choice[depth] = -1
            depth -= 1
            if depth >= 2:
                rows_used &= ~(1 << sigma[depth])
                sigma[depth] = -1
    return nout, nodes


_TASK_BUF = 3_000_000


def run_task(task):
    """Run one (r0, r1) subtree; returns the packed result rows."""
    r0, r1 = task
    out = np.empty((_TASK_BUF, 2), dtype=np.uint64)
    n, _ = _search_task(r0, r1, ROWS, PROWS, PROW_MASK, out)
    return out[:n].copy()


def enumerate_raw(workers: int = 1, progress=None,
                  tasks=None) -> np.ndarray:
    """All valid labelings as packed (code, flags) rows, sorted by code.

    The task grid is partitioned across workers; because each task is
    independent and the merged result is sorted by code, the output is
    identical for every worker count.  ``tasks`` restricts the run to a
    subset of the grid (used by determinism tests).
    """
    if tasks is None:
        tasks = TASKS
    chunks = {}
    if workers <= 1:
        for i, task in enumerate(tasks):
            chunks[i] = run_task(task)
            if progress:
                progress(i + 1, len(tasks))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
            futs = {ex.submit(run_task, task): i for i, task in enumerate(tasks)}
            done = 0
            for fut in concurrent.futures.as_completed(futs):
                chunks[futs[fut]] = fut.result()
                done += 1
                if progress:
                    progress(done, len(tasks))
    merged = np.concatenate([chunks[i] for i in sorted(chunks)])
    return merged[np.argsort(merged[:, 0], kind="stable")]


# --- code packing -----------------------------------------------------------


def encode_labels(labels) -> int:
    """Pack row labels (1-based, row order) into a uint64 code."""
    code = 0
    for r, lab in enumerate(labels):
        code |= (lab - 1) << (4 * r)
    return code


def decode_labels(code: int):
    """Unpack a uint64 code into 1-based row labels in row order."""
    code = int(code)
    return tuple(((code >> (4 * r)) & 0xF) + 1 for r in range(15))


# --- slow reference implementation (oracle for the kernels) -----------------


def reference_covers(sigma, cap: int = 3):
    """All exact covers for sigma (label -> row), pure Python backtracking.

    Independent of the numba kernels: recursion over the lexicographically
    first uncovered slot, no candidate-count heuristic.
    """
    rows = [tuple(r) for r in ROWS.tolist()]
    slots = [(a, b) for a in range(15) for b in rows[sigma[a]]]
    slot_set = set(slots)
    tris = set()
    for a, b in slots:
        for c in rows[sigma[b]]:
            if (c, a) in slot_set:
                if a == b == c:
                    tris.add((a, a, a))
                else:
                    tris.add(min((a, b, c), (b, c, a), (c, a, b)))
    tri_slots = {}
    for t in tris:
        a, b, c = t
        tri_slots[t] = ((a, a),) if a == b == c else ((a, b), (b, c), (c, a))
    covers = []

    def rec(uncovered, chosen):
        if len(covers) >= cap:
            return
        if not uncovered:
            covers.append(frozenset(chosen))
            return
        s = min(uncovered)
        for t, ts in tri_slots.items():
            if s in ts and all(x in uncovered for x in ts):
                rec(uncovered - set(ts), chosen + [t])

    rec(frozenset(slots), [])
    return covers


def reference_enumerate(fixed_prefix):
    """Valid labelings with sigma[0..k-1] pinned, by exhaustive search.

    ``fixed_prefix`` pins rows for the first labels; all completions are
    tried without pruning.  Returns sorted packed codes.  Only usable for
    small completions (len(fixed_prefix) >= 9 or so).
    """
    import itertools

    k = len(fixed_prefix)
    free_rows = [r for r in range(15) if r not in fixed_prefix]
    found = []
    for tail in itertools.permutations(free_rows):
        sigma = list(fixed_prefix) + list(tail)
        covers = reference_covers(sigma, cap=2)
        if len(covers) >= 1:
            labels = [0] * 15
            for lab, row in enumerate(sigma):
                labels[row] = lab + 1
            found.append(encode_labels(labels))
    return sorted(found)
