"""Hot array kernels, each in a numba flavour and a numpy flavour.

The public names at the bottom of the module dispatch on
``_backend.USE_NUMBA``.  Both flavours are importable directly
(``*_jit`` / ``*_numpy``) so tests and the benchmark can compare them.

Conventions: ``leq[i, j]`` is true iff ``i <= j``; tables are ``int64``
arrays indexed by carrier position.
"""

import numpy as np

from . import _backend

# ---------------------------------------------------------------------------
# order closure


def _closure_loops(leq):
    n = leq.shape[0]
    out = leq.copy()
    for i in range(n):
        out[i, i] = True
    for k in range(n):
        for i in range(n):
            if out[i, k]:
                for j in range(n):
                    if out[k, j]:
                        out[i, j] = True
    return out


def transitive_closure_numpy(leq):
    out = np.array(leq, dtype=bool, copy=True)
    np.fill_diagonal(out, True)
    for k in range(out.shape[0]):
        out |= out[:, k : k + 1] & out[k : k + 1, :]
    return out


# ---------------------------------------------------------------------------
# meet / join tables


def _tables_loops(leq):
    n = leq.shape[0]
    meet = np.full((n, n), -1, dtype=np.int64)
    join = np.full((n, n), -1, dtype=np.int64)
    down = np.zeros(n, dtype=np.int64)
    up = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for k in range(n):
            if leq[k, i]:
                down[i] += 1
            if leq[i, k]:
                up[i] += 1
    # status: 0 ok, 1 missing meet, 2 missing join; first offending pair
    status = 0
    bad_i = -1
    bad_j = -1
    for i in range(n):
        for j in range(n):
            best = -1
            for k in range(n):
                if leq[k, i] and leq[k, j]:
                    if best < 0 or down[k] > down[best]:
                        best = k
            ok = best >= 0
            if ok:
                for k in range(n):
                    if leq[k, i] and leq[k, j] and not leq[k, best]:
                        ok = False
                        break
            if ok:
                meet[i, j] = best
            elif status == 0:
                status = 1
                bad_i = i
                bad_j = j
            best = -1
            for k in range(n):
                if leq[i, k] and leq[j, k]:
                    if best < 0 or up[k] > up[best]:
                        best = k
            ok = best >= 0
            if ok:
                for k in range(n):
                    if leq[i, k] and leq[j, k] and not leq[best, k]:
                        ok = False
                        break
            if ok:
                join[i, j] = best
            elif status == 0:
                status = 2
                bad_i = i
                bad_j = j
    return meet, join, status, bad_i, bad_j


def _bound_table_numpy(rel):
    # rel[k, i] true iff k is "below" i in the direction being bounded
    n = rel.shape[0]
    size = rel.sum(axis=0).astype(np.int64)
    bounds = rel[:, :, None] & rel[:, None, :]  # (k, i, j)
    score = np.where(bounds, size[:, None, None], -1)
    best = score.argmax(axis=0)
    exists = bounds.any(axis=0)
    covers = ~bounds | rel[:, best]
    ok = exists & covers.all(axis=0)
    table = np.where(ok, best, -1).astype(np.int64)
    return table, ok


def tables_numpy(leq):
    leq = np.asarray(leq, dtype=bool)
    meet, ok_m = _bound_table_numpy(leq)
    join, ok_j = _bound_table_numpy(leq.T)
    bad_m = np.argwhere(~ok_m)
    bad_j = np.argwhere(~ok_j)
    first_m = tuple(bad_m[0]) if len(bad_m) else None
    first_j = tuple(bad_j[0]) if len(bad_j) else None
    # report whichever offending pair comes first in row-major order,
    # preferring meet on ties to match the loop kernel
    if first_m is not None and (first_j is None or first_m <= first_j):
        return meet, join, 1, int(first_m[0]), int(first_m[1])
    if first_j is not None:
        return meet, join, 2, int(first_j[0]), int(first_j[1])
    return meet, join, 0, -1, -1


# ---------------------------------------------------------------------------
# compatibility relation


def _commute_loops(meet, join, ortho):
    n = meet.shape[0]
    out = np.zeros((n, n), dtype=np.bool_)
    for p in range(n):
        for q in range(n):
            out[p, q] = join[meet[p, q], meet[p, ortho[q]]] == p
    return out


def commute_matrix_numpy(meet, join, ortho):
    n = meet.shape[0]
    return join[meet, meet[:, ortho]] == np.arange(n)[:, None]


# ---------------------------------------------------------------------------
# orthomodular law scan


def _om_loops(leq, meet, join, ortho):
    n = leq.shape[0]
    for p in range(n):
        for q in range(n):
            if leq[p, q] and join[p, meet[ortho[p], q]] != q:
                return p, q
    return -1, -1


def om_violation_numpy(leq, meet, join, ortho):
    n = leq.shape[0]
    lhs = join[np.arange(n)[:, None], meet[ortho][:, np.arange(n)]]
    bad = np.argwhere(leq & (lhs != np.arange(n)[None, :]))
    if len(bad):
        return int(bad[0][0]), int(bad[0][1])
    return -1, -1


# ---------------------------------------------------------------------------
# restriction axiom of generalized implications


def _i2_loops(impl, meet, comm):
    n = impl.shape[0]
    for p in range(n):
        for q in range(n):
            for e in range(n):
                if comm[p, e] and comm[q, e]:
                    lhs = meet[impl[p, q], e]
                    rhs = meet[impl[meet[p, e], meet[q, e]], e]
                    if lhs != rhs:
                        return p, q, e
    return -1, -1, -1


def i2_violation_numpy(impl, meet, comm):
    n = impl.shape[0]
    p = np.arange(n)[:, None, None]
    q = np.arange(n)[None, :, None]
    e = np.arange(n)[None, None, :]
    mask = comm[p, e] & comm[q, e]
    lhs = meet[impl[p, q], e]
    rhs = meet[impl[meet[p, e], meet[q, e]], e]
    bad = np.argwhere(mask & (lhs != rhs))
    if len(bad):
        return tuple(int(x) for x in bad[0])
    return -1, -1, -1


# ---------------------------------------------------------------------------
# atomic truth values over a rank-ordered node closure
#
# Nodes are numbered so that every child precedes its parent.  ``ptr``/
# ``child``/``val`` is a CSR layout of the (child, value) entries.  Pairs
# are swept along anti-diagonals i + j = s: [[u = v]] only needs [[u' in v]]
# for children u' of u, and [[u in v]] only needs [[u = v']] for children
# v' of v, both of which sit on earlier diagonals.


def _atoms_loops(ptr, child, val, meet, join, impl, bottom, top):
    n = ptr.shape[0] - 1
    eq = np.empty((n, n), dtype=np.int64)
    mem = np.empty((n, n), dtype=np.int64)
    for s in range(2 * n - 1):
        lo = s - n + 1 if s - n + 1 > 0 else 0
        hi = s if s < n - 1 else n - 1
        for i in range(lo, hi + 1):
            j = s - i
            acc = bottom
            for k in range(ptr[j], ptr[j + 1]):
                acc = join[acc, meet[val[k], eq[i, child[k]]]]
            mem[i, j] = acc
            acc = top
            for k in range(ptr[i], ptr[i + 1]):
                acc = meet[acc, impl[val[k], mem[child[k], j]]]
            for k in range(ptr[j], ptr[j + 1]):
                acc = meet[acc, impl[val[k], mem[child[k], i]]]
            eq[i, j] = acc
    return eq, mem


def atom_tables_numpy(ptr, child, val, meet, join, impl, bottom, top):
    n = len(ptr) - 1
    deg = np.diff(ptr)
    width = int(deg.max()) if n else 0
    # padded (node, slot) layout with a validity mask
    pc = np.zeros((n, max(width, 1)), dtype=np.int64)
    pv = np.zeros((n, max(width, 1)), dtype=np.int64)
    pm = np.zeros((n, max(width, 1)), dtype=bool)
    for node in range(n):
        d = deg[node]
        pc[node, :d] = child[ptr[node] : ptr[node + 1]]
        pv[node, :d] = val[ptr[node] : ptr[node + 1]]
        pm[node, :d] = True
    # zero-filled: masked slots still index into these before they are final
    eq = np.zeros((n, n), dtype=np.int64)
    mem = np.zeros((n, n), dtype=np.int64)
    for s in range(2 * n - 1):
        I = np.arange(max(0, s - n + 1), min(s, n - 1) + 1)
        J = s - I
        acc = np.full(len(I), bottom, dtype=np.int64)
        for k in range(width):
            term = join[acc, meet[pv[J, k], eq[I, pc[J, k]]]]
            acc = np.where(pm[J, k], term, acc)
        mem[I, J] = acc
        acc = np.full(len(I), top, dtype=np.int64)
        for k in range(width):
            term = meet[acc, impl[pv[I, k], mem[pc[I, k], J]]]
            acc = np.where(pm[I, k], term, acc)
            term = meet[acc, impl[pv[J, k], mem[pc[J, k], I]]]
            acc = np.where(pm[J, k], term, acc)
        eq[I, J] = acc
    return eq, mem


# ---------------------------------------------------------------------------
# compiled twins and dispatch

transitive_closure_jit = _backend.njit(_closure_loops)
tables_jit = _backend.njit(_tables_loops)
commute_matrix_jit = _backend.njit(_commute_loops)
om_violation_jit = _backend.njit(_om_loops)
i2_violation_jit = _backend.njit(_i2_loops)
atom_tables_jit = _backend.njit(_atoms_loops)

if _backend.USE_NUMBA:

    def transitive_closure(leq):
        return transitive_closure_jit(np.ascontiguousarray(leq, dtype=np.bool_))

    def tables(leq):
        m, j, status, bi, bj = tables_jit(np.ascontiguousarray(leq, dtype=np.bool_))
        return m, j, int(status), int(bi), int(bj)

    def commute_matrix(meet, join, ortho):
        return commute_matrix_jit(meet, join, ortho)

    def om_violation(leq, meet, join, ortho):
        p, q = om_violation_jit(leq, meet, join, ortho)
        return int(p), int(q)

    def i2_violation(impl, meet, comm):
        return tuple(int(x) for x in i2_violation_jit(impl, meet, comm))

    def atom_tables(ptr, child, val, meet, join, impl, bottom, top):
        return atom_tables_jit(ptr, child, val, meet, join, impl, bottom, top)

else:
    transitive_closure = transitive_closure_numpy
    tables = tables_numpy
    commute_matrix = commute_matrix_numpy
    om_violation = om_violation_numpy
    i2_violation = i2_violation_numpy
    atom_tables = atom_tables_numpy
