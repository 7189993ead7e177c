# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled functor search.

Same variable order, candidate order, propagation and node accounting as the
pure-Python backend, so both return identical solution lists and node counts.
"""
from libcpp.vector cimport vector

import numpy as np

from ..errors import BudgetExceeded

BACKEND = "compiled"

ctypedef long long i64


cdef struct Item:
    int is_mor
    i64 i
    i64 v


class _Stop(Exception):
    pass


cdef class _Kernel:
    cdef const i64[:] x_src, x_tgt, x_ident, x_inv, x_aobj, x_amor
    cdef const i64[:, :] trip
    cdef const i64[:] trip_ptr, trip_idx
    cdef const i64[:] a_src, a_tgt, a_ident, a_inv, a_aobj, a_amor
    cdef const int[:, :] a_comp
    cdef const i64[:] hom_ptr, hom_idx, a_fixed
    cdef const i64[:] f_obj, f_mor, req_obj, req_mor, fib_ptr, fib_idx
    cdef bint equi, has_f, count_only
    cdef i64 n_ox, n_mx, n_oa, limit, budget, count, nodes
    cdef i64[:] img_o, img_m
    cdef vector[i64] trail
    cdef vector[Item] stack
    cdef list solutions

    def __init__(self, p, limit, budget, count_only):
        self.x_src = p.x_src
        self.x_tgt = p.x_tgt
        self.x_ident = p.x_ident
        self.x_inv = p.x_inv
        self.trip = p.x_trip.reshape(-1, 3) if p.x_trip.size else np.zeros((0, 3), dtype=np.int64)
        self.trip_ptr = p.x_trip_ptr
        self.trip_idx = p.x_trip_idx
        self.x_aobj = p.x_aobj
        self.x_amor = p.x_amor
        self.a_src = p.a_src
        self.a_tgt = p.a_tgt
        self.a_ident = p.a_ident
        self.a_inv = p.a_inv
        self.a_comp = np.ascontiguousarray(p.a_comp, dtype=np.int32)
        self.a_aobj = p.a_aobj
        self.a_amor = p.a_amor
        self.hom_ptr = p.a_hom_ptr
        self.hom_idx = p.a_hom_idx
        self.a_fixed = p.a_fixed
        self.f_obj = p.f_obj
        self.f_mor = p.f_mor
        self.req_obj = p.req_obj
        self.req_mor = p.req_mor
        self.fib_ptr = p.fib_ptr
        self.fib_idx = p.fib_idx
        self.equi = len(p.x_aobj) > 0
        self.has_f = len(p.f_obj) > 0 or len(p.fib_ptr) > 0
        self.n_ox = len(p.x_ident)
        self.n_mx = len(p.x_src)
        self.n_oa = len(p.a_ident)
        self.limit = limit
        self.budget = budget
        self.count_only = count_only
        self.count = 0
        self.nodes = 0
        self.img_o = np.full(self.n_ox, -1, dtype=np.int64)
        self.img_m = np.full(self.n_mx, -1, dtype=np.int64)
        self.solutions = []

    cdef inline void push(self, int is_mor, i64 i, i64 v) noexcept:
        cdef Item it
        it.is_mor = is_mor
        it.i = i
        it.v = v
        self.stack.push_back(it)

    cdef bint propagate(self) noexcept:
        cdef Item it
        cdef i64 i, v, cur, k, g, f, h, Fg, Ff, Fh, t
        while self.stack.size():
            it = self.stack.back()
            self.stack.pop_back()
            i = it.i
            v = it.v
            if v < 0:
                self.stack.clear()
                return False
            if not it.is_mor:
                cur = self.img_o[i]
                if cur >= 0:
                    if cur != v:
                        self.stack.clear()
                        return False
                    continue
                if self.has_f and self.req_obj[i] >= 0 and self.f_obj[v] != self.req_obj[i]:
                    self.stack.clear()
                    return False
                self.img_o[i] = v
                self.trail.push_back(i)
                self.push(1, self.x_ident[i], self.a_ident[v])
                if self.equi:
                    self.push(0, self.x_aobj[i], self.a_aobj[v])
            else:
                cur = self.img_m[i]
                if cur >= 0:
                    if cur != v:
                        self.stack.clear()
                        return False
                    continue
                if self.has_f and self.req_mor[i] >= 0 and self.f_mor[v] != self.req_mor[i]:
                    self.stack.clear()
                    return False
                self.img_m[i] = v
                self.trail.push_back(self.n_ox + i)
                self.push(0, self.x_src[i], self.a_src[v])
                self.push(0, self.x_tgt[i], self.a_tgt[v])
                self.push(1, self.x_inv[i], self.a_inv[v])
                if self.equi:
                    self.push(1, self.x_amor[i], self.a_amor[v])
                for k in range(self.trip_ptr[i], self.trip_ptr[i + 1]):
                    t = self.trip_idx[k]
                    g = self.trip[t, 0]
                    f = self.trip[t, 1]
                    h = self.trip[t, 2]
                    Fg = self.img_m[g]
                    Ff = self.img_m[f]
                    Fh = self.img_m[h]
                    if Fg >= 0 and Ff >= 0:
                        self.push(1, h, self.a_comp[Fg, Ff])
                    elif Fh >= 0 and Ff >= 0:
                        self.push(1, g, self.a_comp[Fh, self.a_inv[Ff]])
                    elif Fg >= 0 and Fh >= 0:
                        self.push(1, f, self.a_comp[self.a_inv[Fg], Fh])
        return True

    cdef void undo(self, size_t mark) noexcept:
        cdef i64 t
        while self.trail.size() > mark:
            t = self.trail.back()
            self.trail.pop_back()
            if t < self.n_ox:
                self.img_o[t] = -1
            else:
                self.img_m[t - self.n_ox] = -1

    cdef int tick(self) except -1:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")
        return 0

    cdef int rec(self, i64 var) except -1:
        cdef i64 m, s, t, cell, k, c, lo, hi, b
        cdef size_t mark
        cdef const i64[:] cands = self.a_fixed
        cdef bint direct = False
        while var < self.n_ox and self.img_o[var] >= 0:
            var += 1
        if var == self.n_ox:
            while var < self.n_ox + self.n_mx and self.img_m[var - self.n_ox] >= 0:
                var += 1
        if var == self.n_ox + self.n_mx:
            self.count += 1
            if not self.count_only:
                self.solutions.append((tuple(np.asarray(self.img_o).tolist()),
                                       tuple(np.asarray(self.img_m).tolist())))
            if 0 <= self.limit <= self.count:
                raise _Stop()
            return 0
        if var < self.n_ox:
            if self.has_f and self.req_obj[var] >= 0:
                b = self.req_obj[var]
                lo, hi = self.fib_ptr[b], self.fib_ptr[b + 1]
                cands = self.fib_idx
            elif self.equi and self.x_aobj[var] == var:
                lo, hi = 0, len(self.a_fixed)
                cands = self.a_fixed
            else:
                lo, hi = 0, self.n_oa
                direct = True
            for k in range(lo, hi):
                c = k if direct else cands[k]
                self.tick()
                mark = self.trail.size()
                self.push(0, var, c)
                if self.propagate():
                    self.rec(var + 1)
                self.undo(mark)
        else:
            m = var - self.n_ox
            s = self.img_o[self.x_src[m]]
            t = self.img_o[self.x_tgt[m]]
            cell = s * self.n_oa + t
            for k in range(self.hom_ptr[cell], self.hom_ptr[cell + 1]):
                c = self.hom_idx[k]
                self.tick()
                mark = self.trail.size()
                self.push(1, m, c)
                if self.propagate():
                    self.rec(var + 1)
                self.undo(mark)
        return 0

    def run(self, pre_obj, pre_mor):
        cdef i64 i
        cdef const i64[:] po = pre_obj
        cdef const i64[:] pm = pre_mor
        for i in range(len(po)):
            if po[i] >= 0:
                self.push(0, i, po[i])
        for i in range(len(pm)):
            if pm[i] >= 0:
                self.push(1, i, pm[i])
        try:
            if self.propagate():
                self.rec(0)
        except _Stop:
            pass
        return self.solutions, self.count, self.nodes


def search(p, limit=-1, budget=10**7, count_only=False):
    """Return ``(solutions, count, nodes)``; see the pure-Python backend."""
    return _Kernel(p, limit, budget, count_only).run(p.pre_obj, p.pre_mor)
