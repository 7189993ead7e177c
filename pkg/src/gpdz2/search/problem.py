"""Flat integer encoding of a functor search.

A search looks for functors ``F: X -> A`` (optionally equivariant) such that

* ``F`` agrees with the pre-assigned images ``pre_obj`` / ``pre_mor``;
* ``f(F(x)) = req_obj[x]`` and ``f(F(m)) = req_mor[m]`` for a fixed map
  ``f: A -> B`` given by ``f_obj`` / ``f_mor`` (used for lifting problems and
  for sections).

Both search backends consume exactly these arrays.
"""
from dataclasses import dataclass

import numpy as np

IDX = np.int64


def _arr(values, n=None):
    if values is None:
        return np.full(n, -1, dtype=IDX)
    return np.ascontiguousarray(values, dtype=IDX)


@dataclass
class Problem:
    x_src: np.ndarray
    x_tgt: np.ndarray
    x_ident: np.ndarray
    x_inv: np.ndarray
    x_trip: np.ndarray
    x_trip_ptr: np.ndarray
    x_trip_idx: np.ndarray
    x_aobj: np.ndarray
    x_amor: np.ndarray
    a_src: np.ndarray
    a_tgt: np.ndarray
    a_ident: np.ndarray
    a_inv: np.ndarray
    a_comp: np.ndarray
    a_aobj: np.ndarray
    a_amor: np.ndarray
    a_hom_ptr: np.ndarray
    a_hom_idx: np.ndarray
    a_fixed: np.ndarray
    pre_obj: np.ndarray
    pre_mor: np.ndarray
    f_obj: np.ndarray
    f_mor: np.ndarray
    req_obj: np.ndarray
    req_mor: np.ndarray
    fib_ptr: np.ndarray
    fib_idx: np.ndarray

    @property
    def equivariant(self):
        return len(self.x_aobj) > 0


def build_problem(X, A, x_inv_obj=None, x_inv_mor=None, a_inv_obj=None,
                  a_inv_mor=None, pre_obj=None, pre_mor=None,
                  f_obj=None, f_mor=None, n_b_obj=0,
                  req_obj=None, req_mor=None):
    """Encode a search of functors from groupoid ``X`` to groupoid ``A``."""
    xt = X.search_tables()
    at = A.search_tables()
    equivariant = x_inv_obj is not None
    empty = np.zeros(0, dtype=IDX)
    if f_obj is not None:
        f_obj = _arr(f_obj)
        f_mor = _arr(f_mor)
        order = np.argsort(f_obj, kind="stable")
        counts = np.bincount(f_obj, minlength=n_b_obj) if len(f_obj) else np.zeros(n_b_obj, dtype=IDX)
        fib_ptr = np.zeros(n_b_obj + 1, dtype=IDX)
        np.cumsum(counts, out=fib_ptr[1:])
        fib_idx = order.astype(IDX)
    else:
        f_obj = f_mor = fib_ptr = fib_idx = empty
    if equivariant:
        a_inv_obj = _arr(a_inv_obj)
        a_fixed = np.flatnonzero(a_inv_obj == np.arange(len(a_inv_obj))).astype(IDX)
    else:
        a_fixed = empty
    return Problem(
        x_src=X.src, x_tgt=X.tgt, x_ident=X.ident, x_inv=X.inv,
        x_trip=xt["trip"], x_trip_ptr=xt["trip_ptr"], x_trip_idx=xt["trip_idx"],
        x_aobj=_arr(x_inv_obj) if equivariant else empty,
        x_amor=_arr(x_inv_mor) if equivariant else empty,
        a_src=A.src, a_tgt=A.tgt, a_ident=A.ident, a_inv=A.inv, a_comp=A.comp,
        a_aobj=a_inv_obj if equivariant else empty,
        a_amor=_arr(a_inv_mor) if equivariant else empty,
        a_hom_ptr=at["hom_ptr"], a_hom_idx=at["hom_idx"], a_fixed=a_fixed,
        pre_obj=_arr(pre_obj, X.n_obj), pre_mor=_arr(pre_mor, X.n_mor),
        f_obj=f_obj, f_mor=f_mor,
        req_obj=_arr(req_obj, X.n_obj), req_mor=_arr(req_mor, X.n_mor),
        fib_ptr=fib_ptr, fib_idx=fib_idx,
    )
