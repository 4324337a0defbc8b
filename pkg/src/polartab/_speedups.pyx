# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; mirrors ``polartab._kernels`` function for function."""

from .terms import App, Meta, Var

cdef object _App = App
cdef object _Meta = Meta
cdef object _Var = Var


cpdef object substitute(object t, dict var_map, dict meta_map):
    cdef object tp = type(t)
    cdef tuple args
    cdef list new
    cdef Py_ssize_t i, n
    cdef bint changed = False
    if tp is _Var:
        return var_map.get(t.name, t)
    if tp is _Meta:
        return meta_map.get(t.id, t)
    args = t.args
    n = len(args)
    if n == 0:
        return t
    new = [None] * n
    for i in range(n):
        a = args[i]
        b = substitute(a, var_map, meta_map)
        if b is not a:
            changed = True
        new[i] = b
    if changed:
        return _App(t.symbol, new)
    return t


cpdef object walk(object t, dict bindings):
    cdef object nxt
    while type(t) is _Meta:
        nxt = bindings.get(t.id)
        if nxt is None:
            return t
        t = nxt
    return t


cpdef object resolve(object t, dict bindings):
    cdef tuple args
    cdef list new
    cdef Py_ssize_t i, n
    cdef bint changed = False
    t = walk(t, bindings)
    if type(t) is not _App:
        return t
    args = t.args
    n = len(args)
    if n == 0:
        return t
    new = [None] * n
    for i in range(n):
        a = args[i]
        b = resolve(a, bindings)
        if b is not a:
            changed = True
        new[i] = b
    if changed:
        return _App(t.symbol, new)
    return t


cpdef bint occurs(object mid, object t, dict bindings):
    cdef object tp
    t = walk(t, bindings)
    tp = type(t)
    if tp is _Meta:
        return t.id == mid
    if tp is _App:
        for a in <tuple>t.args:
            if occurs(mid, a, bindings):
                return True
    return False


cdef class _State:
    cdef dict bindings
    cdef bint owned


cdef bint _bind(object mid, object t, _State st):
    if occurs(mid, t, st.bindings):
        return False
    if not st.owned:
        st.bindings = dict(st.bindings)
        st.owned = True
    st.bindings[mid] = t
    return True


cdef bint _unify(object a, object b, _State st):
    cdef object ta, tb
    cdef tuple xs, ys
    cdef Py_ssize_t i, n
    a = walk(a, st.bindings)
    b = walk(b, st.bindings)
    if a is b:
        return True
    ta = type(a)
    tb = type(b)
    if ta is _Meta:
        if tb is _Meta:
            if a.id == b.id:
                return True
            if b.id > a.id:
                return _bind(b.id, a, st)
        return _bind(a.id, b, st)
    if tb is _Meta:
        return _bind(b.id, a, st)
    if ta is _Var or tb is _Var:
        return ta is tb and a.name == b.name
    if a.symbol != b.symbol:
        return False
    xs = a.args
    ys = b.args
    n = len(xs)
    if n != len(ys):
        return False
    for i in range(n):
        if not _unify(xs[i], ys[i], st):
            return False
    return True


cpdef object unify(object a, object b, dict bindings):
    cdef _State st = _State()
    st.bindings = bindings
    st.owned = False
    if _unify(a, b, st):
        return st.bindings
    return None


cpdef object unify_args(tuple xs, tuple ys, dict bindings):
    cdef _State st
    cdef Py_ssize_t i, n = len(xs)
    if n != len(ys):
        return None
    st = _State()
    st.bindings = bindings
    st.owned = False
    for i in range(n):
        if not _unify(xs[i], ys[i], st):
            return None
    return st.bindings


cdef bint _match(object p, object t, dict binding):
    cdef object tp = type(p)
    cdef object bound
    cdef tuple ps, ts
    cdef Py_ssize_t i, n
    if tp is _Var:
        bound = binding.get(p.name)
        if bound is None:
            binding[p.name] = t
            return True
        return bound == t
    if tp is _Meta:
        return t == p
    if type(t) is not _App or p.symbol != t.symbol:
        return False
    ps = p.args
    ts = t.args
    n = len(ps)
    if n != len(ts):
        return False
    for i in range(n):
        if not _match(ps[i], ts[i], binding):
            return False
    return True


cpdef object match(object pattern, object target, dict binding=None):
    cdef dict out = {} if binding is None else dict(binding)
    if _match(pattern, target, out):
        return out
    return None


cpdef object match_args(tuple patterns, tuple targets, dict binding=None):
    cdef dict out
    cdef Py_ssize_t i, n = len(patterns)
    if n != len(targets):
        return None
    out = {} if binding is None else dict(binding)
    for i in range(n):
        if not _match(patterns[i], targets[i], out):
            return None
    return out
