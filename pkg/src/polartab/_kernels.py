"""Pure-Python term kernels.

Reference implementation of the hot loops of proof search. The compiled
module ``_speedups`` exports the same functions with the same semantics.

Bindings for metavariables are triangular dicts ``{meta_id: term}``: a
bound term may mention other bound metas, which ``walk``/``resolve`` chase.
Kernels never mutate a dict they were given; an extended copy is returned.
"""

from .terms import App, Meta, Var


def substitute(t, var_map, meta_map):
    """Simultaneous replacement of variables (by name) and metas (by id)."""
    tp = type(t)
    if tp is Var:
        return var_map.get(t.name, t)
    if tp is Meta:
        return meta_map.get(t.id, t)
    if not t.args:
        return t
    new = [substitute(a, var_map, meta_map) for a in t.args]
    for a, b in zip(t.args, new):
        if a is not b:
            return App(t.symbol, new)
    return t


def walk(t, bindings):
    while type(t) is Meta:
        nxt = bindings.get(t.id)
        if nxt is None:
            return t
        t = nxt
    return t


def resolve(t, bindings):
    """Apply triangular meta bindings all the way down."""
    t = walk(t, bindings)
    if type(t) is not App or not t.args:
        return t
    new = [resolve(a, bindings) for a in t.args]
    for a, b in zip(t.args, new):
        if a is not b:
            return App(t.symbol, new)
    return t


def occurs(mid, t, bindings):
    t = walk(t, bindings)
    tp = type(t)
    if tp is Meta:
        return t.id == mid
    if tp is App:
        for a in t.args:
            if occurs(mid, a, bindings):
                return True
    return False


def _bind(mid, t, bindings, owned):
    if occurs(mid, t, bindings):
        return None, owned
    if not owned:
        bindings = dict(bindings)
        owned = True
    bindings[mid] = t
    return bindings, owned


def _unify(a, b, bindings, owned):
    a = walk(a, bindings)
    b = walk(b, bindings)
    if a is b:
        return bindings, owned
    ta = type(a)
    tb = type(b)
    if ta is Meta:
        if tb is Meta:
            if a.id == b.id:
                return bindings, owned
            if b.id > a.id:
                # bind the newer metavariable
                return _bind(b.id, a, bindings, owned)
        return _bind(a.id, b, bindings, owned)
    if tb is Meta:
        return _bind(b.id, a, bindings, owned)
    if ta is Var or tb is Var:
        if ta is tb and a.name == b.name:
            return bindings, owned
        return None, owned
    if a.symbol != b.symbol or len(a.args) != len(b.args):
        return None, owned
    for x, y in zip(a.args, b.args):
        bindings, owned = _unify(x, y, bindings, owned)
        if bindings is None:
            return None, owned
    return bindings, owned


def unify(a, b, bindings):
    """Most general unifier extending ``bindings``, or None.

    Only metavariables are instantiated; ``Var`` nodes are rigid. Returns the
    input dict itself when no new binding was needed.
    """
    return _unify(a, b, bindings, False)[0]


def unify_args(xs, ys, bindings):
    if len(xs) != len(ys):
        return None
    owned = False
    for x, y in zip(xs, ys):
        bindings, owned = _unify(x, y, bindings, owned)
        if bindings is None:
            return None
    return bindings


def _match(p, t, binding):
    tp = type(p)
    if tp is Var:
        bound = binding.get(p.name)
        if bound is None:
            binding[p.name] = t
            return True
        return bound == t
    if tp is Meta:
        return t == p
    if type(t) is not App or p.symbol != t.symbol or len(p.args) != len(t.args):
        return False
    for x, y in zip(p.args, t.args):
        if not _match(x, y, binding):
            return False
    return True


def match(pattern, target, binding=None):
    """One-way matching; metas in ``target`` are opaque constants."""
    out = {} if binding is None else dict(binding)
    return out if _match(pattern, target, out) else None


def match_args(patterns, targets, binding=None):
    if len(patterns) != len(targets):
        return None
    out = {} if binding is None else dict(binding)
    for p, t in zip(patterns, targets):
        if not _match(p, t, out):
            return None
    return out
