"""First-order terms: variables, metavariables and applications.

Terms are hashable and treated as immutable. They are plain slotted classes
rather than dataclasses because the unification and matching kernels build
and compare them in the inner loop of proof search.
"""


class Var:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return hash(("V", self.name))

    def __repr__(self):
        return f"Var({self.name!r})"


class Meta:
    """Rigid metavariable introduced by a gamma rule, bound at closure time."""

    __slots__ = ("id",)

    def __init__(self, id):
        self.id = id

    def __eq__(self, other):
        return type(other) is Meta and other.id == self.id

    def __hash__(self):
        return hash(("M", self.id))

    def __repr__(self):
        return f"Meta({self.id})"


class App:
    __slots__ = ("symbol", "args", "_hash")

    def __init__(self, symbol, args=()):
        self.symbol = symbol
        self.args = tuple(args)
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is App
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.symbol, self.args))
        return h

    def __repr__(self):
        if not self.args:
            return f"App({self.symbol!r})"
        return f"App({self.symbol!r}, {list(self.args)!r})"


def const(name):
    return App(name, ())


Term = Var | Meta | App
