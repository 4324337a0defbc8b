"""Exception hierarchy shared by every stage of the pipeline."""


class PolartabError(Exception):
    pass


class ParseError(PolartabError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ArityError(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class NoGoal(ParseError):
    pass


class IllFormedRule(PolartabError):
    pass


class RewriteLimitExceeded(PolartabError):
    def __init__(self, literal, budget):
        self.literal = literal
        self.budget = budget
        super().__init__(budget)

    def __str__(self):
        from .printer import show
        return f"rewrite budget of {self.budget} steps exhausted on {show(self.literal)}"


class UnknownRule(PolartabError):
    pass


class MalformedTrace(PolartabError):
    pass


class ReconstructionFailed(PolartabError):
    pass
