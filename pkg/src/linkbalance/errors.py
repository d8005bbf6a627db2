"""Exception hierarchy.

Input problems derive from :class:`InputError` so the CLI can map them to a
single exit status; :class:`BudgetExceeded` is kept separate.
"""


class LinkBalanceError(Exception):
    pass


class InputError(LinkBalanceError, ValueError):
    """Malformed or inconsistent user-supplied data."""


class SelfLoopError(InputError):
    def __init__(self, node):
        self.pair = (node, node)
        super().__init__(f"self-loop on node {node}: edge ({node}, {node})")


class DuplicateEdgeError(InputError):
    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(f"duplicate directed edge {self.pair}")


class NodeRangeError(InputError):
    def __init__(self, pair, node_count):
        self.pair = tuple(pair)
        super().__init__(
            f"edge {self.pair} has an endpoint outside [0, {node_count})"
        )


class WeightLengthError(InputError):
    def __init__(self, got, expected):
        super().__init__(f"weight vector has {got} entries, graph has {expected} edges")


class UnknownEdgeError(InputError):
    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(f"edge {self.pair} is not in the graph")


class Unreachable(InputError):
    def __init__(self, source, dest):
        self.source = source
        self.dest = dest
        super().__init__(f"no directed path from {source} to {dest}")


class ConfigError(InputError):
    pass


class DocumentError(InputError):
    pass


class InfeasibleProfile(InputError):
    pass


class BudgetExceeded(LinkBalanceError):
    def __init__(self, candidates, budget):
        self.candidates = candidates
        self.budget = budget
        super().__init__(
            f"exhaustive search needs {candidates} candidates, budget is {budget}"
        )
