"""
Exception hierarchy shared by every package
"""
from typing import List, Sequence


class ModeChangeError(Exception):
    """Base class for all toolkit errors"""


class InvalidSystemError(ModeChangeError):
    """A multi-mode system breaks one or more model invariants"""

    def __init__(self, violations: Sequence):
        self.violations: List = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid system ({len(self.violations)} violation(s)):\n{lines}")


class UnknownTransitionError(ModeChangeError, KeyError):
    def __init__(self, from_mode: str, to_mode: str):
        self.from_mode = from_mode
        self.to_mode = to_mode
        super().__init__(f"no such transition: {from_mode} -> {to_mode}")

    def __str__(self) -> str:
        return self.args[0]


class ProtocolError(ModeChangeError):
    """A run left the synchronous protocol's model (e.g. MCR during a transition)"""


class NotCompletableTaskError(ModeChangeError):
    def __init__(self, task: str, from_mode: str, to_mode: str):
        self.task = task
        super().__init__(
            f"not a completable task: {task!r} is not in C({from_mode},{to_mode})"
        )


class UnknownJobError(ModeChangeError, KeyError):
    def __init__(self, job_id: str):
        self.job_id = job_id
        super().__init__(f"unknown job: {job_id}")

    def __str__(self) -> str:
        return self.args[0]


class ExhaustiveCapError(ModeChangeError):
    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(f"exhaustive cap exceeded: {n} jobs > cap {cap}")


class ConditionNotSatisfiedError(ModeChangeError):
    def __init__(self, from_mode: str, to_mode: str):
        super().__init__(
            f"condition not satisfied; sufficiency test inapplicable ({from_mode} -> {to_mode})"
        )


class InvariantBreachError(ModeChangeError):
    """Simulator output failed its own well-formedness check"""

    def __init__(self, violations: Sequence):
        self.violations: List = list(violations)
        super().__init__(
            "schedule invariant breached: " + "; ".join(str(v) for v in self.violations)
        )


class DocumentSyntaxError(ModeChangeError):
    """Input file is not valid JSON"""


class DocumentSchemaError(ModeChangeError):
    """Input document has missing, unknown or mistyped keys"""

    def __init__(self, problems: Sequence[str]):
        self.problems: List[str] = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"schema violation(s):\n{lines}")
