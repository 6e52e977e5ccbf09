"""
Steady / transition phase tracking for the synchronous protocol
"""
import logging
from dataclasses import dataclass
from typing import List, Union

from src.errors import ProtocolError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Steady:
    mode: str
    since: int = 0


@dataclass(frozen=True)
class Transition:
    from_mode: str
    to_mode: str
    t_mcr: int


SystemPhase = Union[Steady, Transition]


class PhaseMachine:
    """
    Moves the system between STEADY and TRANSITION phases

    An MCR is only accepted in a steady phase; a transition always ends in
    the steady phase of its target mode.
    """

    def __init__(self, initial_mode: str, start: int = 0):
        self.phase: SystemPhase = Steady(initial_mode, start)
        self.history: List[SystemPhase] = [self.phase]

    @property
    def in_transition(self) -> bool:
        return isinstance(self.phase, Transition)

    @property
    def mode(self) -> str:
        if isinstance(self.phase, Steady):
            return self.phase.mode
        return self.phase.from_mode

    def request(self, t_mcr: int, target_mode: str) -> Transition:
        if isinstance(self.phase, Transition):
            raise ProtocolError("MCR during transition is out of model")
        if t_mcr < self.phase.since:
            if len(self.history) > 1:
                raise ProtocolError(
                    f"MCR during transition is out of model: MCR at {t_mcr} before enablement of {self.phase.mode!r} at {self.phase.since}"
                )
            raise ProtocolError(
                f"MCR at {t_mcr} precedes the start of steady mode {self.phase.mode!r} at {self.phase.since}"
            )
        self.phase = Transition(self.phase.mode, target_mode, t_mcr)
        self.history.append(self.phase)
        logger.debug("MCR(%s) at %d: entering transition from %s", target_mode, t_mcr, self.phase.from_mode)
        return self.phase

    def complete(self, t_enable: int) -> Steady:
        if not isinstance(self.phase, Transition):
            raise ProtocolError("no transition in progress")
        if t_enable < self.phase.t_mcr:
            raise ProtocolError(f"enablement at {t_enable} precedes the MCR at {self.phase.t_mcr}")
        self.phase = Steady(self.phase.to_mode, t_enable)
        self.history.append(self.phase)
        logger.debug("mode %s enabled at %d", self.phase.mode, t_enable)
        return self.phase
