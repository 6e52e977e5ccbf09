"""
Runtime settings for simulations and validation campaigns
"""
import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


class SimulationConfig:
    """Configuration for the simulator, the oracles and the CLI"""

    def __init__(self):
        self.log_level = os.getenv("MODECHANGE_LOG_LEVEL", "WARNING").upper()
        self.exhaustive_cap = _env_int("MODECHANGE_EXHAUSTIVE_CAP", 8)
        self.sampled_orders = _env_int("MODECHANGE_SAMPLED_ORDERS", 5000)
        self.workers = _env_int("MODECHANGE_WORKERS", 1)
        self.default_seed = _env_int("MODECHANGE_DEFAULT_SEED", 0)
        self.progress = os.getenv("MODECHANGE_PROGRESS", "auto").lower()

    def show_progress(self) -> bool:
        """
        Decide whether campaign progress bars are drawn

        Returns:
            True when forced on, or when left on auto and stderr is a terminal
        """
        if self.progress in ("1", "true", "yes", "on"):
            return True
        if self.progress in ("0", "false", "no", "off"):
            return False
        return sys.stderr.isatty()


def setup_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr at the configured level"""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


# Singleton instance
settings = SimulationConfig()
