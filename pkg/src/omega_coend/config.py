"""Runtime settings for omega-coend

Defaults can be overridden from ``OMEGA_COEND_*`` environment variables and
then from CLI flags.
"""
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field

ENV_PREFIX = "OMEGA_COEND_"


class Variant(str, Enum):
    """Which of the two whiskered composites builds the p = 0 composition cell"""

    LEFT = "left"
    RIGHT = "right"


class LoopMode(str, Enum):
    """Reading of the loop property for root pairs"""

    FOUR_WAY = "four-way"
    TWO_WAY = "two-way"


class Settings(BaseModel):
    """Bounds and switches shared by every construction"""

    model_config = ConfigDict(frozen=True)

    max_dim: int = Field(default=2, ge=0, le=6)
    max_width: int = Field(default=3, ge=0)
    max_size: int = Field(default=2, ge=0)
    max_cells: int = Field(default=20000, ge=1)
    variant: Variant = Variant.LEFT
    loop_mode: LoopMode = LoopMode.FOUR_WAY
    cache_dir: Optional[Path] = None
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, **overrides: Any) -> "Settings":
        """Build settings from the environment, then apply explicit overrides

        Args:
            environ: Mapping to read instead of os.environ
            **overrides: Field values that win over the environment; None is ignored

        Returns:
            Validated Settings
        """
        source = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        for name in cls.model_fields:
            raw = source.get(ENV_PREFIX + name.upper())
            if raw not in (None, ""):
                values[name] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
