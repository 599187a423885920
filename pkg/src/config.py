"""
Runtime settings read from the environment (a .env file is optional)
"""
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from src.models.errors import SpecificationError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseModel):
    max_depth: Optional[int] = Field(None, ge=1, description="Certification depth limit, default |X_L|")
    max_nodes: int = Field(100000, ge=1, description="Search nodes expanded before giving up")
    seed: int = Field(0, ge=0)
    falsifier_trials: int = Field(100, ge=1)
    log_level: str = "WARNING"
    jobs: int = Field(1, ge=1)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
        return v


def load_settings() -> Settings:
    """Build Settings from SWCLASS_* environment variables"""
    load_dotenv()
    env = {
        "max_depth": os.getenv("SWCLASS_MAX_DEPTH"),
        "max_nodes": os.getenv("SWCLASS_MAX_NODES"),
        "seed": os.getenv("SWCLASS_SEED"),
        "falsifier_trials": os.getenv("SWCLASS_FALSIFIER_TRIALS"),
        "log_level": os.getenv("SWCLASS_LOG_LEVEL"),
        "jobs": os.getenv("SWCLASS_JOBS"),
    }
    try:
        return Settings(**{k: v for k, v in env.items() if v not in (None, "")})
    except ValidationError as e:
        raise SpecificationError(f"invalid SWCLASS_* setting: {e.errors()[0]['msg']}") from e
