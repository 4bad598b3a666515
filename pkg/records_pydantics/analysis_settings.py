import logging
import os
from typing import Any, Dict, Literal, Optional

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, Field, field_validator

from constants import (
    DEFAULT_BUDGET_DEGREE,
    DEFAULT_BUDGET_PAIRS,
    DEFAULT_CHART_RETRIES,
    DEFAULT_GRAPH_SAMPLES,
    DEFAULT_LOCAL_ORDER_BUDGET,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    DEFAULT_WITNESS_TRIALS,
    ENV_PREFIX,
)
from validation_utils import (
    strip_and_convert_empty_to_none,
    validate_order_name,
    validate_positive_int,
)

LOGGER = logging.getLogger(__name__)


class AnalysisSettings(BaseModel):
    seed: int = Field(DEFAULT_SEED, alias="seed")
    order: Literal["grevlex", "lex"] = Field(DEFAULT_ORDER, alias="order")
    budget_degree: int = Field(DEFAULT_BUDGET_DEGREE, alias="budget-degree")
    budget_pairs: int = Field(DEFAULT_BUDGET_PAIRS, alias="budget-pairs")
    chart_retries: int = Field(DEFAULT_CHART_RETRIES, alias="chart-retries")
    witness_trials: int = Field(DEFAULT_WITNESS_TRIALS, alias="witness-trials")
    local_order_budget: int = Field(DEFAULT_LOCAL_ORDER_BUDGET, alias="local-order-budget")
    graph_samples: int = Field(DEFAULT_GRAPH_SAMPLES, alias="graph-samples")
    cache_dir: Optional[str] = Field(None, alias="cache-dir")
    planar: Optional[bool] = Field(None, alias="planar")
    jobs: int = Field(1, alias="jobs")
    field: Optional[str] = Field(None, alias="field")

    @field_validator('order', mode='before')
    def validate_order(cls, v):
        return validate_order_name(v)

    @field_validator('budget_degree', 'budget_pairs', 'chart_retries', 'witness_trials',
                     'local_order_budget', 'graph_samples', 'jobs', mode='before')
    def validate_positive(cls, v, info):
        field_name = info.field_name.replace('_', ' ').capitalize()
        return validate_positive_int(v, field_name)

    @field_validator('cache_dir', 'field', mode='before')
    def empty_to_none(cls, v):
        return strip_and_convert_empty_to_none(v)

    class Config:
        populate_by_name = True
        validate_default = True
        validate_assignment = True
        extra = "forbid"


def settings_from_environment(environ: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    environ = os.environ if environ is None else environ
    values = {}
    for name in AnalysisSettings.model_fields:
        key = f"{ENV_PREFIX}{name.upper()}"
        if key in environ:
            values[name] = environ[key]
    return values


def load_settings(overrides: Optional[Dict[str, Any]] = None, read_dotenv: bool = True) -> AnalysisSettings:
    """Defaults, then JACSYZ_* environment variables (and .env), then explicit overrides."""
    if read_dotenv:
        load_dotenv(find_dotenv(usecwd=True))
    values = settings_from_environment()
    if values:
        LOGGER.debug(f"Settings from environment: {sorted(values)}")
    for name, value in (overrides or {}).items():
        if value is not None:
            values[name] = value
    return AnalysisSettings(**values)
