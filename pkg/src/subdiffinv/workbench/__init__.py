"""Configuration, scenario runners, plot data and the command line."""

from .config import RunConfig, Tolerances, load_config
from .scenarios import ScenarioReport, scenario_example1, scenario_lemma_suite, scenario_roundtrip
