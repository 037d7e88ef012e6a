from __future__ import annotations

from pydantic_settings import BaseSettings


class UnitutteSettings(BaseSettings):
    # Logging
    log_level: str = "INFO"
    log_json: bool = False

    # Evaluation
    threads: int = 1
    seed: int = 20240229
    random_instances: int = 100

    # Size caps (ground set cardinalities)
    max_rank_table: int = 20
    max_tutte: int = 16
    max_canonical: int = 10
    max_molecules: int = 10
    max_presentation_columns: int = 12
    max_graph_edges: int = 16
    max_chromatic_edges: int = 8
    max_relative: int = 16

    model_config = {"env_prefix": "UNITUTTE_", "case_sensitive": False}


settings = UnitutteSettings()
