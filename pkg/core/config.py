from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).resolve().parents[1]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=BASE_DIR / ".env",
                                      env_file_encoding="utf-8",
                                      env_ignore_empty=True,
                                      case_sensitive=True,
                                      extra="ignore")
    # App
    PROJECT_NAME: str = "spinlab"
    VERSION: str = "0.1.0"
    LOG_LEVEL: str = "info"

    # Numerics
    ALGEBRA_TOLERANCE: float = 1e-10
    CLUSTER_TOLERANCE: float = 1e-8
    RANK_TOLERANCE: float = 1e-9
    FD_STEP: float = 1e-4

    # Suite runner
    MAX_WORKERS: int = 4


settings = Settings()
