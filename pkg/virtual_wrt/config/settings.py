from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional

class Settings(BaseSettings):
    # Cap on classical crossings after cabling; 2^budget states per term
    crossing_budget: int = 36

    tolerance: float = 1e-9
    printed_tolerance: float = 1e-4

    conventions_path: Optional[str] = None
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="VWRT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

settings = Settings()
