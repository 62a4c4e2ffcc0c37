from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List


class Settings(BaseSettings):
    # Engine limits
    QCHAR_BUDGET: int = 200000  # Monomial cap for every expansion; --budget overrides per job
    QCHAR_DEFAULT_ENGINE: str = "tsys"  # fold | tsys | fm | tableaux | all

    # Fermionic formula
    QCHAR_FERMIONIC_MARGIN: int = 2  # Grades checked past the comparison window
    QCHAR_FERMIONIC_ENUM_BUDGET: int = 200000  # Max occupation vectors in the unrestricted sum

    # Execution
    QCHAR_WORKERS: int = 1  # Process pool size for sweeps (1 = sequential)
    QCHAR_VERBOSE: bool = False  # Progress lines on stderr

    # Environment
    ENVIRONMENT: str = "development"

    # Startup Configuration
    SELF_CHECK_ON_STARTUP: bool = True  # Run the character self-check when the API starts

    @property
    def ENGINE_CHOICES(self) -> List[str]:
        """Engines accepted by --engine and the API"""
        return ["fold", "tsys", "fm", "tableaux", "all"]

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore"  # Ignora variables extras del .env
    )

settings = Settings()
