"""
Application configuration
"""
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Application settings"""
    
    # Application
    APP_NAME: str = "oval"
    VERSION: str = "1.0.0"
    
    # Tolerances (relative to the polygon diameter, or its square for areas)
    LENGTH_TOLERANCE: float = 1e-9
    AREA_TOLERANCE: float = 1e-12
    TIE_TOLERANCE: float = 1e-12
    
    # Oracle
    ORACLE_MAX_SAMPLES: int = 1 << 22
    
    # Elements per numpy block (rows x vertices) in chunked distance work
    BLOCK_ELEMENTS: int = 1 << 22
    
    # Smooth curves
    QUADRATURE_POINTS: int = 2048
    ARCLENGTH_NEWTON_STEPS: int = 4
    
    # Moduli scans and quadrangle search
    TRIANGLE_CONSISTENCY_TOLERANCE: float = 1e-9
    SEARCH_RESTARTS: int = 64
    SEARCH_ITERATIONS: int = 400
    SEARCH_SEED: int = 20080815
    SEARCH_INITIAL_STEP: float = 0.125
    SEARCH_MIN_STEP: float = 1e-9
    
    # Worker pool (0 = one worker per CPU)
    OVAL_THREADS: int = 0
    
    # Output
    OUTPUT_DIGITS: int = 10
    
    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "text"
    
    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"  # Ignore extra fields in .env file


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


settings = get_settings()
