from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    app_name: str = "sgi-nanorotor"
    out_dir: str = "out"
    threads: int = 1
    log_level: str = "INFO"

    # Integrator steps between recorded samples.
    output_stride: int = 100

    class Config:
        env_prefix = "SGI_NANOROTOR_"
        env_file = ".env"
        env_file_encoding = "utf-8"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
