import logging
import sys

from .config import get_settings

logger = logging.getLogger("sgi_nanorotor")


def configure_logging(level: str | None = None) -> None:
    """Route package logs to standard error at the configured level.

    Args:
        level: Optional level name overriding ``Settings.log_level``.
    """
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
