import logging
import logging.config

from rich.console import Console

# reports own stdout
STDERR_CONSOLE = Console(stderr=True)

LOG_LEVELS = {
    "critical": logging.CRITICAL,
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
    "trace": logging.DEBUG,
}

# Custom Logging Configuration
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "()": "logging.Formatter",
            "fmt": "%(funcName)s - %(message)s",
        },
    },
    "handlers": {
        "default": {
            "formatter": "default",
            "class": "rich.logging.RichHandler",
            "show_path": False,
            "rich_tracebacks": True,
            "console": "ext://core.logger.STDERR_CONSOLE",
        },
    },
    "loggers": {
        "spinlab": {
            "handlers": ["default"],
            "level": "INFO",
            "propagate": False
        },
    },
}

logger = logging.getLogger("spinlab")


def setup_logging(log_level: str = "info") -> None:
    """Apply LOGGING_CONFIG and set the spinlab logger level."""
    logging.config.dictConfig(LOGGING_CONFIG)
    logger.setLevel(LOG_LEVELS.get(log_level.lower(), logging.INFO))
