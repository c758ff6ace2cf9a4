"""Logging configuration for quantum tree spectra."""

import logging
import logging.config
from typing import Any, Dict

from config import config

MODULE_LOGGERS = (
    "graph_core",
    "tree_enum",
    "charpoly",
    "cospectral",
    "spectrum",
    "inverse",
    "storage_manager",
    "cli",
)


def setup_logging() -> None:
    """Set up logging configuration."""

    module_handlers = ['console', 'file'] if config.log_file else ['console']

    handlers: Dict[str, Any] = {
        'console': {
            'class': 'logging.StreamHandler',
            'level': config.log_level,
            'formatter': 'standard',
            # stdout belongs to command output
            'stream': 'ext://sys.stderr'
        },
        'verification': {
            'class': 'logging.StreamHandler',
            'level': 'WARNING',
            'formatter': 'json',
            'stream': 'ext://sys.stderr'
        }
    }
    if config.log_file:
        handlers['file'] = {
            'class': 'logging.FileHandler',
            'level': 'INFO',
            'formatter': 'detailed',
            'filename': config.log_file,
            'mode': 'a'
        }

    loggers: Dict[str, Any] = {
        name: {
            'level': config.log_level,
            'handlers': module_handlers,
            'propagate': False
        }
        for name in MODULE_LOGGERS
    }
    loggers['verification'] = {
        'level': 'WARNING',
        'handlers': ['verification'],
        'propagate': False
    }

    logging_config: Dict[str, Any] = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'standard': {
                'format': config.log_format
            },
            'detailed': {
                'format': '%(asctime)s - %(name)s - %(levelname)s - %(module)s - %(funcName)s - %(message)s'
            },
            'json': {
                'format': '{"timestamp": "%(asctime)s", "logger": "%(name)s", "level": "%(levelname)s", "message": "%(message)s"}'
            }
        },
        'handlers': handlers,
        'loggers': loggers,
        'root': {
            'level': config.log_level,
            'handlers': ['console']
        }
    }

    logging.config.dictConfig(logging_config)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance."""
    return logging.getLogger(name)


def log_oracle_event(event_type: str, details: Dict[str, Any]) -> None:
    """Log disagreements between independent computations and catalog corrections."""
    verification_logger = get_logger('verification')
    summary = ", ".join(f"{key}={value}" for key, value in sorted(details.items()))
    verification_logger.warning(f"Oracle Event: {event_type} ({summary})", extra={"oracle_details": details})


# Set up logging when module is imported
setup_logging()
