"""
Logger used by the lagexp commands.

Library modules log through ``logging.getLogger("lagexp.<area>.<module>")``.
Configuring the ``lagexp`` logger here routes all of them to stderr, so
stdout carries only the rich tables, and optionally to ``<out>/lagexp.log``.
"""
import importlib
import logging
import platform
import sys
import traceback
from pathlib import Path
from typing import Dict, List, Optional

from src.utils.utils import module_versions

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time (click redirects it)"""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _reset_handlers(logger: logging.Logger) -> None:
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


def configure_logger(name: str, level: int = logging.INFO,
                     log_file: Optional[Path] = None) -> logging.Logger:
    """
    Attach a stderr handler (and a file handler when ``log_file`` is given)
    to the named logger, replacing whatever an earlier command attached.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.propagate = False
    _reset_handlers(logger)

    formatter = logging.Formatter(LOG_FORMAT)
    targets: List[logging.Handler] = [_StderrHandler()]
    if log_file is not None:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        targets.append(logging.FileHandler(log_file))
    for handler in targets:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


class EnhancedLogger:
    """Standard logger plus exception, environment and dependency reporting"""

    def __init__(self, name: str, level: int = logging.INFO, log_file: Optional[Path] = None):
        self.name = name
        self.log_file = log_file
        self.logger = configure_logger(name, level, log_file)

    def set_level(self, level: int) -> None:
        self.logger.setLevel(level)

    def debug(self, msg: str) -> None:
        self.logger.debug(msg)

    def info(self, msg: str) -> None:
        self.logger.info(msg)

    def warning(self, msg: str) -> None:
        self.logger.warning(msg)

    def error(self, msg: str) -> None:
        self.logger.error(msg)

    def exception(self, e: Exception, msg: str = "An error occurred") -> None:
        """One error line naming the exception; the traceback only at DEBUG"""
        self.logger.error(f"{msg}: {type(e).__name__}: {e}")
        self.logger.debug(''.join(traceback.format_exception(type(e), e, e.__traceback__)))

    def log_environment(self) -> None:
        self.logger.debug(f"Python {platform.python_version()} ({sys.executable}) on {platform.platform()}")
        versions = ', '.join(f"{k} {v}" for k, v in module_versions().items())
        self.logger.debug(f"Package versions: {versions}")
        if self.log_file is not None:
            self.logger.debug(f"Logging to {self.log_file}")

    def check_dependencies(self, dependencies: List[str]) -> Dict[str, bool]:
        """
        Import each module and report which are available.

        Args:
            dependencies: Module names, e.g. ['numpy', 'scipy']

        Returns:
            Mapping of module name to availability
        """
        available = {}
        for module_name in dependencies:
            try:
                importlib.import_module(module_name)
                available[module_name] = True
            except ImportError as e:
                self.logger.error(f"Cannot import {module_name}: {e}")
                available[module_name] = False
        return available


def get_logger(name: str, level: int = logging.INFO, log_file: Optional[Path] = None) -> EnhancedLogger:
    return EnhancedLogger(name, level, log_file)
