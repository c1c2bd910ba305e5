"""Logging setup: one stderr handler, level from PRIMEBIAS_DEBUG"""
import logging
import sys

from primebias.config import config

logging.basicConfig(
    level=logging.DEBUG if config.DEBUG else logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
