"""
Utility functions for RevoStore
"""

import hashlib
import logging
import os
import random
import tempfile
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

Rng = Union[random.Random, random.SystemRandom]


def setup_logging(log_level: str = "INFO", log_file: Optional[Path] = None) -> logging.Logger:
    """Set up logging configuration"""
    # Create formatters
    detailed_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    console_formatter = logging.Formatter(
        '%(levelname)s: %(message)s'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    root_logger.handlers = []  # Clear existing handlers

    if log_file is not None:
        from config import Config

        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=Config.LOG_MAX_BYTES,
            backupCount=Config.LOG_BACKUP_COUNT,
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(file_handler)

    # Console handler with simpler format
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, log_level.upper(), logging.INFO))
    console_handler.setFormatter(console_formatter)
    root_logger.addHandler(console_handler)

    return logging.getLogger(__name__)


def make_rng(seed: Optional[int] = None) -> Rng:
    """Deterministic generator when seeded, OS entropy otherwise"""
    if seed is None:
        return random.SystemRandom()
    return random.Random(seed)


def fingerprint(data: bytes, length: int = 16) -> str:
    """Short hex fingerprint of a serialized artifact"""
    return hashlib.sha256(data).hexdigest()[:length]


def write_atomic(path: Path, data: bytes) -> None:
    """Write bytes to path through a temp file and rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except Exception:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def format_bytes(bytes_size: int) -> str:
    """Format bytes size to human readable string"""
    size = float(bytes_size)
    for unit in ['B', 'KB', 'MB', 'GB', 'TB']:
        if size < 1024.0:
            return f"{size:.1f} {unit}"
        size /= 1024.0
    return f"{size:.1f} PB"


def parse_csv_list(text: Optional[str]) -> list:
    """Split a comma separated flag value, dropping blanks"""
    if not text:
        return []
    return [item.strip() for item in text.split(',') if item.strip()]
