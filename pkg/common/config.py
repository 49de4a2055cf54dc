"""
Runtime settings for the FK-UCT toolkit.
Values come from the environment (or a local .env file) and only tune limits
and verbosity; results never depend on them.
"""

import os
import logging
from dotenv import load_dotenv

# Load environment variables (override=True ensures .env wins)
load_dotenv(override=True)


def _get_int(name: str, default: int) -> int:
    """Read an integer setting, falling back to the default on bad input."""
    raw = os.getenv(name, str(default)).strip()
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"⚠️ {name}={raw!r} is not an integer, using {default}")
        return default


LOG_LEVEL = os.getenv("FKT_LOG_LEVEL", "INFO").strip().upper()
OUTPUT_DIR = os.getenv("FKT_OUTPUT_DIR", "output").strip()

# Presented-category enumeration limits
MAX_WORD_LENGTH = _get_int("FKT_MAX_WORD_LENGTH", 64)
MAX_SYMBOLS = _get_int("FKT_MAX_SYMBOLS", 200000)

# enumerate-posets refuses anything above this
MAX_ENUM_POINTS = _get_int("FKT_MAX_ENUM_POINTS", 6)


def configure_logging(level: str = None):
    """Configure root logging once for the CLI and scripts."""
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format='%(levelname)s: %(message)s'
    )


def output_path(filename: str) -> str:
    """Resolve a relative output file name against OUTPUT_DIR."""
    if os.path.isabs(filename) or os.path.dirname(filename):
        return filename
    os.makedirs(OUTPUT_DIR, exist_ok=True)
    return os.path.join(OUTPUT_DIR, filename)
