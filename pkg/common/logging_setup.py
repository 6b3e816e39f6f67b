"""
Logging setup shared by all entry points.

Library modules only create `logging.getLogger(__name__)`; handlers are
installed once, here, by whoever owns the process (the CLI or a script).
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def configure_logging(
    level: Union[int, str] = logging.INFO,
    log_file: Optional[Union[str, Path]] = None,
) -> None:
    """
    Install stdout (and optionally file) handlers on the root logger.

    Args:
        level: Logging level name or number
        log_file: Optional path of a log file written next to run outputs
    """
    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file is not None:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
