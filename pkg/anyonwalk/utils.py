import logging
import os
import tempfile
from pathlib import Path
from typing import Union

from anyonwalk.exceptions import FileReadError, FileWriteError

logger = logging.getLogger("anyonwalk")


def safe_read_file(path: Union[str, Path]) -> str:
    """Read a text file, raising FileReadError with the cause attached."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError as e:
        raise FileReadError(str(path), reason="file not found", original_error=e) from e
    except PermissionError as e:
        raise FileReadError(str(path), reason="permission denied", original_error=e) from e
    except IsADirectoryError as e:
        raise FileReadError(str(path), reason="is a directory", original_error=e) from e
    except UnicodeDecodeError as e:
        raise FileReadError(str(path), reason="not UTF-8 text", original_error=e) from e


def atomic_write(path: Union[str, Path], text: str) -> Path:
    """
    Write ``text`` to ``path`` via a temporary file in the same directory.

    Readers never observe a partially written file.
    """
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as e:
        raise FileWriteError(str(target), reason=str(e), original_error=e) from e
    logger.debug("Wrote %s (%d bytes)", target, len(text))
    return target
