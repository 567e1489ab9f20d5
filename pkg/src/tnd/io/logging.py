from typing import Optional
import json
import logging

# The default logging level for the entire app.
DEFAULT_LEVEL = logging.INFO

# Whether loggers also write to the console (turned off by '--quiet').
TO_CONSOLE = True

# Whether records are written as one JSON object per line (turned on by '--json').
AS_JSON = False


class JsonFormatter(logging.Formatter):
    """Formats each record as a single-line JSON object."""

    def format(self, record: logging.LogRecord) -> str:
        data = {
            "time": self.formatTime(record, self.datefmt),
            "name": record.name,
            "level": record.levelname,
            "message": record.getMessage(),
        }
        if record.exc_info:
            data["exception"] = self.formatException(record.exc_info)
        return json.dumps(data)


def init_logger(
    name: str,
    filename: Optional[str] = None,
    level: Optional[int] = None,
    filemode: str = "w",
    encoding: str = "utf-8",
    format_: str = "%(asctime)s %(name)-20s %(levelname)-8s %(message)s",
    datefmt: Optional[str] = "%y-%m-%d %H:%M",
    to_console: Optional[bool] = None,
    as_json: Optional[bool] = None,
) -> logging.Logger:
    """
    Convenience method for initializing a Logger. Parameters are the same as basicConfig().
    'to_console' and 'as_json' default to the module-wide switches. Existing handlers
    are replaced, so re-initializing for a new run does not duplicate output.
    """
    logger = logging.getLogger(name)
    logger.setLevel(DEFAULT_LEVEL if level is None else level)
    to_console = TO_CONSOLE if to_console is None else to_console
    as_json = AS_JSON if as_json is None else as_json
    if as_json:
        formatter = JsonFormatter(datefmt="%Y-%m-%dT%H:%M:%S")
    else:
        formatter = logging.Formatter(fmt=format_, datefmt=datefmt)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    if filename is not None:
        handler = logging.FileHandler(
            filename=filename, mode=filemode, encoding=encoding
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    if to_console:
        console = logging.StreamHandler()
        console.setFormatter(formatter)
        logger.addHandler(console)
    return logger


def get_logger(name: str) -> logging.Logger:
    """Returns the Logger with the given name."""
    return logging.getLogger(name)
