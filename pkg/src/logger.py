"""
Configuración de logging: una línea JSON por evento, siempre en stderr.

stdout queda reservado para el reporte del CLI.
"""
import json
import logging
import sys
from datetime import datetime, timezone

from config.settings import ENABLE_LOGGING, LOG_LEVEL

_RESERVED = set(vars(logging.makeLogRecord({})).keys()) | {"message", "asctime"}


class JsonLineFormatter(logging.Formatter):
    """Formatea cada registro como un objeto JSON en una sola línea"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "event": record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in _RESERVED and not key.startswith("_"):
                log_entry[key] = value if isinstance(value, (int, bool)) else str(value)
        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_entry, ensure_ascii=False)


_configured = False


def setup_logging(level: str = LOG_LEVEL, enabled: bool = ENABLE_LOGGING) -> None:
    """Configura el logger raíz una sola vez"""
    global _configured
    root = logging.getLogger()

    if not enabled:
        logging.disable(logging.CRITICAL)
        return
    logging.disable(logging.NOTSET)

    if _configured:
        root.setLevel(level.upper())
        return

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    root.addHandler(handler)
    root.setLevel(level.upper())
    _configured = True
