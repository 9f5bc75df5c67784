"""
Aislamiento de logging entre tests.

setup_logging() configura el logger raíz una sola vez por proceso y fija el
sys.stderr vigente en ese momento; bajo pytest ese stream es el de captura de
un test anterior, que luego se cierra. Se restaura el estado antes y después
de cada test para que cada main() enlace el stderr de su propio test.
"""
import logging

import pytest

import src.logger as app_logger


@pytest.fixture(autouse=True)
def _reset_logging():
    root = logging.getLogger()
    saved_handlers = list(root.handlers)
    saved_level = root.level
    app_logger._configured = False
    yield
    for handler in list(root.handlers):
        if handler not in saved_handlers:
            root.removeHandler(handler)
    root.setLevel(saved_level)
    logging.disable(logging.NOTSET)
    app_logger._configured = False
