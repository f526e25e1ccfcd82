from typing import Optional

import os
import sys
import logging
import traceback
import functools


class LevelColorFormatter(logging.Formatter):
    """
    Colors the level name on a terminal stream
    """

    COLORS = {
        logging.DEBUG    : '\x1b[36m',
        logging.INFO     : '\x1b[32m',
        logging.WARNING  : '\x1b[33m',
        logging.ERROR    : '\x1b[31m',
        logging.CRITICAL : '\x1b[1;31m',
    }
    RESET = '\x1b[0m'

    def format(self, record: logging.LogRecord) -> str:
        text  = logging.Formatter.format(self, record)
        color = self.COLORS.get(record.levelno, '')
        return text.replace(record.levelname, f'{color}{record.levelname}{self.RESET}', 1)



def use_color(stream) -> bool:
    if 'NO_COLOR' in os.environ:
        return False

    try: return stream.isatty()
    except (AttributeError, ValueError):
        return False



class Logger(logging.Logger):

    FORMAT = '%(levelname)s  %(asctime)s   [ %(name)s ] %(message)s'

    def __init__(self, log_path: Optional[str], is_debug: bool, name: str, level: int = logging.NOTSET):
        logging.Logger.__init__(self, name, level=logging.DEBUG)

        formatter = logging.Formatter(self.FORMAT)

        # Diagnostics go to stderr; stdout carries command output only
        self.sh = logging.StreamHandler(sys.stderr)
        self.sh.setFormatter(LevelColorFormatter(self.FORMAT) if use_color(sys.stderr) else formatter)

        if is_debug: self.sh.setLevel(logging.DEBUG)
        else:        self.sh.setLevel(logging.INFO)

        self.addHandler(self.sh)

        self.fh = None
        if log_path:
            self.fh = logging.FileHandler(f'{log_path}/{name}.log', encoding='utf-8', delay=True)
            self.fh.setFormatter(formatter)
            self.fh.setLevel(logging.INFO)
            self.addHandler(self.fh)


    def __del__(self):
        self.sh.close(); self.removeHandler(self.sh)
        if not isinstance(self.fh, type(None)):
            self.fh.close(); self.removeHandler(self.fh)


    def exception(self, msg):
        msg = msg.strip()
        msg += '\n' + traceback.format_exc()
        self.critical(msg)


def LoggerClass(log_path, is_debug):

    class LoggerClassFull(Logger):
        __init__ = functools.partialmethod(Logger.__init__, log_path, is_debug)

    return LoggerClassFull
