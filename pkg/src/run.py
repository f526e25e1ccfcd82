import sys

if sys.version_info < (3, 10):
    print('Python 3.10 or later is required!')
    sys.exit(1)

import traceback
import os

import argparse
import pathlib
import logging

from core.Logger import LoggerClass
from core.Workbench import Workbench
from pstkit.errors import InputError


def exception_hook(exctype, value, tb):
    trace = ''.join(traceback.format_exception(exctype, value, tb))
    logging.getLogger('Workbench').critical(trace)
    sys.exit(Workbench.EXIT_NUMERIC)
sys.excepthook = exception_hook


def main(argv: list[str]) -> int:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config')
    known, _ = pre.parse_known_args(argv)

    try: Workbench.load_config(known.config)
    except InputError as e:
        print(f'ERROR  {e}', file=sys.stderr)
        return Workbench.EXIT_INPUT

    log_path = Workbench.get_cfg('Core', 'log_path')
    if log_path:
        log_path = pathlib.Path(f'{os.path.abspath(os.getcwd())}/{log_path}')
        os.makedirs(log_path, exist_ok=True)

    logging.setLoggerClass(LoggerClass(log_path, Workbench.get_cfg('Core', 'is_debug')))

    return Workbench().run(argv)


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
