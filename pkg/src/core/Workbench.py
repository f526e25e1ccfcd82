from typing import Optional

import os
import sys
import copy
import time
import pathlib
import inspect
import argparse
import importlib
import warnings
import logging

import yaml

# Version stamps fall back to "v?" when no git executable is installed
os.environ.setdefault('GIT_PYTHON_REFRESH', 'quiet')
import git

import pstkit
from pstkit.errors import GuardError, InputError, NumericError
from pstkit.graph import Graph, from_json
from pstkit.partition import Partition

from .ReportStore import ReportStore
from .utils import Utils


class CommandFailed(Exception):
    """
    argparse usage error, carries the exit code argparse asked for
    """

    def __init__(self, code: int):
        Exception.__init__(self, f'exit {code}')
        self.code = code



class _Parser(argparse.ArgumentParser):

    def exit(self, status: int = 0, message: Optional[str] = None):
        if message:
            self._print_message(message, sys.stderr)
        raise CommandFailed(status)



class Workbench():

    EXIT_OK      = 0
    EXIT_FALSE   = 1
    EXIT_INPUT   = 2
    EXIT_NUMERIC = 3

    DEFAULTS = {
        'Core' : {
            'is_debug'      : False,
            'log_path'      : '',
            'cmd_path'      : '',
            'db_path'       : '',
            'store_reports' : False,
        },
        'Numerics' : dict(pstkit.NUMERICS_DEFAULTS),
    }

    CONFIG = copy.deepcopy(DEFAULTS)

    def __init__(self, stdout=None):
        self.__logger = logging.getLogger(__class__.__name__)
        self.__logger.debug('Workbench initializing...')

        self.stdout   = sys.stdout if isinstance(stdout, type(None)) else stdout
        self.is_debug = self.get_cfg('Core', 'is_debug')

        self._cmds    = {}
        self._modules = {}

        self.__store = None
        db_path = self.get_cfg('Core', 'db_path')
        if db_path and self.get_cfg('Core', 'store_reports'):
            self.__store = ReportStore(db_path)

        self.__load_cmds()
        self.__parser = self.__build_parser()


    @classmethod
    def load_config(cls, path: Optional[str] = None):
        """
        --config PATH, else ./config.yaml, else built-in defaults. Sections and keys
        absent from the file keep their defaults.
        """
        config = copy.deepcopy(cls.DEFAULTS)

        if isinstance(path, type(None)) and os.path.exists('config.yaml'):
            path = 'config.yaml'

        if not isinstance(path, type(None)):
            try:
                with open(path, 'r') as f:
                    loaded = yaml.safe_load(f) or {}
            except OSError as e:
                raise InputError(f'Unable to read config {path}: {e}') from e
            except yaml.YAMLError as e:
                raise InputError(f'Config {path} is not valid YAML: {e}') from e

            for section, values in loaded.items():
                if section not in config or not isinstance(values, dict):
                    raise InputError(f'Unknown config section: {section}')

                for key, value in values.items():
                    if key not in config[section]:
                        raise InputError(f'Unknown config key: {section}.{key}')
                    config[section][key] = value

        cls.CONFIG = config
        pstkit.configure(config['Numerics'])


    @staticmethod
    def get_cfg(src: str, key: str):
        try: return Workbench.CONFIG[src][key]
        except KeyError as e:
           raise KeyError(f'Config get failure: {src}.{key}') from e


    @property
    def store(self) -> Optional[ReportStore]:
        return self.__store


    def __cmd_dir(self) -> pathlib.Path:
        cmd_path = self.get_cfg('Core', 'cmd_path')
        if cmd_path:
            return pathlib.Path(f'{os.getcwd()}/{cmd_path}')

        return pathlib.Path(__file__).resolve().parent.parent/'cmds'


    def __load_cmds(self):
        cmd_dir = self.__cmd_dir()
        files   = sorted(os.listdir(cmd_dir))
        self.__logger.debug(f'Files found: {files}')

        module_files = [ f[:-3] for f in files if f != '__init__.py' and f[-3:] == '.py' ]

        for module_file in module_files:
            self.__logger.debug(f'Importing {module_file}')

            try: module = importlib.import_module(f'cmds.{module_file}')
            except Exception as e:
                self.__logger.error(
                    f'   error importing: {e}\n'
                    f'{Utils.format_exception(e)}'
                )
                continue

            self._modules[module_file] = []

            # Convert from snake_case to CamelCase
            class_name = f'Cmds{"".join([ (word[0].upper() + word[1:]) for word in module_file.split("_") ])}'

            class_type = getattr(module, class_name)
            for name, member in inspect.getmembers(class_type):
                if not isinstance(member, dict) or member.get('type') != 'cmd':
                    continue

                # Subcommands are spelled with dashes on the command line
                name = name.replace('_', '-')

                self._cmds[name] = member
                self._modules[module_file].append(name)


    def __build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--seed', type=int, help='Seed for sampled checks')
        common.add_argument('--workers', type=int, help='Worker threads (0 = physical cores)')
        common.add_argument('--json', action='store_true', help='Machine-readable output')
        common.add_argument('--force', action='store_true', help='Overwrite existing output files')
        common.add_argument('--config', help='Config file (read before the command runs)')

        parser = _Parser(prog='pstkit', description=f'Perfect state transfer workbench {self.get_version()}')
        sub    = parser.add_subparsers(dest='cmd', required=True, parser_class=_Parser)

        for name in sorted(self._cmds):
            cmd = self._cmds[name]
            cmd_parser = sub.add_parser(name, parents=[ common ], help=cmd['help'], epilog=cmd['example'] or None)
            for flags, kwargs in cmd['args']:
                cmd_parser.add_argument(*flags, **kwargs)

        return parser


    def run(self, argv: list[str]) -> int:
        try: args = self.__parser.parse_args(argv)
        except CommandFailed as e:
            return self.EXIT_INPUT if e.code != 0 else self.EXIT_OK

        if not isinstance(args.seed, type(None)):
            pstkit.configure({ 'seed' : args.seed })

        if not isinstance(args.workers, type(None)):
            pstkit.configure({ 'workers' : args.workers })

        return self.__exec_cmd(args.cmd, args)


    def __exec_cmd(self, cmd: str, args: argparse.Namespace) -> int:
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter('always')

            try:
                self.__logger.debug(f'cmd: {cmd}    args: {vars(args)}')
                code = self._cmds[cmd]['func'](self, args)
            except InputError as e:
                self.__logger.error(f'{cmd}: {e}')
                code = self.EXIT_INPUT
            except (NumericError, GuardError) as e:
                self.__logger.error(f'{cmd}: {e}')
                code = self.EXIT_NUMERIC
            except Exception as e:
                self.__logger.critical(
                    f'[ ERROR ] {cmd}\n'
                    f'{Utils.format_exception(e)}'
                )
                code = self.EXIT_NUMERIC

            # Process warnings
            for warning in w:
                file = warning.filename.split('/')[-1]
                self.__logger.warning(
                    f'[ WARNING ] {cmd}: {warning.message}\n'
                    f'  {file}, line {warning.lineno}'
                )

            w.clear()

        return code


    def out(self, text: str):
        self.stdout.write(text if text.endswith('\n') else text + '\n')


    def write(self, path: Optional[str], text: str, force: bool):
        """
        Writes `text` to `path`, or to stdout when no path is given
        """
        if isinstance(path, type(None)) or path == '-':
            self.out(text)
            return

        if os.path.exists(path) and not force:
            raise InputError(f'{path} exists; use --force to overwrite')

        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)

        self.__logger.info(f'Wrote {path}')


    @staticmethod
    def read_text(path: str) -> str:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return f.read()
        except OSError as e:
            raise InputError(f'Unable to read {path}: {e}') from e


    def load_graph(self, path: str) -> Graph:
        return from_json(self.read_text(path))


    def load_partition(self, path: str, n: int) -> Partition:
        return Partition.from_json(self.read_text(path), n)


    def get_version(self) -> str:
        try: repo = git.Repo(pathlib.Path(__file__).resolve().parent, search_parent_directories=True)
        except (git.NoSuchPathError, git.InvalidGitRepositoryError):
            return 'v?'

        try: date = repo.head.commit.committed_date
        except (ValueError, git.GitCommandNotFound):
            return 'v?'

        return time.strftime('v%Y.%m.%d', time.gmtime(date))
