import typing
import traceback


class Utils():

    @staticmethod
    def format_exception(ex: Exception):
        frames = traceback.extract_tb(ex.__traceback__)

        err = f'Raised {type(ex)}: {ex}\n'
        for frame in frames:
            file = frame.filename.split('/')[-1]
            err += f'  {file}, line {frame.lineno} in {frame.name}\n'

        if len(frames) > 0:
            err += f'    {frames[-1].line}'

        return err


    @staticmethod
    def parse_params(params: typing.Optional[list[str]]) -> dict[str, str]:
        """
        [ 'd=4', 'connection=+-1,+-2' ] -> { 'd' : '4', 'connection' : '+-1,+-2' }
        """
        parsed = {}
        for param in params or []:
            key, sep, value = param.partition('=')
            if sep == '' or key.strip() == '':
                raise ValueError(f'Parameter must look like key=value, got "{param}"')

            parsed[key.strip()] = value.strip()

        return parsed



class CmdBase():

    @staticmethod
    def Arg(*flags: str, **kwargs) -> tuple:
        """
        argparse `add_argument` call, captured for the command's subparser
        """
        return (flags, kwargs)


    @staticmethod
    def Cmd(args: typing.Sequence[tuple] = (), example: str = '', help: str = '') -> typing.Callable:

        def wrapper(fn : typing.Callable) -> dict:
            return {
                'func'    : fn,
                'type'    : 'cmd',
                'args'    : list(args),
                'example' : example,
                'help'    : help
            }

        return wrapper
