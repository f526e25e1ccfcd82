from .utils import CmdBase, Utils
from .Logger import Logger
from .ReportStore import ReportStore
from .Workbench import Workbench
