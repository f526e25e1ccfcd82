import argparse
import json
import logging

from pstkit import suites

from core import CmdBase, ReportStore, Workbench


class CmdsVerify:

    __logger = logging.getLogger(__qualname__)

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--suite', required=True, choices=sorted(suites.SUITES), help='Suite to run'),
            CmdBase.Arg('--out', help='Write the report here instead of stdout'),
        ],
        example = 'verify --suite feder --seed 20110407',
        help    = 'Runs a named verification suite. Exit 0 iff every check passes.'
    )
    def verify(self: Workbench, args: argparse.Namespace) -> int:
        report = suites.run_suite(args.suite)
        text   = report.to_json() if args.json else report.text()

        self.write(args.out, text, args.force)

        if not isinstance(self.store, type(None)):
            doc_id = self.store.add_run(report.as_dict(), self.get_version())
            CmdsVerify.__logger.info(f'Report stored as run {doc_id}')

        return Workbench.EXIT_OK if report.passed else Workbench.EXIT_FALSE


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--suite', choices=sorted(suites.SUITES), help='Only runs of this suite'),
        ],
        example = 'reports --suite godsil',
        help    = 'Lists suite runs recorded in the report store.'
    )
    def reports(self: Workbench, args: argparse.Namespace) -> int:
        if isinstance(self.store, type(None)):
            CmdsVerify.__logger.warning('Report store is disabled; set Core.db_path and Core.store_reports')
            return Workbench.EXIT_OK

        runs = self.store.runs(args.suite)
        if args.json:
            self.out(json.dumps(runs, indent=2))
            return Workbench.EXIT_OK

        for run in runs:
            status = 'pass' if run['pass'] else 'FAIL'
            self.out(f'{run["id"]:>4}  {run["suite"]:<12} seed={run["seed"]:<10} {status}  {run["version"]}  {ReportStore.humanize(run["stamp"])}')

        return Workbench.EXIT_OK
