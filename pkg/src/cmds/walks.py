import argparse
import json
import logging

from pstkit import spectral, walk

from core import CmdBase, Workbench


def _endpoints() -> list[tuple]:
    return [
        CmdBase.Arg('--graph', required=True, help='Graph JSON'),
        CmdBase.Arg('--from', dest='source', type=int, required=True, help='Start vertex a'),
        CmdBase.Arg('--to', dest='target', type=int, required=True, help='Target vertex b'),
    ]


class CmdsWalks:

    __logger = logging.getLogger(__qualname__)

    @staticmethod
    @CmdBase.Cmd(
        args = _endpoints() + [
            CmdBase.Arg('--time', type=float, required=True, help='Time in radians'),
        ],
        example = 'fidelity --graph k2.json --from 0 --to 1 --time 1.5707963267948966',
        help    = 'Prints |<b|exp(-itA)|a>| and the complex amplitude.'
    )
    def fidelity(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)
        z = spectral.amplitude(g, args.source, args.target, args.time)

        if args.json:
            self.out(json.dumps({ 't' : args.time, 'fidelity' : abs(z), 'amplitude' : [ z.real, z.imag ] }))
        else:
            self.out(f'{abs(z):.17g}')

        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = _endpoints() + [
            CmdBase.Arg('--tmax', type=float, required=True, help='End of the scan window [0, tmax]'),
            CmdBase.Arg('--steps', type=int, help='Grid points (config scan_steps when omitted)'),
            CmdBase.Arg('--out', help='Output CSV of the grid (t,fidelity)'),
            CmdBase.Arg('--peaks', help='Output JSON of refined peaks (stdout when omitted)'),
            CmdBase.Arg('--tol', type=float, help='PST tolerance for the exit code'),
        ],
        example = 'scan --graph d6.json --from 0 --to 5 --tmax 6 --out d6.csv',
        help    = 'Fidelity scan with golden-section peak refinement. Exit 0 iff some peak reaches PST.'
    )
    def scan(self: Workbench, args: argparse.Namespace) -> int:
        g      = self.load_graph(args.graph)
        series = walk.fidelity_scan(g, args.source, args.target, args.tmax, args.steps)

        if not isinstance(args.out, type(None)):
            self.write(args.out, series.to_csv(), args.force)

        self.write(args.peaks, series.peaks_json(), args.force)

        tol  = walk.SETTINGS['pst_tol'] if isinstance(args.tol, type(None)) else args.tol
        peak = series.top()
        if isinstance(peak, type(None)) or peak.fidelity < 1 - tol:
            CmdsWalks.__logger.info(f'No PST from {args.source} to {args.target} within [0, {args.tmax}]')
            return Workbench.EXIT_FALSE

        symbol = walk.symbolic_time(peak.t)
        CmdsWalks.__logger.info(f'PST at t = {peak.t:.12f}' + ('' if symbol is None else f' ≈ {symbol}'))
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = _endpoints() + [
            CmdBase.Arg('--time', type=float, required=True, help='Time in radians'),
            CmdBase.Arg('--tol', type=float, help='Fidelity tolerance (config pst_tol when omitted)'),
        ],
        example = 'pst-verify --graph q4.json --from 0 --to 15 --time 1.5707963267948966',
        help    = 'Prints true iff fidelity >= 1 - tol; exit 0 when true, 1 when false.'
    )
    def pst_verify(self: Workbench, args: argparse.Namespace) -> int:
        g  = self.load_graph(args.graph)
        ok = walk.verify_pst(g, args.source, args.target, args.time, args.tol)

        self.out('true' if ok else 'false')
        return Workbench.EXIT_OK if ok else Workbench.EXIT_FALSE
