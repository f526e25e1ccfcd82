import argparse

from pstkit import cubelike, graph

from core import CmdBase, Workbench


class CmdsCubelike:

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--generators', required=True, help='Comma separated bit strings, e.g. 100,010,001,011'),
            CmdBase.Arg('--tol', type=float, default=1e-8, help='Fidelity tolerance of the numeric check'),
            CmdBase.Arg('--out', help='Prediction JSON (stdout when omitted)'),
            CmdBase.Arg('--graph-out', help='Also write the cube-like graph JSON'),
        ],
        example = 'cubelike --generators 100,010,001,011',
        help    = 'Predicts PST from 0 for X(Z_2^d, S) and certifies it numerically. Exit 0 iff certified.'
    )
    def cubelike(self: Workbench, args: argparse.Namespace) -> int:
        spec = cubelike.CubelikeSpec.from_bitstrings(args.generators)
        cert = cubelike.certify(spec, args.tol)

        if not isinstance(args.graph_out, type(None)):
            self.write(args.graph_out, graph.to_json(spec.graph()), args.force)

        self.write(args.out, cert.to_json(), args.force)
        return Workbench.EXIT_OK if cert.certified else Workbench.EXIT_FALSE
