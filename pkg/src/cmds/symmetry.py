import argparse
import json

from pstkit import symmetry

from core import CmdBase, Workbench


class CmdsSymmetry:

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--swap', nargs=2, type=int, metavar=('A', 'B'), help='Only decide whether some automorphism maps A to B'),
            CmdBase.Arg('--limit', type=int, default=1000, help='Maximum number of automorphisms listed'),
        ],
        example = 'aut --graph godsil_m2.json --swap 0 31',
        help    = 'Automorphism group order, or with --swap "true"/"false" plus a witness. Exit 1 when no swap exists.'
    )
    def aut(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)

        if not isinstance(args.swap, type(None)):
            a, b = args.swap
            tau  = symmetry.find_swap(g, a, b)
            if isinstance(tau, type(None)):
                self.out('false')
                return Workbench.EXIT_FALSE

            self.out('true')
            self.out(json.dumps(list(tau.image)))
            return Workbench.EXIT_OK

        result = symmetry.automorphisms(g, args.limit)
        if args.json:
            self.out(json.dumps({
                'order'        : result.order,
                'complete'     : result.complete,
                'permutations' : [ list(tau.image) for tau in result.permutations ],
            }))
        else:
            self.out(str(result.order))

        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--left', required=True, help='Graph JSON'),
            CmdBase.Arg('--right', required=True, help='Graph JSON'),
        ],
        example = 'iso --left a15.json --right b15.json',
        help    = 'Prints "true" plus a witness when the weighted graphs are isomorphic; exit 1 when not.'
    )
    def iso(self: Workbench, args: argparse.Namespace) -> int:
        tau = symmetry.find_isomorphism(self.load_graph(args.left), self.load_graph(args.right))
        if isinstance(tau, type(None)):
            self.out('false')
            return Workbench.EXIT_FALSE

        self.out('true')
        self.out(json.dumps(list(tau.image)))
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
        ],
        example = 'triangles --graph a15.json',
        help    = 'Per-vertex triangle counts and the total.'
    )
    def triangles(self: Workbench, args: argparse.Namespace) -> int:
        census = symmetry.triangle_census(self.load_graph(args.graph))
        counts = [ int(c) for c in census ]

        self.out(json.dumps({ 'counts' : counts, 'total' : sum(counts)//3 }))
        return Workbench.EXIT_OK
