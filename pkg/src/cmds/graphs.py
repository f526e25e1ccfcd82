import argparse
import logging

from pstkit import graph
from pstkit.errors import InputError

from core import CmdBase, Utils, Workbench


class CmdsGraphs:

    __logger = logging.getLogger(__qualname__)

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--family', required=True, help='complete, path, cycle, star, empty, hypercube, circulant, cubelike, weighted_p4, weighted_p5, christandl_path, godsil'),
            CmdBase.Arg('--param', action='append', metavar='KEY=VALUE', help='Family parameter, repeatable'),
            CmdBase.Arg('--out', help='Output graph JSON (stdout when omitted)'),
        ],
        example = 'build --family hypercube --param d=4 --out q4.json',
        help    = 'Builds a graph of a named family.'
    )
    def build(self: Workbench, args: argparse.Namespace) -> int:
        try: params = Utils.parse_params(args.param)
        except ValueError as e:
            raise InputError(str(e)) from e

        spec = graph.FamilySpec.from_strings(args.family, params)
        g    = graph.build(spec)

        CmdsGraphs.__logger.info(f'Built {g.name} with {g.n} vertices')
        self.write(args.out, graph.to_json(g), args.force)
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', action='append', required=True, help='Factor graph JSON, repeatable (left factor first)'),
            CmdBase.Arg('--power', type=int, default=1, help='With one --graph, the Cartesian power to take'),
            CmdBase.Arg('--out', help='Output graph JSON'),
        ],
        example = 'product --graph k2.json --graph p3.json --out k2p3.json',
        help    = 'Cartesian product of graphs, or a Cartesian power of one graph.'
    )
    def product(self: Workbench, args: argparse.Namespace) -> int:
        factors = [ self.load_graph(path) for path in args.graph ]

        if len(factors) == 1:
            result = graph.cartesian_power(factors[0], args.power)
        else:
            if args.power != 1:
                raise InputError('--power applies to a single --graph')

            result = factors[0]
            for g in factors[1:]:
                result = graph.cartesian_product(result, g)

        self.write(args.out, graph.to_json(result), args.force)
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--left', required=True, help='Left graph JSON'),
            CmdBase.Arg('--right', required=True, help='Right graph JSON'),
            CmdBase.Arg('--out', help='Output graph JSON'),
        ],
        example = 'join --left k1.json --right c4.json',
        help    = 'Join: disjoint union plus all unit edges across.'
    )
    def join(self: Workbench, args: argparse.Namespace) -> int:
        result = graph.join(self.load_graph(args.left), self.load_graph(args.right))
        self.write(args.out, graph.to_json(result), args.force)
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--out', help='Output graph JSON'),
        ],
        example = 'complement --graph c5.json',
        help    = 'Complement of an unweighted loop-free graph.'
    )
    def complement(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)
        if not g.is_unweighted():
            raise InputError('Complement is defined for unweighted loop-free graphs')

        self.write(args.out, graph.to_json(graph.complement(g)), args.force)
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--factor', required=True, help='Positive factor, arithmetic with sqrt and pi allowed'),
            CmdBase.Arg('--out', help='Output graph JSON'),
        ],
        example = 'scale --graph cp4.json --factor "1/sqrt(2)"',
        help    = 'Multiplies every weight by a positive factor.'
    )
    def scale(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)
        c = graph.parse_real(args.factor)

        self.write(args.out, graph.to_json(graph.scale(g, c)), args.force)
        return Workbench.EXIT_OK
