import argparse
import json

from pstkit import feder, graph, partition

from core import CmdBase, Workbench


class CmdsFeder:

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Unweighted loop-free primary graph JSON'),
            CmdBase.Arg('--k', type=int, required=True, help='Number of bosons'),
            CmdBase.Arg('--out', help='Output secondary graph JSON'),
            CmdBase.Arg('--map', help='Output JSON mapping occupation vectors to vertex indices'),
        ],
        example = 'feder --graph p3.json --k 2 --out d6.json --map d6_map.json',
        help    = 'k-boson secondary graph F(G, k).'
    )
    def feder(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)
        fg, vectors = feder.feder_graph(g, args.k)

        self.write(args.out, graph.to_json(fg), args.force)

        if not isinstance(args.map, type(None)):
            mapping = [ { 'counts' : list(vec.counts), 'vertex' : i } for i, vec in enumerate(vectors) ]
            self.write(args.map, json.dumps(mapping, indent=2) + '\n', args.force)

        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--k', type=int, required=True, help='Cartesian power'),
            CmdBase.Arg('--out', help='Output quotient graph JSON'),
            CmdBase.Arg('--partition-out', help='Output JSON of the orbit partition of G^□k'),
        ],
        example = 'orbit-quotient --graph k2.json --k 4',
        help    = 'Quotient of G^□k by coordinate-permutation orbits.'
    )
    def orbit_quotient(self: Workbench, args: argparse.Namespace) -> int:
        g      = self.load_graph(args.graph)
        orbits = feder.orbit_partition(g, args.k)
        result = partition.quotient(graph.cartesian_power(g, args.k), orbits.partition)

        self.write(args.out, graph.to_json(result.quotient), args.force)
        if not isinstance(args.partition_out, type(None)):
            self.write(args.partition_out, orbits.partition.to_json(), args.force)

        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--m1', type=int, required=True, help='First power'),
            CmdBase.Arg('--p1', help='Partition JSON of G^□m1 (orbit partition when omitted)'),
            CmdBase.Arg('--m2', type=int, required=True, help='Second power'),
            CmdBase.Arg('--p2', help='Partition JSON of (G^□m1/π1)^□m2 (orbit partition when omitted)'),
        ],
        example = 'compose --graph k2.json --m1 2 --m2 2',
        help    = 'Checks (G^□m1/π1)^□m2/π2 against the quotient of G^□(m1 m2). Exit 0 iff they agree.'
    )
    def compose(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)

        if isinstance(args.p1, type(None)):
            pi1 = feder.orbit_partition(g, args.m1).partition
        else:
            pi1 = self.load_partition(args.p1, g.n**args.m1)

        first = partition.quotient(graph.cartesian_power(g, args.m1), pi1).quotient
        if isinstance(args.p2, type(None)):
            pi2 = feder.orbit_partition(first, args.m2).partition
        else:
            pi2 = self.load_partition(args.p2, first.n**args.m2)

        result = feder.compose_quotients(g, args.m1, pi1, args.m2, pi2)
        self.out(json.dumps({
            'residual'              : result.residual,
            'pass'                  : result.ok,
            'w_is_partition_matrix' : result.w_is_partition_matrix,
        }))

        return Workbench.EXIT_OK if result.ok else Workbench.EXIT_FALSE
