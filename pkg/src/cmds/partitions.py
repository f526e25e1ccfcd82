import argparse
import json

from pstkit import graph, partition
from pstkit.errors import InputError, PreconditionError

from core import CmdBase, Workbench


class CmdsPartitions:

    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--partition', help='Starting partition JSON (single cell when omitted)'),
            CmdBase.Arg('--from', dest='source', type=int, help='Seed vertex a: start from {a}, {b}, rest'),
            CmdBase.Arg('--to', dest='target', type=int, help='Seed vertex b'),
            CmdBase.Arg('--out', help='Output partition JSON'),
        ],
        example = 'refine --graph q4.json --from 0 --to 15',
        help    = 'Coarsest equitable refinement of a partition.'
    )
    def refine(self: Workbench, args: argparse.Namespace) -> int:
        g = self.load_graph(args.graph)

        seeded = (args.source, args.target)
        if seeded.count(None) == 1:
            raise InputError('--from and --to go together')

        if not isinstance(args.source, type(None)):
            if not isinstance(args.partition, type(None)):
                raise InputError('Use either --partition or --from/--to')
            pi = partition.seeded_partition(g, args.source, args.target)
        elif not isinstance(args.partition, type(None)):
            pi = partition.refine(g, self.load_partition(args.partition, g.n))
        else:
            pi = partition.refine(g, partition.Partition.unit(g.n))

        self.write(args.out, pi.to_json(), args.force)
        return Workbench.EXIT_OK


    @staticmethod
    @CmdBase.Cmd(
        args = [
            CmdBase.Arg('--graph', required=True, help='Graph JSON'),
            CmdBase.Arg('--partition', required=True, help='Equitable partition JSON'),
            CmdBase.Arg('--out', help='Output quotient graph JSON'),
            CmdBase.Arg('--map', help='Output cell-map JSON: cell_of per vertex and the vertices of each quotient vertex'),
            CmdBase.Arg('--check', action='store_true', help='Also print the partition-matrix identity residuals'),
        ],
        example = 'quotient --graph q4.json --partition q4_dist.json --out q4_quot.json --map q4_cells.json',
        help    = 'Quotient graph G/π with weights sqrt(d_jk d_kj) and loops d_jj.'
    )
    def quotient(self: Workbench, args: argparse.Namespace) -> int:
        g  = self.load_graph(args.graph)
        pi = self.load_partition(args.partition, g.n)

        ok, witness = partition.is_equitable(g, pi)
        if not ok:
            self.out(json.dumps({ 'equitable' : False, 'vertex' : witness[0], 'cell' : witness[1] }))
            raise PreconditionError(f'Partition is not equitable: vertex {witness[0]} into cell {witness[1]}', witness)

        result = partition.quotient(g, pi)
        self.write(args.out, graph.to_json(result.quotient), args.force)

        if not isinstance(args.map, type(None)):
            self.write(args.map, result.cell_map.map_json(), args.force)

        if args.check:
            self.out(json.dumps(partition.verify_partition_identities(g, pi).as_dict()))

        return Workbench.EXIT_OK
