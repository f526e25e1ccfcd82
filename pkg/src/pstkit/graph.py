"""
Weighted graphs and the named families they are built from.

A graph is a dense symmetric nonnegative adjacency matrix. Loops live on the
diagonal and are stored once (a loop of weight w is A[u][u] = w).
Products index vertex (g, h) as g*|V(H)| + h, left factor major.
"""
from __future__ import annotations

from typing import Optional, Sequence

import ast
import json
import math
import operator
import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import GuardError, InputError


logger = logging.getLogger(__name__)


class Graph():

    def __init__(self, adjacency, name: Optional[str] = None, vertex_labels: Optional[Sequence[str]] = None):
        try: adj = np.array(adjacency, dtype=float)
        except (TypeError, ValueError) as e:
            raise InputError(f'Adjacency is not a real matrix: {e}') from e

        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError(f'Adjacency must be square, got shape {adj.shape}')

        if adj.shape[0] < 1:
            raise InputError('Graph needs at least one vertex')

        if not np.all(np.isfinite(adj)):
            raise InputError('Adjacency has non-finite entries')

        if np.any(adj < 0):
            raise InputError('Adjacency has negative entries')

        if not np.array_equal(adj, adj.T):
            raise InputError('Adjacency is not symmetric')

        if vertex_labels is not None:
            vertex_labels = tuple(str(label) for label in vertex_labels)
            if len(vertex_labels) != adj.shape[0]:
                raise InputError(f'Expected {adj.shape[0]} vertex labels, got {len(vertex_labels)}')

        adj.flags.writeable = False

        self.__adj    = adj
        self.__name   = name
        self.__labels = vertex_labels
        self.__hash   = hash((adj.shape[0], adj.tobytes()))


    @property
    def n(self) -> int:
        return self.__adj.shape[0]


    @property
    def adjacency(self) -> np.ndarray:
        return self.__adj


    @property
    def name(self) -> Optional[str]:
        return self.__name


    @property
    def vertex_labels(self) -> Optional[tuple]:
        return self.__labels


    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented

        return self.n == other.n and np.array_equal(self.__adj, other.adjacency)


    def __hash__(self) -> int:
        return self.__hash


    def __repr__(self) -> str:
        return f'Graph(name={self.__name!r}, n={self.n}, edges={len(self.edges())})'


    def renamed(self, name: Optional[str]) -> Graph:
        return Graph(self.__adj, name, self.__labels)


    def edges(self) -> list[tuple[int, int, float]]:
        """
        Nonzero entries (u, v, w) with u <= v, sorted by (u, v). Loops have u == v.
        """
        us, vs = np.nonzero(np.triu(self.__adj))
        return [ (int(u), int(v), float(self.__adj[u, v])) for u, v in zip(us, vs) ]


    def degrees(self) -> np.ndarray:
        return self.__adj.sum(axis=1)


    def support(self) -> np.ndarray:
        """
        0/1 matrix of nonzero off-diagonal weights
        """
        sup = (self.__adj != 0).astype(np.int64)
        np.fill_diagonal(sup, 0)
        return sup


    def is_unweighted(self) -> bool:
        off = self.__adj[~np.eye(self.n, dtype=bool)]
        return bool(np.all(np.diag(self.__adj) == 0) and np.all((off == 0) | (off == 1)))


    def is_connected(self) -> bool:
        return bool(np.all(np.isfinite(hop_distances(self, 0))))



class FamilySpec():
    """
    Tagged description of a named family. `kind` selects the family, `params`
    holds its parameters:

        complete(n) | path(n) | cycle(n) | star(n) | empty(n) | hypercube(d)
        circulant(n, connection) | cubelike(d, generators)
        weighted_p4(a, b) | weighted_p5(a, b) | christandl_path(n)
        godsil(m, connection=None)
    """

    KINDS = {
        'complete'        : ('n',),
        'path'            : ('n',),
        'cycle'           : ('n',),
        'star'            : ('n',),
        'empty'           : ('n',),
        'hypercube'       : ('d',),
        'circulant'       : ('n', 'connection'),
        'cubelike'        : ('d', 'generators'),
        'weighted_p4'     : ('a', 'b'),
        'weighted_p5'     : ('a', 'b'),
        'christandl_path' : ('n',),
        'godsil'          : ('m',),
    }

    OPTIONAL = {
        'godsil' : ('connection',),
    }

    def __init__(self, kind: str, **params):
        kind = kind.lower().replace('-', '_')
        if kind not in FamilySpec.KINDS:
            raise InputError(f'Unknown family "{kind}". Known: {", ".join(FamilySpec.KINDS)}')

        required = set(FamilySpec.KINDS[kind])
        allowed  = required | set(FamilySpec.OPTIONAL.get(kind, ()))

        missing = required - set(params)
        if missing:
            raise InputError(f'Family "{kind}" is missing parameters: {", ".join(sorted(missing))}')

        unknown = set(params) - allowed
        if unknown:
            raise InputError(f'Family "{kind}" does not take parameters: {", ".join(sorted(unknown))}')

        self.kind   = kind
        self.params = params


    def __repr__(self) -> str:
        args = ', '.join(f'{k}={v!r}' for k, v in self.params.items())
        return f'FamilySpec({self.kind}, {args})'


    @staticmethod
    def from_strings(kind: str, params: dict[str, str]) -> FamilySpec:
        """
        Builds a spec from command line `key=value` strings. Integers stay integers,
        weights accept arithmetic with sqrt and pi (e.g. `a=8/sqrt(15)`), connection
        sets accept `±k` (or `+-k`) shorthand and generators accept bit strings.
        """
        kind   = kind.lower().replace('-', '_')
        parsed = {}

        for key, text in params.items():
            match key:
                case 'n' | 'd' | 'm':
                    try: parsed[key] = int(text)
                    except ValueError as e:
                        raise InputError(f'Parameter {key} must be an integer, got "{text}"') from e
                case 'a' | 'b':
                    parsed[key] = parse_real(text)
                case 'connection':
                    parsed[key] = parse_connection(text)
                case 'generators':
                    parsed[key] = parse_bitstrings(text)
                case _:
                    raise InputError(f'Unknown family parameter "{key}"')

        if kind == 'cubelike' and 'd' not in parsed and 'generators' in params:
            parsed['d'] = len(params['generators'].split(',')[0].strip())

        return FamilySpec(kind, **parsed)



_REAL_OPS = {
    ast.Add  : operator.add,
    ast.Sub  : operator.sub,
    ast.Mult : operator.mul,
    ast.Div  : operator.truediv,
    ast.Pow  : operator.pow,
    ast.USub : operator.neg,
    ast.UAdd : operator.pos,
}


def parse_real(text: str) -> float:
    """
    Evaluates a small arithmetic expression: numbers, + - * / **, sqrt(), pi
    """
    def ev(node):
        match node:
            case ast.Expression(body=body):
                return ev(body)
            case ast.Constant(value=value) if isinstance(value, (int, float)):
                return float(value)
            case ast.Name(id='pi'):
                return math.pi
            case ast.BinOp(left=left, op=op, right=right) if type(op) in _REAL_OPS:
                return _REAL_OPS[type(op)](ev(left), ev(right))
            case ast.UnaryOp(op=op, operand=operand) if type(op) in _REAL_OPS:
                return _REAL_OPS[type(op)](ev(operand))
            case ast.Call(func=ast.Name(id='sqrt'), args=[arg]):
                return math.sqrt(ev(arg))
            case _:
                raise InputError(f'Unsupported expression "{text}"')

    try: tree = ast.parse(text.strip(), mode='eval')
    except SyntaxError as e:
        raise InputError(f'Cannot parse "{text}" as a real number') from e

    try: value = ev(tree)
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        raise InputError(f'Cannot evaluate "{text}": {e}') from e

    if not math.isfinite(value):
        raise InputError(f'"{text}" is not finite')

    return value


def parse_connection(text: str) -> list[int]:
    conn = []
    for token in text.replace(' ', '').split(','):
        if not token:
            continue

        if token.startswith('±') or token.startswith('+-'):
            try: k = int(token.lstrip('±+-'))
            except ValueError as e:
                raise InputError(f'Bad connection element "{token}"') from e
            conn += [ k, -k ]
            continue

        try: conn.append(int(token))
        except ValueError as e:
            raise InputError(f'Bad connection element "{token}"') from e

    return conn


def parse_bitstrings(text: str) -> list[int]:
    gens = []
    for token in text.replace(' ', '').split(','):
        if not token:
            continue

        if set(token) - set('01'):
            raise InputError(f'Generator "{token}" is not a bit string')

        gens.append(int(token, 2))

    return gens


def format_bits(value: int, d: int) -> str:
    return format(value, f'0{d}b') if d > 0 else ''


def _normalize_connection(n: int, connection) -> list[int]:
    if n < 1:
        raise InputError(f'Circulant needs n >= 1, got {n}')

    conn = sorted({ int(s) % n for s in connection })
    if len(conn) == 0:
        raise InputError('Circulant connection set is empty')

    if 0 in conn:
        raise InputError('Circulant connection set contains 0')

    if any((n - s) % n not in conn for s in conn):
        raise InputError(f'Circulant connection set {conn} is not closed under negation mod {n}')

    return conn


def circulant_matrix(n: int, connection) -> np.ndarray:
    conn = _normalize_connection(n, connection)

    adj = np.zeros((n, n))
    for i in range(n):
        for s in conn:
            adj[i, (i + s) % n] = 1.0

    return adj


def complete(n: int) -> Graph:
    if n < 1:
        raise InputError(f'Complete graph needs n >= 1, got {n}')

    return Graph(np.ones((n, n)) - np.eye(n), f'K{n}')


def empty(n: int) -> Graph:
    if n < 1:
        raise InputError(f'Empty graph needs n >= 1, got {n}')

    return Graph(np.zeros((n, n)), f'E{n}')


def path(n: int) -> Graph:
    if n < 1:
        raise InputError(f'Path needs n >= 1, got {n}')

    adj = np.zeros((n, n))
    for j in range(n - 1):
        adj[j, j + 1] = adj[j + 1, j] = 1.0

    return Graph(adj, f'P{n}')


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError(f'Cycle needs n >= 3, got {n}')

    return circulant(n, [ 1, -1 ]).renamed(f'C{n}')


def star(n: int) -> Graph:
    if n < 2:
        raise InputError(f'Star needs n >= 2, got {n}')

    return join(complete(1), empty(n - 1)).renamed(f'S{n}')


def hypercube(d: int) -> Graph:
    if d < 0:
        raise InputError(f'Hypercube needs d >= 0, got {d}')

    cube = complete(1)
    for _ in range(d):
        cube = cartesian_product(cube, complete(2))

    return cube.renamed(f'Q{d}')


def circulant(n: int, connection) -> Graph:
    conn = _normalize_connection(n, connection)
    return Graph(circulant_matrix(n, conn), f'Circ({n},{{{",".join(map(str, conn))}}})')


def cubelike(d: int, generators) -> Graph:
    if d < 1:
        raise InputError(f'Cube-like graph needs d >= 1, got {d}')

    if d > 20:
        raise GuardError(f'Cube-like dimension {d} exceeds the enumeration guard of 20')

    gens = [ int(g) for g in generators ]
    if len(gens) == 0:
        raise InputError('Cube-like graph needs at least one generator')

    if len(set(gens)) != len(gens):
        raise InputError('Cube-like generators must be distinct')

    if any(g <= 0 or g >= (1 << d) for g in gens):
        raise InputError(f'Cube-like generators must be nonzero {d}-bit vectors')

    size = 1 << d
    adj  = np.zeros((size, size))
    for x in range(size):
        for g in gens:
            adj[x, x ^ g] = 1.0

    return Graph(adj, f'X(Z2^{d},{{{",".join(format_bits(g, d) for g in gens)}}})')


def weighted_p4(a: float, b: float) -> Graph:
    if not (a > 0 and b > 0):
        raise InputError(f'Weighted P4 needs positive weights, got a={a}, b={b}')

    adj = np.array([
        [ 0, 1, 0, 0 ],
        [ 1, a, b, 0 ],
        [ 0, b, a, 1 ],
        [ 0, 0, 1, 0 ],
    ], dtype=float)

    return Graph(adj, f'P4({a:.6g},{b:.6g})')


def weighted_p5(a: float, b: float) -> Graph:
    if not (a > 0 and b > 0):
        raise InputError(f'Weighted P5 needs positive weights, got a={a}, b={b}')

    adj = np.array([
        [ 0, a, 0, 0, 0 ],
        [ a, 0, b, 0, 0 ],
        [ 0, b, 0, b, 0 ],
        [ 0, 0, b, 0, a ],
        [ 0, 0, 0, a, 0 ],
    ], dtype=float)

    return Graph(adj, f'P5({a:.6g},{b:.6g})')


def christandl_path(n: int) -> Graph:
    """
    (n+1)-vertex path, edge (j, j+1) weighted sqrt((j+1)(n-j))
    """
    if n < 1:
        raise InputError(f'Christandl path needs n >= 1, got {n}')

    adj = np.zeros((n + 1, n + 1))
    for j in range(n):
        adj[j, j + 1] = adj[j + 1, j] = math.sqrt((j + 1)*(n - j))

    return Graph(adj, f'CP{n}')


def lifted_p4(block_a: Graph, block_b: Graph, connection: np.ndarray, name: Optional[str] = None) -> tuple[Graph, int, int]:
    """
    K1 + A o B + K1: apex 0 joined to every vertex of block A, apex 2n+1 joined to
    every vertex of block B, and A wired to B through the n x n `connection` matrix.

    Returns
    =======
    (graph, apex_a, apex_b)
    """
    n = block_a.n
    if block_b.n != n:
        raise InputError(f'Blocks must have the same size, got {block_a.n} and {block_b.n}')

    connection = np.asarray(connection, dtype=float)
    if connection.shape != (n, n):
        raise InputError(f'Connection must be {n}x{n}, got {connection.shape}')

    adj = np.zeros((2*n + 2, 2*n + 2))
    adj[0, 1:n + 1] = adj[1:n + 1, 0] = 1.0
    adj[1:n + 1, 1:n + 1] = block_a.adjacency
    adj[n + 1:2*n + 1, n + 1:2*n + 1] = block_b.adjacency
    adj[1:n + 1, n + 1:2*n + 1] = connection
    adj[n + 1:2*n + 1, 1:n + 1] = connection.T
    adj[2*n + 1, n + 1:2*n + 1] = adj[n + 1:2*n + 1, 2*n + 1] = 1.0

    return Graph(adj, name), 0, 2*n + 1


def godsil_parameters(m: int) -> tuple[int, int, int]:
    """
    (n, a, b) = (15 * 2^(2(m-2)), 6 * 2^(m-2), 8 * 2^(m-2))
    """
    if m < 2:
        raise InputError(f'Godsil family needs m >= 2, got {m}')

    scale = 2**(m - 2)
    return 15*scale*scale, 6*scale, 8*scale


def godsil_blocks(m: int) -> tuple[Graph, Graph]:
    """
    The two a-regular circulant blocks: A_n with connection {±(n//2 + 1), ..., ±(n//2 + a/2)}
    and B_n with connection {±1, ..., ±a/2}
    """
    n, a, _ = godsil_parameters(m)
    half = n // 2

    block_a = circulant(n, [ sgn*(half + j) for j in range(1, a//2 + 1) for sgn in (1, -1) ])
    block_b = circulant(n, [ sgn*j for j in range(1, a//2 + 1) for sgn in (1, -1) ])
    return block_a.renamed(f'A{n}'), block_b.renamed(f'B{n}')


def godsil_family(m: int, connection: Optional[Sequence[int]] = None) -> tuple[Graph, int, int]:
    """
    K1 + A_n o B_n + K1 with the A_n, B_n blocks of `godsil_blocks` and a b-regular
    circulant cross connection (default {±1, ..., ±b/2})

    Returns
    =======
    (graph, apex_a, apex_b)
    """
    n, _, b = godsil_parameters(m)

    if connection is None:
        connection = [ sgn*j for j in range(1, b//2 + 1) for sgn in (1, -1) ]

    conn = _normalize_connection(n, connection)
    if len(conn) != b:
        raise InputError(f'Connection circulant must be {b}-regular, {conn} has degree {len(conn)}')

    block_a, block_b = godsil_blocks(m)
    return lifted_p4(block_a, block_b, circulant_matrix(n, conn), f'G{n}(m={m})')


def build(spec: FamilySpec) -> Graph:
    p = spec.params

    match spec.kind:
        case 'complete':        return complete(p['n'])
        case 'path':            return path(p['n'])
        case 'cycle':           return cycle(p['n'])
        case 'star':            return star(p['n'])
        case 'empty':           return empty(p['n'])
        case 'hypercube':       return hypercube(p['d'])
        case 'circulant':       return circulant(p['n'], p['connection'])
        case 'cubelike':        return cubelike(p['d'], p['generators'])
        case 'weighted_p4':     return weighted_p4(p['a'], p['b'])
        case 'weighted_p5':     return weighted_p5(p['a'], p['b'])
        case 'christandl_path': return christandl_path(p['n'])
        case 'godsil':          return godsil_family(p['m'], p.get('connection'))[0]

    raise InputError(f'Unknown family "{spec.kind}"')


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """
    A(G) (x) I + I (x) A(H); vertex (x, y) sits at x*|V(H)| + y
    """
    adj = np.kron(g.adjacency, np.eye(h.n)) + np.kron(np.eye(g.n), h.adjacency)

    name = None
    if g.name is not None and h.name is not None:
        name = f'{g.name}□{h.name}'

    return Graph(adj, name)


def cartesian_power(g: Graph, k: int) -> Graph:
    if k < 1:
        raise InputError(f'Cartesian power needs k >= 1, got {k}')

    power = g
    for _ in range(k - 1):
        power = cartesian_product(power, g)

    return power.renamed(None if g.name is None else f'{g.name}^{k}')


def disjoint_union(g: Graph, h: Graph) -> Graph:
    adj = np.zeros((g.n + h.n, g.n + h.n))
    adj[:g.n, :g.n] = g.adjacency
    adj[g.n:, g.n:] = h.adjacency
    return Graph(adj)


def join(g: Graph, h: Graph) -> Graph:
    """
    Disjoint union plus every unit-weight edge between the two sides
    """
    adj = np.zeros((g.n + h.n, g.n + h.n))
    adj[:g.n, :g.n] = g.adjacency
    adj[g.n:, g.n:] = h.adjacency
    adj[:g.n, g.n:] = 1.0
    adj[g.n:, :g.n] = 1.0

    name = None
    if g.name is not None and h.name is not None:
        name = f'{g.name}+{h.name}'

    return Graph(adj, name)


def complement(g: Graph) -> Graph:
    adj = (g.adjacency == 0).astype(float)
    np.fill_diagonal(adj, 0.0)
    return Graph(adj, None if g.name is None else f'co-{g.name}')


def scale(g: Graph, c: float) -> Graph:
    if not (math.isfinite(c) and c > 0):
        raise InputError(f'Scale factor must be positive and finite, got {c}')

    return Graph(g.adjacency*c, g.name, g.vertex_labels)


def delete_vertex(g: Graph, v: int) -> Graph:
    check_vertex(g, v)
    if g.n == 1:
        raise InputError('Cannot delete the only vertex')

    adj = np.delete(np.delete(g.adjacency, v, axis=0), v, axis=1)
    return Graph(adj)


def check_vertex(g: Graph, v: int, what: str = 'vertex'):
    if not isinstance(v, (int, np.integer)) or not (0 <= v < g.n):
        raise InputError(f'{what} {v} out of range for a {g.n}-vertex graph')


def hop_distances(g: Graph, source: int) -> np.ndarray:
    """
    Breadth first hop counts on the support of nonzero weights; inf where unreachable
    """
    check_vertex(g, source)
    return shortest_path(csr_matrix(g.support()), directed=False, unweighted=True, indices=source)


def to_json(g: Graph) -> str:
    """
    Canonical form: keys name, n, [vertex_labels], edges; edges sorted by (u, v)
    with weights written to 17 significant digits
    """
    head = {}
    if g.name is not None:
        head['name'] = g.name
    head['n'] = g.n
    if g.vertex_labels is not None:
        head['vertex_labels'] = list(g.vertex_labels)

    lines = [ f'  {json.dumps(key)}: {json.dumps(value, ensure_ascii=False)},' for key, value in head.items() ]
    edges = [ f'    [{u}, {v}, {format(w, ".17g")}]' for u, v, w in g.edges() ]

    if len(edges) == 0:
        lines.append('  "edges": []')
    else:
        lines.append('  "edges": [\n' + ',\n'.join(edges) + '\n  ]')

    return '{\n' + '\n'.join(lines) + '\n}\n'


def from_json(text: str) -> Graph:
    try: data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f'Graph document is not valid JSON: {e}') from e

    if not isinstance(data, dict):
        raise InputError('Graph document must be a JSON object')

    unknown = set(data) - { 'name', 'n', 'edges', 'vertex_labels' }
    if unknown:
        raise InputError(f'Graph document has unknown keys: {", ".join(sorted(unknown))}')

    n = data.get('n')
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f'"n" must be a positive integer, got {n!r}')

    name = data.get('name')
    if name is not None and not isinstance(name, str):
        raise InputError('"name" must be a string')

    edges = data.get('edges')
    if not isinstance(edges, list):
        raise InputError('"edges" must be an array')

    adj  = np.zeros((n, n))
    seen = set()
    for edge in edges:
        if not isinstance(edge, list) or len(edge) != 3:
            raise InputError(f'Edge {edge!r} must be [u, v, w]')

        u, v, w = edge
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise InputError(f'Edge {edge!r} has non-integer endpoints')

        if not (0 <= u <= v < n):
            raise InputError(f'Edge {edge!r} violates 0 <= u <= v < {n}')

        if not isinstance(w, (int, float)) or isinstance(w, bool) or not math.isfinite(w):
            raise InputError(f'Edge {edge!r} has an invalid weight')

        if w < 0:
            raise InputError(f'Edge {edge!r} has a negative weight')

        if (u, v) in seen:
            raise InputError(f'Duplicate edge ({u}, {v})')

        seen.add((u, v))
        adj[u, v] = adj[v, u] = float(w)

    return Graph(adj, name, data.get('vertex_labels'))
