"""
GF(2) tools for cube-like graphs X(Z_2^d, S).

Bit vectors are plain ints; coordinate i is bit i. The code of S is the row
space of the d x |S| matrix whose columns are the generators, so row i collects
bit i of every generator and codeword positions follow generator order.
"""
from __future__ import annotations

from typing import Iterator, Optional, Sequence

import json
import math
import logging
import functools

import numpy as np

from .errors import GuardError, InputError
from .graph import Graph, cubelike, format_bits
from .spectral import eigendecompose, propagator
from .walk import verify_pst


logger = logging.getLogger(__name__)

MAX_DIMENSION = 20


class CubelikeSpec():

    def __init__(self, d: int, generators: Sequence[int]):
        gens = tuple(int(g) for g in generators)

        if d < 1:
            raise InputError(f'Dimension must be at least 1, got {d}')

        if d > MAX_DIMENSION:
            raise GuardError(f'Dimension {d} exceeds the enumeration guard of {MAX_DIMENSION}')

        if len(gens) == 0:
            raise InputError('Need at least one generator')

        if len(set(gens)) != len(gens):
            raise InputError('Generators must be distinct')

        if any(g <= 0 or g >= (1 << d) for g in gens):
            raise InputError(f'Generators must be nonzero {d}-bit vectors')

        self.d          = d
        self.generators = gens


    @staticmethod
    def from_bitstrings(text: str) -> CubelikeSpec:
        """
        '100,010,001,011' -> d = 3
        """
        tokens = [ token.strip() for token in text.split(',') if token.strip() != '' ]
        if len(tokens) == 0:
            raise InputError('Need at least one generator')

        widths = { len(token) for token in tokens }
        if len(widths) != 1:
            raise InputError(f'Generators must all have the same width: {tokens}')

        try: gens = [ int(token, 2) for token in tokens ]
        except ValueError as e:
            raise InputError(f'Generators must be bit strings: {text}') from e

        return CubelikeSpec(widths.pop(), gens)


    def graph(self) -> Graph:
        return cubelike(self.d, self.generators)


    def bits(self, value: int) -> str:
        return format_bits(value, self.d)


    def __repr__(self) -> str:
        return f'CubelikeSpec(d={self.d}, S={[ self.bits(g) for g in self.generators ]})'



class BinaryCode():
    """
    Row space of the generator matrix; rows and codewords are |S|-bit ints
    """

    def __init__(self, rows: Sequence[int], length: int):
        self.rows   = tuple(rows)
        self.length = length
        self.basis  = _echelon(self.rows)


    @property
    def dimension(self) -> int:
        return len(self.basis)


    def codewords(self) -> Iterator[int]:
        """
        Every codeword once, in Gray-code order over the basis
        """
        word = 0
        yield word
        for i in range(1, 1 << self.dimension):
            word ^= self.basis[(i & -i).bit_length() - 1]
            yield word



class Prediction():

    def __init__(self, target: int, time: float, case: str):
        self.source = 0
        self.target = target
        self.time   = time
        self.case   = case



class Certificate():
    """
    Numeric check of a prediction. `target` is the vertex found numerically
    (None when nothing transfers)
    """

    def __init__(self, spec: CubelikeSpec, prediction: Optional[Prediction], target: Optional[int], fidelity: float, certified: bool):
        self.spec       = spec
        self.prediction = prediction
        self.target     = target
        self.fidelity   = fidelity
        self.certified  = certified


    def as_dict(self) -> dict:
        spec = self.spec
        pred = self.prediction
        return {
            'omega'     : spec.bits(omega(spec)),
            'case'      : None if pred is None else pred.case,
            'target'    : None if self.target is None else spec.bits(self.target),
            'time'      : None if pred is None else pred.time,
            'fidelity'  : self.fidelity,
            'certified' : self.certified,
        }


    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + '\n'



def _echelon(vectors: Sequence[int]) -> list[int]:
    """
    GF(2) basis of the span, one vector per leading bit
    """
    pivots = {}
    for v in vectors:
        while v != 0:
            lead = v.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = v
                break
            v ^= pivots[lead]

    return [ pivots[lead] for lead in sorted(pivots) ]


def gf2_rank(vectors: Sequence[int]) -> int:
    return len(_echelon(vectors))


def omega(spec: CubelikeSpec) -> int:
    """
    Sum (XOR) of the generators
    """
    return functools.reduce(lambda x, y: x ^ y, spec.generators, 0)


def code_of(spec: CubelikeSpec) -> BinaryCode:
    rows = []
    for i in range(spec.d):
        row = 0
        for j, g in enumerate(spec.generators):
            if (g >> i) & 1:
                row |= 1 << j
        rows.append(row)

    return BinaryCode(rows, len(spec.generators))


def weight_gcd(code: BinaryCode) -> int:
    """
    gcd of the nonzero codeword weights, 0 for the trivial code
    """
    d = 0
    for word in code.codewords():
        d = math.gcd(d, word.bit_count())
        if d == 1:
            break

    return d


def is_self_orthogonal(code: BinaryCode) -> bool:
    """
    Every pair of codewords has an even inner product. By bilinearity it is enough
    to check pairs of spanning rows, each row with itself included.
    """
    rows = code.rows
    return all((rows[i] & rows[j]).bit_count() % 2 == 0 for i in range(len(rows)) for j in range(i, len(rows)))


def periodic_target(code: BinaryCode) -> int:
    """
    For a self-orthogonal code with even weights: b_i = (wt(row_i)/2) mod 2
    """
    target = 0
    for i, row in enumerate(code.rows):
        if (row.bit_count()//2) % 2 == 1:
            target |= 1 << i

    return target


def predict_pst(spec: CubelikeSpec) -> Optional[Prediction]:
    if gf2_rank(spec.generators) != spec.d:
        raise InputError(f'Generators do not span Z_2^{spec.d}; the graph is disconnected')

    w = omega(spec)
    if w != 0:
        return Prediction(w, math.pi/2, 'omega')

    code = code_of(spec)
    if weight_gcd(code) == 2 and is_self_orthogonal(code):
        return Prediction(periodic_target(code), math.pi/4, 'self-orthogonal')

    return None


def certify(spec: CubelikeSpec, tol: float = 1e-8) -> Certificate:
    """
    Compares the prediction with the propagator. Without a prediction the check
    is that no vertex receives the walk from 0 at π/4.
    """
    prediction = predict_pst(spec)
    g          = spec.graph()

    time = math.pi/4 if prediction is None else prediction.time
    row  = np.abs(propagator(eigendecompose(g), time).matrix[:, 0])
    row[0] = 0.0

    best   = int(np.argmax(row))
    hit    = row[best] >= 1 - tol
    target = best if hit else None

    if prediction is None:
        certified = not hit
    else:
        certified = hit and best == prediction.target and verify_pst(g, 0, prediction.target, time, tol)

    logger.debug(f'certify {spec}: target {target}, fidelity {row[best]:.12f}, certified {certified}')
    return Certificate(spec, prediction, target, float(row[best]), certified)


def generating_sets(d: int) -> Iterator[CubelikeSpec]:
    """
    Every generating subset of Z_2^d minus zero, by ascending bitmask over the elements
    """
    elements = list(range(1, 1 << d))
    for mask in range(1, 1 << len(elements)):
        gens = [ e for j, e in enumerate(elements) if (mask >> j) & 1 ]
        if gf2_rank(gens) == d:
            yield CubelikeSpec(d, gens)
