"""
Symmetric eigendecomposition, walk propagators U(t) = exp(-itA) and fidelities.

The default eigensolver is a cyclic Jacobi iteration. Each sweep visits every
(p, q) pair once in round-robin order, applying the n/2 disjoint rotations of a
round together; `lapack` switches to numpy.linalg.eigh.
"""
from __future__ import annotations

from typing import Optional

import enum
import collections
import math
import logging
import threading

import numpy as np

from .errors import InputError, NumericError
from .graph import Graph, check_vertex, delete_vertex


logger = logging.getLogger(__name__)

SETTINGS = {
    'eigensolver'       : 'jacobi',
    'jacobi_threshold'  : 1e-13,
    'jacobi_max_sweeps' : 100,
    'cache_spectra'     : True,
    'cache_size'        : 256,
}


class Spectrum():
    """
    Ascending eigenvalues and the matching orthonormal eigenvectors (columns)
    """

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        eigenvalues  = np.array(eigenvalues, dtype=float)
        eigenvectors = np.array(eigenvectors, dtype=float)
        eigenvalues.flags.writeable  = False
        eigenvectors.flags.writeable = False

        self.eigenvalues  = eigenvalues
        self.eigenvectors = eigenvectors


    @property
    def n(self) -> int:
        return len(self.eigenvalues)


    def orthogonality_residual(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.T @ v - np.eye(self.n))))


    def reconstruction_residual(self, g: Graph) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(g.adjacency - (v*self.eigenvalues) @ v.T)))



class Propagator():

    def __init__(self, matrix: np.ndarray, time: float):
        self.matrix = matrix
        self.time   = time


    def unitarity_residual(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))



class P4Condition(enum.Enum):
    CONDITION_A = 'ConditionA'
    CONDITION_B = 'ConditionB'
    NEITHER     = 'Neither'



class AnalyticSpectrum():
    """
    Closed-form eigenpairs of a small weighted path. `symbols` names the
    intermediate quantities (k±, Δ±, α±, β±, M±, N± for P4; Δ for P5).
    """

    def __init__(self, eigenvalues: list, eigenvectors: list, symbols: dict):
        order = np.argsort(eigenvalues, kind='stable')

        self.eigenvalues  = np.array(eigenvalues, dtype=float)[order]
        self.eigenvectors = np.array(eigenvectors, dtype=float).T[:, order]
        self.symbols      = symbols



class _SpectrumCache():
    """
    LRU memo of decompositions keyed by (solver, graph), at most cache_size entries
    """

    def __init__(self):
        self.__lock  = threading.Lock()
        self.__cache = collections.OrderedDict()


    def get(self, g: Graph, solver: str) -> Optional[Spectrum]:
        with self.__lock:
            spectrum = self.__cache.get((solver, g))
            if spectrum is not None:
                self.__cache.move_to_end((solver, g))

            return spectrum


    def put(self, g: Graph, solver: str, spectrum: Spectrum):
        with self.__lock:
            self.__cache[(solver, g)] = spectrum
            self.__cache.move_to_end((solver, g))

            while len(self.__cache) > max(SETTINGS['cache_size'], 0):
                self.__cache.popitem(last=False)


    def clear(self):
        with self.__lock:
            self.__cache.clear()


    def __len__(self) -> int:
        with self.__lock:
            return len(self.__cache)


_cache = _SpectrumCache()


def clear_cache():
    _cache.clear()


def cache_len() -> int:
    return len(_cache)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """
    Circle-method schedule: n-1 rounds (n even) of disjoint (p, q) pairs, p < q,
    covering every pair exactly once. Odd n gets a dummy player that sits out.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds  = []

    for _ in range(m - 1):
        pairs = [ (players[i], players[m - 1 - i]) for i in range(m // 2) ]
        pairs = sorted((min(p, q), max(p, q)) for p, q in pairs if p < n and q < n)

        rounds.append((
            np.array([ p for p, _ in pairs ], dtype=np.intp),
            np.array([ q for _, q in pairs ], dtype=np.intp),
        ))

        players = [ players[0], players[-1] ] + players[1:-1]

    return rounds


def jacobi_eigh(matrix: np.ndarray, threshold: float = 1e-13, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Cyclic Jacobi on a real symmetric matrix.

    Stops once the off-diagonal Frobenius norm is at most threshold*||A||_F
    (floored at n*eps*||A||_F, below which rounding dominates).

    Returns
    =======
    (eigenvalues ascending, eigenvectors as columns, sweeps used)
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)

    norm = float(np.linalg.norm(a))
    if n == 1 or norm == 0.0:
        return np.diag(a).copy(), v, 0

    tol    = max(threshold, n*np.finfo(float).eps)*norm
    rounds = _round_robin(n)

    for sweep in range(max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol:
            w = np.diag(a).copy()
            order = np.argsort(w, kind='stable')
            return w[order], v[:, order], sweep

        if sweep == max_sweeps:
            break

        with np.errstate(over='ignore', divide='ignore', invalid='ignore'):
            for P, Q in rounds:
                apq = a[P, Q]
                nz  = apq != 0.0

                theta = np.where(nz, (a[Q, Q] - a[P, P]) / (2.0*np.where(nz, apq, 1.0)), 0.0)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta*theta + 1.0))
                t = np.where(nz & np.isfinite(t), t, 0.0)
                c = 1.0/np.sqrt(t*t + 1.0)
                s = t*c

                ap = a[:, P].copy(); aq = a[:, Q].copy()
                a[:, P] = ap*c - aq*s
                a[:, Q] = ap*s + aq*c

                ap = a[P, :].copy(); aq = a[Q, :].copy()
                a[P, :] = c[:, None]*ap - s[:, None]*aq
                a[Q, :] = s[:, None]*ap + c[:, None]*aq

                a[P, Q] = 0.0
                a[Q, P] = 0.0

                vp = v[:, P].copy(); vq = v[:, Q].copy()
                v[:, P] = vp*c - vq*s
                v[:, Q] = vp*s + vq*c

    raise NumericError(f'Jacobi did not converge after {max_sweeps} sweeps (off-diagonal norm {off:.3e}, target {tol:.3e})')


def eigendecompose(g: Graph, solver: Optional[str] = None, use_cache: Optional[bool] = None) -> Spectrum:
    solver    = SETTINGS['eigensolver'] if solver is None else solver
    use_cache = SETTINGS['cache_spectra'] if use_cache is None else use_cache

    if use_cache:
        cached = _cache.get(g, solver)
        if cached is not None:
            return cached

    match solver:
        case 'jacobi':
            w, v, sweeps = jacobi_eigh(g.adjacency, SETTINGS['jacobi_threshold'], SETTINGS['jacobi_max_sweeps'])
            logger.debug(f'jacobi: n={g.n} sweeps={sweeps}')
        case 'lapack':
            try: w, v = np.linalg.eigh(g.adjacency)
            except np.linalg.LinAlgError as e:
                raise NumericError(f'eigh failed: {e}') from e
        case _:
            raise InputError(f'Unknown eigensolver "{solver}"')

    spectrum = Spectrum(w, v)

    if use_cache:
        _cache.put(g, solver, spectrum)

    return spectrum


def _check_time(t: float):
    if not math.isfinite(t):
        raise InputError(f'Time must be finite, got {t}')


def propagator(spectrum: Spectrum, t: float) -> Propagator:
    """
    U(t) = sum_j exp(-i lambda_j t) v_j v_j^T, assembled from its real and imaginary parts
    """
    _check_time(t)

    v  = spectrum.eigenvectors
    lt = spectrum.eigenvalues*t

    re = (v*np.cos(lt)) @ v.T
    im = -(v*np.sin(lt)) @ v.T
    return Propagator(re + 1j*im, t)


def amplitudes(spectrum: Spectrum, a: int, b: int, times) -> tuple[np.ndarray, np.ndarray]:
    """
    Real and imaginary parts of <b|U(t)|a> for each t in `times`
    """
    v  = spectrum.eigenvectors
    w  = v[b, :]*v[a, :]
    lt = np.outer(np.atleast_1d(np.asarray(times, dtype=float)), spectrum.eigenvalues)

    return np.cos(lt) @ w, -(np.sin(lt) @ w)


def amplitude(g: Graph, a: int, b: int, t: float) -> complex:
    check_vertex(g, a, 'source')
    check_vertex(g, b, 'target')
    _check_time(t)

    re, im = amplitudes(eigendecompose(g), a, b, [ t ])
    return complex(re[0], im[0])


def fidelity(g: Graph, a: int, b: int, t: float) -> float:
    """
    |<b| exp(-itA) |a>|
    """
    z = amplitude(g, a, b, t)
    return math.hypot(z.real, z.imag)


def p4_spectrum(a: float, b: float) -> AnalyticSpectrum:
    """
    Eigenpairs of the 4-vertex path with unit outer edges, loops a and middle edge b:
    alpha± = k+ ± Δ+ on [1, α, α, 1]/M, beta± = k- ± Δ- on [1, β, -β, -1]/N
    """
    if not (a > 0 and b > 0):
        raise InputError(f'P4 spectrum needs positive weights, got a={a}, b={b}')

    k_p = (a + b)/2
    k_m = (a - b)/2
    d_p = math.sqrt(k_p*k_p + 1)
    d_m = math.sqrt(k_m*k_m + 1)

    alpha = { '+' : k_p + d_p, '-' : k_p - d_p }
    beta  = { '+' : k_m + d_m, '-' : k_m - d_m }
    M = { s : math.sqrt(2*(1 + x*x)) for s, x in alpha.items() }
    N = { s : math.sqrt(2*(1 + x*x)) for s, x in beta.items() }

    values  = []
    vectors = []
    for s in '+-':
        values.append(alpha[s])
        vectors.append([ 1/M[s], alpha[s]/M[s], alpha[s]/M[s], 1/M[s] ])
        values.append(beta[s])
        vectors.append([ 1/N[s], beta[s]/N[s], -beta[s]/N[s], -1/N[s] ])

    symbols = {
        'k_plus'      : k_p,      'k_minus'     : k_m,
        'delta_plus'  : d_p,      'delta_minus' : d_m,
        'alpha_plus'  : alpha['+'], 'alpha_minus' : alpha['-'],
        'beta_plus'   : beta['+'],  'beta_minus'  : beta['-'],
        'M_plus'      : M['+'],   'M_minus'     : M['-'],
        'N_plus'      : N['+'],   'N_minus'     : N['-'],
    }
    return AnalyticSpectrum(values, vectors, symbols)


def p5_spectrum(a: float, b: float) -> AnalyticSpectrum:
    """
    Eigenpairs of the 5-vertex path with outer edges a and inner edges b:
    0, ±a and ±Δ with Δ = sqrt(a^2 + 2b^2), which is a*sqrt(1 + b^2) at a = sqrt(2)
    """
    if not (a > 0 and b > 0):
        raise InputError(f'P5 spectrum needs positive weights, got a={a}, b={b}')

    delta = math.sqrt(a*a + 2*b*b)

    zero_norm  = math.sqrt(2 + a*a/(b*b))
    delta_norm = 2*delta/a

    values  = [ 0.0, a, -a, delta, -delta ]
    vectors = [
        [ 1/zero_norm, 0, -a/b/zero_norm, 0, 1/zero_norm ],
        [ -0.5, -0.5, 0, 0.5, 0.5 ],
        [ 0.5, -0.5, 0, 0.5, -0.5 ],
        [ 1/delta_norm, (delta/a)/delta_norm, (2*b/a)/delta_norm, (delta/a)/delta_norm, 1/delta_norm ],
        [ 1/delta_norm, -(delta/a)/delta_norm, (2*b/a)/delta_norm, -(delta/a)/delta_norm, 1/delta_norm ],
    ]
    return AnalyticSpectrum(values, vectors, { 'delta' : delta })


def p4_amplitude(a: float, b: float, t: float) -> complex:
    """
    Closed form of <4|exp(-itA)|1> for the weighted P4
    """
    sym = p4_spectrum(a, b).symbols

    def half(k: float, d: float) -> complex:
        return np.exp(-1j*t*k)/2*(math.cos(t*d) + 1j*(k/d)*math.sin(t*d))

    return complex(half(sym['k_plus'], sym['delta_plus']) - half(sym['k_minus'], sym['delta_minus']))


def p5_amplitude(a: float, b: float, t: float) -> float:
    """
    Closed form of <5|exp(-itA)|1> for the weighted P5 (it is real)
    """
    delta = p5_spectrum(a, b).symbols['delta']
    return b*b/(a*a + 2*b*b) - math.cos(a*t)/2 + a*a*math.cos(delta*t)/(2*delta*delta)


def pst_condition_p4(a: float, b: float, t: float, tol: float = 1e-8) -> P4Condition:
    """
    (a) cos(tΔ+)cos(tΔ-) = +1 and sin(tb/2) = ±1
    (b) cos(tΔ+)cos(tΔ-) = -1 and cos(tb/2) = ±1
    Each equality is checked within `tol`. These are sufficient conditions, so
    `NEITHER` only reports that neither holds.
    """
    sym  = p4_spectrum(a, b).symbols
    prod = math.cos(t*sym['delta_plus'])*math.cos(t*sym['delta_minus'])

    if abs(prod - 1) <= tol and abs(abs(math.sin(t*b/2)) - 1) <= tol:
        return P4Condition.CONDITION_A

    if abs(prod + 1) <= tol and abs(abs(math.cos(t*b/2)) - 1) <= tol:
        return P4Condition.CONDITION_B

    return P4Condition.NEITHER


def deleted_cospectral(g: Graph, a: int, b: int, tol: float = 1e-8) -> bool:
    """
    True iff G\\a and G\\b have the same sorted eigenvalues within `tol`
    """
    check_vertex(g, a)
    check_vertex(g, b)
    if a == b:
        raise InputError('deleted_cospectral needs two distinct vertices')

    wa = eigendecompose(delete_vertex(g, a)).eigenvalues
    wb = eigendecompose(delete_vertex(g, b)).eigenvalues
    return bool(np.max(np.abs(wa - wb)) <= tol)
