"""
PST detection: fidelity scans on a uniform grid with peaks refined by root-finding
the fidelity slope (golden-section search as fallback), point checks for transfer and periodicity, and the amplitude-level
comparison between a graph and its quotient.
"""
from __future__ import annotations

from typing import Optional, Sequence

import json
import math
import logging
import warnings
import concurrent.futures

import numpy as np
import scipy.optimize
import psutil

from .errors import InputError, NumericError, PreconditionError
from .graph import Graph, check_vertex
from .partition import Partition, quotient
from .spectral import Spectrum, amplitudes, eigendecompose, fidelity


logger = logging.getLogger(__name__)

SETTINGS = {
    'pst_tol'      : 1e-8,
    'scan_steps'   : 10000,
    'gss_max_iter' : 200,
    'gss_time_tol' : 1e-12,
    'workers'      : 0,
}

INV_PHI    = (math.sqrt(5) - 1)/2
INV_PHI_SQ = (3 - math.sqrt(5))/2

# Grid points evaluated per worker task
CHUNK = 2048

SYMBOLIC_DENOMINATORS = (1, 2, 4, 6, 8)
SYMBOLIC_RADICANDS    = (1, 2, 15, 35, 63)


class Peak():

    def __init__(self, t: float, fidelity: float):
        self.t        = float(t)
        self.fidelity = float(fidelity)


    def as_dict(self) -> dict:
        return { 't' : self.t, 'fidelity' : self.fidelity }


    def __repr__(self) -> str:
        return f'Peak(t={self.t:.12g}, fidelity={self.fidelity:.12g})'



class FidelitySeries():
    """
    Fidelity |<b|U(t)|a>| on a strictly increasing grid, plus refined local maxima
    sorted by fidelity descending
    """

    def __init__(self, times: np.ndarray, values: np.ndarray, peaks: list[Peak]):
        times  = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)

        if times.shape != values.shape or times.ndim != 1:
            raise NumericError('Fidelity series needs matching one-dimensional grids')

        if np.any(np.diff(times) <= 0):
            raise NumericError('Fidelity grid is not strictly increasing')

        if np.any(values < 0) or np.any(values > 1 + 1e-12):
            raise NumericError(f'Fidelity outside [0, 1]: max {values.max():.17g}')

        self.times  = times
        self.values = values
        self.peaks  = peaks


    def top(self) -> Optional[Peak]:
        return self.peaks[0] if len(self.peaks) > 0 else None


    def to_csv(self) -> str:
        rows = [ 't,fidelity' ]
        rows += [ f'{t:.17g},{f:.17g}' for t, f in zip(self.times, self.values) ]
        return '\n'.join(rows) + '\n'


    def peaks_json(self) -> str:
        return json.dumps([ peak.as_dict() for peak in self.peaks ], indent=2) + '\n'



def worker_count() -> int:
    workers = SETTINGS['workers']
    if workers > 0:
        return workers

    return psutil.cpu_count(logical=False) or 1


def _fidelities(spectrum: Spectrum, a: int, b: int, times: np.ndarray) -> np.ndarray:
    re, im = amplitudes(spectrum, a, b, times)
    return np.hypot(re, im)


def _grid_fidelities(spectrum: Spectrum, a: int, b: int, times: np.ndarray) -> np.ndarray:
    chunks  = [ times[i:i + CHUNK] for i in range(0, len(times), CHUNK) ]
    workers = min(worker_count(), len(chunks))

    if workers <= 1:
        return np.concatenate([ _fidelities(spectrum, a, b, chunk) for chunk in chunks ])

    # Results are joined in chunk order, not completion order
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda chunk: _fidelities(spectrum, a, b, chunk), chunks))

    return np.concatenate(parts)


def golden_section_max(f, lo: float, hi: float, tol: float, max_iter: int) -> tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [lo, hi]

    Returns
    =======
    (t, f(t)) at the best point evaluated
    """
    lo, hi = min(lo, hi), max(lo, hi)
    h = hi - lo
    if h <= tol:
        mid = (lo + hi)/2
        return mid, f(mid)

    steps = min(max_iter, int(math.ceil(math.log(tol/h)/math.log(INV_PHI))))

    c  = lo + INV_PHI_SQ*h
    d  = lo + INV_PHI*h
    fc = f(c)
    fd = f(d)

    for _ in range(steps):
        h *= INV_PHI
        if fc > fd:
            hi, d, fd = d, c, fc
            c  = lo + INV_PHI_SQ*h
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d  = lo + INV_PHI*h
            fd = f(d)

    return (c, fc) if fc > fd else (d, fd)


def _slope(spectrum: Spectrum, a: int, b: int, t: float) -> float:
    """
    Half of d|<b|U(t)|a>|^2/dt, i.e. Re(conj(amp)·amp') with amp' = sum -iλ e^{-iλt} w
    """
    w     = spectrum.eigenvectors[b, :]*spectrum.eigenvectors[a, :]
    phase = np.exp(-1j*spectrum.eigenvalues*t)*w

    amp   = phase.sum()
    d_amp = (-1j*spectrum.eigenvalues*phase).sum()
    return float((amp.conjugate()*d_amp).real)


def refine_peak(spectrum: Spectrum, a: int, b: int, lo: float, hi: float) -> float:
    """
    Time of the fidelity maximum inside [lo, hi]. Root-finds the slope when it changes
    sign across the bracket, otherwise falls back to golden-section search on the fidelity.
    """
    s_lo = _slope(spectrum, a, b, lo)
    s_hi = _slope(spectrum, a, b, hi)

    if s_lo == 0.0:
        return lo

    if s_hi == 0.0:
        return hi

    if s_lo > 0 > s_hi:
        return scipy.optimize.brentq(lambda t: _slope(spectrum, a, b, t), lo, hi,
            xtol=SETTINGS['gss_time_tol'], rtol=4*np.finfo(float).eps, maxiter=SETTINGS['gss_max_iter'])

    def f(t: float) -> float:
        return float(_fidelities(spectrum, a, b, np.array([ t ]))[0])

    t, _ = golden_section_max(f, lo, hi, SETTINGS['gss_time_tol'], SETTINGS['gss_max_iter'])
    return t


def _local_maxima(values: np.ndarray) -> np.ndarray:
    inner = values[1:-1]
    mask  = (inner > values[:-2]) & (inner >= values[2:])
    return np.nonzero(mask)[0] + 1


def fidelity_scan(g: Graph, a: int, b: int, t_max: float, steps: Optional[int] = None) -> FidelitySeries:
    """
    Params
    ======
    t_max: float
        End of the grid [0, t_max]

    steps: int
        Number of grid points, defaults to the configured scan_steps
    """
    check_vertex(g, a, 'source')
    check_vertex(g, b, 'target')

    steps = SETTINGS['scan_steps'] if isinstance(steps, type(None)) else steps
    if not (math.isfinite(t_max) and t_max > 0):
        raise InputError(f'Scan window must be a positive finite time, got {t_max}')

    if steps < 2:
        raise InputError(f'Scan needs at least 2 grid points, got {steps}')

    spectrum = eigendecompose(g)
    times    = np.linspace(0.0, t_max, steps)
    values   = _grid_fidelities(spectrum, a, b, times)

    spread = spectrum.eigenvalues[-1] - spectrum.eigenvalues[0]
    if spread > 0 and times[1] > math.pi/spread:
        warnings.warn(f'Scan spacing {times[1]:.3g} exceeds π/(λmax - λmin) = {math.pi/spread:.3g}; peaks may be missed')

    peaks = []
    for i in _local_maxima(values):
        t   = refine_peak(spectrum, a, b, times[i - 1], times[i + 1])
        fid = float(_fidelities(spectrum, a, b, np.array([ t ]))[0])

        # Grid point kept only when it beats the refined time by more than rounding
        if fid < values[i] - 1e-12:
            t, fid = times[i], values[i]

        peaks.append(Peak(t, fid))

    peaks.sort(key=lambda peak: (-peak.fidelity, peak.t))
    logger.debug(f'scan {g.name} {a}->{b} over [0, {t_max}]: {steps} points, {len(peaks)} peaks')

    return FidelitySeries(times, values, peaks)


def pst_times(g: Graph, a: int, b: int, t_max: float, steps: Optional[int] = None, tol: Optional[float] = None) -> list[Peak]:
    """
    Refined peaks within [0, t_max] that reach fidelity 1 - tol, earliest first
    """
    tol    = SETTINGS['pst_tol'] if isinstance(tol, type(None)) else tol
    series = fidelity_scan(g, a, b, t_max, steps)

    hits = [ peak for peak in series.peaks if peak.fidelity >= 1 - tol ]
    return sorted(hits, key=lambda peak: peak.t)


def verify_pst(g: Graph, a: int, b: int, t: float, tol: Optional[float] = None) -> bool:
    tol = SETTINGS['pst_tol'] if isinstance(tol, type(None)) else tol
    return fidelity(g, a, b, t) >= 1 - tol


def is_periodic(g: Graph, a: int, t: float, tol: Optional[float] = None) -> bool:
    return verify_pst(g, a, a, t, tol)


def verify_equivalence(g: Graph, pi: Partition, a: int, b: int, times: Sequence[float]) -> float:
    """
    max_t |<b|exp(-itA(G))|a> - <π(b)|exp(-itA(G/π))|π(a)>|, compared as complex numbers
    """
    check_vertex(g, a, 'source')
    check_vertex(g, b, 'target')

    for v in (a, b):
        if not pi.is_singleton(v):
            raise PreconditionError(f'Vertex {v} is not in a singleton cell', v)

    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise InputError('verify_equivalence needs at least one time')

    if not np.all(np.isfinite(times)):
        raise InputError('Times must be finite')

    result = quotient(g, pi)
    qa, qb = pi.cell_of[a], pi.cell_of[b]

    re_g, im_g = amplitudes(eigendecompose(g), a, b, times)
    re_q, im_q = amplitudes(eigendecompose(result.quotient), qa, qb, times)

    residual = float(np.max(np.hypot(re_g - re_q, im_g - im_q)))
    logger.debug(f'equivalence {g.name}: {times.size} times, residual {residual:.3e}')

    return residual


def symbolic_time(t: float, tol: float = 1e-9) -> Optional[str]:
    """
    Matches t against p/q·π·√r for q in SYMBOLIC_DENOMINATORS and r in
    SYMBOLIC_RADICANDS, smallest q first. Returns e.g. '√15π/4', or None.
    """
    if not (math.isfinite(t) and t > 0):
        return None

    for q in SYMBOLIC_DENOMINATORS:
        for r in SYMBOLIC_RADICANDS:
            unit = math.pi*math.sqrt(r)/q
            p    = round(t/unit)
            if p < 1 or abs(t - p*unit) > tol:
                continue

            g = math.gcd(p, q)
            p, q = p//g, q//g

            text = '' if p == 1 else str(p)
            text += '' if r == 1 else f'√{r}'
            text += 'π'
            text += '' if q == 1 else f'/{q}'
            return text

    return None
