"""
Graph quotients, quantum-walk propagators and perfect state transfer checks
"""
from . import feder, spectral, suites, symmetry, walk


NUMERICS_DEFAULTS = {
    'eigensolver'       : 'jacobi',
    'jacobi_threshold'  : 1e-13,
    'jacobi_max_sweeps' : 100,
    'cache_spectra'     : True,
    'cache_size'        : 256,
    'pst_tol'           : 1e-8,
    'scan_steps'        : 10000,
    'gss_max_iter'      : 200,
    'gss_time_tol'      : 1e-12,
    'workers'           : 0,
    'product_guard'     : 4096,
    'search_guard'      : 64,
    'seed'              : 20110407,
}

_OWNERS = (spectral, walk, feder, symmetry, suites)


def configure(numerics: dict):
    """
    Pushes a Numerics config section into the modules that read it. Unknown keys raise KeyError.
    """
    for key, value in numerics.items():
        if key not in NUMERICS_DEFAULTS:
            raise KeyError(f'Config get failure: Numerics.{key}')

        if key == 'eigensolver':
            spectral.clear_cache()

        for module in _OWNERS:
            if key in module.SETTINGS:
                module.SETTINGS[key] = value
