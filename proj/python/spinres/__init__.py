"""Two-level spin resonance under periodic drives.

Floquet quasi-energies, Brillouin-Wigner effective Hamiltonians and a direct
RK4 integrator, with frequency sweeps and Bloch-Siegert shift extraction.
"""

from ._spinres import (
    ConfigError,
    DriveMode,
    EngineOptions,
    FourierHamiltonian,
    Method,
    MethodComparison,
    NumericalError,
    OmegaGrid,
    ProbabilityTrace,
    QuasiEnergySpectrum,
    ResonantPair,
    Response,
    ScanConfig,
    ScanResult,
    ShiftReport,
    SineConvention,
    Spin,
    SpinParams,
    auto_truncate,
    bloch_siegert_resonance,
    build_fourier,
    compare_methods,
    coupling_element,
    custom_fourier,
    extract_shift,
    floquet_matrix,
    floquet_spectrum,
    oracle_trace,
    probability_order1,
    probability_order2,
    resonant_pair,
    run_scan,
    simulate,
    uniform_grid,
)

__all__ = [name for name in dir() if not name.startswith("_")]
