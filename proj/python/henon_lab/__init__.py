from ._core import (
    A_via_integral,
    LogGrid,
    MonitorViolation,
    Params,
    ParamsError,
    SolveError,
    __version__,
    assemble_T,
    continue_branch,
    critical_exponent,
    endpoint_soliton,
    hardy_constant,
    kernel_value,
    normalization_constant,
    power_symbol,
    solve_ground_state,
    spectrum,
    symbol_error,
)
from .artifacts import read_branch_csv, read_profile_csv, read_spectrum_csv
