"""Numeric tolerances shared across the package."""

# structural checks: hermiticity, observable squares, no-signaling residuals
STRUCT_TOL = 1e-10
# arithmetic identities and normalization
ARITH_TOL = 1e-12

# behavior construction
CLAMP_TOL = 1e-12
RENORM_TOL = 1e-9

# Jacobi sweeps stop once the off-diagonal Frobenius norm falls below this
JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# simplex
PIVOT_TOL = 1e-11
LP_FEAS_TOL = 1e-9
SNAP_TOL = 1e-11

# enumeration / LP size budgets
ENUM_BUDGET = 10**6
LP_VAR_BUDGET = 10**4
