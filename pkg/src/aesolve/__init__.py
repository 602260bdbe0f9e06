"""AE solutions and AE solvability of interval linear systems.

Everything is exact: coefficients are ``fractions.Fraction`` and every LP
verdict comes with a witness or a Farkas certificate that can be re-checked.
"""

from .errors import BudgetExceeded, CapExceeded, DimensionError, NotAnAeSolution, PreconditionViolated
from .interval import (
    Interval,
    IntervalMatrix,
    QuantifiedBlock,
    QuantifiedSystem,
    Quantifier,
    QuantifierMask,
    Realization,
    eval_range,
    mid_rad,
    split_by_mask,
)
from .lp import Certificate, LinearSystem, Witness, solve_feasibility, verify
from .solutions import (
    Form,
    Kind,
    attain_exists_params,
    check_ae_solution,
    find_ae_solution,
    find_ae_solution_poly,
    orthant_decomposition,
    table1_condition,
)
from .solvability import (
    SolvabilityVerdict,
    SpecialKind,
    Status,
    ae_solvable_exact,
    ae_solvable_ineq_form,
    ae_solvable_sufficient,
    ineq_ae_forms_equivalent,
    special_solvability,
    strong_solvable_ineq,
)
from .oracle import OracleStatus, OracleVerdict, oracle_ae_solvable, oracle_check_ae_solution, weak_solvable
from .fileformat import ParseError, parse_system, serialize_system

__version__ = "0.1.0"
