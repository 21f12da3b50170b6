"""Exact learning of predicate disjunctions/conjunctions from membership
queries, with halfspace and variable-inequality instantiations and a
time-series pattern-program synthesizer on top."""

from .core import (
    FamilyError,
    GuardExceeded,
    PredicateFamily,
    TableFamily,
    as_assignment,
    as_rational,
    canon_set,
    evaluate_set,
    load_family,
    load_family_file,
    ray22_family,
    set_equal,
)
from .halfspace import HalfspaceFamily, learn_halfspace_union
from .lattice import (
    CriticalPointSet,
    HasseDiagram,
    Representative,
    all_imm_de,
    build_critical_points,
    build_hasse,
    closure,
    find_witness,
    gcd_rep,
    get_imm_de,
    is_representative,
    lca,
    z_set,
)
from .learner import (
    BoundReport,
    CallbackTeacher,
    LearnSession,
    ScriptedDivergence,
    ScriptedTeacher,
    SimulatedTeacher,
    TargetNotInClass,
    Teacher,
    TeacherError,
    learn,
    load_transcript,
    opt_bruteforce,
    run_session,
    save_transcript,
    scripted_from_transcript,
)
from .varineq import (
    VarIneqFamily,
    enumerate_max_acyclic,
    ineq_equal,
    ineq_imm_descendants,
    ineq_representative,
    ineq_witness,
    learn_ineq,
    reach,
    toposort_assignment,
)

__version__ = "0.1.0"
