"""Organizations of heterogeneous agents around shared task nets.

A global task is written once as a colored Petri net over roles.  From
a role attribution the library derives each agent's individual task as
a non-autonomous net whose seams are speech-act communications, checks
the derivation by bounded exploration, and runs the resulting society:
software bodies inline, robots over a line protocol, humans through a
request inbox.
"""

from .cpn import (
    ALL,
    ATOM,
    DETERMINISTIC,
    EMISSION,
    IN,
    OUT,
    RECEPTION,
    RECORD,
    WORK,
    Arc,
    ColorSet,
    DepthExceededBudget,
    EventGuard,
    Marking,
    MissingOutput,
    Net,
    NotEnabled,
    Occurrence,
    Place,
    Token,
    Transition,
    ValidationReport,
    Violation,
    canonical_token,
    conforms,
    enabled,
    explore,
    fire,
    validate_net,
)
from .derive import (
    AgentTask,
    ChannelTable,
    CommPoint,
    DanglingChannel,
    EquivalenceReport,
    OrphanActor,
    UnroutedPlace,
    compose,
    decompose,
    project_work,
    verify_equivalence,
)
from .dot import emit_dot
from .messaging import (
    INFORM,
    ORDER,
    PERFORMATIVES,
    REQUEST,
    WISH,
    BackpressureExceeded,
    BadPerformative,
    ChannelSet,
    Message,
    SelfSend,
)
from .org import (
    AGENT_KINDS,
    HUMAN_INTERFACE,
    ROBOT_INTERFACE,
    SOFTWARE,
    AgentSpec,
    MasModel,
    Organization,
    Role,
    UnmappedRole,
    cross_actor_places,
    derive_comm_links,
    simplify,
    substitute_roles,
    validate_mas,
    validate_organization,
)
from .pmo import PmoFixture, build_pmo
from .robot import RobotAdapter, RobotServer, RobotState, execute, parse_command
from .runtime import (
    AlreadyAnswered,
    DuplicateName,
    HumanRequest,
    KnowledgeProcedure,
    ProcedureFailure,
    SchemaMismatch,
    SignatureMismatch,
    Society,
    Starvation,
    TraceEvent,
    UnknownRequest,
    UnscriptedRequest,
    replay,
    run_society,
)
from .specio import (
    Diagnostic,
    ParseResult,
    ProcedureSpec,
    SocietySpec,
    TemplateSpec,
    derive_society,
    parse_channels,
    parse_spec,
    parse_task,
    serialize_channels,
    serialize_spec,
    serialize_task,
    society_from_spec,
    typed_answers,
)

__version__ = "0.1.0"
