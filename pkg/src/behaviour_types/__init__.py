"""Behaviour types: traces, interaction LTSs and coalgebras, with an algebra
of composition operators and empirical law checking."""
from .core import (
    ArityExtend, ArityReduce, BipGamma, Compose, GammaSync, OpMeet, Parallel, SosRules,
    apply_operator, arity_extend, arity_reduce, behaviour_type, equiv, is_symmetric_sampled,
    meet, op_compose, op_meet, op_sem_leq_sampled, parallel, sem_leq, sim_leq, symmetrize,
)
from .errors import (
    ArityError, BehaviourTypeError, CertificationError, FormatError, InstanceMismatchError,
    PreconditionError, ResourceLimitError, ShapeError,
)
from .formats import Document, parse, parse_all, parse_operator, serialize, serialize_all

__all__ = [
    "ArityExtend", "ArityReduce", "BipGamma", "Compose", "GammaSync", "OpMeet", "Parallel",
    "SosRules", "apply_operator", "arity_extend", "arity_reduce", "behaviour_type", "equiv",
    "is_symmetric_sampled", "meet", "op_compose", "op_meet", "op_sem_leq_sampled", "parallel",
    "sem_leq", "sim_leq", "symmetrize",
    "ArityError", "BehaviourTypeError", "CertificationError", "FormatError",
    "InstanceMismatchError", "PreconditionError", "ResourceLimitError", "ShapeError",
    "Document", "parse", "parse_all", "parse_operator", "serialize", "serialize_all",
]
