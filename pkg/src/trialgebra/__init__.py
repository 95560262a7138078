"""Three-dimensional unital algebras, the fibrations of the type II group and its geometric models."""

from .algebra import (
    AlgebraError,
    AlgebraKind,
    DomainError,
    Element,
    KindError,
    MulTable,
    NotInvertibleError,
    SubalgebraType,
    TableError,
    bilinear,
    classify_subalgebra,
    component_index,
    conj,
    inverse,
    is_invertible,
    mul,
    mul_table,
    norm_sq,
    table,
)
from .fibration import Fibration, SubgroupTag, base_action, pi1, pi2

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraKind",
    "DomainError",
    "Element",
    "Fibration",
    "KindError",
    "MulTable",
    "NotInvertibleError",
    "SubalgebraType",
    "SubgroupTag",
    "TableError",
    "base_action",
    "bilinear",
    "classify_subalgebra",
    "component_index",
    "conj",
    "inverse",
    "is_invertible",
    "mul",
    "mul_table",
    "norm_sq",
    "pi1",
    "pi2",
    "table",
]
