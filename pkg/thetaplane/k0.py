# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import logging
from dataclasses import dataclass
from thetaplane.errors import DiagonalizationError, NotAProjectorError
from thetaplane.matrix_algebra import AlgMatrix, JetContext, is_projector
from thetaplane.metrics import PerformanceMetrics
from thetaplane.projector_tools import scalar_part, trivialize

logger = logging.getLogger("[ K0 ]")


# A class in K0 = Z: the formal rank difference of its representatives
@dataclass(frozen=True, slots=True)
class K0Class:
    value: int

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.value + other.value)


    def __sub__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.value - other.value)


    def __neg__(self) -> "K0Class":
        return K0Class(-self.value)


    def __int__(self) -> int:
        return self.value


    def __str__(self) -> str:
        return str(self.value)


def k0_class(P: AlgMatrix, ctx: JetContext, metrics: PerformanceMetrics | None = None) -> K0Class:
    if not is_projector(P, ctx):
        raise NotAProjectorError(f"input is not a projector modulo degree > {ctx.D}")
    try:
        rank = trivialize(P, ctx, metrics).rank
    except DiagonalizationError as e:
        # range basis has no unit rescaling in Q(i): the class is still the scalar rank
        rank = scalar_part(P).rank()
        logger.info("Exact trivialization unavailable (%s); using scalar-part rank %d", e, rank)
    logger.debug("K0 class of %dx%d projector: %d", P.N, P.N, rank)

    return K0Class(rank)


def equivalent(P: AlgMatrix, Q: AlgMatrix, ctx: JetContext) -> bool:
    return k0_class(P, ctx) == k0_class(Q, ctx)


_K0_OPS = ("add", "sub")


def k0_arith(op: str, a: K0Class, b: K0Class) -> K0Class:
    if op not in _K0_OPS:
        raise ValueError(f"op must be one of {_K0_OPS}, got '{op}'")
    if op == "add":
        return a + b

    return a - b
