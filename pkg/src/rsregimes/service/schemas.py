"""Request and response models for the service and the CLI client.

Distributions travel as tagged records discriminated on "family", matching
the config-file encoding, so the same JSON works in both places.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field

from ..distributions import (Bernoulli, Constant, DistributionSpec,
                             Exponential, Normal, Shifted, SystemPair)


class NormalModel(BaseModel):
    family: Literal["normal"]
    mean: float
    stddev: float = Field(ge=0)


class ExponentialModel(BaseModel):
    family: Literal["exponential"]
    mean: float = Field(gt=0)


class BernoulliModel(BaseModel):
    family: Literal["bernoulli"]
    success_prob: float = Field(ge=0, le=1)


class ConstantModel(BaseModel):
    family: Literal["constant"]
    value: float


class ShiftedModel(BaseModel):
    family: Literal["shifted"]
    base: "DistributionModel"
    offset: float


DistributionModel = Annotated[
    Union[NormalModel, ExponentialModel, BernoulliModel, ConstantModel, ShiftedModel],
    Field(discriminator="family"),
]

ShiftedModel.model_rebuild()


def to_spec(model) -> DistributionSpec:
    if isinstance(model, NormalModel):
        return Normal(model.mean, model.stddev)
    if isinstance(model, ExponentialModel):
        return Exponential(model.mean)
    if isinstance(model, BernoulliModel):
        return Bernoulli(model.success_prob)
    if isinstance(model, ConstantModel):
        return Constant(model.value)
    return Shifted(to_spec(model.base), model.offset)


class PairModel(BaseModel):
    dist1: DistributionModel
    dist2: DistributionModel
    delta: float = Field(gt=0)

    def to_pair(self) -> SystemPair:
        return SystemPair(to_spec(self.dist1), to_spec(self.dist2), self.delta)


class PolicyModel(BaseModel):
    kind: Literal["optimal", "equal", "independent"]
    anchor_b: Optional[float] = None


class PlanRequest(BaseModel):
    pair: PairModel
    alpha: float = Field(gt=0, lt=1)
    regime: Literal["clt", "ld", "md"]
    policy: PolicyModel


class PlanResponse(BaseModel):
    regime: str
    policy: str
    n1: int
    n2: int
    raw1: float
    raw2: float


class FixedProcedureModel(BaseModel):
    kind: Literal["fixed"] = "fixed"
    regime: Literal["clt", "ld", "md"]
    policy: PolicyModel


class SequentialProcedureModel(BaseModel):
    kind: Literal["sequential"] = "sequential"
    rule: Literal["clt", "md", "clt_independent", "md_independent"]


ProcedureModel = Annotated[
    Union[FixedProcedureModel, SequentialProcedureModel],
    Field(discriminator="kind"),
]


class EstimateRequest(BaseModel):
    pair: PairModel
    alpha: float = Field(gt=0, lt=1)
    procedure: ProcedureModel
    replications: int = Field(ge=1)
    master_seed: int = Field(ge=0, lt=2 ** 64)
    workers: Optional[int] = Field(default=None, ge=1)


class EstimateResponse(BaseModel):
    regime: str
    policy: str
    # Planned counts for fixed procedures; mean stopping times for sequential.
    n1: float
    n2: float
    incorrect_count: int
    replications: int
    pis_estimate: float
    std_error: float
    master_seed: int
    wall_time_s: float


class TableRequest(BaseModel):
    which: Literal[1, 2]
    replications: int = Field(default=1_000_000, ge=1)
    master_seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    workers: Optional[int] = Field(default=None, ge=1)


class TableRowModel(BaseModel):
    regime: str
    n: int
    pis: float
    se: float
    published_pis: float
    published_se: float
    flag: str


class TableResponse(BaseModel):
    which: int
    alpha: float
    replications: int
    master_seed: int
    rows: list[TableRowModel]


class CheckRequest(BaseModel):
    topic: Literal["lemma1", "lemma2", "edgeworth", "bahadur", "identities"]


class CheckItemModel(BaseModel):
    name: str
    passed: bool
    detail: str


class CheckResponse(BaseModel):
    topic: str
    passed: bool
    items: list[CheckItemModel]
