"""Request handlers shared by the HTTP service and the in-process CLI."""

from __future__ import annotations

from ..config import PUBLISHED_PIS, builtin_suite
from ..checks import run_checks
from ..montecarlo import (ExperimentConfig, FixedProcedure,
                          SequentialProcedure, coverage_flag, estimate_pis)
from ..regimes import AllocationPolicy, plan_for
from .schemas import (CheckItemModel, CheckRequest, CheckResponse,
                      EstimateRequest, EstimateResponse, PlanRequest,
                      PlanResponse, TableRequest, TableResponse,
                      TableRowModel)

__all__ = ["handle_plan", "handle_estimate", "handle_table", "handle_check"]


def _policy(model) -> AllocationPolicy:
    return AllocationPolicy(model.kind, model.anchor_b)


def handle_plan(request: PlanRequest) -> PlanResponse:
    pair = request.pair.to_pair()
    plan = plan_for(pair, request.alpha, request.regime, _policy(request.policy))
    return PlanResponse(regime=plan.regime, policy=plan.policy.kind, n1=plan.n1,
                        n2=plan.n2, raw1=plan.raw1, raw2=plan.raw2)


def handle_estimate(request: EstimateRequest) -> EstimateResponse:
    pair = request.pair.to_pair()
    proc = request.procedure
    if proc.kind == "fixed":
        plan = plan_for(pair, request.alpha, proc.regime, _policy(proc.policy))
        procedure = FixedProcedure(plan)
        regime, policy = plan.regime, plan.policy.kind
        n1, n2 = float(plan.n1), float(plan.n2)
    else:
        procedure = SequentialProcedure(proc.rule, request.alpha)
        regime, policy = proc.rule, "sequential"
        n1 = n2 = 0.0
    config = ExperimentConfig(pair, procedure, request.replications,
                              request.master_seed)
    result = estimate_pis(config, request.workers)
    if proc.kind == "sequential":
        n1, n2 = result.mean_stop1, result.mean_stop2
    return EstimateResponse(
        regime=regime, policy=policy, n1=n1, n2=n2,
        incorrect_count=result.incorrect_count,
        replications=result.replications,
        pis_estimate=result.pis_estimate, std_error=result.std_error,
        master_seed=result.master_seed, wall_time_s=result.wall_time_s,
    )


def handle_table(request: TableRequest) -> TableResponse:
    """Reproduce one of the built-in comparison tables at equal allocation."""
    name = f"table{request.which}"
    suite = builtin_suite(name)
    pair = suite.pairs[name]
    seed = suite.master_seed if request.master_seed is None else request.master_seed
    published = PUBLISHED_PIS[name]
    rows = []
    for row in suite.rows:
        plan = plan_for(pair, suite.alpha, row.regime, row.policy)
        config = ExperimentConfig(pair, FixedProcedure(plan),
                                  request.replications, seed)
        result = estimate_pis(config, request.workers)
        ref_pis, ref_se = published[row.regime]
        rows.append(TableRowModel(
            regime=row.regime, n=plan.n1, pis=result.pis_estimate,
            se=result.std_error, published_pis=ref_pis, published_se=ref_se,
            flag=coverage_flag(result.pis_estimate, result.std_error,
                               suite.alpha),
        ))
    return TableResponse(which=request.which, alpha=suite.alpha,
                         replications=request.replications, master_seed=seed,
                         rows=rows)


def handle_check(request: CheckRequest) -> CheckResponse:
    results = run_checks(request.topic)
    items = [CheckItemModel(name=r.name, passed=r.passed, detail=r.detail)
             for r in results]
    return CheckResponse(topic=request.topic,
                         passed=all(r.passed for r in results), items=items)
