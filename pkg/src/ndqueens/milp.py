"""Bridge from IpModel to scipy's mixed-integer solver (HiGHS).

Used as an alternative engine for instances where the pure-Python branch
and bound is too slow; every returned witness is re-checked against
verify_certificate by the callers.
"""

from __future__ import annotations

import numpy as np

from .geometry import Placement


def solve_ip(model, forced=(), time_limit=None):
    """Solve an IpModel.  Returns (status, objective, solution array, nodes).

    status: "optimal" | "infeasible" | "limit".  `forced` squares get a
    fixed lower bound of 1.
    """
    from scipy.optimize import LinearConstraint as SciLinearConstraint
    from scipy.optimize import milp

    nvars = len(model.variables)
    index = {v.name: i for i, v in enumerate(model.variables)}

    c = np.zeros(nvars)
    if model.objective == "maximize":
        c[:] = -1.0
    elif model.objective == "minimize":
        c[:] = 1.0

    rows = []
    cols = []
    lb = []
    ub = []
    for r, con in enumerate(model.constraints):
        for name in con.variables:
            rows.append((r, index[name]))
        if con.sense == "<=":
            lb.append(-np.inf)
            ub.append(con.rhs)
        elif con.sense == ">=":
            lb.append(con.rhs)
            ub.append(np.inf)
        else:
            lb.append(con.rhs)
            ub.append(con.rhs)
    mat = np.zeros((len(model.constraints), nvars))
    for r, col in rows:
        mat[r, col] = 1.0

    var_lb = np.zeros(nvars)
    var_ub = np.ones(nvars)
    board = model.board
    for q in forced:
        var_lb[index["x_" + "_".join(str(x) for x in q)]] = 1.0

    from scipy.optimize import Bounds

    options = {}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    res = milp(
        c=c,
        constraints=SciLinearConstraint(mat, np.array(lb), np.array(ub)),
        integrality=np.ones(nvars),
        bounds=Bounds(var_lb, var_ub),
        options=options,
    )
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    if res.status == 0:
        value = -res.fun if model.objective == "maximize" else res.fun
        return "optimal", value, res.x, nodes
    if res.status == 2:
        return "infeasible", 0.0, None, nodes
    # Status 1 is an iteration/time limit; HiGHS may still carry an
    # incumbent worth reporting as a bound.
    if res.x is not None:
        value = -res.fun if model.objective == "maximize" else res.fun
        return "limit", value, res.x, nodes
    return "limit", 0.0, None, nodes


def solution_placement(model, solution) -> Placement:
    queens = [
        model.variables[i].square
        for i, val in enumerate(solution)
        if val > 0.5
    ]
    return Placement(model.board, tuple(queens))
