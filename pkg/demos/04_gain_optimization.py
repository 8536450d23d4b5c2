"""Tune both controller architectures by simplex search on the tracking
cost J = IAE + lambda*integral(u^2) over a one-second step response, and
compare against the reference gain sets evaluated through the same cost.
"""

from stoprotor import OptProblem, PlantEta, cost, optimize

eta = PlantEta(0.0345)

for architecture, reference in (
        ("single", [0.004, 0.010, 0.561]),
        ("cascaded", [13.100, 0.002, 13.600, 0.036, 1.370e-5])):
    problem = OptProblem(architecture=architecture, eta=eta)
    j_ref = cost(problem, reference)
    result = optimize(problem, seed=0)
    names = problem.gain_names
    print(f"--- {architecture} loop on the yaw plant ---")
    print(f"reference gains cost J = {j_ref:.5f}")
    print(f"optimized cost        J = {result.cost:.5f} "
          f"({result.iterations} evaluations, "
          f"{result.diverged_evals} divergent candidates penalized)")
    print("optimized gains:", {n: round(g, 6) for n, g in zip(names, result.gains)})
    print(f"improvement over reference: {100.0 * (1 - result.cost / j_ref):.1f}%\n")
