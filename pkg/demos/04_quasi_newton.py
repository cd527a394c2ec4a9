"""Box-constrained limited-memory BFGS on the relaxed objective.
=============================================================

The quasi-Newton backend minimizes the same sigmoid-relaxed loss with a
two-loop-recursion L-BFGS, projecting every trial point onto [-5, 5].
Its stopping rule is the relative function decrease, so the sweep
threshold maps directly onto its ftol; loose thresholds stop it early
and leave visibly worse energies (the most threshold-sensitive backend).
"""

import quboforge as qf


def main():
    q = qf.generate_qubo(500, seed=3)

    print(f"{'threshold':>10} {'lbfgs E':>12} {'iters':>6}    (best of 5 seeds)")
    for thr in (1e-1, 1e-2, 1e-4, 1e-6):
        results, best = qf.solve_repeated(
            q, qf.SolverConfig(backend="lbfgs", threshold=thr, seed=0), repeats=5
        )
        iters = round(sum(r.steps for r in results) / len(results))
        print(f"{thr:>10g} {best.energy:>12.2f} {iters:>6d}")

    # Side-by-side with the other backends at the tightest threshold.
    print("\nbackend comparison at threshold 1e-6:")
    for backend in qf.BACKENDS:
        _, best = qf.solve_repeated(q, qf.SolverConfig(backend=backend, threshold=1e-6, seed=0), repeats=5)
        print(f"  {backend:>6}: best-of-5 E = {best.energy:10.2f}")


if __name__ == "__main__":
    main()
