"""Compare all five mechanisms on one synthetic benchmark.

Runs the evaluation grid (mechanism x epsilon, a few repeats each) on a small
sparse dataset and prints leaf-level summaries. The same grid is available
from the command line via `inftda sweep --config <json>`.
"""

from inftda import MECHANISMS, SynthSpec, gen_dataset, run_experiment


def main() -> None:
    table = gen_dataset(SynthSpec(kind="random", levels=2, sparsity=0.05, exponent=1.1), seed=9)
    print(
        f"dataset: {table.n} trips, {len(table)} occupied of "
        f"{table.universe_size} pairs\n"
    )

    reports = run_experiment(
        table,
        mechanisms=list(MECHANISMS),
        epsilons=[0.5, 2.0],
        repeats=5,
        seed=1,
    )

    print(f"{'mechanism':>16} {'eps':>4} {'leaf max err (mean)':>20} {'leaf fdr % (mean)':>18}")
    for rep in reports:
        leaf = rep.levels[-1]
        print(
            f"{rep.mechanism:>16} {rep.epsilon:>4g} "
            f"{leaf.err_mean:>20.1f} {leaf.fdr_mean:>18.1f}"
        )

    print("\nnotes: sh trades coverage for zero false positives; the flat")
    print("Gaussian answers every cell; top-down variants sit in between,")
    print("and the ascending visit order is what suppresses ghost cells.")


if __name__ == "__main__":
    main()
