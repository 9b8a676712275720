"""How many analyst interactions does a wrangling task take?

Generated base tables are split in half; one half is corrupted
(columns reordered plus two draws from the corruption pool) and a
simulated analyst drives the assistant back to the known ground truth
by always selecting the choice contradicting the first discrepancy.
"""

from wrangle import evaluation


def main():
    print("== reorder + delete/insert corruptions (40 cases)")
    traces = evaluation.run_datadiff_cases(40, seed=7, kinds=evaluation.SCHEMA_CORRUPTIONS)
    print(evaluation.report(traces).render())

    print("\n== full corruption pool, recode and linear included (40 cases)")
    traces = evaluation.run_datadiff_cases(40, seed=7, kinds=evaluation.ALL_CORRUPTIONS)
    print(evaluation.report(traces).render())

    print("\n== dialect detection against randomized files (30 cases)")
    traces = evaluation.run_dialect_cases(30, seed=7)
    print(evaluation.report(traces).render())
    print("(a dialect has three components, so three interactions always suffice)")


if __name__ == "__main__":
    main()
