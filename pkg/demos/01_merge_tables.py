"""Reconciling two mismatched tables with the datadiff assistant.

The input table has columns (City, Name, Count); the reference has
(Name, City).  The assistant proposes dropping Count, swapping the two
remaining columns and recoding Cardiff to London; the analyst disagrees
with the recode, picks the offered constraint, and accepts.
"""

from pathlib import Path

from wrangle import session_init

DATA = Path(__file__).parent.parent / "tests" / "data"


def show(recommendation):
    print("recommended script:")
    for line in recommendation.script.split("\n"):
        print("   ", line)
    print("preview:", recommendation.preview.header)
    for row in recommendation.preview.rows[:3]:
        print("   ", row)
    print("choices:")
    for index, choice in enumerate(recommendation.choices[:5]):
        print(f"    [{index}] {choice.label}")
    print()


def main():
    session = session_init(
        "datadiff",
        {"input": str(DATA / "toy_input.csv"), "reference": str(DATA / "toy_reference.csv")},
    )

    print("== first recommendation (no constraints yet)")
    rec = session.step()
    show(rec)

    print("== the analyst blocks the recode and re-runs")
    session.select(0)  # "Don't transform column 2"
    rec = session.step()
    show(rec)

    result = session.accept()
    print("== accepted; output columns:", result.output.table.header)
    print("   script:", result.script_text.replace("\n", "; "))


if __name__ == "__main__":
    main()
