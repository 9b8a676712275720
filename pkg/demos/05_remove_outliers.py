"""Sweeping aggregate rows out of a table with the outlier assistant.

The aviation table mixes per-country incident counts with EU28 total
rows.  Rows holding numeric outliers contribute their categorical
values as filter choices; two selections remove every aggregate.
"""

from pathlib import Path

from wrangle import session_init

DATA = Path(__file__).parent.parent / "tests" / "data"


def main():
    session = session_init("outlier-rows", {"input": str(DATA / "aviation.csv")})

    rec = session.step()
    print("offered filters:")
    for index, choice in enumerate(rec.choices):
        print(f"    [{index}] {choice.label}")

    for label in ("Remove rows where c_geo = EU28", "Remove rows where c_regis = EU28"):
        rec = session.step()
        index = next(i for i, c in enumerate(rec.choices) if c.label == label)
        session.select(index)

    session.step()
    result = session.accept()
    print("\nscript:", result.script_text.replace("\n", "; "))
    remaining = result.output.table
    print(f"rows before: {session.data.table.n_rows}, after: {remaining.n_rows}")
    assert all("EU28" not in row for row in remaining.rows())
    print("no EU28 rows remain")


if __name__ == "__main__":
    main()
