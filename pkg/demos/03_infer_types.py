"""Column type inference over a column that fools the MAP estimate.

The column holds 480 copies of "0" plus a few 0.5/4/6 values and "?"
markers.  The dominant zeros pull the posterior to boolean, with the
genuine numbers flagged as anomalies; one not_type constraint gets the
correct float reading with "?" as the missing indicator.
"""

from pathlib import Path

from wrangle import session_init

DATA = Path(__file__).parent.parent / "tests" / "data"


def main():
    session = session_init("type-infer", {"input": str(DATA / "esa_amperage.csv")})

    rec = session.step()
    print("first reading: ", rec.script)
    print("offered fixes:")
    for index, choice in enumerate(rec.choices):
        print(f"    [{index}] {choice.label}")

    session.select(0)  # "column is not boolean"
    rec = session.step()
    print("after one interaction:", rec.script)

    result = session.accept()
    badge = result.output.annotations[0]
    print(f"accepted: type={badge.badge}, missing={badge.missing}, anomalies={badge.anomalies}")


if __name__ == "__main__":
    main()
