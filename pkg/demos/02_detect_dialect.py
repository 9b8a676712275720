"""CSV dialect detection, including a case the consistency measure
gets wrong on its own.

The first file packs JSON into its first column: splitting on colons
looks *more* consistent than the truth, because JSON is not a cell type
the scorer knows.  One fix_delimiter interaction corrects it.  The
second file is tab-separated, misread as comma-separated until the
analyst fixes the delimiter.
"""

from pathlib import Path

from wrangle import InteractionSet
from wrangle.dialect import FixComponent, dialect_best, rank_dialects
from wrangle.table import read_text_file

DATA = Path(__file__).parent.parent / "tests" / "data"


def main():
    text = read_text_file(DATA / "json_cells.csv")
    best, ranking = dialect_best(text, InteractionSet())
    print("== json-in-cells file")
    print("auto-detected:", best.render())
    print("top of the ranking:")
    for scored in ranking[:3]:
        print(f"    {scored.consistency:6.3f}  {scored.dialect.render()}")

    fixed, _ = dialect_best(text, InteractionSet((FixComponent("delimiter", ","),)))
    print("after fix_delimiter(,):", fixed.render())
    print()

    colors = read_text_file(DATA / "colors.csv")
    best, _ = dialect_best(colors, InteractionSet())
    print("== tab-separated colors file")
    print("auto-detected:", best.render(), "(wrong: commas live inside the cells)")
    fixed, _ = dialect_best(colors, InteractionSet((FixComponent("delimiter", "\t"),)))
    print("after fix_delimiter(tab):", fixed.render())


if __name__ == "__main__":
    main()
