"""Semantic type prediction with per-sample analyst overrides.

A column of ISP names scores ambiguously (Virgin is a company, a
painting, and a person, depending on whom you ask).  Pinning the
{Virgin} sample to dbo:Company raises that type's column average above
the wrong front-runner.
"""

from wrangle.core import InteractionSet
from wrangle.semantic import (
    ConstantScorer,
    IsType,
    Sample,
    column_score,
    score_matrix,
    semantic_best,
    semantic_choices,
)


def main():
    samples = [
        Sample(1, ("Virgin",)),
        Sample(2, ("BT",)),
        Sample(3, ("Sky",)),
        Sample(4, ("Vodafone",)),
    ]
    scorer = ConstantScorer({"dbo:Work": 0.6, "dbo:Company": 0.5, "dbo:Person": 0.4})
    matrix = score_matrix(samples, scorer)

    h = InteractionSet()
    print("base column scores:")
    for type_name in matrix.catalog:
        print(f"    {type_name}: {column_score(matrix, h, type_name):.3f}")
    print("best:", semantic_best(matrix, h))

    print("\nfirst offered overrides:")
    for choice in semantic_choices(matrix, h, epsilon=0.3)[:4]:
        print("   ", choice.label)

    h = h.add(IsType(1, "dbo:Company"))
    print("\nafter pinning sample 1 {Virgin} to dbo:Company:")
    for type_name in matrix.catalog:
        print(f"    {type_name}: {column_score(matrix, h, type_name):.3f}")
    print("best:", semantic_best(matrix, h))


if __name__ == "__main__":
    main()
