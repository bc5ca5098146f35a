"""Exhaustive search over all plane subsets of PG(3,2), with a breakdown of the survivors."""
from collections import Counter

from pg3quad.charverify import search_q2, verify_theorem
from pg3quad.gf import field_of_order
from pg3quad.quadric import QuadricKind, all_forms, classify


def main():
    result = search_q2()
    kinds = Counter(classify(f).kind.value for f in all_forms(field_of_order(2)))
    print(f"subsets scanned      {result.scanned}")
    print(f"pass (P1)            {result.p1_survivors}")
    print(f"pass (P1) and (P2)   {len(result.survivors)}")
    print("form census over GF(2):")
    for kind in QuadricKind:
        print(f"  {kind.value:18} {kinds[kind.value]}")
    forms = Counter(verify_theorem(f).reconstructed_form for f in result.survivors)
    print(f"distinct reconstructed forms {len(forms)}")
    print(f"survivors match census       {result.matches}")


if __name__ == "__main__":
    main()
