"""For each C0 code in a small grid, look for a 2+2 pattern it cannot correct.

    python scripts/separator_survey.py

Shows where the SD code falls short of PMDS, and confirms each witness
against the full PMDS verification failure list.
"""
from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, ParameterViolation, Variant
from pmds.verifier import Property, find_sd_pmds_separator, verify


def main():
    for text in ["gf2:4", "gf2:5", "gf2:6", "ring:17", "ring:19"]:
        alg = AlgebraSpec.parse(text)
        for m in range(1, 5):
            for n in range(3, 7):
                try:
                    params = CodeParams(m, n, Variant.SD_C0, alg)
                except ParameterViolation:
                    continue
                sep = find_sd_pmds_separator(params)
                report = verify(params, Property.PMDS)
                if sep is None:
                    note = "PMDS holds" if report.passed else "no witness but PMDS fails"
                    print(f"{str(params):24s} none      {note}")
                    continue
                confirmed = any(sep.positions <= f.positions for f in report.failures)
                print(f"{str(params):24s} {str(sep):16s} failures={len(report.failures):4d} "
                      f"confirmed={confirmed}")


if __name__ == "__main__":
    main()
