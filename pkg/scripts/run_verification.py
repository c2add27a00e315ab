"""Run every corpus verifier and print one verdict line per case.

Thin wrapper over the ``lelonglab verify`` machinery for use as a smoke
check after touching the numerics: exit status 0 means every theorem and
lemma verifier passed on the standard 16-case corpus.
"""

import argparse
import sys

from lelonglab import QuadratureConfig, VerifyConfig, run_corpus


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42, help="corpus jitter seed")
    parser.add_argument("--rel-tol", type=float, default=1e-9)
    parser.add_argument("--abs-tol", type=float, default=1e-12)
    parser.add_argument("--case", default=None, help="run a single case id")
    args = parser.parse_args(argv)

    cfg = VerifyConfig(quad=QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol))
    reports = run_corpus(seed=args.seed, cfg=cfg, only=args.case)
    for rep in reports:
        mark = "pass" if rep.verdict else "FAIL"
        print(f"{rep.case_id:<30} {rep.claim:<15} lam={rep.lam:+.4f}  {mark}")
        if not rep.verdict:
            print(f"    {rep.details}")
    failures = sum(1 for rep in reports if not rep.verdict)
    print(f"{len(reports) - failures}/{len(reports)} verifiers passed")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
