#!/usr/bin/env python3
"""Build both approximant families to m = 40 and print error decay.

Usage: python scripts/approximant_tables.py [max_m] [digits]
"""

import sys

from gompertz import (PrecisionContext, approx_table, bigfloat_str,
                      delta_reference, error_decay_report)


def main():
    max_m = int(sys.argv[1]) if len(sys.argv) > 1 else 40
    digits = int(sys.argv[2]) if len(sys.argv) > 2 else 30
    ctx = PrecisionContext(digits)
    print(f"reference delta = {bigfloat_str(delta_reference(ctx), digits)}")
    for corollary, r in ((1, 0), (1, 1), (2, 1), (2, 2)):
        rows = approx_table(corollary, r, max_m, ctx)
        print(f"\nfamily {corollary}, r={r} (target sign {rows[0].target_sign}):")
        for row in rows:
            if row.m in (1, 2, 3, 5, 10, 20, max_m):
                err = ("undefined" if row.abs_error is None
                       else bigfloat_str(row.abs_error, 5))
                print(f"  m={row.m:3d}  a/b = {row.a}/{row.b}  |err| = {err}")
        report = error_decay_report(rows, pairs=[(10, max_m)])
        for m_from, m_to, gain in report.decade_gains:
            print(f"  error gain e_{m_from}/e_{m_to} = {bigfloat_str(gain, 5)}")


if __name__ == "__main__":
    main()
