"""Show the synchronized-operator constant bundle at both scales.

At the default path-scheme bound the constants are astronomical: they are
kept symbolic, and only their structure (identities, segment count, bit
growth per nesting level) is inspected.  At a scaled-down bound everything
materializes, the core of a computation tree can be listed level by level,
and the shift correspondence between trees at counter v and v + period can
be replayed against real level sets.
"""

from ocasync import bignum, corpus
from ocasync.oracle import check_shift_periodicity, default_audit_counters
from ocasync.periodicity import (
    TpPair, core_levels, segment_start, shift_map, ua_constants,
)


def main():
    print("== default scheme bound, nested synchronized operators")
    for n in (3, 4, 5):
        prev = TpPair(0, 1)
        row = []
        for _ in range(3):
            bundle = ua_constants(n, prev.t, prev.p)
            prev = bundle.pair
            row.append(bignum.bit_length(bundle.period))
        print(f"  n={n}: b={bundle.b}, segments={bundle.m + 1}, "
              f"period bits per depth ~ {row}")

    print("\n== scaled bundle (b = 1) on the countdown machine")
    oca = corpus.load("countdown")
    bundle = ua_constants(oca.n_states, 0, 1, b_override=1)
    print(f"  B={bundle.B} period={bundle.period} "
          f"segment-threshold={bundle.seg_threshold} "
          f"counter-threshold={bundle.counter_threshold}")
    v = default_audit_counters(bundle)[0]
    print(f"  core at v={v}: {core_levels(v, bundle)}")
    for i in range(bundle.m + 1):
        print(f"    segment {i} starts at {segment_start(i, v, bundle)}")
    for level in core_levels(v, bundle):
        print(f"    shift({level}) = {shift_map(level, v, bundle)}")

    report = check_shift_periodicity(oca, bundle)
    print(f"  audit summary: {report.summary()}")
    for fail in report.failures()[:3]:
        print(f"    reported failure: state={oca.state_names[fail.state]} "
              f"v={fail.counter} level={fail.length} [{fail.implication}] "
              f"{fail.detail}")


if __name__ == "__main__":
    main()
