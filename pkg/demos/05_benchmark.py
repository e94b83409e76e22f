"""
Workload benchmark
==================

The same request streams run against both systems: the descriptor-based
structure ("lftt") and the lock-based boosting baseline ("boost"). Throughput
counts only operations belonging to committed transactions.

The command-line entry point does the same thing at desk scale:

    txadjlist-bench --preset vertex-heavy --threads 1,2,4,8 --format csv
    txadjlist-bench --system boost --mix 20,20,25,25,10 --txns 5000 --out out.csv
"""

from txadjlist import WorkloadSpec, emit_report, run_bench
from txadjlist.bench import PRESETS

for system in ("lftt", "boost"):
    spec = WorkloadSpec(
        mix=PRESETS["vertex-heavy"],
        txn_size=4,
        txns_per_thread=500,   # desk-scale default is 20,000
        key_range=500,
        thread_counts=(1, 2),
        system=system,
        seed=1,
    )
    report = run_bench(spec)
    print(emit_report(report, "csv"))

# The edge-heavy preset shifts the mix toward sublist operations.
spec = WorkloadSpec(
    mix=PRESETS["edge-heavy"],
    txn_size=4,
    txns_per_thread=500,
    key_range=500,
    thread_counts=(2,),
    system="lftt",
    seed=1,
)
print(emit_report(run_bench(spec), "json"))
