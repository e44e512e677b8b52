"""
Losing MAPs mid-flight
======================

At t = 10 s a fraction of the MAPs drops out. The survivors keep running the
same feedback law; the recovery report compares the two seconds before the
failure with the last two seconds of the run.
"""

from mapswarm import FailureEvent, ScenarioConfig, run

for fraction in (0.1, 0.2, 0.3, 0.4):
    cfg = ScenarioConfig(seed=0, failure_events=[FailureEvent(10.0, fraction)])
    out = run(cfg, snapshots=False)
    reports = {r.metric: r for r in out.recovery[0]}
    post = out.window_mean()
    print(f"fraction {fraction}: alive={post.alive_maps}  fiedler={post.fiedler:.2e}  "
          f"coverage ratio={reports['coverage'].ratio:.3f}  "
          f"info ratio={reports['info_penetration'].ratio:.3f}")

# A ratio is None when the pre-failure mean was zero, e.g. the Fiedler value
# of a swarm that was already split before the failure.
