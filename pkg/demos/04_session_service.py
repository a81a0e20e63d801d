"""The interactive protocol end to end, in process: session, run, poll, export.

The browser console (frontend/) talks to the same operations over HTTP; start
the host with `invroute serve --port 8734` to use it.

Run: python demos/04_session_service.py
"""
import time

from invroute import GeneratorConfig, generate, serialize_instance
from invroute.service import SessionService

service = SessionService()

inst = generate(
    GeneratorConfig(n_customers=15, horizon=12, mean_demand_range=(4, 18), vehicle_capacity=70, seed=9)
)
summary = service.create_session(serialize_instance(inst))
sid = summary["session_id"]
print(f"session {sid}: {summary['n_customers']} customers, "
      f"front of {len(summary['front'])} points in {summary['construction_ms']} ms")

# The decision maker clicks a front point; its outcome becomes the reference
# point and the weights freeze from the front visible at that moment.
rp = summary["front"][len(summary["front"]) // 2]
print(f"selected reference point g1={rp['g1']} g2={rp['g2']:.2f}")

run = service.start_run(sid, "guided", reference_point=(rp["g1"], rp["g2"]), evaluation_budget=4000)
rid = run["run_id"]
print(f"run {rid} started")

since = -1
while True:
    doc = service.poll_trace(sid, rid, since=since)
    for p in doc["points"]:
        ach = p.get("best_achievement")
        print(f"  eval {p['eval_index']:5d}  archive {p['archive_size']:3d}"
              + (f"  best {ach:.5f}" if ach is not None else "")
              + f"  in-cone {p.get('in_cone_count', 0)}")
        since = p["eval_index"]
    if doc["status"] != "running":
        print(f"finished: {doc['termination_reason']}, most preferred {doc['most_preferred']}")
        break
    time.sleep(0.1)

front_csv, _ = service.export(sid, rid, "front_csv")
print("\nfinal front snapshot:")
print(front_csv.decode())

plan, _ = service.export(sid, rid, "plan_json")
print(f"plan_json export: {len(plan)} bytes (full delivery plan of the most-preferred solution)")
