#!/usr/bin/env python3
"""Write fixture logs for the browser client's tests.

The field fixtures carry per-tick score checkpoints (including the
territory classification) so the client's own classifier can be checked
tick by tick against the engine's; the fixed-technique fixture is a full
trial for the replay viewer.
"""
import argparse
import sys
from pathlib import Path

from hrcsim import HumanModel
from hrcsim.config import DEFAULT_POLICY, PolicyParams
from hrcsim.engine import run_trial
from hrcsim.workspace import TaskConfig, generate_scenario

# The gaze fixture uses sweep gaze (the hotspot pans the table, so the
# windowed means keep moving) and split classification thresholds so all
# three region codes occur: means decay through the robot cut line later
# than through the user one, leaving a visible group band in between.
GAZE_PARAMS = PolicyParams(classify_theta_user=0.25,
                           classify_theta_robot=0.12)

# (technique, task, placement, seed, tick_limit, checkpoints, model, params)
FIXTURES = [
    ("gaze", "coupled", "scattered", 3, 600, True,
     HumanModel(gaze_mode="sweep"), GAZE_PARAMS),
    ("proximity", "decoupled", "sorted", 4, 300, True,
     HumanModel(), DEFAULT_POLICY),
    ("fixed", "coupled", "scattered", 5, 12000, False,
     HumanModel(), DEFAULT_POLICY),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="frontend/tests/fixtures",
                    help="directory for the fixture logs")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for (technique, task, placement, seed, tick_limit, fields, model,
         params) in FIXTURES:
        cfg = TaskConfig(task_type=task, placement=placement, seed=seed)
        world = generate_scenario(cfg)
        _, log = run_trial(world, model, technique, params=params,
                           tick_limit=tick_limit, checkpoint_fields=fields)
        path = out / f"{technique}_{task}_{placement}_{seed}.jsonl"
        log.write(path)
        print(f"{path} ({len(log.entries)} entries)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
