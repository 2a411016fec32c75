import json
import logging
import os

from .transition import Trajectory


def trajectory_records(trajectory: Trajectory) -> list[dict]:
    return [
        {
            "level": trajectory.level.to_string(),
            "t": step,
            "state": [float(value) for value in transition.state],
            "action": transition.action,
            "reward": transition.reward,
            "value_est": transition.value_est,
            "advantage": transition.advantage,
            "log_prob_behavior": transition.log_prob_behavior,
            "done": transition.done,
            "adversarial": transition.adversarial,
            "value_target": transition.target,
        }
        for step, transition in enumerate(trajectory)
    ]


def dump_trajectories_jsonl(trajectories: list[Trajectory], file_path: str) -> None:
    """Writes one JSON object per transition, trajectories one after the other."""
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(file_path, "w", encoding="utf-8") as dump_file:
        for trajectory in trajectories:
            for record in trajectory_records(trajectory):
                dump_file.write(json.dumps(record, sort_keys=True) + "\n")

    logging.debug(f"Dumped {len(trajectories)} trajectories to {file_path}")
