"""External defense client: adversarially trains on the task's dataset and
returns a hardened weight file over the line-JSON protocol.

Usage: python -m maestro.refclients.defense_client [--seed N] [--mix-ratio R]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from maestro.attacks.types import AttackBudget
from maestro.defense.adversarial import DefenseConfig, adversarial_train
from maestro.nn.data import load_idx
from maestro.nn.spec import ModelSpec
from maestro.nn.train import TrainConfig
from maestro.nn.weights_io import save_weights


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--mix-ratio", type=float, default=0.5)
    parser.add_argument("--epochs", type=int, default=10)
    args = parser.parse_args()

    task = json.loads(sys.stdin.readline())
    if task.get("type") != "defense_task":
        raise SystemExit(f"expected defense_task, got {task.get('type')}")
    data = load_idx(task["train_images"], task["train_labels"], int(task["num_classes"]))
    spec = ModelSpec.from_dict(task["model"])
    cfg = DefenseConfig(
        inner_attack="pgd",
        inner_budget=AttackBudget(epsilon=float(task["epsilon"])),
        mix_ratio=args.mix_ratio,
        train=TrainConfig(learning_rate=0.05, epochs=args.epochs, batch_size=32, seed=args.seed),
    )
    hardened = adversarial_train(spec, data, cfg)
    out = Path(task["output_dir"]) / "hardened.weights"
    save_weights(hardened.params, out)
    sys.stdout.write(json.dumps({"type": "result", "weights_path": str(out)}) + "\n")
    sys.stdout.flush()


if __name__ == "__main__":
    main()
